"""parktheory: executable residuated Park theories over finite lattices and tree languages."""

__version__ = "0.1.0"

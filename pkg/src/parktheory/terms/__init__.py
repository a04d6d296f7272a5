"""Sorted terms: syntax, sorts, evaluation and the dagger/star translations."""

from .ast import (Base, Bot, Comp, Dagger, Id, Inj, Join, Letter, Pair, Resid, Signature,
                  Star, Sum, Term, Tup, Zero, sort_of)
from .evaluate import Interpretation, evaluate
from .syntax import format_term, parse_signature, parse_term
from .translate import tau_term, to_dagger_form, to_star_form

__all__ = ["Base", "Bot", "Comp", "Dagger", "Id", "Inj", "Join", "Letter", "Pair", "Resid",
           "Signature", "Star", "Sum", "Term", "Tup", "Zero", "sort_of", "Interpretation",
           "evaluate", "format_term", "parse_signature", "parse_term", "tau_term",
           "to_dagger_form", "to_star_form"]

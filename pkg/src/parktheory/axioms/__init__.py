"""The law catalog and the counterexample search over backends."""

from .check import (CheckReport, Counterexample, check_catalog, check_schema, sample_morphism,
                    validate)
from .schemas import CATALOG, FALSE_DEMO, Schema, catalog, lookup

__all__ = ["CheckReport", "Counterexample", "check_catalog", "check_schema", "sample_morphism",
           "validate", "CATALOG", "FALSE_DEMO", "Schema", "catalog", "lookup"]

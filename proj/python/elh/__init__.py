from ._core import (
    ABox,
    BudgetExceeded,
    Concept,
    ConfigurationError,
    ContractViolation,
    Error,
    ParseError,
    Query,
    TBox,
    UnsupportedQueryError,
    build_batch,
    check_bisim_preservation,
    cyclic_shattered,
    entails,
    entails_ci,
    inseparable,
    learn,
    learn_from_batch,
    pac_run,
    sample_count,
)

__all__ = [
    "ABox",
    "BudgetExceeded",
    "Concept",
    "ConfigurationError",
    "ContractViolation",
    "Error",
    "ParseError",
    "Query",
    "TBox",
    "UnsupportedQueryError",
    "build_batch",
    "check_bisim_preservation",
    "cyclic_shattered",
    "entails",
    "entails_ci",
    "inseparable",
    "learn",
    "learn_from_batch",
    "pac_run",
    "sample_count",
]

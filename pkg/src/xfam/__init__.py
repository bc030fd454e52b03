"""Cross-t-intersecting families: shifting, generating sets, exact search and audits."""

from .core import (
    CapacityError,
    DomainError,
    FamilyPair,
    ParameterError,
    UniformFamily,
    is_cross_t_intersecting,
    is_t_intersecting,
    parse_family,
    format_family,
)

__version__ = "0.1.0"

"""Certified stability checks for monoid-action dynamical systems.

Thin re-export of the compiled module. Rationals cross the boundary as
fractions.Fraction; states are ints (finite spaces), coordinate sequences
(Euclidean spaces) or the names of points declared in a system file.
"""

from lyapkit._core import (
    DeltaCertificate,
    Factorization,
    LyapkitError,
    LyapunovCertificate,
    NonConvergentError,
    NotInvertibleError,
    ParseError,
    Scope,
    System,
    ValidationError,
    Verdict,
    __version__,
    check_attractor,
    check_common_quadratic,
    check_global,
    check_monovariant,
    compose_factorization,
    converse_construct,
    delta_from_lyapunov,
    factorize,
    file_digest,
    is_equilibrium,
    load_certificate,
    parse_certificate,
    quadratic_to_lyapunov,
    solve_discrete_lyapunov,
    verify_delta,
    verify_factorization,
    verify_lyapunov,
)

__all__ = [
    "DeltaCertificate",
    "Factorization",
    "LyapkitError",
    "LyapunovCertificate",
    "NonConvergentError",
    "NotInvertibleError",
    "ParseError",
    "Scope",
    "System",
    "ValidationError",
    "Verdict",
    "__version__",
    "check_attractor",
    "check_common_quadratic",
    "check_global",
    "check_monovariant",
    "compose_factorization",
    "converse_construct",
    "delta_from_lyapunov",
    "factorize",
    "file_digest",
    "is_equilibrium",
    "load_certificate",
    "parse_certificate",
    "quadratic_to_lyapunov",
    "solve_discrete_lyapunov",
    "verify_delta",
    "verify_factorization",
    "verify_lyapunov",
]

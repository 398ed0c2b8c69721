"""Multiplicative theta function and elliptic shifted factorials.

The atomic quantities of the library are

    theta(z; p) = prod_{j>=0} (1 - p^j z)(1 - p^{j+1}/z),        |p| < 1,

and the two-branch shifted factorial with step q

    (z)_k = theta(z) theta(qz) ... theta(q^{k-1} z),                  k >= 0,
    (z)_k = 1 / [theta(q^k z) theta(q^{k+1} z) ... theta(q^{-1} z)],  k < 0.

theta vanishes exactly on z in p^Z, which is where every pole handled by
the rest of the library ultimately comes from.

Truncation contract: factors of the infinite product are included until
both |p^j z| and |p^{j+1}/z| fall below the policy cutoff
0.01 * epsilon * u (u = double-precision unit roundoff), so the neglected
tail is below ~1e-18 relative for |p| <= 0.9 at the default epsilon.  The
cutoff is argument-aware and deterministic: the same (z, p, policy) always
multiplies the same factors.

p = 0 short-circuits to the exact trigonometric value 1 - z and touches
none of the truncation machinery.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .errors import (
    NonFiniteError,
    PochhammerPoleError,
    ThetaDomainError,
    TruncationBudgetError,
)

#: Unit roundoff of IEEE double precision.
UNIT_ROUNDOFF = 2.220446049250313e-16


def ipow(base: complex, exponent: int) -> complex:
    """base**exponent by binary exponentiation from an exact integer exponent.

    Negative exponents invert once at the end, so q^(-N) and q^(binom(k,2))
    are reproducible products of the same squarings everywhere.
    """
    if exponent < 0:
        return 1.0 / ipow(base, -exponent)
    result = complex(1.0)
    b = complex(base)
    e = exponent
    while e:
        if e & 1:
            result *= b
        e >>= 1
        if e:
            b *= b
    return result


@dataclass(frozen=True)
class TruncationPolicy:
    """Deterministic cutoff rule for the theta product tail.

    epsilon scales the tail cutoff (smaller = more factors); max_terms
    bounds the number of factors per sub-product and turns |p| -> 1
    non-convergence into an error instead of a hang.
    """

    epsilon: float = 0.01
    max_terms: int = 1000

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")

    @property
    def cutoff(self) -> float:
        """Tail threshold on |p^j z| and |p^{j+1}/z|."""
        return 0.01 * self.epsilon * UNIT_ROUNDOFF


@dataclass(frozen=True)
class EllipticNome:
    """The fixed pair (p, q) plus the truncation policy used by theta.

    |p| < 1 is required; p = 0 is the permitted trigonometric degeneration.
    q only needs to be nonzero (the sums the library evaluates are finite).
    """

    p: complex
    q: complex
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        p = complex(self.p)
        q = complex(self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if abs(p) >= 1.0:
            raise ValueError(f"|p| must be < 1, got |p| = {abs(p)}")
        if q == 0:
            raise ValueError("q must be nonzero")


def theta(z: complex, nome: EllipticNome) -> complex:
    """Evaluate theta(z; p) under the nome's truncation policy."""
    p = nome.p
    if p == 0:
        return 1.0 - complex(z)
    z = complex(z)
    if z == 0:
        raise ThetaDomainError("theta(0) is undefined for p != 0")
    cutoff = nome.truncation.cutoff
    inv_z = 1.0 / z
    result = complex(1.0)
    pj = complex(1.0)
    for _ in range(nome.truncation.max_terms):
        t1 = pj * z
        t2 = pj * p * inv_z
        if abs(t1) < cutoff and abs(t2) < cutoff:
            if not cmath.isfinite(result):
                raise NonFiniteError(f"theta({z}) overflowed")
            return result
        result *= (1.0 - t1) * (1.0 - t2)
        pj *= p
    raise TruncationBudgetError(
        f"theta product needs more than {nome.truncation.max_terms} factors "
        f"(|p| = {abs(p):.6g}, |z| = {abs(z):.6g})"
    )


def theta_product(zs, nome: EllipticNome) -> complex:
    """theta(z_1) * ... * theta(z_m); the empty product is 1."""
    result = complex(1.0)
    for z in zs:
        result *= theta(z, nome)
    return result


def elliptic_pochhammer(z: complex, k: int, nome: EllipticNome) -> complex:
    """The shifted factorial (z)_k with step q, for any integer k.

    For k < 0 a vanishing reciprocal factor raises PochhammerPoleError
    carrying the index of the offending factor, so callers can resample
    around the pole instead of aborting.
    """
    z = complex(z)
    if z == 0:
        raise ThetaDomainError("(0)_k is undefined")
    q = nome.q
    if k == 0:
        return complex(1.0)
    if k > 0:
        result = complex(1.0)
        w = z
        for _ in range(k):
            result *= theta(w, nome)
            w *= q
        if not cmath.isfinite(result):
            raise NonFiniteError(f"({z})_{k} overflowed")
        return result
    # k < 0: reciprocal of theta(q^k z) ... theta(q^{-1} z)
    denominator = complex(1.0)
    w = ipow(q, k) * z
    for j in range(k, 0):
        factor = theta(w, nome)
        if factor == 0:
            raise PochhammerPoleError(z, k, j)
        denominator *= factor
        w *= q
    result = 1.0 / denominator
    if not cmath.isfinite(result):
        raise NonFiniteError(f"({z})_{k} overflowed")
    return result


def pochhammer_product(zs, k: int, nome: EllipticNome) -> complex:
    """(z_1)_k * ... * (z_m)_k; the empty product is 1."""
    result = complex(1.0)
    for z in zs:
        result *= elliptic_pochhammer(z, k, nome)
    return result

"""Shared structural kernels: index enumeration, the A-type theta-Vandermonde
ratio, and two classical theta interpolation identities.

Every multivariable sum in the catalog carries the factor

    delta_ratio(z, x) = prod_{i<j} q^{x_i} theta(q^{x_j - x_i} z_j / z_i)
                                   / theta(z_j / z_i),

the ratio of shifted to unshifted Vandermonde-like theta products.  An
equivalent form, delta_ratio_alt, rewrites it through shifted factorials:

    (-1)^|x| q^(-binom(|x|,2) - |x|)
        prod_{i,j} (q z_i/z_j)_{x_i} / (q^{-x_j} z_i/z_j)_{x_i}.

The two agree wherever both are pole-free; the library evaluates identities
with delta_ratio (fewer spurious poles) and keeps the alternate form as a
cross-check.

The interpolation identities: a partial-fraction sum

    sum_k prod_j theta(z_k/b_j) / [theta(z_k/t) prod_{j != k} theta(z_k/z_j)]
        = prod_j theta(b_j/t) / prod_j theta(z_j/t)

valid when t z_1...z_n = b_1...b_{n+1}, and the two-point interpolation for
functions of the form f(w) = C theta(aw, a/w):

    f(w) = f(b) theta(cw, c/w)/theta(cb, c/b)
         + f(c) theta(bw, b/w)/theta(bc, b/c).

Index enumeration is lazy and in a fixed total order so that runs replay
identically.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence

from .errors import BalancingError, PoleError
from .theta import EllipticNome, elliptic_pochhammer, ipow, theta

# ---------------------------------------------------------------------------
# A-type ratio
# ---------------------------------------------------------------------------


def delta_ratio(z: Sequence[complex], x: Sequence[int], nome: EllipticNome) -> complex:
    """Ratio of the shifted to the unshifted theta Vandermonde over (z, x)."""
    if len(z) != len(x):
        raise ValueError(f"dimension mismatch: {len(z)} variables, {len(x)} indices")
    q = nome.q
    n = len(z)
    result = complex(1.0)
    for i in range(n - 1):
        for j in range(i + 1, n):
            ratio = z[j] / z[i]
            den = theta(ratio, nome)
            if den == 0:
                raise PoleError(f"theta(z[{j}]/z[{i}])")
            result *= ipow(q, x[i]) * theta(ipow(q, x[j] - x[i]) * ratio, nome) / den
    return result


def delta_ratio_alt(z: Sequence[complex], x: Sequence[int], nome: EllipticNome) -> complex:
    """The shifted-factorial form of delta_ratio (cross-check evaluator)."""
    if len(z) != len(x):
        raise ValueError(f"dimension mismatch: {len(z)} variables, {len(x)} indices")
    q = nome.q
    n = len(z)
    total = sum(x)
    sign = -1.0 if total % 2 else 1.0
    result = sign * ipow(q, -(math.comb(total, 2) + total))
    for i in range(n):
        for j in range(n):
            ratio = z[i] / z[j]
            num = elliptic_pochhammer(q * ratio, x[i], nome)
            den = elliptic_pochhammer(ipow(q, -x[j]) * ratio, x[i], nome)
            if den == 0:
                raise PoleError(f"(q^-x[{j}] z[{i}]/z[{j}])_x[{i}]")
            result *= num / den
    return result


# ---------------------------------------------------------------------------
# Interpolation identities
# ---------------------------------------------------------------------------


def _check_partial_fraction_balance(zs, bs, t):
    if len(bs) != len(zs) + 1:
        raise ValueError(f"need len(bs) == len(zs) + 1, got {len(bs)} and {len(zs)}")
    left = complex(t)
    for z in zs:
        left *= z
    right = complex(1.0)
    for b in bs:
        right *= b
    scale = max(abs(left), abs(right))
    if abs(left - right) > 1e-12 * scale:
        raise BalancingError(
            f"t*z_1...z_n = b_1...b_(n+1) violated: {left} vs {right}"
        )


def tpf_lhs(zs: Sequence[complex], bs: Sequence[complex], t: complex,
            nome: EllipticNome) -> complex:
    """Partial-fraction sum side of the balanced theta interpolation identity."""
    _check_partial_fraction_balance(zs, bs, t)
    total = complex(0.0)
    n = len(zs)
    for k in range(n):
        zk = zs[k]
        num = complex(1.0)
        for b in bs:
            num *= theta(zk / b, nome)
        den = theta(zk / t, nome)
        if den == 0:
            raise PoleError(f"theta(z[{k}]/t)")
        for j in range(n):
            if j == k:
                continue
            factor = theta(zk / zs[j], nome)
            if factor == 0:
                raise PoleError(f"theta(z[{k}]/z[{j}])")
            den *= factor
        total += num / den
    return total


def tpf_rhs(zs: Sequence[complex], bs: Sequence[complex], t: complex,
            nome: EllipticNome) -> complex:
    """Closed product side of the balanced theta interpolation identity."""
    _check_partial_fraction_balance(zs, bs, t)
    num = complex(1.0)
    for b in bs:
        num *= theta(b / t, nome)
    den = complex(1.0)
    for z in zs:
        factor = theta(z / t, nome)
        if factor == 0:
            raise PoleError("theta(z[j]/t)")
        den *= factor
    return num / den


def weierstrass_rhs(f_b: complex, f_c: complex, b: complex, c: complex,
                    w: complex, nome: EllipticNome) -> complex:
    """Two-point interpolation of f(w) = C theta(aw, a/w) from f(b), f(c)."""
    den_b = theta(c * b, nome) * theta(c / b, nome)
    den_c = theta(b * c, nome) * theta(b / c, nome)
    if den_b == 0 or den_c == 0:
        raise PoleError("theta(bc) or theta(b/c): degenerate interpolation nodes")
    term_b = f_b * theta(c * w, nome) * theta(c / w, nome) / den_b
    term_c = f_c * theta(b * w, nome) * theta(b / w, nome) / den_c
    return term_b + term_c


# ---------------------------------------------------------------------------
# Index enumeration
# ---------------------------------------------------------------------------


def compositions_exact(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All x in Z_{>=0}^parts with sum(x) == total, first entry descending.

    Lazily yields count = binom(total + parts - 1, parts - 1) tuples, each
    exactly once, in a stable total order.
    """
    if total < 0:
        raise ValueError(f"total must be >= 0, got {total}")
    if parts < 1:
        raise ValueError(f"parts must be >= 1, got {parts}")
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in compositions_exact(total - head, parts - 1):
            yield (head,) + tail


def compositions_bounded(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All x in Z_{>=0}^parts with sum(x) <= total, by increasing weight.

    Count = binom(total + parts, parts).
    """
    if total < 0:
        raise ValueError(f"total must be >= 0, got {total}")
    for weight in range(total + 1):
        yield from compositions_exact(weight, parts)


def box_indices(limits: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All x with 0 <= x_i <= limits_i, last coordinate fastest.

    Count = prod(limits_i + 1).
    """
    limits = tuple(limits)
    if not limits:
        raise ValueError("limits must be nonempty")
    if any(m < 0 for m in limits):
        raise ValueError(f"limits must be >= 0, got {limits}")
    x = [0] * len(limits)
    while True:
        yield tuple(x)
        i = len(limits) - 1
        while i >= 0 and x[i] == limits[i]:
            x[i] = 0
            i -= 1
        if i < 0:
            return
        x[i] += 1

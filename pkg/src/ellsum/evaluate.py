"""Left- and right-hand-side evaluators for every identity in the catalog.

Each summand transcribes the display form of its identity.  Parity-dependent
pieces branch on n mod 2 inside one evaluator, so sweeping n exercises both
branches of the same code path.  Terms are accumulated with Kahan
compensation (cancellation between large theta products is the dominant
error source) and each evaluation reports the largest |term| it saw, so
callers can form the cancellation diagnostic max|term| / |sum|.

Theta and shifted-factorial values are memoized per evaluation call, keyed
by the complex argument (and shift).  Adjacent summation indices share most
factors, so this turns the per-term cost from O(number of theta factors)
into a handful of cache hits.  Caches never outlive the call.

All denominator factors run through pole guards: an exactly vanishing
factor raises PoleError with the summation index and a factor description;
when a positive pole floor is supplied (the sampler's rejection gate), any
denominator theta with modulus below the floor raises PoleError(near=True).
"""

from __future__ import annotations

import cmath
from typing import Callable, Iterable

from .catalog import IdentityInstance
from .errors import NonFiniteError, PoleError
from .kernels import box_indices, compositions_bounded, compositions_exact
from .theta import EllipticNome, ipow, theta

_INF = float("inf")

# ---------------------------------------------------------------------------
# Evaluation context: memoization, pole guards, compensated accumulation
# ---------------------------------------------------------------------------


class EvalContext:
    """Per-evaluation scratch state: caches, pole floor, current index."""

    __slots__ = ("nome", "q", "pole_floor", "index",
                 "_theta_cache", "_poch_cache", "_qpow_cache")

    def __init__(self, nome: EllipticNome, *, memoize: bool = True,
                 pole_floor: float = 0.0):
        self.nome = nome
        self.q = nome.q
        self.pole_floor = pole_floor
        self.index = None
        self._theta_cache: dict | None = {} if memoize else None
        self._poch_cache: dict | None = {} if memoize else None
        self._qpow_cache: dict | None = {} if memoize else None

    def qpow(self, k: int) -> complex:
        cache = self._qpow_cache
        if cache is None:
            return ipow(self.q, k)
        value = cache.get(k)
        if value is None:
            value = ipow(self.q, k)
            cache[k] = value
        return value

    def theta(self, z: complex) -> complex:
        cache = self._theta_cache
        if cache is None:
            return theta(z, self.nome)
        value = cache.get(z)
        if value is None:
            value = theta(z, self.nome)
            cache[z] = value
        return value

    def _poch_entry(self, z: complex, k: int) -> tuple[complex, float]:
        """(value, min |factor|) of (z)_k for k >= 0, built incrementally."""
        cache = self._poch_cache
        if cache is not None:
            hit = cache.get((z, k))
            if hit is not None:
                return hit
        if k == 0:
            entry = (complex(1.0), _INF)
        elif cache is not None:
            prev_value, prev_min = self._poch_entry(z, k - 1)
            factor = self.theta(z * self.qpow(k - 1))
            entry = (prev_value * factor, min(prev_min, abs(factor)))
        else:
            value = complex(1.0)
            min_abs = _INF
            w = z
            for _ in range(k):
                factor = theta(w, self.nome)
                value *= factor
                min_abs = min(min_abs, abs(factor))
                w *= self.q
            entry = (value, min_abs)
        if cache is not None:
            cache[(z, k)] = entry
        return entry

    def poch(self, z: complex, k: int) -> complex:
        """(z)_k for k >= 0 in numerator position (no pole guard)."""
        return self._poch_entry(z, k)[0]

    def den_theta(self, z: complex, what: str) -> complex:
        """theta(z) destined for a denominator; guards against (near-)zeros."""
        value = self.theta(z)
        magnitude = abs(value)
        if magnitude == 0.0:
            raise PoleError(what, index=self.index)
        if 0.0 < self.pole_floor and magnitude < self.pole_floor:
            raise PoleError(what, near=True, index=self.index)
        return value

    def den_poch(self, z: complex, k: int, what: str) -> complex:
        """(z)_k destined for a denominator; every factor is guarded."""
        value, min_abs = self._poch_entry(z, k)
        if min_abs == 0.0:
            raise PoleError(what, index=self.index)
        if 0.0 < self.pole_floor and min_abs < self.pole_floor:
            raise PoleError(what, near=True, index=self.index)
        return value


class _KahanSum:
    """Compensated complex accumulator."""

    __slots__ = ("value", "_carry")

    def __init__(self):
        self.value = complex(0.0)
        self._carry = complex(0.0)

    def add(self, term: complex):
        y = term - self._carry
        t = self.value + y
        self._carry = (t - self.value) - y
        self.value = t


def relative_error(lhs: complex, rhs: complex) -> float:
    """|lhs - rhs| / max(|lhs|, |rhs|, floor); symmetric, floor = 1e-300."""
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


# ---------------------------------------------------------------------------
# Shared summand building blocks
# ---------------------------------------------------------------------------


def _delta_ratio(ctx: EvalContext, z, x) -> complex:
    """Cached A-type ratio prod_{i<j} q^{x_i} theta(q^{x_j-x_i} z_j/z_i)/theta(z_j/z_i)."""
    n = len(z)
    result = complex(1.0)
    for i in range(n - 1):
        xi = x[i]
        zi = z[i]
        for j in range(i + 1, n):
            ratio = z[j] / zi
            den = ctx.den_theta(ratio, f"theta(z[{j}]/z[{i}])")
            result *= ctx.qpow(xi) * ctx.theta(ctx.qpow(x[j] - xi) * ratio) / den
    return result


def _pair_poch(ctx: EvalContext, z, x) -> complex:
    """prod_{i<j} (z_i z_j)_{x_i + x_j}."""
    n = len(z)
    result = complex(1.0)
    for i in range(n - 1):
        for j in range(i + 1, n):
            result *= ctx.poch(z[i] * z[j], x[i] + x[j])
    return result


def _cross_poch_den(ctx: EvalContext, z, x) -> complex:
    """prod_i prod_j (q z_i / z_j)_{x_i}, guarded (denominator of every sum)."""
    n = len(z)
    result = complex(1.0)
    q = ctx.q
    for i in range(n):
        xi = x[i]
        if xi == 0:
            continue
        zi = z[i]
        for j in range(n):
            result *= ctx.den_poch(q * zi / z[j], xi, f"(q z[{i}]/z[{j}])_x")
    return result


# ---------------------------------------------------------------------------
# frenkel-turaev: terminating very-well-poised one-variable summation
# ---------------------------------------------------------------------------


def _ft_term(ctx, inst, k):
    p_ = inst.params
    a = p_["a"]
    q = ctx.q
    N = inst.N
    num = ctx.theta(a * ctx.qpow(2 * k))
    for base in (a, p_["b"], p_["c"], p_["d"], p_["e"], ctx.qpow(-N)):
        num *= ctx.poch(base, k)
    num *= ctx.qpow(k)
    den = ctx.den_theta(a, "theta(a)") * ctx.den_poch(q, k, "(q)_x")
    aq = a * q
    for name in ("b", "c", "d", "e"):
        den *= ctx.den_poch(aq / p_[name], k, f"(aq/{name})_x")
    den *= ctx.den_poch(a * ctx.qpow(N + 1), k, "(a q^(N+1))_x")
    return num / den


def _ft_rhs(ctx, inst):
    p_ = inst.params
    a, b, c, d = p_["a"], p_["b"], p_["c"], p_["d"]
    aq = a * ctx.q
    N = inst.N
    num = (ctx.poch(aq, N) * ctx.poch(aq / (b * c), N)
           * ctx.poch(aq / (b * d), N) * ctx.poch(aq / (c * d), N))
    den = (ctx.den_poch(aq / b, N, "(aq/b)_N") * ctx.den_poch(aq / c, N, "(aq/c)_N")
           * ctx.den_poch(aq / d, N, "(aq/d)_N")
           * ctx.den_poch(aq / (b * c * d), N, "(aq/bcd)_N"))
    return num / den


# ---------------------------------------------------------------------------
# elliptic-bailey: one-variable transformation; the right side is a sum too
# ---------------------------------------------------------------------------


def _eb_lhs_term(ctx, inst, k):
    p_ = inst.params
    a = p_["a"]
    q = ctx.q
    N = inst.N
    num = ctx.theta(a * ctx.qpow(2 * k))
    for base in (a, p_["b"], p_["c"], p_["d"], p_["e"], p_["f"], p_["g"],
                 ctx.qpow(-N)):
        num *= ctx.poch(base, k)
    num *= ctx.qpow(k)
    den = ctx.den_theta(a, "theta(a)") * ctx.den_poch(q, k, "(q)_x")
    aq = a * q
    for name in ("b", "c", "d", "e", "f", "g"):
        den *= ctx.den_poch(aq / p_[name], k, f"(aq/{name})_x")
    den *= ctx.den_poch(a * ctx.qpow(N + 1), k, "(a q^(N+1))_x")
    return num / den


def _eb_rhs_prefactor(ctx, inst):
    p_ = inst.params
    a, e, f = p_["a"], p_["e"], p_["f"]
    lam = inst.lam
    q = ctx.q
    N = inst.N
    aq, lq = a * q, lam * q
    num = (ctx.poch(aq, N) * ctx.poch(aq / (e * f), N)
           * ctx.poch(lq / e, N) * ctx.poch(lq / f, N))
    den = (ctx.den_poch(lq, N, "(lam q)_N")
           * ctx.den_poch(lq / (e * f), N, "(lam q/ef)_N")
           * ctx.den_poch(aq / e, N, "(aq/e)_N")
           * ctx.den_poch(aq / f, N, "(aq/f)_N"))
    return num / den


def _eb_rhs_term(ctx, inst, k):
    p_ = inst.params
    a = p_["a"]
    lam = inst.lam
    q = ctx.q
    N = inst.N
    num = ctx.theta(lam * ctx.qpow(2 * k))
    for base in (lam, lam * p_["b"] / a, lam * p_["c"] / a, lam * p_["d"] / a,
                 p_["e"], p_["f"], p_["g"], ctx.qpow(-N)):
        num *= ctx.poch(base, k)
    num *= ctx.qpow(k)
    den = ctx.den_theta(lam, "theta(lam)") * ctx.den_poch(q, k, "(q)_x")
    aq, lq = a * q, lam * q
    for name in ("b", "c", "d"):
        den *= ctx.den_poch(aq / p_[name], k, f"(aq/{name})_x")
    for name in ("e", "f", "g"):
        den *= ctx.den_poch(lq / p_[name], k, f"(lam q/{name})_x")
    den *= ctx.den_poch(lam * ctx.qpow(N + 1), k, "(lam q^(N+1))_x")
    return num / den


# ---------------------------------------------------------------------------
# rs-jackson: box-limit inverted A-type Jackson summation
# ---------------------------------------------------------------------------


def _rs_term(ctx, inst, x):
    p_ = inst.params
    a, b, c, d, e = p_["a"], p_["b"], p_["c"], p_["d"], p_["e"]
    z = inst.z
    box = inst.box
    q = ctx.q
    s = sum(x)
    total_N = sum(box)
    value = _delta_ratio(ctx, z, x)
    value *= ctx.theta(a * ctx.qpow(2 * s)) / ctx.den_theta(a, "theta(a)")
    num = ctx.poch(a, s) * ctx.poch(b, s) * ctx.poch(c, s)
    for zi in z:
        num *= ctx.poch(d / zi, s)
    aq = a * q
    den = (ctx.den_poch(aq / b, s, "(aq/b)_|x|")
           * ctx.den_poch(aq / c, s, "(aq/c)_|x|")
           * ctx.den_poch(a * ctx.qpow(total_N + 1), s, "(a q^(|N|+1))_|x|"))
    for i, zi in enumerate(z):
        den *= ctx.den_poch(a * ctx.qpow(total_N + 1 - box[i]) / (e * zi), s,
                            "(a q^(|N|+1-N_i)/(e z_i))_|x|")
    value *= num / den * ctx.qpow(s)
    for i, zi in enumerate(z):
        xi = x[i]
        num_i = (ctx.poch(a * ctx.qpow(total_N + 1) / (e * zi), s - xi)
                 * ctx.poch(e * zi, xi))
        for j, zj in enumerate(z):
            num_i *= ctx.poch(ctx.qpow(-box[j]) * zi / zj, xi)
        den_i = (ctx.den_poch(d / zi, s - xi, "(d/z_i)_(|x|-x_i)")
                 * ctx.den_poch(aq * zi / d, xi, "(aq z_i/d)_x"))
        for j, zj in enumerate(z):
            den_i *= ctx.den_poch(q * zi / zj, xi, "(q z_i/z_j)_x")
        value *= num_i / den_i
    return value


def _rs_rhs(ctx, inst):
    p_ = inst.params
    a, b, c, d = p_["a"], p_["b"], p_["c"], p_["d"]
    z = inst.z
    box = inst.box
    aq = a * ctx.q
    total_N = sum(box)
    value = (ctx.poch(aq, total_N) * ctx.poch(aq / (b * c), total_N)
             / (ctx.den_poch(aq / b, total_N, "(aq/b)_|N|")
                * ctx.den_poch(aq / c, total_N, "(aq/c)_|N|")))
    for i, zi in enumerate(z):
        mi = box[i]
        value *= (ctx.poch(aq * zi / (b * d), mi) * ctx.poch(aq * zi / (c * d), mi)
                  / (ctx.den_poch(aq * zi / d, mi, "(aq z_i/d)_N_i")
                     * ctx.den_poch(aq * zi / (b * c * d), mi, "(aq z_i/bcd)_N_i")))
    return value


# ---------------------------------------------------------------------------
# theta-lemma: sum over which single coordinate carries the unit index
# ---------------------------------------------------------------------------


def _tl_term(ctx, inst, x):
    p_ = inst.params
    z = inst.z
    k = x.index(1)
    zk = z[k]
    value = complex(1.0)
    for name in ("b1", "b2", "b3", "b4"):
        value *= ctx.theta(zk * p_[name])
    value /= zk
    for j, zj in enumerate(z):
        if j == k:
            continue
        value *= ctx.theta(zk * zj) / ctx.den_theta(zk / zj, "theta(z_k/z_j)")
    return value


def _tl_rhs(ctx, inst):
    p_ = inst.params
    b1 = p_["b1"]
    Z = inst.Z
    if len(inst.z) % 2 == 1:
        value = complex(1.0)
        for name in ("b1", "b2", "b3", "b4"):
            value *= ctx.theta(Z * p_[name])
        return value / Z
    value = ctx.theta(Z)
    for name in ("b2", "b3", "b4"):
        value *= ctx.theta(Z * b1 * p_[name])
    return value / (Z * b1)


# ---------------------------------------------------------------------------
# gr-sum: summation over compositions of weight exactly N
# ---------------------------------------------------------------------------


def _gs_term(ctx, inst, x):
    p_ = inst.params
    z = inst.z
    n = len(z)
    value = _delta_ratio(ctx, z, x)
    for i in range(n - 1):
        for j in range(i + 1, n):
            value *= ctx.qpow(x[i] * x[j]) * ctx.poch(z[i] * z[j], x[i] + x[j])
    for i in range(n):
        xi = x[i]
        num = complex(1.0)
        for name in ("b1", "b2", "b3", "b4"):
            num *= ctx.poch(z[i] * p_[name], xi)
        value *= num / ipow(z[i], xi)
    value /= _cross_poch_den(ctx, z, x)
    return value


def _gs_rhs(ctx, inst):
    p_ = inst.params
    Z = inst.Z
    N = inst.N
    if len(inst.z) % 2 == 1:
        num = complex(1.0)
        for name in ("b1", "b2", "b3", "b4"):
            num *= ctx.poch(Z * p_[name], N)
        return num / (ipow(Z, N) * ctx.den_poch(ctx.q, N, "(q)_N"))
    b1 = p_["b1"]
    num = ctx.poch(Z, N)
    for name in ("b2", "b3", "b4"):
        num *= ctx.poch(Z * b1 * p_[name], N)
    return num / (ipow(Z * b1, N) * ctx.den_poch(ctx.q, N, "(q)_N"))


# ---------------------------------------------------------------------------
# gr-corollary: the |x| <= N companion with well-poised prefactors
# ---------------------------------------------------------------------------


def _gc_term(ctx, inst, x):
    p_ = inst.params
    a = p_["a"]
    z = inst.z
    q = ctx.q
    N = inst.N
    s = sum(x)
    value = _delta_ratio(ctx, z, x)
    for i, zi in enumerate(z):
        value *= (ctx.theta(a * zi * ctx.qpow(s + x[i]))
                  / ctx.den_theta(a * zi, "theta(a z_i)"))
    value *= _pair_poch(ctx, z, x)
    aq = a * q
    for i, zi in enumerate(z):
        value /= ctx.den_poch(aq / zi, s - x[i], "(aq/z_i)_(|x|-x_i)")
    num = ctx.poch(ctx.qpow(-N), s)
    for zi in z:
        num *= ctx.poch(a * zi, s)
    den = complex(1.0)
    for name in ("b1", "b2", "b3", "b4"):
        den *= ctx.den_poch(aq / p_[name], s, f"(aq/{name})_|x|")
    value *= num / den * ctx.qpow(s)
    for i, zi in enumerate(z):
        xi = x[i]
        num_i = complex(1.0)
        for name in ("b1", "b2", "b3", "b4"):
            num_i *= ctx.poch(zi * p_[name], xi)
        den_i = ctx.den_poch(a * ctx.qpow(N + 1) * zi, xi, "(a q^(N+1) z_i)_x")
        for zj in z:
            den_i *= ctx.den_poch(q * zi / zj, xi, "(q z_i/z_j)_x")
        value *= num_i / den_i
    return value


def _gc_rhs(ctx, inst):
    p_ = inst.params
    a, b1, b2, b3 = p_["a"], p_["b1"], p_["b2"], p_["b3"]
    z = inst.z
    Z = inst.Z
    aq = a * ctx.q
    N = inst.N
    num = complex(1.0)
    for zj in z:
        num *= ctx.poch(aq * zj, N)
    den = (ctx.den_poch(aq / b1, N, "(aq/b1)_N")
           * ctx.den_poch(aq / b2, N, "(aq/b2)_N")
           * ctx.den_poch(aq / b3, N, "(aq/b3)_N")
           * ctx.den_poch(aq / (b1 * b2 * b3 * Z * Z), N, "(aq/b1b2b3Z^2)_N"))
    for zj in z:
        den *= ctx.den_poch(aq / zj, N, "(aq/z_j)_N")
    if len(z) % 2 == 1:
        branch = (ctx.poch(aq / Z, N) * ctx.poch(aq / (b1 * b2 * Z), N)
                  * ctx.poch(aq / (b1 * b3 * Z), N) * ctx.poch(aq / (b2 * b3 * Z), N))
    else:
        branch = (ctx.poch(aq / (b1 * Z), N) * ctx.poch(aq / (b2 * Z), N)
                  * ctx.poch(aq / (b3 * Z), N)
                  * ctx.poch(aq / (b1 * b2 * b3 * Z), N))
    return num / den * branch


# ---------------------------------------------------------------------------
# bt-transform: both sides are |x| <= N sums
# ---------------------------------------------------------------------------


def _bt_lhs_term(ctx, inst, x):
    p_ = inst.params
    a, b = p_["a"], p_["b"]
    z = inst.z
    q = ctx.q
    N = inst.N
    s = sum(x)
    value = _delta_ratio(ctx, z, x)
    for i, zi in enumerate(z):
        value *= (ctx.theta(a * zi * ctx.qpow(s + x[i]))
                  / ctx.den_theta(a * zi, "theta(a z_i)"))
    value *= _pair_poch(ctx, z, x)
    aq = a * q
    for i, zi in enumerate(z):
        value /= ctx.den_poch(aq / zi, s - x[i], "(aq/z_i)_(|x|-x_i)")
    num = ctx.poch(ctx.qpow(-N), s) * ctx.poch(b, s)
    for zi in z:
        num *= ctx.poch(a * zi, s)
    den = complex(1.0)
    for name in ("c", "d", "e", "f", "g"):
        den *= ctx.den_poch(aq / p_[name], s, f"(aq/{name})_|x|")
    value *= num / den * ctx.qpow(s)
    for i, zi in enumerate(z):
        xi = x[i]
        num_i = complex(1.0)
        for name in ("c", "d", "e", "f", "g"):
            num_i *= ctx.poch(p_[name] * zi, xi)
        den_i = (ctx.den_poch(a * ctx.qpow(N + 1) * zi, xi, "(a q^(N+1) z_i)_x")
                 * ctx.den_poch(aq * zi / b, xi, "(aq z_i/b)_x"))
        for zj in z:
            den_i *= ctx.den_poch(q * zi / zj, xi, "(q z_i/z_j)_x")
        value *= num_i / den_i
    return value


def _bt_rhs_prefactor(ctx, inst):
    p_ = inst.params
    a = p_["a"]
    lam = inst.lam
    z = inst.z
    aq = a * ctx.q
    N = inst.N
    num = ipow(inst.Z, N)
    for zi in z:
        num *= ctx.poch(aq * zi, N)
    den = (ctx.den_poch(lam * ctx.q, N, "(lam q)_N")
           * ctx.den_poch(aq / p_["e"], N, "(aq/e)_N")
           * ctx.den_poch(aq / p_["f"], N, "(aq/f)_N")
           * ctx.den_poch(aq / p_["g"], N, "(aq/g)_N"))
    for zi in z:
        den *= ctx.den_poch(aq / zi, N, "(aq/z_i)_N")
    return num / den


def _bt_rhs_term(ctx, inst, x):
    p_ = inst.params
    a, b = p_["a"], p_["b"]
    lam = inst.lam
    z = inst.z
    Z = inst.Z
    q = ctx.q
    N = inst.N
    s = sum(x)
    value = _delta_ratio(ctx, z, x)
    value *= ctx.theta(lam * ctx.qpow(2 * s)) / ctx.den_theta(lam, "theta(lam)")
    value *= _pair_poch(ctx, z, x)
    for i, zi in enumerate(z):
        value /= ctx.den_poch(lam * b / (a * zi), s - x[i],
                              "(lam b/(a z_i))_(|x|-x_i)")
    num = (ctx.poch(lam, s) * ctx.poch(ctx.qpow(-N), s)
           * ctx.poch(lam * p_["c"] / a, s) * ctx.poch(lam * p_["d"] / a, s))
    for zi in z:
        num *= ctx.poch(lam * b / (a * zi), s)
    aq = a * q
    den = (ctx.den_poch(lam * ctx.qpow(N + 1), s, "(lam q^(N+1))_|x|")
           * ctx.den_poch(aq / p_["c"], s, "(aq/c)_|x|")
           * ctx.den_poch(aq / p_["d"], s, "(aq/d)_|x|"))
    value *= num / den * ctx.qpow(s)
    for i, zi in enumerate(z):
        xi = x[i]
        num_i = (ctx.poch(p_["e"] * zi, xi) * ctx.poch(p_["f"] * zi, xi)
                 * ctx.poch(p_["g"] * zi, xi)
                 * ctx.poch(ctx.qpow(-N) * zi / a, xi))
        den_i = ctx.den_poch(aq * zi / b, xi, "(aq z_i/b)_x")
        for zj in z:
            den_i *= ctx.den_poch(q * zi / zj, xi, "(q z_i/z_j)_x")
        value *= num_i / den_i
    lq = lam * q
    if len(z) % 2 == 1:
        branch = (ipow(a / lam, N) * ctx.poch(aq / Z, N)
                  * ctx.poch(lq / (p_["e"] * Z), N)
                  * ctx.poch(lq / (p_["f"] * Z), N)
                  * ctx.poch(lq / (p_["g"] * Z), N))
        branch /= (ctx.den_poch(ctx.qpow(-N) * Z / a, s, "(q^-N Z/a)_|x|")
                   * ctx.den_poch(lq / (p_["e"] * Z), s, "(lam q/eZ)_|x|")
                   * ctx.den_poch(lq / (p_["f"] * Z), s, "(lam q/fZ)_|x|")
                   * ctx.den_poch(lq / (p_["g"] * Z), s, "(lam q/gZ)_|x|"))
    else:
        branch = (ctx.poch(lq / Z, N) * ctx.poch(aq / (p_["e"] * Z), N)
                  * ctx.poch(aq / (p_["f"] * Z), N)
                  * ctx.poch(aq / (p_["g"] * Z), N))
        branch /= (ctx.den_poch(lq / Z, s, "(lam q/Z)_|x|")
                   * ctx.den_poch(lq / (p_["e"] * p_["f"] * Z), s, "(lam q/efZ)_|x|")
                   * ctx.den_poch(lq / (p_["e"] * p_["g"] * Z), s, "(lam q/egZ)_|x|")
                   * ctx.den_poch(lq / (p_["f"] * p_["g"] * Z), s, "(lam q/fgZ)_|x|"))
    return value * branch


# ---------------------------------------------------------------------------
# bc-transform: companion transformation; both sides are |x| <= N sums
# ---------------------------------------------------------------------------


def _bc_lhs_term(ctx, inst, x):
    p_ = inst.params
    a, b = p_["a"], p_["b"]
    z = inst.z
    Z = inst.Z
    q = ctx.q
    N = inst.N
    s = sum(x)
    value = _delta_ratio(ctx, z, x)
    value *= ctx.theta(a * ctx.qpow(2 * s)) / ctx.den_theta(a, "theta(a)")
    value *= _pair_poch(ctx, z, x)
    for i, zi in enumerate(z):
        value /= ctx.den_poch(b / zi, s - x[i], "(b/z_i)_(|x|-x_i)")
    num = (ctx.poch(a, s) * ctx.poch(ctx.qpow(-N), s)
           * ctx.poch(p_["c"], s) * ctx.poch(p_["d"], s))
    for zi in z:
        num *= ctx.poch(b / zi, s)
    aq = a * q
    den = (ctx.den_poch(a * ctx.qpow(N + 1), s, "(a q^(N+1))_|x|")
           * ctx.den_poch(aq / p_["c"], s, "(aq/c)_|x|")
           * ctx.den_poch(aq / p_["d"], s, "(aq/d)_|x|"))
    value *= num / den * ctx.qpow(s)
    e, f, g = p_["e"], p_["f"], p_["g"]
    efg_Z2 = e * f * g * Z * Z
    for i, zi in enumerate(z):
        xi = x[i]
        num_i = (ctx.poch(e * zi, xi) * ctx.poch(f * zi, xi) * ctx.poch(g * zi, xi)
                 * ctx.poch(aq * zi / efg_Z2, xi))
        den_i = ctx.den_poch(aq * zi / b, xi, "(aq z_i/b)_x")
        for zj in z:
            den_i *= ctx.den_poch(q * zi / zj, xi, "(q z_i/z_j)_x")
        value *= num_i / den_i
    if len(z) % 2 == 1:
        value /= (ctx.den_poch(aq / (e * Z), s, "(aq/eZ)_|x|")
                  * ctx.den_poch(aq / (f * Z), s, "(aq/fZ)_|x|")
                  * ctx.den_poch(aq / (g * Z), s, "(aq/gZ)_|x|")
                  * ctx.den_poch(aq / (e * f * g * Z), s, "(aq/efgZ)_|x|"))
    else:
        value /= (ctx.den_poch(aq / Z, s, "(aq/Z)_|x|")
                  * ctx.den_poch(aq / (e * f * Z), s, "(aq/efZ)_|x|")
                  * ctx.den_poch(aq / (e * g * Z), s, "(aq/egZ)_|x|")
                  * ctx.den_poch(aq / (f * g * Z), s, "(aq/fgZ)_|x|"))
    return value


def _bc_rhs_prefactor(ctx, inst):
    p_ = inst.params
    a, c = p_["a"], p_["c"]
    lam = inst.lam
    q = ctx.q
    N = inst.N
    return (ctx.poch(a * q, N) * ctx.poch(lam * q / c, N)
            / (ctx.den_poch(lam * q, N, "(lam q)_N")
               * ctx.den_poch(a * q / c, N, "(aq/c)_N")))


def _bc_rhs_term(ctx, inst, x):
    p_ = inst.params
    a, b, c = p_["a"], p_["b"], p_["c"]
    lam = inst.lam
    z = inst.z
    Z = inst.Z
    q = ctx.q
    N = inst.N
    s = sum(x)
    value = _delta_ratio(ctx, z, x)
    value *= ctx.theta(lam * ctx.qpow(2 * s)) / ctx.den_theta(lam, "theta(lam)")
    value *= _pair_poch(ctx, z, x)
    for i, zi in enumerate(z):
        value /= ctx.den_poch(lam * b / (a * zi), s - x[i],
                              "(lam b/(a z_i))_(|x|-x_i)")
    num = (ctx.poch(lam, s) * ctx.poch(ctx.qpow(-N), s)
           * ctx.poch(c, s) * ctx.poch(lam * p_["d"] / a, s))
    for zi in z:
        num *= ctx.poch(lam * b / (a * zi), s)
    aq, lq = a * q, lam * q
    den = (ctx.den_poch(lam * ctx.qpow(N + 1), s, "(lam q^(N+1))_|x|")
           * ctx.den_poch(lq / c, s, "(lam q/c)_|x|")
           * ctx.den_poch(aq / p_["d"], s, "(aq/d)_|x|"))
    value *= num / den * ctx.qpow(s)
    e, f, g = p_["e"], p_["f"], p_["g"]
    efg_Z2 = e * f * g * Z * Z
    for i, zi in enumerate(z):
        xi = x[i]
        num_i = (ctx.poch(lam * e * zi / a, xi) * ctx.poch(f * zi, xi)
                 * ctx.poch(g * zi, xi) * ctx.poch(aq * zi / efg_Z2, xi))
        den_i = ctx.den_poch(aq * zi / b, xi, "(aq z_i/b)_x")
        for zj in z:
            den_i *= ctx.den_poch(q * zi / zj, xi, "(q z_i/z_j)_x")
        value *= num_i / den_i
    if len(z) % 2 == 1:
        branch = (ctx.poch(aq / (c * f * Z), N) * ctx.poch(lq / (f * Z), N)
                  / (ctx.den_poch(aq / (f * Z), N, "(aq/fZ)_N")
                     * ctx.den_poch(lq / (c * f * Z), N, "(lam q/cfZ)_N")))
        branch /= (ctx.den_poch(aq / (e * Z), s, "(aq/eZ)_|x|")
                   * ctx.den_poch(lq / (f * Z), s, "(lam q/fZ)_|x|")
                   * ctx.den_poch(lq / (g * Z), s, "(lam q/gZ)_|x|")
                   * ctx.den_poch(aq / (e * f * g * Z), s, "(aq/efgZ)_|x|"))
    else:
        branch = (ctx.poch(aq / (c * Z), N) * ctx.poch(lq / Z, N)
                  / (ctx.den_poch(aq / Z, N, "(aq/Z)_N")
                     * ctx.den_poch(lq / (c * Z), N, "(lam q/cZ)_N")))
        branch /= (ctx.den_poch(lq / Z, s, "(lam q/Z)_|x|")
                   * ctx.den_poch(aq / (e * f * Z), s, "(aq/efZ)_|x|")
                   * ctx.den_poch(aq / (e * g * Z), s, "(aq/egZ)_|x|")
                   * ctx.den_poch(lq / (f * g * Z), s, "(lam q/fgZ)_|x|"))
    return value * branch


# ---------------------------------------------------------------------------
# njc-jackson: inverted multivariable Jackson summation
# ---------------------------------------------------------------------------


def _njc_term(ctx, inst, x):
    p_ = inst.params
    a, b, c, d, e = p_["a"], p_["b"], p_["c"], p_["d"], p_["e"]
    z = inst.z
    Z = inst.Z
    q = ctx.q
    N = inst.N
    s = sum(x)
    value = _delta_ratio(ctx, z, x)
    value *= ctx.theta(a * ctx.qpow(2 * s)) / ctx.den_theta(a, "theta(a)")
    value *= _pair_poch(ctx, z, x)
    for i, zi in enumerate(z):
        value /= ctx.den_poch(e / zi, s - x[i], "(e/z_i)_(|x|-x_i)")
    num = ctx.poch(a, s) * ctx.poch(ctx.qpow(-N), s)
    for zi in z:
        num *= ctx.poch(e / zi, s)
    den = ctx.den_poch(a * ctx.qpow(N + 1), s, "(a q^(N+1))_|x|")
    value *= num / den * ctx.qpow(s)
    aq = a * q
    for i, zi in enumerate(z):
        xi = x[i]
        num_i = (ctx.poch(b * zi, xi) * ctx.poch(c * zi, xi) * ctx.poch(d * zi, xi)
                 * ctx.poch(ctx.qpow(-N) * e * zi / a, xi))
        den_i = ctx.den_poch(aq * zi / e, xi, "(aq z_i/e)_x")
        for zj in z:
            den_i *= ctx.den_poch(q * zi / zj, xi, "(q z_i/z_j)_x")
        value *= num_i / den_i
    if len(z) % 2 == 1:
        value /= (ctx.den_poch(ctx.qpow(-N) * e * Z / a, s, "(q^-N eZ/a)_|x|")
                  * ctx.den_poch(aq / (b * Z), s, "(aq/bZ)_|x|")
                  * ctx.den_poch(aq / (c * Z), s, "(aq/cZ)_|x|")
                  * ctx.den_poch(aq / (d * Z), s, "(aq/dZ)_|x|"))
    else:
        value /= (ctx.den_poch(aq / Z, s, "(aq/Z)_|x|")
                  * ctx.den_poch(aq / (b * c * Z), s, "(aq/bcZ)_|x|")
                  * ctx.den_poch(aq / (b * d * Z), s, "(aq/bdZ)_|x|")
                  * ctx.den_poch(aq / (c * d * Z), s, "(aq/cdZ)_|x|"))
    return value


def _njc_rhs(ctx, inst):
    p_ = inst.params
    a, b, c, d, e = p_["a"], p_["b"], p_["c"], p_["d"], p_["e"]
    z = inst.z
    Z = inst.Z
    aq = a * ctx.q
    N = inst.N
    value = (ctx.poch(aq, N) * ctx.poch(aq / (b * e), N)
             * ctx.poch(aq / (c * e), N) * ctx.poch(aq / (d * e), N))
    for zi in z:
        value *= ctx.poch(aq / (e * zi), N)
    value /= ipow(Z, N)
    for zi in z:
        value /= ctx.den_poch(aq * zi / e, N, "(aq z_i/e)_N")
    if len(z) % 2 == 1:
        value *= ipow(e, N)
        value /= (ctx.den_poch(aq / (b * Z), N, "(aq/bZ)_N")
                  * ctx.den_poch(aq / (c * Z), N, "(aq/cZ)_N")
                  * ctx.den_poch(aq / (d * Z), N, "(aq/dZ)_N")
                  * ctx.den_poch(aq / (e * Z), N, "(aq/eZ)_N"))
    else:
        value /= (ctx.den_poch(aq / Z, N, "(aq/Z)_N")
                  * ctx.den_poch(aq / (b * e * Z), N, "(aq/beZ)_N")
                  * ctx.den_poch(aq / (c * e * Z), N, "(aq/ceZ)_N")
                  * ctx.den_poch(aq / (d * e * Z), N, "(aq/deZ)_N"))
    return value


# ---------------------------------------------------------------------------
# jts-jackson: Jackson summation with a free spectator parameter t
# ---------------------------------------------------------------------------


def _jts_term(ctx, inst, x):
    p_ = inst.params
    a, b, c, d, e, t = (p_["a"], p_["b"], p_["c"], p_["d"], p_["e"], p_["t"])
    z = inst.z
    Z = inst.Z
    q = ctx.q
    N = inst.N
    s = sum(x)
    value = _delta_ratio(ctx, z, x)
    value *= ctx.theta(a * ctx.qpow(2 * s)) / ctx.den_theta(a, "theta(a)")
    value *= _pair_poch(ctx, z, x)
    for i, zi in enumerate(z):
        value /= ctx.den_poch(t / zi, s - x[i], "(t/z_i)_(|x|-x_i)")
    num = (ctx.poch(a, s) * ctx.poch(ctx.qpow(-N), s)
           * ctx.poch(b, s) * ctx.poch(c, s))
    for zi in z:
        num *= ctx.poch(t / zi, s)
    aq = a * q
    den = (ctx.den_poch(a * ctx.qpow(N + 1), s, "(a q^(N+1))_|x|")
           * ctx.den_poch(aq / b, s, "(aq/b)_|x|")
           * ctx.den_poch(aq / c, s, "(aq/c)_|x|"))
    value *= num / den * ctx.qpow(s)
    de_Z2 = d * e * Z * Z
    for i, zi in enumerate(z):
        xi = x[i]
        num_i = (ctx.poch(d * zi, xi) * ctx.poch(e * zi, xi)
                 * ctx.poch(t * zi / de_Z2, xi))
        den_i = complex(1.0)
        for zj in z:
            den_i *= ctx.den_poch(q * zi / zj, xi, "(q z_i/z_j)_x")
        value *= num_i / den_i
    if len(z) % 2 == 1:
        value /= (ctx.den_poch(aq / (d * Z), s, "(aq/dZ)_|x|")
                  * ctx.den_poch(aq / (e * Z), s, "(aq/eZ)_|x|")
                  * ctx.den_poch(t / Z, s, "(t/Z)_|x|")
                  * ctx.den_poch(t / (d * e * Z), s, "(t/deZ)_|x|"))
    else:
        value /= (ctx.den_poch(aq / Z, s, "(aq/Z)_|x|")
                  * ctx.den_poch(aq / (d * e * Z), s, "(aq/deZ)_|x|")
                  * ctx.den_poch(t / (d * Z), s, "(t/dZ)_|x|")
                  * ctx.den_poch(t / (e * Z), s, "(t/eZ)_|x|"))
    return value


def _jts_rhs(ctx, inst):
    p_ = inst.params
    a, b, c, d = p_["a"], p_["b"], p_["c"], p_["d"]
    Z = inst.Z
    aq = a * ctx.q
    N = inst.N
    if len(inst.z) % 2 == 1:
        num = (ctx.poch(aq, N) * ctx.poch(aq / (b * c), N)
               * ctx.poch(aq / (b * d * Z), N) * ctx.poch(aq / (c * d * Z), N))
        den = (ctx.den_poch(aq / b, N, "(aq/b)_N")
               * ctx.den_poch(aq / c, N, "(aq/c)_N")
               * ctx.den_poch(aq / (d * Z), N, "(aq/dZ)_N")
               * ctx.den_poch(aq / (b * c * d * Z), N, "(aq/bcdZ)_N"))
    else:
        num = (ctx.poch(aq, N) * ctx.poch(aq / (b * c), N)
               * ctx.poch(aq / (b * Z), N) * ctx.poch(aq / (c * Z), N))
        den = (ctx.den_poch(aq / b, N, "(aq/b)_N")
               * ctx.den_poch(aq / c, N, "(aq/c)_N")
               * ctx.den_poch(aq / Z, N, "(aq/Z)_N")
               * ctx.den_poch(aq / (b * c * Z), N, "(aq/bcZ)_N"))
    return num / den


# ---------------------------------------------------------------------------
# general-jackson: two-constraint summation
# ---------------------------------------------------------------------------


def _gj_term(ctx, inst, x):
    p_ = inst.params
    a = p_["a"]
    z = inst.z
    Z = inst.Z
    q = ctx.q
    N = inst.N
    s = sum(x)
    value = _delta_ratio(ctx, z, x)
    value *= ctx.theta(a * ctx.qpow(2 * s)) / ctx.den_theta(a, "theta(a)")
    value *= _pair_poch(ctx, z, x)
    num = ctx.poch(a, s) * ctx.poch(ctx.qpow(-N), s)
    for name in ("b", "c", "d", "e"):
        num *= ctx.poch(p_[name], s)
    aq = a * q
    den = ctx.den_poch(a * ctx.qpow(N + 1), s, "(a q^(N+1))_|x|")
    for name in ("b", "c", "d", "e"):
        den *= ctx.den_poch(aq / p_[name], s, f"(aq/{name})_|x|")
    value *= num / den * ctx.qpow(s)
    t = p_["t"]
    f, g, h = p_["f"], p_["g"], p_["h"]
    for i, zi in enumerate(z):
        xi = x[i]
        num_i = (ctx.poch(t / zi, s) * ctx.poch(f * zi, xi)
                 * ctx.poch(g * zi, xi) * ctx.poch(h * zi, xi))
        den_i = ctx.den_poch(t / zi, s - xi, "(t/z_i)_(|x|-x_i)")
        for zj in z:
            den_i *= ctx.den_poch(q * zi / zj, xi, "(q z_i/z_j)_x")
        value *= num_i / den_i
    if len(z) % 2 == 1:
        value /= (ctx.den_poch(f * Z, s, "(fZ)_|x|")
                  * ctx.den_poch(g * Z, s, "(gZ)_|x|")
                  * ctx.den_poch(h * Z, s, "(hZ)_|x|")
                  * ctx.den_poch(t / Z, s, "(t/Z)_|x|"))
    else:
        value /= (ctx.den_poch(Z, s, "(Z)_|x|")
                  * ctx.den_poch(f * g * Z, s, "(fgZ)_|x|")
                  * ctx.den_poch(f * h * Z, s, "(fhZ)_|x|")
                  * ctx.den_poch(g * h * Z, s, "(ghZ)_|x|"))
    return value


def _gj_rhs(ctx, inst):
    p_ = inst.params
    a, b, c, d = p_["a"], p_["b"], p_["c"], p_["d"]
    aq = a * ctx.q
    N = inst.N
    num = (ctx.poch(aq, N) * ctx.poch(aq / (b * c), N)
           * ctx.poch(aq / (b * d), N) * ctx.poch(aq / (c * d), N))
    den = (ctx.den_poch(aq / b, N, "(aq/b)_N")
           * ctx.den_poch(aq / c, N, "(aq/c)_N")
           * ctx.den_poch(aq / d, N, "(aq/d)_N")
           * ctx.den_poch(aq / (b * c * d), N, "(aq/bcd)_N"))
    return num / den


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def _scalar_domain(inst) -> Iterable[int]:
    return range(inst.N + 1)


def _exact_domain(inst):
    return compositions_exact(inst.N, len(inst.z))


def _bounded_domain(inst):
    return compositions_bounded(inst.N, len(inst.z))


def _unit_domain(inst):
    return compositions_exact(1, len(inst.z))


def _box_domain(inst):
    return box_indices(inst.box)


# identity id -> (domain fn, LHS term fn)
_LHS: dict[str, tuple[Callable, Callable]] = {
    "frenkel-turaev": (_scalar_domain, _ft_term),
    "elliptic-bailey": (_scalar_domain, _eb_lhs_term),
    "rs-jackson": (_box_domain, _rs_term),
    "theta-lemma": (_unit_domain, _tl_term),
    "gr-sum": (_exact_domain, _gs_term),
    "gr-corollary": (_bounded_domain, _gc_term),
    "bt-transform": (_bounded_domain, _bt_lhs_term),
    "bc-transform": (_bounded_domain, _bc_lhs_term),
    "njc-jackson": (_bounded_domain, _njc_term),
    "jts-jackson": (_bounded_domain, _jts_term),
    "general-jackson": (_bounded_domain, _gj_term),
}

# identity id -> closed RHS fn
_RHS_CLOSED: dict[str, Callable] = {
    "frenkel-turaev": _ft_rhs,
    "rs-jackson": _rs_rhs,
    "theta-lemma": _tl_rhs,
    "gr-sum": _gs_rhs,
    "gr-corollary": _gc_rhs,
    "njc-jackson": _njc_rhs,
    "jts-jackson": _jts_rhs,
    "general-jackson": _gj_rhs,
}

# identity id -> (prefactor fn, domain fn, RHS term fn) for transformations
_RHS_SUM: dict[str, tuple[Callable, Callable, Callable]] = {
    "elliptic-bailey": (_eb_rhs_prefactor, _scalar_domain, _eb_rhs_term),
    "bt-transform": (_bt_rhs_prefactor, _bounded_domain, _bt_rhs_term),
    "bc-transform": (_bc_rhs_prefactor, _bounded_domain, _bc_rhs_term),
}


def _sum_terms(ctx: EvalContext, inst, domain, term_fn) -> tuple[complex, float]:
    acc = _KahanSum()
    max_abs = 0.0
    for x in domain(inst):
        ctx.index = x
        term = term_fn(ctx, inst, x)
        magnitude = abs(term)
        if magnitude > max_abs:
            max_abs = magnitude
        acc.add(term)
    ctx.index = None
    value = acc.value
    if not cmath.isfinite(value):
        raise NonFiniteError(f"{inst.identity_id}: sum overflowed")
    return value, max_abs


def evaluate_lhs(inst: IdentityInstance, *, memoize: bool = True,
                 pole_floor: float = 0.0) -> tuple[complex, float]:
    """Term-by-term left side; returns (value, max |term| encountered)."""
    domain, term_fn = _LHS[inst.identity_id]
    ctx = EvalContext(inst.nome, memoize=memoize, pole_floor=pole_floor)
    return _sum_terms(ctx, inst, domain, term_fn)


def evaluate_rhs(inst: IdentityInstance, *, memoize: bool = True,
                 pole_floor: float = 0.0) -> tuple[complex, float]:
    """Right side; a closed product, or prefactor times a sum for the
    transformations.  Returns (value, max |term| seen, scaled by the
    prefactor for transformation sums; |value| for closed products)."""
    ctx = EvalContext(inst.nome, memoize=memoize, pole_floor=pole_floor)
    identity_id = inst.identity_id
    if identity_id in _RHS_CLOSED:
        value = _RHS_CLOSED[identity_id](ctx, inst)
        if not cmath.isfinite(value):
            raise NonFiniteError(f"{identity_id}: closed side overflowed")
        return value, abs(value)
    prefactor_fn, domain, term_fn = _RHS_SUM[identity_id]
    prefactor = prefactor_fn(ctx, inst)
    total, max_abs = _sum_terms(ctx, inst, domain, term_fn)
    value = prefactor * total
    if not cmath.isfinite(value):
        raise NonFiniteError(f"{identity_id}: transformed side overflowed")
    return value, abs(prefactor) * max_abs

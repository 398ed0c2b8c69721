#!/usr/bin/env python3
"""The shared machinery of every multivariable sum: index enumeration, the
A-type theta-Vandermonde ratio, and the classical interpolation identities.

Run:  python3 demos/02_structural_kernels.py
"""

from ellsum import (
    EllipticNome,
    box_indices,
    compositions_bounded,
    compositions_exact,
    delta_ratio,
    delta_ratio_alt,
    relative_error,
    theta,
    tpf_lhs,
    tpf_rhs,
    weierstrass_rhs,
)

nome = EllipticNome(p=0.1, q=0.55)

# --- index enumeration ------------------------------------------------------
# Multivariable sums run over compositions: ordered tuples of nonnegative
# integers with a prescribed (or bounded) total.
print("compositions of 3 into 2 parts: ", list(compositions_exact(3, 2)))
print("|x| <= 2 in 2 parts:            ", list(compositions_bounded(2, 2)))
print("box limits (1, 2):              ", list(box_indices((1, 2))))

# --- the A-type ratio -------------------------------------------------------
# delta_ratio(z, x) compares the shifted theta Vandermonde with the
# unshifted one.  A second closed form writes it through shifted
# factorials; the two agree wherever both are pole-free.
z = (0.9, 1.3 + 0.2j, 0.45)
x = (2, 0, 1)
direct = delta_ratio(z, x, nome)
alternate = delta_ratio_alt(z, x, nome)
print(f"\ndelta_ratio        = {direct}")
print(f"alternate form     = {alternate}")
print(f"cross-formula err  = {relative_error(direct, alternate):.2e}")

# --- balanced partial-fraction sum ------------------------------------------
# For t z_1...z_n = b_1...b_{n+1} the n-term theta sum telescopes to a
# closed product.  Solve the last b from the balancing condition:
zs = (0.8, 1.1, 0.6)
bs = [0.7, 1.4, 0.9]
t = 1.2
last = t * zs[0] * zs[1] * zs[2] / (bs[0] * bs[1] * bs[2])
bs.append(last)
print(f"\nbalanced sum      = {tpf_lhs(zs, bs, t, nome)}")
print(f"closed product    = {tpf_rhs(zs, bs, t, nome)}")
print(f"rel err           = {relative_error(tpf_lhs(zs, bs, t, nome), tpf_rhs(zs, bs, t, nome)):.2e}")

# --- two-point interpolation --------------------------------------------------
# Functions of the form f(w) = C theta(aw, a/w) are pinned down by two
# generic values.  Interpolate from w = b, c and compare at a third point.
a, b, c, w = 0.75, 0.95, 1.25, 1.05


def f(u):
    return theta(a * u, nome) * theta(a / u, nome)


interpolated = weierstrass_rhs(f(b), f(c), b, c, w, nome)
print(f"\ninterpolated f(w) = {interpolated}")
print(f"direct f(w)       = {f(w)}")
print(f"rel err           = {relative_error(interpolated, f(w)):.2e}")
print(f"node w = b        : exact -> {relative_error(weierstrass_rhs(f(b), f(c), b, c, b, nome), f(b)):.2e}")

"""Registry of the eleven summation/transformation identities.

Each catalog entry records the identity's arity (scalar truncation level N,
z-vector with scalar N, z-vector with per-coordinate box limits, or z-vector
only), its scalar parameter names in a fixed order, and its balancing
constraint(s) as monomial equations

    prod_k param_k^{e_k} * q^(alpha*N + beta) * Z^w = 1,      Z = z_1...z_n.

Exactly one parameter per constraint is dependent and is solved in closed
form by solve_balancing; by convention it is the last-listed parameter that
the constraint touches (b4, e, g, h).  Instances recompute every derived
quantity (Z, the Bailey-shift lambda, constraint residuals) from their
stored parameters rather than trusting caller input.

Identity ids (the closed enumeration used by the CLI and the verifier):

    frenkel-turaev    one-variable Jackson summation, a^2 q^(N+1) = bcde
    elliptic-bailey   one-variable Bailey transformation, a^3 q^(N+2) = bcdefg
    rs-jackson        box-limit multivariable Jackson summation (inverted
                      A-type), a^2 q^(|N|+1) = bcde
    theta-lemma       n-point theta identity, b1 b2 b3 b4 Z^2 = 1
    gr-sum            Gustafson-Rakha-type summation over |x| = N,
                      q^(N-1) b1 b2 b3 b4 Z^2 = 1
    gr-corollary      its |x| <= N companion, a^2 q^(N+1) = b1 b2 b3 b4 Z^2
    bt-transform      multivariable Bailey transformation with
                      lambda = a^2 q / bcd, a^3 q^(N+2) = bcdefg Z^2
    bc-transform      companion Bailey transformation with
                      lambda = a^2 q / bde, same constraint
    njc-jackson       inverted multivariable Jackson summation,
                      a^2 q^(N+1) = bcde Z^2
    jts-jackson       Jackson summation with free spectator t,
                      a^2 q^(N+1) = bcde Z^2
    general-jackson   two-constraint form: a^2 q^(N+1) = bcde and
                      f g h Z^2 = t
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import BalancingError
from .theta import EllipticNome, ipow

#: Residual ceiling that every constructed instance must satisfy.
CONSTRAINT_RESIDUAL_TOL = 1e-13

# Arity descriptors.
SCALAR_N = "scalar-N"      # scalar parameters and a truncation level N only
VECTOR_N = "vector-N"      # z-vector plus scalar N
VECTOR_BOX = "vector-box"  # z-vector plus per-coordinate limits N_1..N_n
VECTOR_ONLY = "vector-only"  # z-vector, no truncation level


@dataclass(frozen=True)
class Constraint:
    """One monomial balancing equation prod p^e * q^(aN+b) * Z^w = 1."""

    exponents: tuple[tuple[str, int], ...]
    q_n_coeff: int
    q_const: int
    z_power: int
    dependent: str

    def monomial(self, params: Mapping[str, complex], q: complex,
                 n_level: int, Z: complex) -> complex:
        """Evaluate the full left-hand monomial (should be 1 when balanced)."""
        value = ipow(q, self.q_n_coeff * n_level + self.q_const)
        if self.z_power:
            value *= ipow(Z, self.z_power)
        for name, exponent in self.exponents:
            value *= ipow(params[name], exponent)
        return value

    def solve(self, params: Mapping[str, complex], q: complex,
              n_level: int, Z: complex) -> complex:
        """Closed-form value of the dependent parameter."""
        rest = ipow(q, self.q_n_coeff * n_level + self.q_const)
        if self.z_power:
            rest *= ipow(Z, self.z_power)
        dep_exponent = None
        for name, exponent in self.exponents:
            if name == self.dependent:
                dep_exponent = exponent
                continue
            rest *= ipow(params[name], exponent)
        if dep_exponent == 1:
            return 1.0 / rest
        if dep_exponent == -1:
            return rest
        raise AssertionError(f"unsupported dependent exponent {dep_exponent}")


@dataclass(frozen=True)
class CatalogEntry:
    """Static description of one identity."""

    identity_id: str
    label: str
    arity: str
    params: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    constraint_text: str
    parity_dependent: bool
    lambda_rule: str | None = None  # "bcd" or "bde": lambda = a^2 q / (...)

    @property
    def dependents(self) -> tuple[str, ...]:
        return tuple(c.dependent for c in self.constraints)

    @property
    def free_params(self) -> tuple[str, ...]:
        deps = set(self.dependents)
        return tuple(name for name in self.params if name not in deps)


def _exps(encoded: str) -> tuple[tuple[str, int], ...]:
    """Parse e.g. 'a:2 b:-1 c:-1' into exponent pairs."""
    out = []
    for token in encoded.split():
        name, _, exp = token.partition(":")
        out.append((name, int(exp)))
    return tuple(out)


CATALOG: dict[str, CatalogEntry] = {}


def _register(entry: CatalogEntry):
    CATALOG[entry.identity_id] = entry


_register(CatalogEntry(
    identity_id="frenkel-turaev",
    label="one-variable elliptic Jackson summation",
    arity=SCALAR_N,
    params=("a", "b", "c", "d", "e"),
    constraints=(Constraint(_exps("a:2 b:-1 c:-1 d:-1 e:-1"), 1, 1, 0, "e"),),
    constraint_text="a^2 q^(N+1) = b c d e",
    parity_dependent=False,
))

_register(CatalogEntry(
    identity_id="elliptic-bailey",
    label="one-variable elliptic Bailey transformation",
    arity=SCALAR_N,
    params=("a", "b", "c", "d", "e", "f", "g"),
    constraints=(Constraint(
        _exps("a:3 b:-1 c:-1 d:-1 e:-1 f:-1 g:-1"), 1, 2, 0, "g"),),
    constraint_text="a^3 q^(N+2) = b c d e f g",
    parity_dependent=False,
    lambda_rule="bcd",
))

_register(CatalogEntry(
    identity_id="rs-jackson",
    label="multivariable Jackson summation over a box of indices",
    arity=VECTOR_BOX,
    params=("a", "b", "c", "d", "e"),
    constraints=(Constraint(_exps("a:2 b:-1 c:-1 d:-1 e:-1"), 1, 1, 0, "e"),),
    constraint_text="a^2 q^(|N|+1) = b c d e",
    parity_dependent=False,
))

_register(CatalogEntry(
    identity_id="theta-lemma",
    label="n-point theta function identity",
    arity=VECTOR_ONLY,
    params=("b1", "b2", "b3", "b4"),
    constraints=(Constraint(_exps("b1:1 b2:1 b3:1 b4:1"), 0, 0, 2, "b4"),),
    constraint_text="b1 b2 b3 b4 Z^2 = 1",
    parity_dependent=True,
))

_register(CatalogEntry(
    identity_id="gr-sum",
    label="Gustafson-Rakha-type summation over |x| = N",
    arity=VECTOR_N,
    params=("b1", "b2", "b3", "b4"),
    constraints=(Constraint(_exps("b1:1 b2:1 b3:1 b4:1"), 1, -1, 2, "b4"),),
    constraint_text="q^(N-1) b1 b2 b3 b4 Z^2 = 1",
    parity_dependent=True,
))

_register(CatalogEntry(
    identity_id="gr-corollary",
    label="Gustafson-Rakha-type summation over |x| <= N",
    arity=VECTOR_N,
    params=("a", "b1", "b2", "b3", "b4"),
    constraints=(Constraint(
        _exps("a:2 b1:-1 b2:-1 b3:-1 b4:-1"), 1, 1, -2, "b4"),),
    constraint_text="a^2 q^(N+1) = b1 b2 b3 b4 Z^2",
    parity_dependent=True,
))

_register(CatalogEntry(
    identity_id="bt-transform",
    label="multivariable Bailey transformation (lambda = a^2 q/bcd)",
    arity=VECTOR_N,
    params=("a", "b", "c", "d", "e", "f", "g"),
    constraints=(Constraint(
        _exps("a:3 b:-1 c:-1 d:-1 e:-1 f:-1 g:-1"), 1, 2, -2, "g"),),
    constraint_text="a^3 q^(N+2) = b c d e f g Z^2",
    parity_dependent=True,
    lambda_rule="bcd",
))

_register(CatalogEntry(
    identity_id="bc-transform",
    label="multivariable Bailey transformation (lambda = a^2 q/bde)",
    arity=VECTOR_N,
    params=("a", "b", "c", "d", "e", "f", "g"),
    constraints=(Constraint(
        _exps("a:3 b:-1 c:-1 d:-1 e:-1 f:-1 g:-1"), 1, 2, -2, "g"),),
    constraint_text="a^3 q^(N+2) = b c d e f g Z^2",
    parity_dependent=True,
    lambda_rule="bde",
))

_register(CatalogEntry(
    identity_id="njc-jackson",
    label="inverted multivariable Jackson summation",
    arity=VECTOR_N,
    params=("a", "b", "c", "d", "e"),
    constraints=(Constraint(
        _exps("a:2 b:-1 c:-1 d:-1 e:-1"), 1, 1, -2, "e"),),
    constraint_text="a^2 q^(N+1) = b c d e Z^2",
    parity_dependent=True,
))

_register(CatalogEntry(
    identity_id="jts-jackson",
    label="multivariable Jackson summation with free spectator t",
    arity=VECTOR_N,
    params=("a", "b", "c", "d", "e", "t"),
    constraints=(Constraint(
        _exps("a:2 b:-1 c:-1 d:-1 e:-1"), 1, 1, -2, "e"),),
    constraint_text="a^2 q^(N+1) = b c d e Z^2  (t arbitrary)",
    parity_dependent=True,
))

_register(CatalogEntry(
    identity_id="general-jackson",
    label="two-constraint multivariable Jackson summation",
    arity=VECTOR_N,
    params=("a", "b", "c", "d", "e", "f", "g", "h", "t"),
    constraints=(
        Constraint(_exps("a:2 b:-1 c:-1 d:-1 e:-1"), 1, 1, 0, "e"),
        Constraint(_exps("f:1 g:1 h:1 t:-1"), 0, 0, 2, "h"),
    ),
    constraint_text="a^2 q^(N+1) = b c d e  and  f g h Z^2 = t",
    parity_dependent=True,
))

#: Stable ordering of identity ids (also the CLI listing order).
IDENTITY_IDS: tuple[str, ...] = tuple(CATALOG)


@dataclass(frozen=True)
class IdentityInstance:
    """One fully determined parameter assignment for one identity.

    params holds every scalar parameter including the solved dependents;
    z is the variable vector where the identity has one; N is the scalar
    truncation level and box the per-coordinate limits (rs-jackson only).
    Derived quantities are recomputed on access, never stored.
    """

    identity_id: str
    params: dict[str, complex]
    nome: EllipticNome
    z: tuple[complex, ...] | None = None
    N: int | None = None
    box: tuple[int, ...] | None = None

    @property
    def entry(self) -> CatalogEntry:
        return CATALOG[self.identity_id]

    @property
    def n(self) -> int | None:
        return None if self.z is None else len(self.z)

    @property
    def Z(self) -> complex:
        if self.z is None:
            raise AttributeError(f"{self.identity_id} has no variable vector")
        value = complex(1.0)
        for zi in self.z:
            value *= zi
        return value

    @property
    def lam(self) -> complex:
        rule = self.entry.lambda_rule
        if rule is None:
            raise AttributeError(f"{self.identity_id} has no lambda parameter")
        denom = complex(1.0)
        for name in rule:
            denom *= self.params[name]
        a = self.params["a"]
        return a * a * self.nome.q / denom

    @property
    def level(self) -> int:
        """The N that enters the balancing constraint (|box| for box arity)."""
        if self.box is not None:
            return sum(self.box)
        if self.N is not None:
            return self.N
        return 0

    def constraint_residuals(self) -> tuple[float, ...]:
        """Relative residual |monomial - 1| of each balancing constraint."""
        Z = self.Z if self.z is not None else complex(1.0)
        out = []
        for constraint in self.entry.constraints:
            monomial = constraint.monomial(self.params, self.nome.q, self.level, Z)
            out.append(abs(monomial - 1.0))
        return tuple(out)

    def with_params(self, **replacements: complex) -> "IdentityInstance":
        """Copy with some scalar parameters replaced (no re-solving)."""
        new_params = dict(self.params)
        new_params.update({k: complex(v) for k, v in replacements.items()})
        return IdentityInstance(
            identity_id=self.identity_id, params=new_params, nome=self.nome,
            z=self.z, N=self.N, box=self.box,
        )


def solve_balancing(identity_id: str, partial: Mapping[str, complex], *,
                    nome: EllipticNome,
                    z: tuple[complex, ...] | None = None,
                    N: int | None = None,
                    box: tuple[int, ...] | None = None) -> IdentityInstance:
    """Fill in the dependent parameter(s) of an identity in closed form.

    partial must contain exactly the free parameters (all nonzero) and no
    dependent one.  The returned instance satisfies every constraint to
    CONSTRAINT_RESIDUAL_TOL relative.
    """
    if identity_id not in CATALOG:
        raise BalancingError(f"unknown identity id {identity_id!r}")
    entry = CATALOG[identity_id]

    free = set(entry.free_params)
    given = set(partial)
    if given - free:
        raise BalancingError(
            f"{identity_id}: unexpected parameters {sorted(given - free)} "
            f"(dependent: {entry.dependents})")
    if free - given:
        raise BalancingError(
            f"{identity_id}: missing parameters {sorted(free - given)}")
    params = {name: complex(partial[name]) for name in entry.free_params}
    for name, value in params.items():
        if value == 0:
            raise BalancingError(f"{identity_id}: parameter {name} must be nonzero")

    # Arity checks.
    if entry.arity == SCALAR_N:
        if N is None or N < 0:
            raise BalancingError(f"{identity_id}: needs a truncation level N >= 0")
        if z is not None or box is not None:
            raise BalancingError(f"{identity_id}: takes no variable vector")
        z_tuple = None
    elif entry.arity in (VECTOR_N, VECTOR_ONLY):
        if not z:
            raise BalancingError(f"{identity_id}: needs a variable vector z")
        z_tuple = tuple(complex(v) for v in z)
        if any(v == 0 for v in z_tuple):
            raise BalancingError(f"{identity_id}: z entries must be nonzero")
        if entry.arity == VECTOR_N:
            if N is None or N < 0:
                raise BalancingError(f"{identity_id}: needs a truncation level N >= 0")
        elif N is not None:
            raise BalancingError(f"{identity_id}: takes no truncation level")
        if box is not None:
            raise BalancingError(f"{identity_id}: takes no box limits")
    elif entry.arity == VECTOR_BOX:
        if box is None or len(box) == 0:
            raise BalancingError(f"{identity_id}: needs box limits N_1..N_n")
        box = tuple(int(m) for m in box)
        if any(m < 0 for m in box):
            raise BalancingError(f"{identity_id}: box limits must be >= 0")
        if not z or len(z) != len(box):
            raise BalancingError(f"{identity_id}: z must match the box length")
        z_tuple = tuple(complex(v) for v in z)
        if any(v == 0 for v in z_tuple):
            raise BalancingError(f"{identity_id}: z entries must be nonzero")
        if N is not None:
            raise BalancingError(f"{identity_id}: box arity takes no scalar N")
    else:  # pragma: no cover
        raise AssertionError(entry.arity)

    Z = complex(1.0)
    if z_tuple is not None:
        for v in z_tuple:
            Z *= v
    level = sum(box) if box is not None else (N if N is not None else 0)

    for constraint in entry.constraints:
        value = constraint.solve(params, nome.q, level, Z)
        if value == 0:
            raise BalancingError(
                f"{identity_id}: constraint forces {constraint.dependent} = 0")
        params[constraint.dependent] = value

    instance = IdentityInstance(
        identity_id=identity_id, params=params, nome=nome,
        z=z_tuple, N=N if entry.arity in (SCALAR_N, VECTOR_N) else None,
        box=box if entry.arity == VECTOR_BOX else None,
    )
    residuals = instance.constraint_residuals()
    if max(residuals) > CONSTRAINT_RESIDUAL_TOL:
        raise BalancingError(
            f"{identity_id}: constraint residual {max(residuals):.3e} "
            f"exceeds {CONSTRAINT_RESIDUAL_TOL}")
    return instance

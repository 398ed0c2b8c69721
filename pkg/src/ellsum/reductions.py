"""Cross-checks that mirror how the identities reduce to one another.

Six reduction relations connect catalog entries:

  gr-sum-to-theta-lemma      at N = 1 the gr-sum summand collapses onto the
                             theta-lemma summand up to a factor theta(q):
                             theta(q) * gr-sum side == theta-lemma side.
  gr-corollary-to-gr-sum     appending z_{n+1} = q^(-N)/a to a gr-corollary
                             instance gives a valid gr-sum instance whose
                             sides are proportional to the original ones
                             with one common factor; the cross ratio
                             LHS_gs * RHS_gc == LHS_gc * RHS_gs tests it.
  bt-unit-lhs                when b = 1, every |x| > 0 term of the
                             bt-transform left side carries (1)_{|x|} = 0,
                             so the left side is exactly 1.
  bt-to-gr-corollary         when aq = bc, the bt-transform left side is
                             the gr-corollary left side with
                             (b1..b4) = (d, e, f, g); both sides match.
  gr-corollary-to-frenkel-turaev
                             at n = 1 the substitution (a, b..e) ->
                             (a z1, z1 b1, .., z1 b4) turns the identity
                             into the one-variable Jackson summation.
  general-to-jts             pinning (d, e) = (fZ, gZ) for odd n, (Z, fgZ)
                             for even n makes the general-jackson summand
                             equal the jts-jackson summand with
                             (d, e) -> (f, g) and the same spectator t.

Each check evaluates both members of the reduced relation and reports the
worst relative error as the residual.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import IdentityInstance, solve_balancing
from .errors import BalancingError
from .evaluate import evaluate_lhs, evaluate_rhs, relative_error
from .theta import ipow, theta

REDUCTION_KINDS = (
    "gr-sum-to-theta-lemma",
    "gr-corollary-to-gr-sum",
    "bt-unit-lhs",
    "bt-to-gr-corollary",
    "gr-corollary-to-frenkel-turaev",
    "general-to-jts",
)

#: Which identity each reduction kind expects as input.
REDUCTION_INPUT = {
    "gr-sum-to-theta-lemma": "gr-sum",
    "gr-corollary-to-gr-sum": "gr-corollary",
    "bt-unit-lhs": "bt-transform",
    "bt-to-gr-corollary": "bt-transform",
    "gr-corollary-to-frenkel-turaev": "gr-corollary",
    "general-to-jts": "general-jackson",
}


@dataclass(frozen=True)
class ReductionResult:
    kind: str
    residual: float
    tolerance: float
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.residual <= self.tolerance


def _require(condition: bool, message: str):
    if not condition:
        raise BalancingError(f"reduction premise violated: {message}")


def _check_gr_sum_to_theta_lemma(inst, tolerance, pole_floor):
    _require(inst.N == 1, "gr-sum instance must have N = 1")
    lemma = solve_balancing(
        "theta-lemma",
        {name: inst.params[name] for name in ("b1", "b2", "b3")},
        nome=inst.nome, z=inst.z)
    # Same b4 must come out: the N = 1 constraint coincides with the lemma's.
    _require(relative_error(lemma.params["b4"], inst.params["b4"]) < 1e-10,
             "constraints disagree on b4")
    scale = theta(inst.nome.q, inst.nome)
    gs_lhs, _ = evaluate_lhs(inst, pole_floor=pole_floor)
    gs_rhs, _ = evaluate_rhs(inst, pole_floor=pole_floor)
    tl_lhs, _ = evaluate_lhs(lemma, pole_floor=pole_floor)
    tl_rhs, _ = evaluate_rhs(lemma, pole_floor=pole_floor)
    residual = max(relative_error(scale * gs_lhs, tl_lhs),
                   relative_error(scale * gs_rhs, tl_rhs))
    return residual, "theta(q) * gr-sum sides vs theta-lemma sides"


def _check_gr_corollary_to_gr_sum(inst, tolerance, pole_floor):
    a = inst.params["a"]
    extra = ipow(inst.nome.q, -inst.N) / a
    grown = solve_balancing(
        "gr-sum",
        {name: inst.params[name] for name in ("b1", "b2", "b3")},
        nome=inst.nome, z=inst.z + (extra,), N=inst.N)
    _require(relative_error(grown.params["b4"], inst.params["b4"]) < 1e-10,
             "constraints disagree on b4 after appending z_(n+1)")
    gs_lhs, _ = evaluate_lhs(grown, pole_floor=pole_floor)
    gs_rhs, _ = evaluate_rhs(grown, pole_floor=pole_floor)
    gc_lhs, _ = evaluate_lhs(inst, pole_floor=pole_floor)
    gc_rhs, _ = evaluate_rhs(inst, pole_floor=pole_floor)
    residual = relative_error(gs_lhs * gc_rhs, gc_lhs * gs_rhs)
    return residual, "cross ratio of gr-sum (n+1 vars) vs gr-corollary sides"


def _check_bt_unit_lhs(inst, tolerance, pole_floor):
    _require(inst.params["b"] == 1, "bt-transform instance must have b = 1")
    lhs, _ = evaluate_lhs(inst, pole_floor=pole_floor)
    return relative_error(lhs, 1.0), "bt-transform left side vs 1"


def _check_bt_to_gr_corollary(inst, tolerance, pole_floor):
    p_ = inst.params
    aq = p_["a"] * inst.nome.q
    _require(relative_error(aq, p_["b"] * p_["c"]) < 1e-10,
             "bt-transform instance must have aq = bc")
    companion = solve_balancing(
        "gr-corollary",
        {"a": p_["a"], "b1": p_["d"], "b2": p_["e"], "b3": p_["f"]},
        nome=inst.nome, z=inst.z, N=inst.N)
    _require(relative_error(companion.params["b4"], p_["g"]) < 1e-10,
             "constraints disagree on the dependent parameter")
    bt_lhs, _ = evaluate_lhs(inst, pole_floor=pole_floor)
    bt_rhs, _ = evaluate_rhs(inst, pole_floor=pole_floor)
    gc_lhs, _ = evaluate_lhs(companion, pole_floor=pole_floor)
    gc_rhs, _ = evaluate_rhs(companion, pole_floor=pole_floor)
    residual = max(relative_error(bt_lhs, gc_lhs), relative_error(bt_rhs, gc_rhs))
    return residual, "bt-transform sides vs gr-corollary sides at aq = bc"


def _check_gr_corollary_to_frenkel_turaev(inst, tolerance, pole_floor):
    _require(inst.n == 1, "gr-corollary instance must have n = 1")
    p_ = inst.params
    z1 = inst.z[0]
    companion = solve_balancing(
        "frenkel-turaev",
        {"a": p_["a"] * z1, "b": z1 * p_["b1"], "c": z1 * p_["b2"],
         "d": z1 * p_["b3"]},
        nome=inst.nome, N=inst.N)
    _require(relative_error(companion.params["e"], z1 * p_["b4"]) < 1e-10,
             "constraints disagree on the dependent parameter")
    gc_lhs, _ = evaluate_lhs(inst, pole_floor=pole_floor)
    gc_rhs, _ = evaluate_rhs(inst, pole_floor=pole_floor)
    ft_lhs, _ = evaluate_lhs(companion, pole_floor=pole_floor)
    ft_rhs, _ = evaluate_rhs(companion, pole_floor=pole_floor)
    residual = max(relative_error(gc_lhs, ft_lhs), relative_error(gc_rhs, ft_rhs))
    return residual, "gr-corollary n=1 sides vs frenkel-turaev sides"


def _check_general_to_jts(inst, tolerance, pole_floor):
    p_ = inst.params
    Z = inst.Z
    if inst.n % 2 == 1:
        want_d, want_e = p_["f"] * Z, p_["g"] * Z
    else:
        want_d, want_e = Z, p_["f"] * p_["g"] * Z
    _require(relative_error(p_["d"], want_d) < 1e-10,
             "general-jackson d is not at its parity pin")
    _require(relative_error(p_["e"], want_e) < 1e-10,
             "general-jackson e is not at its parity pin")
    companion = solve_balancing(
        "jts-jackson",
        {"a": p_["a"], "b": p_["b"], "c": p_["c"], "d": p_["f"], "t": p_["t"]},
        nome=inst.nome, z=inst.z, N=inst.N)
    _require(relative_error(companion.params["e"], p_["g"]) < 1e-10,
             "constraints disagree on the dependent parameter")
    gj_lhs, _ = evaluate_lhs(inst, pole_floor=pole_floor)
    gj_rhs, _ = evaluate_rhs(inst, pole_floor=pole_floor)
    jt_lhs, _ = evaluate_lhs(companion, pole_floor=pole_floor)
    jt_rhs, _ = evaluate_rhs(companion, pole_floor=pole_floor)
    residual = max(relative_error(gj_lhs, jt_lhs), relative_error(gj_rhs, jt_rhs))
    return residual, "general-jackson sides vs jts-jackson sides at the pin"


_CHECKS = {
    "gr-sum-to-theta-lemma": _check_gr_sum_to_theta_lemma,
    "gr-corollary-to-gr-sum": _check_gr_corollary_to_gr_sum,
    "bt-unit-lhs": _check_bt_unit_lhs,
    "bt-to-gr-corollary": _check_bt_to_gr_corollary,
    "gr-corollary-to-frenkel-turaev": _check_gr_corollary_to_frenkel_turaev,
    "general-to-jts": _check_general_to_jts,
}


def reduction_check(kind: str, inst: IdentityInstance, *,
                    tolerance: float = 1e-8,
                    pole_floor: float = 0.0) -> ReductionResult:
    """Verify one reduction relation on an instance satisfying its premise.

    Raises BalancingError when the instance does not match the premise
    (wrong identity, wrong n/N, pinned parameter not at its pinned value).
    """
    if kind not in _CHECKS:
        raise ValueError(f"unknown reduction kind {kind!r}; "
                         f"choose from {REDUCTION_KINDS}")
    expected = REDUCTION_INPUT[kind]
    if inst.identity_id != expected:
        raise BalancingError(
            f"reduction {kind} expects a {expected} instance, "
            f"got {inst.identity_id}")
    residual, detail = _CHECKS[kind](inst, tolerance, pole_floor)
    return ReductionResult(kind=kind, residual=residual,
                           tolerance=tolerance, detail=detail)

"""Seeded generation of valid, well-conditioned identity instances.

Free parameters get log-uniform moduli and uniform phases; the dependent
parameter comes from solve_balancing.  A draw is rejected and retried when

  * any denominator theta factor of either side has modulus below
    pole_floor -> reason "pole",
  * pairwise z ratios sit closer than min_z_separation to the zero set
    p^Z of theta (exactly where the A-type denominators vanish)
    -> reason "separation",
  * the solved dependent parameter has modulus outside [1e-6, 1e6]
    -> reason "magnitude",
  * the cancellation ratio max|term| / |sum| of either side exceeds
    condition_cap -> reason "condition".

Randomness comes from numpy's PCG64 bit generator.  Each trial derives its
own stream from SeedSequence entropy built out of (seed, catalog index of
the identity, n, N or box, trial index, bit pattern of p), so trials are
independent, reorderable, and reproducible across runs: the same
(config, identity, n, N, p, trial_index) always yields the same instance.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .catalog import (
    CATALOG,
    IDENTITY_IDS,
    SCALAR_N,
    VECTOR_BOX,
    VECTOR_ONLY,
    IdentityInstance,
    solve_balancing,
)
from .errors import BalancingError, EllipticError, PoleError, ResampleExhaustedError
from .evaluate import evaluate_lhs, evaluate_rhs
from .theta import EllipticNome, TruncationPolicy

#: Allowed modulus window for a solved dependent parameter.
DEPENDENT_MAGNITUDE_RANGE = (1e-6, 1e6)

REJECTION_REASONS = ("pass", "pole", "separation", "magnitude", "condition")


@dataclass(frozen=True)
class SampleConfig:
    """Knobs of the instance sampler; the whole stream is a pure function
    of this object plus the identity/arity identifiers."""

    seed: int = 0
    modulus_range: tuple[float, float] = (0.2, 1.5)
    p_values: tuple[complex, ...] = (0.0, 0.05, 0.2)
    q_range: tuple[float, float] = (0.2, 1.5)
    pole_floor: float = 1e-4
    condition_cap: float = 1e6
    max_resamples: int = 200
    min_z_separation: float = 0.05
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        if self.modulus_range[0] <= 0 or self.modulus_range[1] < self.modulus_range[0]:
            raise ValueError(f"bad modulus_range {self.modulus_range}")
        if self.q_range[0] <= 0 or self.q_range[1] < self.q_range[0]:
            raise ValueError(f"bad q_range {self.q_range}")
        if self.pole_floor < 0:
            raise ValueError("pole_floor must be >= 0")
        if self.max_resamples < 1:
            raise ValueError("max_resamples must be >= 1")
        for p in self.p_values:
            if abs(complex(p)) >= 1:
                raise ValueError(f"|p| must be < 1, got {p}")


def _float_bits(value: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", value))[0]


def _rng_for(config: SampleConfig, identity_id: str, n: int | None,
             level_code: tuple[int, ...], trial_index: int,
             p: complex) -> np.random.Generator:
    entropy = [
        config.seed & 0xFFFFFFFFFFFFFFFF,
        IDENTITY_IDS.index(identity_id),
        0 if n is None else n + 1,
        trial_index,
        _float_bits(complex(p).real),
        _float_bits(complex(p).imag),
        *level_code,
    ]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def _draw(rng: np.random.Generator, lo: float, hi: float) -> complex:
    """Log-uniform modulus in [lo, hi], uniform phase."""
    modulus = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    phase = rng.uniform(0.0, 2.0 * math.pi)
    return complex(modulus * math.cos(phase), modulus * math.sin(phase))


def _z_separated(z: tuple[complex, ...], p: complex, min_sep: float) -> bool:
    """Pairwise ratios must stay min_sep away from the zero set p^Z of theta."""
    n = len(z)
    points = [complex(1.0)]
    if p != 0:
        w = complex(p)
        while abs(w) > 1e-3:
            points.append(w)
            w *= p
        w = 1.0 / complex(p)
        while abs(w) < 1e3:
            points.append(w)
            w /= p
    for i in range(n - 1):
        for j in range(i + 1, n):
            ratio = z[j] / z[i]
            for point in points:
                if abs(ratio - point) < min_sep or abs(1.0 / ratio - point) < min_sep:
                    return False
    return True


PinnedValue = complex | Callable[[dict], complex]


def _apply_pins(drawn: dict[str, complex], pinned: Mapping[str, PinnedValue] | None,
                context: dict) -> dict[str, complex]:
    """Replace drawn values by pins; callables see {params, z, q, N, Z}."""
    if not pinned:
        return drawn
    out = dict(drawn)
    for name, value in pinned.items():
        if callable(value):
            out[name] = complex(value({**context, "params": dict(out)}))
        else:
            out[name] = complex(value)
    return out


class _Rejected(Exception):
    def __init__(self, reason: str):
        self.reason = reason


def _attempt(identity_id: str, *, n, N, box, config: SampleConfig, p: complex,
             rng: np.random.Generator,
             pinned: Mapping[str, PinnedValue] | None):
    """One sampling attempt; returns (instance, lhs, rhs, condition) or
    raises _Rejected."""
    entry = CATALOG[identity_id]
    lo, hi = config.modulus_range
    q = _draw(rng, *config.q_range)
    nome = EllipticNome(p, q, config.truncation)

    drawn = {name: _draw(rng, lo, hi) for name in entry.free_params}

    z = None
    if entry.arity not in (SCALAR_N,):
        z = tuple(_draw(rng, lo, hi) for _ in range(n))

    level = sum(box) if box is not None else (N if N is not None else 0)
    Z = complex(1.0)
    if z is not None:
        for v in z:
            Z *= v
    params = _apply_pins(drawn, pinned, {"z": z, "q": q, "N": level, "Z": Z})

    if z is not None and not _z_separated(z, complex(p), config.min_z_separation):
        raise _Rejected("separation")

    try:
        instance = solve_balancing(
            identity_id, params, nome=nome, z=z,
            N=N if entry.arity not in (VECTOR_BOX, VECTOR_ONLY) else None,
            box=box)
    except BalancingError as exc:
        raise _Rejected("magnitude") from exc

    lo_mag, hi_mag = DEPENDENT_MAGNITUDE_RANGE
    for name in entry.dependents:
        magnitude = abs(instance.params[name])
        if not lo_mag <= magnitude <= hi_mag:
            raise _Rejected("magnitude")

    try:
        lhs, lhs_max = evaluate_lhs(instance, pole_floor=config.pole_floor)
        rhs, rhs_max = evaluate_rhs(instance, pole_floor=config.pole_floor)
    except PoleError as exc:
        raise _Rejected("pole") from exc
    except EllipticError as exc:
        raise _Rejected("condition") from exc

    condition = 0.0
    for value, max_abs in ((lhs, lhs_max), (rhs, rhs_max)):
        magnitude = abs(value)
        if magnitude == 0.0:
            if max_abs == 0.0:
                continue
            raise _Rejected("condition")
        condition = max(condition, max_abs / magnitude)
    if condition > config.condition_cap:
        raise _Rejected("condition")
    return instance, lhs, rhs, condition


def _sample_with_values(identity_id: str, *, n=None, N=None, box=None,
                        config: SampleConfig, trial_index: int,
                        p: complex | None = None,
                        pinned: Mapping[str, PinnedValue] | None = None):
    """Sampling loop; returns (instance, lhs, rhs, condition, histogram)."""
    if identity_id not in CATALOG:
        raise BalancingError(f"unknown identity id {identity_id!r}")
    entry = CATALOG[identity_id]
    if p is None:
        p = config.p_values[0]
    p = complex(p)
    if entry.arity == VECTOR_BOX:
        if box is None:
            raise BalancingError(f"{identity_id}: sampler needs box limits")
        box = tuple(int(m) for m in box)
        n = len(box)
        level_code = tuple(m + 1 for m in box)
    elif entry.arity == VECTOR_ONLY:
        N = None
        level_code = ()
    elif entry.arity == SCALAR_N:
        n = None
        level_code = (N + 1,)
    else:
        level_code = (N + 1,)

    rng = _rng_for(config, identity_id, n, level_code, trial_index, p)
    histogram = {reason: 0 for reason in REJECTION_REASONS}
    for _ in range(config.max_resamples):
        try:
            instance, lhs, rhs, condition = _attempt(
                identity_id, n=n, N=N, box=box, config=config, p=p,
                rng=rng, pinned=pinned)
        except _Rejected as rejection:
            histogram[rejection.reason] += 1
            continue
        histogram["pass"] += 1
        return instance, lhs, rhs, condition, histogram
    raise ResampleExhaustedError(
        f"{identity_id}: no acceptable instance in {config.max_resamples} attempts",
        histogram)


def sample_instance(identity_id: str, *, n=None, N=None, box=None,
                    config: SampleConfig, trial_index: int,
                    p: complex | None = None,
                    pinned: Mapping[str, PinnedValue] | None = None) -> IdentityInstance:
    """Deterministically sample one gated instance of an identity.

    The result is a pure function of (config, identity_id, n, N/box,
    trial_index, p).  Raises ResampleExhaustedError with the rejection
    histogram when max_resamples draws all fail a gate.
    """
    instance, _, _, _, _ = _sample_with_values(
        identity_id, n=n, N=N, box=box, config=config,
        trial_index=trial_index, p=p, pinned=pinned)
    return instance


def rejection_report(identity_id: str, *, n=None, N=None, box=None,
                     config: SampleConfig, count: int,
                     p: complex | None = None) -> dict[str, int]:
    """Tally pass/pole/magnitude/condition over `count` single attempts."""
    entry = CATALOG[identity_id]
    if p is None:
        p = config.p_values[0]
    p = complex(p)
    if entry.arity == VECTOR_BOX:
        box = tuple(int(m) for m in box)
        n = len(box)
        level_code = tuple(m + 1 for m in box)
    elif entry.arity == VECTOR_ONLY:
        N = None
        level_code = ()
    elif entry.arity == SCALAR_N:
        n = None
        level_code = (N + 1,)
    else:
        level_code = (N + 1,)
    histogram = {reason: 0 for reason in REJECTION_REASONS}
    for trial_index in range(count):
        rng = _rng_for(config, identity_id, n, level_code, trial_index, p)
        try:
            _attempt(identity_id, n=n, N=N, box=box, config=config, p=p,
                     rng=rng, pinned=None)
        except _Rejected as rejection:
            histogram[rejection.reason] += 1
            continue
        histogram["pass"] += 1
    return histogram

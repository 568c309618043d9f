"""Mixing measures and the statistics they induce.

A MixingMeasure is a finite atomic probability measure on the extended
reals. It induces the statistic

    value(mu, d) = sum_j w_j * K_{a_j}(d),

which is monotone in first-order stochastic dominance and additive over
independent sums; this module also hosts the risk classification and the
comparative-risk-aversion test, the domain extensions from nonnegative and
integer supports, and the sub/super-additive set-valued variants.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .cgf import k_a_many
from .dist import FiniteDist, floor_dist, iid_power, moments, shift
from .errors import (
    BadParams,
    BadSupport,
    EmptyFamily,
    EmptyGrid,
    InfiniteAtom,
    MassNotOne,
    NegativeProb,
    SupportBlowup,
)

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class MixingMeasure:
    """Finite atomic probability measure on [-inf, +inf]."""

    locations: np.ndarray  # sorted, distinct; may include +-inf
    weights: np.ndarray  # strictly positive, sum 1

    def __post_init__(self):
        self.locations.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def n_atoms(self) -> int:
        return self.locations.size

    def __repr__(self):
        pairs = ", ".join(
            f"{a:g}:{w:g}" for a, w in zip(self.locations, self.weights)
        )
        return f"MixingMeasure({pairs})"


def make_measure(locations, weights) -> MixingMeasure:
    locations = np.asarray(locations, dtype=np.float64).ravel()
    weights = np.asarray(weights, dtype=np.float64).ravel()
    if locations.size != weights.size or locations.size == 0:
        raise EmptyFamily("need matching, nonempty locations and weights")
    if np.any(np.isnan(locations)):
        raise BadSupport("locations must not be NaN")
    if np.any(weights < 0):
        raise NegativeProb("weights must be nonnegative")
    total = weights.sum()
    if abs(total - 1.0) > 1e-9:
        raise MassNotOne(f"weights sum to {total!r}, expected 1")
    order = np.argsort(locations, kind="stable")
    locations = locations[order]
    weights = weights[order]
    # merge exact duplicates, drop zero-weight atoms
    starts = np.flatnonzero(
        np.concatenate(([True], locations[1:] != locations[:-1]))
    )
    locs = locations[starts]
    wts = np.add.reduceat(weights, starts)
    keep = wts > 0
    locs, wts = locs[keep], wts[keep]
    if locs.size == 0:
        raise MassNotOne("all atoms have zero weight")
    return MixingMeasure(locs, wts / wts.sum())


def point_mass(a: float) -> MixingMeasure:
    return make_measure([a], [1.0])


def evaluate(mu: MixingMeasure, d: FiniteDist) -> float:
    """The statistic induced by mu: weighted average of K_a(d) over atoms."""
    if d.n_atoms == 1:
        # normalization is exact on constants
        return float(d.support[0])
    return float(np.dot(mu.weights, k_a_many(d, mu.locations)))


def evaluate_gaussian(mu: MixingMeasure, mean: float, var: float) -> float:
    """Closed form on Gaussian laws: mean + c * var / 2, c the mean of mu.

    Requires a measure with compact (finite) support; K_a of a Gaussian is
    mean + a * var / 2, which has no limit at +-inf.
    """
    if var < 0:
        raise BadSupport("variance must be nonnegative")
    if not np.all(np.isfinite(mu.locations)):
        raise InfiniteAtom("Gaussian closed form needs all atoms finite")
    c = float(np.dot(mu.weights, mu.locations))
    return mean + c * var / 2.0


class RiskClass(Enum):
    NEUTRAL = "neutral"
    AVERSE = "averse"
    SEEKING = "seeking"
    MIXED = "mixed"


def classify_risk(mu: MixingMeasure) -> RiskClass:
    locs = mu.locations
    if locs.size == 1 and locs[0] == 0.0:
        return RiskClass.NEUTRAL
    if np.all(locs <= 0):
        return RiskClass.AVERSE
    if np.all(locs >= 0):
        return RiskClass.SEEKING
    return RiskClass.MIXED


class CompareOrder(Enum):
    LE = "le"
    GE = "ge"
    EQ = "eq"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class CompareResult:
    order: CompareOrder
    witness: Optional[float] = None


def _tail_integral(mu: MixingMeasure, b: float) -> float:
    """Integral of (a - b)/a over [b, +inf] (b > 0) or [-inf, b] (b < 0).

    Atoms at the matching infinity contribute (a - b)/a = 1; an atom at
    a = b contributes 0 either way.
    """
    locs, wts = mu.locations, mu.weights
    if b > 0:
        sel = locs >= b
        vals = np.where(np.isinf(locs[sel]), 1.0, 1.0 - b / locs[sel])
    else:
        sel = locs <= b
        vals = np.where(np.isinf(locs[sel]), 1.0, 1.0 - b / locs[sel])
    return float(np.dot(wts[sel], vals))


def default_compare_grid(mu1: MixingMeasure, mu2: MixingMeasure) -> np.ndarray:
    """Finite atom locations of both measures, midpoints, and +-1e-6.

    Both integrals are piecewise linear in b between consecutive atoms, so
    this grid decides the comparison exactly for atomic measures.
    """
    atoms = np.concatenate((mu1.locations, mu2.locations))
    atoms = np.unique(atoms[np.isfinite(atoms) & (atoms != 0.0)])
    grid = [-1e-6, 1e-6]
    for side in (atoms[atoms > 0], atoms[atoms < 0]):
        grid.extend(side)
        grid.extend((side[1:] + side[:-1]) / 2.0)
    return np.unique(np.asarray(grid, dtype=np.float64))


def compare(
    mu1: MixingMeasure,
    mu2: MixingMeasure,
    b_grid: Optional[Sequence[float]] = None,
) -> CompareResult:
    """Decide whether mu1's statistic is everywhere <= mu2's (LE), >= (GE),
    equal (EQ), or neither (with a witness b where the LE test fails).

    LE holds iff for every b > 0 the [b, inf] tail integral of (a-b)/a under
    mu1 is <= the same under mu2, and for every b < 0 the [-inf, b] integral
    is >=.
    """
    if b_grid is None:
        grid = default_compare_grid(mu1, mu2)
    else:
        grid = np.asarray(list(b_grid), dtype=np.float64)
        if grid.size == 0:
            raise EmptyGrid("b_grid must be nonempty")
        if np.any(grid == 0.0):
            raise EmptyGrid("b_grid entries must be nonzero")
    le = True
    ge = True
    le_witness = None
    for b in grid:
        i1 = _tail_integral(mu1, b)
        i2 = _tail_integral(mu2, b)
        if b > 0:
            if i1 > i2 + _WEIGHT_TOL:
                le = False
                le_witness = le_witness if le_witness is not None else float(b)
            if i2 > i1 + _WEIGHT_TOL:
                ge = False
        else:
            if i1 < i2 - _WEIGHT_TOL:
                le = False
                le_witness = le_witness if le_witness is not None else float(b)
            if i2 < i1 - _WEIGHT_TOL:
                ge = False
    if le and ge:
        return CompareResult(CompareOrder.EQ)
    if le:
        return CompareResult(CompareOrder.LE)
    if ge:
        return CompareResult(CompareOrder.GE)
    return CompareResult(CompareOrder.INCOMPARABLE, le_witness)


def extend_from_nonneg(
    stat_on_nonneg: Callable[[FiniteDist], float], d: FiniteDist
) -> float:
    """Extend a statistic defined on nonnegative supports to all of them:
    min[d] + stat(d - min[d])."""
    lo = float(d.support[0])
    return lo + float(stat_on_nonneg(shift(d, -lo)))


def extend_integer_approx(
    stat_on_integers: Callable[[FiniteDist], float],
    d: FiniteDist,
    n_max: int,
) -> Tuple[float, float]:
    """Floor-extension sandwich from integer supports to nonnegative reals.

    Uses the largest feasible n <= n_max (support cap permitting) and
    returns (midpoint, width) of the bracket
    [stat(floor(d^{*n}))/n, stat(floor(d^{*n}) + 1)/n], which contains the
    true extension.
    """
    if n_max < 1:
        raise BadParams("n_max must be at least 1")
    if d.support[0] < 0:
        raise BadSupport("floor extension needs a nonnegative support")
    power = d
    n_used = 1
    for n in range(2, int(n_max) + 1):
        try:
            power = iid_power(d, n)
        except SupportBlowup:
            break
        n_used = n
    floored = floor_dist(power)
    lower = float(stat_on_integers(floored)) / n_used
    upper = float(stat_on_integers(shift(floored, 1.0))) / n_used
    return (lower + upper) / 2.0, upper - lower


class FamilyMode(Enum):
    MAX = "max"
    MIN = "min"


def evaluate_family(
    measures: Sequence[MixingMeasure], mode: FamilyMode, d: FiniteDist
) -> float:
    """Set-valued statistic: max (sub-additive) or min (super-additive) of
    the member statistics."""
    if not measures:
        raise EmptyFamily("need at least one mixing measure")
    vals = [evaluate(mu, d) for mu in measures]
    return max(vals) if mode is FamilyMode.MAX else min(vals)


def statistic_mean(d: FiniteDist) -> float:
    return moments(d).mean

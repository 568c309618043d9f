"""Time-lottery valuation, Paretian aggregation, indifference pairs,
risk-invariant evaluation, betweenness classification, and the combined-
choices violation search.

A time lottery (x, T) pays the positive prize x at the random nonnegative
time T and is valued u(x) * exp(-r * value(mu, T)). Aggregating exponential
discounters with rates r_i under Pareto weights lambda yields the social
statistic sum_i lambda_i K_{-r_i} and the harmonic social rate
1/r = sum_i lambda_i / r_i.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .dist import FiniteDist, convolve, make, moments
from .dominance import fosd
from .errors import (
    BadParams,
    BadSupport,
    DuplicateRates,
    IllConditioned,
    InfeasibleC,
    InputError,
    NegativeTime,
    NonpositivePrize,
    WeightMismatch,
)
from .mas import MixingMeasure, evaluate, make_measure


# ---------------------------------------------------------------------------
# utilities over prizes

@dataclass(frozen=True)
class UtilitySpec:
    """Increasing continuous map from positive prizes to positive utilities.

    kind is one of identity | power | log | table. The log kind is
    log(1 + x), which keeps the range positive on all of (0, inf). Table
    utilities interpolate linearly and refuse prizes outside their range.
    """

    kind: str
    exponent: float = 1.0
    points: Tuple[Tuple[float, float], ...] = ()

    @staticmethod
    def identity() -> "UtilitySpec":
        return UtilitySpec("identity")

    @staticmethod
    def power(exponent: float) -> "UtilitySpec":
        if not exponent > 0:
            raise BadParams("power utility needs a positive exponent")
        return UtilitySpec("power", exponent=exponent)

    @staticmethod
    def log() -> "UtilitySpec":
        return UtilitySpec("log")

    @staticmethod
    def table(points: Sequence[Tuple[float, float]]) -> "UtilitySpec":
        pts = tuple((float(x), float(u)) for x, u in points)
        xs = [p[0] for p in pts]
        us = [p[1] for p in pts]
        if len(pts) < 2 or sorted(xs) != xs or sorted(us) != us or len(set(xs)) != len(xs):
            raise BadParams("table utility needs increasing x and u")
        if min(us) <= 0 or min(xs) <= 0:
            raise BadParams("table utility must be positive on positive prizes")
        return UtilitySpec("table", points=pts)


def utility_value(u: UtilitySpec, x: float) -> float:
    if not x > 0:
        raise NonpositivePrize(f"prize must be positive, got {x}")
    if u.kind == "identity":
        return float(x)
    if u.kind == "power":
        return float(x**u.exponent)
    if u.kind == "log":
        return float(np.log1p(x))
    if u.kind == "table":
        xs = np.array([p[0] for p in u.points])
        us = np.array([p[1] for p in u.points])
        if x < xs[0] or x > xs[-1]:
            raise InputError(f"prize {x} outside table range [{xs[0]}, {xs[-1]}]")
        return float(np.interp(x, xs, us))
    raise BadParams(f"unknown utility kind {u.kind!r}")


# ---------------------------------------------------------------------------
# time-lottery valuation

def discount_factor(t_dist: FiniteDist, rate: float) -> float:
    """E[exp(-rate * T)] for a nonnegative random time."""
    return float(np.dot(t_dist.probs, np.exp(-rate * t_dist.support)))


def time_value(
    x: float,
    t_dist: FiniteDist,
    u: UtilitySpec,
    rate: float,
    mu: MixingMeasure,
) -> float:
    """u(x) * exp(-rate * value(mu, T))."""
    if t_dist.support[0] < 0:
        raise NegativeTime("time support must be nonnegative")
    if not rate > 0:
        raise BadParams("rate must be positive")
    return utility_value(u, x) * float(np.exp(-rate * evaluate(mu, t_dist)))


@dataclass(frozen=True)
class AgentProfile:
    rates: Tuple[float, ...]
    utility: UtilitySpec

    def __post_init__(self):
        if len(self.rates) == 0 or any(not r > 0 for r in self.rates):
            raise BadParams("need at least one agent with a positive rate")


@dataclass(frozen=True)
class SocialPreference:
    weights: Tuple[float, ...]
    statistic: MixingMeasure
    rate: float


def aggregate(profile: AgentProfile, weights: Sequence[float]) -> SocialPreference:
    """Pareto aggregation: statistic sum_i w_i K_{-r_i}, harmonic rate."""
    w = np.asarray(list(weights), dtype=np.float64)
    rates = np.asarray(profile.rates, dtype=np.float64)
    if w.size != rates.size:
        raise WeightMismatch(f"{w.size} weights for {rates.size} rates")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise WeightMismatch("weights must be a probability vector")
    keep = w > 0
    statistic = make_measure(-rates[keep], w[keep])
    rate = 1.0 / float(np.dot(w[keep], 1.0 / rates[keep]))
    return SocialPreference(tuple(float(v) for v in w), statistic, rate)


def pareto_check(
    profile: AgentProfile,
    social: SocialPreference,
    lottery_pairs: Sequence[Tuple[Tuple[float, FiniteDist], Tuple[float, FiniteDist]]],
) -> Optional[int]:
    """None if every unanimously-preferred pair is socially preferred;
    otherwise the index of the first violation."""
    u = profile.utility
    for idx, ((x, t_dist), (y, s_dist)) in enumerate(lottery_pairs):
        ux = utility_value(u, x)
        uy = utility_value(u, y)
        unanimous = all(
            ux * discount_factor(t_dist, r) >= uy * discount_factor(s_dist, r) - 1e-12
            for r in profile.rates
        )
        if not unanimous:
            continue
        vx = time_value(x, t_dist, u, social.rate, social.statistic)
        vy = time_value(y, s_dist, u, social.rate, social.statistic)
        if vx < vy - 1e-9:
            return idx
    return None


# ---------------------------------------------------------------------------
# indifference pairs (Vandermonde construction)

@dataclass(frozen=True)
class IndifferencePair:
    t_dist: FiniteDist
    s_dist: FiniteDist
    c: float
    eta: float
    d_coeffs: Tuple[float, ...]


def indifference_pair(rates: Sequence[float], c: float) -> IndifferencePair:
    """Times T, S on {1..n+1} with E[exp(-r_i T)] = c * E[exp(-r_i S)] for
    every rate r_i.

    Solves the (n+1)x(n+1) system M d = (0,..,0,1)^T with M_ij =
    exp(-r_i * j) (last row all ones), which is a scaled Vandermonde matrix
    in the distinct values exp(-r_i). Feasibility requires c in (1 - eta, 1)
    with eta = 1 / sum_k max(d_k, 0).
    """
    rates = [float(r) for r in rates]
    n = len(rates)
    if n == 0 or any(not r > 0 for r in rates):
        raise BadParams("need at least one positive rate")
    for i in range(n):
        for j in range(i + 1, n):
            if abs(rates[i] - rates[j]) <= 1e-8 * max(rates[i], rates[j]):
                raise DuplicateRates(f"rates {rates[i]} and {rates[j]} coincide")
    full = np.array(rates + [0.0])
    cols = np.arange(1, n + 2, dtype=np.float64)
    m = np.exp(-np.outer(full, cols))
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    d = np.linalg.solve(m, rhs)
    d = d + np.linalg.solve(m, rhs - m @ d)  # one refinement step
    residual = float(np.max(np.abs(m @ d - rhs)))
    if residual > 1e-8:
        raise IllConditioned(f"Vandermonde residual {residual:g} after refinement")
    pos_sum = float(np.maximum(d, 0.0).sum())
    eta = 1.0 / pos_sum
    if not (1.0 - eta < c < 1.0):
        raise InfeasibleC(
            f"c must lie in ({1.0 - eta:g}, 1), got {c}", eta=eta
        )
    a = np.maximum((1.0 - c) * d, 0.0)
    a[0] += 1.0 - a.sum()  # slack goes to the first atom
    b = (a - (1.0 - c) * d) / c
    t_dist = make(cols, a)
    s_dist = make(cols, b)
    worst = 0.0
    for r in rates:
        lhs = discount_factor(t_dist, r)
        rhs_v = c * discount_factor(s_dist, r)
        worst = max(worst, abs(lhs - rhs_v) / rhs_v)
    if worst > 1e-10:
        raise IllConditioned(f"indifference residual {worst:g} exceeds 1e-10")
    return IndifferencePair(t_dist, s_dist, float(c), eta, tuple(float(v) for v in d))


# ---------------------------------------------------------------------------
# risk-invariant preferences

def risk_invariant_value(
    v: Callable[[float], float], mu_neg: MixingMeasure, d: FiniteDist
) -> float:
    """v(E[X]) + value(mu_neg, X), for mu_neg supported on [-inf, 0)."""
    if np.any(mu_neg.locations >= 0):
        raise BadSupport("risk-invariant part needs all atoms strictly negative")
    return float(v(moments(d).mean)) + evaluate(mu_neg, d)


# ---------------------------------------------------------------------------
# betweenness / independence classification

class BetweennessKind(Enum):
    POINT_MASS = "point_mass"
    BALANCED_PAIR = "balanced_pair"
    MIN_MAX_PAIR = "min_max_pair"
    NOT_BETWEENNESS = "not_betweenness"


@dataclass(frozen=True)
class BetweennessClass:
    kind: BetweennessKind
    satisfies: bool
    a: Optional[float] = None
    beta: Optional[float] = None
    reason: str = ""


def betweenness_form(beta: float, a: float) -> MixingMeasure:
    """The balanced two-atom measure beta*delta(-a*beta) + (1-beta)*delta(a*(1-beta))."""
    if not (0 < beta < 1) or not a > 0:
        raise BadParams("need beta in (0,1) and a > 0")
    return make_measure([-a * beta, a * (1.0 - beta)], [beta, 1.0 - beta])


def classify_betweenness(mu: MixingMeasure) -> BetweennessClass:
    locs, wts = mu.locations, mu.weights
    if locs.size == 1:
        if np.isfinite(locs[0]):
            return BetweennessClass(BetweennessKind.POINT_MASS, True, a=float(locs[0]))
        return BetweennessClass(
            BetweennessKind.NOT_BETWEENNESS,
            False,
            reason="a point mass at an infinite index is min/max, which fails "
            "the mixture-indifference requirement",
        )
    if locs.size == 2:
        a1, a2 = float(locs[0]), float(locs[1])
        if a1 == -np.inf and a2 == np.inf:
            return BetweennessClass(
                BetweennessKind.MIN_MAX_PAIR,
                False,
                beta=float(wts[0]),
                reason="min/max mixtures keep mixture indifference only one way "
                "and fail the full axiom",
            )
        if not (np.isfinite(a1) and np.isfinite(a2)):
            return BetweennessClass(
                BetweennessKind.NOT_BETWEENNESS,
                False,
                reason="one atom is infinite and the other finite",
            )
        if not (a1 < 0 < a2):
            return BetweennessClass(
                BetweennessKind.NOT_BETWEENNESS,
                False,
                reason="two-atom form needs atoms straddling zero",
            )
        span = a2 - a1
        expected_w1 = -a1 / span
        if abs(float(wts[0]) - expected_w1) <= 1e-10:
            return BetweennessClass(
                BetweennessKind.BALANCED_PAIR,
                True,
                a=span,
                beta=expected_w1,
            )
        return BetweennessClass(
            BetweennessKind.NOT_BETWEENNESS,
            False,
            reason=f"weight on {a1:g} is {float(wts[0]):g}, balanced form "
            f"requires {expected_w1:g}",
        )
    return BetweennessClass(
        BetweennessKind.NOT_BETWEENNESS,
        False,
        reason=f"{locs.size} atoms; betweenness admits at most two",
    )


# ---------------------------------------------------------------------------
# combined choices: violation search

@dataclass(frozen=True)
class GambleGrid:
    """Finite gamble universe: distributions over `values` whose
    probabilities are multiples of prob_step and whose support has at most
    max_support points. Enumeration order is the lexicographic order of the
    integer probability compositions, which fixes the search order."""

    values: Tuple[float, ...]
    prob_step: float = 0.25
    max_support: int = 2

    def gambles(self) -> List[FiniteDist]:
        m = round(1.0 / self.prob_step)
        if abs(m * self.prob_step - 1.0) > 1e-12 or m < 1:
            raise BadParams("prob_step must divide 1")
        k = len(self.values)
        out = []
        for combo in itertools.product(range(m + 1), repeat=k):
            if sum(combo) != m:
                continue
            support = [v for v, c in zip(self.values, combo) if c > 0]
            if not support or len(support) > self.max_support:
                continue
            probs = [c * self.prob_step for c in combo if c > 0]
            out.append(make(support, probs))
        return out


def median(d: FiniteDist) -> float:
    """Smallest outcome with cdf >= 1/2."""
    cum = np.cumsum(d.probs)
    i = int(np.searchsorted(cum, 0.5 - 1e-12, side="left"))
    return float(d.support[min(i, d.n_atoms - 1)])


def find_framing_violation(
    pref1: Callable[[FiniteDist], float],
    pref2: Callable[[FiniteDist], float],
    grid: GambleGrid,
    max_candidates: int = 10**5,
) -> Optional[Tuple[FiniteDist, FiniteDist, FiniteDist, FiniteDist]]:
    """First quadruple (X, X', Y, Y') in canonical grid order with
    pref1(X) > pref1(X'), pref2(Y) > pref2(Y'), and X' + Y' strictly
    first-order dominating X + Y; None if none exists within the budget.
    """
    gambles = grid.gambles()
    v1 = [pref1(g) for g in gambles]
    v2 = [pref2(g) for g in gambles]
    n = len(gambles)
    pairs1 = [(i, j) for i in range(n) for j in range(n) if v1[i] > v1[j]]
    pairs2 = [(i, j) for i in range(n) for j in range(n) if v2[i] > v2[j]]
    conv_cache = {}

    def conv(i, j):
        key = (i, j) if i <= j else (j, i)
        got = conv_cache.get(key)
        if got is None:
            got = convolve(gambles[key[0]], gambles[key[1]])
            conv_cache[key] = got
        return got

    examined = 0
    for i, ip in pairs1:
        for k, kp in pairs2:
            examined += 1
            if examined > max_candidates:
                return None
            chosen = conv(i, k)
            rejected = conv(ip, kp)
            res = fosd(rejected, chosen, tol=1e-12)
            if res.dominates and res.strict:
                return (gambles[i], gambles[ip], gambles[k], gambles[kp])
    return None


def count_candidates(
    pref1: Callable[[FiniteDist], float],
    pref2: Callable[[FiniteDist], float],
    grid: GambleGrid,
) -> int:
    """Size of the quadruple search space for the given preferences."""
    gambles = grid.gambles()
    v1 = [pref1(g) for g in gambles]
    v2 = [pref2(g) for g in gambles]
    n = len(gambles)
    n1 = sum(1 for i in range(n) for j in range(n) if v1[i] > v1[j])
    n2 = sum(1 for i in range(n) for j in range(n) if v2[i] > v2[j])
    return n1 * n2


def preference_mean(d: FiniteDist) -> float:
    return moments(d).mean


def preference_mean_variance(k: float) -> Callable[[FiniteDist], float]:
    def pref(d: FiniteDist) -> float:
        m = moments(d)
        return m.mean - k * m.variance

    return pref


def preference_mas(mu: MixingMeasure) -> Callable[[FiniteDist], float]:
    def pref(d: FiniteDist) -> float:
        return evaluate(mu, d)

    return pref

"""Finite discrete probability distributions and their measure algebra.

A FiniteDist is an immutable pair of arrays: a strictly increasing support
and strictly positive probabilities summing to one. All operations are pure
functions returning new canonical distributions, so values can be shared
freely across threads.

Probabilities are stored as doubles. A parallel array of log-probabilities
is kept alongside them: the CGF evaluator works in log space, which lets
test-oracle constructions carry masses far below the double underflow
threshold (for example decay_two_point with b*n of a few thousand). For
atoms built from ordinary probabilities the two arrays agree to rounding.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import (
    BadInterval,
    BadParams,
    LambdaOutOfRange,
    LengthMismatch,
    MassNotOne,
    NegativeProb,
    SupportBlowup,
)

#: Absolute snap tolerance: support points closer than this merge into one atom.
SNAP_TOL = 1e-9

#: Cap on support sizes produced by convolution (guards against silent blowup).
SUPPORT_CAP = 1 << 20

MASS_TOL = 1e-9


@dataclass(frozen=True)
class FiniteDist:
    """Finite-support distribution on the reals (canonical form)."""

    support: np.ndarray
    probs: np.ndarray
    log_probs: np.ndarray

    def __post_init__(self):
        for arr in (self.support, self.probs, self.log_probs):
            arr.setflags(write=False)
        if self.support.ndim != 1 or self.support.shape != self.probs.shape:
            raise LengthMismatch("support and probs must be 1-D arrays of equal length")
        if self.support.size == 0:
            raise LengthMismatch("distribution must have at least one atom")
        if np.any(np.diff(self.support) <= 0):
            raise BadParams("support must be strictly increasing")

    @property
    def n_atoms(self) -> int:
        return self.support.size

    def __repr__(self):
        pairs = ", ".join(
            f"{x:g}:{p:g}" for x, p in zip(self.support[:6], self.probs[:6])
        )
        tail = ", ..." if self.n_atoms > 6 else ""
        return f"FiniteDist({pairs}{tail})"


class Moments(NamedTuple):
    mean: float
    variance: float
    lo: float
    hi: float


def _canonical(support, probs, log_probs=None) -> FiniteDist:
    """Sort, snap-merge, drop zero-mass atoms, renormalize."""
    support = np.asarray(support, dtype=np.float64).ravel()
    probs = np.asarray(probs, dtype=np.float64).ravel()
    order = np.argsort(support, kind="stable")
    support = support[order]
    probs = probs[order]
    if log_probs is None:
        merged_v, merged_p = _kernels.merge_sorted(support, probs, SNAP_TOL)
        keep = merged_p > 0.0
        merged_v = merged_v[keep]
        merged_p = merged_p[keep]
        if merged_v.size == 0:
            raise MassNotOne("all atoms have zero mass")
        merged_p = merged_p / merged_p.sum()
        merged_lp = np.log(merged_p)
        return FiniteDist(merged_v, merged_p, merged_lp)
    # log-space path: merge groups with logaddexp so sub-underflow masses survive
    log_probs = np.asarray(log_probs, dtype=np.float64).ravel()[order]
    starts = np.flatnonzero(np.concatenate(([True], np.diff(support) > SNAP_TOL)))
    merged_lp = np.logaddexp.reduceat(log_probs, starts)
    ends = np.append(starts[1:], support.size) - 1
    merged_v = np.where(
        support[starts] == support[ends],
        support[starts],
        [
            np.average(support[s:e + 1], weights=np.exp(log_probs[s:e + 1] - log_probs[s:e + 1].max()))
            for s, e in zip(starts, ends)
        ],
    )
    keep = merged_lp > -np.inf
    merged_v = merged_v[keep]
    merged_lp = merged_lp[keep]
    if merged_v.size == 0:
        raise MassNotOne("all atoms have zero mass")
    total = _logsumexp(merged_lp)
    merged_lp = merged_lp - total
    merged_p = np.exp(merged_lp)
    s = merged_p.sum()
    if s > 0:
        merged_p = merged_p / s
    return FiniteDist(np.asarray(merged_v, dtype=np.float64), merged_p, merged_lp)


def _logsumexp(v):
    m = np.max(v)
    if not np.isfinite(m):
        return m
    return m + np.log(np.sum(np.exp(v - m)))


def make(support, probs, *, log_probs=None) -> FiniteDist:
    """Validate and canonicalize a distribution given as parallel lists.

    Raises LengthMismatch, NegativeProb, or MassNotOne on bad input.
    """
    support = np.asarray(support, dtype=np.float64).ravel()
    probs = np.asarray(probs, dtype=np.float64).ravel()
    if support.size != probs.size or support.size == 0:
        raise LengthMismatch(
            f"support has {support.size} entries, probs has {probs.size}"
        )
    if not np.all(np.isfinite(support)):
        raise BadParams("support points must be finite")
    if np.any(probs < 0):
        raise NegativeProb("probabilities must be nonnegative")
    total = probs.sum()
    if abs(total - 1.0) > MASS_TOL:
        raise MassNotOne(f"probabilities sum to {total!r}, expected 1")
    return _canonical(support, probs, log_probs)


def convolve(d1: FiniteDist, d2: FiniteDist, *, cap: int = SUPPORT_CAP) -> FiniteDist:
    """Distribution of X + Y for independent X ~ d1, Y ~ d2."""
    n_pairs = d1.n_atoms * d2.n_atoms
    if n_pairs > cap:
        raise SupportBlowup(
            f"convolution would enumerate {n_pairs} atom pairs (cap {cap})"
        )
    vals = (d1.support[:, None] + d2.support[None, :]).ravel()
    wts = (d1.probs[:, None] * d2.probs[None, :]).ravel()
    return _canonical(vals, wts)


def iid_power(d: FiniteDist, n: int, *, cap: int = SUPPORT_CAP) -> FiniteDist:
    """Sum of n i.i.d. copies of d, via binary exponentiation over convolve."""
    if n < 1 or int(n) != n:
        raise BadParams("n must be a positive integer")
    n = int(n)
    acc = None
    base = d
    while True:
        if n & 1:
            acc = base if acc is None else convolve(acc, base, cap=cap)
        n >>= 1
        if n == 0:
            return acc
        base = convolve(base, base, cap=cap)


def mixture(d1: FiniteDist, d2: FiniteDist, lam: float) -> FiniteDist:
    """Probability mixture: d1 with probability lam, d2 with 1 - lam."""
    if not 0.0 <= lam <= 1.0:
        raise LambdaOutOfRange(f"lambda must lie in [0, 1], got {lam}")
    if lam == 1.0:
        return d1
    if lam == 0.0:
        return d2
    vals = np.concatenate((d1.support, d2.support))
    wts = np.concatenate((lam * d1.probs, (1.0 - lam) * d2.probs))
    return _canonical(vals, wts)


def shift(d: FiniteDist, c: float) -> FiniteDist:
    if c == 0.0:
        return d
    return FiniteDist(d.support + c, d.probs.copy(), d.log_probs.copy())


def negate(d: FiniteDist) -> FiniteDist:
    return FiniteDist(
        -d.support[::-1], d.probs[::-1].copy(), d.log_probs[::-1].copy()
    )


def cdf(d: FiniteDist, x):
    """Right-continuous cdf P(X <= x); accepts scalars or arrays.

    The cumulative masses are renormalized by their total so the cdf ends
    at exactly 1.0 regardless of accumulated rounding.
    """
    cum = np.cumsum(d.probs)
    cum = cum / cum[-1]
    idx = np.searchsorted(d.support, x, side="right")
    out = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def moments(d: FiniteDist) -> Moments:
    mean = float(np.dot(d.probs, d.support))
    var = float(np.dot(d.probs, (d.support - mean) ** 2))
    return Moments(mean, var, float(d.support[0]), float(d.support[-1]))


def discretize_uniform(a: float, b: float, step: float) -> FiniteDist:
    """Midpoint discretization of the uniform law on [a, b].

    Atoms sit at midpoints of equal cells of width <= step, each with the
    cell's mass; the mean (a + b) / 2 is preserved exactly. step = b - a
    collapses to the single midpoint.
    """
    if not (a < b) or not (0 < step <= (b - a) * (1 + 1e-12)):
        raise BadInterval(f"need a < b and 0 < step <= b - a, got {(a, b, step)}")
    n = int(math.ceil((b - a) / step - 1e-12))
    h = (b - a) / n
    mids = a + (np.arange(n) + 0.5) * h
    return _canonical(mids, np.full(n, 1.0 / n))


def discretize_trunc_gaussian(v: float, t: float, step: float) -> FiniteDist:
    """Gaussian density exp(-x^2 / 2V) truncated to [-T, T], midpoint-discretized.

    The grid is mirror-symmetric, so negate(Z) == Z exactly.
    """
    if not (v > 0 and t > 0 and 0 < step <= t / 4):
        raise BadParams(f"need V > 0, T > 0, 0 < step <= T/4, got {(v, t, step)}")
    n = int(math.ceil(2 * t / step - 1e-12))
    h = 2 * t / n
    half = np.arange(n // 2) + 0.5
    pos = half * h
    if n % 2:
        pos = np.concatenate(([0.0], (np.arange(n // 2) + 1.0) * h))
        sup = np.concatenate((-pos[:0:-1], pos))
    else:
        sup = np.concatenate((-pos[::-1], pos))
    wpos = np.exp(-(pos * pos) / (2.0 * v))
    if n % 2:
        w = np.concatenate((wpos[:0:-1], wpos))
    else:
        w = np.concatenate((wpos[::-1], wpos))
    total = w.sum()
    if total <= 0.0:
        raise BadParams(
            "every cell weight underflows; the grid has no point within the "
            "Gaussian's representable radius"
        )
    w = w / total
    keep = w > 0.0  # cells past the underflow radius carry no mass
    sup, w = sup[keep], w[keep]
    w = w / w.sum()
    return FiniteDist(sup, w, np.log(w))


def decay_two_point(n: int, b: float) -> FiniteDist:
    """Two-point test distribution {n -> exp(-b*n), 0 -> 1 - exp(-b*n)}.

    Built through the log-probability path so that masses below the double
    underflow threshold still evaluate correctly in the CGF.
    """
    if n < 1 or int(n) != n:
        raise BadParams("n must be a positive integer")
    if not b > 0:
        raise BadParams("b must be positive")
    n = int(n)
    log_top = -b * n
    # log(1 - e^{log_top}) without cancellation
    if log_top > -36.0:
        log_bottom = math.log(-math.expm1(log_top))
    else:
        log_bottom = math.log1p(-math.exp(log_top))
    return _canonical(
        [0.0, float(n)],
        [math.exp(log_bottom), math.exp(log_top)],
        log_probs=[log_bottom, log_top],
    )


def floor_dist(d: FiniteDist) -> FiniteDist:
    """Round every outcome down to an integer (with a 1e-9 snap guard)."""
    vals = np.floor(d.support + 1e-9)
    return _canonical(vals, d.probs)


def merged_support(d1: FiniteDist, d2: FiniteDist) -> np.ndarray:
    return np.union1d(d1.support, d2.support)

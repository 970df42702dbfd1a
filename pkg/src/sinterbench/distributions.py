"""Distribution representations and operations: empirical sample sets, weighted
Dirac mixtures, quantile quantization, mean-exact compression, descriptive
statistics, and the exact 1-D p-Wasserstein distance.

A DiracMixture stores N weighted support points, sorted ascending; weights are
strictly positive and sum to one. Compression partitions the sorted points into
groups of equal total weight (splitting point weights at group boundaries) and
replaces each group by its weighted centroid, so the overall mean is preserved
exactly and the variance never increases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import ConfigError, NumericError
from .measurement import NoiseModel

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class EmpiricalDistribution:
    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ConfigError("EmpiricalDistribution needs a non-empty 1-D sample set")
        if not np.all(np.isfinite(arr)):
            raise NumericError("EmpiricalDistribution contains non-finite samples")
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class DiracMixture:
    xs: np.ndarray  # support, sorted ascending
    ws: np.ndarray  # weights, > 0, sum to 1

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ws = np.asarray(self.ws, dtype=float)
        if xs.size == 0 or xs.shape != ws.shape:
            raise ConfigError("DiracMixture needs matching non-empty support and weights")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ws))):
            raise NumericError("DiracMixture contains non-finite values")
        if np.any(ws <= 0):
            raise ConfigError("DiracMixture weights must be strictly positive")
        if abs(ws.sum() - 1.0) > 1e-9:
            raise ConfigError(f"DiracMixture weights sum to {ws.sum()}, expected 1")
        if np.any(np.diff(xs) < 0):
            raise ConfigError("DiracMixture support must be sorted ascending")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ws", ws)

    def __len__(self) -> int:
        return self.xs.size

    @property
    def mean(self) -> float:
        return float(np.dot(self.xs, self.ws))

    @property
    def variance(self) -> float:
        return float(np.dot((self.xs - self.mean) ** 2, self.ws))

    @staticmethod
    def from_points(xs, ws) -> "DiracMixture":
        """Sort, merge duplicate support values, and renormalize weights."""
        xs = np.asarray(xs, dtype=float)
        ws = np.asarray(ws, dtype=float)
        order = np.argsort(xs, kind="stable")
        xs, ws = xs[order], ws[order]
        keep = np.concatenate([[True], np.diff(xs) > 0])
        idx = np.cumsum(keep) - 1
        merged_w = np.zeros(int(idx[-1]) + 1)
        np.add.at(merged_w, idx, ws)
        merged_x = xs[keep]
        pos = merged_w > 0
        merged_w = merged_w[pos] / merged_w[pos].sum()
        return DiracMixture(xs=merged_x[pos], ws=merged_w)

    @staticmethod
    def dirac(x: float) -> "DiracMixture":
        return DiracMixture(xs=np.array([float(x)]), ws=np.array([1.0]))

    def to_json_points(self) -> list[list[float]]:
        return [[float(x), float(w)] for x, w in zip(self.xs, self.ws)]


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std: float       # sample std (n-1) for empirical input, weighted for mixtures
    skewness: float
    kurtosis: float  # non-excess: Gaussian -> 3
    mode: float
    ci_lo: float     # 2.5th weighted percentile
    ci_hi: float     # 97.5th weighted percentile
    moments_defined: bool = True


def _support_weights(d) -> tuple[np.ndarray, np.ndarray, int]:
    """(sorted support, weights, nominal count) for either representation."""
    if isinstance(d, EmpiricalDistribution):
        xs = np.sort(d.samples)
        n = xs.size
        return xs, np.full(n, 1.0 / n), n
    if isinstance(d, DiracMixture):
        return d.xs, d.ws, len(d)
    raise ConfigError(f"unsupported distribution type {type(d).__name__}")


def quantize(model: NoiseModel, n: int) -> DiracMixture:
    """Equiprobable midpoint-quantile mixture: x_i = Finv((i - 0.5)/n), w = 1/n."""
    if n < 1:
        raise ConfigError(f"quantize: representation size must be >= 1, got {n}")
    u = (np.arange(n) + 0.5) / n
    if model.kind == "gaussian":
        nd = NormalDist(model.mu, model.sigma)
        xs = np.array([nd.inv_cdf(p) for p in u])
    elif model.kind == "uniform":
        xs = model.a + (model.b - model.a) * u
    else:
        xs = np.zeros(n)
    return DiracMixture.from_points(xs, np.full(n, 1.0 / n))


def _group_boundaries(xs: np.ndarray, ws: np.ndarray, n: int):
    """Cumulative (weight, weight*x) evaluated at the n+1 equal-weight cuts.

    Splitting a point's weight across a boundary keeps every group's total
    weight exactly 1/n; telescoping the cumulative products makes the overall
    weighted mean of the output exact.
    """
    cw = np.concatenate([[0.0], np.cumsum(ws)])
    cwx = np.concatenate([[0.0], np.cumsum(ws * xs)])
    total = cw[-1]
    cuts = np.linspace(0.0, total, n + 1)
    j = np.searchsorted(cw, cuts[1:-1], side="left")
    j = np.clip(j, 1, xs.size)
    frac = cuts[1:-1] - cw[j - 1]
    bx = cwx[j - 1] + frac * xs[j - 1]
    cut_w = np.concatenate([[0.0], cuts[1:-1], [total]])
    cut_wx = np.concatenate([[0.0], bx, [cwx[-1]]])
    return cut_w, cut_wx


def compress(m: DiracMixture, n: int) -> DiracMixture:
    """Reduce to n points by sorted equal-weight group centroids (mean-exact)."""
    if n < 1:
        raise ConfigError(f"compress: target size must be >= 1, got {n}")
    if len(m) <= n:
        return m
    cut_w, cut_wx = _group_boundaries(m.xs, m.ws, n)
    gw = np.diff(cut_w)
    gx = np.diff(cut_wx) / gw
    return DiracMixture.from_points(gx, gw / gw.sum())


def combine(a: DiracMixture, b: DiracMixture, f, n: int) -> DiracMixture:
    """Independence combination: product set {(f(xa, xb), wa*wb)}, compressed to n."""
    if n < 1:
        raise ConfigError(f"combine: target size must be >= 1, got {n}")
    xa = np.repeat(a.xs, len(b))
    xb = np.tile(b.xs, len(a))
    vals = np.asarray(f(xa, xb), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = int(np.argmax(~np.isfinite(vals)))
        raise NumericError(
            f"combine: non-finite result for pair ({xa[bad]}, {xb[bad]})"
        )
    ws = np.repeat(a.ws, len(b)) * np.tile(b.ws, len(a))
    return compress(DiracMixture.from_points(vals, ws), n)


def weighted_percentile(xs: np.ndarray, ws: np.ndarray, q: float) -> float:
    """Weighted percentile (q in [0, 100]) with linear interpolation between
    midpoint plotting positions."""
    c = np.cumsum(ws) - 0.5 * ws
    c /= ws.sum()
    return float(np.interp(q / 100.0, c, xs))


def _histogram_mode(xs: np.ndarray, ws: np.ndarray) -> float:
    """Center of the most populous Freedman-Diaconis bin; ties pick the lowest."""
    lo, hi = xs[0], xs[-1]
    if hi == lo:
        return float(lo)
    iqr = weighted_percentile(xs, ws, 75.0) - weighted_percentile(xs, ws, 25.0)
    n = xs.size
    width = 2.0 * iqr / n ** (1.0 / 3.0)
    if width <= 0:
        width = (hi - lo) / max(1, int(math.sqrt(n)))
    nbins = max(1, min(int(math.ceil((hi - lo) / width)), 10_000))
    edges = np.linspace(lo, hi, nbins + 1)
    idx = np.clip(np.searchsorted(edges, xs, side="right") - 1, 0, nbins - 1)
    mass = np.zeros(nbins)
    np.add.at(mass, idx, ws)
    best = int(np.argmax(mass))  # argmax returns the first (lowest) maximal bin
    return float(0.5 * (edges[best] + edges[best + 1]))


def raw_moment_sums(xs: np.ndarray, ws: np.ndarray | None = None) -> tuple:
    """(n_or_total_weight, s1..s4) raw power sums; shared with the streaming
    accumulators so that streaming and batch moments agree bit-for-bit."""
    if ws is None:
        return (float(xs.size), float(xs.sum()), float((xs**2).sum()),
                float((xs**3).sum()), float((xs**4).sum()))
    return (float(ws.sum()), float((ws * xs).sum()), float((ws * xs**2).sum()),
            float((ws * xs**3).sum()), float((ws * xs**4).sum()))


def moments_from_sums(n, s1, s2, s3, s4, sample_std: bool):
    """(mean, std, skewness, kurtosis) from raw power sums."""
    mean = s1 / n
    m2 = s2 / n - mean**2
    m3 = s3 / n - 3 * mean * s2 / n + 2 * mean**3
    m4 = s4 / n - 4 * mean * s3 / n + 6 * mean**2 * s2 / n - 3 * mean**4
    m2 = max(m2, 0.0)
    if m2 == 0.0:
        return mean, 0.0, 0.0, 0.0
    if sample_std and n > 1:
        var = m2 * n / (n - 1)
    else:
        var = m2
    skew = m3 / m2**1.5
    kurt = m4 / m2**2
    return mean, math.sqrt(var), skew, kurt


def stats(d) -> SummaryStats:
    """Weighted descriptive statistics; see SummaryStats for conventions."""
    xs, ws, n = _support_weights(d)
    sample_std = isinstance(d, EmpiricalDistribution)
    sums = raw_moment_sums(xs, None if sample_std else ws)
    defined = np.unique(xs).size >= 2
    if defined:
        mean, std, skew, kurt = moments_from_sums(*sums, sample_std=sample_std)
    else:
        mean, std, skew, kurt = float(xs[0]), 0.0, 0.0, 0.0
    return SummaryStats(
        mean=mean, std=std, skewness=skew, kurtosis=kurt,
        mode=_histogram_mode(xs, ws),
        ci_lo=weighted_percentile(xs, ws, 2.5),
        ci_hi=weighted_percentile(xs, ws, 97.5),
        moments_defined=bool(defined),
    )


def wasserstein(p: float, a, b) -> float:
    """Exact 1-D p-Wasserstein distance via a merge pass over the two weighted
    quantile functions: Wp = (int_0^1 |Fa^-1(u) - Fb^-1(u)|^p du)^(1/p)."""
    if p < 1:
        raise ConfigError(f"wasserstein order must be >= 1, got {p}")
    xa, wa, _ = _support_weights(a)
    xb, wb, _ = _support_weights(b)
    qa = np.cumsum(wa) / wa.sum()
    qb = np.cumsum(wb) / wb.sum()
    qa[-1] = qb[-1] = 1.0
    u = np.union1d(qa, qb)
    ia = np.minimum(np.searchsorted(qa, u - 1e-15), xa.size - 1)
    ib = np.minimum(np.searchsorted(qb, u - 1e-15), xb.size - 1)
    du = np.diff(np.concatenate([[0.0], u]))
    gaps = np.abs(xa[ia] - xb[ib])
    if p == 1:
        return float(np.dot(du, gaps))
    return float(np.dot(du, gaps**p) ** (1.0 / p))

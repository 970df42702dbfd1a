"""Measurement-uncertainty models and the measured-temperature map.

The measured temperature is the true spot temperature plus one additive noise
draw. Noise is either Gaussian(mu, sigma) -- sigma is a standard deviation in
degC, not a variance -- Uniform(a, b), or no noise at all.

Random streams are counter-based (Philox) and splittable: a 64-bit global seed
plus a (domain, path) pair derive independent substreams, so ensembles are
bit-reproducible regardless of how paths are scheduled across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

# Stream domains keep seed spaces disjoint (ground truth must never share
# draws with benchmark ensembles).
DOMAIN_SIM = 0
DOMAIN_GROUND_TRUTH = 1
DOMAIN_CALIBRATION = 2

_PATH_BITS = 48


@dataclass(frozen=True)
class NoiseModel:
    """Tagged measurement-noise description: 'gaussian', 'uniform' or 'none'."""

    kind: str
    mu: float = 0.0
    sigma: float = 0.0
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in ("gaussian", "uniform", "none"):
            raise ConfigError(f"unknown noise kind {self.kind!r}")
        if self.kind == "gaussian":
            if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
                raise ConfigError("gaussian noise parameters must be finite")
            if self.sigma <= 0:
                raise ConfigError(f"gaussian sigma must be > 0, got {self.sigma}")
        if self.kind == "uniform":
            if not (math.isfinite(self.a) and math.isfinite(self.b)):
                raise ConfigError("uniform noise parameters must be finite")
            if not self.a < self.b:
                raise ConfigError(f"uniform bounds need a < b, got [{self.a}, {self.b}]")

    @staticmethod
    def gaussian(mu: float, sigma: float) -> "NoiseModel":
        return NoiseModel("gaussian", mu=mu, sigma=sigma)

    @staticmethod
    def uniform(a: float, b: float) -> "NoiseModel":
        return NoiseModel("uniform", a=a, b=b)

    @staticmethod
    def none() -> "NoiseModel":
        return NoiseModel("none")

    @property
    def mean(self) -> float:
        if self.kind == "gaussian":
            return self.mu
        if self.kind == "uniform":
            return 0.5 * (self.a + self.b)
        return 0.0

    @property
    def variance(self) -> float:
        if self.kind == "gaussian":
            return self.sigma**2
        if self.kind == "uniform":
            return (self.b - self.a) ** 2 / 12.0
        return 0.0


# Appendix defaults: Gaussian N(0, 0.5) read as std-dev 0.5 degC, U[-1.5, 1.5].
DEFAULT_GAUSSIAN = NoiseModel.gaussian(0.0, 0.5)
DEFAULT_UNIFORM = NoiseModel.uniform(-1.5, 1.5)


def parse_noise(text: str) -> NoiseModel:
    """Parse a CLI/config noise spec: 'none', 'gaussian:mu,sigma' or 'uniform:a,b'."""
    text = text.strip().lower()
    if text == "none":
        return NoiseModel.none()
    try:
        kind, args = text.split(":", 1)
        lo, hi = (float(v) for v in args.split(","))
    except ValueError as exc:
        raise ConfigError(f"cannot parse noise spec {text!r}") from exc
    if kind == "gaussian":
        return NoiseModel.gaussian(lo, hi)
    if kind == "uniform":
        return NoiseModel.uniform(lo, hi)
    raise ConfigError(f"unknown noise kind {kind!r}")


def substream(seed: int, path: int, domain: int = DOMAIN_SIM) -> np.random.Generator:
    """Independent counter-based stream for one simulation path.

    The Philox key packs (seed, domain, path); distinct triples give
    statistically independent streams, and the derivation is pure.
    """
    if not 0 <= path < 1 << _PATH_BITS:
        raise ConfigError(f"path index {path} outside the {_PATH_BITS}-bit stream domain")
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
                    np.uint64((domain << _PATH_BITS) | path)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample(model: NoiseModel, rng: np.random.Generator, size=None):
    """Draw noise variates from the model; the 'none' model yields exact zeros."""
    if model.kind == "gaussian":
        return rng.normal(model.mu, model.sigma, size)
    if model.kind == "uniform":
        return rng.uniform(model.a, model.b, size)
    return 0.0 if size is None else np.zeros(size)


def measure(t_true: float, eps: float) -> float:
    """Measured temperature: true spot temperature plus one noise draw (degC)."""
    out = t_true + eps
    if not np.all(np.isfinite(out)):
        raise ConfigError("non-finite measurement input")
    return out

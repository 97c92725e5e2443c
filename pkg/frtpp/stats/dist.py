from enum import Enum
from typing import Optional, Union
import numpy as np
from scipy.special import ndtr, ndtri
from .rng import RngStream

ArrayLike = Union[float, np.ndarray]

# lower bounds above this use Rayleigh rejection, below it the inverse cdf
_TAIL_SWITCH = 0.66
_LOG_2PI = float(np.log(2.0 * np.pi))


class Truncation(str, Enum):
    ABOVE_ZERO = "above0"
    BELOW_ZERO = "below0"


def _positive(name: str, value: ArrayLike):
    value = np.asarray(value, dtype=float)
    if np.any(~(value > 0)):
        raise ValueError(f"{name} must be strictly positive, got {value if value.ndim == 0 else 'array'}")
    return value

def _unwrap(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values.reshape(-1)[0]) if scalar else values


def normal_cdf(u: ArrayLike) -> ArrayLike:
    """standard normal cumulative distribution Phi(u)"""
    return ndtr(u)

def normal_logpdf(y: ArrayLike, mean: ArrayLike, variance: ArrayLike) -> ArrayLike:
    variance = _positive("variance", variance)
    y = np.asarray(y, dtype=float)
    return -0.5 * (_LOG_2PI + np.log(variance) + (y - mean) ** 2 / variance)

def normal_pdf(y: ArrayLike, mean: ArrayLike, variance: ArrayLike) -> ArrayLike:
    return np.exp(normal_logpdf(y, mean, variance))


def sample_normal(stream: RngStream, mean: ArrayLike, variance: ArrayLike,
                  size: Optional[int] = None) -> ArrayLike:
    variance = _positive("variance", variance)
    return stream.generator.normal(mean, np.sqrt(variance), size=size)


def sample_inverse_gamma(stream: RngStream, shape: ArrayLike, rate: ArrayLike,
                         size: Optional[int] = None) -> ArrayLike:
    """
    Draw from IG(shape, rate), the law of 1/G with G ~ Gamma(shape, scale=1/rate).

    Very small shapes (the default prior uses 0.1) put mass on gamma draws close to
    zero, so the gamma draw is floored at the smallest normal float.
    """
    shape = _positive("shape", shape)
    rate = _positive("rate", rate)
    draws = stream.generator.gamma(shape, 1.0 / rate, size=size)
    return 1.0 / np.maximum(draws, np.finfo(float).tiny)


def _rayleigh_tail(stream: RngStream, lower: np.ndarray) -> np.ndarray:
    # Marsaglia's tail method: propose from the Rayleigh tail, accept with V^2 x <= c
    gen = stream.generator
    c = lower ** 2 / 2
    x = c - np.log1p(-gen.random(c.size))
    rejected = gen.random(c.size) ** 2 * x > c
    while np.any(rejected):
        idx = np.flatnonzero(rejected)
        y = c[idx] - np.log1p(-gen.random(idx.size))
        accepted = gen.random(idx.size) ** 2 * y <= c[idx]
        x[idx[accepted]] = y[accepted]
        rejected[idx[accepted]] = False
    return np.sqrt(2 * x)

def standard_normal_above(stream: RngStream, lower: ArrayLike) -> np.ndarray:
    """
    Draw X ~ N(0, 1) conditioned on X > lower, elementwise.

    Bounds up to `_TAIL_SWITCH` use the inverse cdf of the upper tail; deeper bounds
    use Rayleigh rejection, which stays exact however far out the bound sits.
    """
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    x = np.empty_like(lower)
    tail = lower > _TAIL_SWITCH
    body = ~tail
    if np.any(body):
        upper_mass = ndtr(-lower[body])
        u = stream.generator.random(int(body.sum()))
        x[body] = -ndtri(upper_mass * (1.0 - u))
    if np.any(tail):
        x[tail] = _rayleigh_tail(stream, lower[tail])
    return np.maximum(x, lower)


def sample_truncated_normal(stream: RngStream, mean: ArrayLike, variance: ArrayLike,
                            side: Union[Truncation, str], size: Optional[int] = None) -> ArrayLike:
    side = Truncation(side)
    variance = _positive("variance", variance)
    scalar = size is None and np.ndim(mean) == 0 and np.ndim(variance) == 0
    shape = size if size is not None else np.broadcast(np.asarray(mean), variance).shape
    mean = np.broadcast_to(np.asarray(mean, dtype=float), shape).reshape(-1)
    sd = np.broadcast_to(np.sqrt(variance), shape).reshape(-1)
    if side is Truncation.ABOVE_ZERO:
        draws = mean + sd * standard_normal_above(stream, -mean / sd)
    else:
        draws = mean - sd * standard_normal_above(stream, mean / sd)
    return _unwrap(draws.reshape(shape), scalar)


def sample_signed_truncated_normal(stream: RngStream, mean: np.ndarray,
                                   positive: np.ndarray) -> np.ndarray:
    """
    Unit variance normal draws around `mean`, truncated above zero where
    `positive` is true and below zero elsewhere.
    """
    mean = np.asarray(mean, dtype=float)
    positive = np.asarray(positive, dtype=bool)
    sign = np.where(positive, 1.0, -1.0)
    return mean + sign * standard_normal_above(stream, -sign * mean)


def sample_permutation(stream: RngStream, n: int, n_t: int) -> np.ndarray:
    """
    Completely randomized assignment: exactly n_t ones among n units, uniform over
    all C(n, n_t) arrangements.
    """
    if not 0 < n_t < n:
        raise ValueError(f"assignment needs 0 < n_t < n, got n={n}, n_t={n_t}")
    z = np.zeros(n, dtype=np.int8)
    z[stream.generator.permutation(n)[:n_t]] = 1
    return z


def sample_bernoulli(stream: RngStream, p: ArrayLike) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return (stream.generator.random(p.shape) < p).astype(np.int8)

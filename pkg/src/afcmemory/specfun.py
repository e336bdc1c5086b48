"""Dawson's integral and Hilbert-transform machinery for dispersion profiles.

All transforms use the sign convention

    phi(w) = (1/pi) PV int D(t) / (t - w) dt,

under which a single absorption line produces anomalous (negative-slope)
dispersion at its centre. For the unit Gaussian line exp(-4 ln2 w^2) this
gives ``phi(w) = -(2/sqrt(pi)) * dawson(sqrt(4 ln2) * w)``.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ._validation import check_uniform
from .exceptions import ConfigurationError, QuadratureError

__all__ = [
    "SampledProfile",
    "dawson",
    "gaussian_dispersion",
    "hilbert_pv",
    "hilbert_fft",
    "hilbert_interval",
    "GAUSS_RATE",
]

# exp(-GAUSS_RATE * w**2) has unit FWHM
GAUSS_RATE = 4.0 * np.log(2.0)
_SQRT_RATE = np.sqrt(GAUSS_RATE)

# Series and asymptotic forms agree to < 1e-15 here (see tests).
_DAWSON_SWITCH = 6.0


def _dawson_series(x):
    # exp(-x^2) * sum x^(2n+1) / (n! (2n+1)); every term positive, so no cancellation
    x2 = x * x
    term = x * np.exp(-x2)
    total = term.copy()
    n_max = int(np.ceil(np.max(x2, initial=0.0) + 12 * np.sqrt(np.max(x2, initial=0.0)) + 40))
    for n in range(1, n_max):
        term = term * x2 / n
        total += term / (2 * n + 1)
    return total


def _dawson_asymptotic(x):
    # 1/(2x) * sum (2n-1)!! / (2x^2)^n; for x >= 6 the terms shrink past n = 36
    inv = 1.0 / (2.0 * x * x)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for n in range(1, 36):
        term = term * (2 * n - 1) * inv
        total += term
    return total / (2.0 * x)


def dawson(x):
    """Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.

    Accepts scalars or arrays. Absolute error is below 1e-12 on |x| <= 25;
    beyond that the asymptotic series is used unchanged.
    """
    arr = np.asarray(x, dtype=float)
    ax = np.abs(np.atleast_1d(arr))
    out = np.empty_like(ax)
    small = ax < _DAWSON_SWITCH
    if np.any(small):
        out[small] = _dawson_series(ax[small])
    if np.any(~small):
        out[~small] = _dawson_asymptotic(ax[~small])
    out = np.copysign(out, np.atleast_1d(arr))
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def gaussian_dispersion(omega):
    """Closed-form transform of the unit-FWHM Gaussian line exp(-4 ln2 w^2)."""
    return -(2.0 / np.sqrt(np.pi)) * dawson(_SQRT_RATE * np.asarray(omega, dtype=float))


@dataclass(frozen=True)
class SampledProfile:
    """Real spectral profile sampled on a uniform frequency grid (units of the line FWHM)."""

    omega: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float)
        values = np.array(self.values, dtype=float)
        if omega.ndim != 1 or values.shape != omega.shape:
            raise ConfigurationError("omega and values must be 1-D arrays of equal length")
        check_uniform(omega)
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("profile values must be finite")
        omega.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "values", values)

    @property
    def step(self):
        return (self.omega[-1] - self.omega[0]) / (len(self.omega) - 1)

    def __len__(self):
        return len(self.omega)


def _segments(support, exclusion):
    lo, hi = map(float, support)
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ConfigurationError(f"support must be a finite interval, got {support!r}")
    if exclusion is None:
        return [(lo, hi)]
    ex_lo, ex_hi = map(float, exclusion)
    if ex_lo >= ex_hi:
        raise ConfigurationError(f"exclusion must be a non-empty interval, got {exclusion!r}")
    segs = []
    if ex_lo > lo:
        segs.append((lo, min(ex_lo, hi)))
    if ex_hi < hi:
        segs.append((max(ex_hi, lo), hi))
    return [s for s in segs if s[1] > s[0]]


def hilbert_pv(profile, omega, support, exclusion=None, *, epsabs=1e-11, limit=400):
    """Principal-value transform of a callable profile at a single frequency.

    The singular part is removed by subtracting ``profile(omega)`` over the
    integration domain and adding back its logarithm analytically, so the
    remaining integrand is bounded and handed to adaptive quadrature.

    Parameters
    ----------
    profile : callable
        Real function of one real variable, bounded and continuous on
        ``support`` minus ``exclusion``.
    omega : float
        Evaluation frequency.
    support : (float, float)
        Finite integration interval; the profile is taken as zero outside it.
    exclusion : (float, float), optional
        Sub-interval on which the profile is treated as identically zero.

    Returns
    -------
    float

    Raises
    ------
    QuadratureError
        If any sub-integral fails to converge.
    """
    w = float(omega)
    segs = _segments(support, exclusion)
    inside = any(a <= w <= b for a, b in segs)
    ref = float(profile(w)) if inside else 0.0

    def integrand(t):
        return (profile(t) - ref) / (t - w) if t != w else 0.0

    total = 0.0
    for a, b in segs:
        pieces = [(a, w), (w, b)] if a < w < b else [(a, b)]
        for p, q in pieces:
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                try:
                    val, err = integrate.quad(integrand, p, q, epsabs=epsabs, epsrel=1e-12, limit=limit)
                except integrate.IntegrationWarning as exc:
                    raise QuadratureError(f"principal-value quadrature did not converge at omega={w!r}: {exc}") from None
            total += val
        if ref != 0.0:
            # log singularities cancel between adjacent segments sharing an endpoint at w
            with np.errstate(divide="ignore"):
                total += ref * (np.log(abs(b - w)) - np.log(abs(a - w)))
    if not np.isfinite(total):
        raise QuadratureError(f"principal value diverges at omega={w!r} (profile jump at the evaluation point)")
    return total / np.pi


def _hat_kernel(n):
    # Exact transform weights for the piecewise-linear interpolant of the samples.
    s = np.arange(-(n - 1), n, dtype=float)

    def xlogx(x):
        out = np.zeros_like(x)
        nz = x != 0
        out[nz] = x[nz] * np.log(np.abs(x[nz]))
        return out

    return (xlogx(s + 1) - 2.0 * xlogx(s) + xlogx(s - 1)) / np.pi


def hilbert_fft(profile, *, min_length=2**14, min_span=8.0, pad_factor=4):
    """Discrete transform of a uniformly sampled profile by FFT convolution.

    The samples are interpolated piecewise-linearly and convolved with the
    exact transform kernel of that interpolant; the linear convolution is
    carried out with FFTs on a grid zero-padded to ``pad_factor`` times the
    input length, so there is no periodisation error. A second-difference
    correction then removes the leading O(h^2) interpolation error.

    Measured against `hilbert_pv`, the result agrees within 1e-6 on the inner
    half of a default grid (span +-8, 2**14 points) for smooth profiles, and for
    truncated profiles at least 0.1 away from the truncation points provided
    each jump sits between two samples.
    """
    if not isinstance(profile, SampledProfile):
        raise ConfigurationError("hilbert_fft expects a SampledProfile")
    n = len(profile)
    if n < min_length or n & (n - 1):
        raise ConfigurationError(f"grid length must be a power of two >= {min_length}, got {n}")
    if profile.omega[0] > -min_span or profile.omega[-1] < min_span:
        raise ConfigurationError(
            f"grid must span at least +-{min_span}, got [{profile.omega[0]}, {profile.omega[-1]}]"
        )
    if pad_factor < 2:
        raise ConfigurationError("pad_factor must be >= 2 for a linear convolution")
    m = pad_factor * n
    kernel = _hat_kernel(n)[::-1]
    conv = np.fft.irfft(np.fft.rfft(profile.values, m) * np.fft.rfft(kernel, m), m)
    phi = conv[n - 1 : 2 * n - 1].copy()
    phi[1:-1] -= (phi[2:] - 2.0 * phi[1:-1] + phi[:-2]) / 12.0
    return SampledProfile(profile.omega, phi)


_GL_CACHE = {}


def _legendre(nodes):
    if nodes not in _GL_CACHE:
        _GL_CACHE[nodes] = np.polynomial.legendre.leggauss(nodes)
    return _GL_CACHE[nodes]


def hilbert_interval(func, omega, lo, hi, *, nodes=96):
    """Vectorised transform of an analytic profile restricted to [lo, hi].

    Computes ``(1/pi) PV int_lo^hi func(t) / (t - w) dt`` for every w in
    `omega` using singularity subtraction and fixed Gauss-Legendre nodes. The
    result diverges logarithmically at w = lo and w = hi when func is nonzero
    there; those samples come back as +-inf.
    """
    w = np.asarray(omega, dtype=float)
    flat = w.ravel()
    x, wts = _legendre(nodes)
    half = 0.5 * (hi - lo)
    t = lo + half * (x + 1.0)
    wts = wts * half
    f_t = func(t)
    f_w = func(flat)
    diff = t[None, :] - flat[:, None]
    near = np.abs(diff) < 1e-9 * max(hi - lo, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        quot = (f_t[None, :] - f_w[:, None]) / diff
    if np.any(near):
        h = 1e-6
        slope = (func(flat + h) - func(flat - h)) / (2 * h)
        quot = np.where(near, slope[:, None], quot)
    regular = quot @ wts
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(hi - flat)) - np.log(np.abs(lo - flat))
    singular = np.where(f_w != 0.0, f_w * logs, 0.0)
    return ((regular + singular) / np.pi).reshape(w.shape)

"""Input validation helpers shared by the numerical modules and estimators."""

import numpy as np
from sklearn.utils import check_array

from .exceptions import ConfigurationError, DomainError

UNIFORM_RTOL = 1e-12


def as_frequency_grid(omega, name="omega", min_points=2):
    """Return `omega` as a 1-D float array of finite, strictly increasing samples."""
    try:
        arr = check_array(np.asarray(omega, dtype=float).reshape(-1, 1), ensure_min_samples=min_points)
    except ValueError as exc:
        raise ConfigurationError(f"{name}: {exc}") from exc
    arr = arr.ravel()
    if np.any(np.diff(arr) <= 0):
        raise ConfigurationError(f"{name} must be strictly increasing")
    return arr


def check_uniform(omega, name="omega", rtol=UNIFORM_RTOL):
    """Validate a uniform grid and return its spacing."""
    omega = as_frequency_grid(omega, name)
    steps = np.diff(omega)
    step = (omega[-1] - omega[0]) / (len(omega) - 1)
    # spacing error relative to the grid extent, so float rounding of linspace passes
    scale = max(abs(omega[0]), abs(omega[-1]), step)
    if np.max(np.abs(steps - step)) > rtol * scale * 8:
        raise ConfigurationError(f"{name} is not uniformly spaced")
    return step


def check_symmetric(omega, name="omega", atol=1e-9):
    """Raise DomainError unless the grid is mirror-symmetric about zero."""
    omega = np.asarray(omega, dtype=float)
    if np.max(np.abs(omega + omega[::-1])) > atol * max(1.0, np.max(np.abs(omega))):
        raise DomainError(f"{name} must be symmetric about 0")


def check_positive(value, name, strict=True):
    value = float(value)
    if not np.isfinite(value) or (value <= 0 if strict else value < 0):
        kind = "> 0" if strict else ">= 0"
        raise ConfigurationError(f"{name} must be finite and {kind}, got {value!r}")
    return value


def check_fraction(value, name):
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ConfigurationError(f"{name} must lie in (0, 1), got {value!r}")
    return value


def uniform_grid(start, stop, num):
    """Uniform grid helper used for the default evaluation grids."""
    if num < 2:
        raise ConfigurationError("a frequency grid needs at least 2 points")
    return np.linspace(float(start), float(stop), int(num))

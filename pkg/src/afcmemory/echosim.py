"""Time-domain echo field as an independent check on the spectral efficiency.

The echo amplitude at the exit face is the inverse Fourier transform of
``kappa * Gamma(w) * A_s(w)``,

    A_echo(t) = int dw/2pi  kappa Gamma(w) exp(-i w t) A_s(w),

with t the retarded time in units of 1/linewidth. The comb rephasing delay is
already folded into Gamma, so no per-tooth dynamics are simulated.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_uniform
from .exceptions import ConfigurationError
from .specfun import GAUSS_RATE
from .response import spectral_response

__all__ = ["PulseSpec", "EchoResult", "echo_field", "energy_efficiency_spectral", "time_grid_for"]

_LEAK = 1e-10


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian signal pulse; `bandwidth` is the FWHM of the amplitude spectrum."""

    center_detuning: float = 0.0
    bandwidth: float = 0.1
    shape: str = "gaussian"

    def __post_init__(self):
        if self.shape != "gaussian":
            raise ConfigurationError(f"only gaussian pulses are supported, got {self.shape!r}")
        if not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ConfigurationError(f"pulse bandwidth must be > 0, got {self.bandwidth}")

    @property
    def _norm(self):
        # int |A_s|^2 dw / 2pi = 1
        return math.sqrt(2.0 * math.pi / (self.bandwidth * math.sqrt(math.pi / (2.0 * GAUSS_RATE))))

    def spectrum(self, omega):
        x = (np.asarray(omega, dtype=float) - self.center_detuning) / self.bandwidth
        return self._norm * np.exp(-GAUSS_RATE * x * x)

    def half_span(self, level=_LEAK):
        """Detuning from the centre at which the amplitude falls to `level` of its peak."""
        return self.bandwidth * math.sqrt(math.log(1.0 / level) / GAUSS_RATE)


@dataclass(frozen=True)
class EchoResult:
    times: np.ndarray
    amplitude: np.ndarray
    energy_efficiency: float
    omega: np.ndarray
    transfer: np.ndarray
    input_amplitude: np.ndarray


def time_grid_for(pulse, n=4096, margin=2.0):
    """Uniform time grid whose reciprocal frequency grid covers the pulse spectrum.

    The frequency grid spans ``margin`` times the +-1e-10 support of the
    spectrum, centred on the pulse.
    """
    span = 2.0 * margin * pulse.half_span()
    dw = span / n
    dt = 2.0 * math.pi / (n * dw)
    return dt * (np.arange(n) - n // 2)


def _spectral_grid(pulse, times):
    dt = check_uniform(times, "times")
    n = len(times)
    dw = 2.0 * math.pi / (n * dt)
    omega = pulse.center_detuning + dw * (np.arange(n) - n // 2)
    return omega, dw, dt


def echo_field(design, pulse, times, transfer=None):
    """Echo amplitude on a uniform time grid, computed by FFT.

    Parameters
    ----------
    design : CombDesign
        Medium; its ``kappa`` flag controls the dephasing factor.
    pulse : PulseSpec
    times : array_like
        Uniform time grid; its reciprocal frequency grid, centred on the
        pulse, must contain the spectrum down to 1e-10 of its peak.
    transfer : callable, optional
        Replaces Gamma(w); maps a frequency array to complex values.

    Raises
    ------
    ConfigurationError
        If the spectrum leaks past the reciprocal frequency grid.
    """
    times = np.asarray(times, dtype=float)
    omega, dw, dt = _spectral_grid(pulse, times)
    need = pulse.half_span()
    have = min(pulse.center_detuning - omega[0], omega[-1] - pulse.center_detuning)
    if have < need:
        raise ConfigurationError(
            f"pulse spectrum leaks beyond the frequency grid: need a span of +-{need:.4g} around "
            f"{pulse.center_detuning:g}, time step {dt:.4g} gives +-{have:.4g}; use dt <= {math.pi / need:.4g}"
        )
    a_s = pulse.spectrum(omega)
    if transfer is None:
        gamma = spectral_response(design, omega, cache=False).gamma
    else:
        gamma = np.asarray(transfer(omega), dtype=complex)
    kappa = design.decoherence if design.kappa else 1.0
    x = kappa * gamma * a_s

    def to_time(spec):
        # sum_k spec_k exp(-i w_k t_n) dw / 2pi with w_k = w_0 + k dw, t_n = t_0 + n dt
        k = np.arange(len(spec))
        phased = spec * np.exp(-1j * k * dw * times[0])
        return dw / (2.0 * math.pi) * np.exp(-1j * omega[0] * times) * np.fft.fft(phased)

    echo = to_time(x)
    source = to_time(a_s.astype(complex))
    eff = float(np.sum(np.abs(echo) ** 2) / np.sum(np.abs(source) ** 2))
    return EchoResult(times, echo, eff, omega, kappa * gamma, source)


def energy_efficiency_spectral(pulse, response):
    """Spectrally weighted efficiency ``sum eta |A_s|^2 / sum |A_s|^2`` on the response grid."""
    omega = np.asarray(response.omega, dtype=float)
    weights = np.abs(pulse.spectrum(omega)) ** 2
    cell = np.gradient(omega) if len(omega) > 1 else np.ones(1)
    return float(np.sum(response.eta * weights * cell) / np.sum(weights * cell))

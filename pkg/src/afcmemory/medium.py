"""Absorption-depth profiles of a frequency comb burned into a Gaussian line.

Frequencies are measured from line centre in units of the inhomogeneous
linewidth (the FWHM of the Gaussian envelope). Depths are dimensionless
optical depths, the product of absorption coefficient and medium length.
"""

import configparser
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np
from scipy import integrate

from .exceptions import ConfigurationError, DomainError
from .specfun import GAUSS_RATE

__all__ = [
    "CombDesign",
    "GAUSSIAN_TOOTH_AREA",
    "envelope",
    "coarse_depth",
    "fine_depth",
    "period_average",
    "read_design",
    "write_design",
]

# Area of a unit-peak, unit-FWHM Gaussian: sqrt(pi / (4 ln 2))
GAUSSIAN_TOOTH_AREA = math.sqrt(math.pi / GAUSS_RATE)

_CONFIG_KEYS = {
    "d0": "d0",
    "finesse": "finesse",
    "delta0": "delta0",
    "delta": "delta",
    "dilution": "dilution",
    "kappa": "kappa",
    "area_factor": "area_factor",
}


@dataclass(frozen=True)
class CombDesign:
    """Parameters of the burned comb structure.

    Attributes
    ----------
    d0 : float
        Peak optical depth of the original line at its centre.
    finesse : float
        Tooth spacing divided by tooth width (>= 1).
    delta0 : float
        Full width of the burned region, centred on the line.
    delta : float
        Tooth spacing. Only the tooth-resolved model uses it.
    dilution : bool
        Whether the burned region carries the period-averaged depth
        ``area_factor * d0 * G / finesse``. When off, the whole line keeps depth
        ``d0 * G``.
    kappa : bool
        Whether efficiencies include the tooth-dephasing factor
        ``exp(-7 / finesse**2)``.
    area_factor : float
        Tooth-area convention for the period-averaged depth. 1.0 reproduces
        the ``d / finesse`` rule; `GAUSSIAN_TOOTH_AREA` is the exact value
        for Gaussian teeth.
    """

    d0: float = 30.0
    finesse: float = 5.0
    delta0: float = 0.8
    delta: float = 0.01
    dilution: bool = True
    kappa: bool = True
    area_factor: float = 1.0

    def __post_init__(self):
        for name in ("d0", "finesse", "delta0", "delta", "area_factor"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
                raise ConfigurationError(f"{name} must be a real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not (math.isfinite(self.d0) and self.d0 > 0):
            raise ConfigurationError(f"d0 must be > 0, got {self.d0}")
        if not (math.isfinite(self.finesse) and self.finesse >= 1):
            raise ConfigurationError(f"finesse must be >= 1, got {self.finesse}")
        if not (math.isfinite(self.delta0) and self.delta0 > 0):
            raise ConfigurationError(f"delta0 must be > 0, got {self.delta0}")
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise ConfigurationError(f"delta must be > 0, got {self.delta}")
        if not (math.isfinite(self.area_factor) and self.area_factor > 0):
            raise ConfigurationError(f"area_factor must be > 0, got {self.area_factor}")
        object.__setattr__(self, "dilution", bool(self.dilution))
        object.__setattr__(self, "kappa", bool(self.kappa))

    @property
    def tau(self):
        """Echo delay 2*pi/delta in units of 1/linewidth."""
        return 2.0 * math.pi / self.delta

    @property
    def tooth_width(self):
        return self.delta / self.finesse

    @property
    def half_extent(self):
        return 0.5 * self.delta0

    @property
    def comb_fraction(self):
        """Ratio of the burned-region depth to the envelope depth."""
        return self.area_factor / self.finesse if self.dilution else 1.0

    @property
    def decoherence(self):
        """Amplitude factor exp(-3.5 / finesse**2)."""
        return math.exp(-3.5 / self.finesse**2)

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)

    def check_fine_model(self):
        if self.delta > self.delta0 / 10:
            raise ConfigurationError(
                f"tooth-resolved model needs delta <= delta0/10 (delta={self.delta}, delta0={self.delta0})"
            )


def envelope(omega):
    """Unit-peak Gaussian line with unit FWHM."""
    omega = np.asarray(omega, dtype=float)
    return np.exp(-GAUSS_RATE * omega * omega)


def coarse_depth(design, omega):
    """Period-averaged optical depth of the comb plus the untouched wings."""
    omega = np.asarray(omega, dtype=float)
    full = design.d0 * envelope(omega)
    if not design.dilution:
        return full
    return np.where(np.abs(omega) <= design.half_extent, full * design.comb_fraction, full)


def _tooth_centres(design):
    j_max = int(math.floor(design.half_extent / design.delta + 1e-9))
    return design.delta * np.arange(-j_max, j_max + 1)


def fine_depth(design, omega):
    """Tooth-resolved optical depth.

    Teeth sit at multiples of ``delta`` inside the burned region; each is a
    Gaussian of FWHM ``delta / finesse`` whose peak keeps the envelope depth at
    its centre. Outside the burned region the line is untouched.
    """
    design.check_fine_model()
    omega = np.asarray(omega, dtype=float)
    flat = np.atleast_1d(omega).ravel()
    centres = _tooth_centres(design)
    heights = design.d0 * envelope(centres)
    width = design.tooth_width
    out = np.zeros_like(flat)
    # Teeth further than 12 widths away contribute < 2**-576 of their height.
    reach = 12.0 * width
    for i, w in enumerate(flat):
        lo, hi = np.searchsorted(centres, [w - reach, w + reach])
        d = (w - centres[lo:hi]) / width
        out[i] = np.sum(heights[lo:hi] * np.exp(-GAUSS_RATE * d * d))
    wings = np.abs(flat) > design.half_extent
    out[wings] = design.d0 * envelope(flat[wings])
    return out.reshape(omega.shape) if omega.ndim else float(out[0])


def period_average(design, omega_center):
    """Mean of `fine_depth` over one comb period centred on `omega_center`."""
    design.check_fine_model()
    wc = float(omega_center)
    lo, hi = wc - 0.5 * design.delta, wc + 0.5 * design.delta
    if max(abs(lo), abs(hi)) > design.half_extent:
        raise DomainError(
            f"averaging window [{lo:.6g}, {hi:.6g}] crosses the comb edge at +-{design.half_extent:.6g}"
        )
    centres = _tooth_centres(design)
    pts = centres[(centres > lo) & (centres < hi)]
    val, _ = integrate.quad(
        lambda t: fine_depth(design, t), lo, hi, points=list(pts) or None, epsabs=1e-13, epsrel=1e-11, limit=200
    )
    return val / design.delta


def _parse_bool(text):
    t = text.strip().lower()
    if t in {"1", "true", "yes", "on"}:
        return True
    if t in {"0", "false", "no", "off"}:
        return False
    raise ConfigurationError(f"not a boolean: {text!r}")


def parse_key_values(text):
    """Parse flat ``key = value`` text (``#`` comments allowed) into a dict of strings."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string("[root]\n" + text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config file: {exc}") from exc
    return {k.strip().replace("-", "_"): v.strip() for k, v in parser["root"].items()}


def design_from_mapping(values, base=None):
    """Build a CombDesign from string or typed values keyed by config names."""
    kwargs = {}
    known = {f.name for f in fields(CombDesign)}
    for key, value in values.items():
        name = _CONFIG_KEYS.get(key)
        if name is None or name not in known:
            continue
        if name in ("dilution", "kappa"):
            kwargs[name] = _parse_bool(value) if isinstance(value, str) else bool(value)
        else:
            try:
                kwargs[name] = float(value)
            except (TypeError, ValueError):
                raise ConfigurationError(f"{key} must be a number, got {value!r}") from None
    base = base or CombDesign()
    return replace(base, **kwargs)


def read_design(path):
    """Read a CombDesign from a flat key-value file; unknown keys are ignored."""
    with open(path, encoding="utf-8") as fh:
        return design_from_mapping(parse_key_values(fh.read()))


def write_design(design, path):
    d = design.to_dict()
    lines = [f"{key} = {str(d[attr]).lower() if isinstance(d[attr], bool) else repr(d[attr])}"
             for key, attr in _CONFIG_KEYS.items()]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

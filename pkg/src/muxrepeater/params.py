"""Model parameters: physical constants, platform presets, and JSON config I/O.

Every other module consumes physical quantities only through the frozen
dataclasses defined here.  Units are fixed per field and documented in the
config schema (see README): distances in km, times in us unless a field name
says otherwise, wavevectors in 1/mm, temperatures in K.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

DECOHERENCE_KINDS = ("gaussian", "exponential")
ENC_DETECTION_KINDS = ("single_mode", "multimode")
CHI_EFF_POLICIES = ("frozen_t0",)
GAMMA_POLICIES = ("rounded", "exact")


class ConfigError(ValueError):
    """A configuration value is out of range or the file is malformed."""


def _require(condition: bool, field_name: str, message: str) -> None:
    if not condition:
        raise ConfigError(f"{field_name}: {message}")


@dataclass(frozen=True)
class PhysicalConstants:
    """Compiled-in physical constants, overridable through the config file."""

    atomic_mass_rb87: float = 1.44316e-25  # kg
    boltzmann: float = 1.380649e-23        # J/K
    c: float = 0.2                         # fiber signal speed, km/us
    alpha: float = 0.2                     # fiber attenuation, dB/km

    def __post_init__(self) -> None:
        for f in fields(self):
            _require(getattr(self, f.name) > 0, f.name, "must be strictly positive")
        _require(self.c <= 0.3, "c", "exceeds the speed of light in vacuum (0.3 km/us)")


@dataclass(frozen=True)
class PlatformParams:
    """All scalar efficiencies and probabilities of one repeater platform.

    ``tau_ms`` is the fixed memory lifetime; ``None`` selects the
    mode-dependent lifetime gamma/K supplied by the wavevector mode space
    (only meaningful with gaussian decoherence).  ``enc_detection`` selects
    which detector efficiency applies at the connection stage and at the
    final parties: ``single_mode`` uses ``eta_s``, ``multimode`` uses
    ``eta_m``.  Pair generation at the elementary-link stage always detects
    through ``eta_m``.
    """

    name: str
    modes: int                       # number of usable memory mode pairs
    chi: float                       # pair-generation probability per mode
    eta_r: float                     # memory readout efficiency
    eta_x: float = 1.0               # multiplexing (mode rerouting) efficiency
    eta_s: float = 0.9               # single-mode detector efficiency
    eta_m: float = 0.9               # multimode detector efficiency
    multiplexed: bool = False        # True: modes**2 pairing combinations
    enc_detection: str = "single_mode"
    decoherence: str = "exponential"
    tau_ms: float | None = None

    def __post_init__(self) -> None:
        _require(bool(self.name), "name", "must be a non-empty string")
        _require(isinstance(self.modes, int) and self.modes >= 1, "M",
                 "must be an integer >= 1")
        _require(0.0 < self.chi < 1.0, "chi", "must lie in (0, 1)")
        for field_name in ("eta_r", "eta_x", "eta_s", "eta_m"):
            value = getattr(self, field_name)
            _require(0.0 < value <= 1.0, field_name, "must lie in (0, 1]")
        _require(self.enc_detection in ENC_DETECTION_KINDS, "enc_detection",
                 f"must be one of {ENC_DETECTION_KINDS}")
        _require(self.decoherence in DECOHERENCE_KINDS, "decoherence",
                 f"must be one of {DECOHERENCE_KINDS}")
        if self.tau_ms is None:
            _require(self.decoherence == "gaussian", "tau_ms",
                     "mode-dependent lifetime requires gaussian decoherence")
        else:
            _require(self.tau_ms > 0, "tau_ms", "must be strictly positive")

    @property
    def tau_us(self) -> float | None:
        """Fixed lifetime in us, or None for the mode-dependent law."""
        return None if self.tau_ms is None else self.tau_ms * 1e3

    @property
    def enc_detector_efficiency(self) -> float:
        return self.eta_s if self.enc_detection == "single_mode" else self.eta_m


@dataclass(frozen=True)
class ModeSpaceParams:
    """Wavevector band, mode density, and ensemble temperature."""

    k_min: float = 10.0         # 1/mm
    k_max: float = 1000.0       # 1/mm
    beta: float = 3.5e-3        # mode density, mm^2
    temperature: float = 1e-6   # K
    grid_points: int = 4096     # quadrature grid resolution
    gamma_policy: str = "rounded"

    def __post_init__(self) -> None:
        _require(self.k_min > 0, "K_min", "must be strictly positive")
        _require(self.k_min < self.k_max, "K_max", "must exceed K_min")
        _require(self.beta > 0, "beta", "must be strictly positive")
        _require(self.temperature > 0, "temperature", "must be strictly positive")
        _require(isinstance(self.grid_points, int) and self.grid_points >= 2,
                 "grid_points", "must be an integer >= 2")
        _require(self.gamma_policy in GAMMA_POLICIES, "gamma_policy",
                 f"must be one of {GAMMA_POLICIES}")


@dataclass(frozen=True)
class NoiseParams:
    """Read-out noise and the rule for the effective excitation probability."""

    B: float = 0.0                      # noise-photon probability per shot
    chi_eff_policy: str = "frozen_t0"   # chi_eff = chi + B/eta_r at t = 0

    def __post_init__(self) -> None:
        _require(self.B >= 0, "B", "must be non-negative")
        _require(self.chi_eff_policy in CHI_EFF_POLICIES, "chi_eff_policy",
                 f"must be one of {CHI_EFF_POLICIES}")

    def effective_chi(self, platform: PlatformParams) -> float:
        """Excitation probability with read-out noise folded in at t = 0."""
        return platform.chi + self.B / platform.eta_r


@dataclass(frozen=True)
class SpdcParams:
    """Midway photon-pair source used as the repeaterless baseline."""

    f_rep: float = 80.0       # repetition rate, MHz
    chi: float = 0.01         # pair probability per shot
    eta_s: float = 0.9        # detector efficiency per photon
    visibility: float = 1.0

    def __post_init__(self) -> None:
        _require(self.f_rep > 0, "f_rep", "must be strictly positive")
        _require(0.0 < self.chi < 1.0, "chi", "must lie in (0, 1)")
        _require(0.0 < self.eta_s <= 1.0, "eta_s", "must lie in (0, 1]")
        _require(0.0 <= self.visibility <= 1.0, "visibility", "must lie in [0, 1]")


@dataclass(frozen=True)
class ParameterBundle:
    """Fully validated parameter set loaded from one config file."""

    constants: PhysicalConstants
    platforms: tuple[PlatformParams, ...]
    mode_space: ModeSpaceParams
    noise: NoiseParams
    spdc: SpdcParams

    def platform(self, name: str) -> PlatformParams:
        for p in self.platforms:
            if p.name == name:
                return p
        known = ", ".join(p.name for p in self.platforms)
        raise KeyError(f"unknown platform {name!r} (known: {known})")


def builtin_platforms() -> tuple[PlatformParams, ...]:
    """The four built-in platform presets.

    The two wavevector platforms share the cold-ensemble memory with the
    mode-dependent gaussian lifetime; they differ in whether mode pairings
    are rerouted (multiplexed, modes**2 combinations, connection detected in
    a single mode) or attempted index-by-index (parallel, modes combinations,
    mode-resolved connection detected at multimode efficiency).  The temporal
    and lattice presets are fixed-lifetime platforms with exponential decay
    and fast single-mode detection everywhere (eta_m = 0.9 there is the
    per-mode detection efficiency at the pair-generation stage).
    """
    return (
        PlatformParams(
            name="WV-MUX-QM", modes=5500, chi=0.05, eta_r=0.7, eta_x=0.9,
            eta_s=0.9, eta_m=0.2, multiplexed=True,
            enc_detection="single_mode", decoherence="gaussian", tau_ms=None),
        PlatformParams(
            name="WV-parallel", modes=5500, chi=0.05, eta_r=0.7, eta_x=1.0,
            eta_s=0.9, eta_m=0.2, multiplexed=False,
            enc_detection="multimode", decoherence="gaussian", tau_ms=None),
        PlatformParams(
            name="Temporal", modes=50, chi=0.47, eta_r=0.71, eta_x=1.0,
            eta_s=0.9, eta_m=0.9, multiplexed=False,
            enc_detection="single_mode", decoherence="exponential", tau_ms=1.0),
        PlatformParams(
            name="Lattice-SM", modes=1, chi=0.05, eta_r=0.76, eta_x=1.0,
            eta_s=0.9, eta_m=0.9, multiplexed=False,
            enc_detection="single_mode", decoherence="exponential", tau_ms=220.0),
    )


def default_bundle() -> ParameterBundle:
    return ParameterBundle(
        constants=PhysicalConstants(),
        platforms=builtin_platforms(),
        mode_space=ModeSpaceParams(),
        noise=NoiseParams(),
        spdc=SpdcParams(),
    )


# JSON key <-> dataclass field mapping for each config section.
_CONSTANTS_KEYS = {
    "atomic_mass_rb87": "atomic_mass_rb87",
    "boltzmann": "boltzmann",
    "c": "c",
    "alpha": "alpha",
}
_MODE_SPACE_KEYS = {
    "K_min": "k_min",
    "K_max": "k_max",
    "beta": "beta",
    "temperature": "temperature",
    "grid_points": "grid_points",
    "gamma_policy": "gamma_policy",
}
_NOISE_KEYS = {"B": "B", "chi_eff_policy": "chi_eff_policy"}
_SPDC_KEYS = {"f_rep": "f_rep", "chi": "chi", "eta_s": "eta_s",
              "visibility": "visibility"}
_PLATFORM_KEYS = {
    "name": "name",
    "M": "modes",
    "chi": "chi",
    "eta_r": "eta_r",
    "eta_x": "eta_x",
    "eta_s": "eta_s",
    "eta_m": "eta_m",
    "multiplexed": "multiplexed",
    "enc_detection": "enc_detection",
    "decoherence": "decoherence",
    "tau_ms": "tau_ms",
}
_TOP_LEVEL_KEYS = ("constants", "mode_space", "noise", "spdc", "platforms")


def _check_number(value, key: str, allow_int: bool = True) -> float:
    ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    _require(ok, key, f"expected a number, got {value!r}")
    return value


def _build_section(cls, data: dict, key_map: dict[str, str], section: str):
    unknown = set(data) - set(key_map)
    _require(not unknown, section, f"unknown keys {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        field_name = key_map[key]
        if key in ("multiplexed",):
            _require(isinstance(value, bool), key, f"expected a boolean, got {value!r}")
        elif key in ("name", "enc_detection", "decoherence", "chi_eff_policy",
                     "gamma_policy"):
            _require(isinstance(value, str), key, f"expected a string, got {value!r}")
        elif key in ("M", "grid_points"):
            _require(isinstance(value, int) and not isinstance(value, bool), key,
                     f"expected an integer, got {value!r}")
        elif key == "tau_ms" and value is None:
            pass
        else:
            _check_number(value, key)
        kwargs[field_name] = value
    return cls(**kwargs)


def _build_platform(entry: dict, index: int) -> PlatformParams:
    _require(isinstance(entry, dict), f"platforms[{index}]", "expected an object")
    for required in ("name", "M", "chi", "eta_r"):
        _require(required in entry, required,
                 f"required in platforms[{index}]")
    return _build_section(PlatformParams, entry, _PLATFORM_KEYS,
                          f"platforms[{index}]")


def load_config(path: str | Path | None = None) -> ParameterBundle:
    """Load and validate a JSON config file; absent fields take defaults.

    ``None`` or an empty document yields the full default bundle with the
    four built-in platforms.  A ``platforms`` array, when present, replaces
    the built-in list entirely.

    Raises
    ------
    ConfigError
        If the file cannot be parsed or any value is out of range; the
        message names the offending field.
    """
    if path is None:
        return default_bundle()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: malformed JSON in {path}: {exc}") from exc
    return parse_config(data)


def parse_config(data: dict) -> ParameterBundle:
    """Build a validated bundle from an already-parsed JSON document."""
    _require(isinstance(data, dict), "config", "top level must be an object")
    unknown = set(data) - set(_TOP_LEVEL_KEYS)
    _require(not unknown, "config", f"unknown top-level keys {sorted(unknown)}")
    constants = _build_section(PhysicalConstants, data.get("constants", {}),
                               _CONSTANTS_KEYS, "constants")
    mode_space = _build_section(ModeSpaceParams, data.get("mode_space", {}),
                                _MODE_SPACE_KEYS, "mode_space")
    noise = _build_section(NoiseParams, data.get("noise", {}), _NOISE_KEYS, "noise")
    spdc = _build_section(SpdcParams, data.get("spdc", {}), _SPDC_KEYS, "spdc")
    if "platforms" in data:
        raw = data["platforms"]
        _require(isinstance(raw, list) and raw, "platforms",
                 "expected a non-empty array")
        platforms = tuple(_build_platform(entry, i) for i, entry in enumerate(raw))
        names = [p.name for p in platforms]
        _require(len(names) == len(set(names)), "platforms",
                 "platform names must be unique")
    else:
        platforms = builtin_platforms()
    return ParameterBundle(constants=constants, platforms=platforms,
                           mode_space=mode_space, noise=noise, spdc=spdc)


def dump_config(bundle: ParameterBundle) -> dict:
    """Serialize a bundle to the JSON config document shape.

    Round-trips exactly: ``parse_config(dump_config(b)) == b``.
    """
    def section(obj, key_map):
        return {key: getattr(obj, field_name) for key, field_name in key_map.items()}

    return {
        "constants": section(bundle.constants, _CONSTANTS_KEYS),
        "mode_space": section(bundle.mode_space, _MODE_SPACE_KEYS),
        "noise": section(bundle.noise, _NOISE_KEYS),
        "spdc": section(bundle.spdc, _SPDC_KEYS),
        "platforms": [section(p, _PLATFORM_KEYS) for p in bundle.platforms],
    }

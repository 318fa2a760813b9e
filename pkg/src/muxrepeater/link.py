"""Single-link physics: fiber loss, heralded pair generation, and visibility.

An elementary link spans two memories separated by L0, each sending a
herald photon over L0/2 of fiber to a midway detection station.  Success in
any one of the available mode pairings heralds the link; the stored state is
a Bell-diagonal mixture whose visibility degrades with storage time through
the memory decoherence law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import PhysicalConstants, PlatformParams

# exp() argument beyond which the visibility underflows to 0 anyway
_EXP_CLIP = 700.0


def transmission(z_km: float, alpha_db_per_km: float) -> float:
    """Fiber power transmission 10**(-alpha*z/10) over z km."""
    if z_km < 0:
        raise ValueError("fiber length must be non-negative")
    if alpha_db_per_km < 0:
        raise ValueError("attenuation must be non-negative")
    return 10.0 ** (-alpha_db_per_km * z_km / 10.0)


def p_single(chi: float, eta_det: float, eta_t_half: float) -> float:
    """Success probability of one heralded pair attempt in a single mode.

    Both photons (one per memory) must be generated, survive half the link,
    and fire the midway detector: (chi * eta_det * eta_t_half)**2.
    """
    for name, value in (("chi", chi), ("eta_det", eta_det),
                        ("eta_t_half", eta_t_half)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    return (chi * eta_det * eta_t_half) ** 2


def p_eng(p1: float, modes: int, multiplexed: bool) -> float:
    """Probability that at least one mode pairing heralds the link.

    Parallel operation pairs mode i with mode i, giving ``modes`` chances;
    multiplexed operation accepts any pairing, giving ``modes**2``.
    Evaluated as -expm1(n * log1p(-p1)) so it survives p1 ~ 1e-8 with
    n ~ 3e7 without loss of precision.
    """
    if not 0.0 <= p1 <= 1.0:
        raise ValueError("p1 must lie in [0, 1]")
    if modes < 1:
        raise ValueError("modes must be >= 1")
    n = modes * modes if multiplexed else modes
    if n == 1 or p1 == 0.0:
        return p1
    if p1 == 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-p1))


def g2_from_noise(chi_eff: float) -> float:
    """Write/read intensity cross-correlation 1 + 1/chi_eff.

    ``chi_eff`` is the excitation probability with read-out noise folded in;
    smaller excitation means stronger nonclassical correlation.
    """
    if chi_eff <= 0:
        raise ValueError("chi_eff must be strictly positive")
    return 1.0 + 1.0 / chi_eff


def visibility_from_g2(g2: float) -> float:
    """Interference visibility (g2-1)/(g2+1) of the heralded state."""
    if g2 < 1:
        raise ValueError("g2 must be >= 1")
    return (g2 - 1.0) / (g2 + 1.0)


def visibility_at(t_us, tau_us, chi_eff: float, decoherence: str = "gaussian"):
    """Visibility after storing for t in a memory with lifetime tau.

    Decoherence reduces the read-out efficiency, which degrades the
    signal-to-noise of the retrieved photon; the resulting visibility is
    1 / (1 + 2*chi_eff*exp(x)) with x = (t/tau)**2 for gaussian decay or
    t/tau for exponential decay.  Accepts scalars or numpy arrays for
    ``t_us`` and ``tau_us``; strictly decreasing in t until it underflows.
    """
    if chi_eff <= 0:
        raise ValueError("chi_eff must be strictly positive")
    if np.any(np.asarray(t_us) < 0):
        raise ValueError("storage time must be non-negative")
    ratio = np.asarray(t_us, dtype=float) / np.asarray(tau_us, dtype=float)
    if decoherence == "gaussian":
        x = ratio * ratio
    elif decoherence == "exponential":
        x = ratio
    else:
        raise ValueError(f"unknown decoherence kind {decoherence!r}")
    v = 1.0 / (1.0 + 2.0 * chi_eff * np.exp(np.minimum(x, _EXP_CLIP)))
    v = np.where(x >= _EXP_CLIP, 0.0, v)
    return float(v) if v.ndim == 0 else v


@dataclass(frozen=True)
class LinkBudget:
    """Derived quantities of one elementary link at distance l0_km."""

    l0_km: float
    eta_t_half: float   # transmission over l0/2
    p1: float           # single-mode success probability
    p_g: float          # success probability over all mode pairings


def link_budget(platform: PlatformParams, l0_km: float,
                constants: PhysicalConstants) -> LinkBudget:
    """Evaluate the elementary-link budget for one platform."""
    eta_t_half = transmission(l0_km / 2.0, constants.alpha)
    p1 = p_single(platform.chi, platform.eta_m, eta_t_half)
    p_g = p_eng(p1, platform.modes, platform.multiplexed)
    return LinkBudget(l0_km=l0_km, eta_t_half=eta_t_half, p1=p1, p_g=p_g)

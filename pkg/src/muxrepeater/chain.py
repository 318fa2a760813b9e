"""End-to-end repeater chain model for both synchronization architectures.

In the ahierarchical architecture every node acts blindly each clock period
T_r = L0/c, so a distribution attempt succeeds only when all N-1 links herald
AND every connection stage and the final detections succeed in the same
period.  In the semihierarchical architecture a central station lets links
that heralded hold their memories until the slowest link catches up, at the
price of an L/c confirmation overhead per attempt and of longer storage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import link as link_physics
from . import werner
from .modes import ModeSpace
from .params import NoiseParams, PhysicalConstants, PlatformParams

ARCHITECTURES = ("ahierarchical", "semihierarchical")
WAITING_COUNTS = ("links", "nodes")

# crossover below which the waiting-time series is evaluated by its
# Euler-Maclaurin limit instead of direct summation
_SERIES_MIN_P = 1e-3
_SERIES_BLOCK = 4096


def p_enc_stage(eta_r: float, eta_det: float) -> tuple[float, float]:
    """Per-station connection probabilities (p_e, p_f).

    Both memories must read out and both photons must be detected, and the
    coincidence pattern post-selection keeps at most half the outcomes:
    p_e = (eta_r * eta_det)**2 / 2.  First-stage connections post-select
    twice as hard on each side: p_f = p_e / 4.
    """
    for name, value in (("eta_r", eta_r), ("eta_det", eta_det)):
        if not 0.0 < value <= 1.0:
            raise ValueError(f"{name} must lie in (0, 1]")
    p_e = (eta_r * eta_det) ** 2 / 2.0
    return p_e, p_e / 4.0


def p_eng_chain(p_g: float, n_nodes: int) -> float:
    """Probability that all N-1 links herald simultaneously: p_g**(N-1)."""
    if n_nodes < 2:
        raise ValueError("a chain needs at least 2 nodes")
    return p_g ** (n_nodes - 1)


def p_enc_chain(p_f: float, p_e: float, eta_x: float, n_nodes: int) -> float:
    """Probability that every connection across the chain succeeds.

    ceil((N-2)/2) first-stage and floor((N-2)/2) later-stage connections,
    with one multiplexing factor per node: p_f**ceil * p_e**floor * eta_x**N.
    N = 2 has no swap stations and reduces to eta_x**2.
    """
    if n_nodes < 2:
        raise ValueError("a chain needs at least 2 nodes")
    first = math.ceil((n_nodes - 2) / 2)
    later = math.floor((n_nodes - 2) / 2)
    return p_f ** first * p_e ** later * eta_x ** n_nodes


def _harmonic(m: int) -> float:
    return float(np.sum(1.0 / np.arange(1, m + 1)))


def _expected_max_series(m: int, p: float, eps: float) -> float:
    # E[max] = sum_{j>=0} (1 - F(j)^m) with F(j) = 1 - (1-p)^j.  Each term
    # is bounded by m*(1-p)^j, so the tail past J is below m*(1-p)^(J+1)/p;
    # that geometric bound drives the truncation.
    log_q = math.log1p(-p)
    total = 1.0  # j = 0 term
    j = 1
    while True:
        js = np.arange(j, j + _SERIES_BLOCK, dtype=float)
        qj = np.exp(js * log_q)
        total += float(np.sum(-np.expm1(m * np.log1p(-qj))))
        j += _SERIES_BLOCK
        if m * qj[-1] * (1.0 - p) < eps * p * total:
            return total


def _expected_max_asymptotic(m: int, p: float) -> float:
    # Euler-Maclaurin sum of the same series: H_m/lambda + 1/2 with
    # lambda = -log(1-p); endpoint corrections are O(lambda^3) because the
    # first derivative of the summand vanishes at j = 0 for m >= 2.
    lam = -math.log1p(-p)
    return _harmonic(m) / lam + 0.5


def expected_max_rounds(m: int, p: float, eps: float = 1e-12) -> float:
    """Expected maximum of m independent geometric(p) round counts.

    This is the mean number of clock periods until the slowest of m links
    heralds.  Exact for p = 1 and m = 1; otherwise the tail-sum series is
    truncated at relative tolerance ``eps``, switching to its asymptotic
    limit where direct summation would need more than ~1e4/p terms.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if m < 1:
        raise ValueError("m must be >= 1")
    if p == 1.0:
        return 1.0
    if m == 1:
        return 1.0 / p
    if p < _SERIES_MIN_P:
        return _expected_max_asymptotic(m, p)
    return _expected_max_series(m, p, eps)


def f_waiting(n_nodes: int, p_g: float, eps: float = 1e-12,
              count: str = "links") -> float:
    """Waiting-time factor: p_g times the expected slowest-link round count.

    ``f_waiting(n, p)/p`` multiplies the clock period in the
    semihierarchical time budget.  ``count`` selects how many independent
    heralding processes race: one per link (N-1, the default) or one per
    node (N), kept switchable because either reading appears in practice.
    """
    if n_nodes < 2:
        raise ValueError("a chain needs at least 2 nodes")
    if count not in WAITING_COUNTS:
        raise ValueError(f"count must be one of {WAITING_COUNTS}")
    m = n_nodes - 1 if count == "links" else n_nodes
    return p_g * expected_max_rounds(m, p_g, eps)


def mean_entanglement(platform: PlatformParams, space: ModeSpace, t_us: float,
                      noise: NoiseParams | None = None, links: int = 1) -> float:
    """Mode-averaged ebit content of one stored link after time t.

    Platforms with a fixed lifetime evaluate a single visibility with their
    decoherence law; mode-dependent platforms average over the wavevector
    band.  ``links`` > 1 composes that many link visibilities multiplicatively
    before taking the ebit content (sensitivity mode, off by default).
    """
    noise = noise or NoiseParams()
    chi_eff = noise.effective_chi(platform)
    if platform.tau_us is None:
        return werner.average_ef(space, t_us, chi_eff, links)
    v = link_physics.visibility_at(t_us, platform.tau_us, chi_eff,
                                   platform.decoherence)
    if links != 1:
        v = v ** links
    return float(werner.entanglement_of_formation(v))


@dataclass(frozen=True)
class ChainPlan:
    """One evaluated chain configuration with all derived quantities (us, km)."""

    architecture: str
    n_nodes: int
    l_km: float
    l0_km: float
    t_rep_us: float
    p1: float
    p_g: float
    p_eng: float           # all links herald in one period
    p_enc: float           # all connections succeed
    storage_us: float      # memory time entering the ebit-content average
    t_tot_us: float        # mean time per successful distribution
    mean_ef: float         # delivered ebits per distribution
    rate: float            # ebits per us
    rate_per_node: float   # ebits per us per node


def _safe_div(num: float, denom: float) -> float:
    if denom <= 0.0:
        return math.inf
    return num / denom


def chain_time(architecture: str, platform: PlatformParams, n_nodes: int,
               l_km: float, constants: PhysicalConstants, space: ModeSpace,
               noise: NoiseParams | None = None,
               ef_composition: str = "single_link",
               waiting_count: str = "links") -> ChainPlan:
    """Evaluate the full time budget of one chain configuration.

    Parameters
    ----------
    architecture : "ahierarchical" or "semihierarchical"
    platform, n_nodes, l_km : chain configuration; L0 = L/(N-1).
    constants, space, noise : physical inputs; ``noise`` defaults to zero
        read-out noise.
    ef_composition : "single_link" treats the delivered ebit content as one
        link's mode-averaged value at the architecture's storage time;
        "product" composes N-1 link visibilities instead.
    waiting_count : passed through to :func:`f_waiting` (semihierarchical).

    Notes
    -----
    The mean distribution time is T_r/(P_eng * P_enc * eta_d^2 * eta_x^2)
    for the blind architecture, where eta_d is the platform's
    connection-stage detector efficiency.  The semihierarchical budget
    replaces T_r/P_eng by the expected slowest-link wait plus the L/c
    confirmation overhead.  Storage times are L0/c (blind) and (L+L0)/c
    (semihierarchical, first-try assumption); the stochastic refinement
    lives in the Monte Carlo module.
    """
    if architecture not in ARCHITECTURES:
        raise ValueError(f"architecture must be one of {ARCHITECTURES}")
    if ef_composition not in ("single_link", "product"):
        raise ValueError("ef_composition must be 'single_link' or 'product'")
    if n_nodes < 2:
        raise ValueError("a chain needs at least 2 nodes")
    if l_km <= 0:
        raise ValueError("total distance must be strictly positive")

    l0_km = l_km / (n_nodes - 1)
    t_rep = l0_km / constants.c
    budget = link_physics.link_budget(platform, l0_km, constants)
    eta_det = platform.enc_detector_efficiency
    p_e, p_f = p_enc_stage(platform.eta_r, eta_det)
    p_enc = p_enc_chain(p_f, p_e, platform.eta_x, n_nodes)
    p_eng = p_eng_chain(budget.p_g, n_nodes)
    eta_final = (eta_det * platform.eta_x) ** 2

    if architecture == "ahierarchical":
        t_tot = _safe_div(t_rep, p_eng * p_enc * eta_final)
        storage = t_rep
    else:
        if budget.p_g > 0.0:
            waits = expected_max_rounds(
                n_nodes - 1 if waiting_count == "links" else n_nodes, budget.p_g)
            eng_time = t_rep * waits + l_km / constants.c
            t_tot = _safe_div(eng_time, p_enc * eta_final)
        else:
            t_tot = math.inf
        storage = (l_km + l0_km) / constants.c

    links = n_nodes - 1 if ef_composition == "product" else 1
    mean_ef = mean_entanglement(platform, space, storage, noise, links)
    rate = mean_ef / t_tot if math.isfinite(t_tot) else 0.0
    return ChainPlan(
        architecture=architecture, n_nodes=n_nodes, l_km=l_km, l0_km=l0_km,
        t_rep_us=t_rep, p1=budget.p1, p_g=budget.p_g, p_eng=p_eng,
        p_enc=p_enc, storage_us=storage, t_tot_us=t_tot, mean_ef=mean_ef,
        rate=rate, rate_per_node=rate / n_nodes)


@dataclass(frozen=True)
class RangeLimits:
    """Maximal reach set by the entanglement threshold of the mode at K_ref."""

    l0_max_ahier_km: float
    l_max_semihier_km: float
    k_ref_inv_mm: float | None
    tau_us: float


def range_limits(platform: PlatformParams, space: ModeSpace,
                 k_ref_inv_mm: float | None = None,
                 n_nodes: int | None = None,
                 constants: PhysicalConstants | None = None,
                 chi: float | None = None) -> RangeLimits:
    """Distances beyond which the reference mode holds no entanglement.

    The stored state stays entangled while chi * exp((t/tau)**2) < 1.  With
    blind storage t = L0/c that bounds the elementary distance at
    c*tau*sqrt(log(1/chi)); with semihierarchical storage t = (L+L0)/c it
    bounds the total distance at (N-1)/N * tau/2 * c * log(1/chi)
    (``n_nodes=None`` takes the many-node limit).  Fixed-lifetime platforms
    use their own tau; mode-dependent platforms use tau(K_ref).
    """
    constants = constants or PhysicalConstants()
    chi = platform.chi if chi is None else chi
    if not 0.0 < chi <= 1.0:
        raise ValueError("chi must lie in (0, 1]")
    if platform.tau_us is not None:
        tau = platform.tau_us
        k_ref = None
    else:
        if k_ref_inv_mm is None or k_ref_inv_mm <= 0:
            raise ValueError("a positive K_ref is required for "
                             "mode-dependent lifetimes")
        tau = space.gamma / k_ref_inv_mm
        k_ref = k_ref_inv_mm
    log_gain = math.log(1.0 / chi)
    l0_max = constants.c * tau * math.sqrt(log_gain)
    factor = 1.0 if n_nodes is None else (n_nodes - 1) / n_nodes
    l_max = factor * (tau / 2.0) * constants.c * log_gain
    return RangeLimits(l0_max_ahier_km=l0_max, l_max_semihier_km=l_max,
                       k_ref_inv_mm=k_ref, tau_us=tau)


def spdc_time(l_km: float, spdc, constants: PhysicalConstants) -> float:
    """Mean time per detected ebit from a midway pair source, in us.

    The source sits halfway, so each photon of a pair crosses L/2 and the
    pair transmission is 10**(-alpha*L/10).  The detected-pair rate is
    chi * eta_s**2 * f_rep * that transmission; the returned time is its
    reciprocal divided by the ebit content of the source state.
    """
    if l_km < 0:
        raise ValueError("distance must be non-negative")
    pair_transmission = link_physics.transmission(l_km, constants.alpha)
    rate = spdc.chi * spdc.eta_s ** 2 * spdc.f_rep * pair_transmission
    ef = float(werner.entanglement_of_formation(spdc.visibility))
    if ef <= 0.0:
        return math.inf
    return _safe_div(1.0, rate) / ef

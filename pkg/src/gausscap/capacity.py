"""Capacity formulas for Gaussian channels.

Holevo information with quantum water-filling, heterodyne/homodyne capacities
(per-mode and general multivariate), asymptotic limits, and the classical
Shannon water-filling baseline.  All results are in bits.

`params` arguments are sequences of per-singular-mode triples
(lambda_k, n, xi) as produced by decomposition.diagonal_channel_params; the
effective output noise photon number of such a mode is

    N_k = (lambda_k - 1)/2 + (n + 1/2)|1 - lambda_k| + xi .
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._kernels import entropy_g_arr
from .errors import (
    NegativeEntropyArgument,
    NoFeasibleWaterlevel,
    SingularNoise,
    UnphysicalOutput,
    ZeroNoiseClassical,
)
from .phasespace import symplectic_eigenvalues

__all__ = [
    "PowerAllocation",
    "CapacityResult",
    "noise_photons",
    "holevo_diagonal",
    "holevo_general",
    "waterfill_holevo",
    "het_hom_per_mode",
    "waterfill_het_hom",
    "het_hom_general",
    "hom_general_aligned",
    "asymptotic_limits",
    "classical_capacity",
]

_LN2 = math.log(2.0)
_METHOD_NAMES = {"het": "heterodyne", "hom": "homodyne"}


@dataclass(frozen=True)
class PowerAllocation:
    """Mean photon numbers per singular mode, summing to at most `total`."""

    per_mode: np.ndarray
    total: float

    def __post_init__(self):
        p = np.asarray(self.per_mode, dtype=float)
        if p.size and p.min() < 0:
            raise ValueError("allocations must be nonnegative")
        if p.sum() > self.total + 1e-9:
            raise ValueError("allocation exceeds the power budget")
        object.__setattr__(self, "per_mode", p)


@dataclass(frozen=True)
class CapacityResult:
    bits: float
    method: str
    allocation: PowerAllocation
    waterlevel: Optional[float] = None


def uniform_allocation(n_modes, P, n_signal_modes=None):
    """P/N photons on each of the first min(n_modes, N) singular modes.

    `n_signal_modes` defaults to n_modes; pass the channel's input mode count
    when the params list carries extra zero-transmission output modes.
    """
    N = n_modes if n_signal_modes is None else n_signal_modes
    per_mode = np.zeros(n_modes)
    per_mode[: min(n_modes, N)] = P / N
    return PowerAllocation(per_mode, P)


def _split_params(params):
    arr = np.asarray(params, dtype=float).reshape(-1, 3)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def noise_photons(lams, n, xi):
    """Output noise photon number N_k of a single-mode thermal channel."""
    lams = np.asarray(lams, dtype=float)
    return (lams - 1.0) / 2.0 + (np.asarray(n) + 0.5) * np.abs(1.0 - lams) + xi


def _checked_noise(params):
    lams, ns, xis = _split_params(params)
    Nk = noise_photons(lams, ns, xis)
    if Nk.size and Nk.min() < -1e-12:
        raise NegativeEntropyArgument(
            "noise photon number %g < 0; unphysical parameters" % Nk.min()
        )
    return lams, Nk


def holevo_diagonal(params, alloc):
    """Holevo information of parallel single-mode channels, in bits.

    chi = sum_k g(lambda_k P_k + N_k) - g(N_k).
    """
    lams, Nk = _checked_noise(params)
    P = np.asarray(alloc.per_mode, dtype=float)
    if P.shape != lams.shape:
        raise ValueError("allocation length must match the number of modes")
    x_out = lams * P + Nk
    if x_out.size and x_out.min() < -1e-12:
        raise NegativeEntropyArgument("modulated output photon number < 0")
    return float(np.sum(entropy_g_arr(x_out) - entropy_g_arr(Nk)))


def holevo_general(ch, V_mod):
    """Holevo information of an arbitrary channel under Gaussian modulation.

    chi = sum_k g(nubar_k - 1/2) - g(nu_k - 1/2), with nubar_k the symplectic
    eigenvalues of the modulated output H(V_mod + I/2)H^T + Y and nu_k those
    of the unmodulated output H H^T/2 + Y.
    """
    H, Y = ch.H_s, ch.Y
    V_mod = np.asarray(V_mod, dtype=float)
    dim_in = 2 * ch.in_modes
    if V_mod.shape != (dim_in, dim_in):
        raise ValueError("modulation covariance must be 2N x 2N")
    vac = 0.5 * np.eye(dim_in)
    out_bare = H @ vac @ H.T + Y
    out_mod = H @ (V_mod + vac) @ H.T + Y
    nu = symplectic_eigenvalues((out_bare + out_bare.T) / 2.0)
    if nu.min() < 0.5 - 1e-8:
        raise UnphysicalOutput(
            "output symplectic eigenvalue %g below the vacuum floor" % nu.min()
        )
    nu_bar = symplectic_eigenvalues((out_mod + out_mod.T) / 2.0)
    return float(
        np.sum(entropy_g_arr(nu_bar - 0.5)) - np.sum(entropy_g_arr(nu - 0.5))
    )


def _quantum_wf_photons(w, lams):
    # Water-filled output photon target x_k = 1/(mu^{1/lambda_k} - 1) at
    # w = ln mu; expm1 keeps precision near mu -> 1 and overflow maps to 0.
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(w / lams)


def waterfill_holevo(params, P):
    """Optimal Holevo power allocation via quantum water-filling.

    Solves for mu > 1 in

        P = sum_k (1/lambda_k) { 1/(mu^{1/lambda_k} - 1) - N_k }+

    by bisection on w = ln mu (the left side is strictly decreasing in mu),
    then evaluates chi at that allocation.  Modes with lambda_k = 0 carry no
    power and no information.
    """
    if P < 0:
        raise NoFeasibleWaterlevel("power budget must be nonnegative")
    lams, Nk = _checked_noise(params)
    active = lams > 0
    if P == 0 or not active.any():
        alloc = PowerAllocation(np.zeros(lams.shape), float(P))
        mu = None
        if active.any():
            # threshold water level: the mu at which the best mode turns on
            with np.errstate(divide="ignore"):
                thresholds = (1.0 + 1.0 / Nk[active]) ** lams[active]
            mu = float(np.max(thresholds))
        return CapacityResult(0.0, "holevo", alloc, mu)

    la, Na = lams[active], Nk[active]

    def power_at(w):
        return float(np.sum(np.maximum(_quantum_wf_photons(w, la) - Na, 0.0) / la))

    w_lo, w_hi = 1e-12, 1.0
    while power_at(w_lo) < P:
        w_lo /= 2.0
        if w_lo < 1e-300:
            raise NoFeasibleWaterlevel("power budget too large to bracket")
    while power_at(w_hi) > P:
        w_hi *= 2.0
    target_tol = 1e-10 * max(P, 1.0)
    for _ in range(200):
        w_mid = 0.5 * (w_lo + w_hi)
        diff = power_at(w_mid) - P
        if abs(diff) <= target_tol:
            break
        if diff > 0:
            w_lo = w_mid
        else:
            w_hi = w_mid
    else:
        w_mid = 0.5 * (w_lo + w_hi)

    per_mode = np.zeros(lams.shape)
    per_mode[active] = np.maximum(_quantum_wf_photons(w_mid, la) - Na, 0.0) / la
    # absorb the bisection residual so the allocation spends exactly P
    total = per_mode.sum()
    if total > 0.0:
        per_mode *= P / total
    alloc = PowerAllocation(per_mode, float(P))
    bits = holevo_diagonal(params, alloc)
    return CapacityResult(bits, "holevo", alloc, float(math.exp(w_mid)))


def het_hom_per_mode(params, alloc, kind):
    """Heterodyne or homodyne capacity of parallel single-mode channels.

    With signal photons ns_k = lambda_k P_k and noise photons N_k:

        het: sum_k log2(1 + ns_k / (N_k + 1))
        hom: sum_k (1/2) log2(1 + 2 ns_k / (N_k + 1/2))

    (homodyne assumes the modulation power is concentrated in the measured
    quadrature).
    """
    if kind not in _METHOD_NAMES:
        raise ValueError("kind must be 'het' or 'hom'")
    lams, Nk = _checked_noise(params)
    P = np.asarray(alloc.per_mode, dtype=float)
    if P.shape != lams.shape:
        raise ValueError("allocation length must match the number of modes")
    ns = lams * P
    if kind == "het":
        return float(np.sum(np.log2(1.0 + ns / (Nk + 1.0))))
    return float(np.sum(0.5 * np.log2(1.0 + 2.0 * ns / (Nk + 0.5))))


def _waterfill_floors(floors, P):
    # Exact classical water-filling: allocate P_k = {mu - f_k}+ with the
    # water level mu fixed by the budget.  Sort the floors, then for the m
    # cheapest modes mu = (P + sum of their floors)/m; the correct m is the
    # largest one whose water level stays below the next floor.
    floors = np.asarray(floors, dtype=float)
    order = np.argsort(floors)
    f = floors[order]
    finite = int(np.sum(np.isfinite(f)))
    if finite == 0:
        return np.zeros(floors.shape), None
    csum = np.cumsum(f[:finite])
    mu = f[0]
    for m in range(1, finite + 1):
        mu = (P + csum[m - 1]) / m
        if m == finite or mu <= f[m]:
            break
    alloc = np.zeros(floors.shape)
    alloc[order[:m]] = np.maximum(mu - f[:m], 0.0)
    return alloc, float(mu)


def waterfill_het_hom(params, P, kind):
    """Water-filled heterodyne/homodyne capacity.

    Both objectives are classical water-filling problems over per-mode noise
    floors: maximizing sum log2(1 + P_k/f_k) (times 1/2 for homodyne, which
    rescales the objective but not the argmax) gives P_k = {mu - f_k}+ with

        het: f_k = (N_k + 1) / lambda_k
        hom: f_k = (N_k + 1/2) / (2 lambda_k)
    """
    if kind not in _METHOD_NAMES:
        raise ValueError("kind must be 'het' or 'hom'")
    if P < 0:
        raise NoFeasibleWaterlevel("power budget must be nonnegative")
    lams, Nk = _checked_noise(params)
    with np.errstate(divide="ignore"):
        if kind == "het":
            floors = np.where(lams > 0, (Nk + 1.0) / lams, np.inf)
        else:
            floors = np.where(lams > 0, (Nk + 0.5) / (2.0 * lams), np.inf)
    per_mode, mu = _waterfill_floors(floors, float(P))
    alloc = PowerAllocation(per_mode, float(P))
    bits = het_hom_per_mode(params, alloc, kind)
    return CapacityResult(bits, _METHOD_NAMES[kind], alloc, mu)


def het_hom_general(ch, V_mod, kind, hom_quads=None):
    """Multivariate-Gaussian mutual information for het/hom measurement.

    het: (1/2) log2 det[I + S (N + I/2)^{-1}] with S = H V_mod H^T and
    N = H H^T / 2 + Y (the extra I/2 is the heterodyne vacuum penalty).
    hom: same with S, N restricted to one measured quadrature per output mode
    (`hom_quads` indices; default the q quadratures 0..K-1) and no penalty.
    """
    if kind not in _METHOD_NAMES:
        raise ValueError("kind must be 'het' or 'hom'")
    H, Y = ch.H_s, ch.Y
    V_mod = np.asarray(V_mod, dtype=float)
    S = H @ V_mod @ H.T
    N = 0.5 * H @ H.T + Y
    if kind == "het":
        N = N + 0.5 * np.eye(N.shape[0])
    else:
        quads = np.arange(ch.out_modes) if hom_quads is None else np.asarray(hom_quads)
        S = S[np.ix_(quads, quads)]
        N = N[np.ix_(quads, quads)]
    if np.linalg.cond(N) > 1e14:
        raise SingularNoise("measurement noise covariance is singular")
    _, ld_noise = np.linalg.slogdet(N)
    _, ld_total = np.linalg.slogdet(N + S)
    return 0.5 * (ld_total - ld_noise) / _LN2


def hom_general_aligned(ch, P):
    """Homodyne capacity of a general channel measured along its normal modes.

    When the channel does not split into parallel single-mode blocks, a
    lab-frame q measurement mixes modes and quadratures and throws away rate;
    the modulated quadratures have to follow the normal modes of H_s instead.
    This takes the SVD H_s = U diag(s) V^T, measures one direction of each
    descending near-degenerate pair of output singular directions, and puts a
    modulation variance of 2P/N into each matching input direction (P/N
    photons per measured mode).  On block-form channels this reduces exactly
    to the per-mode homodyne formula under a uniform split.
    """
    if P < 0:
        raise ValueError("power must be nonnegative")
    H, Y = ch.H_s, ch.Y
    u, s, _ = np.linalg.svd(H)
    m = min(ch.out_modes, ch.in_modes)
    sel = u[:, 0:2 * m:2]
    noise = sel.T @ (0.5 * H @ H.T + Y) @ sel
    if np.linalg.cond(noise) > 1e14:
        raise SingularNoise("measurement noise covariance is singular")
    sig = np.diag((2.0 * P / ch.in_modes) * s[0:2 * m:2] ** 2)
    _, ld_noise = np.linalg.slogdet(noise)
    _, ld_total = np.linalg.slogdet(noise + sig)
    return 0.5 * (ld_total - ld_noise) / _LN2


def asymptotic_limits(P, kind):
    """Many-mode limits of the identity-channel capacities: het P/ln2, hom 2P/ln2."""
    if kind not in _METHOD_NAMES:
        raise ValueError("kind must be 'het' or 'hom'")
    if P < 0:
        raise ValueError("power must be nonnegative")
    return P / _LN2 if kind == "het" else 2.0 * P / _LN2


def classical_capacity(lambdas, xi, P):
    """Classical Shannon capacity of parallel channels with additive noise xi.

    Water-filling with floors xi/lambda_k:
    C = sum_k {log2(mu lambda_k / xi)}+ at the budget P = sum_k {mu - xi/lambda_k}+.
    """
    if xi <= 0:
        raise ZeroNoiseClassical("classical capacity diverges at xi <= 0")
    if P < 0:
        raise NoFeasibleWaterlevel("power budget must be nonnegative")
    lams = np.asarray(lambdas, dtype=float)
    with np.errstate(divide="ignore"):
        floors = np.where(lams > 0, xi / lams, np.inf)
    per_mode, mu = _waterfill_floors(floors, float(P))
    with np.errstate(invalid="ignore"):
        rates = np.log2(1.0 + np.where(per_mode > 0, per_mode / floors, 0.0))
    bits = float(np.sum(rates))
    return CapacityResult(bits, "classical", PowerAllocation(per_mode, float(P)), mu)

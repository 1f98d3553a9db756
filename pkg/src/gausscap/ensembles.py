"""Haar-random passive channels and their analytic spectral statistics.

Truncating a Haar-random (N+M)-dimensional unitary to its K x N corner block
A_1 gives a random passive channel H_s = R(A_1).  The eigenvalues of
A_1 A_1^dag follow a Jacobi ensemble whose one-point marginal has the closed
form

    p(lambda) = lambda^a (1-lambda)^b / m * sum_{k=0}^{m-1} P_k^{(a,b)}(1-2 lambda)^2 / h_k

with m = min(K, N), a = max(K, N) - min(K, N) and b = N + M - K - N (= M - K),
valid when b >= 0.  Expected capacities under uniform power allocation follow
by integrating the single-mode capacity against p(lambda); Monte Carlo
estimates of the same quantity use per-sample counter-based RNG streams so
results are bit-identical for a given seed regardless of worker count.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._kernels import entropy_g_arr, jacobi_sq_series
from .capacity import PowerAllocation, het_hom_per_mode, holevo_diagonal
from .channels import NoiseParams, block_form_channel
from .decomposition import diagonal_channel_params
from .errors import InsufficientEnvironment
from .phasespace import real_representation

__all__ = [
    "EnsembleSpec",
    "JacobiDensity",
    "haar_unitary",
    "passive_channel_sample",
    "jacobi_polynomial",
    "jacobi_norm_h",
    "spectral_density",
    "expected_capacity_passive",
    "mc_expected_capacity_passive",
    "sample_lambda_spectrum",
]

_MC_METHODS = ("holevo", "het", "hom")


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of a random-channel ensemble.

    N transmitter (signal) modes, K receiver modes, M environment modes,
    thermal/additive noise, squeezing variance sigma2 (0 means passive) and
    the base RNG seed.
    """

    N: int
    K: int
    M: int
    noise: NoiseParams = field(default_factory=NoiseParams)
    sigma2: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if min(self.N, self.K, self.M) < 1:
            raise ValueError("N, K, M must all be >= 1")
        if self.K > self.N + self.M:
            raise InsufficientEnvironment(
                "K = %d receiver modes cannot be cut out of an (N+M) = %d "
                "mode unitary" % (self.K, self.N + self.M)
            )
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be >= 0")


def haar_unitary(dim, rng):
    """Draw a Haar-distributed unitary via QR with phase correction.

    QR-factor a complex standard-Gaussian matrix and absorb the phases of
    diag(R) into Q's columns, which makes the distribution exactly Haar.
    """
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z / math.sqrt(2.0))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def passive_channel_sample(spec, rng):
    """One random passive channel: H_s = R(A_1) with A_1 a Haar-block corner."""
    u = haar_unitary(spec.N + spec.M, rng)
    return block_form_channel(u[: spec.K, : spec.N], spec.noise)


def jacobi_polynomial(k, a, b, x):
    """Jacobi polynomial P_k^{(a,b)}(x) by the three-term recurrence."""
    if k < 0:
        raise ValueError("polynomial degree must be >= 0")
    p_prev = 1.0
    if k == 0:
        return p_prev
    p_cur = 0.5 * ((a + b + 2.0) * x + (a - b))
    for n in range(2, k + 1):
        c0 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
        c1 = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0)
        c2 = (2.0 * n + a + b - 1.0) * (a * a - b * b)
        c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
        p_prev, p_cur = p_cur, ((c1 * x + c2) * p_cur - c3 * p_prev) / c0
    return p_cur


def jacobi_norm_h(k, a, b):
    """Normalization h_k^{(a,b)} = (k+a)!(k+b)! / [(2k+a+b+1)(k+a+b)!k!].

    Evaluated in log space (lgamma) so large degrees do not overflow.
    """
    log_h = (
        math.lgamma(k + a + 1)
        + math.lgamma(k + b + 1)
        - math.lgamma(k + a + b + 1)
        - math.lgamma(k + 1)
        - math.log(2 * k + a + b + 1)
    )
    return math.exp(log_h)


@dataclass(frozen=True)
class JacobiDensity:
    """Analytic eigenvalue density of a truncated-unitary ensemble on [0, 1]."""

    a: int
    b: int
    terms: int
    inv_h: np.ndarray

    def pdf(self, lam):
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        series = jacobi_sq_series(1.0 - 2.0 * lam, float(self.a), float(self.b),
                                  self.inv_h)
        return np.power(lam, self.a) * np.power(1.0 - lam, self.b) * series / self.terms

    __call__ = pdf


def spectral_density(spec):
    """Analytic density of the transmission eigenvalues of a passive ensemble.

    Raises
    ------
    InsufficientEnvironment
        If b = N + M - K - N < 0, i.e. M < K: the truncated-unitary law
        needs at least as many environment as receiver modes.
    """
    m = min(spec.K, spec.N)
    a = max(spec.K, spec.N) - m
    b = spec.N + spec.M - m - max(spec.K, spec.N)
    if b < 0:
        raise InsufficientEnvironment(
            "spectral density requires b = N+M-min-max >= 0 (M >= K); "
            "got N=%d K=%d M=%d" % (spec.N, spec.K, spec.M)
        )
    inv_h = np.array([1.0 / jacobi_norm_h(k, a, b) for k in range(m)])
    return JacobiDensity(a=a, b=b, terms=m, inv_h=inv_h)


def _single_mode_bits(lams, P_mode, n, xi, method):
    # Single-mode capacity at fixed power, vectorized over transmissions.
    Nk = (lams - 1.0) / 2.0 + (n + 0.5) * np.abs(1.0 - lams) + xi
    ns = lams * P_mode
    if method == "holevo":
        return entropy_g_arr(ns + Nk) - entropy_g_arr(Nk)
    if method == "het":
        return np.log2(1.0 + ns / (Nk + 1.0))
    if method == "hom":
        return 0.5 * np.log2(1.0 + 2.0 * ns / (Nk + 0.5))
    raise ValueError("method must be one of %s" % (_MC_METHODS,))


@lru_cache(maxsize=None)
def _gauss_legendre_01(order):
    t, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (t + 1.0), 0.5 * w


def expected_capacity_passive(spec, P, method, allocation="uniform"):
    """Ensemble-expected capacity of random passive channels, analytically.

    C = min(K, N) * integral_0^1 C_1(lambda; P/N, n, xi) p(lambda) d lambda,
    with C_1 the single-mode capacity of the chosen method at uniform power
    P/N.  The integral is evaluated by Gauss-Legendre quadrature with order
    escalation until two successive orders agree to 1e-8 relative.
    """
    if allocation != "uniform":
        raise ValueError("only uniform allocation is supported")
    if P < 0:
        raise ValueError("power must be nonnegative")
    density = spectral_density(spec)
    m = min(spec.K, spec.N)
    P_mode = P / spec.N
    n, xi = spec.noise.n, spec.noise.xi
    value = 0.0
    prev = None
    for order in (32, 64, 128, 256, 512, 1024, 2048):
        lam, w = _gauss_legendre_01(order)
        c1 = _single_mode_bits(lam, P_mode, n, xi, method)
        value = m * float(np.sum(w * c1 * density.pdf(lam)))
        if prev is not None and abs(value - prev) <= 1e-8 * max(abs(value), 1e-12):
            break
        prev = value
    return value


def philox_stream(seed, index):
    """Independent RNG stream for one Monte-Carlo sample.

    Philox is counter-based: keying it with (seed, sample_index) yields
    statistically independent streams whose draws do not depend on how
    samples are distributed over workers.
    """
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def resolve_threads(threads=None):
    """Worker count: explicit argument, else GAUSSCAP_THREADS, else 1."""
    if threads is None:
        threads = int(os.environ.get("GAUSSCAP_THREADS", "1"))
    return max(1, int(threads))


def run_indexed(eval_one, samples, threads=None):
    """Evaluate eval_one(i) for i in range(samples) into an array, in order.

    The output array is indexed by sample, so reductions over it (mean, std)
    are bit-identical no matter how many threads computed the entries.
    """
    threads = resolve_threads(threads)
    out = np.empty(samples)
    if threads == 1:
        for i in range(samples):
            out[i] = eval_one(i)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, value in enumerate(pool.map(eval_one, range(samples))):
                out[i] = value
    return out


def mc_expected_capacity_passive(spec, P, method, samples, seed=None, threads=None):
    """Monte-Carlo estimate of the expected passive-channel capacity.

    Samples channels, decomposes each into singular modes, applies the
    uniform allocation P/N, and returns (mean, standard error) in bits.
    The seed defaults to spec.seed.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    if method not in _MC_METHODS:
        raise ValueError("method must be one of %s" % (_MC_METHODS,))
    base_seed = spec.seed if seed is None else seed

    def eval_one(i):
        rng = philox_stream(base_seed, i)
        ch = passive_channel_sample(spec, rng)
        params = diagonal_channel_params(ch)
        alloc = PowerAllocation(np.full(len(params), P / spec.N), float(P))
        if method == "holevo":
            return holevo_diagonal(params, alloc)
        return het_hom_per_mode(params, alloc, method)

    bits = run_indexed(eval_one, samples, threads)
    mean = float(np.mean(bits))
    se = float(np.std(bits, ddof=1) / math.sqrt(samples))
    return mean, se


def sample_lambda_spectrum(spec, samples, seed=None, pair_tol=1e-8):
    """Empirical transmission eigenvalues from the real representation.

    For each sample, the spectrum of H_s H_s^T is doubly degenerate (each
    eigenvalue of A_1 A_1^dag appears twice).  Consecutive sorted eigenvalues
    are paired and averaged; a pair gap above `pair_tol` raises, as that
    would falsify the doubling.  Returns a flat array of
    samples * min(K, N) eigenvalues.
    """
    base_seed = spec.seed if seed is None else seed
    m = min(spec.K, spec.N)
    out = np.empty((samples, m))
    for i in range(samples):
        rng = philox_stream(base_seed, i)
        u = haar_unitary(spec.N + spec.M, rng)
        H = real_representation(u[: spec.K, : spec.N])
        w = np.linalg.eigvalsh(H @ H.T)[::-1]
        gaps = np.abs(w[0::2] - w[1::2])
        if gaps.max() > pair_tol:
            raise AssertionError(
                "real-representation spectrum not doubly degenerate: gap %g"
                % gaps.max()
            )
        out[i] = 0.5 * (w[0::2] + w[1::2])[:m]
    return out.ravel()

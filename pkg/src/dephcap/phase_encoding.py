"""Holevo rate of phase encoding on two-mode squeezed vacuum through thermal loss.

The sender keeps one arm (the idler), encodes a phase on the other and sends
it through the thermal-loss channel.  Averaging over the encoded phase leaves
a state that is diagonal in the joint Fock basis, so the Holevo information of
the continuous ensemble reduces to

    chi = H(joint Fock diagonal) - [g(A+) + g(A-)],

where A+- are the effective thermal occupations of the (phase-independent)
conditional state.  Subtracting the per-mode entropy cost of the block's
total photon count turns chi into a rate achievable under collective
dephasing.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

from . import bounds
from .errors import ContractViolation, TailBoundError
from .special_math import thermal_entropy_g

_STRUCTURE_TOL = 1e-8
_DEFAULT_TAIL = 1e-9


@dataclass
class GaussianTwoModeState:
    """Zero-mean two-mode Gaussian state, signal mode first, idler second.

    ``cm`` is the 4x4 covariance matrix in (x1, p1, x2, p2) ordering with the
    vacuum normalized to the identity.  Symplectic eigenvalues are computed on
    construction; physicality requires both to be >= 1 up to rounding.
    """

    cm: np.ndarray

    def __post_init__(self):
        cm = np.asarray(self.cm, dtype=float)
        if cm.shape != (4, 4):
            raise ValueError(f"covariance matrix must be 4x4, got {cm.shape}")
        scale = max(1.0, float(np.abs(cm).max()))
        if np.abs(cm - cm.T).max() > _STRUCTURE_TOL * scale:
            raise ValueError("covariance matrix is not symmetric")
        self.cm = 0.5 * (cm + cm.T)
        self.nu_minus, self.nu_plus = symplectic_eigenvalues(self.cm)
        if self.nu_minus < 1.0 - 1e-10:
            raise ValueError(
                f"unphysical covariance matrix: symplectic eigenvalue "
                f"{self.nu_minus} below 1")


def symplectic_eigenvalues(cm):
    """Symplectic spectrum (nu_minus, nu_plus) of a two-mode covariance matrix.

    Taken from the ordinary eigenvalues of i Omega V, which come in +-nu
    pairs; this route avoids the cancellation-prone determinant combination.
    """
    omega = np.array([[0.0, 1.0, 0.0, 0.0],
                      [-1.0, 0.0, 0.0, 0.0],
                      [0.0, 0.0, 0.0, 1.0],
                      [0.0, 0.0, -1.0, 0.0]])
    vals = np.sort(np.abs(np.linalg.eigvals(1j * omega @ np.asarray(cm, float))))
    return float(0.5 * (vals[0] + vals[1])), float(0.5 * (vals[2] + vals[3]))


def tmsv_through_loss(energy, ch):
    """Covariance matrix after the signal arm of a TMSV crosses the channel.

    The idler block stays at (2E+1) I, the signal block becomes (2E'+1) I with
    E' = kappa E + n_b, and the cross block is 2 sqrt(kappa E (E+1)) diag(1,-1).
    The symplectic occupations (nu+- - 1)/2 of this matrix coincide with the
    A+- intermediates of the assisted-capacity formula.
    """
    if energy < 0.0:
        raise ValueError(f"energy must be nonnegative, got {energy}")
    e_prime = ch.output_mean(energy)
    c = 2.0 * math.sqrt(ch.kappa * energy * (energy + 1.0))
    cm = np.diag([2.0 * e_prime + 1.0, 2.0 * e_prime + 1.0,
                  2.0 * energy + 1.0, 2.0 * energy + 1.0])
    cm[0, 2] = cm[2, 0] = c
    cm[1, 3] = cm[3, 1] = -c
    return GaussianTwoModeState(cm)


def gaussian_conditional_entropy(st):
    """Entropy in bits of the Gaussian state: g((nu+ - 1)/2) + g((nu- - 1)/2).

    This is the phase-independent part of the encoded ensemble, i.e. the
    average conditional entropy entering the Holevo difference.
    """
    occ = []
    for nu in (st.nu_plus, st.nu_minus):
        x = 0.5 * (nu - 1.0)
        if x < -1e-10:
            raise ValueError(f"symplectic eigenvalue {nu} below vacuum")
        occ.append(max(x, 0.0))
    return thermal_entropy_g(occ[0]) + thermal_entropy_g(occ[1])


@dataclass
class JointFockDiagonal:
    """Joint photon-number probabilities p[n_signal, n_idler] with tail bound."""

    probs: np.ndarray
    tail_bound: float

    @property
    def cutoffs(self):
        return self.probs.shape

    def signal_marginal(self):
        return self.probs.sum(axis=1)

    def idler_marginal(self):
        return self.probs.sum(axis=0)

    def entropy_bits(self):
        nz = self.probs[self.probs > 0.0]
        return float(-np.sum(nz * np.log2(nz)))


def _state_parameters(st):
    """Recover (E, kappa, n_b) from a loss-applied TMSV covariance matrix."""
    cm = st.cm
    scale = max(1.0, float(np.abs(cm).max()))
    shape_ok = (
        abs(cm[0, 1]) <= _STRUCTURE_TOL * scale
        and abs(cm[2, 3]) <= _STRUCTURE_TOL * scale
        and abs(cm[0, 3]) <= _STRUCTURE_TOL * scale
        and abs(cm[1, 2]) <= _STRUCTURE_TOL * scale
        and abs(cm[0, 0] - cm[1, 1]) <= _STRUCTURE_TOL * scale
        and abs(cm[2, 2] - cm[3, 3]) <= _STRUCTURE_TOL * scale
        and abs(cm[0, 2] + cm[1, 3]) <= _STRUCTURE_TOL * scale)
    if not shape_ok:
        raise ValueError(
            "covariance matrix is not of the loss-applied two-mode-squeezed form")
    energy = max(0.5 * (cm[2, 2] - 1.0), 0.0)
    e_prime = max(0.5 * (cm[0, 0] - 1.0), 0.0)
    if 0.5 * (cm[2, 2] - 1.0) < -1e-10 or 0.5 * (cm[0, 0] - 1.0) < -1e-10:
        raise ValueError("covariance matrix below vacuum noise")
    if energy == 0.0:
        return 0.0, 1.0, e_prime
    kappa = cm[0, 2] ** 2 / (4.0 * energy * (energy + 1.0))
    n_b = e_prime - kappa * energy
    if kappa > 1.0 + 1e-10 or n_b < -1e-10:
        raise ValueError("covariance matrix is not reachable by thermal loss "
                         "acting on a two-mode squeezed vacuum")
    return energy, min(kappa, 1.0), max(n_b, 0.0)


def _number_kernel_log(kappa, n_b, n_out, n_in):
    """ln T[j, n]: photon-number transition kernel of the thermal-loss channel.

    The channel factors exactly into pure loss of transmissivity kappa/(n_b+1)
    followed by a quantum-limited amplifier of gain n_b+1.  Both factors have
    elementary Fock kernels (binomial thinning and a shifted negative
    binomial), and their composition is summed in log space: every entry is a
    sum of nonnegative terms, so the kernel is stable down to underflow.
    """
    gain = n_b + 1.0
    k0 = kappa / gain
    j = np.arange(n_out, dtype=float)[:, None, None]
    n = np.arange(n_in, dtype=float)[None, :, None]
    i = np.arange(min(n_out, n_in), dtype=float)[None, None, :]

    with np.errstate(invalid="ignore", divide="ignore"):
        # thinning |n> -> |i>:  C(n,i) k0^i (1-k0)^(n-i)
        log_thin = (gammaln(n + 1.0) - gammaln(i + 1.0) - gammaln(n - i + 1.0)
                    + xlogy(i, k0) + xlogy(n - i, 1.0 - k0))
        # amplification |i> -> |j>:  C(j,i) (1/G)^(i+1) (1-1/G)^(j-i)
        log_amp = (gammaln(j + 1.0) - gammaln(i + 1.0) - gammaln(j - i + 1.0)
                   - (i + 1.0) * math.log(gain) + xlogy(j - i, 1.0 - 1.0 / gain))
        stack = log_thin + log_amp
        stack[np.broadcast_to(i > np.minimum(j, n), stack.shape)] = -np.inf

        hi = stack.max(axis=2, keepdims=True)
        hi_safe = np.where(np.isfinite(hi), hi, 0.0)
        out = hi_safe[..., 0] + np.log(np.sum(np.exp(stack - hi_safe), axis=2))
    return np.where(np.isfinite(hi[..., 0]), out, -np.inf)


def _idler_log_weights(energy, n_in):
    if energy == 0.0:
        w = np.full(n_in, -np.inf)
        w[0] = 0.0
        return w
    k = np.arange(n_in, dtype=float)
    return k * (math.log(energy) - math.log1p(energy)) - math.log1p(energy)


def _default_cutoffs(energy, e_prime):
    cuts = []
    for mean in (e_prime, energy):
        std = math.sqrt(mean * (mean + 1.0))
        cuts.append(max(16, math.ceil(mean + 12.0 * std)))
    return tuple(cuts)


def fock_diagonal(st, cutoffs=None, tail_tol=_DEFAULT_TAIL):
    """Joint Fock-basis diagonal of a loss-applied TMSV state.

    The TMSV's perfect number correlation survives loss as a classical
    coupling: p[j, k] = w_k T(j | k) with w the idler's thermal law and T the
    channel's photon-number kernel.  The omitted mass is certified from the
    idler's geometric tail plus the kernel columns' deficits.  With explicit
    ``cutoffs`` a certification above ``tail_tol`` raises TailBoundError;
    the defaults (mean + 12 sigma per mode, at least 16) auto-extend until
    the certification passes, since heavy thermal tails can need more room
    than the 12-sigma rule provides.
    """
    energy, kappa, n_b = _state_parameters(st)
    e_prime = kappa * energy + n_b
    auto = cutoffs is None
    if auto:
        cutoffs = _default_cutoffs(energy, e_prime)
    cut_s, cut_i = int(cutoffs[0]), int(cutoffs[1])
    if cut_s < 1 or cut_i < 1:
        raise ValueError(f"cutoffs must be positive, got {cutoffs}")

    for _ in range(64):
        log_w = _idler_log_weights(energy, cut_i)
        log_t = _number_kernel_log(kappa, n_b, cut_s, cut_i)
        with np.errstate(invalid="ignore"):
            probs = np.exp(log_t + log_w[None, :])

        w = np.exp(log_w)
        idler_tail = 0.0 if energy == 0.0 else math.exp(
            cut_i * (math.log(energy) - math.log1p(energy)))
        col_deficit = np.clip(1.0 - np.exp(log_t).sum(axis=0), 0.0, None)
        tail = idler_tail + float(w @ col_deficit) + 1e-14
        if tail <= tail_tol:
            return JointFockDiagonal(probs, tail)
        grow_signal = float(w @ col_deficit) >= idler_tail
        suggestion = (math.ceil(cut_s * 1.4) + 8 if grow_signal else cut_s,
                      cut_i if grow_signal else math.ceil(cut_i * 1.4) + 8)
        if not auto:
            raise TailBoundError(
                f"certified tail {tail:.3e} above {tail_tol:.1e} at cutoffs "
                f"({cut_s}, {cut_i}); try {suggestion}", suggested=suggestion)
        cut_s, cut_i = suggestion
    raise TailBoundError(
        f"tail certification still above {tail_tol:.1e} after auto-extension")


def holevo_phase_encoding(energy, ch, cutoffs=None):
    """Holevo information in bits of the continuous-phase TMSV ensemble."""
    st = tmsv_through_loss(energy, ch)
    diag = fock_diagonal(st, cutoffs=cutoffs)
    chi = diag.entropy_bits() - gaussian_conditional_entropy(st)
    if chi < -1e-10:
        raise ContractViolation(
            f"negative Holevo information {chi} for kappa={ch.kappa}, "
            f"n_b={ch.n_b}, E={energy}")
    return max(chi, 0.0)


def holevo_lb_with_dephasing(m, energy, ch, chi=None):
    """Achievable bits per mode under collective dephasing: chi - H(total)/m.

    ``chi`` may be passed in when sweeping over m so the (m-independent)
    encoding rate is computed once.
    """
    if chi is None:
        chi = holevo_phase_encoding(energy, ch)
    return chi - bounds.entropy_total_exact(m, energy) / float(m)


def holevo_lb_with_dephasing_asym(m, energy, ch, chi=None):
    """Large-m variant; inherits NaN from the entropy approximation."""
    if chi is None:
        chi = holevo_phase_encoding(energy, ch)
    return chi - bounds.entropy_total_asym(m, energy) / float(m)

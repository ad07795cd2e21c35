"""Truncated photon-number distributions with certified tail bounds."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SolverError
from .special_math import LN2

_MASS_SLACK = 1e-12


@dataclass
class PhotonDistribution:
    """Probabilities over total photon number n = 0, 1, ..., cutoff.

    ``tail_bound`` is a certified upper bound on the probability mass sitting
    above the stored cutoff, so probs.sum() + tail_bound accounts for all mass.
    """

    probs: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("probs must be a nonempty 1-d array")
        if probs.min() < -_MASS_SLACK:
            raise ValueError(f"negative probability entry {probs.min()}")
        self.probs = np.clip(probs, 0.0, None)
        if self.tail_bound < 0.0:
            raise ValueError("tail bound must be nonnegative")
        total = float(self.probs.sum())
        if total > 1.0 + _MASS_SLACK or total + self.tail_bound < 1.0 - _MASS_SLACK:
            raise ValueError(
                f"mass {total} plus tail bound {self.tail_bound} does not reach 1")

    @property
    def cutoff(self):
        """Largest stored photon number."""
        return self.probs.size - 1

    def mean(self):
        return float(np.arange(self.probs.size) @ self.probs)

    def variance(self):
        n = np.arange(self.probs.size)
        mu = self.mean()
        return float(((n - mu) ** 2) @ self.probs)


def point_mass():
    """The vacuum distribution (all mass at n = 0)."""
    return PhotonDistribution(np.array([1.0]), 0.0)


@dataclass
class _TailCertificate:
    mass: float = 0.0
    entropy_bits: float = 0.0


def build_from_log_pmf(log_pmf, ratio_bound, start=64, block=64,
                       mass_tol=1e-12, entropy_tol_bits=1e-11,
                       max_len=5_000_000):
    """Materialize a distribution from its natural-log pmf with a certified cutoff.

    ``log_pmf`` maps an integer ndarray to ln-probabilities; ``ratio_bound(n)``
    must upper-bound p(n+1)/p(n) and be nonincreasing in n wherever it is
    below 1 (true for all families used here).  The cutoff is extended until a
    geometric majorant certifies both the omitted mass and its possible
    entropy contribution below the requested tolerances.
    """
    parts = []
    total = 0.0
    lo = 0
    hi = max(int(start), block)
    while True:
        n = np.arange(lo, hi)
        lp = log_pmf(n)
        p = np.exp(lp)
        parts.append(p)
        total += float(p.sum())

        cert = _geometric_tail(float(lp[-1]), ratio_bound(hi - 1))
        if cert is not None:
            if (cert.mass <= mass_tol * max(total, 0.5)
                    and cert.entropy_bits <= entropy_tol_bits):
                break
        lo = hi
        hi += block
        if hi > max_len:
            raise SolverError(
                f"tail certification still open after {max_len} terms")
    return np.concatenate(parts), cert


def _geometric_tail(log_p_last, ratio):
    """Certified bounds on the mass and entropy beyond the last stored term.

    With p(N+k) <= p(N) r^k for a nonincreasing ratio bound r < 1, the tail
    mass is at most p r/(1-r) and its entropy at most
    [-ln(p) r/(1-r) - ln(r) r/(1-r)^2] p, both evaluated here in bits.
    Returns None while the ratio bound is still >= 1 (pre-peak region).
    """
    if not ratio < 1.0:
        return None
    if log_p_last < -700.0:
        # below 1e-304 even the polynomial prefactors cannot lift the tail
        # above ~1e-300; certify trivially without risking exp over/underflow
        return _TailCertificate(0.0, 0.0)
    p = math.exp(log_p_last)
    geo = ratio / (1.0 - ratio)
    mass = p * geo
    entropy = p * (max(-log_p_last, 0.0) * geo - math.log(ratio) * geo / (1.0 - ratio))
    return _TailCertificate(mass, entropy / LN2)

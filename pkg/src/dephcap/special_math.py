"""Numerically stable scalar building blocks.

Conventions used throughout the package:

- every public entropy-like quantity is in bits (log base 2); internal
  accumulation happens in natural logs and is converted once at the end;
- quantities that live in log space are plain floats holding ln(x), with
  ``-inf`` standing in for ln(0).  ``exp`` round-trips such values at
  ordinary float accuracy, and sums of log-space terms go through
  ``logaddexp``/``logsumexp`` so that huge dynamic ranges stay exact.
"""

import math

import numpy as np
from scipy.special import gammaln

from .errors import SolverError

LN2 = math.log(2.0)
LOG_ZERO = float("-inf")


def thermal_entropy_g(n):
    """Entropy in bits of a thermal (geometric) state with mean occupation ``n``.

    Evaluated as n*log1p(1/n) + log1p(n), which is free of cancellation for
    both tiny and huge ``n``; the n -> 0 limit is 0.
    """
    if n < 0:
        raise ValueError(f"mean occupation must be nonnegative, got {n}")
    if n == 0:
        return 0.0
    return (n * math.log1p(1.0 / n) + math.log1p(n)) / LN2


def log_binomial(n, k):
    """Natural log of the binomial coefficient C(n, k) for integer arguments.

    Summed as sum_i ln((n-k+i)/i) over the smaller side of the coefficient,
    which keeps the relative error at a few ulps even for n ~ 1e7 (a plain
    lgamma difference loses digits to cancellation there).
    """
    for name, value in (("n", n), ("k", k)):
        if not float(value).is_integer():
            raise ValueError(f"{name} must be an integer, got {value}")
    n = int(n)
    k = int(k)
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    if k == 0:
        return 0.0
    i = np.arange(1, k + 1, dtype=float)
    return float(np.log((n - k + i) / i).sum())


def shannon_entropy(p, mass_tol=1e-9):
    """Shannon entropy in bits of a probability vector.

    ``p`` may be an array of probabilities or any object with ``probs`` and
    ``tail_bound`` attributes (see PhotonDistribution); in the latter case the
    certified tail is allowed to account for missing mass.  Entries must be
    nonnegative and the total mass must sit within ``mass_tol`` of 1.
    """
    tail = getattr(p, "tail_bound", 0.0)
    probs = np.asarray(getattr(p, "probs", p), dtype=float)
    if probs.size and probs.min() < 0.0:
        raise ValueError("negative probability entry")
    total = float(probs.sum())
    if total > 1.0 + mass_tol or total + tail < 1.0 - mass_tol:
        raise ValueError(f"probability mass {total} (tail bound {tail}) is not 1")
    nz = probs[probs > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def _squared_series_logs(m, z, rel_tol=1e-16, tail_tol=1e-14, block=256,
                         max_terms=20_000_000):
    """ln of S0 = sum_n C(n+m-1, m-1)^2 z^n and S1 = sum_n n C(n+m-1, m-1)^2 z^n.

    Terms are generated in blocks directly in log space.  The term ratio of S0
    is ((n+m)/(n+1))^2 z, which decreases monotonically toward z < 1, so once
    the ratio r at the last computed index is below 1 the omitted tail is
    bounded by the geometric sum t_last * r / (1 - r); the S1 ratio picks up
    an extra (n+1)/n factor and gets the same treatment.  Summation stops when
    the last term is below rel_tol of the running sum and both certified tails
    are below tail_tol of their sums.
    """
    if not float(m).is_integer() or m < 1:
        raise ValueError(f"mode count must be a positive integer, got {m}")
    m = int(m)
    if not 0.0 <= z < 1.0:
        raise ValueError(f"series argument must lie in [0, 1), got {z}")
    if z == 0.0:
        return 0.0, LOG_ZERO

    ln_z = math.log(z)
    lg_m = gammaln(m)
    log_s0 = LOG_ZERO
    log_s1 = LOG_ZERO
    start = 0
    while start < max_terms:
        n = np.arange(start, start + block, dtype=float)
        log_t = 2.0 * (gammaln(n + m) - gammaln(n + 1.0) - lg_m) + n * ln_z
        log_s0 = np.logaddexp(log_s0, _logsumexp(log_t))
        with np.errstate(divide="ignore"):
            log_nt = log_t + np.log(n)  # n = 0 contributes ln(0) = -inf
        log_s1 = np.logaddexp(log_s1, _logsumexp(log_nt))

        n_last = start + block - 1
        r0 = ((n_last + m) / (n_last + 1.0)) ** 2 * z
        t_rel = math.exp(log_t[-1] - log_s0)
        if r0 < 1.0 and t_rel < rel_tol:
            tail0 = t_rel * r0 / (1.0 - r0)
            r1 = r0 * (n_last + 1.0) / n_last
            tail1 = math.inf
            if r1 < 1.0:
                tail1 = math.exp(log_nt[-1] - log_s1) * r1 / (1.0 - r1)
            if tail0 < tail_tol and tail1 < tail_tol:
                return float(log_s0), float(log_s1)
        start += block
    raise SolverError(
        f"squared-binomial series did not converge within {max_terms} terms "
        f"(m={m}, z={z})")


def _logsumexp(values):
    # scipy's logsumexp handles the all -inf edge with a warning; this doesn't.
    hi = np.max(values)
    if hi == LOG_ZERO:
        return LOG_ZERO
    return float(hi + np.log(np.exp(values - hi).sum()))


def hyp2f1_squared_series(m, z, block=256):
    """ln sum_n C(n+m-1, m-1)^2 z^n, the normalization of the optimal-input law.

    Certified so the omitted tail is below 1e-14 of the sum.
    """
    return _squared_series_logs(m, z, block=block)[0]


def hyp2f1_squared_mean_series(m, z, block=256):
    """ln sum_n n C(n+m-1, m-1)^2 z^n (companion mean series, same certification)."""
    return _squared_series_logs(m, z, block=block)[1]

"""Closed-form capacities of the single-mode thermal-loss channel.

The channel mixes the signal with a thermal environment on a beamsplitter of
transmissivity ``kappa``; ``n_b`` is the mean photon number the channel adds
to a vacuum input.  Both assisted and unassisted capacities of this channel
are known in closed form in terms of the thermal entropy function.
"""

import math
from dataclasses import dataclass

from .errors import ContractViolation
from .special_math import thermal_entropy_g

_CLAMP = 1e-12


@dataclass(frozen=True)
class ThermalLossChannel:
    kappa: float
    n_b: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.kappa <= 1.0:
            raise ValueError(f"transmissivity must lie in (0, 1], got {self.kappa}")
        if self.n_b < 0.0:
            raise ValueError(f"added noise must be nonnegative, got {self.n_b}")
        if self.kappa == 1.0 and self.n_b != 0.0:
            raise ValueError("a lossless channel cannot add thermal noise")

    def output_mean(self, energy):
        """Mean photon number at the output for input mean ``energy``."""
        return self.kappa * energy + self.n_b


def _intermediates(ch, energy):
    """(output mean E', discriminant D, A+, A-) entering the capacity formula.

    D^2 = (E + E' + 1)^2 - 4 kappa E (E + 1) is evaluated in the expanded form
    E^2 (1-kappa)^2 + 2 E [(1+kappa) n_b + (1-kappa)] + (n_b+1)^2, whose terms
    are all nonnegative, so no cancellation occurs anywhere in the parameter
    range.  A+- = (D - 1 +- (E' - E)) / 2 are clamped to 0 from tiny negative
    rounding; both are means of effective thermal modes and are >= 0 exactly.
    """
    e_prime = ch.kappa * energy + ch.n_b
    d_sq = ((energy * (1.0 - ch.kappa)) ** 2
            + 2.0 * energy * ((1.0 + ch.kappa) * ch.n_b + (1.0 - ch.kappa))
            + (ch.n_b + 1.0) ** 2)
    big_d = math.sqrt(d_sq)
    half_gap = 0.5 * (e_prime - energy)
    a_plus = 0.5 * (big_d - 1.0) + half_gap
    a_minus = 0.5 * (big_d - 1.0) - half_gap
    if a_plus < 0.0 or a_minus < 0.0:
        if min(a_plus, a_minus) < -_CLAMP:
            raise ContractViolation(
                f"thermal occupations A+={a_plus}, A-={a_minus} below zero "
                f"beyond rounding for kappa={ch.kappa}, n_b={ch.n_b}, E={energy}")
        a_plus = max(a_plus, 0.0)
        a_minus = max(a_minus, 0.0)
    return e_prime, big_d, a_plus, a_minus


def ea_capacity(ch, energy):
    """Entanglement-assisted classical capacity in bits per channel use."""
    if energy < 0.0:
        raise ValueError(f"input energy must be nonnegative, got {energy}")
    if energy == 0.0:
        return 0.0
    e_prime, _, a_plus, a_minus = _intermediates(ch, energy)
    return (thermal_entropy_g(energy) + thermal_entropy_g(e_prime)
            - thermal_entropy_g(a_plus) - thermal_entropy_g(a_minus))


def hsw_capacity(ch, energy):
    """Unassisted (Holevo) classical capacity in bits per channel use."""
    if energy < 0.0:
        raise ValueError(f"input energy must be nonnegative, got {energy}")
    if energy == 0.0:
        return 0.0
    return thermal_entropy_g(ch.output_mean(energy)) - thermal_entropy_g(ch.n_b)


def advantage_ratio(ch, energy):
    """Ratio of assisted to unassisted capacity; undefined at zero energy."""
    if energy <= 0.0:
        raise ValueError("capacity ratio is undefined at zero input energy")
    return ea_capacity(ch, energy) / hsw_capacity(ch, energy)


@dataclass(frozen=True)
class CapacityReport:
    """Both capacities plus the intermediates of the assisted formula."""

    kappa: float
    n_b: float
    energy: float
    ea: float
    hsw: float
    ratio: float
    e_prime: float
    big_d: float
    a_plus: float
    a_minus: float


def capacity_report(ch, energy):
    if energy < 0.0:
        raise ValueError(f"input energy must be nonnegative, got {energy}")
    e_prime, big_d, a_plus, a_minus = _intermediates(ch, energy)
    ea = ea_capacity(ch, energy)
    hsw = hsw_capacity(ch, energy)
    ratio = ea / hsw if energy > 0.0 else math.nan
    if ea < -_CLAMP or hsw < -_CLAMP or ea + _CLAMP < hsw:
        raise ContractViolation(
            f"capacity ordering violated: ea={ea}, hsw={hsw} "
            f"(kappa={ch.kappa}, n_b={ch.n_b}, E={energy})")
    return CapacityReport(ch.kappa, ch.n_b, energy, ea, hsw, ratio,
                          e_prime, big_d, a_plus, a_minus)

"""Quantum Fisher information, Cramer-Rao precision bounds on the
Schwarzschild radius and the equatorial angular velocity, regime
classification, and the quantum bit error rate of a simple entanglement-based
key protocol.

For a two-mode squeezed probe with squeezing s, bandwidth sigma and peak
frequencies omega1, omega2, the fidelity between states whose shift parameters
differ by d_delta is, in the regime |delta| << (W^2/8 sigma^2) delta^2 << 1
with W^2 = (omega1^2 + omega2^2)/2,

    F = 1 - ((omega1^2 + omega2^2) / 4 sigma^2) sinh^2(s) d_delta^2,

whence the quantum Fisher information

    H = ((omega1^2 + omega2^2) / sigma^2) sinh^2(s)

and the single-parameter Cramer-Rao bound |Delta delta| >= 1 / sqrt(N H).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ddouble import DD, ONE
from .errors import DomainError, NumericalError, RegimeError
from .perturb import (
    ParamTarget,
    ShiftDecomposition,
    error_angular_velocity,
    error_schwarzschild_radius,
)

# Relative uncertainty of the equatorial angular velocity achieved by the
# standards community; reference value for reporting only, never computed with.
STATE_OF_THE_ART_OMEGA_RELATIVE = 1e-8


@dataclass(frozen=True)
class MetrologyConfig:
    """Probe resources: count N, squeezing s, bandwidth and peak frequencies."""

    probes: float = 1e10  # N
    squeezing: float = 2.0  # s; zero means an unsqueezed probe with no
    # information in this scheme
    sigma: float = 1e6  # Hz
    omega1: float = 7e14  # Hz
    omega2: float = 7e14  # Hz

    def __post_init__(self):
        for name in ("probes", "sigma", "omega1", "omega2"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"MetrologyConfig.{name} must be positive")
        if self.squeezing < 0.0:
            raise DomainError("MetrologyConfig.squeezing must be non-negative")

    @property
    def mean_square_peak(self) -> float:
        """W^2 = (omega1^2 + omega2^2) / 2."""
        return 0.5 * (self.omega1 * self.omega1 + self.omega2 * self.omega2)


@dataclass(frozen=True)
class RegimeStatus:
    valid: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class PrecisionBound:
    """Cramer-Rao lower bound on a spacetime parameter."""

    target: ParamTarget
    delta_delta_min: float
    relative_bound: float


# The defining inequalities are strict orderings ("much less than"); demand a
# factor-10 separation between the tiers before trusting the local formulas.
REGIME_MARGIN = 10.0


def regime_check(delta: float, cfg: MetrologyConfig,
                 margin: float = REGIME_MARGIN) -> RegimeStatus:
    """Classify whether |delta| << (W^2/8 sigma^2) delta^2 << 1 holds."""
    if delta == 0.0:
        return RegimeStatus(False, "degenerate: delta = 0")
    mid = cfg.mean_square_peak * delta * delta / (8.0 * cfg.sigma * cfg.sigma)
    if not margin * abs(delta) < mid:
        return RegimeStatus(
            False,
            f"|delta| = {abs(delta):.3e} not well below (W^2/8 sigma^2) delta^2 = {mid:.3e}",
        )
    if not margin * mid < 1.0:
        return RegimeStatus(
            False,
            f"(W^2/8 sigma^2) delta^2 = {mid:.3e} not well below 1",
        )
    return RegimeStatus(True)


def fidelity_two_mode(d_delta: float, cfg: MetrologyConfig) -> float:
    """Fidelity between two-mode squeezed states at shift offset d_delta.

    Local expansion: refuses once the quadratic term would drive it negative.
    """
    sh = math.sinh(cfg.squeezing)
    drop = (cfg.omega1 ** 2 + cfg.omega2 ** 2) / (4.0 * cfg.sigma ** 2) \
        * sh * sh * d_delta * d_delta
    if drop > 1.0:
        raise DomainError(
            f"fidelity expansion out of range: quadratic drop {drop:.3e} exceeds 1"
        )
    return 1.0 - drop


def qfi(cfg: MetrologyConfig) -> float:
    """Quantum Fisher information for the shift parameter."""
    sh = math.sinh(cfg.squeezing)
    return (cfg.omega1 ** 2 + cfg.omega2 ** 2) / cfg.sigma ** 2 * sh * sh


def qfi_numeric_limit(cfg: MetrologyConfig, step: float = 2e-12,
                      rungs: int = 3, rtol: float = 1e-8) -> float:
    """QFI as the numeric limit 8 (1 - sqrt(F)) / d_delta^2, d_delta -> 0.

    Evaluated in compensated arithmetic with Richardson extrapolation over a
    halving ladder of step sizes; the limit error of each rung is O(step^2).
    """
    if rungs < 3:
        raise DomainError("the Richardson ladder needs at least three rungs")
    sh = math.sinh(cfg.squeezing)
    coef = DD.of(cfg.omega1 ** 2 + cfg.omega2 ** 2) / (4.0 * cfg.sigma ** 2) \
        * (sh * sh)

    def estimate(h: float) -> DD:
        hh = DD.product(h, h)
        fid = ONE - coef * hh
        if fid.sign() <= 0:
            raise DomainError("qfi_numeric_limit step too large for the expansion")
        return 8.0 * (ONE - fid.sqrt()) / hh

    ladder = [estimate(step / 2 ** i) for i in range(rungs)]
    # one Richardson level removes the O(h^2) error
    refined = [(4.0 * ladder[i + 1] - ladder[i]) / 3.0 for i in range(rungs - 1)]
    best = refined[-1].to_float()
    prev = refined[0].to_float() if len(refined) > 1 else ladder[-1].to_float()
    if not math.isfinite(best) or abs(best - prev) > rtol * abs(best):
        raise NumericalError("Richardson ladder for the QFI limit did not converge")
    return best


def cramer_rao(H: float, N: float) -> float:
    """Lower bound |Delta delta| >= 1/sqrt(N H); infinite when H vanishes."""
    if H < 0.0:
        raise DomainError("quantum Fisher information cannot be negative")
    if N < 1.0:
        raise DomainError("probe count must be at least 1")
    if H == 0.0:
        return math.inf
    return 1.0 / math.sqrt(N * H)


def shift_uncertainty_floor(cfg: MetrologyConfig) -> float:
    """Closed form of the Cramer-Rao bound:
    |Delta delta| >= sigma / (sqrt(N (omega1^2 + omega2^2)) sinh s)."""
    sh = math.sinh(cfg.squeezing)
    if sh == 0.0:
        return math.inf  # no squeezing, no information in this scheme
    return cfg.sigma / (
        math.sqrt(cfg.probes * (cfg.omega1 ** 2 + cfg.omega2 ** 2)) * sh
    )


def bound_schwarzschild_radius(cfg: MetrologyConfig,
                               dec: ShiftDecomposition) -> PrecisionBound:
    """Optimal relative bound on the Schwarzschild radius for this link."""
    floor = shift_uncertainty_floor(cfg)
    err = error_schwarzschild_radius(dec, floor)
    return PrecisionBound(err.target, floor, err.relative_error)


def bound_angular_velocity(cfg: MetrologyConfig, dec: ShiftDecomposition,
                           target: ParamTarget = ParamTarget.EQUATORIAL_ANGULAR_VELOCITY
                           ) -> PrecisionBound:
    """Optimal relative bound on the equatorial angular velocity (equivalently,
    for orbit-to-orbit links, on the spin parameter)."""
    floor = shift_uncertainty_floor(cfg)
    err = error_angular_velocity(dec, floor, target)
    return PrecisionBound(err.target, floor, err.relative_error)


def orders_vs_state_of_the_art(relative_bound: float) -> int:
    """Whole orders of magnitude separating a bound from the published
    angular-velocity uncertainty (positive = worse than state of the art)."""
    if relative_bound <= 0.0 or not math.isfinite(relative_bound):
        raise DomainError("relative bound must be positive and finite")
    return round(math.log10(relative_bound / STATE_OF_THE_ART_OMEGA_RELATIVE))


def qber(delta: float, cfg: MetrologyConfig) -> float:
    """Quantum bit error rate ~ delta^2 W^2 / (8 sigma^2) of the two-memory
    entanglement-swapping key protocol, valid only inside the regime."""
    status = regime_check(delta, cfg)
    if not status:
        raise RegimeError(f"QBER formula outside its regime: {status.reason}")
    return delta * delta * cfg.mean_square_peak / (8.0 * cfg.sigma * cfg.sigma)

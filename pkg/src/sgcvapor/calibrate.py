"""Dipole-moment calibration against the near-resonant alignment sweep.

The model never fixes the magnitudes of the transition dipoles d42 and
mu23; they only scale the response. Two reference features of the
near-resonant (delta_p = 1e-16 gamma) alignment sweep pin them:

1. Re(eps_r) equals the local-field saturation value -2 as p -> 1-. Since
   eps_r + 2 = 9/(3 - N*ge) and N*ge scales as d42^2, Re(eps_r) at the
   sweep endpoint p = 1 - 1e-6 decreases monotonically from +1 toward -2
   as d42 grows and crosses -2 exactly where Re(N*ge) = 3. That root is

       d42 = sqrt(3 / Re(N*ge / d42^2)).

2. Re(mu_r) crosses zero from positive to negative at p* = 0.55. With
   w = N*gm = mu23 * w_hat, Re(mu_r) = 0 is the quadratic
   2|w|^2 - 3 Re(w) - 9 = 0, whose positive root in mu23 is closed-form.

Both conditions are monotone in the parameter being solved for (the first
in d42 up to its root, the second in mu23 because |Im w| grows linearly
while Re w stays negligible near resonance), so the closed forms coincide
with what a bisection would find. Runs in well under a second.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .params import SystemParams
from .response import electric_polarizability, magnetic_polarizability
from .steady import steady_state

#: probe detuning used for calibration (gamma units, effectively resonant)
CALIBRATION_DETUNING = 1e-16
#: alignment endpoint standing in for p -> 1- (the sweep guard)
CALIBRATION_P_END = 1.0 - 1e-6
#: alignment at which Re(mu_r) must cross zero
CALIBRATION_P_CROSS = 0.55


class CalibrationError(RuntimeError):
    """The calibration condition has no solution at these parameters."""


@dataclass(frozen=True)
class CalibratedDipoles:
    d42: float
    mu23: float


def calibrate_dipoles(base: SystemParams | None = None) -> CalibratedDipoles:
    """Solve the two calibration conditions; returns (d42, mu23) in SI.

    ``base`` supplies the remaining parameters (defaults if omitted); its
    own d42/mu23 values are irrelevant because the conditions are solved
    in closed form from the dipole-independent steady state.
    """
    if base is None:
        base = SystemParams()

    # endpoint condition: Re(N*ge) = 3 at p -> 1-  <=>  Re(eps_r) = -2
    end = replace(base, p_align=CALIBRATION_P_END, delta_p=CALIBRATION_DETUNING, d42=1.0)
    rho = steady_state(end)
    ge_unit = electric_polarizability(rho.rho24, end)   # = ge / d42^2
    re_nge_unit = (base.density_n * ge_unit).real
    if re_nge_unit <= 0.0:
        raise CalibrationError(
            "Re(N*ge) is non-positive at the sweep endpoint; Re(eps_r) cannot reach -2")
    d42 = (3.0 / re_nge_unit) ** 0.5

    # crossing condition: Re(mu_r) = 0 at p = 0.55, i.e. 2|w|^2 - 3 Re(w) = 9
    cross = replace(base, p_align=CALIBRATION_P_CROSS, delta_p=CALIBRATION_DETUNING,
                    d42=d42, mu23=1.0)
    rho = steady_state(cross)
    w_hat = base.density_n * magnetic_polarizability(rho.rho32, cross)  # = N*gm / mu23
    mod2 = abs(w_hat) ** 2
    if mod2 == 0.0:
        raise CalibrationError("magnetic response vanishes at the crossing alignment")
    u_hat = w_hat.real
    mu23 = (3.0 * u_hat + (9.0 * u_hat ** 2 + 72.0 * mod2) ** 0.5) / (4.0 * mod2)
    if not mu23 > 0.0:
        raise CalibrationError("no positive mu23 satisfies the crossing condition")
    return CalibratedDipoles(d42=d42, mu23=mu23)


def calibrated_params(base: SystemParams | None = None, **overrides) -> SystemParams:
    """SystemParams with calibrated d42/mu23 applied (plus any overrides)."""
    if base is None:
        base = SystemParams()
    cal = calibrate_dipoles(base)
    return replace(base, d42=cal.d42, mu23=cal.mu23, **overrides)

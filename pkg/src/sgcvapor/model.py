"""Density matrix, equations of motion, and their vectorized generator.

The equations of motion (rotating-wave approximation, interaction picture)
for the Y-type system read, with q = p*sqrt(gamma3*gamma4) the interference
rate and Omega_1, Omega_p the effective Rabi frequencies:

    rho11' =  2*g2*rho22 + i*W1*(rho21 - rho12)
    rho33' = -2*g3*rho33 - q*(rho34 + rho43)                 [corrected sign]
    rho44' = -2*g4*rho44 - q*(rho34 + rho43) + i*Wp*(rho24 - rho42)
    rho12' = -g2*rho12 + i*W1*(rho22 - rho11) - i*Wp*rho14
    rho13' = -g3*rho13 + i*W1*rho23 - q*rho14
    rho14' = -(g4 - i*D)*rho14 - q*rho13 + i*W1*rho24 - i*Wp*rho12
    rho23' = -(g2 + g3)*rho23 + i*W1*rho13 + i*Wp*rho43 - q*rho24
    rho24' = -(g2 + g4 - i*D)*rho24 + i*Wp*(rho44 - rho22) + i*W1*rho14 - q*rho23
    rho34' = -(g3 + g4 - i*D)*rho34 - i*Wp*rho32 - q*(rho33 + rho44)

with D = delta_p.  The rho22 equation is the unique completion that makes
the total population derivative vanish,

    rho22' = -(rho11' + rho33' + rho44'),

which expands to -2*g2*rho22 + 2*g3*rho33 + 2*g4*rho44 + 2*q*(rho34 + rho43)
plus the field terms.  In the PAPER_LITERAL variant the rho33 equation keeps
the self-amplifying +2*g3*rho33 term and the rho22 completion follows it, so
the two variants differ by -+4*g3*rho33 in exactly the rho33 and rho22
components.

Everything is linear in rho, so the flow is dx/dt = L x on the real
16-vector x = (rho11, rho22, rho33, rho44, Re rho12, Im rho12, ...,
Re rho34, Im rho34) with pairs ordered (1,2), (1,3), (1,4), (2,3), (2,4),
(3,4).  ``build_generator`` assembles L entry by entry from the expanded
real equations, independently of the complex-arithmetic ``eom_rhs``, so the
two routes cross-check each other.
"""

from __future__ import annotations

import numpy as np

from .params import SystemParams, EquationVariant, ValidationError

# Vectorization layout: 4 populations then Re/Im of the 6 upper coherences.
IDX_N1, IDX_N2, IDX_N3, IDX_N4 = 0, 1, 2, 3
IDX_RE12, IDX_IM12 = 4, 5
IDX_RE13, IDX_IM13 = 6, 7
IDX_RE14, IDX_IM14 = 8, 9
IDX_RE23, IDX_IM23 = 10, 11
IDX_RE24, IDX_IM24 = 12, 13
IDX_RE34, IDX_IM34 = 14, 15

_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

#: real components that flip sign under p -> -p (coherences involving |3>)
LEVEL3_COHERENCE_INDICES = (IDX_RE13, IDX_IM13, IDX_RE23, IDX_IM23,
                            IDX_RE34, IDX_IM34)

# Tolerances for state validation.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
POPULATION_TOL = 1e-8

GeneratorMatrix = np.ndarray  # real (16, 16); dx/dt = L @ x


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Map a Hermitian 4x4 matrix to the real 16-vector layout."""
    rho = np.asarray(rho)
    x = np.empty(16)
    x[:4] = rho.diagonal().real
    for k, (i, j) in enumerate(_PAIRS):
        x[4 + 2 * k] = rho[i, j].real
        x[5 + 2 * k] = rho[i, j].imag
    return x


def unvectorize(x: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`; output is Hermitian by construction."""
    x = np.asarray(x, dtype=float)
    rho = np.zeros((4, 4), dtype=complex)
    rho[np.diag_indices(4)] = x[:4]
    for k, (i, j) in enumerate(_PAIRS):
        rho[i, j] = x[4 + 2 * k] + 1j * x[5 + 2 * k]
        rho[j, i] = x[4 + 2 * k] - 1j * x[5 + 2 * k]
    return rho


class DensityMatrix:
    """4x4 complex Hermitian unit-trace state of the atom.

    Wraps a numpy array; ``m[i, j]`` is rho_{i+1, j+1} in level labels.
    """

    __slots__ = ("m",)

    def __init__(self, matrix: np.ndarray, check: bool = True):
        self.m = np.array(matrix, dtype=complex)
        if self.m.shape != (4, 4):
            raise ValidationError(f"density matrix must be 4x4, got {self.m.shape}")
        if check:
            self.validate()

    @classmethod
    def ground(cls) -> "DensityMatrix":
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = 1.0
        return cls(m)

    @classmethod
    def from_populations(cls, n1: float, n2: float, n3: float, n4: float) -> "DensityMatrix":
        return cls(np.diag([n1, n2, n3, n4]).astype(complex))

    @classmethod
    def from_vector(cls, x: np.ndarray, check: bool = True) -> "DensityMatrix":
        return cls(unvectorize(x), check=check)

    def vector(self) -> np.ndarray:
        return vectorize(self.m)

    def validate(self) -> None:
        if not np.all(np.isfinite(self.m.view(float))):
            raise ValidationError("density matrix has non-finite entries")
        herm = np.max(np.abs(self.m - self.m.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValidationError(f"not Hermitian: max |rho - rho^+| = {herm:.3e}")
        tr = self.m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace differs from 1 by {abs(tr - 1.0):.3e}")
        pops = self.m.diagonal().real
        if pops.min() < -POPULATION_TOL or pops.max() > 1.0 + POPULATION_TOL:
            raise ValidationError(f"populations outside [0, 1]: {pops}")

    @property
    def rho24(self) -> complex:
        """Coherence driving the electric dipole response."""
        return complex(self.m[1, 3])

    @property
    def rho32(self) -> complex:
        """Coherence driving the magnetic dipole response (= conj(rho23))."""
        return complex(self.m[2, 1])

    def __repr__(self) -> str:
        pops = ", ".join(f"{v:.6f}" for v in self.m.diagonal().real)
        return f"DensityMatrix(populations=[{pops}])"


def eom_rhs(params: SystemParams, rho) -> np.ndarray:
    """Time derivative drho/dt (gamma units) of a Hermitian state.

    Accepts a DensityMatrix or a raw 4x4 complex array; returns a 4x4
    complex array. The derivative is Hermitian whenever the input is, and
    traceless by construction of the rho22 completion (in both variants).
    """
    m = rho.m if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    g2, g3, g4 = params.gamma2, params.gamma3, params.gamma4
    w1, wp = params.omega1, params.omegap
    q = params.sgc_rate
    d = params.delta_p
    literal = params.equation_variant is EquationVariant.PAPER_LITERAL

    r11, r22, r33, r44 = m[0, 0], m[1, 1], m[2, 2], m[3, 3]
    r12, r13, r14 = m[0, 1], m[0, 2], m[0, 3]
    r23, r24, r34 = m[1, 2], m[1, 3], m[2, 3]
    r21, r42, r43, r32 = m[1, 0], m[3, 1], m[3, 2], m[2, 1]

    d11 = 2 * g2 * r22 + 1j * w1 * (r21 - r12)
    if literal:
        d33 = 2 * g3 * r33 - q * (r34 + r43)
    else:
        d33 = -2 * g3 * r33 - q * (r34 + r43)
    d44 = -2 * g4 * r44 - q * (r34 + r43) + 1j * wp * (r24 - r42)
    d22 = -(d11 + d33 + d44)

    d12 = -g2 * r12 + 1j * w1 * (r22 - r11) - 1j * wp * r14
    d13 = -g3 * r13 + 1j * w1 * r23 - q * r14
    d14 = -(g4 - 1j * d) * r14 - q * r13 + 1j * w1 * r24 - 1j * wp * r12
    d23 = -(g2 + g3) * r23 + 1j * w1 * r13 + 1j * wp * r43 - q * r24
    d24 = -(g2 + g4 - 1j * d) * r24 + 1j * wp * (r44 - r22) + 1j * w1 * r14 - q * r23
    d34 = -(g3 + g4 - 1j * d) * r34 - 1j * wp * r32 - q * (r33 + r44)

    out = np.empty((4, 4), dtype=complex)
    out[0, 0], out[1, 1], out[2, 2], out[3, 3] = d11, d22, d33, d44
    out[0, 1], out[0, 2], out[0, 3] = d12, d13, d14
    out[1, 2], out[1, 3], out[2, 3] = d23, d24, d34
    out[1, 0], out[2, 0], out[3, 0] = np.conj(d12), np.conj(d13), np.conj(d14)
    out[2, 1], out[3, 1], out[3, 2] = np.conj(d23), np.conj(d24), np.conj(d34)
    return out


def build_generator(params: SystemParams) -> GeneratorMatrix:
    """Real 16x16 generator L with dx/dt = L x.

    Assembled entry by entry from the real/imaginary expansion of the
    equations of motion (not by probing :func:`eom_rhs`), so the two
    implementations stay independent cross-checks of each other.
    """
    g2, g3, g4 = params.gamma2, params.gamma3, params.gamma4
    w1, wp = params.omega1, params.omegap
    q = params.sgc_rate
    d = params.delta_p
    literal = params.equation_variant is EquationVariant.PAPER_LITERAL

    L = np.zeros((16, 16))

    # populations
    L[IDX_N1, IDX_N2] = 2 * g2
    L[IDX_N1, IDX_IM12] = 2 * w1
    L[IDX_N3, IDX_N3] = 2 * g3 if literal else -2 * g3
    L[IDX_N3, IDX_RE34] = -2 * q
    L[IDX_N4, IDX_N4] = -2 * g4
    L[IDX_N4, IDX_RE34] = -2 * q
    L[IDX_N4, IDX_IM24] = -2 * wp
    # trace-conserving completion of the rho22 row
    L[IDX_N2, :] = -(L[IDX_N1, :] + L[IDX_N3, :] + L[IDX_N4, :])

    # rho12: -g2*r12 + i*w1*(n2 - n1) - i*wp*r14
    L[IDX_RE12, IDX_RE12] = -g2
    L[IDX_RE12, IDX_IM14] = wp
    L[IDX_IM12, IDX_IM12] = -g2
    L[IDX_IM12, IDX_N2] = w1
    L[IDX_IM12, IDX_N1] = -w1
    L[IDX_IM12, IDX_RE14] = -wp

    # rho13: -g3*r13 + i*w1*r23 - q*r14
    L[IDX_RE13, IDX_RE13] = -g3
    L[IDX_RE13, IDX_IM23] = -w1
    L[IDX_RE13, IDX_RE14] = -q
    L[IDX_IM13, IDX_IM13] = -g3
    L[IDX_IM13, IDX_RE23] = w1
    L[IDX_IM13, IDX_IM14] = -q

    # rho14: -(g4 - i*d)*r14 - q*r13 + i*w1*r24 - i*wp*r12
    L[IDX_RE14, IDX_RE14] = -g4
    L[IDX_RE14, IDX_IM14] = -d
    L[IDX_RE14, IDX_RE13] = -q
    L[IDX_RE14, IDX_IM24] = -w1
    L[IDX_RE14, IDX_IM12] = wp
    L[IDX_IM14, IDX_RE14] = d
    L[IDX_IM14, IDX_IM14] = -g4
    L[IDX_IM14, IDX_IM13] = -q
    L[IDX_IM14, IDX_RE24] = w1
    L[IDX_IM14, IDX_RE12] = -wp

    # rho23: -(g2 + g3)*r23 + i*w1*r13 + i*wp*conj(r34) - q*r24
    L[IDX_RE23, IDX_RE23] = -(g2 + g3)
    L[IDX_RE23, IDX_IM13] = -w1
    L[IDX_RE23, IDX_IM34] = wp
    L[IDX_RE23, IDX_RE24] = -q
    L[IDX_IM23, IDX_IM23] = -(g2 + g3)
    L[IDX_IM23, IDX_RE13] = w1
    L[IDX_IM23, IDX_RE34] = wp
    L[IDX_IM23, IDX_IM24] = -q

    # rho24: -(g2 + g4 - i*d)*r24 + i*wp*(n4 - n2) + i*w1*r14 - q*r23
    L[IDX_RE24, IDX_RE24] = -(g2 + g4)
    L[IDX_RE24, IDX_IM24] = -d
    L[IDX_RE24, IDX_IM14] = -w1
    L[IDX_RE24, IDX_RE23] = -q
    L[IDX_IM24, IDX_RE24] = d
    L[IDX_IM24, IDX_IM24] = -(g2 + g4)
    L[IDX_IM24, IDX_N4] = wp
    L[IDX_IM24, IDX_N2] = -wp
    L[IDX_IM24, IDX_RE14] = w1
    L[IDX_IM24, IDX_IM23] = -q

    # rho34: -(g3 + g4 - i*d)*r34 - i*wp*conj(r23) - q*(n3 + n4)
    L[IDX_RE34, IDX_RE34] = -(g3 + g4)
    L[IDX_RE34, IDX_IM34] = -d
    L[IDX_RE34, IDX_IM23] = -wp
    L[IDX_RE34, IDX_N3] = -q
    L[IDX_RE34, IDX_N4] = -q
    L[IDX_IM34, IDX_RE34] = d
    L[IDX_IM34, IDX_IM34] = -(g3 + g4)
    L[IDX_IM34, IDX_RE23] = -wp

    return L

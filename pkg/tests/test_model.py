import numpy as np
import pytest

import sgcvapor.model as model
from sgcvapor import (DensityMatrix, EquationVariant, SystemParams,
                      ValidationError, build_generator, eom_rhs, unvectorize,
                      vectorize)
from sgcvapor.model import LEVEL3_COHERENCE_INDICES

from conftest import random_hermitian

NO_FIELDS = SystemParams(omega1_bare=0.0, omegap_bare=0.0, p_align=0.0)
DEFAULTS_P05 = SystemParams(p_align=0.5)


class TestDensityMatrix:
    def test_ground_state_is_valid(self):
        rho = DensityMatrix.ground()
        assert rho.m[0, 0] == 1.0
        rho.validate()

    def test_vector_round_trip(self):
        rng = np.random.default_rng(7)
        rho = random_hermitian(rng)
        x = vectorize(rho)
        assert np.allclose(unvectorize(x), rho, atol=0)
        assert x.shape == (16,)

    def test_vector_layout_order(self):
        # populations first, then Re/Im pairs in (1,2),(1,3),(1,4),(2,3),(2,4),(3,4) order
        rho = np.zeros((4, 4), dtype=complex)
        rho[1, 3] = 0.25 + 0.125j  # rho24
        rho[3, 1] = 0.25 - 0.125j
        x = vectorize(rho)
        assert x[model.IDX_RE24] == 0.25
        assert x[model.IDX_IM24] == 0.125

    def test_unvectorize_is_hermitian_by_construction(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=16)
        m = unvectorize(x)
        assert np.array_equal(m, m.conj().T)

    def test_non_hermitian_rejected(self):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = 1.0
        m[0, 1] = 0.1
        with pytest.raises(ValidationError):
            DensityMatrix(m)

    def test_wrong_trace_rejected(self):
        with pytest.raises(ValidationError):
            DensityMatrix(np.eye(4, dtype=complex))

    def test_negative_population_rejected(self):
        m = np.diag([1.2, -0.2, 0.0, 0.0]).astype(complex)
        with pytest.raises(ValidationError):
            DensityMatrix(m)

    def test_coherence_accessors(self):
        m = np.zeros((4, 4), dtype=complex)
        m[np.diag_indices(4)] = 0.25
        m[1, 3], m[3, 1] = 0.1 + 0.2j, 0.1 - 0.2j
        m[1, 2], m[2, 1] = 0.05 - 0.03j, 0.05 + 0.03j
        rho = DensityMatrix(m)
        assert rho.rho24 == 0.1 + 0.2j
        assert rho.rho32 == 0.05 + 0.03j  # conj(rho23)


class TestEquationsOfMotion:
    def test_undriven_ground_state_is_stationary(self):
        d = eom_rhs(NO_FIELDS, DensityMatrix.ground())
        assert np.max(np.abs(d)) == 0.0

    def test_derivative_is_traceless_corrected(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            d = eom_rhs(DEFAULTS_P05, random_hermitian(rng))
            assert abs(d.trace()) < 1e-12

    def test_derivative_is_traceless_paper_literal_too(self):
        # the rho22 completion follows each variant's own rho33 equation
        params = SystemParams(p_align=0.5,
                              equation_variant=EquationVariant.PAPER_LITERAL)
        rng = np.random.default_rng(12)
        d = eom_rhs(params, random_hermitian(rng))
        assert abs(d.trace()) < 1e-12

    def test_hermiticity_preserved(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            d = eom_rhs(DEFAULTS_P05, random_hermitian(rng))
            assert np.max(np.abs(d - d.conj().T)) < 1e-12

    def test_real_linearity(self):
        rng = np.random.default_rng(14)
        r1 = random_hermitian(rng, unit_trace=False)
        r2 = random_hermitian(rng, unit_trace=False)
        a, b = 0.7, -1.3
        lhs = eom_rhs(DEFAULTS_P05, a * r1 + b * r2)
        rhs = a * eom_rhs(DEFAULTS_P05, r1) + b * eom_rhs(DEFAULTS_P05, r2)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_variants_differ_only_in_rho33_and_rho22(self):
        corrected = SystemParams(p_align=0.5)
        literal = SystemParams(p_align=0.5,
                               equation_variant=EquationVariant.PAPER_LITERAL)
        rng = np.random.default_rng(15)
        rho = random_hermitian(rng)
        diff = eom_rhs(literal, rho) - eom_rhs(corrected, rho)
        g3 = corrected.gamma3
        expected_33 = 4.0 * g3 * rho[2, 2]
        assert diff[2, 2] == pytest.approx(expected_33, abs=1e-12)
        assert diff[1, 1] == pytest.approx(-expected_33, abs=1e-12)
        mask = np.ones((4, 4), dtype=bool)
        mask[2, 2] = mask[1, 1] = False
        assert np.max(np.abs(diff[mask])) < 1e-12


# generator entries that carry the interference rate q = p*sqrt(g3*g4)
_Q_ENTRIES = (
    (model.IDX_N3, model.IDX_RE34), (model.IDX_N4, model.IDX_RE34),
    (model.IDX_N2, model.IDX_RE34),
    (model.IDX_RE13, model.IDX_RE14), (model.IDX_IM13, model.IDX_IM14),
    (model.IDX_RE14, model.IDX_RE13), (model.IDX_IM14, model.IDX_IM13),
    (model.IDX_RE23, model.IDX_RE24), (model.IDX_IM23, model.IDX_IM24),
    (model.IDX_RE24, model.IDX_RE23), (model.IDX_IM24, model.IDX_IM23),
    (model.IDX_RE34, model.IDX_N3), (model.IDX_RE34, model.IDX_N4),
)


class TestGenerator:
    def test_interference_entries_vanish_at_p_zero(self):
        L = build_generator(SystemParams(p_align=0.0))
        for row, col in _Q_ENTRIES:
            assert L[row, col] == 0.0

    def test_interference_entries_present_otherwise(self):
        L = build_generator(SystemParams(p_align=0.5))
        assert all(L[row, col] != 0.0 for row, col in _Q_ENTRIES)

    def test_undriven_ground_state_in_kernel(self):
        L = build_generator(NO_FIELDS)
        assert np.max(np.abs(L @ vectorize(DensityMatrix.ground().m))) == 0.0

    def test_entries_finite(self):
        L = build_generator(DEFAULTS_P05)
        assert np.all(np.isfinite(L))

    def test_population_rows_sum_to_zero_corrected(self):
        L = build_generator(DEFAULTS_P05)
        assert np.max(np.abs(L[:4, :].sum(axis=0))) < 1e-12

    def test_matches_scalar_equations_on_random_states(self):
        # the matrix is assembled independently of eom_rhs; the two must agree
        L = build_generator(DEFAULTS_P05)
        rng = np.random.default_rng(16)
        for _ in range(100):
            rho = random_hermitian(rng)
            via_matrix = unvectorize(L @ vectorize(rho))
            via_scalar = eom_rhs(DEFAULTS_P05, rho)
            assert np.max(np.abs(via_matrix - via_scalar)) < 1e-12

    def test_matches_scalar_equations_paper_literal(self):
        params = SystemParams(p_align=0.3, delta_p=2.0,
                              equation_variant=EquationVariant.PAPER_LITERAL)
        L = build_generator(params)
        rng = np.random.default_rng(17)
        rho = random_hermitian(rng)
        assert np.max(np.abs(unvectorize(L @ vectorize(rho))
                             - eom_rhs(params, rho))) < 1e-12

    @pytest.mark.parametrize("p", [0.3, 0.8])
    def test_alignment_reflection_symmetry(self, p):
        # negating the level-3 coherence components commutes with p -> -p
        plus = build_generator(SystemParams(p_align=p, delta_p=3.0))
        minus = build_generator(SystemParams(p_align=-p, delta_p=3.0))
        flip = np.ones(16)
        flip[list(LEVEL3_COHERENCE_INDICES)] = -1.0
        rng = np.random.default_rng(18)
        for _ in range(20):
            x = rng.normal(size=16)
            assert np.max(np.abs(minus @ (flip * x) - flip * (plus @ x))) < 1e-12

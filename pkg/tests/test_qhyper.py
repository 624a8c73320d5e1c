# tests/test_qhyper.py
import itertools
import math

import pytest
from hypothesis import given, strategies as st

from common.errors import DivergenceError, PoleError
from qseries.core import QContext, qpoch_bilateral_index, qpoch_finite, qpoch_infinite_many
from qseries.hyper import (
    CONSECUTIVE_SMALL_TERMS, BilateralTermGen, PhiSpec, bilateral_sum, dougall_5h5, dougall_closed_form, phi_rs,
)


class TestPhi:
    def test_zero_argument(self):
        assert phi_rs(PhiSpec.of([0.3], [0.2], 0), QContext(q=0.5)).as_complex() == 1

    @pytest.mark.parametrize("n", [0, 1, 3, 6])
    def test_chu_vandermonde(self, n):
        q, b, c = 0.5, 0.3, 0.7
        ctx = QContext(q=q)
        result = phi_rs(PhiSpec.of([q ** -n, b], [c], q), ctx)
        expected = qpoch_finite(c / b, ctx, n) * b ** n / qpoch_finite(c, ctx, n)
        assert result.converged
        assert result.diagnostics["terminating"] == n
        assert result.as_complex() == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("numerator", list(itertools.permutations([0.5 ** -4, 0.3, 0.6])))
    def test_terminating_numerator_order(self, numerator):
        ctx = QContext(q=0.5)
        reference = phi_rs(PhiSpec.of([0.5 ** -4, 0.3, 0.6], [0.2, 0.7], 0.4), ctx)
        permuted = phi_rs(PhiSpec.of(list(numerator), [0.2, 0.7], 0.4), ctx)
        assert permuted.diagnostics["terminating"] == 4
        assert permuted.as_complex() == pytest.approx(reference.as_complex(), rel=1e-12)

    @given(st.floats(min_value=-0.9, max_value=0.9), st.floats(min_value=-0.8, max_value=0.8),
           st.floats(min_value=0.1, max_value=0.9))
    def test_q_binomial_theorem(self, a, z, q):
        ctx = QContext(q=q)
        result = phi_rs(PhiSpec.of([a], [], z), ctx)
        expected = qpoch_infinite_many([a * z], ctx).as_complex() / qpoch_infinite_many([z], ctx).as_complex()
        assert result.converged
        assert result.as_complex() == pytest.approx(expected, rel=1e-11, abs=1e-14)

    def test_q_gauss_sum(self):
        q, a, b, c = 0.5, 0.3, 0.4, 0.1
        ctx = QContext(q=q)
        result = phi_rs(PhiSpec.of([a, b], [c], c / (a * b)), ctx)
        expected = (qpoch_infinite_many([c / a, c / b], ctx).as_complex()
                    / qpoch_infinite_many([c, c / (a * b)], ctx).as_complex())
        assert result.as_complex() == pytest.approx(expected, rel=1e-12)

    def test_divergent_series(self):
        ctx = QContext(q=0.5)
        with pytest.raises(DivergenceError):
            phi_rs(PhiSpec.of([0.3, 0.4, 0.5], [0.2], 0.1), ctx)
        with pytest.raises(DivergenceError):
            phi_rs(PhiSpec.of([0.3, 0.4], [0.2], 1.5), ctx)

    def test_denominator_pole_before_termination(self):
        with pytest.raises(PoleError):
            phi_rs(PhiSpec.of([8.0], [2.0], 0.3), QContext(q=0.5))


class TestBilateral:
    def test_two_sided_geometric(self):
        result = bilateral_sum(BilateralTermGen(lambda k: 0.5 ** abs(k), decay_hint=0.5), QContext(q=0.5))
        assert result.converged
        assert result.as_complex() == pytest.approx(3.0, rel=1e-14)
        assert result.diagnostics["ratio_plus"] == pytest.approx(0.5)
        assert result.diagnostics["ratio_minus"] == pytest.approx(0.5)
        assert result.diagnostics["hint_mismatch"] < 1e-12

    def test_ramanujan_sum(self):
        q, a, b, z = 0.5, 0.6, 0.3, 0.7
        ctx = QContext(q=q)

        def term(k: int) -> complex:
            return qpoch_bilateral_index(a, ctx, k) / qpoch_bilateral_index(b, ctx, k) * z ** k

        result = bilateral_sum(BilateralTermGen(term), ctx)
        expected = (qpoch_infinite_many([q, b / a, a * z, q / (a * z)], ctx).as_complex()
                    / qpoch_infinite_many([b, q / a, z, b / (a * z)], ctx).as_complex())
        assert result.converged
        assert result.as_complex() == pytest.approx(expected, rel=1e-11)

    def test_growing_tail_does_not_converge(self):
        ctx = QContext(q=0.5, max_terms=200)
        result = bilateral_sum(BilateralTermGen(lambda k: 1.01 ** k), ctx)
        assert not result.converged

    def test_one_sided_generator_matches_forward_sum(self):
        q, a, z = 0.5, 0.3, 0.6
        ctx = QContext(q=q)

        def term(k: int) -> complex:
            if k < 0:
                return 0.0
            return qpoch_finite(a, ctx, k) / qpoch_finite(q, ctx, k) * z ** k

        result = bilateral_sum(BilateralTermGen(term), ctx)
        assert result.converged
        lower, upper = result.diagnostics["extent"]
        assert lower == -CONSECUTIVE_SMALL_TERMS
        forward = sum(term(k) for k in range(upper + 1))
        assert abs(result.as_complex() - forward) <= math.ulp(abs(forward))
        assert result.as_complex() == pytest.approx(phi_rs(PhiSpec.of([a], [], z), ctx).as_complex(), rel=1e-12)

    def test_settings_without_context(self):
        gen = BilateralTermGen(lambda k: 0.5 ** abs(k))
        result = bilateral_sum(gen, eps_term=1e-12)
        assert result.converged
        assert result.as_complex() == pytest.approx(3.0, rel=1e-11)
        truncated = bilateral_sum(gen, max_terms=3)
        assert not truncated.converged
        assert truncated.diagnostics["extent"] == (-3, 3)


class TestDougall:
    def test_zero_parameters(self):
        result = dougall_5h5(0.0, 0.0, 0.0, 0.0)
        assert result.closed_form == pytest.approx(-1 / (2 * math.pi ** 2), rel=1e-14)
        assert result.direct == pytest.approx(-1 / (2 * math.pi ** 2), rel=1e-9)

    def test_generic_parameters(self):
        result = dougall_5h5(0.1, 0.2, 0.3, 0.4)
        assert result.relative_defect < 1e-9
        assert len(result.window_sums) == 4

    def test_closed_form_symmetry(self):
        assert dougall_closed_form((0.1, 0.2, 0.3, 0.4)) == pytest.approx(
            dougall_closed_form((0.4, 0.3, 0.2, 0.1)), rel=1e-14)

    def test_divergent_parameters(self):
        with pytest.raises(DivergenceError):
            dougall_5h5(-0.3, -0.3, -0.3, -0.3)

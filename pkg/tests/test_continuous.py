# tests/test_continuous.py
import math

import pytest
from hypothesis import given, strategies as st

from common.errors import ConfigError, ConstraintError, DivergenceError
from families import Family, FamilyTag, ZPoint
from orthogonality.continuous.core import (
    T_LIMIT, WeightSpec, beta_integral_check, continuous_inner, continuous_norm, discrete_to_continuous_check,
    fourier_pair_closed, gaussian_constant, gaussian_power_integral, gaussian_power_quadrature,
    hermite_symmetric_inner, j_integral, j_integral_triangulation, omega2, psi_closed, psi_sum, qbeta_integral,
    ramanujan_fourier_pair, sin4_integral, sin4_integrand, t_constant, t_constant_sequence, w2_weight,
)
from orthogonality.continuous.quadrature import (
    QuadratureSpec, integrate_real_line, integrate_unit_periodic, trig_product_components,
)
from qseries.core import QContext

CTX = QContext(q=0.5)
HERMITE = Family(FamilyTag.HERMITE)


class TestQuadrature:
    def test_gaussian(self):
        result = integrate_real_line(lambda x: math.exp(-x * x), QuadratureSpec.from_config(8.0))
        assert result.converged
        assert result.as_complex().real == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    def test_odd_integrand(self):
        result = integrate_real_line(lambda x: x * math.exp(-x * x), QuadratureSpec.from_config(8.0))
        assert abs(result.as_complex()) < 1e-14

    def test_truncated_envelope_is_flagged(self):
        result = integrate_real_line(lambda x: math.exp(-0.01 * x * x), QuadratureSpec.from_config(3.0))
        assert not result.diagnostics["envelope_ok"]
        assert not result.converged

    def test_unit_periodic(self):
        # integral over a period of 1/(2 - cos 2 pi x) is 1/sqrt(3)
        result = integrate_unit_periodic(lambda x: 1 / (2 - math.cos(2 * math.pi * x)))
        assert result.converged
        assert result.as_complex().real == pytest.approx(1 / math.sqrt(3), rel=1e-12)

    def test_trig_product(self):
        # sin(a) sin(b) = (cos(a - b) - cos(a + b)) / 2
        components = dict((w, (A, B)) for w, A, B in trig_product_components((3.0, 1.0), (0.0, 0.0)))
        assert components[2.0] == pytest.approx((0.5, 0.0), abs=1e-15)
        assert components[4.0] == pytest.approx((-0.5, 0.0), abs=1e-15)

    @pytest.mark.parametrize("a,alpha", [(2.0, 1.5), (4.0, 0.7), (1.0, 1.0)])
    def test_gaussian_power(self, a, alpha):
        result = gaussian_power_quadrature(a, alpha)
        assert result.as_complex().real == pytest.approx(gaussian_power_integral(a, alpha), rel=1e-12)

    def test_invalid_window_is_config_error(self):
        with pytest.raises(ConfigError):
            QuadratureSpec(half_width=-1.0)
        with pytest.raises(ConfigError):
            QuadratureSpec(half_width=4.0, step=0.0)
        with pytest.raises(ConfigError):
            QuadratureSpec(half_width=4.0, refine_limit=0)


class TestWeights:
    @given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=0.1, max_value=0.9))
    def test_w2_is_gaussian_in_t(self, t, q):
        x = ZPoint(q ** t).x.real
        assert w2_weight(x, q) == pytest.approx(omega2(t, q), rel=1e-9)

    def test_hermite_weight(self):
        weight = WeightSpec(HERMITE, 1.0)
        for x in (-2.0, -0.3, 0.0, 0.7, 3.1):
            expected = (1 + 0.5 ** (2 * x)) * 0.5 ** (2 * x * x - x)
            assert weight.value(x, CTX).real == pytest.approx(expected, rel=1e-13)

    def test_weight_rejects_bad_alpha(self):
        with pytest.raises(ConstraintError):
            WeightSpec(HERMITE, 0.0)
        with pytest.raises(ConstraintError):
            WeightSpec(HERMITE, 1 + 1j)
        with pytest.raises(ConstraintError):
            gaussian_constant(-1.0, CTX)

    def test_complex_base_rejected(self):
        with pytest.raises(ConstraintError):
            continuous_inner(HERMITE, 1.0, 0, 0, QContext(q=0.3 + 0.4j))


class TestContinuousOrthogonality:
    @pytest.mark.parametrize("n", range(5))
    def test_hermite_diagonal(self, n):
        norm = 0.5 ** -(n * (n - 1) // 2) * math.prod(1 - 0.5 ** j for j in range(1, n + 1)) \
            * 0.5 ** (-n - 0.125) * math.sqrt(2 * math.pi / math.log(2))
        assert continuous_norm(HERMITE, 1.0, n, CTX).real == pytest.approx(norm, rel=1e-13)
        assert continuous_inner(HERMITE, 1.0, n, n, CTX).real == pytest.approx(norm, rel=1e-8)

    def test_hermite_offdiagonal(self):
        for m, n in ((0, 1), (0, 2), (1, 3), (2, 4)):
            value = continuous_inner(HERMITE, 1.0, m, n, CTX)
            scale = math.sqrt(abs(continuous_norm(HERMITE, 1.0, m, CTX)) * abs(continuous_norm(HERMITE, 1.0, n, CTX)))
            assert abs(value) <= 1e-8 * scale

    @pytest.mark.parametrize("m,n", [(0, 0), (1, 1), (0, 2), (2, 2)])
    def test_hermite_symmetric_form(self, m, n):
        reference = continuous_norm(HERMITE, 1.0, n, CTX).real if m == n else 0.0
        scale = continuous_norm(HERMITE, 1.0, n, CTX).real
        assert abs(hermite_symmetric_inner(m, n, CTX) - reference) <= 1e-8 * scale

    @pytest.mark.parametrize("tag,params", [
        (FamilyTag.BIG_HERMITE, (0.3,)),
        (FamilyTag.AL_SALAM_CHIHARA, (0.2, 0.3)),
        (FamilyTag.DUAL_HAHN, (0.2, 0.3, 0.4)),
        (FamilyTag.ASKEY_WILSON, (0.2, 0.3, 0.4, 0.5)),
    ])
    def test_parameter_families(self, tag, params):
        fam = Family.of(tag, *params)
        for m in range(3):
            for n in range(m, 3):
                value = continuous_inner(fam, 1.0, m, n, CTX)
                if m == n:
                    norm = continuous_norm(fam, 1.0, n, CTX)
                    assert abs(value - norm) <= 1e-8 * abs(norm)
                else:
                    scale = math.sqrt(abs(continuous_norm(fam, 1.0, m, CTX)) * abs(continuous_norm(fam, 1.0, n, CTX)))
                    assert abs(value) <= 1e-8 * scale

    def test_normalized_diagonal_is_alpha_free(self):
        fam = Family.of(FamilyTag.AL_SALAM_CHIHARA, 0.2, 0.3)
        ratios = [continuous_inner(fam, alpha, 2, 2, CTX) / gaussian_constant(alpha, CTX) for alpha in (1.0, 0.6, 1.8)]
        assert ratios[1] == pytest.approx(ratios[0], rel=1e-8)
        assert ratios[2] == pytest.approx(ratios[0], rel=1e-8)

    def test_askey_wilson_degree_bound(self):
        fam = Family.of(FamilyTag.ASKEY_WILSON, 0.2, 0.3, 0.4, 0.5)
        with pytest.raises(ConstraintError):
            continuous_inner(fam, 1.0, 3, 3, QContext(q=0.3))


class TestCorrespondence:
    def test_lattice_sum_closed_form(self):
        fam = Family.of(FamilyTag.AL_SALAM_CHIHARA, 0.2, 0.3)
        for alpha in (1.0, 0.7):
            assert psi_sum(fam, alpha, 1, 1, CTX) == pytest.approx(psi_closed(fam, alpha, 1, CTX), rel=1e-10)
            assert abs(psi_sum(fam, alpha, 0, 1, CTX)) <= 1e-10 * abs(psi_closed(fam, alpha, 1, CTX))

    @pytest.mark.parametrize("m,n", [(0, 0), (1, 1), (0, 2)])
    def test_unit_interval_matches_real_line(self, m, n):
        report = discrete_to_continuous_check(HERMITE, 1.0, m, n, CTX)
        assert report.defect <= 1e-7
        assert report.closed_defect <= 1e-7

    def test_periodic_factor(self):
        fam = Family.of(FamilyTag.BIG_HERMITE, 0.3)
        report = discrete_to_continuous_check(fam, 1.0, 1, 1, CTX, omega=lambda x: 1 + 0.5 * math.cos(2 * math.pi * x))
        assert report.closed_form is None
        assert report.closed_defect is None
        assert report.defect <= 1e-7


class TestJIntegral:
    @pytest.mark.parametrize("alpha", [1.0, 0.5, 2.0])
    def test_unit_interval_form(self, alpha):
        unit, closed = j_integral(alpha, CTX)
        assert unit == pytest.approx(closed, rel=1e-9)

    def test_three_way_agreement(self):
        report = j_integral_triangulation(1.0, CTX)
        assert report.worst_defect <= 1e-9


class TestQBeta:
    def test_closed_form(self):
        quadrature, closed = qbeta_integral(1.0, (0.2, 0.3, 0.4, 0.5), QContext(q=0.4))
        assert abs(quadrature - closed) <= 1e-8 * abs(closed)

    def test_parameter_constraint(self):
        with pytest.raises(ConstraintError):
            qbeta_integral(1.0, (2.0, 2.0, 1.0, 1.0), QContext(q=0.5))
        with pytest.raises(ConstraintError):
            qbeta_integral(1.0, (0.2, 0.3, 0.4), QContext(q=0.5))

    def test_hermite_degeneration(self):
        ctx = QContext(q=0.5)
        hermite = gaussian_constant(1.0, ctx)
        defects = []
        for s in (1e-1, 1e-2, 1e-3):
            quadrature, _ = qbeta_integral(1.0, tuple(s * p for p in (0.2, 0.3, 0.4, 0.5)), ctx)
            defects.append(abs(quadrature - hermite) / hermite)
            assert defects[-1] <= s
        assert defects[1] < defects[0] / 5
        assert defects[2] < defects[1] / 5


class TestBetaIntegral:
    def test_zero_parameters(self):
        report = beta_integral_check(0.0, 0.0, 0.0, 0.0)
        assert report.closed_form == pytest.approx(-1 / (2 * math.pi ** 2), rel=1e-14)
        defects = report.defects()
        assert defects["dougall"] <= 1e-9
        assert defects["quadrature"] <= 1e-4

    def test_generic_parameters(self):
        defects = beta_integral_check(0.1, 0.2, 0.3, 0.4).defects()
        assert defects["dougall"] <= 1e-9
        assert defects["quadrature"] <= 1e-4

    def test_divergent_parameters(self):
        with pytest.raises(DivergenceError):
            beta_integral_check(-0.3, -0.3, -0.3, -0.3)

    def test_sin4(self):
        value = sin4_integral()
        assert value.real == 0.0
        assert value.imag == pytest.approx(math.pi ** 3 / 4, rel=1e-6)

    @given(st.floats(min_value=1e-3, max_value=40.0))
    def test_sin4_real_part_is_odd(self, x):
        assert sin4_integrand(-x).real == pytest.approx(-sin4_integrand(x).real, rel=1e-12, abs=1e-300)
        assert sin4_integrand(-x).imag == pytest.approx(sin4_integrand(x).imag, rel=1e-12, abs=1e-300)
        assert sin4_integrand(0.0) == 0


class TestFourierPair:
    @pytest.mark.parametrize("a,t,expected", [(0.5, 0.0, 2.0), (1.0, math.pi / 2, 1.0), (1.0, 3.5, 0.0)])
    def test_known_values(self, a, t, expected):
        quadrature, closed = ramanujan_fourier_pair(a, t)
        assert closed == pytest.approx(expected, abs=1e-14)
        assert abs(quadrature - closed) <= 1e-6

    def test_closed_form_support(self):
        assert fourier_pair_closed(0.7, math.pi) == 0.0
        assert fourier_pair_closed(0.7, -4.0) == 0.0

    def test_parameter_range(self):
        with pytest.raises(ConstraintError):
            ramanujan_fourier_pair(-0.5, 1.0)


class TestTConstant:
    def test_limit(self):
        assert abs(t_constant(0.999) - T_LIMIT) < 5e-3

    def test_sequence_approaches_limit(self):
        values = t_constant_sequence((0.9, 0.99, 0.999))
        assert abs(values[-1] - T_LIMIT) < abs(values[0] - T_LIMIT)

    def test_rejects_bad_base(self):
        with pytest.raises(ConstraintError):
            t_constant(1.0)

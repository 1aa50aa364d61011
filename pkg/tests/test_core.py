"""Normalization map and configuration tests."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simcred import CredibilityConfig, DomainError, config_from_dict, load_config, normalize, scale_factor
from simcred.core import DEFAULT_CONFIG, WEIGHT_SUM_TOL


class TestScaleFactor:
    def test_default_passing_mark(self):
        assert scale_factor(0.6) == pytest.approx(0.75, abs=1e-15)

    def test_symmetry_point(self):
        # eta_pass**2 == 1 - eta_pass**2 at 1/sqrt(2)
        assert scale_factor(1.0 / math.sqrt(2.0)) == pytest.approx(1.0, abs=1e-12)

    def test_hand_evaluated(self):
        # 0.8 / sqrt(1 - 0.64) = 0.8 / 0.6
        assert scale_factor(0.8) == pytest.approx(0.8 / 0.6, rel=1e-14)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.3, 1.7, float("nan")])
    def test_out_of_range(self, bad):
        with pytest.raises(DomainError):
            scale_factor(bad)


class TestNormalize:
    def test_zero_error_is_perfect(self):
        assert normalize(0.0, 1e-9) == 1.0
        assert normalize(0.0, 42.0) == 1.0

    def test_error_at_threshold_hits_passing_mark(self):
        assert normalize(3.0e-4, 3.0e-4) == pytest.approx(0.6, abs=1e-12)

    def test_sensor_noise_value(self):
        assert normalize(2e-4, 6e-4) == pytest.approx(0.913, abs=1e-3)

    def test_low_precision_curve_value(self):
        assert normalize(0.012, 0.0175) == pytest.approx(0.738, abs=1e-3)

    @pytest.mark.parametrize("eps", [0.0, -1.0, float("inf"), float("nan")])
    def test_bad_threshold(self, eps):
        with pytest.raises(DomainError):
            normalize(1.0, eps)

    @pytest.mark.parametrize("e", [-1e-12, -3.0, float("inf"), float("nan")])
    def test_bad_error(self, e):
        with pytest.raises(DomainError):
            normalize(e, 1.0)

    @given(
        e=st.floats(min_value=0.0, max_value=1e12),
        eps=st.floats(min_value=1e-12, max_value=1e12),
    )
    def test_range(self, e, eps):
        index = normalize(e, eps)
        assert 0.0 < index <= 1.0

    @given(
        e=st.floats(min_value=1e-9, max_value=1e6),
        eps=st.floats(min_value=1e-9, max_value=1e6),
        k=st.floats(min_value=1e-6, max_value=1e6),
    )
    def test_scale_invariance(self, e, eps, k):
        assert normalize(k * e, k * eps) == pytest.approx(normalize(e, eps), rel=1e-12)

    @given(
        eta_pass=st.floats(min_value=1e-6, max_value=1.0 - 1e-6),
        eps=st.floats(min_value=1e-9, max_value=1e9),
    )
    def test_calibration_for_any_passing_mark(self, eta_pass, eps):
        config = CredibilityConfig(eta_pass=eta_pass)
        assert abs(normalize(eps, eps, config) - eta_pass) <= 1e-12

    # strictness is only observable while e/eps stays in the float-representable
    # regime; far below it the index saturates at 1.0 exactly
    @given(
        ratio=st.floats(min_value=1e-6, max_value=1e6),
        eps=st.floats(min_value=1e-6, max_value=1e6),
    )
    def test_strictly_decreasing_in_error(self, ratio, eps):
        e = ratio * eps
        assert normalize(e * 1.5, eps) < normalize(e, eps)

    @given(
        ratio=st.floats(min_value=1e-6, max_value=1e6),
        eps=st.floats(min_value=1e-6, max_value=1e6),
    )
    def test_strictly_increasing_in_threshold(self, ratio, eps):
        e = ratio * eps
        assert normalize(e, eps * 1.5) > normalize(e, eps)

    @given(eps=st.floats(min_value=1e-6, max_value=1e3))
    @settings(max_examples=200)
    def test_decays_monotonically_far_beyond_threshold(self, eps):
        e = 10.0 * eps
        previous = normalize(e, eps)
        for _ in range(12):
            e *= 2.0
            current = normalize(e, eps)
            assert current < previous
            previous = current


class TestCredibilityConfig:
    def test_defaults(self):
        config = CredibilityConfig()
        assert config.eta_pass == 0.6
        assert config.k_p == 0.05
        assert config.eps_min == 0.9
        assert config.eps_co == 0.6
        assert config.weights == pytest.approx((1 / 3, 1 / 3, 1 / 3))
        assert sum(config.weights) == pytest.approx(1.0, abs=WEIGHT_SUM_TOL)

    def test_k_e_recomputed_from_eta_pass(self):
        assert CredibilityConfig(eta_pass=0.8).k_e == pytest.approx(0.8 / 0.6, rel=1e-14)

    def test_dynamics_weighted_preset(self):
        assert CredibilityConfig.dynamics_weighted().weights == (0.3, 0.3, 0.4)

    def test_weights_renormalized_exactly(self):
        config = CredibilityConfig(alpha_p=1 / 3, alpha_t=1 / 3, alpha_f=1 / 3)
        assert config.alpha_p + config.alpha_t + config.alpha_f == 1.0

    def test_weight_sum_violation(self):
        with pytest.raises(DomainError):
            CredibilityConfig(alpha_p=0.5, alpha_t=0.5, alpha_f=0.5)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"eta_pass": 0.0},
            {"eta_pass": 1.0},
            {"k_p": 0.0},
            {"k_p": -0.1},
            {"eps_min": 0.0},
            {"eps_min": 1.5},
            {"eps_co": 0.0},
            {"eps_co": 1.0001},
            {"alpha_p": -0.1, "alpha_t": 0.6, "alpha_f": 0.5},
        ],
    )
    def test_invalid_fields(self, kwargs):
        with pytest.raises(DomainError):
            CredibilityConfig(**kwargs)


class TestConfigLoading:
    def test_all_keys(self, tmp_path):
        doc = {
            "eta_pass": 0.7,
            "k_p": 0.1,
            "weights": {"p": 0.2, "t": 0.3, "f": 0.5},
            "eps_min": 0.85,
            "eps_co": 0.55,
        }
        path = tmp_path / "config.json"
        path.write_text(json.dumps(doc))
        config = load_config(path)
        assert config.eta_pass == 0.7
        assert config.k_p == 0.1
        assert config.weights == (0.2, 0.3, 0.5)
        assert config.eps_min == 0.85
        assert config.eps_co == 0.55

    def test_all_keys_optional(self):
        assert config_from_dict({}) == DEFAULT_CONFIG

    def test_weight_preset_name(self):
        assert config_from_dict({"weights": "dynamics-weighted"}).weights == (0.3, 0.3, 0.4)

    def test_unknown_key_rejected(self):
        with pytest.raises(DomainError, match="unknown config keys"):
            config_from_dict({"eta_Pass": 0.6})

    def test_partial_weights_rejected(self):
        with pytest.raises(DomainError, match="p, t, f"):
            config_from_dict({"weights": {"p": 1.0}})

    def test_base_overrides_stack(self):
        base = config_from_dict({"eta_pass": 0.7})
        stacked = config_from_dict({"k_p": 0.2}, base)
        assert stacked.eta_pass == 0.7
        assert stacked.k_p == 0.2

    def test_missing_file(self, tmp_path):
        with pytest.raises(DomainError, match="cannot read"):
            load_config(tmp_path / "absent.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(DomainError, match="not valid JSON"):
            load_config(path)

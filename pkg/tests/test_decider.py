import pydantic
import pytest

from frechet_certify import constants as fcc
from frechet_certify.bench.oracle import naive_dp_decide
from frechet_certify.certify.checker import check_certificate
from frechet_certify.decide.decider import (
    DEFAULT_CONFIG,
    DeciderConfig,
    compute_distance,
    decide,
)
from tests.conftest import CurvePairs, make_curve


def test_identical_curves_are_close_at_zero() -> None:
    pi = make_curve((0, 0), (1, 2), (3, 1))
    result = decide(pi, pi, 0.0, want_certificate=True)
    assert result.is_close
    assert result.certificate is not None
    assert check_certificate(pi, pi, 0.0, result.certificate).accepted


def test_far_endpoints_are_decided_first() -> None:
    pi = make_curve((0, 0), (1, 0))
    sigma = make_curve((5, 0), (1, 0))
    result = decide(pi, sigma, 1.0, want_certificate=True)
    assert result.verdict == fcc.VERDICTS.far
    assert result.stats.stage == fcc.STAGES.endpoints
    assert result.certificate is not None
    assert result.certificate.points == ((1, 1),)


def test_negative_filter_stage() -> None:
    pi = make_curve((0, 0), (10, 10), (0, 0))
    sigma = make_curve((0, 0), (0, 0.1))
    result = decide(pi, sigma, 1.0)
    assert result.verdict == fcc.VERDICTS.far
    assert result.stats.stage == fcc.STAGES.negative


def test_certificate_only_on_request() -> None:
    pi = make_curve((0, 0), (1, 0))
    assert decide(pi, pi, 1.0).certificate is None


@pytest.mark.parametrize(
    ("pi_points", "sigma_points"),
    [
        (((0.0, 0.0), (1.0, 0.0)), ((0.0, 1.0), (1.0, 1.0))),
        (((0.0, 0.0), (2.0, 0.0)), ((0.0, 0.0), (1.0, 1.0), (2.0, 0.0))),
    ],
)
def test_compute_distance_known_values(
    pi_points: tuple[tuple[float, float], ...],
    sigma_points: tuple[tuple[float, float], ...],
) -> None:
    distance = compute_distance(make_curve(*pi_points), make_curve(*sigma_points))
    assert distance == pytest.approx(1.0, abs=1e-9)


def test_compute_distance_brackets_the_decider(random_instances: CurvePairs) -> None:
    for pi, sigma, _ in random_instances(40):
        distance = compute_distance(pi, sigma)
        assert decide(pi, sigma, distance).is_close
        if distance > 0:
            below = distance * (1 - 1e-6)
            assert not decide(pi, sigma, below).is_close


def test_decide_matches_oracle_with_and_without_certificates(
    random_instances: CurvePairs,
) -> None:
    for pi, sigma, delta in random_instances(300):
        truth = naive_dp_decide(pi, sigma, delta)
        plain = decide(pi, sigma, delta)
        certified = decide(pi, sigma, delta, want_certificate=True)
        assert plain.verdict == truth
        assert certified.verdict == truth
        assert certified.certificate is not None
        result = check_certificate(pi, sigma, delta, certified.certificate)
        assert result.accepted, result.describe()


def test_filters_only_never_contradicts_the_oracle(
    random_instances: CurvePairs,
) -> None:
    config = DeciderConfig(use_complete=False)
    for pi, sigma, delta in random_instances(200):
        result = decide(pi, sigma, delta, config=config)
        if result.verdict == fcc.VERDICTS.unknown:
            assert result.stats.stage == fcc.NO_STAGE
        else:
            assert result.verdict == naive_dp_decide(pi, sigma, delta)


def test_no_filters_runs_the_complete_decider() -> None:
    pi = make_curve((0, 0), (1, 0), (2, 0))
    config = DeciderConfig(use_filters=False)
    result = decide(pi, pi, 0.5, config=config)
    assert result.is_close
    assert result.stats.stage == fcc.STAGES.complete
    assert result.stats.boxes >= 1


@pytest.mark.parametrize(
    ("label", "config"),
    [
        ("all", DEFAULT_CONFIG),
        ("no-filters", DeciderConfig(use_filters=False)),
        ("filters-only", DeciderConfig(use_complete=False)),
        ("no-3b", DeciderConfig(disabled_rules=frozenset({"3b"}))),
        (
            "no-filters+no-2+no-4",
            DeciderConfig(use_filters=False, disabled_rules=frozenset({"4", "2"})),
        ),
    ],
)
def test_config_labels(label: str, config: DeciderConfig) -> None:
    assert config.label == label
    assert DeciderConfig.from_ablation(label) == config


def test_config_validation() -> None:
    with pytest.raises(pydantic.ValidationError):
        DeciderConfig(disabled_rules=frozenset({"5"}))
    with pytest.raises(ValueError, match="Unknown ablation"):
        DeciderConfig.from_ablation("no-everything")
    assert not DeciderConfig(disabled_rules=frozenset({"2"})).rule_enabled("2")

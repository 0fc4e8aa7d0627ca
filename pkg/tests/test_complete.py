import math

import pytest

from frechet_certify import constants as fcc
from frechet_certify.bench.oracle import naive_dp_decide
from frechet_certify.bench.synthetic import generate_clustered_dataset
from frechet_certify.decide.complete import complete_decide
from tests.conftest import CurvePairs, make_curve


def test_complete_decider_matches_oracle(random_instances: CurvePairs) -> None:
    for pi, sigma, delta in random_instances(300):
        verdict, _ = complete_decide(pi, sigma, delta)
        assert verdict == naive_dp_decide(pi, sigma, delta), (pi, sigma, delta)


@pytest.mark.parametrize("rule", fcc.RULES.names())
def test_disabling_a_rule_keeps_the_verdict(
    random_instances: CurvePairs, rule: str
) -> None:
    for pi, sigma, delta in random_instances(60):
        verdict, _ = complete_decide(pi, sigma, delta, disabled_rules={rule})
        assert verdict == naive_dp_decide(pi, sigma, delta)


def test_all_rules_disabled_matches_oracle(random_instances: CurvePairs) -> None:
    for pi, sigma, delta in random_instances(60):
        verdict, _ = complete_decide(pi, sigma, delta, disabled_rules=fcc.RULES)
        assert verdict == naive_dp_decide(pi, sigma, delta)


def test_box_tree_dump() -> None:
    pi = make_curve(*((float(x), 0.0) for x in range(9)))
    sigma = make_curve(*((float(x), 0.3) for x in range(0, 9, 2)))
    verdict, log = complete_decide(pi, sigma, 0.5, dump_boxes=True)
    assert verdict == fcc.VERDICTS.close
    assert log.boxes
    assert log.boxes_visited >= 1
    assert {box.rule for box in log.boxes} <= set(fcc.BOX_OUTCOMES)
    first = log.boxes[0]
    assert (first.i, first.i2, first.j, first.j2) == (1, 9, 1, 5)


def test_no_box_tree_unless_requested() -> None:
    pi = make_curve((0, 0), (1, 0), (2, 0))
    _, log = complete_decide(pi, pi, 0.0)
    assert log.boxes is None


@pytest.mark.parametrize(
    ("sigma_points", "expected"),
    [
        (((0.0, 0.5), (1.0, 0.5), (2.0, 0.5)), fcc.VERDICTS.close),
        (((0.0, 0.5), (1.0, 3.0), (2.0, 0.5)), fcc.VERDICTS.far),
    ],
)
def test_degenerate_single_vertex_curve(
    sigma_points: tuple[tuple[float, float], ...], expected: str
) -> None:
    pi = make_curve((1.0, 0.5))
    sigma = make_curve(*sigma_points)
    verdict, _ = complete_decide(pi, sigma, 1.0)
    assert verdict == expected
    assert complete_decide(sigma, pi, 1.0)[0] == expected


def test_far_endpoints() -> None:
    pi = make_curve((0, 0), (1, 0))
    sigma = make_curve((0, 0), (5, 0))
    verdict, log = complete_decide(pi, sigma, 1.0)
    assert verdict == fcc.VERDICTS.far
    assert log.boxes_visited == 1


def test_recorded_segments_for_far_instances() -> None:
    pi = make_curve((0, 0), (1, 0), (2, 0), (3, 0))
    sigma = make_curve((0, 0), (1.5, 4), (3, 0))
    verdict, log = complete_decide(pi, sigma, 1.0, record=True)
    assert verdict == fcc.VERDICTS.far
    assert log.final_interval is None
    assert log.non_free_segments


def _depth_bound(n: int, m: int) -> int:
    splits = (math.ceil(math.log2(k - 1)) for k in (n, m) if k > 2)  # noqa: PLR2004
    return 1 + sum(splits)


def test_boxes_and_depth_across_rule_ablations(random_instances: CurvePairs) -> None:
    dominated = dict.fromkeys(fcc.RULES, 0)
    count = 1000
    for pi, sigma, delta in random_instances(count):
        verdict, log = complete_decide(pi, sigma, delta)
        assert 1 <= log.max_depth <= _depth_bound(pi.n, sigma.n)
        for rule in fcc.RULES:
            ablated, ablated_log = complete_decide(
                pi, sigma, delta, disabled_rules={rule}
            )
            assert ablated == verdict
            assert ablated_log.max_depth <= _depth_bound(pi.n, sigma.n)
            dominated[rule] += log.boxes_visited <= ablated_log.boxes_visited
    for rule, hits in dominated.items():
        assert hits >= 0.95 * count, rule


def test_corner_rule_prunes_densely_sampled_close_pairs() -> None:
    curves = generate_clustered_dataset(
        12,
        seed=3,
        cluster_size=4,
        min_vertices=100,
        max_vertices=140,
        base_vertices=10,
    )
    delta = 1.0
    with_rule = without_rule = pairs = 0
    for first in range(0, len(curves), 4):
        for second in range(first + 1, first + 4):
            pi, sigma = curves[first], curves[second]
            verdict, log = complete_decide(pi, sigma, delta)
            if verdict != fcc.VERDICTS.close:
                continue
            ablated, ablated_log = complete_decide(
                pi, sigma, delta, disabled_rules={fcc.RULES.simple_corner}
            )
            assert ablated == verdict
            pairs += 1
            with_rule += log.boxes_visited
            without_rule += ablated_log.boxes_visited
    assert pairs >= 3  # noqa: PLR2004
    assert without_rule >= 5 * with_rule

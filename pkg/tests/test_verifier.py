import numpy as np
import pytest

from tclab.geometry import ConfigCylinder, SphereSpace, WedgeSpace
from tclab.paths import Line
from tclab.planner import Planner, circle_planner, config_cylinder_planner, planner_by_name, sphere_planner
from tclab.verifier import (
    VerificationConfig,
    _max_row_gap_loop,
    _max_row_gap_np,
    _path_metrics_loop,
    _path_metrics_np,
    adversarial_pairs,
    max_deviation,
    sample_pair,
    step_profile,
    verify,
)

SMALL = VerificationConfig(samples=300, seed=11, diagonal_samples=20, continuity_samples=8, perturbation_samples=20)


def test_samples_are_valid_and_reproducible():
    S = SphereSpace(4)
    a, b = sample_pair(S, np.random.default_rng(3))
    assert abs(np.linalg.norm(a) - 1) < 1e-12 and abs(np.linalg.norm(b) - 1) < 1e-12
    a2, b2 = sample_pair(S, np.random.default_rng(3))
    assert np.array_equal(a, a2) and np.array_equal(b, b2)
    C = ConfigCylinder(1)
    rng = np.random.default_rng(4)
    for _ in range(200):
        x, y = sample_pair(C, rng)
        assert C.collision_margin(x)[0] > 0 and C.collision_margin(y)[0] > 0


def test_wedge_samples_sit_on_a_lobe():
    W = WedgeSpace(2)
    rng = np.random.default_rng(0)
    lobes = [W.lobes(W.sample(rng)) for _ in range(2000)]
    assert all(c or s for c, s in lobes)
    # the circle has length 2 pi, the 2-sphere area 4 pi
    share = np.mean([c for c, _ in lobes])
    assert abs(share - 1 / 3) < 0.04


def test_report_is_deterministic():
    P = planner_by_name("wedge:1")
    a, b = verify(P, SMALL).to_json(), verify(P, SMALL).to_json()
    assert a == b
    c = verify(P, VerificationConfig(**{**SMALL.__dict__, "workers": 3})).to_json()
    assert a == c


def test_seed_changes_the_samples():
    P = circle_planner()
    a = verify(P, SMALL).rule_usage
    b = verify(P, VerificationConfig(**{**SMALL.__dict__, "seed": 12})).rule_usage
    assert a != b


def test_passing_reports():
    for name in ["circle", "sphere:2", "cylinder-config:1"]:
        r = verify(planner_by_name(name), SMALL)
        assert r.passed, r.summary()
        assert r.coverage_fraction == 1.0 and not r.failures
        j = r.to_json()
        assert j["schema_version"] == 1 and j["passed"]
    r = verify(config_cylinder_planner(1), SMALL)
    assert r.min_collision_margin > 0
    assert verify(sphere_planner(2), SMALL).min_collision_margin is None


def test_continuity_table_halves():
    r = verify(sphere_planner(2), SMALL)
    steps = [row["max_step"] for row in r.continuity]
    assert r.continuity_monotone
    ratios = np.array(steps[1:]) / np.array(steps[:-1])
    assert np.all(np.abs(ratios - 0.5) < 0.05)


def test_coverage_failure_reports_a_witness():
    P = circle_planner()
    half = Planner("half", P.space, P.descriptions[:1], lambda A, B: P.margins(A, B)[:1], P.section, True)
    r = verify(half, SMALL)
    assert not r.passed
    # random pairs are never exactly antipodal; the boundary cases are
    f = next(f for f in r.failures if f.reason == "not covered")
    assert f.source == "adversarial"
    assert np.allclose(np.array(f.A), -np.array(f.B))
    assert half.margins(np.array(f.A), np.array(f.B))[0] <= 0


def test_bad_endpoints_and_diagonals_are_caught():
    S = SphereSpace(2)
    shift = np.array([0.0, 0.0, 1e-6])

    def section(k, A, B):
        return Line(A, B + shift)

    liar = Planner("liar", S, ["everything"], lambda A, B: np.array([1.0]), section, True)
    r = verify(liar, SMALL)
    assert not r.passed
    assert r.worst_endpoint_error > 1e-7
    assert r.reserved_ok == [False]
    assert {f.source for f in r.failures} >= {"random", "diagonal"}


def test_adversarial_pairs():
    pairs = adversarial_pairs(SphereSpace(2))
    for i in range(3):
        p = np.eye(3)[i]
        assert any(np.array_equal(a, p) and np.array_equal(b, -p) for a, b in pairs)
    W = WedgeSpace(1)
    assert any(np.array_equal(a, W.basepoint) and np.array_equal(b, W.basepoint) for a, b in adversarial_pairs(W))


def test_nearly_colliding_bodies_are_still_planned():
    P = config_cylinder_planner(1)
    eps = 1e-6
    close = [(A, B) for A, B in adversarial_pairs(P.space) if P.space.collision_margin(A)[0] < 1e-5]
    assert close
    for A, B in close:
        X = P.plan(A, B)[1](np.linspace(0, 1, 1001))
        margin = P.space.collision_margin(X)
        assert margin[0] >= eps / 2
        assert margin.min() > 0


def test_kernels_agree_with_numpy():
    rng = np.random.default_rng(0)
    for _ in range(20):
        X = rng.standard_normal((33, 4))
        Y = rng.standard_normal((33, 4))
        A, B = rng.standard_normal(4), rng.standard_normal(4)
        np.testing.assert_allclose(_path_metrics_loop(X, A, B), _path_metrics_np(X, A, B), rtol=1e-12)
        assert _max_row_gap_loop(X, Y) == pytest.approx(_max_row_gap_np(X, Y), rel=1e-12)
    X = np.ones((5, 3))
    assert max_deviation(X, np.ones(3)) == 0.0


def test_step_profile_of_a_line():
    prof = step_profile(Line(np.zeros(2), np.array([3.0, 4.0])), (10, 20))
    assert prof == pytest.approx([0.5, 0.25])

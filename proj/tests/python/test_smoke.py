import math

import numpy as np
import pytest

import simplexstab as ss


def test_simplex_volume_closed_form():
    assert abs(ss.simplex_volume(2) - 3 * math.sqrt(3) / 4) < 1e-12
    assert abs(ss.regular_simplex(3).volume() - ss.simplex_volume(3)) < 1e-10


def test_polytope_round_trip():
    s = ss.regular_simplex(2)
    assert s.vertices.shape == (2, 3)
    p = s.polar()
    assert abs(p.volume() - 4 * s.volume()) < 1e-10
    assert s.contains_point(np.zeros(2))


def test_measures():
    mu = ss.simplex_measure(3)
    r = ss.validate(mu)
    assert max(r.values()) < 1e-12
    rnd = ss.random_isotropic_measure(3, 8, seed=4)
    assert max(ss.validate(rnd).values()) < 1e-6
    bb = ss.ball_barthe_check(rnd, np.linspace(0.5, 2.0, rnd.size))
    assert bb["lhs"] >= bb["theta_star"] * bb["rhs"] * (1 - 1e-9)


def test_bad_measure_raises():
    with pytest.raises(ss.SimplexstabError):
        ss.DiscreteMeasure(np.array([[2.0, 0.0], [0.0, 1.0]]), np.array([1.0, 1.0]))


def test_john_weights_on_simplex():
    d = ss.john_contact_measure(ss.regular_simplex(2))
    assert np.allclose(d["measure"].weights, 2 / 3, atol=1e-6)


def test_ell_norm_matches_oracle():
    e = ss.ell_norm(ss.regular_simplex(2).polar(), samples=100000, seed=3)
    assert abs(e["value"] - ss.simplex_ell_oracle(2)) < 4 * e["stderr"]
    b = ss.ell_norm(ss.Ball(3), samples=100000, seed=3)
    assert abs(b["value"] - ss.ell_ball(3)) < 4 * b["stderr"]


def test_transport_grid():
    rows = ss.verify_lemma61(50)
    assert rows and all(r["violations"] == 0 for r in rows)
    t = ss.tail_constants()
    assert 0.77 < t["delta"] < 0.78


def test_stability_run_is_deterministic():
    eps = [10 ** (-4 + 0.4 * i) for i in range(6)]
    a = ss.stability_run("vertex-added", 2, eps, samples=100000, seed=5)
    b = ss.stability_run("vertex-added", 2, eps, samples=100000, seed=5)
    assert a == b
    assert a["bounds_hold"]
    assert 0.8 <= a["slope_vol"] <= 1.2

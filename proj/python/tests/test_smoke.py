import math

import numpy as np
import pytest

import ponomarev as pm


def test_reciprocal_pack():
    pack = pm.SequencePack.reciprocal(2, 20)
    assert pack.depth == 20 and pack.dimension == 2
    assert pack.alpha(5) == 0.5
    assert pack.beta(5) == 2.0**-6
    assert pm.lebesgue_level(pack, 1) == 1.0


def test_map_round_trip_and_boundary():
    f = pm.PonomarevMap.build(pm.SequencePack.reciprocal(2, 20))
    rng = np.random.default_rng(0)
    x = rng.uniform(-1, 1, size=(500, 2))
    back = f.eval_inverse(f.eval(x))
    assert np.max(np.abs(back - x)) <= 2 * f.truncation_error
    edge = np.array([[1.0, 0.3], [-0.2, -1.0]])
    np.testing.assert_array_equal(f.eval(edge), edge)
    assert f.eval(np.zeros(2)).tolist() == [0.0, 0.0]


def test_derivative_and_jacobian():
    f = pm.PonomarevMap.build(pm.SequencePack.reciprocal(2, 20))
    d = f.derivative(np.array([1.0, 0.625]))
    np.testing.assert_allclose(d, [[0.5, 0.0], [-0.125, 1.0]], rtol=0, atol=1e-15)
    assert f.jacobian_det(np.array([1.0, 0.625])) == pytest.approx(0.5)
    with pytest.raises(pm.RidgeSetError):
        f.jacobian_det(np.array([0.75, 0.75]))


def test_gauges_and_sequences():
    log = {"family": "log"}
    assert pm.eval_h({"n": 2, "tau": log}, 0.0) == 0.0
    a = pm.thm1_sequence(log, 2, 10)
    assert a[0] == 1.0
    for k in range(1, 11):
        assert abs(a[k] ** 2 * pm.eval_tau(log, 2.0**-k * a[k]) - 1) <= 1e-10
    h = {"n": 2, "raw": {"family": "power", "alpha": 1.0}}
    pack = pm.SequencePack.standard(2, pm.thm2_sequence(h, 20))
    for k in range(1, 21):
        assert pm.hausdorff_upper_sum(h, pack, k)["total"] <= 2.0 ** (-2 * k - 1)


def test_coding_round_trip():
    level, corner = pm.code_z("+-|--")
    assert level == 2 and corner == [2, 0]
    assert pm.dyadic_preimage([c / 4 for c in corner], 2) == "+-|--"


def test_norms():
    f = pm.PonomarevMap.build(pm.SequencePack.reciprocal(2, 20))
    rep = pm.grand_norm_report(f, [0.1, 0.5, 1.0])
    assert all(v <= b for v, b in zip(rep["values"], rep["bounds"]))
    assert rep["convention"] == "max_partials"
    s = pm.sobolev_norm(pm.PonomarevMap.build(pm.SequencePack.identity(2, 6)), 2.0)
    assert s["total"] == pytest.approx(4.0, rel=1e-12)
    assert pm.shell_integral(0.0, 1.0, 1.0, 0.25, 0.5, 2) == pytest.approx(2.0)


def test_errors():
    with pytest.raises(pm.ConfigError):
        pm.eval_h({"n": 1}, 0.5)
    with pytest.raises(pm.DomainError):
        pm.PonomarevMap.build(pm.SequencePack.reciprocal(2, 4)).eval(np.array([2.0, 0.0]))
    assert issubclass(pm.ConfigError, ValueError)

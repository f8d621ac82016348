import numpy as np
import pytest

from qoscillator.bargmann import build_bargmann_rep
from qoscillator.cyclic import build_cyclic_rep
from qoscillator.errors import NegativePowerError
from qoscillator.fockrep import build_fock_rep
from qoscillator.qcalc import q_from_root, q_number, q_real
from qoscillator.virasoro import (
    LimitRow, build_L, build_l, check_virasoro, classical_limit_probe, default_window,
    l_from_L, limit_verdict, measured_scalar, scale_tail,
)


def test_l_minus_one_is_annihilator():
    rep = build_fock_rep(2, 4)
    for i in (1, 2):
        assert np.array_equal(build_l(rep, i, -1).matrix, rep[f"a{i}"].matrix)


def test_fock_generators_vanish_past_nilpotency():
    rep = build_fock_rep(1, 4)
    assert np.max(np.abs(build_l(rep, 1, 3).matrix)) <= 1e-12
    assert np.max(np.abs(build_l(rep, 1, 2).matrix)) > 0.1


def test_grid_generators_periodic():
    rep = build_cyclic_rep(q_from_root(3), 1).rep
    assert np.allclose(build_l(rep, 1, 3).matrix, build_l(rep, 1, 0).matrix, atol=1e-12)
    assert np.allclose(build_l(rep, 1, -4).matrix, build_l(rep, 1, -1).matrix, atol=1e-12)


def test_negative_power_rejected():
    with pytest.raises(NegativePowerError):
        build_l(build_fock_rep(1, 3), 1, -2)
    with pytest.raises(NegativePowerError):
        build_l(build_bargmann_rep(q_real(0.5), 1, 5), 1, -3)


def test_rescaled_lowest_generator():
    rep = build_fock_rep(2, 3)
    L = build_L(rep, 2, -1).matrix
    assert np.allclose(L, np.linalg.inv(rep["Q2"].matrix) @ rep["a2"].matrix, atol=1e-14)
    L1 = build_L(rep, 1, -1).matrix
    assert np.allclose(rep["Q1"].matrix @ rep["Q2"].matrix @ L1, rep["a1"].matrix, atol=1e-14)


def test_ground_vector_annihilated():
    rep = build_fock_rep(1, 5)
    vac = np.eye(5)[0]
    for m in range(-1, 4):
        assert not (build_l(rep, 1, m).matrix @ vac).any()


def test_single_commutator_example():
    # q^(m-r) L_r L_m - L_m L_r = [m-r] L_{r+m}, r=0, m=1, single mode, N=5
    rep = build_fock_rep(1, 5)
    p = rep.params
    L0, L1 = build_L(rep, 1, 0).matrix, build_L(rep, 1, 1).matrix
    lhs = p.q * L0 @ L1 - L1 @ L0
    assert np.max(np.abs(lhs - q_number(p, 1) * L1)) <= 1e-12
    l0, l1 = build_l(rep, 1, 0).matrix, build_l(rep, 1, 1).matrix
    rhs = p.power(-1) * q_number(p, 1) * rep["Q1"].matrix @ l1
    assert np.max(np.abs(l0 @ l1 - l1 @ l0 - rhs)) <= 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_fock_virasoro(n):
    chk = check_virasoro(build_fock_rep(n, 5), range(-1, 4))
    assert chk.records
    assert all(r.passed for r in chk.records)
    if n == 2:
        assert chk.findings and all(f["agrees"] in (True, None) for f in chk.findings)


@pytest.mark.parametrize("n,N", [(1, 3), (2, 3), (2, 5)])
def test_cyclic_virasoro(n, N):
    chk = check_virasoro(build_cyclic_rep(q_from_root(N), n).rep, range(-2, 4))
    assert all(r.passed for r in chk.records)


def test_equal_modes_commute():
    chk = check_virasoro(build_fock_rep(1, 4), [1])
    assert {r.relation_id for r in chk.records} == {"eq22.diag.i1.r1.m1", "eq24.diag.i1.r1.m1"}
    assert all(r.residual <= 1e-14 for r in chk.records)


def test_braid_scalar_reporting():
    chk = check_virasoro(build_fock_rep(2, 3), [-1, 0, 1])
    f = {x["relation_id"]: x for x in chk.findings}["eq22.braid.i1.j2.r0.m1"]
    assert f["kind"] == "braiding_scalar"
    assert f["agrees"] is True
    assert abs(complex(*f["measured_scalar"]) - complex(*f["stated_scalar"])) <= 1e-10


def test_measured_scalar():
    x = np.arange(4.0).reshape(2, 2)
    assert abs(measured_scalar(2j * x, x) - 2j) < 1e-14
    assert measured_scalar(x, np.zeros((2, 2))) is None


@pytest.mark.parametrize("rep", [build_fock_rep(2, 5), build_cyclic_rep(q_from_root(5), 2).rep], ids=["fock", "cyclic"])
def test_rescaling_roundtrip(rep):
    for i in (1, 2):
        for m in (-1, 0, 2):
            back = l_from_L(rep, i, build_L(rep, i, m)).matrix
            assert np.max(np.abs(back - build_l(rep, i, m).matrix)) <= 1e-12


def test_scale_tail_is_product():
    rep = build_fock_rep(3, 2)
    assert np.allclose(scale_tail(rep, 2), rep["Q2"].matrix @ rep["Q3"].matrix)
    assert np.allclose(scale_tail(rep, 4), np.eye(rep.dim))


@pytest.mark.parametrize("k", [-3, -1, 1, 2, 4])
def test_q_number_first_order(k):
    # [k] = k + k(k-1)/2 (q-1) + O((q-1)^2)
    for eps in (1e-3, 1e-4):
        p = q_real(1 - eps)
        approx = k - k * (k - 1) / 2 * eps
        assert abs(q_number(p, k).real - approx) <= 2 * abs(k) ** 3 * eps**2


def test_default_window():
    assert list(default_window(build_fock_rep(1, 5))) == [-1, 0, 1, 2, 3]
    assert list(default_window(build_fock_rep(1, 3))) == [-1, 0, 1]
    assert list(default_window(build_bargmann_rep(q_real(0.5), 1, 5))) == [-1, 0, 1, 2, 3]


def test_classical_limit_trend():
    rows = classical_limit_probe()
    assert [r.q for r in rows] == [0.9, 0.99, 0.999]
    for r in rows:
        assert r.residual <= 10 * (1 - r.q)
    v = limit_verdict(rows)
    assert v["monotone"] and v["passed"] and 5 <= v["last_ratio"] <= 20


def test_limit_verdict():
    assert not limit_verdict([LimitRow(0.9, 1.0), LimitRow(0.99, 2.0)])["passed"]
    assert not limit_verdict([LimitRow(0.9, 1.0), LimitRow(0.99, 0.5)])["passed"]
    assert limit_verdict([LimitRow(0.9, 1.0), LimitRow(0.99, 0.1)])["passed"]
    with pytest.raises(NegativePowerError):
        classical_limit_probe(window=range(-2, 3))


def test_classical_limit_thresholds():
    rows = {r.q: r.residual for r in classical_limit_probe((1 - 1e-3, 1 - 1e-5), D=10, window=range(-1, 3))}
    assert rows[1 - 1e-3] < 1e-2
    assert rows[1 - 1e-5] < 1e-4

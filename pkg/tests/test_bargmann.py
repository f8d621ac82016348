import itertools

import numpy as np
import pytest

from qoscillator.bargmann import (
    build_bargmann_rep, fock_agreement, inner_product, interior_indices, monomials,
    orthonormal_vector, orthonormality_table,
)
from qoscillator.errors import InvalidParameterError, ResourceError, UnsupportedModeError
from qoscillator.fockrep import FockIndex
from qoscillator.opcore import check_suite, relation_suite_oscillator
from qoscillator.qcalc import q_factorial, q_from_root, q_number, q_real


# Polynomials as {exponent tuple: coefficient}; operators follow their defining
# formulas literally (z multiplication, q-dilations, divided q-difference).

def p_mul_z(f, i):
    return {m[:i] + (m[i] + 1,) + m[i + 1:]: c for m, c in f.items()}


def p_dilate(f, i, factor_of_exponent):
    return {m: c * factor_of_exponent(m[i]) for m, c in f.items()}


def p_abar(p, f, i, n):
    g = p_mul_z(f, i)
    for k in range(i + 1, n):
        g = p_dilate(g, k, p.half)
    return g


def p_a(p, f, i, n):
    g = {m: c * (1 - p.power(m[i])) / (1 - p.q) for m, c in f.items()}
    g = {m[:i] + (m[i] - 1,) + m[i + 1:]: c for m, c in g.items() if m[i] > 0}
    for k in range(i + 1, n):
        g = p_dilate(g, k, p.half)
    return g


def to_vec(f, n, D):
    v = np.zeros((D + 1) ** n, dtype=complex)
    for m, c in f.items():
        v[FockIndex(m).rank(D + 1)] += c
    return v


@pytest.mark.parametrize("p", [q_real(0.6), q_from_root(5)], ids=["real", "root5"])
@pytest.mark.parametrize("n", [1, 2])
def test_matrices_match_polynomial_oracle(p, n):
    D = 4
    rep = build_bargmann_rep(p, n, D)
    for m in itertools.product(range(D), repeat=n):
        f = {m: 1.0}
        for i in range(n):
            assert np.allclose(rep[f"abar{i + 1}"].matrix @ to_vec(f, n, D), to_vec(p_abar(p, f, i, n), n, D), atol=1e-14)
            assert np.allclose(rep[f"a{i + 1}"].matrix @ to_vec(f, n, D), to_vec(p_a(p, f, i, n), n, D), atol=1e-14)


def test_monomial_examples():
    p = q_real(0.5)
    rep = build_bargmann_rep(p, 2, 5)
    e = lambda m: to_vec({m: 1}, 2, 5)
    assert np.allclose(rep["abar1"].matrix @ e((1, 2)), p.q * e((2, 2)))
    assert np.allclose(rep["a1"].matrix @ e((3, 1)), np.sqrt(0.5) * q_number(p, 3) * e((2, 1)))
    assert np.allclose(rep["N1"].matrix @ e((3, 1)), 3 * e((3, 1)))
    assert np.allclose(rep["Q2"].matrix @ e((3, 1)), 0.5 * e((3, 1)))


@pytest.mark.parametrize("p", [q_real(0.5), q_real(0.9), q_from_root(3), q_from_root(5)], ids=str)
@pytest.mark.parametrize("n,D", [(1, 6), (1, 8), (2, 6), (2, 8)])
def test_interior_suite(p, n, D):
    rep = build_bargmann_rep(p, n, D)
    recs = check_suite(rep, relation_suite_oscillator(p, n), 1e-10)
    bad = [r for r in recs if r.relation_id.startswith("eq1.") and not r.passed]
    assert not bad


def test_truncation_artifact_outside_interior():
    p = q_real(0.5)
    rep = build_bargmann_rep(p, 1, 6)
    full = rep.extended({})
    object.__setattr__(full, "subspace", None)
    recs = {r.relation_id: r for r in check_suite(full, relation_suite_oscillator(p, 1))}
    assert recs["eq1.diag.1"].residual > 1e-3


def test_interior_indices():
    assert list(interior_indices(1, 5)) == [0, 1, 2, 3]
    assert len(interior_indices(2, 4)) == 9
    assert len(monomials(2, 4)) == 25


@pytest.mark.parametrize("N", [3, 5])
@pytest.mark.parametrize("n", [1, 2])
def test_fock_agreement(N, n):
    dev = fock_agreement(q_from_root(N), n, 8)
    assert set(dev) >= {"a1", "abar1", "N1", "Q1"}
    assert max(dev.values()) <= 1e-10


def test_inner_product_examples():
    p = q_real(0.5)
    z = lambda m, D=3: to_vec({m: 1}, 1, D)
    assert abs(inner_product(p, z((0,)), z((0,)), 1, 3) - 1) < 1e-10
    assert abs(inner_product(p, z((2,)), z((2,)), 1, 3) - q_factorial(p, 2)) < 1e-10
    assert inner_product(p, z((1,)), z((2,)), 1, 3) == 0
    f = z((1,)) * (2 + 1j)
    assert abs(inner_product(p, f, f, 1, 3) - 5) < 1e-9


# the Jackson tail decays like q**K, so q close to 1 needs a longer sum
@pytest.mark.parametrize("q,K", [(0.3, 200), (0.5, 200), (0.9, 300)])
@pytest.mark.parametrize("n", [1, 2])
def test_orthonormality(q, K, n):
    p = q_real(q)
    for a, b, val in orthonormality_table(p, n, 5, K=K):
        assert abs(val - (1.0 if a == b else 0.0)) <= 1e-8


def test_errors():
    with pytest.raises(UnsupportedModeError):
        inner_product(q_from_root(3), orthonormal_vector(q_from_root(3), (0,), 2), orthonormal_vector(q_from_root(3), (0,), 2), 1, 2)
    with pytest.raises(ResourceError):
        build_bargmann_rep(q_real(0.5), 3, 20)
    with pytest.raises(InvalidParameterError):
        build_bargmann_rep(q_real(0.5), 1, 2)
    with pytest.raises(InvalidParameterError):
        fock_agreement(q_real(0.5), 1, 8)
    with pytest.raises(InvalidParameterError):
        orthonormal_vector(q_real(0.5), (4,), 3)

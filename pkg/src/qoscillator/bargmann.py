"""Bargmann-Fock realization on polynomials in n variables, truncated at
exponent D per variable, with the q-deformed measure inner product.

Basis vectors are the monomials z^m, m = (m_1, ..., m_n), enumerated like
Fock states (m_1 slowest). Relations are only compared on the interior
m_i <= D - 2 where truncation cannot leak in.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError
from .fockrep import DEFAULT_CAP, FockIndex, build_fock_rep, check_cap, enumerate_states
from .opcore import Basis, BasisTag, Operator, RepAssignment, sym
from .qcalc import DEFAULT_TRUNCATION, QParameter, q_factorial, q_number, radial_moment

INTERIOR_MARGIN = 2


def monomials(n: int, D: int) -> list[tuple[int, ...]]:
    return enumerate_states(n, D + 1)


def interior_indices(n: int, D: int, margin: int = INTERIOR_MARGIN) -> np.ndarray:
    return np.array([r for r, m in enumerate(monomials(n, D)) if max(m) <= D - margin], dtype=int)


def build_bargmann_rep(
    p: QParameter, n: int, D: int, cap: int = DEFAULT_CAP, margin: int = INTERIOR_MARGIN
) -> RepAssignment:
    """Multiplication/q-difference operators on the monomial basis.

    abar_i = T_{i+1}^{1/2}..T_n^{1/2} z_i and
    a_i = z_i^{-1} T_{i+1}^{1/2}..T_n^{1/2} (1 - T_i)/(1 - q), where
    T_i^{1/2} multiplies z^m by omega**m_i. N_i is the Euler operator
    z_i d/dz_i and Q_i = T_i.
    """
    if n < 1 or D < 1:
        raise InvalidParameterError(f"need n >= 1 and D >= 1, got n={n}, D={D}")
    if D <= margin:
        raise InvalidParameterError(f"cutoff D={D} leaves no interior with margin {margin}")
    dim = (D + 1) ** n
    check_cap(dim, cap)
    mons = monomials(n, D)
    tag = BasisTag(Basis.POLYNOMIAL, n, D)
    rank = lambda m: FockIndex(m).rank(D + 1)
    gens: dict[str, Operator] = {}
    for i in range(n):
        a = np.zeros((dim, dim), dtype=complex)
        b = np.zeros((dim, dim), dtype=complex)
        for col, m in enumerate(mons):
            shift = p.half(sum(m[i + 1:]))
            if m[i] < D:
                b[rank(m[:i] + (m[i] + 1,) + m[i + 1:]), col] = shift
            if m[i] > 0:
                # (1 - T_i)/(1 - q) z^m = [m_i] z^m, then divide by z_i
                a[rank(m[:i] + (m[i] - 1,) + m[i + 1:]), col] = shift * q_number(p, m[i])
        T = np.diag([p.power(m[i]) for m in mons])
        gens[sym("a", i + 1)] = Operator(a, tag)
        gens[sym("abar", i + 1)] = Operator(b, tag)
        gens[sym("N", i + 1)] = Operator(np.diag([float(m[i]) for m in mons]), tag)
        gens[sym("Q", i + 1)] = Operator(T, tag)
        gens[sym("T", i + 1)] = Operator(T, tag)
        gens[sym("Thalf", i + 1)] = Operator(np.diag([p.half(m[i]) for m in mons]), tag)
    return RepAssignment(
        p, n, gens, tag, subspace=interior_indices(n, D, margin), label=f"bargmann(n={n}, D={D})"
    )


@lru_cache(maxsize=None)
def _radial(p: QParameter, m: int, K: int) -> complex:
    return radial_moment(p, m, K)


def inner_product(
    p: QParameter, f: np.ndarray, g: np.ndarray, n: int, D: int, K: int = DEFAULT_TRUNCATION
) -> complex:
    """(f, g) for coefficient vectors over the monomial basis.

    Angular integration kills every pair of distinct monomials; an equal pair
    z^m contributes prod_i R(m_i), with R the radial Jackson integral of
    x**m/exp_q(q x) over [0, 1/(1-q)], evaluated numerically.
    """
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    total = 0j
    for r, m in enumerate(monomials(n, D)):
        c = np.conj(f[r]) * g[r]
        if c == 0:
            continue
        weight = 1 + 0j
        for mi in m:
            weight *= _radial(p, mi, K)
        total += c * weight
    return total


def orthonormal_vector(p: QParameter, exponents: tuple[int, ...], D: int) -> np.ndarray:
    """Coefficient vector of z^m / sqrt(prod_i [m_i]!)."""
    n = len(exponents)
    if max(exponents) > D:
        raise InvalidParameterError(f"exponents {exponents} exceed cutoff {D}")
    vec = np.zeros((D + 1) ** n, dtype=complex)
    norm = np.sqrt(complex(np.prod([q_factorial(p, e) for e in exponents])))
    vec[FockIndex(tuple(exponents)).rank(D + 1)] = 1 / norm
    return vec


def orthonormality_table(
    p: QParameter, n: int, max_exponent: int, D: int | None = None, K: int = DEFAULT_TRUNCATION
) -> list[tuple[tuple[int, ...], tuple[int, ...], complex]]:
    """(u_a, u_b) for every pair of multi-indices a <= b (rank order) with
    entries up to ``max_exponent``."""
    D = max_exponent if D is None else D
    idx = list(itertools.product(range(max_exponent + 1), repeat=n))
    vecs = {e: orthonormal_vector(p, e, D) for e in idx}
    out = []
    for x, ea in enumerate(idx):
        for eb in idx[x:]:
            out.append((ea, eb, inner_product(p, vecs[ea], vecs[eb], n, D, K)))
    return out


def fock_agreement(p: QParameter, n: int, D: int) -> dict[str, float]:
    """Entrywise distance between Bargmann and Fock matrices on their common
    block (exponents <= N-1), after rescaling z^m to the normalized basis.

    Normalization uses the same per-factor principal square roots as the
    Fock coefficients.
    """
    if not p.is_root_of_unity or p.k != 1:
        raise InvalidParameterError("Fock comparison needs q = exp(2 pi i/N)")
    N = p.N
    if D < N:
        raise InvalidParameterError(f"cutoff D={D} must be at least N={N}")
    bar = build_bargmann_rep(p, n, D, cap=max(DEFAULT_CAP, (D + 1) ** n))
    fock = build_fock_rep(n, N, cap=max(DEFAULT_CAP, N**n))
    block = enumerate_states(n, N)
    rows = np.array([FockIndex(m).rank(D + 1) for m in block])
    sqrt_fact = lambda e: np.prod([np.sqrt(complex(q_number(p, j))) for j in range(1, e + 1)])
    s = np.array([np.prod([sqrt_fact(e) for e in m]) for m in block])
    out = {}
    for name, op in fock.generators.items():
        B = bar[name].matrix[np.ix_(rows, rows)] * s[:, None] / s[None, :]
        out[name] = float(np.max(np.abs(B - op.matrix)))
    return out

"""Shift/clock realization on functions over S_N x ... x S_N, S_N the N-th
roots of unity.

Basis vectors are delta functions at grid points (n_1, ..., n_n), enumerated
like Fock states. Matrices are the action on those delta functions (points
move forward), i.e. the transpose of the pullback on function values.
Composing pullbacks reverses operator order and turns every q in the
exchange relations into 1/q; the point action reproduces them as stated.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .fockrep import DEFAULT_CAP, FockIndex, check_cap, enumerate_states
from .opcore import (
    DEFAULT_TOLERANCE, Basis, BasisTag, Operator, Relation, RepAssignment, ResidualRecord,
    check_suite, max_residual, relation_suite_oscillator, sym, word,
)
from .qcalc import QParameter


class ExponentMode(str, enum.Enum):
    PAPER = "paper"                  # (1 - h_i)^2 / (1 - q), algebra at q
    SQUARED_H = "squared_h"          # (1 - h_i^2) / (1 - q), algebra at q
    SQUARED_H_Q2 = "squared_h_q2"    # (1 - h_i^2) / (1 - q^2), algebra at q^2


class Action(str, enum.Enum):
    POINT = "point"
    PULLBACK = "pullback"


def _require_root(p: QParameter):
    if not p.is_root_of_unity:
        raise InvalidParameterError("the cyclic realization needs q a root of unity")


def pullback_matrices(p: QParameter, n: int) -> tuple[list[np.ndarray], list[np.ndarray], list[np.ndarray]]:
    """(g, h, x) as maps on function values f(n_1, ..., n_n).

    (h_i f)(.., n_i, ..) = f(.., n_i - 1, ..) and
    (g_i f)(n) = q**n_i f(n_1, .., n_i, n_{i+1} - 1, .., n_n - 1), indices mod N;
    x_i multiplies by the coordinate q**n_i.
    """
    N = p.N
    pts = enumerate_states(n, N)
    dim = len(pts)
    rank = lambda s: FockIndex(tuple(s)).rank(N)
    gs, hs, xs = [], [], []
    for i in range(n):
        g = np.zeros((dim, dim), dtype=complex)
        h = np.zeros((dim, dim), dtype=complex)
        for row, pt in enumerate(pts):
            src = list(pt)
            src[i] = (src[i] - 1) % N
            h[row, rank(src)] = 1
            src = list(pt)
            for k in range(i + 1, n):
                src[k] = (src[k] - 1) % N
            g[row, rank(src)] = p.power(pt[i])
        gs.append(g)
        hs.append(h)
        xs.append(np.diag([p.power(pt[i]) for pt in pts]))
    return gs, hs, xs


def build_shift_ops(
    p: QParameter, n: int, cap: int = DEFAULT_CAP, action: Action = Action.POINT
) -> RepAssignment:
    """g_i, h_i and the coordinate clock x_i (multiplication by q**n_i)."""
    _require_root(p)
    if n < 1:
        raise InvalidParameterError(f"need at least one mode, got {n}")
    check_cap(p.N**n, cap)
    gs, hs, xs = pullback_matrices(p, n)
    if Action(action) is Action.POINT:
        gs = [g.T for g in gs]
        hs = [h.T for h in hs]
    tag = BasisTag(Basis.GRID, n, p.N)
    gens: dict[str, Operator] = {}
    for i in range(n):
        gens[sym("g", i + 1)] = Operator(gs[i], tag)
        gens[sym("h", i + 1)] = Operator(hs[i], tag)
        gens[sym("x", i + 1)] = Operator(xs[i], tag)
    return RepAssignment(p, n, gens, tag, label=f"shift(n={n}, N={p.N}, {Action(action).value})")


def relation_suite_shift(p: QParameter, n: int) -> list[Relation]:
    """Exchange and periodicity relations of g_i, h_i."""
    q, N = p.q, p.N
    g = lambda i: sym("g", i)
    h = lambda i: sym("h", i)
    rels = []
    modes = range(1, n + 1)
    for i in modes:
        rels.append(Relation(f"eq18.hg.{i}", (word(1, h(i), g(i)),), (word(q, g(i), h(i)),), "h_i g_i = q g_i h_i"))
        rels.append(Relation(f"eq18.g_power.{i}", (word(1, *[g(i)] * N),), (word(1),), "g_i^N = 1"))
        rels.append(Relation(f"eq18.h_power.{i}", (word(1, *[h(i)] * N),), (word(1),), "h_i^N = 1"))
    for i in modes:
        for j in modes:
            if i < j:
                rels.append(Relation(f"eq18.gg.{i}.{j}", (word(1, g(i), g(j)),), (word(q, g(j), g(i)),), "g_i g_j = q g_j g_i (i<j)"))
                rels.append(Relation(f"eq18.hh.{i}.{j}", (word(1, h(i), h(j)),), (word(1, h(j), h(i)),), "h_i h_j = h_j h_i"))
            if i != j:
                rels.append(Relation(f"eq18.hg_cross.{i}.{j}", (word(1, h(i), g(j)),), (word(1, g(j), h(i)),), "h_i g_j = g_j h_i (i!=j)"))
    return rels


def algebra_parameter(p: QParameter, mode: ExponentMode) -> QParameter:
    """Deformation parameter of the oscillator algebra a given mode targets."""
    return p.squared() if ExponentMode(mode) is ExponentMode.SQUARED_H_Q2 else p


def spectral_function(h: np.ndarray, p: QParameter, values) -> np.ndarray:
    """sum_k values[k] P_k with P_k the projector onto the q**k eigenspace of
    h (h**N = 1), P_k = (1/N) sum_j (q**-k h)**j."""
    N = p.N
    powers = [np.eye(h.shape[0], dtype=complex)]
    for _ in range(N - 1):
        powers.append(powers[-1] @ h)
    out = np.zeros_like(powers[0])
    for k in range(N):
        if values[k] == 0:
            continue
        proj = sum(p.power(-k * j) * powers[j] for j in range(N)) / N
        out = out + values[k] * proj
    return out


@dataclass(frozen=True)
class CyclicRealization:
    rep: RepAssignment
    mode: ExponentMode
    records: list[ResidualRecord]

    @property
    def conforms(self) -> bool:
        return all(r.passed for r in self.records if r.expected_pass and r.relation_id.startswith("eq1."))

    @property
    def max_residual(self) -> float:
        return max_residual(r for r in self.records if r.relation_id.startswith("eq1."))


def build_cyclic_rep(
    p: QParameter,
    n: int,
    exponent_mode: ExponentMode | str = ExponentMode.SQUARED_H_Q2,
    cap: int = DEFAULT_CAP,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CyclicRealization:
    """abar_i = g_i and a_i = g_i^{-1} h_{i+1}^2..h_n^2 E_i / (1 - c).

    ``paper``: E_i = (1 - h_i)^2, c = q; ``squared_h``: E_i = 1 - h_i^2, c = q;
    ``squared_h_q2``: E_i = 1 - h_i^2, c = q^2, checked against the algebra
    at q^2 (whose square root is q). N_i is the spectral number operator of
    h_i (eigenvalue q**k -> k) and Q_i = c**N_i.

    Returns the assignment together with the oscillator suite evaluated on it.
    """
    mode = ExponentMode(exponent_mode)
    _require_root(p)
    alg = algebra_parameter(p, mode)
    shift = build_shift_ops(p, n, cap)
    N = p.N
    tag = shift.basis
    eye = np.eye(shift.dim, dtype=complex)
    gens = dict(shift.generators)
    for i in range(1, n + 1):
        g = shift[sym("g", i)].matrix
        h = shift[sym("h", i)].matrix
        pre = eye
        for k in range(i + 1, n + 1):
            hk = shift[sym("h", k)].matrix
            pre = pre @ hk @ hk
        if mode is ExponentMode.PAPER:
            E = (eye - h) @ (eye - h)
        else:
            E = eye - h @ h
        # g is a unit-modulus generalized permutation, so g^{-1} = g^H
        a = g.conj().T @ pre @ E / (1 - alg.q)
        gens[sym("a", i)] = Operator(a, tag)
        gens[sym("abar", i)] = Operator(g, tag)
        gens[sym("N", i)] = Operator(spectral_function(h, p, list(range(N))), tag)
        gens[sym("Q", i)] = Operator(spectral_function(h, p, [alg.power(k) for k in range(N)]), tag)
    rep = RepAssignment(alg, n, gens, tag, label=f"cyclic(n={n}, N={N}, mode={mode.value})")
    records = check_suite(rep, relation_suite_oscillator(alg, n, N), tolerance)
    return CyclicRealization(rep, mode, records)


def mode_scan(
    n: int, N: int, tolerance: float = DEFAULT_TOLERANCE, cap: int = DEFAULT_CAP
) -> dict[str, float | None]:
    """Largest eq1-family residual per exponent mode; ``None`` where the
    mode is undefined (q**2 = 1)."""
    from .qcalc import q_from_root

    p = q_from_root(N)
    out: dict[str, float | None] = {}
    for mode in ExponentMode:
        try:
            real = build_cyclic_rep(p, n, mode, cap, tolerance)
        except InvalidParameterError:
            out[mode.value] = None
            continue
        out[mode.value] = real.max_residual
    return out


def conforming_modes(scan: dict[str, float | None], tolerance: float = DEFAULT_TOLERANCE) -> frozenset[str]:
    return frozenset(m for m, r in scan.items() if r is not None and r <= tolerance)

"""q-Virasoro generators l_m^(i) = abar_i^(m+1) a_i and their rescaled form
L_m^(i) = (Q_i..Q_n)^{-1} l_m^(i), built on any oscillator realization."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bargmann import build_bargmann_rep
from .errors import InvalidParameterError, NegativePowerError
from .opcore import (
    Basis, Operator, Relation, RepAssignment, ResidualRecord, check_relation, sym, word,
)
from .qcalc import q_number, q_real

VIRASORO_TOLERANCE = 1e-9
CLASSICAL_Q = (0.9, 0.99, 0.999)


def default_window(rep: RepAssignment) -> range:
    if rep.basis.kind is Basis.FOCK:
        return range(-1, min(4, rep.basis.size - 2) + 1)
    return range(-1, 4)


def scale_tail(rep: RepAssignment, i: int) -> np.ndarray:
    out = np.eye(rep.dim, dtype=complex)
    for k in range(i, rep.n_modes + 1):
        out = out @ rep[sym("Q", k)].matrix
    return out


def _abar_power(rep: RepAssignment, i: int, e: int) -> np.ndarray:
    b = rep[sym("abar", i)].matrix
    if e >= 0:
        return np.linalg.matrix_power(b, e)
    if rep.basis.kind is not Basis.GRID:
        raise NegativePowerError(
            f"abar_{i}^{e} requested on a {rep.basis.kind.value} realization where abar is not invertible"
        )
    return np.linalg.matrix_power(np.linalg.inv(b), -e)


def build_l(rep: RepAssignment, i: int, m: int) -> Operator:
    return Operator(_abar_power(rep, i, m + 1) @ rep[sym("a", i)].matrix, rep.basis)


def build_L(rep: RepAssignment, i: int, m: int) -> Operator:
    return Operator(np.linalg.solve(scale_tail(rep, i), build_l(rep, i, m).matrix), rep.basis)


def l_from_L(rep: RepAssignment, i: int, L: Operator) -> Operator:
    return Operator(scale_tail(rep, i) @ L.matrix, rep.basis)


def _lsym(kind: str, i: int, m: int) -> str:
    return f"{kind}{i}[{m}]"


def virasoro_relations(rep: RepAssignment, window: Sequence[int]) -> list[Relation]:
    p = rep.params
    rels = []
    modes = range(1, rep.n_modes + 1)
    for i in modes:
        S = f"S{i}"
        for r in window:
            for m in window:
                l_r, l_m = _lsym("l", i, r), _lsym("l", i, m)
                L_r, L_m = _lsym("L", i, r), _lsym("L", i, m)
                rhs22 = () if m == r else (word(p.power(-m) * q_number(p, m - r), S, _lsym("l", i, r + m)),)
                rhs24 = () if m == r else (word(q_number(p, m - r), _lsym("L", i, r + m)),)
                rels.append(Relation(
                    f"eq22.diag.i{i}.r{r}.m{m}", (word(1, l_r, l_m), word(-1, l_m, l_r)), rhs22,
                    "[l_r, l_m] = q^-m [m-r] Q_i..Q_n l_{r+m}"))
                rels.append(Relation(
                    f"eq24.diag.i{i}.r{r}.m{m}", (word(p.power(m - r), L_r, L_m), word(-1, L_m, L_r)), rhs24,
                    "q^(m-r) L_r L_m - L_m L_r = [m-r] L_{r+m}"))
        for j in modes:
            if i >= j:
                continue
            for r in window:
                for m in window:
                    rels.append(Relation(
                        f"eq22.braid.i{i}.j{j}.r{r}.m{m}",
                        (word(1, _lsym("l", i, r), _lsym("l", j, m)),),
                        (word(p.half(m * (r + 2)), _lsym("l", j, m), _lsym("l", i, r)),),
                        "l_r^(i) l_m^(j) = q^(m(r+2)/2) l_m^(j) l_r^(i) (i<j)"))
                    rels.append(Relation(
                        f"eq24.braid.i{i}.j{j}.r{r}.m{m}",
                        (word(1, _lsym("L", i, r), _lsym("L", j, m)),),
                        (word(p.half(m * r), _lsym("L", j, m), _lsym("L", i, r)),),
                        "L_r^(i) L_m^(j) = q^(mr/2) L_m^(j) L_r^(i) (i<j)"))
    return rels


def virasoro_assignment(rep: RepAssignment, window: Sequence[int], relations: Iterable[Relation]) -> RepAssignment:
    """Extend ``rep`` with every l/L generator the relations mention."""
    needed = set()
    for rel in relations:
        needed |= rel.symbols()
    extra: dict[str, Operator] = {}
    for i in range(1, rep.n_modes + 1):
        extra[f"S{i}"] = Operator(scale_tail(rep, i), rep.basis)
    for s in sorted(needed):
        if s[0] in "lL" and "[" in s:
            i = int(s[1:s.index("[")])
            m = int(s[s.index("[") + 1:-1])
            extra[s] = (build_l if s[0] == "l" else build_L)(rep, i, m)
    return rep.extended(extra)


def measured_scalar(lhs: np.ndarray, swapped: np.ndarray) -> complex | None:
    """Least-squares c with lhs ~ c * swapped; None if swapped vanishes."""
    denom = np.vdot(swapped, swapped)
    if abs(denom) < 1e-24:
        return None
    return complex(np.vdot(swapped, lhs) / denom)


@dataclass(frozen=True)
class VirasoroCheck:
    records: list[ResidualRecord]
    findings: list[dict]


def check_virasoro(
    rep: RepAssignment, window: Sequence[int] | None = None, tolerance: float = VIRASORO_TOLERANCE
) -> VirasoroCheck:
    window = list(default_window(rep) if window is None else window)
    rels = virasoro_relations(rep, window)
    ext = virasoro_assignment(rep, window, rels)
    records = [check_relation(ext, rel, tolerance) for rel in rels]
    findings = []
    for rel in rels:
        if ".braid." not in rel.id:
            continue
        lhs = ext[rel.lhs[0].symbols[0]].matrix @ ext[rel.lhs[0].symbols[1]].matrix
        swapped = ext[rel.rhs[0].symbols[0]].matrix @ ext[rel.rhs[0].symbols[1]].matrix
        if ext.subspace is not None:
            ix = np.ix_(ext.subspace, ext.subspace)
            lhs, swapped = lhs[ix], swapped[ix]
        c = measured_scalar(lhs, swapped)
        fit = None if c is None else float(np.max(np.abs(lhs - c * swapped), initial=0.0))
        stated = rel.rhs[0].coeff
        findings.append({
            "kind": "braiding_scalar",
            "relation_id": rel.id,
            "stated_scalar": [stated.real, stated.imag],
            "measured_scalar": None if c is None else [c.real, c.imag],
            "fit_residual": fit,
            "agrees": None if c is None else bool(abs(c - stated) <= 1e-8),
        })
    return VirasoroCheck(records, findings)


@dataclass(frozen=True)
class LimitRow:
    q: float
    residual: float


def classical_limit_probe(
    q_values: Sequence[float] = CLASSICAL_Q, D: int = 10, window: Sequence[int] = range(-1, 3)
) -> list[LimitRow]:
    """Residual of [L_r, L_m] - (m - r) L_{r+m} on the single-mode Bargmann
    realization, maximized over the window, for each real q."""
    if min(window) < -1:
        raise NegativePowerError("the polynomial realization only supports m >= -1")
    rows = []
    for qv in q_values:
        rep = build_bargmann_rep(q_real(qv), 1, D)
        rels = []
        for r in window:
            for m in window:
                rhs = () if m == r else (word(m - r, _lsym("L", 1, r + m)),)
                rels.append(Relation(
                    f"limit.r{r}.m{m}",
                    (word(1, _lsym("L", 1, r), _lsym("L", 1, m)), word(-1, _lsym("L", 1, m), _lsym("L", 1, r))),
                    rhs))
        ext = virasoro_assignment(rep, window, rels)
        worst = max(check_relation(ext, rel, np.inf).residual for rel in rels)
        rows.append(LimitRow(float(qv), worst))
    return rows


def limit_verdict(rows: Sequence[LimitRow], ratio_bounds: tuple[float, float] = (5.0, 20.0)) -> dict:
    """Monotone decrease along the sequence and the last-step ratio."""
    res = [r.residual for r in rows]
    monotone = all(b < a for a, b in zip(res, res[1:]))
    ratio = res[-2] / res[-1] if len(res) >= 2 and res[-1] > 0 else None
    ok = monotone and ratio is not None and ratio_bounds[0] <= ratio <= ratio_bounds[1]
    return {"monotone": monotone, "last_ratio": ratio, "ratio_bounds": list(ratio_bounds), "passed": ok}


def require_window_buildable(rep: RepAssignment, window: Sequence[int]):
    if rep.basis.kind is not Basis.GRID and min(window) < -1:
        raise NegativePowerError(
            f"window reaches m={min(window)}; abar is nilpotent on the {rep.basis.kind.value} realization"
        )
    if not window:
        raise InvalidParameterError("empty window")

"""Dense operator carriers, formal relations and residual evaluation.

A relation is two formal sums of words; a word is a coefficient and a
sequence of generator symbols multiplied left to right. Every realization
produces a :class:`RepAssignment` and every identity is checked by the same
:func:`check_relation`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatchError, UnknownSymbolError
from .qcalc import QParameter, q_number

DEFAULT_TOLERANCE = 1e-10


class Basis(str, enum.Enum):
    FOCK = "fock"
    POLYNOMIAL = "polynomial"
    GRID = "grid"


@dataclass(frozen=True)
class BasisTag:
    kind: Basis
    n_modes: int
    size: int  # N for Fock/Grid, cutoff D for Polynomial


@dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray
    basis: BasisTag

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"operator matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def _check(self, other: "Operator"):
        if other.dim != self.dim or other.basis != self.basis:
            raise DimensionMismatchError(
                f"incompatible operators: {self.basis}/{self.dim} vs {other.basis}/{other.dim}"
            )

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.matrix @ other.matrix, self.basis)

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.matrix + other.matrix, self.basis)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.matrix - other.matrix, self.basis)

    def __mul__(self, c: complex) -> "Operator":
        return Operator(c * self.matrix, self.basis)

    __rmul__ = __mul__

    def power(self, k: int) -> "Operator":
        return Operator(np.linalg.matrix_power(self.matrix, k), self.basis)


@dataclass(frozen=True)
class RepAssignment:
    """Generator symbols of one realization mapped to operators.

    ``subspace`` optionally lists the basis indices on which relations are
    compared (used to exclude cutoff artifacts of truncated realizations).
    """

    params: QParameter
    n_modes: int
    generators: Mapping[str, Operator]
    basis: BasisTag
    subspace: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        for name, op in self.generators.items():
            if op.basis != self.basis:
                raise DimensionMismatchError(f"generator {name} lives on {op.basis}, expected {self.basis}")
        dims = {op.dim for op in self.generators.values()}
        if len(dims) > 1:
            raise DimensionMismatchError(f"generators disagree on dimension: {sorted(dims)}")

    @property
    def dim(self) -> int:
        return next(iter(self.generators.values())).dim

    def __getitem__(self, symbol: str) -> Operator:
        try:
            return self.generators[symbol]
        except KeyError:
            raise UnknownSymbolError(f"symbol {symbol!r} not defined in {self.label or 'assignment'}") from None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.generators

    def identity(self) -> Operator:
        return Operator(np.eye(self.dim, dtype=complex), self.basis)

    def extended(self, extra: Mapping[str, Operator]) -> "RepAssignment":
        gens = dict(self.generators)
        gens.update(extra)
        return replace(self, generators=gens)


def sym(name: str, i: int) -> str:
    """Generator symbol for mode ``i`` (1-based), e.g. ``sym('abar', 2) == 'abar2'``."""
    return f"{name}{i}"


class Word(NamedTuple):
    coeff: complex
    symbols: tuple[str, ...]


Expr = tuple[Word, ...]


def word(coeff: complex, *symbols: str) -> Word:
    return Word(complex(coeff), tuple(symbols))


@dataclass(frozen=True)
class Relation:
    """lhs == rhs as operator identity.

    ``expected_on`` restricts the bases on which the identity is expected to
    hold; ``None`` means everywhere. Relations outside their expected bases
    are still evaluated and reported, but never count as failures.
    """

    id: str
    lhs: Expr
    rhs: Expr
    anchor: str = ""
    expected_on: frozenset[Basis] | None = None

    @property
    def family(self) -> str:
        return self.id.split(".")[0]

    def symbols(self) -> set[str]:
        return {s for w in self.lhs + self.rhs for s in w.symbols}

    def expected_for(self, kind: Basis) -> bool:
        return self.expected_on is None or kind in self.expected_on


@dataclass(frozen=True)
class ResidualRecord:
    relation_id: str
    residual: float
    norm_scale: float
    passed: bool
    tolerance: float
    expected_pass: bool = True

    def to_dict(self) -> dict:
        return {
            "relation_id": self.relation_id,
            "residual": self.residual,
            "norm_scale": self.norm_scale,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "expected_pass": self.expected_pass,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ResidualRecord":
        return cls(
            str(d["relation_id"]),
            float(d["residual"]),
            float(d["norm_scale"]),
            bool(d["passed"]),
            float(d["tolerance"]),
            bool(d.get("expected_pass", True)),
        )


def evaluate_word(assignment: RepAssignment, w: Word) -> Operator:
    if not w.symbols:
        out = assignment.identity().matrix
    else:
        out = assignment[w.symbols[0]].matrix
        for s in w.symbols[1:]:
            out = out @ assignment[s].matrix
    return Operator(w.coeff * out, assignment.basis)


def evaluate_expr(assignment: RepAssignment, expr: Iterable[Word]) -> np.ndarray:
    total = np.zeros((assignment.dim, assignment.dim), dtype=complex)
    for w in expr:
        if w.coeff == 0:
            for s in w.symbols:
                assignment[s]
            continue
        total = total + evaluate_word(assignment, w).matrix
    return total


def residual(lhs: np.ndarray, rhs: np.ndarray) -> tuple[float, float]:
    """(normalized max-abs residual, normalization scale)."""
    scale = max(1.0, float(np.max(np.abs(lhs), initial=0.0)))
    return float(np.max(np.abs(lhs - rhs), initial=0.0)) / scale, scale


def check_matrices(
    relation_id: str,
    lhs: np.ndarray,
    rhs: np.ndarray,
    tolerance: float = DEFAULT_TOLERANCE,
    expected_pass: bool = True,
    subspace: np.ndarray | None = None,
) -> ResidualRecord:
    if subspace is not None:
        ix = np.ix_(subspace, subspace)
        lhs, rhs = lhs[ix], rhs[ix]
    res, scale = residual(lhs, rhs)
    return ResidualRecord(relation_id, res, scale, res <= tolerance, float(tolerance), expected_pass)


def check_relation(
    assignment: RepAssignment, rel: Relation, tolerance: float = DEFAULT_TOLERANCE
) -> ResidualRecord:
    lhs = evaluate_expr(assignment, rel.lhs)
    rhs = evaluate_expr(assignment, rel.rhs)
    return check_matrices(
        rel.id, lhs, rhs, tolerance, rel.expected_for(assignment.basis.kind), assignment.subspace
    )


def check_suite(
    assignment: RepAssignment, relations: Sequence[Relation], tolerance: float = DEFAULT_TOLERANCE
) -> list[ResidualRecord]:
    return [check_relation(assignment, r, tolerance) for r in relations]


def max_residual(records: Iterable[ResidualRecord], expected_only: bool = True) -> float:
    return max((r.residual for r in records if r.expected_pass or not expected_only), default=0.0)


# ---------------------------------------------------------------------------
# the oscillator relation suite


def _commutator(x: str, y: str) -> Expr:
    return (word(1, x, y), word(-1, y, x))


def _scale_tail(i: int, n: int, start_inclusive: bool = True) -> tuple[str, ...]:
    lo = i if start_inclusive else i + 1
    return tuple(sym("Q", k) for k in range(lo, n + 1))


def eq9_exponents(nilpotency: int | None) -> range:
    top = 6 if nilpotency is None else min(6, nilpotency - 1)
    return range(1, top + 1)


def relation_suite_oscillator(
    p: QParameter, n: int, nilpotency: int | None = None
) -> list[Relation]:
    """All defining and derived relations of the n-mode covariant oscillator
    algebra at parameter ``p``.

    Families (id prefix): ``eq1`` defining relations including number-operator
    commutators, ``eq2`` bilinear/number relation, ``eq7`` commutator with the
    scale operators, ``eq9`` commutators with creation powers and, when
    ``nilpotency`` is given, ``eq10`` N-th power identities.
    """
    if n < 1:
        raise ValueError(f"need at least one mode, got {n}")
    q, w = p.q, p.half(1)
    a = lambda i: sym("a", i)
    b = lambda i: sym("abar", i)
    rels: list[Relation] = []
    modes = range(1, n + 1)

    for i in modes:
        for j in modes:
            if i < j:
                rels.append(Relation(
                    f"eq1.bb.abar{i}.abar{j}", (word(1, b(i), b(j)),), (word(w, b(j), b(i)),),
                    "abar_i abar_j = sqrt(q) abar_j abar_i (i<j)"))
                rels.append(Relation(
                    f"eq1.aa.a{i}.a{j}", (word(1, a(i), a(j)),), (word(1 / w, a(j), a(i)),),
                    "a_i a_j = q^(-1/2) a_j a_i (i<j)"))
    for i in modes:
        for j in modes:
            if i != j:
                rels.append(Relation(
                    f"eq1.cross.a{i}.abar{j}", (word(1, a(i), b(j)),), (word(w, b(j), a(i)),),
                    "a_i abar_j = sqrt(q) abar_j a_i (i!=j)"))
    for i in modes:
        rhs = [word(1), word(q, b(i), a(i))]
        rhs += [word(q - 1, b(k), a(k)) for k in range(i + 1, n + 1)]
        rels.append(Relation(
            f"eq1.diag.{i}", (word(1, a(i), b(i)),), tuple(rhs),
            "a_i abar_i = 1 + q abar_i a_i + (q-1) sum_{k>i} abar_k a_k"))
    for i in modes:
        for j in modes:
            d = 1 if i == j else 0
            rels.append(Relation(
                f"eq1.number.N{i}.a{j}", _commutator(sym("N", i), a(j)), (word(-d, a(j)),),
                "[N_i, a_j] = -delta_ij a_j"))
            # [N_i, abar_i] = abar_i forces 0 = N*1 once abar_i**N = 1, so the
            # diagonal case is not expected on the cyclic grid.
            rels.append(Relation(
                f"eq1.number.N{i}.abar{j}", _commutator(sym("N", i), b(j)), (word(d, b(j)),),
                "[N_i, abar_j] = delta_ij abar_j",
                frozenset({Basis.FOCK, Basis.POLYNOMIAL}) if i == j else None))
    for i in modes:
        tail = _scale_tail(i, n, start_inclusive=False)
        c = 1 / (q - 1)
        rels.append(Relation(
            f"eq2.{i}", (word(1, b(i), a(i)),),
            (word(c, *tail, sym("Q", i)), word(-c, *tail)),
            "abar_i a_i = Q_{i+1}..Q_n [N_i]"))
    for i in modes:
        rels.append(Relation(
            f"eq7.{i}", _commutator(a(i), b(i)), (word(1, *_scale_tail(i, n)),),
            "[a_i, abar_i] = Q_i..Q_n"))
    for i in modes:
        for m in eq9_exponents(nilpotency):
            coeff = p.power(1 - m) * q_number(p, m)
            rels.append(Relation(
                f"eq9.{i}.m{m}",
                (word(1, a(i), *[b(i)] * m), word(-1, *[b(i)] * m, a(i))),
                (word(coeff, *_scale_tail(i, n), *[b(i)] * (m - 1)),),
                "[a_i, abar_i^m] = q^(1-m)[m] Q_i..Q_n abar_i^(m-1)"))
    if nilpotency is not None:
        N = nilpotency
        for i in modes:
            rels.append(Relation(
                f"eq10.a_nilpotent.{i}", (word(1, *[a(i)] * N),), (), "a_i^N = 0"))
            rels.append(Relation(
                f"eq10.abar_power_zero.{i}", (word(1, *[b(i)] * N),), (),
                "abar_i^N = 0 (truncated Fock space)", frozenset({Basis.FOCK})))
            rels.append(Relation(
                f"eq10.abar_power_identity.{i}", (word(1, *[b(i)] * N),), (word(1),),
                "abar_i^N = 1", frozenset({Basis.GRID})))
    return rels


def oscillator_suite_count(n: int, nilpotency: int | None = None) -> dict[str, int]:
    """Closed-form family sizes of :func:`relation_suite_oscillator`."""
    pairs = n * (n - 1) // 2
    counts = {
        "eq1": 2 * pairs + n * (n - 1) + n + 2 * n * n,
        "eq2": n,
        "eq7": n,
        "eq9": n * len(eq9_exponents(nilpotency)),
    }
    if nilpotency is not None:
        counts["eq10"] = 3 * n
    return counts

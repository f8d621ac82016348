"""Finite Fock representation of the covariant oscillators at q a primitive
N-th root of unity.

Occupations run over 0..N-1 in every mode: sqrt([N]) = 0 so the creation
operators cannot leave that box.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, ResourceError
from .opcore import Basis, BasisTag, Operator, RepAssignment, sym
from .qcalc import QParameter, q_from_root, q_number

DEFAULT_CAP = 4096


@dataclass(frozen=True)
class FockIndex:
    entries: tuple[int, ...]

    def rank(self, N: int) -> int:
        # n_1 slowest, n_n fastest
        r = 0
        for e in self.entries:
            if not 0 <= e < N:
                raise InvalidParameterError(f"occupation {e} outside 0..{N - 1}")
            r = r * N + e
        return r

    @classmethod
    def from_rank(cls, rank: int, n: int, N: int) -> "FockIndex":
        out = []
        for _ in range(n):
            rank, e = divmod(rank, N)
            out.append(e)
        return cls(tuple(reversed(out)))


def enumerate_states(n: int, N: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(N), repeat=n))


def check_cap(dim: int, cap: int):
    if dim > cap:
        raise ResourceError(f"representation dimension {dim} exceeds cap {cap}")


def mode_coefficient(p: QParameter, state: tuple[int, ...], i: int) -> complex:
    """omega**(sum_{k>i} n_k) * sqrt([n_i]) for 0-based mode i.

    The q-power goes through omega so that it multiplies exactly; only the
    q-number sits under the principal square root.
    """
    return p.half(sum(state[i + 1:])) * np.sqrt(complex(q_number(p, state[i])))


def build_fock_rep(n: int, N: int, cap: int = DEFAULT_CAP) -> RepAssignment:
    if n < 1:
        raise InvalidParameterError(f"need at least one mode, got {n}")
    p = q_from_root(N)
    dim = N**n
    check_cap(dim, cap)
    states = enumerate_states(n, N)
    tag = BasisTag(Basis.FOCK, n, N)
    gens: dict[str, Operator] = {}
    for i in range(n):
        a = np.zeros((dim, dim), dtype=complex)
        b = np.zeros((dim, dim), dtype=complex)
        for col, st in enumerate(states):
            if st[i] > 0:
                lower = st[:i] + (st[i] - 1,) + st[i + 1:]
                a[FockIndex(lower).rank(N), col] = mode_coefficient(p, st, i)
            if st[i] < N - 1:
                upper = st[:i] + (st[i] + 1,) + st[i + 1:]
                b[FockIndex(upper).rank(N), col] = mode_coefficient(p, upper, i)
        gens[sym("a", i + 1)] = Operator(a, tag)
        gens[sym("abar", i + 1)] = Operator(b, tag)
        gens[sym("N", i + 1)] = Operator(np.diag([float(st[i]) for st in states]), tag)
        gens[sym("Q", i + 1)] = Operator(np.diag([p.power(st[i]) for st in states]), tag)
    return RepAssignment(p, n, gens, tag, label=f"fock(n={n}, N={N})")


def build_state(rep: RepAssignment, idx: FockIndex) -> tuple[np.ndarray, complex]:
    """Apply abar_n^{n_n}..abar_1^{n_1}/sqrt(prod [n_i]!) to the vacuum.

    Returns the vector and its phase relative to the unit basis vector of
    ``idx``.
    """
    N, n = rep.basis.size, rep.n_modes
    if len(idx.entries) != n:
        raise InvalidParameterError(f"index has {len(idx.entries)} entries, rep has {n} modes")
    target = idx.rank(N)
    vec = np.zeros(rep.dim, dtype=complex)
    vec[0] = 1
    norm = 1 + 0j
    # rightmost factor acts first
    for i in range(n):
        op = rep[sym("abar", i + 1)].matrix
        for j in range(1, idx.entries[i] + 1):
            vec = op @ vec
            norm *= np.sqrt(complex(q_number(rep.params, j)))
    vec = vec / norm
    return vec, complex(vec[target])


def is_star_compatible(rep: RepAssignment, atol: float = 1e-12) -> bool:
    """Whether abar_i equals the conjugate transpose of a_i for every mode."""
    return all(
        np.allclose(rep[sym("abar", i)].matrix, rep[sym("a", i)].matrix.conj().T, atol=atol)
        for i in range(1, rep.n_modes + 1)
    )

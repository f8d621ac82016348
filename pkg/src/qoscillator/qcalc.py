"""Scalar q-calculus: q-numbers, q-factorials, the q-exponential and the
Jackson integral, all driven by a single :class:`QParameter`.

At a root of unity every power of ``q`` (and of its fixed square root
``omega``) is looked up from a reduced angle, so ``[x + N] == [x]`` and
``q**N == 1`` hold exactly rather than up to rounding.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import InvalidParameterError, NumericError, UnsupportedModeError

DEFAULT_TRUNCATION = 200


class Mode(str, enum.Enum):
    ROOT_OF_UNITY = "root_of_unity"
    REAL = "real"


def _unit(num: int, den: int) -> complex:
    """exp(i*pi*num/den) with the fraction reduced first, so equal angles
    always go through the identical floating point computation."""
    num %= 2 * den
    if num == 0:
        return 1 + 0j
    g = math.gcd(num, den)
    num, den = num // g, den // g
    if den == 1:
        return -1 + 0j
    if den == 2:
        return 1j if num == 1 else -1j
    return cmath.exp(1j * math.pi * num / den)


@dataclass(frozen=True)
class QParameter:
    """Deformation parameter.

    For ``Mode.ROOT_OF_UNITY`` the parameter is ``q = exp(2*pi*i*k/N)`` with
    ``gcd(k, N) == 1`` and ``omega = exp(i*pi*k/N)``; ``k`` is 1 unless the
    parameter was derived with :meth:`squared`. For ``Mode.REAL`` it is a real
    ``q`` in (0, 1) and ``omega = +sqrt(q)``.
    """

    mode: Mode
    q: complex
    omega: complex
    N: int | None = None
    k: int = 1

    @property
    def is_root_of_unity(self) -> bool:
        return self.mode is Mode.ROOT_OF_UNITY

    @property
    def real_value(self) -> float:
        if self.is_root_of_unity:
            raise UnsupportedModeError("parameter is a root of unity, not a real q")
        return self.q.real

    def power(self, x: int) -> complex:
        """q**x for integer x."""
        x = int(x)
        if self.is_root_of_unity:
            return _unit(2 * self.k * x, self.N)
        qr = self.q.real
        return complex(qr**x if x >= 0 else 1.0 / qr ** (-x))

    def half(self, m: int) -> complex:
        """omega**m, i.e. q**(m/2) on the fixed branch."""
        m = int(m)
        if self.is_root_of_unity:
            return _unit(self.k * m, self.N)
        w = self.omega.real
        return complex(w**m if m >= 0 else 1.0 / w ** (-m))

    def squared(self) -> "QParameter":
        """The parameter q**2, whose fixed square root is q itself."""
        if self.is_root_of_unity:
            num, den = 2 * self.k, self.N
            g = math.gcd(num, den)
            num, den = num // g, den // g
            if den < 2:
                raise InvalidParameterError(f"q**2 = 1 for N={self.N}; not a valid deformation")
            return QParameter(Mode.ROOT_OF_UNITY, _unit(2 * num, den), _unit(num, den), den, num)
        return q_real(self.q.real**2)

    def describe(self) -> dict:
        if self.is_root_of_unity:
            return {"mode": self.mode.value, "N": self.N, "k": self.k}
        return {"mode": self.mode.value, "q": self.q.real}


def q_from_root(N: int) -> QParameter:
    """Primitive N-th root of unity q = exp(2*pi*i/N)."""
    if isinstance(N, bool) or not isinstance(N, int) or N < 2:
        raise InvalidParameterError(f"root order must be an integer >= 2, got {N!r}")
    return QParameter(Mode.ROOT_OF_UNITY, _unit(2, N), _unit(1, N), N, 1)


def q_real(value: float) -> QParameter:
    value = float(value)
    if not (0.0 < value < 1.0):
        raise InvalidParameterError(f"real deformation parameter must lie in (0, 1), got {value}")
    return QParameter(Mode.REAL, complex(value), complex(math.sqrt(value)))


def q_number(p: QParameter, x: int) -> complex:
    """[x] = (q**x - 1)/(q - 1)."""
    return (p.power(x) - 1) / (p.q - 1)


def q_factorial(p: QParameter, n: int) -> complex:
    if n < 0:
        raise InvalidParameterError(f"q-factorial needs n >= 0, got {n}")
    out = 1 + 0j
    for j in range(1, n + 1):
        out *= q_number(p, j)
    return out


def half_power(p: QParameter, m: int) -> complex:
    return p.half(m)


def _require_real(p: QParameter, what: str) -> float:
    if p.is_root_of_unity:
        raise UnsupportedModeError(f"{what} is only defined for a real deformation parameter")
    return p.q.real


def q_exponential(p: QParameter, x: complex, K: int = DEFAULT_TRUNCATION) -> complex:
    """Partial sum of exp_q(x) = sum_n x**n/[n]! over n = 0..K.

    The coefficients 1/[n]! blow up at roots of unity, so only real q is accepted.
    """
    _require_real(p, "q-exponential")
    if K < 1:
        raise InvalidParameterError(f"truncation must be >= 1, got {K}")
    term = 1 + 0j
    total = 1 + 0j
    for n in range(1, K + 1):
        term *= x / q_number(p, n)
        total += term
    return total


def jackson_integral(
    p: QParameter,
    f: Callable[[float], complex],
    upper: float,
    K: int = DEFAULT_TRUNCATION,
) -> complex:
    """Jackson integral from 0 to ``upper``: upper*(1-q)*sum_k q**k f(upper*q**k)."""
    q = _require_real(p, "Jackson integral")
    if not (upper > 0 and math.isfinite(upper)):
        raise InvalidParameterError(f"upper limit must be positive and finite, got {upper}")
    if K < 1:
        raise InvalidParameterError(f"truncation must be >= 1, got {K}")
    total = 0j
    qk = 1.0
    for _ in range(K + 1):
        try:
            val = complex(f(upper * qk))
        except (ZeroDivisionError, OverflowError) as exc:
            raise NumericError(f"integrand failed at x={upper * qk}: {exc}") from exc
        if not cmath.isfinite(val):
            raise NumericError(f"integrand is not finite at x={upper * qk}")
        total += qk * val
        qk *= q
    return upper * (1 - q) * total


def measure_weight(p: QParameter, x: float, K: int = DEFAULT_TRUNCATION) -> complex:
    """Radial weight 1/exp_q(q*x) of the Bargmann measure."""
    return 1.0 / q_exponential(p, p.q.real * x, K)


def radial_moment(p: QParameter, n: int, K: int = DEFAULT_TRUNCATION) -> complex:
    """Jackson integral of x**n/exp_q(q*x) over [0, 1/(1-q)]; equals [n]!."""
    q = _require_real(p, "radial moment")
    return jackson_integral(p, lambda x: x**n * measure_weight(p, x, K), 1.0 / (1.0 - q), K)

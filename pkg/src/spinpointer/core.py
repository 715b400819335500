"""Exact half-integers and the value types describing a signal family."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import BadN, OutOfRange, ParityMismatch


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """A number in (1/2)Z, stored as twice its value so arithmetic stays exact."""

    twice: int

    @classmethod
    def from_twice(cls, t: int) -> "HalfInt":
        return cls(int(t))

    @classmethod
    def from_value(cls, value) -> "HalfInt":
        f = Fraction(value)
        if (2 * f).denominator != 1:
            raise ValueError(f"{value!r} is not a multiple of 1/2")
        return cls(int(2 * f))

    def __add__(self, other):
        if isinstance(other, int):
            other = HalfInt(2 * other)
        if not isinstance(other, HalfInt):
            return NotImplemented
        return HalfInt(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = HalfInt(2 * other)
        if not isinstance(other, HalfInt):
            return NotImplemented
        return HalfInt(self.twice - other.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __lt__(self, other):
        if isinstance(other, int):
            return self.twice < 2 * other
        if not isinstance(other, HalfInt):
            return NotImplemented
        return self.twice < other.twice

    def __eq__(self, other):
        if isinstance(other, int):
            return self.twice == 2 * other
        if not isinstance(other, HalfInt):
            return NotImplemented
        return self.twice == other.twice

    def __hash__(self):
        return hash(self.twice)

    def __float__(self):
        return self.twice / 2

    def to_float(self) -> float:
        return self.twice / 2

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def half_int_from_twice(t: int) -> HalfInt:
    return HalfInt.from_twice(t)


@dataclass(frozen=True)
class ProblemSpec:
    """N spins sending the family of states with a common projection m.

    The signal superposes one copy of each total spin j = m, m+1, ..., N/2.
    """

    n_spins: int
    m: HalfInt

    @property
    def k(self) -> int:
        """Index of the last j; there are k + 1 coefficients."""
        return (self.n_spins - self.m.twice) // 2

    @property
    def size(self) -> int:
        return self.k + 1

    @property
    def j_values(self) -> list[HalfInt]:
        return [HalfInt(self.m.twice + 2 * i) for i in range(self.size)]

    @property
    def twice_m(self) -> int:
        return self.m.twice

    def __str__(self):
        return f"N={self.n_spins}, m={self.m}"


def lowest_m(n: int) -> HalfInt:
    """0 for even N, 1/2 for odd N."""
    return HalfInt(n % 2)


def validate_spec(n: int, m: HalfInt | int | None = None) -> ProblemSpec:
    """Build a ProblemSpec, raising the specific rule violated.

    ``m`` defaults to the lowest legal projection. A plain int is read as
    ``twice_m``.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise BadN(f"N must be a positive integer, got {n!r}")
    n = int(n)
    if m is None:
        m = lowest_m(n)
    elif not isinstance(m, HalfInt):
        m = HalfInt(int(m))
    if (m.twice - n) % 2:
        raise ParityMismatch(
            f"2m={m.twice} and N={n} differ in parity; m must be "
            f"{'an integer' if n % 2 == 0 else 'half-odd'} for N={n}"
        )
    if m.twice < 0 or m.twice > n:
        raise OutOfRange(f"m={m} outside 0 <= m <= N/2 = {HalfInt(n)}")
    return ProblemSpec(n, m)


def hilbert_dimension(n: int) -> int:
    """Dimension spanned by one copy of each j from 0 (or 1/2) up to N/2."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise BadN(f"N must be a positive integer, got {n!r}")
    n = int(n)
    if n % 2 == 0:
        return (n + 2) ** 2 // 4
    return (n + 1) * (n + 3) // 4


@dataclass(frozen=True)
class SignalState:
    """Alice's signal: coefficients c_j in ascending j, and the <cos chi> it achieves."""

    spec: ProblemSpec
    coeffs: tuple[float, ...]
    mean_x: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if len(self.coeffs) != self.spec.size:
            raise ValueError(
                f"{self.spec} needs {self.spec.size} coefficients, got {len(self.coeffs)}"
            )

    def coefficient(self, j: HalfInt) -> float:
        return self.coeffs[(j.twice - self.spec.m.twice) // 2]


@dataclass(frozen=True)
class FidelityResult:
    spec: ProblemSpec
    state: SignalState
    fidelity: float
    one_minus_f: float

    @classmethod
    def from_state(cls, state: SignalState) -> "FidelityResult":
        fidelity = (1.0 + state.mean_x) / 2.0
        return cls(state.spec, state, fidelity, 1.0 - fidelity)

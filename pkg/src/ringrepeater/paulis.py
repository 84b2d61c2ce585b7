"""Pauli operators in binary-symplectic form.

A Pauli operator on n qubits is stored as ``i^phase * X^x * Z^z`` where
``x`` and ``z`` are bitmasks (bit j = qubit j) and ``phase`` is mod 4.
With this ordering the letter at qubit j is I, X, Z, or XZ = -iY.
Hermitian operators (the only ones appearing as stabilizer generators)
satisfy ``phase == popcount(x & z) (mod 2)`` and carry a real sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Pauli(str, Enum):
    """Single-qubit Pauli label."""

    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# (x bit, z bit) per letter; Y contributes a leading +i so that
# i * XZ = i * (-iY) ... i.e. Y = i X Z.
_LETTER_BITS = {Pauli.I: (0, 0), Pauli.X: (1, 0), Pauli.Y: (1, 1), Pauli.Z: (0, 1)}


def _bit(mask: int, j: int) -> int:
    return (mask >> j) & 1


def letter_bits(p: Pauli) -> tuple[int, int]:
    return _LETTER_BITS[p]


def anticommutes(p: Pauli, q: Pauli) -> bool:
    """True when the two single-qubit Paulis anticommute."""
    xp, zp = _LETTER_BITS[p]
    xq, zq = _LETTER_BITS[q]
    return bool((xp & zq) ^ (zp & xq))


@dataclass(frozen=True)
class PauliOp:
    """n-qubit Pauli operator ``i^phase * X^x * Z^z``."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, p: Pauli, sign: int = 1) -> "PauliOp":
        if not 0 <= qubit < n:
            raise IndexError(f"qubit {qubit} out of range for {n} qubits")
        xb, zb = _LETTER_BITS[p]
        phase = (1 if p is Pauli.Y else 0) + (0 if sign == 1 else 2)
        return cls(n, xb << qubit, zb << qubit, phase % 4)

    @classmethod
    def from_string(cls, letters: str, sign: int = 1) -> "PauliOp":
        """Build from a string like 'XZIZ' (qubit 0 is the first letter)."""
        op = cls(len(letters), phase=0 if sign == 1 else 2)
        for j, ch in enumerate(letters):
            op = op * cls.single(len(letters), j, Pauli(ch))
        return op

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        if self.n != other.n:
            raise ValueError("operator sizes differ")
        # X^x1 Z^z1 X^x2 Z^z2 -> (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}
        phase = (self.phase + other.phase + 2 * (self.z & other.x).bit_count()) % 4
        return PauliOp(self.n, self.x ^ other.x, self.z ^ other.z, phase)

    def commutes(self, other: "PauliOp") -> bool:
        return ((self.x & other.z) ^ (self.z & other.x)).bit_count() % 2 == 0

    @property
    def sign(self) -> int:
        """Real sign of a Hermitian operator (+1 or -1)."""
        k = (self.phase - (self.x & self.z).bit_count()) % 4
        if k == 0:
            return 1
        if k == 2:
            return -1
        raise ValueError("operator is not Hermitian")

    def letter(self, j: int) -> Pauli:
        xb, zb = _bit(self.x, j), _bit(self.z, j)
        return {(0, 0): Pauli.I, (1, 0): Pauli.X, (0, 1): Pauli.Z, (1, 1): Pauli.Y}[(xb, zb)]

    @property
    def support(self) -> tuple[int, ...]:
        m = self.x | self.z
        return tuple(j for j in range(self.n) if _bit(m, j))

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def embed(self, n: int, offset: int) -> "PauliOp":
        """Embed into a larger register starting at ``offset``."""
        if offset + self.n > n:
            raise ValueError("embedding exceeds register size")
        return PauliOp(n, self.x << offset, self.z << offset, self.phase)

    def to_string(self) -> str:
        s = "+" if self.sign == 1 else "-"
        return s + "".join(self.letter(j).value for j in range(self.n))

    def __repr__(self) -> str:
        return f"PauliOp({self.to_string()!r})"

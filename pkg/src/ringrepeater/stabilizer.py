"""CHP-style stabilizer tableau with loss, Pauli frames, and physical fusions.

The tableau keeps n destabilizer and n stabilizer rows (Aaronson-Gottesman
layout) with exact sign tracking; signs matter here because error detection
is done by comparing measured parities. Loss is modeled as an erasure flag:
a lost qubit is measured out in a random basis with the result discarded,
which reproduces the partial trace for every later measurement.
"""

from __future__ import annotations

import os

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ringrepeater.paulis import Pauli, PauliOp, anticommutes


#: validate the generator group after every gate and measurement
_DEBUG_VALIDATE = bool(os.environ.get("RINGREPEATER_DEBUG"))


class InvalidGraphError(ValueError):
    """Adjacency matrix is not a simple undirected graph."""


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of a single-qubit Pauli measurement.

    kind is 'deterministic', 'random', or 'erased'; value is +/-1 and is
    None exactly when the qubit was flagged lost.
    """

    kind: str
    value: Optional[int]

    @property
    def erased(self) -> bool:
        return self.kind == "erased"


@dataclass(frozen=True)
class FusionEvent:
    """Outcome of a physical two-photon fusion.

    Success carries both rotated parities, failure carries the single
    retained parity (plus the raw per-photon outcomes it was formed from),
    loss carries nothing.
    """

    kind: str
    xx_parity: Optional[int] = None
    zz_parity: Optional[int] = None
    basis: Optional[Pauli] = None
    parity: Optional[int] = None
    outcomes: Optional[tuple[int, int]] = None

    @property
    def success(self) -> bool:
        return self.kind == "success"

    @property
    def lost(self) -> bool:
        return self.kind == "loss"


class PauliFrame:
    """Classical record of per-qubit Pauli errors/byproducts.

    Composition is bitwise (XOR of X and Z parts), so composing a frame
    with itself gives the identity frame.
    """

    _BITS = {Pauli.I: (0, 0), Pauli.X: (1, 0), Pauli.Y: (1, 1), Pauli.Z: (0, 1)}
    _INV = {(0, 0): Pauli.I, (1, 0): Pauli.X, (1, 1): Pauli.Y, (0, 1): Pauli.Z}

    def __init__(self, n: int, letters: Optional[Sequence[Pauli]] = None):
        self.n = n
        self.letters = list(letters) if letters is not None else [Pauli.I] * n
        if len(self.letters) != n:
            raise ValueError("frame length mismatch")

    @classmethod
    def identity(cls, n: int) -> "PauliFrame":
        return cls(n)

    @classmethod
    def sample_depolarizing(cls, n: int, lam: float, rng: np.random.Generator) -> "PauliFrame":
        """One depolarizing event per qubit: each of X, Y, Z at rate lam/3."""
        letters = []
        for u in rng.random(n):
            if u < lam / 3:
                letters.append(Pauli.X)
            elif u < 2 * lam / 3:
                letters.append(Pauli.Y)
            elif u < lam:
                letters.append(Pauli.Z)
            else:
                letters.append(Pauli.I)
        return cls(n, letters)

    def compose(self, other: "PauliFrame") -> "PauliFrame":
        if self.n != other.n:
            raise ValueError("frame sizes differ")
        out = []
        for a, b in zip(self.letters, other.letters):
            xa, za = self._BITS[a]
            xb, zb = self._BITS[b]
            out.append(self._INV[(xa ^ xb, za ^ zb)])
        return PauliFrame(self.n, out)

    def flips(self, qubit: int, basis: Pauli) -> bool:
        """Whether the frame entry flips a measurement of ``basis`` on ``qubit``."""
        return anticommutes(self.letters[qubit], basis)

    def __getitem__(self, qubit: int) -> Pauli:
        return self.letters[qubit]


class StabilizerTableau:
    """Exact n-qubit stabilizer state with destabilizers and loss flags."""

    def __init__(self, num_qubits: int):
        if num_qubits < 1:
            raise ValueError("need at least one qubit")
        self.n = num_qubits
        # rows[0..n-1] destabilizers, rows[n..2n-1] stabilizers; each row is
        # [x mask, z mask, phase mod 4] representing i^phase X^x Z^z.
        self.rows: list[list[int]] = [[1 << i, 0, 0] for i in range(num_qubits)]
        self.rows += [[0, 1 << i, 0] for i in range(num_qubits)]
        self.lost = [False] * num_qubits

    # -- basic structure -------------------------------------------------

    @property
    def num_qubits(self) -> int:
        return self.n

    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau.__new__(StabilizerTableau)
        t.n = self.n
        t.rows = [row[:] for row in self.rows]
        t.lost = self.lost[:]
        return t

    def stabilizer(self, i: int) -> PauliOp:
        x, z, r = self.rows[self.n + i]
        return PauliOp(self.n, x, z, r)

    def generators(self) -> list[PauliOp]:
        return [self.stabilizer(i) for i in range(self.n)]

    def _check_index(self, q: int) -> None:
        if not 0 <= q < self.n:
            raise IndexError(f"qubit {q} out of range for {self.n} qubits")

    def _rowmul(self, h: int, i: int) -> None:
        """rows[h] := rows[h] * rows[i] with exact phase tracking."""
        xh, zh, rh = self.rows[h]
        xi, zi, ri = self.rows[i]
        self.rows[h] = [xh ^ xi, zh ^ zi, (rh + ri + 2 * (zh & xi).bit_count()) % 4]

    # -- Clifford gates ---------------------------------------------------

    def _gate_h(self, q: int) -> None:
        b = 1 << q
        for row in self.rows:
            x, z = bool(row[0] & b), bool(row[1] & b)
            if x and z:
                row[2] = (row[2] + 2) % 4
            if x != z:
                row[0] ^= b
                row[1] ^= b

    def _gate_s(self, q: int) -> None:
        b = 1 << q
        for row in self.rows:
            if row[0] & b:
                row[2] = (row[2] + 1) % 4
                row[1] ^= b

    def _gate_pauli(self, q: int, p: Pauli) -> None:
        b = 1 << q
        for row in self.rows:
            x, z = bool(row[0] & b), bool(row[1] & b)
            flip = (p is Pauli.X and z) or (p is Pauli.Z and x) or (p is Pauli.Y and x != z)
            if flip:
                row[2] = (row[2] + 2) % 4

    def _gate_cz(self, a: int, c: int) -> None:
        ba, bc = 1 << a, 1 << c
        for row in self.rows:
            xa, xc = bool(row[0] & ba), bool(row[0] & bc)
            if xa and xc:
                row[2] = (row[2] + 2) % 4
            if xa:
                row[1] ^= bc
            if xc:
                row[1] ^= ba

    def apply_gate(self, name: str, *qubits: int) -> None:
        """Apply one of H, S, X, Y, Z, CZ, CNOT in place."""
        for q in qubits:
            self._check_index(q)
        name = name.upper()
        if name == "H":
            self._gate_h(qubits[0])
        elif name == "S":
            self._gate_s(qubits[0])
        elif name in ("X", "Y", "Z"):
            self._gate_pauli(qubits[0], Pauli(name))
        elif name == "CZ":
            if qubits[0] == qubits[1]:
                raise IndexError("CZ needs two distinct qubits")
            self._gate_cz(qubits[0], qubits[1])
        elif name in ("CNOT", "CX"):
            ctrl, tgt = qubits
            self._gate_h(tgt)
            self._gate_cz(ctrl, tgt)
            self._gate_h(tgt)
        else:
            raise ValueError(f"unknown gate {name!r}")
        if _DEBUG_VALIDATE:
            self.validate()

    def apply_pauli_op(self, op: PauliOp) -> None:
        """Conjugate the state by a Pauli operator (sign flips only)."""
        for row in self.rows:
            if ((row[0] & op.z) ^ (row[1] & op.x)).bit_count() % 2:
                row[2] = (row[2] + 2) % 4

    # -- measurement ------------------------------------------------------

    def _row_anticommutes(self, idx: int, op: PauliOp) -> bool:
        x, z, _ = self.rows[idx]
        return ((x & op.z) ^ (z & op.x)).bit_count() % 2 == 1

    def measure_operator(
        self,
        op: PauliOp,
        rng: Optional[np.random.Generator] = None,
        force: Optional[int] = None,
    ) -> tuple[int, bool, Optional[PauliOp]]:
        """Measure a Hermitian Pauli operator exactly.

        Returns (value, was_random, correction). When the outcome is random,
        ``correction`` anticommutes with ``op`` and commutes with every other
        post-measurement generator, so applying it maps the -1 branch onto
        the +1 branch (feed-forward byproduct fix).
        """
        if op.sign not in (1, -1):
            raise ValueError("measurement operator must be Hermitian")
        anti = [i for i in range(self.n, 2 * self.n) if self._row_anticommutes(i, op)]
        if anti:
            p = anti[0]
            old = self.rows[p][:]
            correction = PauliOp(self.n, old[0], old[1], old[2])
            for i in range(2 * self.n):
                if i != p and self._row_anticommutes(i, op):
                    self._rowmul(i, p)
            self.rows[p - self.n] = old[:]
            if force is None:
                if rng is None:
                    raise ValueError("random measurement outcome requires an rng")
                value = 1 if rng.integers(2) == 0 else -1
            else:
                value = 1 if force > 0 else -1
            self.rows[p] = [op.x, op.z, op.phase if value == 1 else (op.phase + 2) % 4]
            return value, True, correction
        # Deterministic branch: the product of stabilizer rows whose
        # destabilizer partner anticommutes with op equals +/-op.
        acc = PauliOp(self.n)
        for i in range(self.n):
            if self._row_anticommutes(i, op):
                x, z, r = self.rows[self.n + i]
                acc = acc * PauliOp(self.n, x, z, r)
        if (acc.x, acc.z) != (op.x, op.z):
            raise AssertionError("deterministic measurement lost group structure")
        value = 1 if acc.phase == op.phase else -1
        if force is not None and (1 if force > 0 else -1) != value:
            raise ValueError("cannot force the outcome of a deterministic measurement")
        if _DEBUG_VALIDATE:
            self.validate()
        return value, False, None

    def measure_single(
        self,
        qubit: int,
        basis: Pauli,
        rng: Optional[np.random.Generator] = None,
        force: Optional[int] = None,
    ) -> tuple[int, bool, Optional[PauliOp]]:
        self._check_index(qubit)
        return self.measure_operator(PauliOp.single(self.n, qubit, Pauli(basis)), rng, force)

    def trace_out(self, qubit: int, rng: np.random.Generator) -> None:
        """Remove a lost qubit from the group.

        Measures it in a random basis and discards the result; marginals of
        every later measurement equal the partial trace.
        """
        self._check_index(qubit)
        if self.lost[qubit]:
            return
        basis = (Pauli.X, Pauli.Y, Pauli.Z)[rng.integers(3)]
        self.measure_single(qubit, basis, rng)
        self.lost[qubit] = True

    # -- group inspection -------------------------------------------------

    def validate(self) -> None:
        """Check Hermiticity, commutation, and destabilizer pairing."""
        for i in range(2 * self.n):
            x, z, r = self.rows[i]
            if (r - (x & z).bit_count()) % 2:
                raise AssertionError(f"row {i} is not Hermitian")
        gens = self.generators()
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if not gens[i].commutes(gens[j]):
                    raise AssertionError(f"stabilizers {i},{j} anticommute")
        for i in range(self.n):
            x, z, r = self.rows[i]
            d = PauliOp(self.n, x, z, r)
            for j in range(self.n):
                if (i == j) == d.commutes(gens[j]):
                    raise AssertionError(f"destabilizer pairing broken at ({i},{j})")

    def canonical_stabilizers(self) -> list[tuple[int, int, int]]:
        """Fully reduced generator list; equal lists <=> equal groups."""
        rows = [self.rows[self.n + i][:] for i in range(self.n)]

        def mul(a: list[int], b: list[int]) -> list[int]:
            return [a[0] ^ b[0], a[1] ^ b[1], (a[2] + b[2] + 2 * (a[1] & b[0]).bit_count()) % 4]

        rank = 0
        for col in range(2 * self.n):
            part, mask = col % 2, 1 << (col // 2)
            sel = next((i for i in range(rank, self.n) if rows[i][part] & mask), None)
            if sel is None:
                continue
            rows[rank], rows[sel] = rows[sel], rows[rank]
            for i in range(self.n):
                if i != rank and rows[i][part] & mask:
                    rows[i] = mul(rows[i], rows[rank])
            rank += 1
            if rank == self.n:
                break
        return sorted((r[0], r[1], r[2]) for r in rows)

    def stabilizer_group_equal(self, other: "StabilizerTableau") -> bool:
        return self.n == other.n and self.canonical_stabilizers() == other.canonical_stabilizers()

    def contains(self, op: PauliOp) -> Optional[int]:
        """Sign with which the stabilizer group contains op, or None."""
        rows = [self.rows[self.n + i][:] for i in range(self.n)]
        acc = [op.x, op.z, op.phase]

        def mulinto(a: list[int], b: list[int]) -> list[int]:
            return [a[0] ^ b[0], a[1] ^ b[1], (a[2] + b[2] + 2 * (a[1] & b[0]).bit_count()) % 4]

        rank = 0
        for col in range(2 * self.n):
            part, mask = col % 2, 1 << (col // 2)
            sel = next((i for i in range(rank, self.n) if rows[i][part] & mask), None)
            if sel is None:
                continue
            rows[rank], rows[sel] = rows[sel], rows[rank]
            for i in range(self.n):
                if i != rank and rows[i][part] & mask:
                    rows[i] = mulinto(rows[i], rows[rank])
            if acc[part] & mask:
                acc = mulinto(acc, rows[rank])
            rank += 1
        if acc[0] or acc[1]:
            return None
        return 1 if acc[2] % 4 == 0 else -1


# -- module-level API --------------------------------------------------------


def graph_state(adjacency) -> StabilizerTableau:
    """Tableau of the graph state stabilized by { X_i prod_{j~i} Z_j }."""
    adj = np.asarray(adjacency, dtype=bool)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] == 0:
        raise InvalidGraphError("adjacency must be a non-empty square matrix")
    if np.any(np.diag(adj)):
        raise InvalidGraphError("adjacency has a self-loop")
    if not np.array_equal(adj, adj.T):
        raise InvalidGraphError("adjacency is not symmetric")
    n = adj.shape[0]
    t = StabilizerTableau(n)
    for i in range(n):
        zmask = 0
        for j in np.flatnonzero(adj[i]):
            zmask |= 1 << int(j)
        t.rows[n + i] = [1 << i, zmask, 0]
        t.rows[i] = [0, 1 << i, 0]
    return t


def apply_clifford(t: StabilizerTableau, gate: tuple) -> StabilizerTableau:
    """New tableau with gate applied; gate is ('CZ', i, j), ('H', i), ('S', i), or ('X'|'Y'|'Z', i)."""
    out = t.copy()
    out.apply_gate(gate[0], *gate[1:])
    return out


def measure_pauli(
    t: StabilizerTableau,
    qubit: int,
    basis: Pauli,
    frame: Optional[PauliFrame] = None,
    lost: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> tuple[MeasurementOutcome, StabilizerTableau]:
    """Single-qubit Pauli measurement with loss and frame semantics.

    A lost qubit yields Erased and is traced out; otherwise the reported
    sign is flipped whenever the frame entry anticommutes with the basis.
    The photon is consumed either way.
    """
    out = t.copy()
    out._check_index(qubit)
    if rng is None:
        rng = np.random.default_rng()
    if lost or out.lost[qubit]:
        out.trace_out(qubit, rng)
        return MeasurementOutcome("erased", None), out
    value, was_random, _ = out.measure_single(qubit, Pauli(basis), rng)
    if frame is not None and frame.flips(qubit, Pauli(basis)):
        value = -value
    out.lost[qubit] = True
    return MeasurementOutcome("random" if was_random else "deterministic", value), out


def fuse(
    t: StabilizerTableau,
    qa: int,
    qb: int,
    failure_basis: Pauli = Pauli.X,
    rotations: Optional[Mapping[int, Iterable[str]]] = None,
    frame: Optional[PauliFrame] = None,
    lost_a: bool = False,
    lost_b: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> tuple[FusionEvent, StabilizerTableau]:
    """Physical fusion of two photons (linear-optics Bell measurement).

    Success (probability 1/2) retrieves both parities X_aX_b and Z_aZ_b in
    the rotated frame; failure retrieves only the failure-basis parity via
    two separable single-qubit measurements; loss of either photon erases
    both parities. Both photons are always consumed. Implemented as an
    explicit CZ + single-qubit measurement decomposition.
    """
    if qa == qb:
        raise IndexError("fusion needs two distinct qubits")
    out = t.copy()
    out._check_index(qa)
    out._check_index(qb)
    if rng is None:
        rng = np.random.default_rng()
    if rotations:
        for q, gates in rotations.items():
            for g in gates:
                out.apply_gate(g, q)
    if frame is not None:
        for q in (qa, qb):
            if frame[q] is not Pauli.I:
                out.apply_pauli_op(PauliOp.single(out.n, q, frame[q]))
    if lost_a or lost_b or out.lost[qa] or out.lost[qb]:
        out.trace_out(qa, rng)
        out.trace_out(qb, rng)
        return FusionEvent("loss"), out
    if rng.integers(2) == 0:
        # CNOT(a->b), then X on a reads X_aX_b and Z on b reads Z_aZ_b.
        out.apply_gate("H", qb)
        out.apply_gate("CZ", qa, qb)
        out.apply_gate("H", qb)
        xx, _, _ = out.measure_single(qa, Pauli.X, rng)
        zz, _, _ = out.measure_single(qb, Pauli.Z, rng)
        out.lost[qa] = out.lost[qb] = True
        return FusionEvent("success", xx_parity=xx, zz_parity=zz), out
    basis = Pauli(failure_basis)
    sa, _, _ = out.measure_single(qa, basis, rng)
    sb, _, _ = out.measure_single(qb, basis, rng)
    out.lost[qa] = out.lost[qb] = True
    return FusionEvent("failure", basis=basis, parity=sa * sb, outcomes=(sa, sb)), out


def tableau_from_generators(generators: Sequence[PauliOp],
                            rng: Optional[np.random.Generator] = None) -> StabilizerTableau:
    """State stabilized by the given commuting, independent generator set.

    Measures each generator in turn and flips the -1 branches onto +1 with
    the feed-forward correction, so the result is seed-independent.
    """
    if not generators:
        raise ValueError("need at least one generator")
    n = generators[0].n
    if len(generators) != n:
        raise ValueError("need exactly n independent generators")
    if rng is None:
        rng = np.random.default_rng(0)
    t = StabilizerTableau(n)
    for g in generators:
        value, was_random, corr = t.measure_operator(g, rng)
        if value == -1:
            if corr is None:
                raise ValueError("generator set is inconsistent (forced -1 outcome)")
            t.apply_pauli_op(corr)
    return t

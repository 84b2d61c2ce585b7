"""Concatenated ring graph codes: structure, generation, and measurement patterns.

A unit ring of size n encodes one qubit: the code qubit sits in an
(n+1)-cycle with its n children. Concatenation appends a ring to every code
qubit and (virtually) measures it in Pauli-X; only the deepest layer is
photonic. Photons are labeled 1..n^N in emission order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import networkx as nx
import numpy as np

from ringrepeater.graphs import conjugate_basis, measure_graph, restrict_rows
from ringrepeater.paulis import Pauli, PauliOp
from ringrepeater.stabilizer import StabilizerTableau, graph_state


@dataclass(frozen=True)
class RingCodeSpec:
    """Identifies a concatenated ring code instance.

    n: unit ring size, N: concatenation depth (N=1 is the bare ring),
    switch_layer: depth at which fusions stop being adaptive (loss
    protection); layers above switch_layer fuse every code-qubit pair
    (error protection). Defaults to N, i.e. fully adaptive.
    """

    n: int = 4
    N: int = 1
    switch_layer: Optional[int] = None

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("unit ring size must be at least 3")
        if self.N < 1:
            raise ValueError("concatenation depth must be at least 1")
        sw = self.switch_layer if self.switch_layer is not None else self.N
        if not 1 <= sw <= self.N:
            raise ValueError("switch layer must satisfy 1 <= switch <= N")
        object.__setattr__(self, "switch_layer", sw)

    @property
    def photon_count(self) -> int:
        return self.n**self.N


@dataclass
class GraphSpec:
    """Photonic graph of the code after all virtual Pauli-X measurements.

    Vertex 0 is the anchor (the encoded qubit's carrier); photons are
    1..n^N in emission order. `tags` records residual local-Clifford frames
    left by the virtual measurements (empty for n=4), `virtual_layers` the
    bookkeeping of which code qubits were measured out per layer.
    """

    spec: RingCodeSpec
    graph: nx.Graph
    anchor: int
    photons: list[int]
    tags: dict[int, str]
    virtual_layers: list[list[str]]

    @property
    def adjacency(self) -> dict[int, list[int]]:
        return {v: sorted(self.graph.neighbors(v)) for v in sorted(self.graph.nodes)}

    def emission_order(self) -> list[int]:
        return list(self.photons)

    def to_json(self) -> str:
        payload = {
            "n": self.spec.n,
            "depth": self.spec.N,
            "anchor": self.anchor,
            "photons": self.photons,
            "edges": sorted([sorted(e) for e in self.graph.edges]),
            "tags": {str(v): t for v, t in sorted(self.tags.items()) if t},
            "virtual_layers": self.virtual_layers,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


# -- layered (pre-measurement) construction ---------------------------------


def layered_graph(spec: RingCodeSpec):
    """Graph with explicit virtual code-qubit vertices.

    Returns (graph, anchor, virtuals in measurement order, photons in
    emission order); labels are strings.
    """
    g = nx.Graph()
    anchor = "a"
    g.add_node(anchor)
    virtuals: list[str] = []
    photons: list[str] = []

    def attach(parent: str, layer: int, prefix: str) -> None:
        kids = [f"{prefix}{k + 1}" for k in range(spec.n)]
        g.add_nodes_from(kids)
        g.add_edge(parent, kids[0])
        for a, b in zip(kids, kids[1:]):
            g.add_edge(a, b)
        g.add_edge(kids[-1], parent)
        if layer == spec.N:
            photons.extend(kids)
        else:
            for kid in kids:
                virtuals.append(kid)
                attach(kid, layer + 1, kid + ".")

    attach(anchor, 1, "p")
    return g, anchor, virtuals, photons


def build_concatenated_ring(spec: RingCodeSpec) -> GraphSpec:
    """Flatten the layered construction by virtual Pauli-X measurements.

    Special neighbors are chosen deterministically, preferring virtual
    vertices so byproduct frames land on qubits that get measured out
    themselves; for n=4 the result carries no residual photon tags and
    matches the tableau oracle exactly.
    """
    g, anchor, virtuals, photons = layered_graph(spec)
    tags: dict[str, str] = {}
    virtual_set = set(virtuals)
    layer_record: dict[int, list[str]] = {}
    for v in virtuals:
        layer_record.setdefault(v.count(".") + 1, []).append(v)
        basis = conjugate_basis(tags.pop(v, ""), Pauli.X)
        nbs = sorted(g.neighbors(v), key=str)
        virt_nbs = [u for u in nbs if u in virtual_set and u in g]
        special = virt_nbs[0] if virt_nbs else (nbs[0] if nbs else None)
        measure_graph(g, tags, v, basis, special=special)

    relabel = {anchor: 0}
    for i, p in enumerate(photons):
        relabel[p] = i + 1
    out = nx.relabel_nodes(g, relabel, copy=True)
    return GraphSpec(
        spec=spec,
        graph=out,
        anchor=0,
        photons=[relabel[p] for p in photons],
        tags={relabel[v]: t for v, t in tags.items() if t and v in relabel},
        virtual_layers=[layer_record.get(layer, []) for layer in range(1, spec.N)],
    )


def code_target_rows(spec: RingCodeSpec) -> list[tuple[int, int, int]]:
    """Exact stabilizer rows of the code state on (anchor, photons).

    Builds the layered graph state on real qubits and projects every virtual
    code qubit onto the +1 eigenspace of Pauli-X; column 0 is the anchor and
    1..n^N the photons in emission order. This is the oracle the generation
    sequence must reproduce.
    """
    g, anchor, virtuals, photons = layered_graph(spec)
    order = [anchor] + virtuals + photons
    idx = {v: i for i, v in enumerate(order)}
    nq = len(order)
    adj = np.zeros((nq, nq), dtype=bool)
    for a, b in g.edges:
        adj[idx[a], idx[b]] = adj[idx[b], idx[a]] = True
    t = graph_state(adj)
    for v in virtuals:
        t.measure_operator(PauliOp.single(nq, idx[v], Pauli.X), force=+1)
    keep = [idx[anchor]] + [idx[p] for p in photons]
    rows = [t.rows[nq + i] for i in range(nq)]
    return restrict_rows(rows, keep, nq)


# -- resource counting -------------------------------------------------------


def resource_counts(spec: RingCodeSpec) -> tuple[int, int, int]:
    """(f_CZ, f_M, f_P): spin-spin gates, spin measurements, photon emissions.

    N=1 is read off the unit-ring build (two entangling gates, one emitter
    measurement); deeper layers follow f_CZ(N) = n f_CZ(N-1) + n + 1 and
    f_M(N) = n f_M(N-1) + 1, with f_P(N) = n^N.
    """
    n, N = spec.n, spec.N
    f_cz, f_m = 2, 1
    for _ in range(2, N + 1):
        f_cz = n * f_cz + n + 1
        f_m = n * f_m + 1
    return f_cz, f_m, n**N


# -- generation sequence -----------------------------------------------------


@dataclass(frozen=True)
class GenOp:
    """One emitter operation; kind in {init, emit, cz, h, measure}.

    For measure ops, `sdg_targets` lists the qubits receiving the
    deterministic S-dagger byproduct fix of a Pauli-Y spin measurement
    (its graph neighbors at that point).
    """

    kind: str
    spins: tuple[str, ...] = ()
    photon: Optional[int] = None
    basis: Optional[Pauli] = None
    sdg_targets: tuple = ()


@dataclass
class GenerationSequence:
    spec: RingCodeSpec
    ops: list[GenOp]
    spins: list[str]
    two_qubit_line: bool = False

    @property
    def cz_count(self) -> int:
        return sum(op.kind == "cz" for op in self.ops)

    @property
    def measure_count(self) -> int:
        return sum(op.kind == "measure" for op in self.ops)

    @property
    def emit_count(self) -> int:
        return sum(op.kind == "emit" for op in self.ops)

    @property
    def hadamard_count(self) -> int:
        return sum(op.kind == "h" for op in self.ops)

    def to_json(self) -> str:
        def enc(op: GenOp):
            d: dict = {"op": op.kind}
            if op.spins:
                d["spins"] = list(op.spins)
            if op.photon is not None:
                d["photon"] = op.photon
            if op.basis is not None:
                d["basis"] = op.basis.value
            if op.sdg_targets:
                d["sdg_targets"] = [str(t) for t in op.sdg_targets]
            return d

        return json.dumps(
            {
                "n": self.spec.n,
                "depth": self.spec.N,
                "two_qubit_line": self.two_qubit_line,
                "spins": self.spins,
                "ops": [enc(op) for op in self.ops],
            },
            indent=2,
        )


def generation_sequence(spec: RingCodeSpec, as_two_qubit_line: bool = False) -> GenerationSequence:
    """Emitter program producing the code state on one (or two) rings.

    One optically active spin `e` emits all photons; memory spins m1..mN
    hold the concatenation layers. Each unit ring is bracketed by two
    anchor-emitter entangling gates and closed by a Pauli-Y measurement of
    the emitter. Between the n sub-builds of a layer, the builder spin hands
    its finished code qubit off through the freshly reset emitter (a CNOT
    onto it followed by a Hadamard, mirroring photon emission at the code
    level); the layer closes with a Pauli-X measurement of the builder.
    """
    n, N = spec.n, spec.N
    spins = [f"m{i + 1}" for i in range(N)] + ["e"]
    ops: list[GenOp] = [GenOp("init", (s,)) for s in spins]
    photon_counter = 0

    def build(anchor_i: int, depth: int) -> None:
        nonlocal photon_counter
        anchor = spins[anchor_i]
        if depth == 1:
            ops.append(GenOp("cz", (anchor, "e")))
            for _ in range(n):
                photon_counter += 1
                ops.append(GenOp("emit", ("e",), photon=photon_counter))
            ops.append(GenOp("cz", (anchor, "e")))
            ops.append(GenOp("measure", ("e",), basis=Pauli.Y,
                             sdg_targets=(photon_counter, anchor)))
            return
        builder = spins[anchor_i + 1]
        ops.append(GenOp("cz", (anchor, builder)))
        for j in range(n):
            build(anchor_i + 1, depth - 1)
            if j < n - 1:
                ops.append(GenOp("h", ("e",)))
                ops.append(GenOp("cz", (builder, "e")))
                ops.append(GenOp("h", ("e",)))
                ops.append(GenOp("h", (builder,)))
        ops.append(GenOp("cz", (anchor, builder)))
        ops.append(GenOp("measure", (builder,), basis=Pauli.X))

    build(0, N)
    if as_two_qubit_line:
        # Join a second encoded ring into a two-qubit line: the finished
        # line qubit is emitted from the top memory spin through the fresh
        # emitter (same handoff as a code-qubit emission), the second ring
        # is generated, and the top spin is measured out in Pauli-X.
        ops.append(GenOp("h", ("e",)))
        ops.append(GenOp("cz", ("m1", "e")))
        ops.append(GenOp("h", ("e",)))
        ops.append(GenOp("h", ("m1",)))
        build(0, N)
        ops.append(GenOp("measure", ("m1",), basis=Pauli.X))
    return GenerationSequence(spec=spec, ops=ops, spins=spins, two_qubit_line=as_two_qubit_line)


def execute_generation(
    seq: GenerationSequence, rng: Optional[np.random.Generator] = None
) -> tuple[StabilizerTableau, dict]:
    """Run a generation sequence on a fresh tableau with feed-forward.

    Measurement outcomes are corrected onto the +1 branch and the
    deterministic S-dagger byproducts of Pauli-Y spin measurements applied
    immediately, so the final state is seed-independent. Returns
    (tableau, layout) with photon labels and spin names mapped to qubits.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    num_photons = seq.emit_count
    spins = seq.spins
    nq = num_photons + len(spins)
    t = StabilizerTableau(nq)
    spin_idx = {s: num_photons + i for i, s in enumerate(spins)}
    photon_idx: dict[int, int] = {}
    next_photon = 0

    def qubit(ref) -> int:
        return spin_idx[ref] if isinstance(ref, str) else photon_idx[ref]

    def reset_to_plus(q: int) -> None:
        value, _, _ = t.measure_single(q, Pauli.Z, rng)
        if value == -1:
            t.apply_gate("X", q)
        t.apply_gate("H", q)

    for s in spins:
        t.apply_gate("H", spin_idx[s])  # |0> -> |+>
    for op in seq.ops:
        if op.kind == "init":
            continue
        if op.kind == "emit":
            p = next_photon
            next_photon += 1
            photon_idx[op.photon] = p
            q = spin_idx[op.spins[0]]
            t.apply_gate("CNOT", q, p)
            t.apply_gate("H", q)
        elif op.kind == "cz":
            t.apply_gate("CZ", spin_idx[op.spins[0]], spin_idx[op.spins[1]])
        elif op.kind == "h":
            t.apply_gate("H", spin_idx[op.spins[0]])
        elif op.kind == "measure":
            q = spin_idx[op.spins[0]]
            value, _, corr = t.measure_single(q, op.basis, rng)
            if value == -1:
                if corr is None:
                    raise AssertionError("deterministic -1 spin measurement")
                t.apply_pauli_op(corr)
            for tgt in op.sdg_targets:
                for g in ("S", "S", "S"):
                    t.apply_gate(g, qubit(tgt))
            reset_to_plus(q)
        else:
            raise ValueError(op.kind)
    return t, {"photons": photon_idx, "spins": spin_idx}


def generated_state_rows(
    seq: GenerationSequence, rng: Optional[np.random.Generator] = None
) -> list[tuple[int, int, int]]:
    """Stabilizer rows of the generated state on (anchor m1, photons).

    Column 0 is the anchor, columns 1..P the photons in emission order,
    directly comparable with code_target_rows.
    """
    t, layout = execute_generation(seq, rng)
    photons = [layout["photons"][p + 1] for p in range(seq.emit_count)]
    keep = [layout["spins"]["m1"]] + photons
    rows = [t.rows[t.n + i] for i in range(t.n)]
    return restrict_rows(rows, keep, t.n)


# -- logical operators and measurement patterns ------------------------------


@dataclass(frozen=True)
class MeasurementPattern:
    """Single-qubit basis assignment realizing a logical Pauli operator.

    bases[k] is the basis for code qubit k+1 (None = skip); `operator` is
    the exact signed Pauli representative the measured product reproduces.
    """

    logical: Pauli
    bases: tuple[Optional[Pauli], ...]
    operator: PauliOp

    @property
    def sign(self) -> int:
        return self.operator.sign

    @property
    def measured(self) -> tuple[int, ...]:
        return tuple(k + 1 for k, b in enumerate(self.bases) if b is not None)


@lru_cache(maxsize=None)
def bare_code_ops() -> dict:
    """Stabilizers and logicals of the n=4 unit ring code (qubits 0..3)."""
    s2 = PauliOp.from_string("ZXZI")
    s3 = PauliOp.from_string("IZXZ")
    s14 = PauliOp.from_string("XZZX")
    xbar = PauliOp.from_string("ZIIZ")
    zbar = PauliOp.from_string("XZII")
    ybar = PauliOp(4, 0, 0, 1) * xbar * zbar  # logical Y = i XZ
    return {"stabilizers": [s2, s3, s14], "X": xbar, "Z": zbar, "Y": ybar}


@lru_cache(maxsize=None)
def pauli_patterns(logical: Pauli) -> tuple[MeasurementPattern, MeasurementPattern]:
    """The two disjoint weight-2 patterns measuring a bare-ring logical Pauli.

    X -> Z1 Z4 and Y2 Y3; Y -> Y1 X3 and X2 Y4; Z -> X1 Z2 and Z3 X4,
    with exact signs from the code algebra.
    """
    logical = Pauli(logical)
    ops = bare_code_ops()
    base = ops[logical.value]
    s2, s3, s14 = ops["stabilizers"]
    multipliers = {
        Pauli.X: (PauliOp.identity(4), s2 * s3),
        Pauli.Y: (s3, s2 * s14),
        Pauli.Z: (PauliOp.identity(4), s14),
    }
    first_support = {Pauli.X: (0, 3), Pauli.Y: (0, 2), Pauli.Z: (0, 1)}
    pats = []
    for mult in multipliers[logical]:
        rep = base * mult
        bases: list[Optional[Pauli]] = [None] * 4
        for q in rep.support:
            bases[q] = rep.letter(q)
        pats.append(MeasurementPattern(logical, tuple(bases), rep))
    if pats[0].operator.support != first_support[logical]:
        pats.reverse()
    return pats[0], pats[1]


@lru_cache(maxsize=None)
def pattern_slot_bases(logical: Pauli) -> tuple:
    """Per-slot bases measuring both patterns of a logical Pauli at once."""
    p1, p2 = pauli_patterns(logical)
    bases: list[Optional[Pauli]] = [None] * 4
    for pat in (p1, p2):
        for k, b in enumerate(pat.bases):
            if b is not None:
                bases[k] = b
    return tuple(bases)


# -- fusion strategy ----------------------------------------------------------


#: Failure basis configured for the k-th fusion attempt (slots 1..4).
FAILURE_BASES = (Pauli.X, Pauli.Y, Pauli.X, Pauli.Y)

#: Single-qubit bases on the remaining slots after the first fusion success,
#: keyed by the prefix of earlier attempt outcomes ('F' failed, 'L' lost).
#: Derived from the code algebra so that the measured operators complete
#: logical XX and ZZ parity representatives on every branch that can succeed.
BRANCH_SINGLES = {
    (): {2: Pauli.Z, 3: Pauli.X, 4: Pauli.Z},
    ("F",): {3: Pauli.Y, 4: Pauli.Y},
    ("L",): {3: Pauli.Y, 4: Pauli.Y},
    ("F", "F"): {4: Pauli.Z},
    ("F", "L"): {4: Pauli.Z},
    ("L", "F"): {4: Pauli.X},
    ("L", "L"): {4: Pauli.X},
    ("F", "F", "F"): {},
    ("F", "F", "L"): {},
    ("F", "L", "F"): {},
    ("F", "L", "L"): {},
    ("L", "F", "F"): {},
    ("L", "F", "L"): {},
    ("L", "L", "F"): {},
    ("L", "L", "L"): {},
}


@dataclass(frozen=True)
class FusionStrategy:
    """Decision tree for a logical fusion between two rings.

    Adaptive layers (depth <= switch_layer) fuse code-qubit pairs in
    emission order until one succeeds, then complete the logical XX and ZZ
    parities with single-qubit measurements on the remaining pairs.
    Fuse-all layers (depth > switch_layer) attempt every pair, switching to
    single-qubit measurements only after a failure or loss, which yields
    redundant parities usable for error detection.
    """

    spec: RingCodeSpec
    failure_bases: tuple = FAILURE_BASES

    def mode(self, layer: int) -> str:
        return "adaptive" if layer <= self.spec.switch_layer else "fuse_all"

    def singles_bases(self, prefix: tuple) -> dict[int, Pauli]:
        return dict(BRANCH_SINGLES[tuple(prefix)])

    def describe(self) -> dict:
        return {
            "failure_bases": [b.value for b in self.failure_bases],
            "branch_singles": {
                "".join(k) or "-": {slot: b.value for slot, b in v.items()}
                for k, v in BRANCH_SINGLES.items()
            },
            "switch_layer": self.spec.switch_layer,
            "modes": {layer: self.mode(layer) for layer in range(1, self.spec.N + 1)},
        }


def fusion_strategy(spec: RingCodeSpec) -> FusionStrategy:
    if spec.n != 4:
        raise ValueError("the fusion decision tree is defined for n=4 rings")
    return FusionStrategy(spec=spec)


# -- flattened (photon-level) code operators ----------------------------------


@lru_cache(maxsize=None)
def lifted_code_ops(depth: int) -> dict:
    """Stabilizers and logical operators of a depth-`depth` ring code,
    written on its 4**depth photons (depth 0 is a bare photon).

    Ring-level operators are lifted by replacing each code-qubit letter
    with the sub-code's logical representative, with exact signs.
    """
    if depth == 0:
        return {
            "stabilizers": (),
            "X": PauliOp.from_string("X"),
            "Y": PauliOp.from_string("Y"),
            "Z": PauliOp.from_string("Z"),
        }
    sub = lifted_code_ops(depth - 1)
    q = 4 ** (depth - 1)
    nq = 4 * q

    def lift(op4: PauliOp) -> PauliOp:
        # i^phase X^x Z^z per slot, with the slot letters replaced by the
        # sub-code's logical X/Z representatives (keeps phases exact)
        out = PauliOp(nq, 0, 0, op4.phase)
        for slot in range(4):
            if (op4.x >> slot) & 1:
                out = out * sub["X"].embed(nq, slot * q)
            if (op4.z >> slot) & 1:
                out = out * sub["Z"].embed(nq, slot * q)
        return out

    stabs = []
    for slot in range(4):
        for s in sub["stabilizers"]:
            stabs.append(s.embed(nq, slot * q))
    ring = bare_code_ops()
    for s in ring["stabilizers"]:
        stabs.append(lift(s))
    return {
        "stabilizers": tuple(stabs),
        "X": lift(ring["X"]),
        "Y": lift(ring["Y"]),
        "Z": lift(ring["Z"]),
    }


def encoded_pair_generators(spec: RingCodeSpec) -> list[PauliOp]:
    """Generators of two rings holding a logical Bell pair.

    Ring A occupies photons 0..Q-1, ring B Q..2Q-1; the pair is stabilized
    by both rings' code groups together with logical XX and ZZ, so a
    noiseless logical fusion must report both parities +1.
    """
    ops = lifted_code_ops(spec.N)
    q = spec.photon_count
    nq = 2 * q
    gens = [s.embed(nq, 0) for s in ops["stabilizers"]]
    gens += [s.embed(nq, q) for s in ops["stabilizers"]]
    gens.append(ops["X"].embed(nq, 0) * ops["X"].embed(nq, q))
    gens.append(ops["Z"].embed(nq, 0) * ops["Z"].embed(nq, q))
    return gens

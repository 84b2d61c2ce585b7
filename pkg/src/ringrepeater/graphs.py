"""Graph-state transformation rules and tableau <-> graph conversion.

Single-qubit measurements act on graphs by local complementation (Hein
rules); measuring X leaves a Hadamard-type byproduct on the chosen special
neighbor, measuring Y a sqrt(Z)-type byproduct on every neighbor. Byproducts
are tracked as coarse per-vertex tags ('H', 'Q', 'R' for Hadamard, sqrt(X),
sqrt(Z), acting on Pauli labels up to sign).
"""

from __future__ import annotations

from typing import Hashable, Iterable, Optional

import networkx as nx

from ringrepeater.paulis import Pauli


_TAG_MAPS = {
    "H": {"X": "Z", "Z": "X", "Y": "Y"},
    "Q": {"X": "X", "Y": "Z", "Z": "Y"},
    "R": {"X": "Y", "Y": "X", "Z": "Z"},
}


def conjugate_basis(tag: str, basis: Pauli) -> Pauli:
    """Pauli label measured physically on a tagged vertex, up to sign."""
    label = Pauli(basis).value
    for gate in reversed(tag):
        label = _TAG_MAPS[gate][label]
    return Pauli(label)


def local_complement(g: nx.Graph, v: Hashable) -> None:
    nb = list(g.neighbors(v))
    for i in range(len(nb)):
        for j in range(i + 1, len(nb)):
            if g.has_edge(nb[i], nb[j]):
                g.remove_edge(nb[i], nb[j])
            else:
                g.add_edge(nb[i], nb[j])


def measure_graph(g: nx.Graph, tags: dict, v: Hashable, basis: Pauli,
                  special: Optional[Hashable] = None) -> None:
    """Remove vertex v as if measured in `basis` (graph frame), updating tags."""
    basis = Pauli(basis)
    if basis is Pauli.Z or g.degree[v] == 0:
        g.remove_node(v)
        return
    if basis is Pauli.Y:
        local_complement(g, v)
        for nb in g.neighbors(v):
            tags[nb] = tags.get(nb, "") + "R"
        g.remove_node(v)
        return
    if basis is Pauli.X:
        if special is None or not g.has_edge(v, special):
            special = sorted(g.neighbors(v), key=str)[0]
        local_complement(g, special)
        local_complement(g, v)
        g.remove_node(v)
        local_complement(g, special)
        tags[special] = tags.get(special, "") + "H"
        return
    raise ValueError(f"cannot measure basis {basis!r} on a graph")


# -- exact stabilizer-row helpers (bitmask rows: [x, z, phase]) -------------


def _mul(a: list[int], b: list[int]) -> list[int]:
    return [a[0] ^ b[0], a[1] ^ b[1], (a[2] + b[2] + 2 * (a[1] & b[0]).bit_count()) % 4]


def restrict_rows(rows: list[list[int]], keep: list[int], n: int) -> list[tuple[int, int, int]]:
    """Subgroup of <rows> supported on `keep`, columns remapped to 0..len(keep)-1.

    Requires the dropped qubits to be in product states relative to the kept
    ones (true after they have been measured out), so the supported subgroup
    has full rank on `keep`.
    """
    rows = [row[:] for row in rows]
    drop = [q for q in range(n) if q not in keep]
    rank = 0
    for q in drop:
        for part in (0, 1):
            mask = 1 << q
            sel = next((i for i in range(rank, len(rows)) if rows[i][part] & mask), None)
            if sel is None:
                continue
            rows[rank], rows[sel] = rows[sel], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i][part] & mask:
                    rows[i] = _mul(rows[i], rows[rank])
            rank += 1
    dropmask = 0
    for q in drop:
        dropmask |= 1 << q
    out = []
    for row in rows[rank:]:
        if (row[0] | row[1]) & dropmask:
            raise ValueError("dropped qubits are still entangled with kept ones")
        x = z = 0
        for new, old in enumerate(keep):
            if row[0] & (1 << old):
                x |= 1 << new
            if row[1] & (1 << old):
                z |= 1 << new
        out.append((x, z, row[2]))
    return out


def canonical_rows(rows: Iterable[tuple[int, int, int]], n: int) -> list[tuple[int, int, int]]:
    """Unique fully-reduced presentation of a stabilizer generator list."""
    rows = [list(r) for r in rows]
    rank = 0
    for col in range(2 * n):
        part, mask = col % 2, 1 << (col // 2)
        sel = next((i for i in range(rank, len(rows)) if rows[i][part] & mask), None)
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][part] & mask:
                rows[i] = _mul(rows[i], rows[rank])
        rank += 1
    return sorted(tuple(r) for r in rows)


def rows_to_graph(rows: Iterable[tuple[int, int, int]], n: int) -> tuple[nx.Graph, dict[int, str]]:
    """Graph form of a full-rank stabilizer list, up to recorded local ops.

    Returns (graph on vertices 0..n-1, per-vertex gate words applied during
    the reduction: 'H' and/or 'S'). Signs are ignored.
    """
    rows = [list(r) for r in rows]
    ops: dict[int, str] = {}

    def apply_h(q: int) -> None:
        b = 1 << q
        for row in rows:
            xb, zb = bool(row[0] & b), bool(row[1] & b)
            if xb and zb:
                row[2] = (row[2] + 2) % 4
            if xb != zb:
                row[0] ^= b
                row[1] ^= b
        ops[q] = ops.get(q, "") + "H"

    def apply_s(q: int) -> None:
        b = 1 << q
        for row in rows:
            if row[0] & b:
                row[2] = (row[2] + 1) % 4
                row[1] ^= b
        ops[q] = ops.get(q, "") + "S"

    rank = 0
    for q in range(n):
        mask = 1 << q
        sel = next((i for i in range(rank, len(rows)) if rows[i][0] & mask), None)
        if sel is None:
            apply_h(q)
            sel = next((i for i in range(rank, len(rows)) if rows[i][0] & mask), None)
            if sel is None:
                raise ValueError("rows do not describe a full-rank stabilizer state")
        rows[rank], rows[sel] = rows[sel], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][0] & mask:
                rows[i] = _mul(rows[i], rows[rank])
        rank += 1
    for q in range(n):
        if rows[q][1] & (1 << q):
            apply_s(q)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][1] & (1 << j):
                g.add_edge(i, j)
    for i in range(n):
        for j in range(n):
            expected = bool(rows[i][1] & (1 << j)) if i != j else False
            if i != j and bool(rows[j][1] & (1 << i)) != expected:
                raise ValueError("reduced Z part is not symmetric")
    return g, ops

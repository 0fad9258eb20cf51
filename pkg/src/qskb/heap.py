"""Finite heaps, group tables, and the heap <-> pointed-group correspondence."""

from __future__ import annotations

from .report import Report, ReportCollector, StructureError
from .tables import find_neutral, table_inverse


class GroupTable:
    """A finite group as an ordered carrier plus a total multiplication table."""

    def __init__(self, elements, mul):
        self.elements = tuple(str(e) for e in elements)
        self._eindex = {e: i for i, e in enumerate(self.elements)}
        if len(self._eindex) != len(self.elements):
            raise StructureError("duplicate group element identifiers")
        n = len(self.elements)
        mul = tuple(tuple(row) for row in mul)
        if len(mul) != n or any(len(row) != n for row in mul):
            raise StructureError("multiplication table is not square on the carrier")
        for row in mul:
            for v in row:
                if not 0 <= v < n:
                    raise StructureError("multiplication table entry out of range")
        self.mul = mul
        self.neutral = find_neutral(mul)

    def e(self, eid):
        try:
            return self._eindex[str(eid)]
        except KeyError:
            raise StructureError(f"unknown element {eid!r}")

    @property
    def order(self):
        return len(self.elements)

    def op(self, a, b):
        return self.mul[a][b]

    def inverse_table(self):
        return table_inverse(self.mul, self.neutral)

    def __eq__(self, other):
        return (
            isinstance(other, GroupTable)
            and self.elements == other.elements
            and self.mul == other.mul
        )

    def __hash__(self):
        return hash((self.elements, self.mul))

    def __repr__(self):
        return f"GroupTable({len(self.elements)} elements)"


def cyclic_group(n, names=None):
    """Z/n with elements named 0..n-1 unless names are given."""
    if names is None:
        names = [str(k) for k in range(n)]
    return GroupTable(names, [[(i + j) % n for j in range(n)] for i in range(n)])


def validate_group(G):
    """Unit, associativity, inverses; first failing instance per law."""
    col = ReportCollector()
    n = G.order
    ids = G.elements
    if G.neutral is None:
        col.add("neutral", (), "no two-sided neutral element")
        return col.report()
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if G.mul[G.mul[a][b]][c] != G.mul[a][G.mul[b][c]]:
                    col.add("associativity", (ids[a], ids[b], ids[c]))
                    break
            if col.seen("associativity"):
                break
        if col.seen("associativity"):
            break
    for a in range(n):
        if not any(G.mul[a][b] == G.neutral and G.mul[b][a] == G.neutral for b in range(n)):
            col.add("inverses", (ids[a],))
            break
    return col.report()


class Heap:
    """A finite set with a total ternary operation, stored as a nested tuple."""

    def __init__(self, carrier, ternary):
        self.carrier = tuple(str(c) for c in carrier)
        self._cindex = {c: i for i, c in enumerate(self.carrier)}
        if len(self._cindex) != len(self.carrier):
            raise StructureError("duplicate carrier identifiers")
        n = len(self.carrier)
        t = tuple(tuple(tuple(plane) for plane in row) for row in ternary)
        if len(t) != n or any(len(r) != n for r in t) or any(
            len(p) != n for r in t for p in r
        ):
            raise StructureError("ternary table is not total on the carrier")
        for r in t:
            for p in r:
                for v in p:
                    if not 0 <= v < n:
                        raise StructureError("ternary table entry out of range")
        self.ternary = t

    def e(self, cid):
        try:
            return self._cindex[str(cid)]
        except KeyError:
            raise StructureError(f"unknown element {cid!r}")

    @property
    def size(self):
        return len(self.carrier)

    def op(self, a, b, c):
        return self.ternary[a][b][c]

    def __eq__(self, other):
        return (
            isinstance(other, Heap)
            and self.carrier == other.carrier
            and self.ternary == other.ternary
        )

    def __hash__(self):
        return hash((self.carrier, self.ternary))

    def __repr__(self):
        return f"Heap({len(self.carrier)} elements)"


def validate_heap(H):
    """Mal'tsev pairs, then the associativity condition over all quintuples."""
    col = ReportCollector()
    n = H.size
    ids = H.carrier
    op = H.op
    for a in range(n):
        for b in range(n):
            if op(a, b, b) != a:
                col.add("maltsev-right", (ids[a], ids[b]), "<a,b,b> != a")
            if op(a, a, b) != b:
                col.add("maltsev-left", (ids[a], ids[b]), "<a,a,b> != b")
    done = False
    for a in range(n):
        for b in range(n):
            for c in range(n):
                left = op(a, b, c)
                for d in range(n):
                    for e in range(n):
                        if op(left, d, e) != op(a, b, op(c, d, e)):
                            col.add(
                                "associativity",
                                (ids[a], ids[b], ids[c], ids[d], ids[e]),
                            )
                            done = True
                            break
                    if done:
                        break
                if done:
                    break
            if done:
                break
        if done:
            break
    return col.report()


def heap_from_group(G):
    """<a,b,c> = a * b^-1 * c on the group's carrier."""
    rep = validate_group(G)
    if not rep.ok:
        raise StructureError(f"not a group: {rep}")
    inv = G.inverse_table()
    n = G.order
    tern = [
        [[G.mul[G.mul[a][inv[b]]][c] for c in range(n)] for b in range(n)]
        for a in range(n)
    ]
    return Heap(G.elements, tern)


def group_from_heap(H, b):
    """x + y = <x, b, y>; the basepoint b becomes the neutral element."""
    rep = validate_heap(H)
    if not rep.ok:
        raise StructureError(f"not a heap: {rep}")
    if not 0 <= b < H.size:
        raise StructureError(f"basepoint index {b} out of range")
    n = H.size
    return GroupTable(H.carrier, [[H.op(x, b, y) for y in range(n)] for x in range(n)])

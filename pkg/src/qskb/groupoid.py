"""Finite groupoids: validation, coarse groupoids, loop bundles, connectivity,
normal subgroupoids, and groupoid quotients.

Composition is stored in diagrammatic order: x·y is defined when tgt(x) = src(y).
"""

from __future__ import annotations

from dataclasses import dataclass

from .quiver import Quiver, QuiverMorphism
from .report import Report, ReportCollector, StructureError


class Groupoid:
    """A quiver with a partial composition table, unit loops, and inverses.

    The constructor enforces well-typedness only (compose defined exactly on
    consecutive pairs, unit and inv total); the axioms live in
    `validate_groupoid`.
    """

    def __init__(self, base, compose, unit, inv):
        self.base = base
        m = base.n_arrows
        self.unit = tuple(unit)
        self.inv = tuple(inv)
        if len(self.unit) != base.n_vertices or len(self.inv) != m:
            raise StructureError("unit/inverse tables are not total")
        for u in self.unit:
            if not 0 <= u < m:
                raise StructureError("unit table entry out of range")
        for x in self.inv:
            if not 0 <= x < m:
                raise StructureError("inverse table entry out of range")
        table = dict(compose)
        for (x, y), z in table.items():
            if not (0 <= x < m and 0 <= y < m and 0 <= z < m):
                raise StructureError("composition entry out of range")
            if base.tgt[x] != base.src[y]:
                raise StructureError(
                    f"composition defined on non-consecutive pair "
                    f"({base.arrows[x]}, {base.arrows[y]})"
                )
        for x, y in base.composable_pairs():
            if (x, y) not in table:
                raise StructureError(
                    f"composition missing on consecutive pair "
                    f"({base.arrows[x]}, {base.arrows[y]})"
                )
        self.table = table

    # quiver passthroughs
    @property
    def vertices(self):
        return self.base.vertices

    @property
    def arrows(self):
        return self.base.arrows

    @property
    def src(self):
        return self.base.src

    @property
    def tgt(self):
        return self.base.tgt

    @property
    def n_vertices(self):
        return self.base.n_vertices

    @property
    def n_arrows(self):
        return self.base.n_arrows

    def v(self, vid):
        return self.base.v(vid)

    def a(self, aid):
        return self.base.a(aid)

    def star(self, v):
        return self.base.star(v)

    def is_loop(self, x):
        return self.base.is_loop(x)

    def mul(self, x, y):
        try:
            return self.table[(x, y)]
        except KeyError:
            raise StructureError(
                f"arrows {self.arrows[x]} and {self.arrows[y]} are not consecutive"
            )

    def mul_many(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = self.mul(out, x)
        return out

    def loops(self, v=None):
        if v is None:
            return tuple(x for x in range(self.n_arrows) if self.is_loop(x))
        return tuple(x for x in self.star(v) if self.tgt[x] == v)

    def __eq__(self, other):
        return (
            isinstance(other, Groupoid)
            and self.base == other.base
            and self.table == other.table
            and self.unit == other.unit
            and self.inv == other.inv
        )

    def __hash__(self):
        return hash((self.base, tuple(sorted(self.table.items())), self.unit, self.inv))

    def __repr__(self):
        return f"Groupoid({self.n_vertices} vertices, {self.n_arrows} arrows)"


def validate_groupoid(G):
    """Endpoint coherence, associativity, unit laws, inverse laws."""
    col = ReportCollector()
    q = G.base
    ids = q.arrows
    for (x, y), z in sorted(G.table.items()):
        if q.src[z] != q.src[x] or q.tgt[z] != q.tgt[y]:
            col.add("endpoint", (ids[x], ids[y]), "composite has wrong endpoints")
            break
    for v in range(q.n_vertices):
        u = G.unit[v]
        if q.src[u] != v or q.tgt[u] != v:
            col.add("unit-loop", (q.vertices[v],), "unit is not a loop at its vertex")
    if col.seen("endpoint") or col.seen("unit-loop"):
        return col.report()
    done = False
    for x in range(q.n_arrows):
        for y in q.star(q.tgt[x]):
            xy = G.table[(x, y)]
            for z in q.star(q.tgt[y]):
                if G.table[(xy, z)] != G.table[(x, G.table[(y, z)])]:
                    col.add("associativity", (ids[x], ids[y], ids[z]))
                    done = True
                    break
            if done:
                break
        if done:
            break
    for x in range(q.n_arrows):
        if G.table[(x, G.unit[q.tgt[x]])] != x:
            col.add("right-unit", (ids[x],))
            break
    for x in range(q.n_arrows):
        if G.table[(G.unit[q.src[x]], x)] != x:
            col.add("left-unit", (ids[x],))
            break
    for x in range(q.n_arrows):
        xi = G.inv[x]
        if q.src[xi] != q.tgt[x] or q.tgt[xi] != q.src[x]:
            col.add("inverse-endpoints", (ids[x],))
            break
        if G.table[(x, xi)] != G.unit[q.src[x]] or G.table[(xi, x)] != G.unit[q.tgt[x]]:
            col.add("inverses", (ids[x],))
            break
    return col.report()


def build_groupoid(base, compose):
    """Derive units and inverses from a composition table, then construct.

    Fails with StructureError when no unit/inverse candidates exist; the
    resulting structure still needs `validate_groupoid`.
    """
    units = []
    for v in range(base.n_vertices):
        cands = [
            u
            for u in base.star(v)
            if base.tgt[u] == v
            and all(compose[(u, y)] == y for y in base.star(v))
            and all(
                compose[(x, u)] == x
                for x in range(base.n_arrows)
                if base.tgt[x] == v
            )
        ]
        if not cands:
            raise StructureError(f"no unit loop at vertex {base.vertices[v]}")
        units.append(cands[0])
    invs = []
    for x in range(base.n_arrows):
        cands = [
            y
            for y in base.star(base.tgt[x])
            if base.tgt[y] == base.src[x]
            and compose[(x, y)] == units[base.src[x]]
            and compose[(y, x)] == units[base.tgt[x]]
        ]
        if not cands:
            raise StructureError(f"no inverse for arrow {base.arrows[x]}")
        invs.append(cands[0])
    return Groupoid(base, compose, units, invs)


def coarse_groupoid(vertex_ids):
    """One arrow [a,b] between every ordered pair; [a,b]·[b,c] = [a,c]."""
    vertices = tuple(str(v) for v in vertex_ids)
    if not vertices:
        raise StructureError("coarse groupoid needs a nonempty vertex set")
    arrows = [(f"[{a},{b}]", a, b) for a in vertices for b in vertices]
    base = Quiver(vertices, arrows)
    n = len(vertices)

    def idx(i, j):
        return i * n + j

    compose = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                compose[(idx(i, j), idx(j, k))] = idx(i, k)
    unit = [idx(i, i) for i in range(n)]
    inv = [idx(j, i) for i in range(n) for j in range(n)]
    return Groupoid(base, compose, unit, inv)


def group_groupoid(G, vertex="*"):
    """A group table viewed as a one-vertex groupoid."""
    from .heap import validate_group

    rep = validate_group(G)
    if not rep.ok:
        raise StructureError(f"not a group: {rep}")
    base = Quiver([vertex], [(e, vertex, vertex) for e in G.elements])
    n = G.order
    compose = {(i, j): G.mul[i][j] for i in range(n) for j in range(n)}
    return Groupoid(base, compose, [G.neutral], G.inverse_table())


@dataclass(frozen=True)
class Subgroupoid:
    """A vertex subset and arrow subset of a parent groupoid."""

    parent: Groupoid
    vertices: frozenset
    arrows: frozenset

    @classmethod
    def from_arrows(cls, G, arrow_ids, vertex_ids=None):
        arrows = frozenset(G.a(a) for a in arrow_ids)
        if vertex_ids is None:
            verts = frozenset(G.src[x] for x in arrows) | frozenset(
                G.tgt[x] for x in arrows
            )
        else:
            verts = frozenset(G.v(v) for v in vertex_ids)
        return cls(G, verts, arrows)

    def arrow_ids(self):
        return tuple(self.parent.arrows[x] for x in sorted(self.arrows))

    def vertex_ids(self):
        return tuple(self.parent.vertices[v] for v in sorted(self.vertices))

    def is_wide(self):
        return len(self.vertices) == self.parent.n_vertices

    def closure_report(self):
        """Check the subset is a subgroupoid of the parent."""
        G = self.parent
        col = ReportCollector()
        for x in sorted(self.arrows):
            if G.src[x] not in self.vertices or G.tgt[x] not in self.vertices:
                col.add("endpoints", (G.arrows[x],), "arrow leaves the vertex subset")
        for v in sorted(self.vertices):
            if G.unit[v] not in self.arrows:
                col.add("units", (G.vertices[v],), "missing unit")
        for x in sorted(self.arrows):
            if G.inv[x] not in self.arrows:
                col.add("inverse-closure", (G.arrows[x],))
            for y in sorted(self.arrows):
                if G.tgt[x] == G.src[y] and G.table[(x, y)] not in self.arrows:
                    col.add("composition-closure", (G.arrows[x], G.arrows[y]))
        return col.report()

    def is_subgroupoid(self):
        return self.closure_report().ok


def loop_bundle(G):
    """The wide subgroupoid of all loops."""
    return Subgroupoid(
        G,
        frozenset(range(G.n_vertices)),
        frozenset(x for x in range(G.n_arrows) if G.is_loop(x)),
    )


def units_subgroupoid(G):
    return Subgroupoid(G, frozenset(range(G.n_vertices)), frozenset(G.unit))


def whole_subgroupoid(G):
    return Subgroupoid(G, frozenset(range(G.n_vertices)), frozenset(range(G.n_arrows)))


def connected_components(G):
    """Partition of vertex indices; blocks ordered by least vertex."""
    parent = list(range(G.n_vertices))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for x in range(G.n_arrows):
        a, b = find(G.src[x]), find(G.tgt[x])
        if a != b:
            parent[max(a, b)] = min(a, b)
    blocks = {}
    for v in range(G.n_vertices):
        blocks.setdefault(find(v), []).append(v)
    return tuple(tuple(blocks[r]) for r in sorted(blocks))


def is_connected(G):
    return len(connected_components(G)) == 1


def is_normal_subgroupoid(G, I):
    """Wide, closed, and stable under conjugation of loops along every arrow."""
    col = ReportCollector()
    closure = I.closure_report()
    if not closure.ok:
        col.add("not-a-subgroupoid", closure.failures[0].witness, closure.failures[0].law)
        return col.report()
    if not I.is_wide():
        missing = next(
            v for v in range(G.n_vertices) if v not in I.vertices
        )
        col.add("wide", (G.vertices[missing],), "vertex not in the subgroupoid")
        return col.report()
    for g in range(G.n_arrows):
        lam = G.src[g]
        for ell in sorted(I.arrows):
            if G.src[ell] == lam and G.tgt[ell] == lam:
                conj = G.mul_many(G.inv[g], ell, g)
                if conj not in I.arrows:
                    col.add("loop-conjugation", (G.arrows[g], G.arrows[ell]))
                    return col.report()
    return col.report()


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, v):
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def quotient_groupoid(G, I):
    """Quotient by a normal subgroupoid; returns (quotient, projection).

    Vertices are I-connectivity classes, arrows the classes of x ~ i·x·j for
    i, j in I; representatives are the least identifiers per class, so the
    output is reproducible.  Well-definedness of the induced composition is
    re-verified exhaustively.
    """
    rep = is_normal_subgroupoid(G, I)
    if not rep.ok:
        raise StructureError(f"not a normal subgroupoid: {rep}")
    uf = _UnionFind(G.n_vertices)
    for x in sorted(I.arrows):
        uf.union(G.src[x], G.tgt[x])
    vclass = [uf.find(v) for v in range(G.n_vertices)]
    vreps = sorted(set(vclass))

    # arrow classes: closure of x under i·x and x·j with i, j in I
    auf = _UnionFind(G.n_arrows)
    for x in range(G.n_arrows):
        for i in sorted(I.arrows):
            if G.tgt[i] == G.src[x]:
                auf.union(x, G.mul(i, x))
            if G.src[i] == G.tgt[x]:
                auf.union(x, G.mul(x, i))
    aclass = [auf.find(x) for x in range(G.n_arrows)]
    areps = sorted(set(aclass))
    members = {r: [x for x in range(G.n_arrows) if aclass[x] == r] for r in areps}

    arrows = [
        (G.arrows[r], G.vertices[vclass[G.src[r]]], G.vertices[vclass[G.tgt[r]]])
        for r in areps
    ]
    base = Quiver([G.vertices[v] for v in vreps], arrows)
    rindex = {r: k for k, r in enumerate(areps)}

    def connector(a, b):
        for i in sorted(I.arrows):
            if G.src[i] == a and G.tgt[i] == b:
                return i
        return None

    compose = {}
    for kx, rx in enumerate(areps):
        for ky, ry in enumerate(areps):
            if vclass[G.tgt[rx]] != vclass[G.src[ry]]:
                continue
            i = connector(G.tgt[rx], G.src[ry])
            z = G.mul_many(rx, i, ry)
            compose[(kx, ky)] = rindex[aclass[z]]
            # exhaustive well-definedness over all representative choices
            # and all connecting arrows of I
            for x in members[rx]:
                for y in members[ry]:
                    for j in sorted(I.arrows):
                        if G.src[j] != G.tgt[x] or G.tgt[j] != G.src[y]:
                            continue
                        if aclass[G.mul_many(x, j, y)] != aclass[z]:
                            raise StructureError(
                                "quotient composition is not well-defined at "
                                f"({G.arrows[x]}, {G.arrows[y]})"
                            )
    unit = [rindex[aclass[G.unit[v]]] for v in vreps]
    inv = [rindex[aclass[G.inv[r]]] for r in areps]
    Q = Groupoid(base, compose, unit, inv)
    check = validate_groupoid(Q)
    if not check.ok:
        raise StructureError(f"quotient failed validation: {check}")
    pi = QuiverMorphism(
        f1=tuple(rindex[aclass[x]] for x in range(G.n_arrows)),
        f0=tuple(vreps.index(vclass[v]) for v in range(G.n_vertices)),
        strong=all(len([v for v in range(G.n_vertices) if vclass[v] == r]) == 1 for r in vreps)
        and tuple(G.vertices[v] for v in vreps) == G.vertices,
    )
    return Q, pi


def groupoid_kernel_arrows(G, H, f):
    """Arrows of G whose image under f is a unit of H."""
    units = set(H.unit)
    return frozenset(x for x in range(G.n_arrows) if f.f1[x] in units)


def is_groupoid_morphism(f, G, H):
    """Quiver morphism that preserves composition (units/inverses follow)."""
    from .quiver import validate_quiver_morphism

    col = ReportCollector()
    qrep = validate_quiver_morphism(f, G.base, H.base)
    if not qrep.ok:
        return qrep
    for x, y in G.base.composable_pairs():
        if H.table[(f.f1[x], f.f1[y])] != f.f1[G.table[(x, y)]]:
            col.add("multiplicative", (G.arrows[x], G.arrows[y]))
            break
    return col.report()


def disjoint_union_groupoids(parts, tags=None):
    """Disjoint union; identifiers are prefixed with their component tag."""
    if tags is None:
        tags = [str(k) for k in range(len(parts))]
    vertices, arrows = [], []
    for tag, G in zip(tags, parts):
        vertices.extend(f"{tag}:{v}" for v in G.vertices)
        arrows.extend(
            (f"{tag}:{aid}", f"{tag}:{G.vertices[G.src[i]]}", f"{tag}:{G.vertices[G.tgt[i]]}")
            for i, aid in enumerate(G.arrows)
        )
    base = Quiver(vertices, arrows)
    compose, unit, inv = {}, [], []
    a_off = 0
    for tag, G in zip(tags, parts):
        for (x, y), z in G.table.items():
            compose[(x + a_off, y + a_off)] = z + a_off
        unit.extend(u + a_off for u in G.unit)
        inv.extend(i + a_off for i in G.inv)
        a_off += G.n_arrows
    return Groupoid(base, compose, unit, inv)

"""Semidirect-style products of quiver skew braces.

Three constructions live here:

* the classical product of a quiver skew brace with a heap, twisted by an
  action of the coarse groupoid on the brace;
* the two-sided (categorical) product driven by a triple of actions
  (conjugation ▷/◁ on loops, additive right conjugation φ, and the
  left-action restriction γ), glued along the balanced tensor product; and
* the one-sided special case for loop-bundle kernels.

Conventions, used consistently everywhere: ◁ is the standard right action
x◁h = h⁻¹▷x with (x◁h)◁k = x◁(hk); φ is a right action of the additive
star-groups, φ_{h+k} = φ_k∘φ_h; γ is multiplicative, γ_{hk} = γ_h∘γ_k, and
γ_h maps the star at tgt(h) to the star at src(h).
"""

from __future__ import annotations

from dataclasses import dataclass

from .brace import QuiverSkewBrace, braiding_from_qskb, validate_qskb
from .groupoid import (
    Groupoid,
    Subgroupoid,
    connected_components,
)
from .heap import Heap, validate_heap
from .quiver import Quiver, QuiverMorphism
from .report import Report, ReportCollector, StructureError


# ---------------------------------------------------------------------------
# restriction and disjoint union helpers


def sub_qskb(G, sub):
    """The quiver skew brace on a subgroupoid closed under the star additions."""
    rep = sub.closure_report()
    if not rep.ok:
        raise StructureError(f"not a subgroupoid: {rep}")
    verts = sorted(sub.vertices)
    arrs = sorted(sub.arrows)
    vmap = {v: i for i, v in enumerate(verts)}
    amap = {a: i for i, a in enumerate(arrs)}
    base = Quiver(
        [G.vertices[v] for v in verts],
        [
            (G.arrows[a], G.vertices[G.src[a]], G.vertices[G.tgt[a]])
            for a in arrs
        ],
    )
    compose = {
        (amap[x], amap[y]): amap[G.gpd.table[(x, y)]]
        for x in arrs
        for y in arrs
        if G.tgt[x] == G.src[y]
    }
    unit = [amap[G.gpd.unit[v]] for v in verts]
    inv = [amap[G.gpd.inv[a]] for a in arrs]
    gpd = Groupoid(base, compose, unit, inv)
    add = {}
    for a in arrs:
        for b in arrs:
            if G.src[a] == G.src[b]:
                s = G.plus(a, b)
                if s not in sub.arrows:
                    raise StructureError(
                        f"star addition escapes the subgroupoid at "
                        f"({G.arrows[a]}, {G.arrows[b]})"
                    )
                add[(amap[a], amap[b])] = amap[s]
    return QuiverSkewBrace(gpd, add)


def disjoint_union_qskb(parts, tags=None):
    """Disjoint union of quiver skew braces, identifiers prefixed by tag."""
    from .groupoid import disjoint_union_groupoids

    if tags is None:
        tags = [str(k) for k in range(len(parts))]
    gpd = disjoint_union_groupoids([p.gpd for p in parts], tags)
    add = {}
    off = 0
    for p in parts:
        for (a, b), c in p.add.items():
            add[(a + off, b + off)] = c + off
        off += p.n_arrows
    return QuiverSkewBrace(gpd, add)


# ---------------------------------------------------------------------------
# classical product (brace-by-heap, coarse groupoid acting)


@dataclass(frozen=True)
class ClassicalProductData:
    """A brace, a heap, and an action of the heap's coarse groupoid.

    `act` maps each ordered carrier pair (i, j) to a pair of lookup tables
    (vertex_map, arrow_map) describing an automorphism of the brace; units
    must act trivially and act[i,j] ∘ act[j,k] must equal act[i,k].
    """

    brace: QuiverSkewBrace
    heap: Heap
    act: dict

    def vact(self, i, j, v):
        return self.act[(i, j)][0][v]

    def aact(self, i, j, x):
        return self.act[(i, j)][1][x]


def trivial_action(G, H):
    ident = (tuple(range(G.n_vertices)), tuple(range(G.n_arrows)))
    n = H.size
    return {(i, j): ident for i in range(n) for j in range(n)}


def validate_classical_data(D):
    """Action well-formedness, functoriality, trivial units, module-algebra law."""
    col = ReportCollector()
    hrep = validate_heap(D.heap)
    if not hrep.ok:
        col.add("heap", hrep.failures[0].witness, hrep.failures[0].law)
        return col.report()
    grep = validate_qskb(D.brace)
    if not grep.ok:
        col.add("brace", grep.failures[0].witness, grep.failures[0].law)
        return col.report()
    G, H = D.brace, D.heap
    n = H.size
    for i in range(n):
        for j in range(n):
            if (i, j) not in D.act:
                col.add("action-total", (H.carrier[i], H.carrier[j]))
                return col.report()
            vmap, amap = D.act[(i, j)]
            if sorted(vmap) != list(range(G.n_vertices)) or sorted(amap) != list(
                range(G.n_arrows)
            ):
                col.add("action-bijective", (H.carrier[i], H.carrier[j]))
                return col.report()
    for i in range(n):
        vmap, amap = D.act[(i, i)]
        if tuple(vmap) != tuple(range(G.n_vertices)) or tuple(amap) != tuple(
            range(G.n_arrows)
        ):
            col.add("units-act-trivially", (H.carrier[i],))
            break
    for i in range(n):
        for j in range(n):
            for k in range(n):
                vij, aij = D.act[(i, j)]
                vjk, ajk = D.act[(j, k)]
                vik, aik = D.act[(i, k)]
                if any(vij[vjk[v]] != vik[v] for v in range(G.n_vertices)) or any(
                    aij[ajk[x]] != aik[x] for x in range(G.n_arrows)
                ):
                    col.add(
                        "action-functorial",
                        (H.carrier[i], H.carrier[j], H.carrier[k]),
                    )
                    break
            if col.seen("action-functorial"):
                break
        if col.seen("action-functorial"):
            break
    # each act[i,j] is a groupoid automorphism
    done = False
    for i in range(n):
        for j in range(n):
            vmap, amap = D.act[(i, j)]
            for x in range(G.n_arrows):
                if (
                    G.src[amap[x]] != vmap[G.src[x]]
                    or G.tgt[amap[x]] != vmap[G.tgt[x]]
                ):
                    col.add(
                        "action-quiver", (H.carrier[i], H.carrier[j], G.arrows[x])
                    )
                    done = True
                    break
            if done:
                break
            for x, y in G.gpd.base.composable_pairs():
                if amap[G.gpd.table[(x, y)]] != G.gpd.table[(amap[x], amap[y])]:
                    col.add(
                        "action-multiplicative",
                        (H.carrier[i], H.carrier[j], G.arrows[x], G.arrows[y]),
                    )
                    done = True
                    break
            if done:
                break
        if done:
            break
    # module-algebra: the action is additive on every star
    done = False
    for i in range(n):
        for j in range(n):
            vmap, amap = D.act[(i, j)]
            for v in range(G.n_vertices):
                st = G.star(v)
                for a in st:
                    for b in st:
                        if amap[G.plus(a, b)] != G.plus(amap[a], amap[b]):
                            col.add(
                                "module-algebra",
                                (
                                    H.carrier[i],
                                    H.carrier[j],
                                    G.arrows[a],
                                    G.arrows[b],
                                ),
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


class ClassicalProductBrace(QuiverSkewBrace):
    """Classical product together with its building data and pair decoding."""

    def __init__(self, gpd, add, data, pairs, vertex_pairs):
        super().__init__(gpd, add)
        self.data = data
        self.pairs = tuple(pairs)  # arrow idx -> (g, i, j)
        self.vertex_pairs = tuple(vertex_pairs)  # vertex idx -> (gv, i)


def classical_semidirect(D):
    """The product structure on (brace arrows) x (coarse arrows).

    Vertices are pairs (vertex of the brace, heap element); the action twists
    targets and composition; the addition adds brace components and takes the
    heap of the right-hand endpoints.  Refuses when any data law fails.
    """
    rep = validate_classical_data(D)
    if not rep.ok:
        raise StructureError(f"classical product data rejected: {rep}")
    G, H = D.brace, D.heap
    n = H.size
    vertex_pairs = [(gv, i) for gv in range(G.n_vertices) for i in range(n)]
    vindex = {p: k for k, p in enumerate(vertex_pairs)}
    vertices = [f"{G.vertices[gv]}|{H.carrier[i]}" for gv, i in vertex_pairs]
    pairs = [
        (g, i, j) for g in range(G.n_arrows) for i in range(n) for j in range(n)
    ]
    pindex = {p: k for k, p in enumerate(pairs)}

    def src_of(g, i, j):
        return vindex[(G.src[g], i)]

    def tgt_of(g, i, j):
        return vindex[(D.vact(j, i, G.tgt[g]), j)]

    arrows = [
        (
            f"{G.arrows[g]}|[{H.carrier[i]},{H.carrier[j]}]",
            vertices[src_of(g, i, j)],
            vertices[tgt_of(g, i, j)],
        )
        for g, i, j in pairs
    ]
    base = Quiver(vertices, arrows)
    compose = {}
    for g, i, j in pairs:
        for h, j2, k in pairs:
            if j2 != j:
                continue
            if tgt_of(g, i, j) != src_of(h, j2, k):
                continue
            z = G.mul(g, D.aact(i, j, h))
            compose[(pindex[(g, i, j)], pindex[(h, j, k)])] = pindex[(z, i, k)]
    unit = [pindex[(G.gpd.unit[gv], i, i)] for gv, i in vertex_pairs]
    inv = [
        pindex[(D.aact(j, i, G.gpd.inv[g]), j, i)] for g, i, j in pairs
    ]
    gpd = Groupoid(base, compose, unit, inv)
    add = {}
    for g, i, j in pairs:
        for h, i2, k in pairs:
            if i2 != i or G.src[g] != G.src[h]:
                continue
            add[(pindex[(g, i, j)], pindex[(h, i, k)])] = pindex[
                (G.plus(g, h), i, H.op(j, i, k))
            ]
    out = ClassicalProductBrace(gpd, add, D, pairs, vertex_pairs)
    check = validate_qskb(out)
    if not check.ok:
        raise StructureError(f"classical product failed validation: {check}")
    return out


def direct_product(G, H):
    """Classical product with the trivial action."""
    return classical_semidirect(ClassicalProductData(G, H, trivial_action(G, H)))


def ideal_of_classical_product(P):
    """The copy of the brace over the heap units: all pairs (g, [i,i])."""
    from .morphisms import IdealCandidate, is_ideal

    if not isinstance(P, ClassicalProductBrace):
        raise StructureError("expected a structure built by classical_semidirect")
    arrows = frozenset(
        k for k, (g, i, j) in enumerate(P.pairs) if i == j
    )
    cand = IdealCandidate(
        Subgroupoid(P.gpd, frozenset(range(P.n_vertices)), arrows)
    )
    rep = is_ideal(P, cand)
    if not rep.ok:
        raise StructureError(f"product ideal failed the ideal laws: {rep}")
    return cand


# ---------------------------------------------------------------------------
# crossed data: the action triple for the two-sided product


class CrossedData:
    """Actions for the two-sided product of `n` by `h`.

    `h`'s vertex identifiers must be a subset of `n`'s, with exactly one
    h-vertex per connected component of `n`.  Tables (all keyed by h-arrow
    index and n-arrow index):

      tri[(k, l)]   = k ▷ l, a loop of n at tgt(k) sent to a loop at src(k);
      phi[(k, a)]   = φ_k(a) for a in the n-star at src(k), an h-vertex;
      gamma[(k, a)] = γ_k(a), sending the n-star at tgt(k) to the one at src(k).
    """

    def __init__(self, n, h, tri, phi, gamma):
        self.n = n
        self.h = h
        self.tri = dict(tri)
        self.phi = dict(phi)
        self.gamma = dict(gamma)
        try:
            self.hv2nv = tuple(n.v(vid) for vid in h.vertices)
        except StructureError:
            raise StructureError("h has a vertex that is not a vertex of n")
        self._mu = None
        self._u = None
        self._gamma_inv = None
        self._phi_inv = None

    # -- derived geometry ---------------------------------------------------

    def mu(self):
        """Per n-vertex, the index (in n) of its component's unique h-vertex."""
        if self._mu is None:
            hverts = set(self.hv2nv)
            mu = [None] * self.n.n_vertices
            for block in connected_components(self.n.gpd):
                marked = [v for v in block if v in hverts]
                if len(marked) != 1:
                    raise StructureError(
                        "component condition fails: a component of n has "
                        f"{len(marked)} h-vertices"
                    )
                for v in block:
                    mu[v] = marked[0]
            self._mu = tuple(mu)
        return self._mu

    def transversal(self):
        """u_λ: least n-arrow λ -> μ(λ), the unit at h-vertices themselves."""
        if self._u is None:
            mu = self.mu()
            u = []
            for v in range(self.n.n_vertices):
                if v == mu[v]:
                    u.append(self.n.gpd.unit[v])
                else:
                    cand = [x for x in self.n.star(v) if self.n.tgt[x] == mu[v]]
                    if not cand:
                        raise StructureError(
                            f"no arrow from {self.n.vertices[v]} to its h-vertex"
                        )
                    u.append(cand[0])
            self._u = tuple(u)
        return self._u

    def h_vertex_of_n(self, nv):
        """The h-index of an n-vertex that is an h-vertex."""
        return self.h.v(self.n.vertices[nv])

    # -- action accessors ----------------------------------------------------

    def lact(self, k, l):
        return self.tri[(k, l)]

    def ract(self, l, k):
        """l ◁ k = k^{-1} ▷ l."""
        return self.tri[(self.h.inv(k), l)]

    def gamma_of(self, k, a):
        return self.gamma[(k, a)]

    def gamma_inv_of(self, k, a):
        if self._gamma_inv is None:
            inv = {}
            for (kk, aa), val in self.gamma.items():
                inv[(kk, val)] = aa
            self._gamma_inv = inv
        return self._gamma_inv[(k, a)]

    def phi_of(self, k, a):
        return self.phi[(k, a)]

    def phi_inv_of(self, k, a):
        if self._phi_inv is None:
            inv = {}
            for (kk, aa), val in self.phi.items():
                inv[(kk, val)] = aa
            self._phi_inv = inv
        return self._phi_inv[(k, a)]


def tt_operator(D, h1, h2, h3, b1, b2, b3):
    """The ternary transport

        T_{h1,h2,h3}(b1,b2,b3)
          = γ^{-1}_{<h1,h2,h3>} < φ_{h3}φ_{h2}^{-1}γ_{h1}(b1),
                                  φ_{h3}φ_{h2}^{-1}γ_{h2}(b2),
                                  γ_{h3}(b3) >

    with h1,h2,h3 in one h-star and b_i in the n-star at tgt(h_i); the result
    lies in the n-star at tgt(<h1,h2,h3>).
    """
    if isinstance(D, FPData):
        D = D.to_crossed()
    hh = D.h.minus_plus(h1, h2, h3)
    y1 = D.phi_of(h3, D.phi_inv_of(h2, D.gamma_of(h1, b1)))
    y2 = D.phi_of(h3, D.phi_inv_of(h2, D.gamma_of(h2, b2)))
    y3 = D.gamma_of(h3, b3)
    return D.gamma_inv_of(hh, D.n.minus_plus(y1, y2, y3))


def check_fpcomp(D, level="true"):
    """Evaluate one of the three transport compatibilities over its full range.

    `level` is one of "heap", "simplified", "true"; the strongest one gates
    the two-sided constructor, the weaker two exist to exercise the
    implication chain (true implies simplified, simplified and heap are
    equivalent).
    """
    if isinstance(D, FPData):
        D = D.to_crossed()
    if level not in ("heap", "simplified", "true"):
        raise StructureError(f"unknown compatibility level {level!r}")
    col = ReportCollector()
    n, h = D.n, D.h
    nids, hids = n.arrows, h.arrows
    for hv in range(h.n_vertices):
        lam_n = D.hv2nv[hv]
        sth = h.star(hv)
        loops = [l for l in n.star(lam_n) if n.tgt[l] == lam_n]
        if level == "true":
            for k1 in sth:
                s1 = n.star(D.hv2nv[h.tgt[k1]])
                for k2 in sth:
                    s2 = n.star(D.hv2nv[h.tgt[k2]])
                    for k3 in sth:
                        s3 = n.star(D.hv2nv[h.tgt[k3]])
                        hh = h.minus_plus(k1, k2, k3)
                        for ell in loops:
                            e1, e2, e3 = (
                                D.ract(ell, k1),
                                D.ract(ell, k2),
                                D.ract(ell, k3),
                            )
                            eh = D.ract(ell, hh)
                            for b1 in s1:
                                for b2 in s2:
                                    for b3 in s3:
                                        lhs = tt_operator(
                                            D,
                                            k1,
                                            k2,
                                            k3,
                                            n.mul(e1, b1),
                                            n.mul(e2, b2),
                                            n.mul(e3, b3),
                                        )
                                        rhs = n.mul(
                                            eh,
                                            tt_operator(D, k1, k2, k3, b1, b2, b3),
                                        )
                                        if lhs != rhs:
                                            col.add(
                                                "fpcomp-true",
                                                (
                                                    hids[k1],
                                                    hids[k2],
                                                    hids[k3],
                                                    nids[ell],
                                                    nids[b1],
                                                    nids[b2],
                                                    nids[b3],
                                                ),
                                            )
                                            return col.report()
        elif level == "simplified":
            for k1 in sth:
                s1 = n.star(D.hv2nv[h.tgt[k1]])
                for k2 in sth:
                    u2 = n.gpd.unit[D.hv2nv[h.tgt[k2]]]
                    for k3 in sth:
                        s3 = n.star(D.hv2nv[h.tgt[k3]])
                        hh = h.minus_plus(k1, k2, k3)
                        for ell in loops:
                            e1, e2, e3 = (
                                D.ract(ell, k1),
                                D.ract(ell, k2),
                                D.ract(ell, k3),
                            )
                            eh = D.ract(ell, hh)
                            for b1 in s1:
                                for b3 in s3:
                                    lhs = tt_operator(
                                        D,
                                        k1,
                                        k2,
                                        k3,
                                        n.mul(e1, b1),
                                        e2,
                                        n.mul(e3, b3),
                                    )
                                    rhs = n.mul(
                                        eh,
                                        tt_operator(D, k1, k2, k3, b1, u2, b3),
                                    )
                                    if lhs != rhs:
                                        col.add(
                                            "fpcomp-simplified",
                                            (
                                                hids[k1],
                                                hids[k2],
                                                hids[k3],
                                                nids[ell],
                                                nids[b1],
                                                nids[b3],
                                            ),
                                        )
                                        return col.report()
        else:  # heap form
            for k1 in sth:
                for k2 in sth:
                    k2i = h.inv(k2)
                    g1 = h.mul(k2i, k1)
                    g3s = sth
                    tv2 = D.hv2nv[h.tgt[k2]]
                    u1 = h.gpd.unit[h.tgt[k2]]
                    loops2 = [
                        l for l in n.star(tv2) if n.tgt[l] == tv2
                    ]
                    for k3 in g3s:
                        g3 = h.mul(k2i, k3)
                        gg = h.minus_plus(g1, u1, g3)
                        s1 = n.star(D.hv2nv[h.tgt[k1]])
                        s3 = n.star(D.hv2nv[h.tgt[k3]])
                        un2 = n.gpd.unit[tv2]
                        for m in loops2:
                            m1 = D.ract(m, g1)
                            m3 = D.ract(m, g3)
                            mg = D.ract(m, gg)
                            for b1 in s1:
                                for b3 in s3:
                                    lhs = tt_operator(
                                        D,
                                        k1,
                                        k2,
                                        k3,
                                        n.mul(m1, b1),
                                        m,
                                        n.mul(m3, b3),
                                    )
                                    rhs = n.mul(
                                        mg,
                                        tt_operator(D, g1, u1, g3, b1, un2, b3),
                                    )
                                    if lhs != rhs:
                                        col.add(
                                            "fpcomp-heap",
                                            (
                                                hids[k1],
                                                hids[k2],
                                                hids[k3],
                                                nids[m],
                                                nids[b1],
                                                nids[b3],
                                            ),
                                        )
                                        return col.report()
    return col.report()


def check_tt_invariance(D):
    """Left-translation invariance of the transport: T_{kh1,kh2,kh3} = T_{h1,h2,h3}."""
    if isinstance(D, FPData):
        D = D.to_crossed()
    n, h = D.n, D.h
    for hv in range(h.n_vertices):
        sth = h.star(hv)
        incoming = [k for k in range(h.n_arrows) if h.tgt[k] == hv]
        for k in incoming:
            for h1 in sth:
                s1 = n.star(D.hv2nv[h.tgt[h1]])
                for h2 in sth:
                    s2 = n.star(D.hv2nv[h.tgt[h2]])
                    for h3 in sth:
                        s3 = n.star(D.hv2nv[h.tgt[h3]])
                        kh = (h.mul(k, h1), h.mul(k, h2), h.mul(k, h3))
                        for b1 in s1:
                            for b2 in s2:
                                for b3 in s3:
                                    if tt_operator(
                                        D, kh[0], kh[1], kh[2], b1, b2, b3
                                    ) != tt_operator(D, h1, h2, h3, b1, b2, b3):
                                        return False
    return True


def validate_crossed_data(D):
    """Structural laws for the action triple, then the strong compatibility."""
    col = ReportCollector()
    n, h = D.n, D.h
    for B, name in ((n, "n"), (h, "h")):
        rep = validate_qskb(B)
        if not rep.ok:
            col.add(f"{name}-invalid", rep.failures[0].witness, rep.failures[0].law)
            return col.report()
    try:
        mu = D.mu()
        D.transversal()
    except StructureError as exc:
        col.add("component-condition", (), str(exc))
        return col.report()
    hids, nids = h.arrows, n.arrows
    # tri: total, endpoint-correct, functorial, multiplicative, unit
    for k in range(h.n_arrows):
        tv, sv = D.hv2nv[h.tgt[k]], D.hv2nv[h.src[k]]
        tloops = [l for l in n.star(tv) if n.tgt[l] == tv]
        sloops = {l for l in n.star(sv) if n.tgt[l] == sv}
        for l in tloops:
            if (k, l) not in D.tri:
                col.add("tri-total", (hids[k], nids[l]))
                return col.report()
            if D.tri[(k, l)] not in sloops:
                col.add("tri-endpoints", (hids[k], nids[l]))
                return col.report()
    for hv in range(h.n_vertices):
        u = h.gpd.unit[hv]
        nv = D.hv2nv[hv]
        for l in n.star(nv):
            if n.tgt[l] == nv and D.tri[(u, l)] != l:
                col.add("tri-unit", (hids[u], nids[l]))
                break
    for k1, k2 in h.gpd.base.composable_pairs():
        tv = D.hv2nv[h.tgt[k2]]
        for l in n.star(tv):
            if n.tgt[l] != tv:
                continue
            if D.tri[(h.mul(k1, k2), l)] != D.tri[(k1, D.tri[(k2, l)])]:
                col.add("tri-functorial", (hids[k1], hids[k2], nids[l]))
                break
        if col.seen("tri-functorial"):
            break
    for k in range(h.n_arrows):
        tv = D.hv2nv[h.tgt[k]]
        loops = [l for l in n.star(tv) if n.tgt[l] == tv]
        hit = False
        for l1 in loops:
            for l2 in loops:
                if D.tri[(k, n.mul(l1, l2))] != n.mul(D.tri[(k, l1)], D.tri[(k, l2)]):
                    col.add("tri-multiplicative", (hids[k], nids[l1], nids[l2]))
                    hit = True
                    break
            if hit:
                break
        if hit:
            break
    # phi: total per star, bijective, right action of (St_h(λ), +), additive
    for hv in range(h.n_vertices):
        nv = D.hv2nv[hv]
        stn = n.star(nv)
        sth = h.star(hv)
        uh = h.gpd.unit[hv]
        for k in sth:
            img = set()
            for a in stn:
                if (k, a) not in D.phi:
                    col.add("phi-total", (hids[k], nids[a]))
                    return col.report()
                val = D.phi[(k, a)]
                if val not in set(stn):
                    col.add("phi-endpoints", (hids[k], nids[a]))
                    return col.report()
                img.add(val)
            if len(img) != len(stn):
                col.add("phi-bijective", (hids[k],))
                return col.report()
        for a in stn:
            if D.phi[(uh, a)] != a:
                col.add("phi-unit", (hids[uh], nids[a]))
                break
        for k1 in sth:
            for k2 in sth:
                ks = h.plus(k1, k2)
                if any(
                    D.phi[(ks, a)] != D.phi[(k2, D.phi[(k1, a)])] for a in stn
                ):
                    col.add("phi-action", (hids[k1], hids[k2]))
                    break
            if col.seen("phi-action"):
                break
        hit = False
        for k in sth:
            for a in stn:
                for b in stn:
                    if D.phi[(k, n.plus(a, b))] != n.plus(
                        D.phi[(k, a)], D.phi[(k, b)]
                    ):
                        col.add("phi-additive", (hids[k], nids[a], nids[b]))
                        hit = True
                        break
                if hit:
                    break
            if hit:
                break
    # gamma: total, endpoint-correct, bijective, multiplicative action, additive
    for k in range(h.n_arrows):
        tv, sv = D.hv2nv[h.tgt[k]], D.hv2nv[h.src[k]]
        stt, sts = n.star(tv), set(n.star(sv))
        img = set()
        for a in stt:
            if (k, a) not in D.gamma:
                col.add("gamma-total", (hids[k], nids[a]))
                return col.report()
            val = D.gamma[(k, a)]
            if val not in sts:
                col.add("gamma-endpoints", (hids[k], nids[a]))
                return col.report()
            img.add(val)
        if len(img) != len(stt):
            col.add("gamma-bijective", (hids[k],))
            return col.report()
    for hv in range(h.n_vertices):
        u = h.gpd.unit[hv]
        nv = D.hv2nv[hv]
        for a in n.star(nv):
            if D.gamma[(u, a)] != a:
                col.add("gamma-unit", (hids[u], nids[a]))
                break
    for k1, k2 in h.gpd.base.composable_pairs():
        tv = D.hv2nv[h.tgt[k2]]
        if any(
            D.gamma[(h.mul(k1, k2), a)] != D.gamma[(k1, D.gamma[(k2, a)])]
            for a in n.star(tv)
        ):
            col.add("gamma-action", (hids[k1], hids[k2]))
            break
    for k in range(h.n_arrows):
        tv = D.hv2nv[h.tgt[k]]
        stt = n.star(tv)
        hit = False
        for a in stt:
            for b in stt:
                if D.gamma[(k, n.plus(a, b))] != n.plus(
                    D.gamma[(k, a)], D.gamma[(k, b)]
                ):
                    col.add("gamma-additive", (hids[k], nids[a], nids[b]))
                    hit = True
                    break
            if hit:
                break
        if hit:
            break
    rep = col.report()
    if not rep.ok:
        return rep
    return check_fpcomp(D, level="true")


# ---------------------------------------------------------------------------
# balanced tensor product


@dataclass(frozen=True)
class BalancedTriple:
    """A consecutive triple a⊗h⊗b (n-arrow, h-arrow, n-arrow indices)."""

    left: int
    mid: int
    right: int
    canonical: bool = False


def all_balanced_triples(D):
    """Every consecutive triple a⊗h⊗b with a, b in n and h in h."""
    n, h = D.n, D.h
    hvert_by_n = {nv: i for i, nv in enumerate(D.hv2nv)}
    out = []
    for a in range(n.n_arrows):
        tv = n.tgt[a]
        if tv not in hvert_by_n:
            continue
        for k in h.star(hvert_by_n[tv]):
            for b in n.star(D.hv2nv[h.tgt[k]]):
                out.append((a, k, b))
    return out


def normalize_triple(D, a, k, b):
    """Canonical representative: slide the loop u^{-1}a across k into b."""
    n = D.n
    u = D.transversal()[n.src[a]]
    ell = n.mul(n.inv(u), a)
    return (n.src[a], k, n.mul(D.ract(ell, k), b))


def balanced_classes(D):
    """Equivalence classes of consecutive triples under loop sliding.

    Computed by closure under the generating move
        x·(k▷m) ⊗ k ⊗ y  ~  x ⊗ k ⊗ m·y      (m a loop at tgt k),
    with the canonical representative having transversal left leg; the
    closure is checked to contain exactly one canonical triple per class.
    """
    rep = validate_crossed_data(D)
    if not rep.ok:
        raise StructureError(f"crossed data rejected: {rep}")
    n = D.n
    triples = all_balanced_triples(D)
    tindex = {t: i for i, t in enumerate(triples)}
    parent = list(range(len(triples)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for a, k, b in triples:
        tv = D.hv2nv[D.h.tgt[k]]
        for m in n.star(tv):
            if n.tgt[m] != tv:
                continue
            moved = (n.mul(a, D.lact(k, m)), k, b)
            here = (a, k, n.mul(m, b))
            union(tindex[here], tindex[moved])
    classes = {}
    for i, t in enumerate(triples):
        classes.setdefault(find(i), []).append(t)
    u = D.transversal()
    out = []
    for root in sorted(classes):
        members = classes[root]
        canon = [
            (a, k, b) for a, k, b in members if a == u[n.src[a]]
        ]
        if len(canon) != 1:
            raise StructureError(
                "balanced class does not have a unique canonical representative"
            )
        a, k, b = canon[0]
        out.append(BalancedTriple(a, k, b, canonical=True))
    out.sort(key=lambda t: (n.src[t.left], t.mid, t.right))
    return out


# ---------------------------------------------------------------------------
# the two-sided (categorical) product


class CrossedProductBrace(QuiverSkewBrace):
    """Two-sided product; `triples[i]` is the canonical (source, h, right-leg)."""

    def __init__(self, gpd, add, data, triples):
        super().__init__(gpd, add)
        self.data = data
        self.triples = tuple(triples)


def _ternary_raw_via(D, slot, t1, t2, t3):
    """The addition formula on arbitrary representative triples.

    `slot` (1, 2 or 3) picks which left leg the formula normalises around;
    they must all give the same class.
    """
    n, h = D.n, D.h
    ts = (t1, t2, t3)
    a_s = ts[slot - 1][0]
    args = []
    for i, (a, k, b) in enumerate(ts):
        if i == slot - 1:
            args.append(b)
        else:
            l = n.mul(n.inv(a_s), a)
            args.append(n.mul(D.ract(l, k), b))
    hh = h.minus_plus(ts[0][1], ts[1][1], ts[2][1])
    tb = tt_operator(D, ts[0][1], ts[1][1], ts[2][1], *args)
    return (a_s, hh, tb)


def _ternary_raw(D, t1, t2, t3):
    return _ternary_raw_via(D, 1, t1, t2, t3)


def crossed_product(D):
    """The two-sided product on balanced classes.

    Refuses when the crossed data fails any law (including the strong
    compatibility); re-verifies representative independence of the addition
    and full structure validity before returning.
    """
    rep = validate_crossed_data(D)
    if not rep.ok:
        raise StructureError(f"crossed data rejected: {rep}")
    built = _build_crossed(D)
    _check_crossed_welldefined(D, built)
    check = validate_qskb(built)
    if not check.ok:
        raise StructureError(f"two-sided product failed validation: {check}")
    return built


def _build_crossed(D):
    n, h = D.n, D.h
    mu = D.mu()
    u = D.transversal()
    triples = []
    for lam in range(n.n_vertices):
        hv = D.h_vertex_of_n(mu[lam])
        for k in h.star(hv):
            for b in n.star(D.hv2nv[h.tgt[k]]):
                triples.append((lam, k, b))
    tindex = {t: i for i, t in enumerate(triples)}
    vertices = list(n.vertices)
    arrows = [
        (
            f"{n.arrows[u[lam]]}⊗{h.arrows[k]}⊗{n.arrows[b]}",
            n.vertices[lam],
            n.vertices[n.tgt[b]],
        )
        for lam, k, b in triples
    ]
    base = Quiver(vertices, arrows)

    def norm(a, k, b):
        lam, k2, b2 = normalize_triple(D, a, k, b)
        return tindex[(lam, k2, b2)]

    compose = {}
    for i, (l1, k1, b1) in enumerate(triples):
        lam2 = n.tgt[b1]
        hv2 = D.h_vertex_of_n(mu[lam2])
        for k2 in h.star(hv2):
            for b2 in n.star(D.hv2nv[h.tgt[k2]]):
                j = tindex[(lam2, k2, b2)]
                m = n.mul(b1, u[lam2])  # loop at the shared h-vertex
                z = (l1, h.mul(k1, k2), n.mul(D.ract(m, k2), b2))
                compose[(i, j)] = tindex[z]
    unit = []
    for lam in range(n.n_vertices):
        hv = D.h_vertex_of_n(mu[lam])
        unit.append(tindex[(lam, h.gpd.unit[hv], n.inv(u[lam]))])
    inv = []
    for lam, k, b in triples:
        lam2 = n.tgt[b]
        ell = n.mul(n.inv(u[lam2]), n.inv(b))
        b2 = n.mul(D.lact(k, ell), n.inv(u[lam]))
        inv.append(tindex[(lam2, h.inv(k), b2)])
    gpd = Groupoid(base, compose, unit, inv)
    add = {}
    for i, (lam, k1, b1) in enumerate(triples):
        for k2 in h.star(h.src[k1]):
            for b2 in n.star(D.hv2nv[h.tgt[k2]]):
                j = tindex[(lam, k2, b2)]
                zero = unit[lam]
                z0 = triples[zero]
                t = _ternary_raw(D, (u[lam], k1, b1), (u[lam], z0[1], z0[2]), (u[lam], k2, b2))
                add[(i, j)] = tindex[(lam, t[1], t[2])]
    return CrossedProductBrace(gpd, add, D, triples)


def _check_crossed_welldefined(D, built):
    """Representative independence of the addition formula.

    For every star triple, every argument slot, and every loop perturbation of
    that slot's left leg, the raw formula must land in the same class; the
    slot-2 and slot-3 normalisations of the formula must agree with slot 1.
    """
    n, h = D.n, D.h
    u = D.transversal()
    mu = D.mu()

    def as_class(raw):
        lam, k, b = normalize_triple(D, raw[0], raw[1], raw[2]) if isinstance(
            raw[0], int
        ) else raw
        return (lam, k, b)

    for lam in range(n.n_vertices):
        hv = D.h_vertex_of_n(mu[lam])
        star_triples = [
            (u[lam], k, b)
            for k in h.star(hv)
            for b in n.star(D.hv2nv[h.tgt[k]])
        ]
        nloops = [
            l
            for l in n.star(mu[lam])
            if n.tgt[l] == mu[lam]
        ]
        for t1 in star_triples:
            for t2 in star_triples:
                for t3 in star_triples:
                    expected = as_class(_ternary_raw(D, t1, t2, t3))
                    for via in (2, 3):
                        got = as_class(_ternary_raw_via(D, via, t1, t2, t3))
                        if got != expected:
                            raise StructureError(
                                "addition depends on the normalising slot at "
                                f"{t1}, {t2}, {t3}"
                            )
                    for slot in range(3):
                        ts = [t1, t2, t3]
                        a, k, b = ts[slot]
                        for ell in nloops:
                            # same class, non-transversal left leg
                            pert = (
                                n.mul(a, D.lact(k, D.ract(ell, k))),
                                k,
                                b,
                            )
                            alt = (a, k, n.mul(D.ract(ell, k), b))
                            ts_p = list(ts)
                            ts_p[slot] = pert
                            ts_a = list(ts)
                            ts_a[slot] = alt
                            got_p = as_class(_ternary_raw(D, *ts_p))
                            got_a = as_class(_ternary_raw(D, *ts_a))
                            if got_p != got_a:
                                raise StructureError(
                                    "addition is not representative-independent "
                                    f"at slot {slot + 1} of {ts} with loop "
                                    f"{n.arrows[ell]}"
                                )

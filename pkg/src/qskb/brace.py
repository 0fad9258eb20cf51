"""Quiver skew braces and braidings: both axiom systems, their validators, and
the conversions between them.

A quiver skew brace puts a group +_λ on every outgoing star, with the unit
loop as neutral element, tied to composition by

    a·(b +_{tgt a} c) = a·b −_{src a} a +_{src a} a·c                   (twisted
                                                                 compatibility)

or equivalently, in heap form, a·<b,c,d> = <ab, ac, ad> (left truss
distributivity).  A braiding is the same data presented as a pair of actions
lact = ⇀ and ract = ↼ with (a⇀b)(a↼b) = ab and r: a⊗b -> (a⇀b)⊗(a↼b)
bijective on composable pairs.
"""

from __future__ import annotations

from .groupoid import (
    Groupoid,
    coarse_groupoid,
    connected_components,
    is_connected,
)
from .heap import GroupTable, Heap, validate_heap
from .quiver import Quiver
from .report import Report, ReportCollector, StructureError


class QuiverSkewBrace:
    """A groupoid plus one total addition table per outgoing star.

    `add` maps pairs of arrow indices with a common source to an arrow index
    with that source.  The constructor enforces typing; axioms live in
    `validate_qskb`.
    """

    def __init__(self, gpd, add):
        self.gpd = gpd
        table = dict(add)
        for v in range(gpd.n_vertices):
            st = gpd.star(v)
            for a in st:
                for b in st:
                    if (a, b) not in table:
                        raise StructureError(
                            f"addition missing on ({gpd.arrows[a]}, {gpd.arrows[b]})"
                        )
        for (a, b), c in table.items():
            if gpd.src[a] != gpd.src[b] or gpd.src[c] != gpd.src[a]:
                raise StructureError(
                    f"addition entry ({gpd.arrows[a]}, {gpd.arrows[b]}) leaves its star"
                )
        self.add = table
        # additive inverses; None when the star is not a group (caught by the validator)
        neg = []
        for x in range(gpd.n_arrows):
            v = gpd.src[x]
            u = gpd.unit[v]
            cand = None
            for y in gpd.star(v):
                if table[(x, y)] == u and table[(y, x)] == u:
                    cand = y
                    break
            neg.append(cand)
        self._neg = tuple(neg)

    # passthroughs
    @property
    def vertices(self):
        return self.gpd.vertices

    @property
    def arrows(self):
        return self.gpd.arrows

    @property
    def src(self):
        return self.gpd.src

    @property
    def tgt(self):
        return self.gpd.tgt

    @property
    def n_vertices(self):
        return self.gpd.n_vertices

    @property
    def n_arrows(self):
        return self.gpd.n_arrows

    def v(self, vid):
        return self.gpd.v(vid)

    def a(self, aid):
        return self.gpd.a(aid)

    def star(self, v):
        return self.gpd.star(v)

    def mul(self, x, y):
        return self.gpd.mul(x, y)

    def unit(self, v):
        return self.gpd.unit[v]

    def inv(self, x):
        return self.gpd.inv[x]

    def is_loop(self, x):
        return self.gpd.is_loop(x)

    def plus(self, a, b):
        try:
            return self.add[(a, b)]
        except KeyError:
            raise StructureError(
                f"arrows {self.arrows[a]} and {self.arrows[b]} are not in one star"
            )

    def neg(self, a):
        n = self._neg[a]
        if n is None:
            raise StructureError(f"no additive inverse for {self.arrows[a]}")
        return n

    def minus_plus(self, a, b, c):
        """The star heap <a, b, c> = a - b + c."""
        return self.plus(self.plus(a, self.neg(b)), c)

    def star_group(self, v):
        """The star at v as a GroupTable (local element order = star order)."""
        st = self.gpd.star(v)
        pos = {a: i for i, a in enumerate(st)}
        mul = [[pos[self.add[(a, b)]] for b in st] for a in st]
        return GroupTable([self.arrows[a] for a in st], mul)

    def __eq__(self, other):
        return (
            isinstance(other, QuiverSkewBrace)
            and self.gpd == other.gpd
            and self.add == other.add
        )

    def __hash__(self):
        return hash((self.gpd, tuple(sorted(self.add.items()))))

    def __repr__(self):
        return f"QuiverSkewBrace({self.n_vertices} vertices, {self.n_arrows} arrows)"


class Braiding:
    """Left/right action tables on composable pairs of a groupoid.

    Constructors always derive ract from (a⇀b)(a↼b) = ab; the validator
    cross-checks a stored ract against that identity.
    """

    def __init__(self, gpd, lact, ract):
        self.gpd = gpd
        self.lact = dict(lact)
        self.ract = dict(ract)
        pairs = set(gpd.base.composable_pairs())
        for name, table in (("lact", self.lact), ("ract", self.ract)):
            if set(table) != pairs:
                raise StructureError(f"{name} is not total on composable pairs")
            for val in table.values():
                if not 0 <= val < gpd.n_arrows:
                    raise StructureError(f"{name} entry out of range")

    def l(self, a, b):
        return self.lact[(a, b)]

    def r(self, a, b):
        return self.ract[(a, b)]

    def map_pair(self, a, b):
        return (self.lact[(a, b)], self.ract[(a, b)])

    def __eq__(self, other):
        return (
            isinstance(other, Braiding)
            and self.gpd == other.gpd
            and self.lact == other.lact
            and self.ract == other.ract
        )

    def __repr__(self):
        return f"Braiding(on {self.gpd!r})"


def validate_qskb(B):
    """Star-group axioms, neutral = unit loop, and both compatibility forms.

    The binary form and its heap form are equivalent; they are checked
    independently so a failure is reported for both, with separate witnesses.
    """
    from .groupoid import validate_groupoid
    from .heap import validate_group

    col = ReportCollector()
    grep = validate_groupoid(B.gpd)
    if not grep.ok:
        col.add("groupoid", grep.failures[0].witness, grep.failures[0].law)
        return col.report()
    ids = B.arrows
    for v in range(B.n_vertices):
        g = B.star_group(v)
        rep = validate_group(g)
        if not rep.ok:
            col.add(
                "star-group",
                (B.vertices[v],) + rep.failures[0].witness,
                rep.failures[0].law,
            )
            continue
        if g.neutral != list(B.star(v)).index(B.unit(v)):
            col.add("star-neutral", (B.vertices[v],), "neutral is not the unit loop")
    if not col.report().ok:
        return col.report()
    # binary compatibility a(b + c) = ab - a + ac
    for a in range(B.n_arrows):
        st = B.star(B.tgt[a])
        hit = False
        for b in st:
            for c in st:
                lhs = B.mul(a, B.plus(b, c))
                rhs = B.plus(B.plus(B.mul(a, b), B.neg(a)), B.mul(a, c))
                if lhs != rhs:
                    col.add("compatibility", (ids[a], ids[b], ids[c]))
                    hit = True
                    break
            if hit:
                break
        if hit:
            break
    # heap form a<b,c,d> = <ab, ac, ad>
    done = False
    for a in range(B.n_arrows):
        st = B.star(B.tgt[a])
        for b in st:
            for c in st:
                for d in st:
                    lhs = B.mul(a, B.minus_plus(b, c, d))
                    rhs = B.minus_plus(B.mul(a, b), B.mul(a, c), B.mul(a, d))
                    if lhs != rhs:
                        col.add("heap-distributivity", (ids[a], ids[b], ids[c], ids[d]))
                        done = True
                        break
                if done:
                    break
            if done:
                break
        if done:
            break
    return col.report()


def braiding_from_qskb(B):
    """a⇀b = -a + ab; a↼b = (a⇀b)^{-1}·ab."""
    rep = validate_qskb(B)
    if not rep.ok:
        raise StructureError(f"not a quiver skew brace: {rep}")
    lact, ract = {}, {}
    for a, b in B.gpd.base.composable_pairs():
        ab = B.mul(a, b)
        l = B.plus(B.neg(a), ab)
        lact[(a, b)] = l
        ract[(a, b)] = B.mul(B.inv(l), ab)
    return Braiding(B.gpd, lact, ract)


def qskb_from_braiding(R):
    """a + b = a·(a^{-1}⇀b) on every star."""
    rep = validate_braiding(R)
    if not rep.ok:
        raise StructureError(f"not a braiding: {rep}")
    G = R.gpd
    add = {}
    for v in range(G.n_vertices):
        st = G.star(v)
        for a in st:
            ai = G.inv[a]
            for b in st:
                add[(a, b)] = G.mul(a, R.l(ai, b))
    return QuiverSkewBrace(G, add)


def validate_braiding(R):
    """Endpoints, braided commutation, bijectivity, and the matched-pair laws.

    The defining requirements are the endpoint conditions, (a⇀b)(a↼b) = ab,
    and bijectivity of a⊗b -> (a⇀b)⊗(a↼b); the unit and mixed action laws
    are consequences, checked redundantly to localise failures.
    """
    from .groupoid import validate_groupoid

    col = ReportCollector()
    grep = validate_groupoid(R.gpd)
    if not grep.ok:
        col.add("groupoid", grep.failures[0].witness, grep.failures[0].law)
        return col.report()
    G = R.gpd
    ids = G.arrows
    pairs = list(G.base.composable_pairs())
    for a, b in pairs:
        l, r = R.map_pair(a, b)
        if G.src[l] != G.src[a] or G.tgt[r] != G.tgt[b] or G.tgt[l] != G.src[r]:
            col.add("endpoints", (ids[a], ids[b]))
            break
    if col.seen("endpoints"):
        return col.report()
    for a, b in pairs:
        l, r = R.map_pair(a, b)
        if G.mul(l, r) != G.mul(a, b):
            col.add("braided-commutation", (ids[a], ids[b]))
            break
    images = {R.map_pair(a, b) for a, b in pairs}
    if len(images) != len(pairs):
        seen = {}
        for a, b in pairs:
            img = R.map_pair(a, b)
            if img in seen:
                col.add("bijectivity", (ids[a], ids[b]), "pair image repeated")
                break
            seen[img] = (a, b)
    # left action laws: (ab)⇀c = a⇀(b⇀c) and 1⇀c = c
    for a, b in pairs:
        for c in G.star(G.tgt[b]):
            if R.l(G.mul(a, b), c) != R.l(a, R.l(b, c)):
                col.add("left-action", (ids[a], ids[b], ids[c]))
                break
        if col.seen("left-action"):
            break
    for c in range(G.n_arrows):
        if R.l(G.unit[G.src[c]], c) != c:
            col.add("left-action-unit", (ids[c],), "1⇀c != c")
            break
    # right action laws: a↼(bc) = (a↼b)↼c and a↼1 = a
    for a, b in pairs:
        for c in G.star(G.tgt[b]):
            if R.r(a, G.mul(b, c)) != R.r(R.r(a, b), c):
                col.add("right-action", (ids[a], ids[b], ids[c]))
                break
        if col.seen("right-action"):
            break
    for a in range(G.n_arrows):
        if R.r(a, G.unit[G.tgt[a]]) != a:
            col.add("right-action-unit", (ids[a],), "a↼1 != a")
            break
    # matched-pair laws
    for a, b in pairs:
        for c in G.star(G.tgt[b]):
            if R.l(a, G.mul(b, c)) != G.mul(R.l(a, b), R.l(R.r(a, b), c)):
                col.add("matched-left", (ids[a], ids[b], ids[c]))
                break
        if col.seen("matched-left"):
            break
    for a, b in pairs:
        for c in G.star(G.tgt[b]):
            if R.r(G.mul(a, b), c) != G.mul(R.r(a, R.l(b, c)), R.r(b, c)):
                col.add("matched-right", (ids[a], ids[b], ids[c]))
                break
        if col.seen("matched-right"):
            break
    for a in range(G.n_arrows):
        if R.l(a, G.unit[G.tgt[a]]) != G.unit[G.src[a]]:
            col.add("unit-law", (ids[a],), "a⇀1 != 1")
            break
        if R.r(G.unit[G.src[a]], a) != G.unit[G.tgt[a]]:
            col.add("unit-law", (ids[a],), "1↼a != 1")
            break
    return col.report()


def invert_braiding(R):
    """The inverse permutation of composable pairs, re-split into the two actions."""
    rep = validate_braiding(R)
    if not rep.ok:
        raise StructureError(f"not a braiding: {rep}")
    lact, ract = {}, {}
    for a, b in R.gpd.base.composable_pairs():
        l, r = R.map_pair(a, b)
        lact[(l, r)] = a
        ract[(l, r)] = b
    return Braiding(R.gpd, lact, ract)


def braiding_from_heap(H):
    """The braiding r([a,b]⊗[b,c]) = [a,<a,b,c>]⊗[<a,b,c>,c] on the coarse groupoid."""
    rep = validate_heap(H)
    if not rep.ok:
        raise StructureError(f"not a heap: {rep}")
    G = coarse_groupoid(H.carrier)
    n = H.size

    def idx(i, j):
        return i * n + j

    lact, ract = {}, {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                h = H.op(a, b, c)
                lact[(idx(a, b), idx(b, c))] = idx(a, h)
                ract[(idx(a, b), idx(b, c))] = idx(h, c)
    return Braiding(G, lact, ract)


def coarse_qskb(H):
    """The coarse quiver skew brace of a heap: [a,b] +_a [a,c] = [a,<b,a,c>]."""
    rep = validate_heap(H)
    if not rep.ok:
        raise StructureError(f"not a heap: {rep}")
    G = coarse_groupoid(H.carrier)
    n = H.size

    def idx(i, j):
        return i * n + j

    add = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                add[(idx(a, b), idx(a, c))] = idx(a, H.op(b, a, c))
    return QuiverSkewBrace(G, add)


def flip_candidate(R_gpd):
    """The would-be flip a⊗b -> b⊗a, as Braiding tables (usually not valid)."""
    lact, ract = {}, {}
    for a, b in R_gpd.base.composable_pairs():
        lact[(a, b)] = b
        ract[(a, b)] = a
    return Braiding(R_gpd, lact, ract)


def maximal_coarse_subgroupoid(G, zeta=0):
    """A wide Schurian subgroupoid with one arrow per ordered pair, from the
    least-arrow transversal out of the chosen base vertex."""
    from .groupoid import Subgroupoid

    if not is_connected(G):
        raise StructureError("groupoid is not connected")
    trans = []
    for v in range(G.n_vertices):
        if v == zeta:
            trans.append(G.unit[zeta])
        else:
            cand = [x for x in G.star(zeta) if G.tgt[x] == v]
            trans.append(cand[0])
    arrows = set()
    for a in range(G.n_vertices):
        for b in range(G.n_vertices):
            arrows.add(G.mul(G.inv[trans[a]], trans[b]))
    return Subgroupoid(G, frozenset(range(G.n_vertices)), frozenset(arrows))


def _coarse_sub_arrow(G, U, a, b):
    """The unique arrow a -> b of a Schurian wide subgroupoid U."""
    cand = [x for x in sorted(U.arrows) if G.src[x] == a and G.tgt[x] == b]
    if len(cand) != 1:
        raise StructureError("subgroupoid is not coarse: arrow count != 1 per pair")
    return cand[0]


def parallelise_check(B, zeta, U):
    """Verify that every star addition is the transport of the one at zeta:

        a +_λ b = [ζ,λ]^{-1}·< [ζ,λ]a, [ζ,λ], [ζ,λ]b >_ζ

    with [ζ,λ] the unique U-arrow from ζ to λ.
    """
    G = B.gpd
    if not is_connected(G):
        raise StructureError("structure is not connected")
    if not U.is_wide() or not U.is_subgroupoid():
        raise StructureError("U is not a wide subgroupoid")
    for a in range(G.n_vertices):
        for b in range(G.n_vertices):
            _coarse_sub_arrow(G, U, a, b)  # raises when not Schurian-coarse
    for lam in range(G.n_vertices):
        t = _coarse_sub_arrow(G, U, zeta, lam)
        ti = G.inv[t]
        for a in B.star(lam):
            for b in B.star(lam):
                transported = G.mul(
                    ti, B.minus_plus(G.mul(t, a), t, G.mul(t, b))
                )
                if transported != B.plus(a, b):
                    return False
    return True


def check_yang_baxter(R):
    """The braid relation (r⊗id)(id⊗r)(r⊗id) = (id⊗r)(r⊗id)(id⊗r) on triples."""
    G = R.gpd
    col = ReportCollector()

    def r12(t):
        a, b, c = t
        l, r = R.map_pair(a, b)
        return (l, r, c)

    def r23(t):
        a, b, c = t
        l, r = R.map_pair(b, c)
        return (a, l, r)

    for a in range(G.n_arrows):
        for b in G.star(G.tgt[a]):
            for c in G.star(G.tgt[b]):
                t = (a, b, c)
                lhs = r12(r23(r12(t)))
                rhs = r23(r12(r23(t)))
                if lhs != rhs:
                    col.add(
                        "yang-baxter",
                        (G.arrows[a], G.arrows[b], G.arrows[c]),
                    )
                    return col.report()
    return col.report()

"""Morphisms and quasimorphisms, kernels, ideals and ideal bundles, and
quotients of quiver skew braces."""

from __future__ import annotations

from dataclasses import dataclass

from .brace import QuiverSkewBrace, braiding_from_qskb, validate_qskb
from .groupoid import (
    Subgroupoid,
    is_groupoid_morphism,
    is_normal_subgroupoid,
    quotient_groupoid,
    units_subgroupoid,
)
from .quiver import QuiverMorphism, validate_quiver_morphism
from .report import Report, ReportCollector, StructureError

# A morphism of quiver skew braces is a groupoid morphism whose arrow map is a
# group homomorphism star by star; no extra data is needed beyond the pair of
# lookup tables.
QskbMorphism = QuiverMorphism


@dataclass(frozen=True)
class IdealCandidate:
    """A subgroupoid proposed as an ideal; `bundle` is true when all arrows are loops."""

    sub: Subgroupoid

    @property
    def bundle(self):
        G = self.sub.parent
        return all(G.is_loop(x) for x in self.sub.arrows)

    @property
    def arrows(self):
        return self.sub.arrows

    @property
    def vertices(self):
        return self.sub.vertices

    def arrow_ids(self):
        return self.sub.arrow_ids()

    def __len__(self):
        return len(self.sub.arrows)


def is_qskb_morphism(f, A, B):
    """Groupoid morphism + additive homomorphism on every star."""
    col = ReportCollector()
    rep = is_groupoid_morphism(f, A.gpd, B.gpd)
    if not rep.ok:
        return rep
    for v in range(A.n_vertices):
        st = A.star(v)
        hit = False
        for a in st:
            for b in st:
                if B.plus(f.f1[a], f.f1[b]) != f.f1[A.plus(a, b)]:
                    col.add("additive", (A.arrows[a], A.arrows[b]))
                    hit = True
                    break
            if hit:
                break
        if hit:
            break
    return col.report()


def is_braided_morphism(f, R_A, R_B):
    """Morphism of braided structures.

    Requires f to be a groupoid morphism, demands that consecutive image
    pairs come from consecutive pairs, and that f intertwines the braidings.
    """
    col = ReportCollector()
    GA = R_A.gpd
    GB = R_B.gpd
    rep = is_groupoid_morphism(f, GA, GB)
    if not rep.ok:
        return rep
    for x in range(GA.n_arrows):
        for y in range(GA.n_arrows):
            images_consecutive = GB.tgt[f.f1[x]] == GB.src[f.f1[y]]
            if not images_consecutive:
                continue
            if GA.tgt[x] != GA.src[y]:
                col.add(
                    "reflects-consecutive",
                    (GA.arrows[x], GA.arrows[y]),
                    "images consecutive, sources not",
                )
                return col.report()
            l, r = R_A.map_pair(x, y)
            if (f.f1[l], f.f1[r]) != R_B.map_pair(f.f1[x], f.f1[y]):
                col.add("braiding-compatibility", (GA.arrows[x], GA.arrows[y]))
                return col.report()
    return col.report()


def is_braided_quasimorphism(f, R_A, R_B):
    """Braiding compatibility only where both sides are defined."""
    col = ReportCollector()
    GA = R_A.gpd
    GB = R_B.gpd
    rep = is_groupoid_morphism(f, GA, GB)
    if not rep.ok:
        return rep
    for x, y in GA.base.composable_pairs():
        if GB.tgt[f.f1[x]] != GB.src[f.f1[y]]:
            continue
        l, r = R_A.map_pair(x, y)
        if (f.f1[l], f.f1[r]) != R_B.map_pair(f.f1[x], f.f1[y]):
            col.add("braiding-compatibility", (GA.arrows[x], GA.arrows[y]))
            return col.report()
    return col.report()


def kernel(f, A, B):
    """The ideal of arrows mapped to a unit; vertices are all of the source's."""
    rep = is_qskb_morphism(f, A, B)
    if not rep.ok:
        raise StructureError(f"not a morphism of quiver skew braces: {rep}")
    units = set(B.gpd.unit)
    arrows = frozenset(x for x in range(A.n_arrows) if f.f1[x] in units)
    cand = IdealCandidate(Subgroupoid(A.gpd, frozenset(range(A.n_vertices)), arrows))
    check = is_ideal(A, cand)
    if not check.ok:
        raise StructureError(f"kernel failed the ideal laws: {check}")
    return cand


def _as_subgroupoid(I):
    return I.sub if isinstance(I, IdealCandidate) else I


def is_ideal(G, I, braiding=None):
    """All ideal laws, one witness per failed law.

    Laws, in reporting order: normal subgroupoid (multiplicative), additive
    subgroup per star, additive normality (a + S = S + a), and invariance of
    the stars under the left action ⇀.
    """
    sub = _as_subgroupoid(I)
    closure = sub.closure_report()
    if not closure.ok:
        raise StructureError(f"not a subgroupoid: {closure}")
    col = ReportCollector()
    norm = is_normal_subgroupoid(G.gpd, sub)
    if not norm.ok:
        col.add(
            "normal-subgroupoid", norm.failures[0].witness, norm.failures[0].law
        )
    ids = G.arrows
    star_of = {
        v: tuple(x for x in G.star(v) if x in sub.arrows)
        for v in range(G.n_vertices)
    }
    # additive subgroup per star (neutral is the unit, present by wideness)
    for v in range(G.n_vertices):
        st = star_of.get(v, ())
        hit = False
        for i in st:
            for j in st:
                if G.plus(i, j) not in sub.arrows:
                    col.add("additive-subgroup", (ids[i], ids[j]))
                    hit = True
                    break
            if not hit and G.neg(i) not in sub.arrows:
                col.add("additive-subgroup", (ids[i],), "inverse escapes")
                hit = True
            if hit:
                break
        if hit:
            break
    # additive normality: a + St_I(src a) = St_I(src a) + a
    for a in range(G.n_arrows):
        st = star_of[G.src[a]]
        left = {G.plus(a, i) for i in st}
        right = {G.plus(i, a) for i in st}
        if left != right:
            col.add("additive-normality", (ids[a],))
            break
    # invariance: a ⇀ St_I(tgt a) ⊆ St_I(src a)
    if braiding is None:
        for a in range(G.n_arrows):
            hit = False
            for i in star_of[G.tgt[a]]:
                img = G.plus(G.neg(a), G.mul(a, i))
                if img not in sub.arrows:
                    col.add("invariance", (ids[a], ids[i]))
                    hit = True
                    break
            if hit:
                break
    else:
        for a in range(G.n_arrows):
            hit = False
            for i in star_of[G.tgt[a]]:
                if braiding.l(a, i) not in sub.arrows:
                    col.add("invariance", (ids[a], ids[i]))
                    hit = True
                    break
            if hit:
                break
    return col.report()


def is_ideal_bundle(G, I):
    """An ideal all of whose arrows are loops."""
    sub = _as_subgroupoid(I)
    rep = is_ideal(G, I)
    if not rep.ok:
        return rep
    col = ReportCollector()
    for x in sorted(sub.arrows):
        if not G.is_loop(x):
            col.add("bundle", (G.arrows[x],), "non-loop arrow")
            break
    return col.report()


def check_left_harpoon_invariance(G, I):
    """i ↼ g stays in the ideal whenever i⊗g is defined (a theorem for ideals)."""
    sub = _as_subgroupoid(I)
    rep = is_ideal(G, I)
    if not rep.ok:
        raise StructureError(f"not an ideal: {rep}")
    R = braiding_from_qskb(G)
    for i in sorted(sub.arrows):
        for g in G.star(G.tgt[i]):
            if R.r(i, g) not in sub.arrows:
                return False
    return True


def quotient_qskb(G, I):
    """Quotient quiver skew brace and its projection.

    The addition on classes is computed from least representatives, then
    re-verified exhaustively over all representative pairs; the projection is
    strong exactly when the ideal is a bundle.
    """
    sub = _as_subgroupoid(I)
    rep = is_ideal(G, I)
    if not rep.ok:
        raise StructureError(f"not an ideal: {rep}")
    Q, pi = quotient_groupoid(G.gpd, sub)
    # members of each arrow class, grouped by source vertex
    fibers = {}
    for x in range(G.n_arrows):
        fibers.setdefault(pi.f1[x], []).append(x)
    add = {}
    for v in range(Q.n_vertices):
        st = Q.star(v)
        for ka in st:
            for kb in st:
                result = None
                for a in fibers[ka]:
                    for b in fibers[kb]:
                        if G.src[a] != G.src[b]:
                            continue
                        val = pi.f1[G.plus(a, b)]
                        if result is None:
                            result = val
                        elif val != result:
                            raise StructureError(
                                "quotient addition is not well-defined at "
                                f"({G.arrows[a]}, {G.arrows[b]})"
                            )
                if result is None:
                    raise StructureError("no common-source representatives in a star")
                add[(ka, kb)] = result
    QB = QuiverSkewBrace(Q, add)
    check = validate_qskb(QB)
    if not check.ok:
        raise StructureError(f"quotient failed validation: {check}")
    mrep = is_qskb_morphism(pi, G, QB)
    if not mrep.ok:
        raise StructureError(f"projection is not a morphism: {mrep}")
    return QB, pi


def image_subgroupoid(f, A, B):
    """The image arrow/vertex sets of a morphism, as a Subgroupoid of the target."""
    return Subgroupoid(
        B.gpd if isinstance(B, QuiverSkewBrace) else B,
        frozenset(f.f0),
        frozenset(f.f1),
    )

"""Finite quivers, quiver morphisms, outgoing stars, and the tensor product."""

from __future__ import annotations

from dataclasses import dataclass

from .report import Failure, Report, ReportCollector, StructureError


class Quiver:
    """A finite directed multigraph.

    Vertices and arrows are ordered lists of unique string identifiers; all
    operations work on dense integer indices into those lists, and every
    iteration follows the declared order, so results are deterministic.
    Parallel arrows and isolated vertices are allowed.
    """

    def __init__(self, vertices, arrows):
        """`arrows` is a sequence of (id, src_id, tgt_id) triples."""
        self.vertices = tuple(str(v) for v in vertices)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        if len(self._vindex) != len(self.vertices):
            raise StructureError("duplicate vertex identifiers")
        ids, src, tgt = [], [], []
        for aid, s, t in arrows:
            aid = str(aid)
            ids.append(aid)
            try:
                src.append(self._vindex[str(s)])
                tgt.append(self._vindex[str(t)])
            except KeyError as exc:
                raise StructureError(f"arrow {aid!r} uses unknown vertex {exc.args[0]!r}")
        self.arrows = tuple(ids)
        self._aindex = {a: i for i, a in enumerate(self.arrows)}
        if len(self._aindex) != len(self.arrows):
            raise StructureError("duplicate arrow identifiers")
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        stars = [[] for _ in self.vertices]
        for x, s in enumerate(self.src):
            stars[s].append(x)
        self._stars = tuple(tuple(s) for s in stars)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_arrows(self):
        return len(self.arrows)

    def v(self, vid):
        """Index of a vertex identifier."""
        try:
            return self._vindex[str(vid)]
        except KeyError:
            raise StructureError(f"unknown vertex {vid!r}")

    def a(self, aid):
        """Index of an arrow identifier."""
        try:
            return self._aindex[str(aid)]
        except KeyError:
            raise StructureError(f"unknown arrow {aid!r}")

    def star(self, v):
        """Arrows with source v, in arrow order."""
        if not 0 <= v < len(self.vertices):
            raise StructureError(f"unknown vertex index {v}")
        return self._stars[v]

    def arrows_between(self, a, b):
        return tuple(x for x in self._stars[a] if self.tgt[x] == b)

    def is_loop(self, x):
        return self.src[x] == self.tgt[x]

    def composable_pairs(self):
        """All pairs (x, y) with tgt(x) = src(y), in lexicographic index order."""
        for x in range(len(self.arrows)):
            for y in self._stars[self.tgt[x]]:
                yield (x, y)

    def arrow_triple(self, x):
        return (self.arrows[x], self.vertices[self.src[x]], self.vertices[self.tgt[x]])

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
            and self.src == other.src
            and self.tgt == other.tgt
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows, self.src, self.tgt))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


@dataclass(frozen=True)
class TensorPair:
    """A consecutive arrow pair x⊗y of a tensor product (indices into the factors)."""

    left: int
    right: int


class TensorQuiver(Quiver):
    """Tensor product quiver; keeps the factor pair behind each arrow."""

    def __init__(self, vertices, arrows, pairs):
        super().__init__(vertices, arrows)
        self.pairs = tuple(pairs)


def tensor(Q, R):
    """Tensor product over a common vertex set.

    Arrows are the consecutive pairs x⊗y with tgt(x) = src(y); the product
    arrow runs src(x) -> tgt(y).  Arrow order is lexicographic in (left, right).
    """
    if Q.vertices != R.vertices:
        raise StructureError("tensor factors must share the same vertex set")
    arrows, pairs = [], []
    for x in range(Q.n_arrows):
        for y in R.star(Q.tgt[x]):
            arrows.append(
                (
                    f"{Q.arrows[x]}⊗{R.arrows[y]}",
                    Q.vertices[Q.src[x]],
                    R.vertices[R.tgt[y]],
                )
            )
            pairs.append(TensorPair(x, y))
    return TensorQuiver(Q.vertices, arrows, pairs)


@dataclass(frozen=True)
class QuiverMorphism:
    """A pair of total lookup tables f1 on arrows and f0 on vertices.

    `strong` asserts that the morphism fixes a shared vertex set pointwise.
    """

    f1: tuple
    f0: tuple
    strong: bool = False

    @classmethod
    def from_ids(cls, Q, R, f0, f1, strong=False):
        """Build from id->id dicts; tables must be total on Q."""
        try:
            v = tuple(R.v(f0[vid]) for vid in Q.vertices)
            a = tuple(R.a(f1[aid]) for aid in Q.arrows)
        except KeyError as exc:
            raise StructureError(f"morphism table missing entry for {exc.args[0]!r}")
        return cls(f1=a, f0=v, strong=strong)

    @classmethod
    def identity(cls, Q, strong=True):
        return cls(
            f1=tuple(range(Q.n_arrows)), f0=tuple(range(Q.n_vertices)), strong=strong
        )

    def vertex_image(self, v):
        return self.f0[v]

    def arrow_image(self, x):
        return self.f1[x]


def compose_morphisms(g, f):
    """g after f (apply f first)."""
    return QuiverMorphism(
        f1=tuple(g.f1[x] for x in f.f1),
        f0=tuple(g.f0[v] for v in f.f0),
        strong=f.strong and g.strong,
    )


def validate_quiver_morphism(f, Q, R):
    """Check the source/target commuting squares; with `strong`, also f0 = id."""
    col = ReportCollector()
    if len(f.f0) != Q.n_vertices or len(f.f1) != Q.n_arrows:
        return Report((Failure("totality", (), "tables not total on the source"),))
    for v in f.f0:
        if not 0 <= v < R.n_vertices:
            return Report((Failure("totality", (), "vertex image out of range"),))
    for x in f.f1:
        if not 0 <= x < R.n_arrows:
            return Report((Failure("totality", (), "arrow image out of range"),))
    for x in range(Q.n_arrows):
        if R.src[f.f1[x]] != f.f0[Q.src[x]]:
            col.add("source-square", (Q.arrows[x],))
        if R.tgt[f.f1[x]] != f.f0[Q.tgt[x]]:
            col.add("target-square", (Q.arrows[x],))
    if f.strong:
        if Q.vertices != R.vertices:
            col.add("strong", (), "vertex sets differ")
        else:
            for v in range(Q.n_vertices):
                if f.f0[v] != v:
                    col.add("strong", (Q.vertices[v],), "vertex not fixed")
                    break
    return col.report()

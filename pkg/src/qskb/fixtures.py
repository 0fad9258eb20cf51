"""Shared worked examples used by the test suite, the docs, and `qskb example`."""

from __future__ import annotations

from functools import lru_cache

from .brace import QuiverSkewBrace, coarse_qskb
from .groupoid import coarse_groupoid, group_groupoid
from .heap import GroupTable, Heap, cyclic_group
from .quiver import QuiverMorphism


@lru_cache(maxsize=None)
def fix_h2():
    """The unique heap on {0,1}: <a,b,c> = a xor b xor c."""
    tern = [[[a ^ b ^ c for c in (0, 1)] for b in (0, 1)] for a in (0, 1)]
    return Heap(["0", "1"], tern)


@lru_cache(maxsize=None)
def fix_c2():
    """The coarse groupoid on {0,1}."""
    return coarse_groupoid(["0", "1"])


@lru_cache(maxsize=None)
def fix_qc2():
    """The coarse quiver skew brace on {0,1}: [a,b] +_a [a,c] = [a, b-a+c mod 2]."""
    return coarse_qskb(fix_h2())


@lru_cache(maxsize=None)
def fix_b4():
    """The one-vertex quiver skew brace on {0,1,2,3}: multiplication mod 4,
    addition the Klein four-group under the 2-bit encoding (xor)."""
    gpd = group_groupoid(cyclic_group(4))
    add = {(a, b): a ^ b for a in range(4) for b in range(4)}
    return QuiverSkewBrace(gpd, add)


@lru_cache(maxsize=None)
def fix_f():
    """The quotient-like map from the coarse structure on {0,1} into the
    4-element structure: [0,1] -> 1, [1,0] -> 3, loops -> 0."""
    qc2, b4 = fix_qc2(), fix_b4()
    return QuiverMorphism.from_ids(
        qc2.gpd.base,
        b4.gpd.base,
        f0={"0": "*", "1": "*"},
        f1={"[0,0]": "0", "[0,1]": "1", "[1,0]": "3", "[1,1]": "0"},
    )


@lru_cache(maxsize=None)
def fix_w():
    """A connected 2-vertex structure with 4-element stars whose loop bundle is
    not invariant under the left action (hence not an ideal); first witness in
    canonical search order."""
    from .search import find_loop_nonideal_witness

    found = find_loop_nonideal_witness(2, 4)
    if found is None:
        raise RuntimeError("witness search unexpectedly empty")
    return found[0]


@lru_cache(maxsize=None)
def fix_w_times_c2():
    """Direct product of the loop-witness structure with the coarse structure
    on the 2-element heap."""
    from .products import direct_product

    return direct_product(fix_w(), fix_h2())


FIXTURE_BUILDERS = {
    "c2": fix_c2,
    "h2": fix_h2,
    "qc2": fix_qc2,
    "b4": fix_b4,
    "f": fix_f,
    "w": fix_w,
    "w-times-c2": fix_w_times_c2,
}

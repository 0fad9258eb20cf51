"""Backtracking enumerators for small group tables, plus automorphism/hom helpers.

Everything here works on dense index tables (nested tuples), independent of any
quiver structure, and is deterministic: candidates are tried in increasing
order, so enumeration output is lexicographic in the flattened table.
"""

from __future__ import annotations

from itertools import permutations


def enumerate_group_tables(n, neutral=0):
    """All group multiplication tables on {0..n-1} with the given neutral element.

    Backtracking over cells in row-major order with Latin-square and
    incremental associativity pruning; yields nested tuples in lexicographic
    order of the flattened table.
    """
    if n <= 0:
        return
    cells = [(i, j) for i in range(n) for j in range(n) if i != neutral and j != neutral]
    table = [[None] * n for _ in range(n)]
    for k in range(n):
        table[neutral][k] = k
        table[k][neutral] = k

    def assoc_ok(i, j):
        # check all triples whose three needed products are already known and
        # that involve the fresh cell (i, j)
        for a in range(n):
            ij = table[i][j]
            # (a i) j vs a (i j)
            ai = table[a][i]
            if ai is not None and table[ai][j] is not None and table[a][ij] is not None:
                if table[ai][j] != table[a][ij]:
                    return False
            # (i j) a vs i (j a)
            ja = table[j][a]
            if ja is not None and table[ij][a] is not None and table[i][ja] is not None:
                if table[ij][a] != table[i][ja]:
                    return False
            # (i a) ? vs i (a ?) handled when those cells are set
        return True

    def fill(pos):
        if pos == len(cells):
            yield tuple(tuple(row) for row in table)
            return
        i, j = cells[pos]
        row_used = {x for x in table[i] if x is not None}
        col_used = {table[r][j] for r in range(n) if table[r][j] is not None}
        for v in range(n):
            if v in row_used or v in col_used:
                continue
            table[i][j] = v
            if assoc_ok(i, j):
                yield from fill(pos + 1)
            table[i][j] = None

    yield from fill(0)


def is_group_table(mul, neutral=None):
    """Full check: totality is assumed, verifies unit, associativity, inverses."""
    n = len(mul)
    if neutral is None:
        neutral = find_neutral(mul)
        if neutral is None:
            return False
    for k in range(n):
        if mul[neutral][k] != k or mul[k][neutral] != k:
            return False
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                    return False
    for a in range(n):
        if not any(mul[a][b] == neutral and mul[b][a] == neutral for b in range(n)):
            return False
    return True


def find_neutral(mul):
    n = len(mul)
    for e in range(n):
        if all(mul[e][k] == k and mul[k][e] == k for k in range(n)):
            return e
    return None


def table_inverse(mul, neutral):
    n = len(mul)
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if mul[a][b] == neutral and mul[b][a] == neutral:
                inv[a] = b
                break
    return tuple(inv)


def automorphisms(mul, neutral):
    """All permutations fixing the table (brute force; fine for n <= 8)."""
    n = len(mul)
    out = []
    others = [k for k in range(n) if k != neutral]
    for perm in permutations(others):
        sigma = [None] * n
        sigma[neutral] = neutral
        for k, img in zip(others, perm):
            sigma[k] = img
        if all(sigma[mul[a][b]] == mul[sigma[a]][sigma[b]] for a in range(n) for b in range(n)):
            out.append(tuple(sigma))
    return out


def homomorphisms(mul_a, neutral_a, mul_b, neutral_b):
    """All maps f with f(xy) = f(x)f(y); brute force over element images."""
    n, m = len(mul_a), len(mul_b)
    out = []

    def extend(f, pos):
        if pos == n:
            out.append(tuple(f))
            return
        if pos == neutral_a:
            f.append(neutral_b)
            extend(f, pos + 1)
            f.pop()
            return
        for img in range(m):
            f.append(img)
            ok = True
            for x in range(pos + 1):
                for y in range(pos + 1):
                    z = mul_a[x][y]
                    if z <= pos and mul_b[f[x]][f[y]] != f[z]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                extend(f, pos + 1)
            f.pop()

    extend([], 0)
    return out


def isomorphisms(mul_a, neutral_a, mul_b, neutral_b):
    if len(mul_a) != len(mul_b):
        return []
    return [
        f
        for f in homomorphisms(mul_a, neutral_a, mul_b, neutral_b)
        if len(set(f)) == len(f)
    ]

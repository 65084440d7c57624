"""Exact integer Smith normal form, dense and sparse.

Two front ends:

* ``smith_normal_form`` is the classical dense algorithm returning full
  unimodular transforms and their inverses; intended for small matrices.

* ``sparse_elimination`` diagonalizes a sparse integer matrix recording row
  operations as a replayable log (and column operations on request).  The log
  is enough to classify cokernel elements and to solve linear systems without
  materializing transform matrices, which keeps the normalized bar complexes
  of order-12 groups tractable.

All arithmetic is arbitrary-precision Python int.  No floating point.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd


# ---------------------------------------------------------------------------
# dense SNF with full transforms
# ---------------------------------------------------------------------------


@dataclass
class DenseSNF:
    """U * A * V = D with D in canonical invariant-factor form."""

    u: list[list[int]]
    d: list[list[int]]
    v: list[list[int]]
    u_inv: list[list[int]]
    v_inv: list[list[int]]

    @property
    def diagonal(self) -> list[int]:
        k = min(len(self.d), len(self.d[0]) if self.d else 0)
        return [self.d[i][i] for i in range(k)]

    def invariant_factors(self) -> list[int]:
        return [x for x in self.diagonal if x != 0]


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(a: list[list[int]]) -> DenseSNF:
    """Dense SNF.  Returns U, D, V and the exact integer inverses of U, V."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, row)) for row in a]
    u = _identity(m)
    ui = _identity(m)
    v = _identity(n)
    vi = _identity(n)

    def row_add(i, j, c):
        # row_j += c * row_i
        for k in range(n):
            d[j][k] += c * d[i][k]
        for k in range(m):
            u[j][k] += c * u[i][k]
        for k in range(m):
            ui[k][i] -= c * ui[k][j]

    def row_swap(i, j):
        if i == j:
            return
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for k in range(m):
            ui[k][i], ui[k][j] = ui[k][j], ui[k][i]

    def row_neg(i):
        for k in range(n):
            d[i][k] = -d[i][k]
        for k in range(m):
            u[i][k] = -u[i][k]
        for k in range(m):
            ui[k][i] = -ui[k][i]

    def col_add(i, j, c):
        # col_j += c * col_i
        for k in range(m):
            d[k][j] += c * d[k][i]
        for k in range(n):
            v[k][j] += c * v[k][i]
        for k in range(n):
            vi[i][k] -= c * vi[j][k]

    def col_swap(i, j):
        if i == j:
            return
        for k in range(m):
            d[k][i], d[k][j] = d[k][j], d[k][i]
        for k in range(n):
            v[k][i], v[k][j] = v[k][j], v[k][i]
        vi[i], vi[j] = vi[j], vi[i]

    t = 0
    while t < m and t < n:
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0 and (pivot is None
                                     or abs(d[i][j]) < abs(d[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])
        while True:
            clean = True
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    row_add(t, i, -q)
                    if d[i][t]:
                        row_swap(t, i)
                        clean = False
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    col_add(t, j, -q)
                    if d[t][j]:
                        col_swap(t, j)
                        clean = False
            if clean:
                break
        if d[t][t] < 0:
            row_neg(t)
        # pivot must divide the remaining submatrix for the canonical chain
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i][j] % d[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(offender, t, 1)
            continue
        t += 1
    return DenseSNF(u=u, d=d, v=v, u_inv=ui, v_inv=vi)


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai, oi = a[i], out[i]
        for k in range(inner):
            c = ai[k]
            if c:
                bk = b[k]
                for j in range(cols):
                    oi[j] += c * bk[j]
    return out


# ---------------------------------------------------------------------------
# sparse elimination with op logs
# ---------------------------------------------------------------------------


@dataclass
class Pivot:
    row: int
    col: int
    value: int  # signed


@dataclass
class SparseElimination:
    """Result of diagonalizing a sparse integer matrix.

    After replaying ``row_ops`` on a vector z (giving y = U z) the image
    lattice of the matrix is span{ value * e_row } over the pivots, so the
    cokernel coordinate of z at a pivot row is y[row] mod |value|, and at a
    non-pivot row it is y[row] over Z.

    When column ops were recorded, pivot rows were fully cleared as well and
    the diagonalization is exact (U A V has only the pivot entries), which is
    what ``solve`` relies on.
    """

    nrows: int
    ncols: int
    pivots: list[Pivot]
    row_ops: list[tuple[int, int, int]]          # (src, dst, c): row_dst += c*row_src
    col_ops: list[tuple[int, int, int]] | None   # (src, dst, c): col_dst += c*col_src

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def pivot_rows(self) -> set[int]:
        return {p.row for p in self.pivots}

    def apply_row_ops(self, vec: dict[int, int]) -> dict[int, int]:
        """y = U z for a sparse vector z = {row: value}."""
        y = dict(vec)
        for src, dst, c in self.row_ops:
            a = y.get(src)
            if a:
                b = y.get(dst, 0) + c * a
                if b:
                    y[dst] = b
                else:
                    y.pop(dst, None)
        return y

    def apply_row_ops_inverse(self, vec: dict[int, int]) -> dict[int, int]:
        """w = U^-1 y: inverse elementary ops replayed in reverse order."""
        y = dict(vec)
        for src, dst, c in reversed(self.row_ops):
            a = y.get(src)
            if a:
                b = y.get(dst, 0) - c * a
                if b:
                    y[dst] = b
                else:
                    y.pop(dst, None)
        return y

    def apply_col_ops_to_solution(self, xprime: dict[int, int]) -> dict[int, int]:
        """x = V x' where V is the product of the recorded column ops."""
        if self.col_ops is None:
            raise ValueError("column ops were not recorded")
        x = dict(xprime)
        for src, dst, c in reversed(self.col_ops):
            a = x.get(dst)
            if a:
                b = x.get(src, 0) + c * a
                if b:
                    x[src] = b
                else:
                    x.pop(src, None)
        return x

    def solve(self, z: dict[int, int]) -> dict[int, int] | None:
        """One integer solution x of A x = z, or None when unsolvable.

        Requires column ops to have been recorded.
        """
        y = self.apply_row_ops(z)
        xprime: dict[int, int] = {}
        for p in self.pivots:
            a = y.pop(p.row, 0)
            if a % p.value:
                return None
            q = a // p.value
            if q:
                xprime[p.col] = q
        if any(y.values()):
            return None
        return self.apply_col_ops_to_solution(xprime)


def sparse_elimination(nrows: int, ncols: int,
                       columns: dict[int, dict[int, int]],
                       record_row_ops: bool = True,
                       record_col_ops: bool = False,
                       pivot_seed: int = 0) -> SparseElimination:
    """Diagonalize an integer matrix given column-wise as {col: {row: value}}.

    Phase 1 eliminates greedily on +-1 entries with a fill-minimizing
    heuristic.  Phase 2 runs the classical gcd dance on the remainder, which
    for bar-complex boundaries is small.  pivot_seed perturbs tie-breaking
    only; every seed yields a valid diagonalization of the same matrix.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for c, colmap in columns.items():
        for r, v in colmap.items():
            if v:
                rows.setdefault(r, {})[c] = v
                cols.setdefault(c, set()).add(r)

    row_ops: list[tuple[int, int, int]] = []
    col_ops: list[tuple[int, int, int]] | None = [] if record_col_ops else None
    pivots: list[Pivot] = []
    active_rows = set(rows.keys())
    active_cols = set(cols.keys())

    def tiebreak(idx: int) -> int:
        if pivot_seed == 0:
            return idx
        return (idx * 2654435761 + pivot_seed) & 0x7FFFFFFF

    def row_add(src: int, dst: int, c: int):
        if record_row_ops:
            row_ops.append((src, dst, c))
        rd = rows.setdefault(dst, {})
        for col, v in rows[src].items():
            nv = rd.get(col, 0) + c * v
            if nv:
                if col not in rd:
                    cols.setdefault(col, set()).add(dst)
                rd[col] = nv
            else:
                if col in rd:
                    del rd[col]
                    cols[col].discard(dst)

    def col_add(src: int, dst: int, c: int):
        if col_ops is not None:
            col_ops.append((src, dst, c))
        for r in list(cols.get(src, ())):
            v = rows[r][src]
            nv = rows[r].get(dst, 0) + c * v
            if nv:
                if dst not in rows[r]:
                    cols.setdefault(dst, set()).add(r)
                rows[r][dst] = nv
            else:
                if dst in rows[r]:
                    del rows[r][dst]
                    cols[dst].discard(r)

    def clear_pivot_row_by_col_ops(pr: int, pc: int):
        # only valid once column pc = value*e_pr; touches row pr alone
        pv = rows[pr][pc]
        for cc in list(rows[pr].keys()):
            if cc == pc:
                continue
            q = rows[pr][cc] // pv
            col_add(pc, cc, -q)
            if rows[pr].get(cc):
                raise AssertionError("pivot row clearing left a remainder")

    def detach(r: int, c: int):
        for col in list(rows.get(r, {})):
            cols[col].discard(r)
            if not cols[col]:
                cols.pop(col, None)
        rows.pop(r, None)
        for rr in list(cols.get(c, ())):
            rows[rr].pop(c, None)
        cols.pop(c, None)
        active_rows.discard(r)
        active_cols.discard(c)

    # ---- phase 1: unit pivots ----
    heap: list[tuple[int, int, int]] = []
    for c in active_cols:
        heapq.heappush(heap, (len(cols[c]), tiebreak(c), c))

    def push_col(c):
        if c in active_cols and cols.get(c):
            heapq.heappush(heap, (len(cols[c]), tiebreak(c), c))

    while heap:
        deg, _, c = heapq.heappop(heap)
        if c not in active_cols or not cols.get(c):
            continue
        if deg != len(cols[c]):
            push_col(c)
            continue
        best = None
        for r in cols[c]:
            v = rows[r][c]
            if v in (1, -1):
                key = (len(rows[r]), tiebreak(r))
                if best is None or key < best[0]:
                    best = (key, r, v)
        if best is None:
            continue  # no unit entry: leave for phase 2
        _, pr, pv = best
        for r in list(cols[c]):
            if r != pr:
                row_add(pr, r, -rows[r][c] * pv)
        if record_col_ops:
            clear_pivot_row_by_col_ops(pr, c)
        pivots.append(Pivot(row=pr, col=c, value=pv))
        touched = [col for col in rows[pr] if col != c]
        detach(pr, c)
        for tc in touched:
            push_col(tc)

    # ---- phase 2: gcd elimination on the remainder ----
    while True:
        entry = None
        for c in sorted(active_cols, key=tiebreak):
            rs = cols.get(c)
            if not rs:
                continue
            for r in rs:
                v = abs(rows[r][c])
                if entry is None or (v, tiebreak(c), tiebreak(r)) < entry[0]:
                    entry = ((v, tiebreak(c), tiebreak(r)), r, c)
        if entry is None:
            break
        _, prow, pc = entry
        while True:
            pv = rows[prow][pc]
            bad_r = next((r for r in cols[pc] if r != prow and rows[r][pc] % pv), None)
            if bad_r is not None:
                row_add(prow, bad_r, -(rows[bad_r][pc] // pv))
                prow = bad_r
                continue
            bad_c = next((cc for cc in rows[prow] if cc != pc and rows[prow][cc] % pv), None)
            if bad_c is not None:
                col_add(pc, bad_c, -(rows[prow][bad_c] // pv))
                pc = bad_c
                continue
            break
        pv = rows[prow][pc]
        for r in list(cols[pc]):
            if r != prow:
                row_add(prow, r, -(rows[r][pc] // pv))
        if record_col_ops:
            clear_pivot_row_by_col_ops(prow, pc)
        else:
            for cc in list(rows[prow].keys()):
                if cc != pc:
                    col_add(pc, cc, -(rows[prow][cc] // pv))
        pivots.append(Pivot(row=prow, col=pc, value=pv))
        detach(prow, pc)

    return SparseElimination(nrows=nrows, ncols=ncols, pivots=pivots,
                             row_ops=row_ops, col_ops=col_ops)


def invariant_factor_chain(values) -> list[int]:
    """Canonical divisibility chain from a multiset of nonzero pivot values.

    The cokernel of diag(values) is unchanged by replacing a pair (a, b)
    with (gcd, lcm); iterating yields d1 | d2 | ... with the 1s dropped.
    """
    vals = sorted(abs(v) for v in values if abs(v) != 1)
    changed = True
    while changed:
        changed = False
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if vals[j] % vals[i]:
                    g = gcd(vals[i], vals[j])
                    vals[i], vals[j] = g, vals[i] // g * vals[j]
                    changed = True
        vals.sort()
    return [v for v in vals if v != 1]

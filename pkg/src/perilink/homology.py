"""Integer homology of finite groups via the normalized bar complex.

C_k is free on k-tuples of non-identity elements; the boundary is the
alternating face sum with degenerate tuples dropped.  Homology in degree k
is read off the cokernel of the (k+1)-boundary: row operations recorded by
the sparse eliminator give a classifier from cycles to residue coordinates,
canonicalized into an invariant-factor chain.

On top of that sit the two obstruction products:

* ``pontryagin(G, mu, lam)``: the class of [mu|lam] - [lam|mu] in H_2(G) for
  a commuting pair, with ``pontryagin_sum`` its componentwise sum.

* ``jl_product(G, mu, lam)``: the secondary class for a conjugate meridional
  system with lambda in the commutator subgroup and vanishing primary sum.
  The degree-2 cycle is filled by a degree-3 chain over Z, pushed to the
  cyclic abelianization (where the filled cycle's boundary vanishes in the
  normalized complex), and classified in H_3 of the quotient modulo the
  pushforward of H_3 of the group.

Everything is exact; no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .groups import CapExceeded, FiniteGroup, abelianization, cyclic_group
from .snf import (
    SparseElimination,
    smith_normal_form,
    sparse_elimination,
)

DEFAULT_CAP_ORDER = 16


class ObstructionError(ValueError):
    """A product was requested outside its defining hypotheses."""


# ---------------------------------------------------------------------------
# bar complex
# ---------------------------------------------------------------------------


def bar_dim(order: int, k: int) -> int:
    return (order - 1) ** k


def bar_index(tup: tuple[int, ...], order: int) -> int:
    idx = 0
    for g in tup:
        idx = idx * (order - 1) + (g - 1)
    return idx


def bar_tuple(idx: int, order: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        out.append(idx % (order - 1) + 1)
        idx //= order - 1
    return tuple(reversed(out))


def bar_boundary(G: FiniteGroup, k: int,
                 cap_order: int | None = None) -> dict[int, dict[int, int]]:
    """Columns of the normalized bar boundary C_k -> C_(k-1).

    Keyed {column: {row: coefficient}}; zero columns are omitted.  Faces
    that merge adjacent entries to the identity are dropped; coincident
    faces accumulate (so coefficients other than +-1 occur, e.g. the
    doubling on [g|g] over Z_2).
    """
    if not (1 <= k <= 4):
        raise ValueError("bar boundary implemented for degrees 1..4")
    if cap_order is not None and G.order > cap_order:
        raise CapExceeded(
            f"group order {G.order} exceeds cap {cap_order} for the "
            f"degree-{k} bar basis")
    key = ("barcols", k)
    if key in G.cache:
        return G.cache[key]
    m = G.order
    cols: dict[int, dict[int, int]] = {}
    if k == 1 or m == 1:
        G.cache[key] = cols
        return cols
    table = G.table
    for tup in product(range(1, m), repeat=k):
        col: dict[int, int] = {}

        def add(face: tuple[int, ...], coeff: int):
            r = bar_index(face, m)
            nv = col.get(r, 0) + coeff
            if nv:
                col[r] = nv
            else:
                col.pop(r, None)

        add(tup[1:], 1)
        sign = -1
        for i in range(k - 1):
            merged = table[tup[i]][tup[i + 1]]
            if merged != 0:
                add(tup[:i] + (merged,) + tup[i + 2:], sign)
            sign = -sign
        add(tup[:-1], sign)
        if col:
            cols[bar_index(tup, m)] = col
    G.cache[key] = cols
    return cols


def chain_from_tuples(G: FiniteGroup, chain: dict[tuple[int, ...], int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for tup, c in chain.items():
        if c and all(g != 0 for g in tup):
            r = bar_index(tup, G.order)
            nv = out.get(r, 0) + c
            if nv:
                out[r] = nv
            else:
                out.pop(r, None)
    return out


def apply_boundary(G: FiniteGroup, k: int, vec: dict[int, int]) -> dict[int, int]:
    cols = bar_boundary(G, k)
    out: dict[int, int] = {}
    for c, coeff in vec.items():
        for r, v in cols.get(c, {}).items():
            nv = out.get(r, 0) + coeff * v
            if nv:
                out[r] = nv
            else:
                out.pop(r, None)
    return out


@dataclass(frozen=True)
class ChainVector:
    """Sparse normalized bar chain over Z."""

    degree: int
    entries: tuple[tuple[tuple[int, ...], int], ...]

    @staticmethod
    def from_dict(degree: int, d: dict[tuple[int, ...], int]) -> "ChainVector":
        items = tuple(sorted((t, c) for t, c in d.items() if c))
        for t, _ in items:
            if len(t) != degree or any(g == 0 for g in t):
                raise ValueError("bad basis tuple in chain vector")
        return ChainVector(degree, items)

    def to_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.entries)


# ---------------------------------------------------------------------------
# homology groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyClass:
    factors: tuple[int, ...]
    coords: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        if self.factors != other.factors:
            raise ValueError("classes live in different groups")
        return HomologyClass(self.factors, tuple(
            (a + b) % f if f else a + b
            for a, b, f in zip(self.coords, other.coords, self.factors)))

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(self.factors, tuple(
            (-a) % f if f else -a for a, f in zip(self.coords, self.factors)))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return self + (-other)

    def to_json(self) -> dict:
        return {"factors": list(self.factors), "coords": list(self.coords)}


class HomologyGroup:
    """H_k of a finite group with a cycle classifier.

    invariant_factors is the canonical chain (1s dropped).  classify() maps
    a cycle to its residue coordinates; generator_cycles[t] classifies to
    the t-th unit coordinate.
    """

    def __init__(self, G: FiniteGroup, k: int, elim: SparseElimination,
                 rank_k: int):
        self.group = G
        self.degree = k
        self._elim = elim
        dim_k = bar_dim(G.order, k)
        free_rank = dim_k - rank_k - elim.rank
        if free_rank != 0:
            raise AssertionError(
                f"H_{k}({G.name}) computed a free rank {free_rank}; "
                "finite groups have finite homology in positive degrees")
        self._torsion_pivots = [p for p in elim.pivots if abs(p.value) != 1]
        raw_moduli = [abs(p.value) for p in self._torsion_pivots]
        # canonicalize residue coordinates into the invariant-factor chain
        s = len(raw_moduli)
        if s:
            snf = smith_normal_form([[raw_moduli[i] if i == j else 0
                                      for j in range(s)] for i in range(s)])
            self._canon_u = snf.u
            self._canon_u_inv = snf.u_inv
            chain = snf.invariant_factors()
        else:
            self._canon_u = []
            self._canon_u_inv = []
            chain = []
        keep = [i for i, d in enumerate(chain) if d != 1]
        self._keep = keep
        self._chain = chain
        self.invariant_factors: tuple[int, ...] = tuple(chain[i] for i in keep)
        self._pivot_rows = elim.pivot_rows()

    def classify(self, chain: dict[int, int]) -> HomologyClass:
        """Residue coordinates of a cycle given as a sparse row vector."""
        y = self._elim.apply_row_ops(chain)
        raw = []
        for p in self._torsion_pivots:
            raw.append(y.pop(p.row, 0) % abs(p.value))
        for r, v in y.items():
            if v and r not in self._pivot_rows:
                raise ObstructionError(
                    f"chain is not a cycle (free coordinate {r} nonzero)")
        coords = []
        for i in self._keep:
            acc = sum(self._canon_u[i][j] * raw[j] for j in range(len(raw)))
            coords.append(acc % self._chain[i])
        return HomologyClass(self.invariant_factors, tuple(coords))

    def classify_tuples(self, chain: dict[tuple[int, ...], int]) -> HomologyClass:
        return self.classify(chain_from_tuples(self.group, chain))

    def classify_chain(self, chain: ChainVector) -> HomologyClass:
        if chain.degree != self.degree:
            raise ValueError(
                f"chain degree {chain.degree} != homology degree {self.degree}")
        return self.classify_tuples(chain.to_dict())

    def zero(self) -> HomologyClass:
        return HomologyClass(self.invariant_factors,
                             tuple(0 for _ in self.invariant_factors))

    def generator_cycles(self) -> list[dict[int, int]]:
        """One cycle per invariant factor, classifying to a unit coordinate."""
        out = []
        for t, i in enumerate(self._keep):
            raw_target = {}
            for j, p in enumerate(self._torsion_pivots):
                v = self._canon_u_inv[j][i]
                if v:
                    raw_target[p.row] = v
            cycle = self._elim.apply_row_ops_inverse(raw_target)
            out.append(cycle)
        return out

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "invariant_factors": list(self.invariant_factors)}


class GroupHomologyEngine:
    """Per-group cache of bar boundaries, eliminations and homology."""

    def __init__(self, G: FiniteGroup, cap_order: int = DEFAULT_CAP_ORDER):
        self.G = G
        self.cap_order = cap_order

    def _guard(self):
        if self.G.order > self.cap_order:
            raise CapExceeded(
                f"group order {self.G.order} exceeds homology cap "
                f"{self.cap_order}")

    def elimination(self, k: int, solver: bool = False,
                    seed: int = 0) -> SparseElimination:
        key = ("elim", k, solver, seed)
        if key not in self.G.cache:
            cols = bar_boundary(self.G, k)
            elim = sparse_elimination(
                bar_dim(self.G.order, k - 1), bar_dim(self.G.order, k), cols,
                record_row_ops=True, record_col_ops=solver, pivot_seed=seed)
            self.G.cache[key] = elim
        return self.G.cache[key]

    def rank(self, k: int) -> int:
        key = ("rank", k)
        if key not in self.G.cache:
            if ("elim", k, False, 0) in self.G.cache:
                self.G.cache[key] = self.G.cache[("elim", k, False, 0)].rank
            elif ("elim", k, True, 0) in self.G.cache:
                self.G.cache[key] = self.G.cache[("elim", k, True, 0)].rank
            else:
                cols = bar_boundary(self.G, k)
                elim = sparse_elimination(
                    bar_dim(self.G.order, k - 1), bar_dim(self.G.order, k),
                    cols, record_row_ops=False)
                self.G.cache[key] = elim.rank
        return self.G.cache[key]

    def homology(self, k: int) -> HomologyGroup:
        if not (1 <= k <= 3):
            raise ValueError("homology implemented for degrees 1..3")
        self._guard()
        key = ("H", k)
        if key not in self.G.cache:
            elim = self.elimination(k + 1)
            self.G.cache[key] = HomologyGroup(self.G, k, elim, self.rank(k))
        return self.G.cache[key]


def homology_group(G: FiniteGroup, k: int,
                   cap_order: int = DEFAULT_CAP_ORDER) -> HomologyGroup:
    """H_k(G) with classifier and generator cycles, k in {1, 2, 3}."""
    return GroupHomologyEngine(G, cap_order).homology(k)


# ---------------------------------------------------------------------------
# the primary product
# ---------------------------------------------------------------------------


def pontryagin_chain(G: FiniteGroup, mu: int, lam: int) -> dict[tuple[int, ...], int]:
    if not G.commutes(mu, lam):
        raise ObstructionError("pontryagin product needs a commuting pair")
    chain: dict[tuple[int, ...], int] = {}
    if mu != 0 and lam != 0:
        chain[(mu, lam)] = chain.get((mu, lam), 0) + 1
        chain[(lam, mu)] = chain.get((lam, mu), 0) - 1
        if chain.get((mu, lam)) == 0:
            chain.pop((mu, lam), None)
        if chain.get((lam, mu), 0) == 0:
            chain.pop((lam, mu), None)
    return chain


def pontryagin(G: FiniteGroup, mu: int, lam: int,
               cap_order: int = DEFAULT_CAP_ORDER) -> HomologyClass:
    """Class of [mu|lam] - [lam|mu] in H_2(G) for a commuting pair."""
    h2 = homology_group(G, 2, cap_order)
    return h2.classify_tuples(pontryagin_chain(G, mu, lam))


def pontryagin_sum(G: FiniteGroup, mu, lam,
                   cap_order: int = DEFAULT_CAP_ORDER) -> HomologyClass:
    """Sum over components of the commuting-pair classes in H_2(G)."""
    mu, lam = list(mu), list(lam)
    if len(mu) != len(lam):
        raise ObstructionError("mu and lambda must have equal length")
    total: dict[tuple[int, ...], int] = {}
    for i, (m, l) in enumerate(zip(mu, lam)):
        if not G.commutes(m, l):
            raise ObstructionError(f"pair {i} does not commute")
        for t, c in pontryagin_chain(G, m, l).items():
            nv = total.get(t, 0) + c
            if nv:
                total[t] = nv
            else:
                total.pop(t, None)
    h2 = homology_group(G, 2, cap_order)
    return h2.classify_tuples(total)


# ---------------------------------------------------------------------------
# the secondary product
# ---------------------------------------------------------------------------


class ResidueQuotient:
    """Quotient of a finite abelian group in residue coordinates by the
    submodule spanned by given coordinate vectors.

    ambient_factors is the invariant-factor chain of the ambient group;
    elements are residue tuples.  The quotient classifier reduces a residue
    tuple modulo (ambient relations + span of the image vectors).
    """

    def __init__(self, ambient_factors, image_vectors):
        self.ambient_factors = tuple(ambient_factors)
        self.image_vectors = [tuple(v) for v in image_vectors]
        k = len(self.ambient_factors)
        cols: list[list[int]] = []
        for i in range(k):
            cols.append([self.ambient_factors[i] if j == i else 0
                         for j in range(k)])
        for vec in self.image_vectors:
            if len(vec) != k:
                raise ValueError("image vector length mismatch")
            cols.append(list(vec))
        if k:
            b = [[cols[c][rix] for c in range(len(cols))] for rix in range(k)]
            snf = smith_normal_form(b)
            diag = snf.invariant_factors()
            if len(diag) != k:
                raise AssertionError("quotient lattice lost full rank")
            self._u = snf.u
            self._d = diag
        else:
            self._u = []
            self._d = []
        self._keep = [i for i, d in enumerate(self._d) if d != 1]
        self.invariant_factors: tuple[int, ...] = tuple(
            self._d[i] for i in self._keep)

    def classify(self, coords) -> HomologyClass:
        y = list(coords)
        if len(y) != len(self.ambient_factors):
            raise ValueError("coordinate length mismatch")
        out = []
        for i in self._keep:
            acc = sum(self._u[i][j] * y[j] for j in range(len(y)))
            out.append(acc % self._d[i])
        return HomologyClass(self.invariant_factors, tuple(out))

    def zero(self) -> HomologyClass:
        return HomologyClass(self.invariant_factors,
                             tuple(0 for _ in self.invariant_factors))


class QGroup:
    """H_3 of the cyclic abelianization modulo the pushforward of H_3(G)."""

    def __init__(self, G: FiniteGroup, cap_order: int = DEFAULT_CAP_ORDER):
        ab = abelianization(G)
        if not ab.is_cyclic:
            raise ObstructionError(
                "the quotient construction needs a cyclic abelianization")
        self.group = G
        self.ab = ab
        self.n = ab.quotient_order
        self.cyclic = cyclic_group(self.n)
        self.ambient = homology_group(self.cyclic, 3, cap_order)
        h3 = homology_group(G, 3, cap_order)
        self.image_coords: list[tuple[int, ...]] = []
        for cyc in h3.generator_cycles():
            pushed = push_forward(G, self.cyclic, ab.pr, cyc, degree=3)
            self.image_coords.append(self.ambient.classify(pushed).coords)
        self._quotient = ResidueQuotient(self.ambient.invariant_factors,
                                         self.image_coords)
        self.invariant_factors = self._quotient.invariant_factors

    def quotient_classify(self, ambient_class: HomologyClass) -> HomologyClass:
        if ambient_class.factors != self.ambient.invariant_factors:
            raise ValueError("class does not live in the ambient homology")
        return self._quotient.classify(ambient_class.coords)

    def zero(self) -> HomologyClass:
        return self._quotient.zero()

    def contains_in_image(self, ambient_class: HomologyClass) -> bool:
        """Whether an ambient class lies in the pushed-forward submodule
        (together with the ambient relations)."""
        return self.quotient_classify(ambient_class).is_zero

    def to_json(self) -> dict:
        return {"n": self.n,
                "ambient_factors": list(self.ambient.invariant_factors),
                "image_coords": [list(v) for v in self.image_coords],
                "invariant_factors": list(self.invariant_factors)}


def push_forward(G: FiniteGroup, H: FiniteGroup, elt_map,
                 chain: dict[int, int], degree: int) -> dict[int, int]:
    """Apply a group map entrywise to bar tuples, dropping degenerates."""
    out: dict[int, int] = {}
    for idx, coeff in chain.items():
        tup = bar_tuple(idx, G.order, degree)
        image = tuple(elt_map[g] for g in tup)
        if any(g == 0 for g in image):
            continue
        r = bar_index(image, H.order)
        nv = out.get(r, 0) + coeff
        if nv:
            out[r] = nv
        else:
            out.pop(r, None)
    return out


def q_group(G: FiniteGroup, cap_order: int = DEFAULT_CAP_ORDER) -> QGroup:
    key = ("qgroup", cap_order)
    if key not in G.cache:
        if G.order > cap_order:
            raise CapExceeded(
                f"group order {G.order} exceeds homology cap {cap_order}")
        G.cache[key] = QGroup(G, cap_order)
    return G.cache[key]


def jl_product(G: FiniteGroup, mu, lam,
               cap_order: int = DEFAULT_CAP_ORDER,
               solution_seed: int = 0) -> HomologyClass:
    """The secondary obstruction class in Q(G).

    Preconditions (each reported distinctly): the meridian entries are a
    meridional system, pairwise conjugate; each pair commutes; every lambda
    lies in the commutator subgroup; and the primary sum vanishes.
    """
    from .homenum import is_meridional  # local import to avoid a cycle

    mu, lam = list(mu), list(lam)
    if len(mu) != len(lam) or not mu:
        raise ObstructionError("mu and lambda must be nonempty, equal length")
    if not is_meridional(G, mu):
        raise ObstructionError("mu is not a meridional system")
    for i, m in enumerate(mu[1:], start=1):
        if not G.conjugacy_class(mu[0]) == G.conjugacy_class(m):
            raise ObstructionError(f"mu[{i}] is not conjugate to mu[0]")
    ab = abelianization(G)
    if not ab.is_cyclic:
        raise ObstructionError("conjugate meridional system with non-cyclic "
                               "abelianization cannot occur")
    for i, (m, l) in enumerate(zip(mu, lam)):
        if not G.commutes(m, l):
            raise ObstructionError(f"pair {i} does not commute")
    for i, l in enumerate(lam):
        if l not in ab.commutator_subgroup:
            raise ObstructionError(
                f"lambda[{i}] is not in the commutator subgroup")
    primary = pontryagin_sum(G, mu, lam, cap_order)
    if not primary.is_zero:
        raise ObstructionError("primary obstruction (degree-2 sum) is nonzero")

    q = q_group(G, cap_order)
    z: dict[tuple[int, ...], int] = {}
    for m, l in zip(mu, lam):
        for t, c in pontryagin_chain(G, m, l).items():
            nv = z.get(t, 0) + c
            if nv:
                z[t] = nv
            else:
                z.pop(t, None)
    zrows = chain_from_tuples(G, z)
    if not zrows:
        return q.zero()
    engine = GroupHomologyEngine(G, cap_order)
    elim = engine.elimination(3, solver=True, seed=solution_seed)
    w = elim.solve(zrows)
    if w is None:
        raise AssertionError(
            "degree-2 cycle reported null-homologous but the degree-3 "
            "system is unsolvable")
    residual = apply_boundary(G, 3, w)
    if residual != zrows:
        raise AssertionError("solver residual check failed")
    pushed = push_forward(G, q.cyclic, ab.pr, w, degree=3)
    if apply_boundary(q.cyclic, 3, pushed):
        raise AssertionError("pushed filling chain is not a cycle")
    ambient = q.ambient.classify(pushed)
    return q.quotient_classify(ambient)

"""Finite-group arithmetic on multiplication tables.

Elements are indices 0..order-1 with identity 0.  The product convention
is fixed throughout the package: a*b means "apply a, then b" for
permutations, and words evaluate left to right.  Conjugation g*a*g^-1
therefore means "g then a then g inverse" as a table product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .words import Word


class GroupError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """A configured size cap would be exceeded."""


_ASSOCIATIVITY_EXHAUSTIVE_MAX = 64
_ASSOCIATIVITY_SAMPLES = 4096


class FiniteGroup:
    """A finite group given by its Cayley table.

    The table is validated at construction: identity at index 0, exact
    inverses, each row and column a permutation, and associativity
    (exhaustive up to order 64, sampled above that).
    """

    def __init__(self, table: list[list[int]], name: str = "G",
                 element_names: list[str] | None = None):
        order = len(table)
        if order == 0:
            raise GroupError("empty multiplication table")
        for row in table:
            if len(row) != order:
                raise GroupError("multiplication table is not square")
        self.order = order
        self.table = tuple(tuple(row) for row in table)
        self.name = name
        self.element_names = tuple(element_names) if element_names else tuple(
            str(i) for i in range(order))
        self._validate()
        self.inverse = tuple(self._find_inverse(a) for a in range(order))
        self._centralizers: list[tuple[int, ...]] | None = None
        self._conjugacy_class: list[frozenset[int]] | None = None
        self._abelianization: Abelianization | None = None
        self.cache: dict = {}   # scratch for homology results keyed per degree

    # -- construction checks -------------------------------------------------

    def _validate(self):
        n = self.order
        rng = range(n)
        for a in rng:
            for b in rng:
                v = self.table[a][b]
                if not (0 <= v < n):
                    raise GroupError(f"table entry out of range at ({a},{b})")
        for a in rng:
            if self.table[0][a] != a or self.table[a][0] != a:
                raise GroupError("index 0 is not a two-sided identity")
        for a in rng:
            if sorted(self.table[a]) != list(rng):
                raise GroupError(f"row {a} is not a permutation")
            if sorted(self.table[b][a] for b in rng) != list(rng):
                raise GroupError(f"column {a} is not a permutation")
        if n <= _ASSOCIATIVITY_EXHAUSTIVE_MAX:
            triples = itertools.product(rng, rng, rng)
        else:
            import random
            r = random.Random(0)
            triples = ((r.randrange(n), r.randrange(n), r.randrange(n))
                       for _ in range(_ASSOCIATIVITY_SAMPLES))
        t = self.table
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError(f"non-associative triple ({a},{b},{c})")

    def _find_inverse(self, a: int) -> int:
        for b in range(self.order):
            if self.table[a][b] == 0 and self.table[b][a] == 0:
                return b
        raise GroupError(f"element {a} has no inverse")

    # -- arithmetic ----------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        acc = 0
        while k:
            if k & 1:
                acc = self.table[acc][a]
            a = self.table[a][a]
            k >>= 1
        return acc

    def conjugate(self, g: int, a: int) -> int:
        """g * a * g^-1 under the fixed product convention."""
        return self.table[self.table[g][a]][self.inverse[g]]

    def commutes(self, a: int, b: int) -> bool:
        return self.table[a][b] == self.table[b][a]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def commutator(self, a: int, b: int) -> int:
        """a * b * a^-1 * b^-1."""
        t = self.table
        return t[t[t[a][b]][self.inverse[a]]][self.inverse[b]]

    # -- subgroup machinery ----------------------------------------------------

    def subgroup_closure(self, gens) -> frozenset[int]:
        seen = {0}
        frontier = [g for g in gens if g not in seen]
        seen.update(frontier)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    for c in (self.table[a][g], self.table[g][a]):
                        if c not in seen:
                            seen.add(c)
                            nxt.append(c)
            frontier = nxt
        return frozenset(seen)

    def centralizer(self, a: int) -> tuple[int, ...]:
        if self._centralizers is None:
            self._centralizers = [
                tuple(b for b in range(self.order) if self.commutes(x, b))
                for x in range(self.order)]
        return self._centralizers[a]

    def conjugacy_class(self, a: int) -> frozenset[int]:
        if self._conjugacy_class is None:
            classes: list[frozenset[int] | None] = [None] * self.order
            for x in range(self.order):
                if classes[x] is None:
                    orbit = frozenset(self.conjugate(g, x) for g in range(self.order))
                    for y in orbit:
                        classes[y] = orbit
            self._conjugacy_class = classes  # type: ignore[assignment]
        return self._conjugacy_class[a]  # type: ignore[index]

    def commutator_subgroup(self) -> frozenset[int]:
        gens = {self.commutator(a, b)
                for a in range(self.order) for b in range(self.order)}
        gens.discard(0)
        if not gens:
            return frozenset({0})
        return self.subgroup_closure(sorted(gens))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __len__(self):
        return self.order


@dataclass(frozen=True)
class Abelianization:
    """The quotient G -> G/G' with a residue map when the quotient is cyclic.

    quotient_order is the order of G/G'.  For cyclic quotients pr maps each
    element to its residue mod quotient_order, normalized so that a fixed
    generator coset maps to 1.  For non-cyclic quotients pr is None and
    coset_index gives the coset partition instead.
    """

    quotient_order: int
    is_cyclic: bool
    commutator_subgroup: frozenset[int]
    coset_index: tuple[int, ...]
    quotient_factors: tuple[int, ...]
    pr: tuple[int, ...] | None

    def in_commutator_subgroup(self, a: int) -> bool:
        return a in self.commutator_subgroup


def abelianization(G: FiniteGroup) -> Abelianization:
    if G._abelianization is not None:
        return G._abelianization
    comm = G.commutator_subgroup()
    # cosets, canonical representative = smallest element
    coset_of = [-1] * G.order
    reps: list[int] = []
    for a in range(G.order):
        if coset_of[a] == -1:
            members = sorted(G.table[a][h] for h in comm)
            idx = len(reps)
            reps.append(members[0])
            for m in members:
                coset_of[m] = idx
    n = len(reps)
    # quotient multiplication on coset indices
    qmul = [[coset_of[G.table[reps[i]][reps[j]]] for j in range(n)] for i in range(n)]

    def coset_order(i: int) -> int:
        k, x = 1, i
        ident = coset_of[0]
        while x != ident:
            x = qmul[x][i]
            k += 1
        return k

    gen = None
    for i in range(n):
        if coset_order(i) == n:
            if gen is None or reps[i] < reps[gen]:
                gen = i
    is_cyclic = gen is not None
    pr = None
    if is_cyclic:
        # discrete log along the chosen generator coset
        residue = {coset_of[0]: 0}
        x, k = gen, 1
        while x not in residue:
            residue[x] = k
            x = qmul[x][gen]
            k += 1
        pr = tuple(residue[coset_of[a]] for a in range(G.order))
    factors = _abelian_invariant_factors(qmul, coset_of[0])
    ab = Abelianization(
        quotient_order=n,
        is_cyclic=is_cyclic,
        commutator_subgroup=comm,
        coset_index=tuple(coset_of),
        quotient_factors=tuple(factors),
        pr=pr,
    )
    G._abelianization = ab
    return ab


def _abelian_invariant_factors(table: list[list[int]], identity: int) -> list[int]:
    """Invariant factors of a finite abelian group given by its table.

    Repeatedly splits off a maximal-order cyclic summand; for abelian groups
    the resulting orders form the invariant factor chain.
    """
    factors: list[int] = []
    n = len(table)
    while n > 1:
        orders = [_table_order(table, identity, a) for a in range(n)]
        m = max(orders)
        factors.append(m)
        g = orders.index(m)
        sub = [identity]
        x = g
        while x != identity:
            sub.append(x)
            x = table[x][g]
        coset_of: dict[int, int] = {}
        reps: list[int] = []
        for a in range(n):
            if a not in coset_of:
                idx = len(reps)
                reps.append(a)
                for h in sub:
                    coset_of[table[a][h]] = idx
        table = [[coset_of[table[reps[i]][reps[j]]] for j in range(len(reps))]
                 for i in range(len(reps))]
        identity = coset_of[identity]
        n = len(reps)
    factors.sort()
    return factors


def _table_order(table, identity, a):
    k, x = 1, a
    while x != identity:
        x = table[x][a]
        k += 1
    return k


def normal_closure(G: FiniteGroup, S) -> frozenset[int]:
    """Smallest normal subgroup of G containing S."""
    S = list(S)
    if not S:
        raise GroupError("normal closure of the empty set is not defined here")
    conjugates = sorted({G.conjugate(g, s) for s in S for g in range(G.order)})
    return G.subgroup_closure(conjugates)


def conjugator(G: FiniteGroup, a: int, b: int) -> int | None:
    """Smallest-index g with g*a*g^-1 = b, or None if a, b are not conjugate."""
    for g in range(G.order):
        if G.conjugate(g, a) == b:
            return g
    return None


def evaluate_word(G: FiniteGroup, assignment, w: Word) -> int:
    """Left-to-right product of assigned letters with exponents."""
    acc = 0
    for gen, exp in w.letters:
        try:
            val = assignment[gen]
        except (KeyError, IndexError):
            raise GroupError(f"word uses unassigned generator {gen}")
        if exp == -1:
            val = G.inverse[val]
        acc = G.table[acc][val]
    return acc


# -- constructors -------------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, name=f"Z{n}", element_names=[str(i) for i in range(n)])


def _perm_mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Apply p, then q (left-to-right convention)."""
    return tuple(q[p[i]] for i in range(len(p)))


def _perm_name(p: tuple[int, ...]) -> str:
    """Cycle notation on points 1..d."""
    d = len(p)
    seen = [False] * d
    cycles = []
    for i in range(d):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        cycles.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
    return "".join(cycles) if cycles else "e"


def permutation_group(degree: int, generators, name: str = "P",
                      max_order: int = 100000) -> FiniteGroup:
    """Group generated by permutations given as one-line images of 1..degree."""
    gens = []
    for img in generators:
        if sorted(img) != list(range(1, degree + 1)):
            raise GroupError(f"not a permutation of 1..{degree}: {img}")
        gens.append(tuple(x - 1 for x in img))
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _perm_mul(p, g)
                if q not in index:
                    if len(elems) >= max_order:
                        raise CapExceeded(
                            f"permutation closure exceeds cap {max_order}")
                    index[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    table = [[index[_perm_mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, name=name,
                       element_names=[_perm_name(p) for p in elems])


def dicyclic_group(m: int) -> FiniteGroup:
    """Dicyclic group of order 4m: <a, b | a^(2m)=1, b^2=a^m, bab^-1=a^-1>.

    m = 2 gives the quaternion group.
    """
    if m < 1:
        raise GroupError("dicyclic parameter must be >= 1")
    n2 = 2 * m
    elems = [(s, x) for x in (0, 1) for s in range(n2)]
    index = {e: i for i, e in enumerate(elems)}

    def mul(u, v):
        (a, b), (c, d) = u, v
        s = (a + (-c if b else c) + (m if (b and d) else 0)) % n2
        return (s, b ^ d)

    table = [[index[mul(u, v)] for v in elems] for u in elems]
    names = [f"a{s}" if x == 0 else f"a{s}b" for s, x in elems]
    return FiniteGroup(table, name=f"Dic{m}", element_names=names)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon as permutations of its vertices."""
    rot = [i % n + 1 for i in range(1, n + 1)]
    refl = [n - i + 1 for i in range(1, n + 1)]
    return permutation_group(n, [rot, refl], name=f"D{n}")


def symmetric_group(n: int) -> FiniteGroup:
    gens = [[2, 1] + list(range(3, n + 1))]
    if n > 2:
        gens.append(list(range(2, n + 1)) + [1])
    return permutation_group(n, gens, name=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    if n < 3:
        raise GroupError("alternating_group needs n >= 3")
    gens = [[2, 3, 1] + list(range(4, n + 1))]
    if n > 3:
        if n % 2 == 1:
            gens.append(list(range(2, n + 1)) + [1])
        else:
            gens.append([1] + list(range(3, n + 1)) + [2])
    return permutation_group(n, gens, name=f"A{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    elems = [(a, b) for a in range(G.order) for b in range(H.order)]
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[(G.table[a][c], H.table[b][d])] for (c, d) in elems]
             for (a, b) in elems]
    names = [f"({G.element_names[a]},{H.element_names[b]})" for a, b in elems]
    return FiniteGroup(table, name=name or f"{G.name}x{H.name}", element_names=names)


def build_group(spec: dict) -> FiniteGroup:
    """Build a group from its JSON spec.

    Accepted forms:
      {"type": "cyclic", "n": 6}
      {"type": "permutation", "degree": 3, "generators": [[2,1,3],[2,3,1]]}
      {"type": "table", "table": [[...], ...]}
    """
    kind = spec.get("type")
    if kind == "cyclic":
        return cyclic_group(int(spec["n"]))
    if kind == "permutation":
        return permutation_group(int(spec["degree"]), spec["generators"],
                                 name=spec.get("name", "P"),
                                 max_order=int(spec.get("max_order", 100000)))
    if kind == "table":
        return FiniteGroup([list(r) for r in spec["table"]],
                           name=spec.get("name", "G"))
    raise GroupError(f"unknown group spec type: {kind!r}")


@dataclass(frozen=True)
class GroupPresentation:
    """A finitely presented group: generator count plus relator words."""

    generators: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        for w in self.relators:
            if w.max_generator() >= self.generators:
                raise ValueError("relator uses a generator out of range")

    @staticmethod
    def from_json(obj: dict) -> "GroupPresentation":
        rels = tuple(Word.from_pairs(r) for r in obj["relators"])
        return GroupPresentation(generators=int(obj["generators"]), relators=rels)

    def to_json(self) -> dict:
        return {"generators": self.generators,
                "relators": [w.to_pairs() for w in self.relators]}

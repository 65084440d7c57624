"""Enumerate homomorphisms from link-group (or abstract) presentations into
finite groups.

For Wirtinger inputs the crossing relations are propagated arc by arc: each
under-pass forces the next arc label from the incoming label and the over-arc
label, so search branches only over one seed arc per component (plus any arcs
a stalled propagation leaves open).  Results are complete, duplicate-free and
ordered lexicographically by assignment tuple, independent of thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .diagram import LinkDiagram
from .groups import FiniteGroup, GroupPresentation, evaluate_word, normal_closure
from .wirtinger import WirtingerPresentation, preferred_longitude, preferred_system, presentation
from .words import Word

DEFAULT_NODE_LIMIT = 10 ** 6


class SearchLimitExceeded(RuntimeError):
    """Raised when the node budget runs out; carries the partial results."""

    def __init__(self, limit: int, partial: list["Homomorphism"]):
        super().__init__(f"search limit {limit} exceeded")
        self.limit = limit
        self.partial = partial


@dataclass(frozen=True)
class Homomorphism:
    assignment: tuple[int, ...]
    target: FiniteGroup
    surjective: bool

    def __call__(self, gen: int) -> int:
        return self.assignment[gen]

    def evaluate(self, w: Word) -> int:
        return evaluate_word(self.target, self.assignment, w)

    def to_json(self) -> dict:
        g = self.target
        return {
            "assignment": list(self.assignment),
            "assignment_names": [g.element_names[v] for v in self.assignment],
            "surjective": self.surjective,
        }


@dataclass(frozen=True)
class PeripheralSystem:
    """Meridian and longitude images of one homomorphism on one diagram."""

    mu: tuple[int, ...]
    lam: tuple[int, ...]         # preferred-system longitude images
    lam_bar: tuple[int, ...]     # per-component preferred-longitude images
    hom: Homomorphism
    diagram: LinkDiagram

    def to_json(self) -> dict:
        g = self.hom.target
        return {
            "mu": list(self.mu),
            "mu_names": [g.element_names[v] for v in self.mu],
            "lambda": list(self.lam),
            "lambda_names": [g.element_names[v] for v in self.lam],
            "lambda_bar": list(self.lam_bar),
        }


def _meridian_candidates(G: FiniteGroup, constraint) -> list[int]:
    if constraint is None:
        return list(range(G.order))
    if isinstance(constraint, int):
        return [constraint]
    kind, elem = constraint
    if kind != "class":
        raise ValueError(f"unknown meridian constraint {constraint!r}")
    return sorted(G.conjugacy_class(elem))


def enumerate_homs(pres: WirtingerPresentation | GroupPresentation,
                   G: FiniteGroup,
                   surjective_only: bool = False,
                   meridian_constraints: list | None = None,
                   limit: int = DEFAULT_NODE_LIMIT,
                   threads: int = 1) -> list[Homomorphism]:
    """All homomorphisms of the presented group into G, subject to options.

    meridian_constraints applies to Wirtinger inputs only: per component,
    None, an element index, or ("class", element index).
    """
    if isinstance(pres, WirtingerPresentation):
        homs = _enumerate_wirtinger(pres, G, meridian_constraints, limit, threads)
    else:
        if meridian_constraints is not None:
            raise ValueError("meridian constraints need a Wirtinger presentation")
        homs = _enumerate_generic(pres, G, limit)
    if surjective_only:
        homs = [h for h in homs if h.surjective]
    return homs


def _make_hom(G: FiniteGroup, assignment: tuple[int, ...],
              relators) -> Homomorphism:
    for w in relators:
        if evaluate_word(G, assignment, w) != 0:
            raise AssertionError("assignment fails a relator after search")
    image = G.subgroup_closure([v for v in assignment])
    return Homomorphism(assignment=assignment, target=G,
                        surjective=len(image) == G.order)


def _enumerate_generic(pres: GroupPresentation, G: FiniteGroup,
                       limit: int) -> list[Homomorphism]:
    if pres.generators == 0:
        raise ValueError("empty generator set")
    # relators checked as soon as their support is assigned
    by_last_gen: list[list[Word]] = [[] for _ in range(pres.generators)]
    for w in pres.relators:
        if len(w) == 0:
            continue
        by_last_gen[w.max_generator()].append(w)
    out: list[Homomorphism] = []
    nodes = 0
    assignment: list[int] = []

    def rec(k: int):
        nonlocal nodes
        if k == pres.generators:
            out.append(_make_hom(G, tuple(assignment), pres.relators))
            return
        for v in range(G.order):
            nodes += 1
            if nodes > limit:
                raise SearchLimitExceeded(limit, out)
            assignment.append(v)
            ok = all(evaluate_word(G, assignment, w) == 0 for w in by_last_gen[k])
            if ok:
                rec(k + 1)
            assignment.pop()

    rec(0)
    return out


def _enumerate_wirtinger(pres: WirtingerPresentation, G: FiniteGroup,
                         meridian_constraints, limit: int,
                         threads: int) -> list[Homomorphism]:
    n = pres.generators
    r = len(pres.meridian_generator)
    if meridian_constraints is None:
        meridian_constraints = [None] * r
    if len(meridian_constraints) != r:
        raise ValueError("one meridian constraint per component expected")

    # crossing propagation rules: (o, u, v, sign) with v = o^s u o^-s
    rules = []
    for w in pres.relations:
        # relation letters are [(v,1), (o,s), (u,-1), (o,-s)]: v = o^s u o^-s
        letters = w.letters
        v = letters[0][0]
        o, s = letters[1]
        u = letters[2][0]
        rules.append((o, u, v, s))

    seeds = list(pres.meridian_generator)
    seed_domains = [_meridian_candidates(G, meridian_constraints[i])
                    for i in range(r)]

    import itertools
    blocks = list(itertools.product(*seed_domains))
    block_budget = max(1, limit // max(1, len(blocks)))

    def run_seed_block(seed_values: tuple[int, ...]) -> list[tuple[int, ...]]:
        """Search one seed assignment; partitions share nothing mutable."""
        found: list[tuple[int, ...]] = []
        nodes = 0

        def propagate_and_search(assign: list[int | None]):
            nonlocal nodes
            nodes += 1
            if nodes > block_budget:
                raise SearchLimitExceeded(
                    limit, [_make_hom(G, a, pres.relations) for a in found])
            stack = True
            while stack:
                stack = False
                for o, u, v, s in rules:
                    if assign[o] is not None and assign[u] is not None:
                        val = (G.conjugate(assign[o], assign[u]) if s == 1
                               else G.conjugate(G.inverse[assign[o]],
                                                assign[u]))
                        if assign[v] is None:
                            assign[v] = val
                            stack = True
                        elif assign[v] != val:
                            return
            open_gens = [k for k in range(n) if assign[k] is None]
            if not open_gens:
                found.append(tuple(assign))  # type: ignore[arg-type]
                return
            k = open_gens[0]
            for v in range(G.order):
                trial = list(assign)
                trial[k] = v
                propagate_and_search(trial)

        assign: list[int | None] = [None] * n
        for gi, val in zip(seeds, seed_values):
            if assign[gi] is not None and assign[gi] != val:
                return found
            assign[gi] = val
        propagate_and_search(assign)
        return found

    results: list[tuple[int, ...]] = []
    partial_error: SearchLimitExceeded | None = None
    if threads <= 1:
        for block in blocks:
            try:
                results.extend(run_seed_block(block))
            except SearchLimitExceeded as e:
                partial_error = e
                results.extend(a.assignment for a in e.partial)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(run_seed_block, b) for b in blocks]
            for f in futures:
                try:
                    results.extend(f.result())
                except SearchLimitExceeded as e:
                    partial_error = e
                    results.extend(a.assignment for a in e.partial)
    results.sort()
    deduped = []
    prev = None
    for a in results:
        if a != prev:
            deduped.append(a)
            prev = a
    homs = [_make_hom(G, a, pres.relations) for a in deduped]
    if partial_error is not None:
        raise SearchLimitExceeded(limit, homs)
    return homs


def peripheral_system(d: LinkDiagram, h: Homomorphism) -> PeripheralSystem:
    """Evaluate meridian generators and both longitude families under h."""
    p = presentation(d)
    if len(h.assignment) != p.generators:
        raise ValueError("homomorphism does not match the diagram presentation")
    mu = tuple(h.assignment[p.meridian_generator[i]]
               for i in range(d.num_components))
    lam = tuple(h.evaluate(w) for w in preferred_system(d))
    lam_bar = tuple(h.evaluate(preferred_longitude(d, i))
                    for i in range(d.num_components))
    return PeripheralSystem(mu=mu, lam=lam, lam_bar=lam_bar, hom=h, diagram=d)


def is_meridional(G: FiniteGroup, mu) -> bool:
    """True iff the normal closure of the entries is all of G."""
    mu = list(mu)
    if not mu:
        raise ValueError("empty meridian system")
    return len(normal_closure(G, mu)) == G.order


def conjugation_orbits(homs: list[Homomorphism]) -> list[list[Homomorphism]]:
    """Group homomorphisms into orbits under simultaneous conjugation.

    A post-filter, never applied by default: conjugate assignments are
    genuinely different labellings, but every verdict downstream is
    invariant along an orbit.
    """
    if not homs:
        return []
    G = homs[0].target
    index = {h.assignment: k for k, h in enumerate(homs)}
    seen: set[int] = set()
    orbits: list[list[Homomorphism]] = []
    for k, h in enumerate(homs):
        if k in seen:
            continue
        orbit_keys = set()
        for g in range(G.order):
            conj = tuple(G.conjugate(g, v) for v in h.assignment)
            j = index.get(conj)
            if j is not None:
                orbit_keys.add(j)
        seen |= orbit_keys
        orbits.append([homs[j] for j in sorted(orbit_keys)])
    return orbits

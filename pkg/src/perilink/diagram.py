"""Oriented link diagrams as PD codes.

Grammar: whitespace-separated tokens, each ``X[a,b,c,d]`` (positive integer
edge ids) or ``U`` (a crossingless unknot component); ``#`` starts a line
comment.

Conventions, fixed once for the whole package:

* ``X[a,b,c,d]`` lists the four edge ends counterclockwise starting at the
  incoming under-strand ``a``; the under-strand runs a -> c.
* The crossing sign is +1 exactly when the over-strand direction, rotated a
  quarter turn counterclockwise, matches the under-strand direction.  With
  the slot layout above that means: sign +1 iff the over-strand runs d -> b.
* Edges are numbered consecutively along each component in orientation
  order; canonical form renumbers from 1, component blocks concatenated,
  crossings sorted by smallest incident edge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class PDError(ValueError):
    """Malformed PD text or inconsistent diagram data."""


class AmbiguousOrientationError(PDError):
    """The PD code does not determine the over-strand directions."""


@dataclass(frozen=True)
class Crossing:
    """One crossing; slots counterclockwise from the incoming under-strand."""

    under_in: int
    over_a: int
    under_out: int
    over_b: int
    sign: int

    @property
    def slots(self) -> tuple[int, int, int, int]:
        return (self.under_in, self.over_a, self.under_out, self.over_b)

    @property
    def over_in(self) -> int:
        return self.over_b if self.sign == 1 else self.over_a

    @property
    def over_out(self) -> int:
        return self.over_a if self.sign == 1 else self.over_b

    def __str__(self) -> str:
        return f"X[{self.under_in},{self.over_a},{self.under_out},{self.over_b}]"


class LinkDiagram:
    """Validated oriented diagram.

    components: tuple of edge cycles in orientation order (first edge is the
    component basepoint); crossingless components are empty tuples.
    """

    def __init__(self, crossings, components):
        self.crossings: tuple[Crossing, ...] = tuple(crossings)
        self.components: tuple[tuple[int, ...], ...] = tuple(
            tuple(c) for c in components)
        self._validate()
        self.component_of_edge: dict[int, int] = {}
        for i, comp in enumerate(self.components):
            for e in comp:
                self.component_of_edge[e] = i

    # -- structure -----------------------------------------------------------

    @property
    def num_components(self) -> int:
        return len(self.components)

    @property
    def crossingless_components(self) -> int:
        return sum(1 for c in self.components if not c)

    @property
    def edges(self) -> list[int]:
        out = []
        for comp in self.components:
            out.extend(comp)
        return sorted(out)

    def successor(self, edge: int) -> int:
        comp = self.components[self.component_of_edge[edge]]
        i = comp.index(edge)
        return comp[(i + 1) % len(comp)]

    def basepoint(self, i: int) -> int | None:
        comp = self.components[i]
        return comp[0] if comp else None

    def _validate(self):
        seen: dict[int, int] = {}
        for x in self.crossings:
            for e in x.slots:
                if e < 1:
                    raise PDError(f"edge ids must be positive, got {e}")
                seen[e] = seen.get(e, 0) + 1
        comp_edges = [e for comp in self.components for e in comp]
        if len(set(comp_edges)) != len(comp_edges):
            raise PDError("an edge appears in two components")
        for e in comp_edges:
            if seen.get(e, 0) != 2:
                raise PDError(f"edge {e} appears {seen.get(e, 0)} times in "
                              f"crossings, expected 2")
        for e in seen:
            if e not in set(comp_edges):
                raise PDError(f"edge {e} in crossings but in no component")
        # successor structure implied by crossings must reproduce the walks
        succ = _successors_from_crossings(self.crossings)
        for comp in self.components:
            for i, e in enumerate(comp):
                expect = comp[(i + 1) % len(comp)]
                if succ.get(e) != expect:
                    raise PDError(
                        f"component walk does not close: successor of edge {e} "
                        f"is {succ.get(e)}, component says {expect}")
        # declared signs must match the stored over-direction convention
        for x in self.crossings:
            if x.sign not in (1, -1):
                raise PDError(f"bad crossing sign {x.sign}")

    # -- numeric invariants ----------------------------------------------------

    def crossing_components(self, x: Crossing) -> tuple[int, int]:
        """(under component, over component) of a crossing."""
        return (self.component_of_edge[x.under_in],
                self.component_of_edge[x.over_a])

    def __eq__(self, other):
        if not isinstance(other, LinkDiagram):
            return NotImplemented
        return (self.crossings == other.crossings
                and self.components == other.components)

    def __hash__(self):
        return hash((self.crossings, self.components))

    def __repr__(self):
        return f"LinkDiagram({to_text(self)!r})"


def _successors_from_crossings(crossings) -> dict[int, int]:
    """Edge successor map: each crossing consumes its incoming edges."""
    succ: dict[int, int] = {}
    for x in crossings:
        for e_in, e_out in ((x.under_in, x.under_out), (x.over_in, x.over_out)):
            if e_in in succ:
                raise PDError(f"edge {e_in} terminates at two crossings")
            succ[e_in] = e_out
    return succ


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"X\[(\d+),(\d+),(\d+),(\d+)\]$|U$")


def _strip_comments(text: str) -> str:
    lines = []
    for line in text.splitlines():
        hash_pos = line.find("#")
        lines.append(line if hash_pos < 0 else line[:hash_pos])
    return " ".join(lines)


def parse_pd(text: str) -> LinkDiagram:
    """Parse PD text into a validated LinkDiagram.

    Over-strand directions are recovered by constraint propagation: every
    edge terminates at exactly one crossing and originates at exactly one.
    Under-strand slots anchor the propagation; a leftover undetermined
    crossing is resolved by the consecutive-numbering rule when that is
    unambiguous, otherwise the code is rejected.
    """
    raw: list[tuple[int, int, int, int] | None] = []
    n_unknots = 0
    for tok in _strip_comments(text).split():
        m = _TOKEN_RE.match(tok)
        if not m:
            raise PDError(f"malformed token {tok!r}")
        if tok == "U":
            n_unknots += 1
        else:
            raw.append(tuple(int(g) for g in m.groups()))  # type: ignore[arg-type]

    counts: dict[int, int] = {}
    for quad in raw:
        for e in quad:  # type: ignore[union-attr]
            counts[e] = counts.get(e, 0) + 1
    for e, k in counts.items():
        if k != 2:
            raise PDError(f"edge {e} appears {k} times, expected 2")

    # role[e] per occurrence: an edge must terminate once and originate once.
    # Under slots are fixed: a terminates, c originates.  Each crossing's over
    # pair (b, d) is a boolean choice: dir_db means the over-strand runs d->b.
    occurrences: dict[int, list[tuple[int, str]]] = {}
    for ci, quad in enumerate(raw):
        a, b, c, d = quad  # type: ignore[misc]
        occurrences.setdefault(a, []).append((ci, "a"))
        occurrences.setdefault(b, []).append((ci, "b"))
        occurrences.setdefault(c, []).append((ci, "c"))
        occurrences.setdefault(d, []).append((ci, "d"))

    dir_db: list[bool | None] = [None] * len(raw)
    # terminated[e] / originated[e]: which occurrence slot consumed the role
    terminates: dict[int, tuple[int, str]] = {}
    originates: dict[int, tuple[int, str]] = {}

    def set_role(e: int, occ: tuple[int, str], kind: str):
        book = terminates if kind == "t" else originates
        if e in book:
            if book[e] != occ:
                raise PDError(f"edge {e} cannot consistently close a component")
            return False
        book[e] = occ
        return True

    work: list[int] = []
    for ci, quad in enumerate(raw):
        a, b, c, d = quad  # type: ignore[misc]
        set_role(a, (ci, "a"), "t")
        set_role(c, (ci, "c"), "o")
        work.append(a)
        work.append(c)

    def decide(ci: int, val: bool):
        """Fix the over-direction of crossing ci and record edge roles."""
        if dir_db[ci] is not None:
            if dir_db[ci] != val:
                raise PDError("contradictory over-strand orientation")
            return
        dir_db[ci] = val
        a, b, c, d = raw[ci]  # type: ignore[misc]
        if val:  # d -> b: d terminates here, b originates
            set_role(d, (ci, "d"), "t")
            set_role(b, (ci, "b"), "o")
            work.extend([d, b])
        else:
            set_role(b, (ci, "b"), "t")
            set_role(d, (ci, "d"), "o")
            work.extend([b, d])

    def propagate():
        while work:
            e = work.pop()
            for ci, slot in occurrences[e]:
                if slot in ("a", "c") or dir_db[ci] is not None:
                    continue
                # if e already has its other role consumed elsewhere, this
                # occurrence is forced to take the remaining role
                t_taken = e in terminates and terminates[e] != (ci, slot)
                o_taken = e in originates and originates[e] != (ci, slot)
                if t_taken and o_taken:
                    # e is fully consumed elsewhere: impossible
                    raise PDError(f"edge {e} appears in too many roles")
                if t_taken:
                    # this occurrence must originate e
                    decide(ci, slot == "b")
                elif o_taken:
                    decide(ci, slot == "d")

    propagate()
    # resolve leftovers with the consecutive-numbering rule where unique
    for ci in range(len(raw)):
        if dir_db[ci] is not None:
            continue
        a, b, c, d = raw[ci]  # type: ignore[misc]
        d_to_b = (b == d + 1)
        b_to_d = (d == b + 1)
        if d_to_b != b_to_d:
            decide(ci, d_to_b)
            propagate()
    for ci in range(len(raw)):
        if dir_db[ci] is None:
            raise AmbiguousOrientationError(
                f"over-strand orientation of crossing {ci} is ambiguous")

    crossings = []
    for ci, quad in enumerate(raw):
        a, b, c, d = quad  # type: ignore[misc]
        crossings.append(Crossing(under_in=a, over_a=b, under_out=c, over_b=d,
                                  sign=1 if dir_db[ci] else -1))

    succ = _successors_from_crossings(crossings)
    components = _walk_components(succ)
    components.extend([()] * n_unknots)
    return LinkDiagram(crossings, components)


def _walk_components(succ: dict[int, int]) -> list[tuple[int, ...]]:
    remaining = set(succ.keys())
    if set(succ.values()) != remaining:
        raise PDError("component walk does not close consistently with edge counts")
    comps = []
    while remaining:
        start = min(remaining)
        cyc = [start]
        remaining.discard(start)
        e = succ[start]
        while e != start:
            if e not in remaining:
                raise PDError("component walk does not close")
            cyc.append(e)
            remaining.discard(e)
            e = succ[e]
        comps.append(tuple(cyc))
    comps.sort(key=lambda c: c[0])
    return comps


# ---------------------------------------------------------------------------
# serialization and canonical form
# ---------------------------------------------------------------------------


def canonical_with_map(d: LinkDiagram) -> tuple[LinkDiagram, dict[int, int]]:
    """Canonical renumbering together with the old-edge -> new-edge map."""
    mapping: dict[int, int] = {}
    nxt = 1
    new_comps = []
    for comp in d.components:
        new_comp = []
        for e in comp:
            mapping[e] = nxt
            new_comp.append(nxt)
            nxt += 1
        new_comps.append(tuple(new_comp))
    new_xs = [Crossing(mapping[x.under_in], mapping[x.over_a],
                       mapping[x.under_out], mapping[x.over_b], x.sign)
              for x in d.crossings]
    new_xs.sort(key=lambda x: (min(x.slots), x.slots))
    return LinkDiagram(new_xs, new_comps), mapping


def canonical(d: LinkDiagram) -> LinkDiagram:
    """Renumber edges from 1 along each component walk.

    Component order is preserved (it identifies components across
    operations); crossings are sorted by smallest incident edge id.
    """
    return canonical_with_map(d)[0]


def to_text(d: LinkDiagram) -> str:
    """Canonical PD serialization.  Crossingless components serialize as
    trailing "U" tokens regardless of their component position."""
    c = canonical(d)
    toks = [str(x) for x in c.crossings]
    toks.extend(["U"] * c.crossingless_components)
    return " ".join(toks) if toks else ""


# ---------------------------------------------------------------------------
# numeric invariants
# ---------------------------------------------------------------------------


def linking_number(d: LinkDiagram, i: int, j: int) -> int:
    """Half the signed count of crossings between components i and j."""
    if i == j:
        raise ValueError("self-linking is not defined; use self_writhe")
    _check_index(d, i)
    _check_index(d, j)
    total = 0
    for x in d.crossings:
        cu, co = d.crossing_components(x)
        if {cu, co} == {i, j}:
            total += x.sign
    if total % 2:
        raise PDError("odd signed crossing count between two components")
    return total // 2


def self_writhe(d: LinkDiagram, i: int) -> int:
    """Sum of signs over self-crossings of component i."""
    _check_index(d, i)
    return sum(x.sign for x in d.crossings
               if d.crossing_components(x) == (i, i))


def total_linking_row(d: LinkDiagram, i: int) -> int:
    return sum(linking_number(d, i, j)
               for j in range(d.num_components) if j != i)


def _check_index(d: LinkDiagram, i: int):
    if not (0 <= i < d.num_components):
        raise IndexError(f"component index {i} out of range")


# ---------------------------------------------------------------------------
# diagram surgery
# ---------------------------------------------------------------------------


def reverse_orientations_with_map(d: LinkDiagram) -> tuple[LinkDiagram, dict[int, int]]:
    """Reverse every component orientation; edge map included.

    Signs are unchanged (both strands reverse), so inter-component linking
    numbers and self-writhes are preserved.
    """
    new_comps = []
    for comp in d.components:
        if not comp:
            new_comps.append(())
        else:
            new_comps.append((comp[0],) + tuple(reversed(comp[1:])))
    new_xs = [Crossing(under_in=x.under_out, over_a=x.over_b,
                       under_out=x.under_in, over_b=x.over_a, sign=x.sign)
              for x in d.crossings]
    return canonical_with_map(LinkDiagram(new_xs, new_comps))


def reverse_orientations(d: LinkDiagram) -> LinkDiagram:
    """Reverse every component orientation.  Signs are unchanged."""
    return reverse_orientations_with_map(d)[0]


def split_union_unknot(d: LinkDiagram) -> LinkDiagram:
    """Append one crossingless unknot component."""
    return LinkDiagram(d.crossings, d.components + ((),))


def multi_connected_sum_with_maps(
        k: LinkDiagram, j: LinkDiagram,
        splice: list[tuple[int, int]] | None = None,
) -> tuple[LinkDiagram, dict[int, int], dict[int, int]]:
    """Componentwise connected sum with the edge maps from both summands.

    splice[i] = (edge of k's component i, edge of j's component i); defaults
    to the basepoint edges.  Crossing sets stay disjoint, so linking numbers
    and self-writhes add componentwise.
    """
    r = k.num_components
    if j.num_components != r:
        raise ValueError(
            f"component count mismatch: {r} vs {j.num_components}")
    if splice is None:
        splice_list: list[tuple[int | None, int | None]] = [
            (k.basepoint(i), j.basepoint(i)) for i in range(r)]
    else:
        if len(splice) != r:
            raise ValueError("splice must give one pair per component")
        splice_list = list(splice)
        for i, (ek, ej) in enumerate(splice_list):
            if k.components[i] and ek not in k.components[i]:
                raise ValueError(f"splice edge {ek} not on component {i} of K")
            if j.components[i] and ej not in j.components[i]:
                raise ValueError(f"splice edge {ej} not on component {i} of J")

    offset = max(k.edges, default=0)
    rename_j = {e: e + offset for e in j.edges}

    # rename rules for the cut edges: the terminating occurrence of y becomes
    # x (edge A = x_out + y_in) and the terminating occurrence of x becomes
    # y' (edge B = y_out + x_in)
    term_renames: dict[tuple[int, int], int] = {}  # (crossing set id, edge) -> new id
    new_comps: list[tuple[int, ...]] = []
    for i in range(r):
        ck, cj = k.components[i], j.components[i]
        if not ck and not cj:
            new_comps.append(())
            continue
        if not ck:
            new_comps.append(tuple(rename_j[e] for e in cj))
            continue
        if not cj:
            new_comps.append(ck)
            continue
        ek, ej = splice_list[i]
        assert ek is not None and ej is not None
        ejp = rename_j[ej]
        term_renames[(1, ejp)] = ek    # in J's crossings, y-terminus -> x
        term_renames[(0, ek)] = ejp    # in K's crossings, x-terminus -> y'
        pk = ck.index(ek)
        pj = cj.index(ej)
        walk = [ejp]
        walk.extend(ck[(pk + 1 + t) % len(ck)] for t in range(len(ck) - 1))
        walk.append(ek)
        walk.extend(rename_j[cj[(pj + 1 + t) % len(cj)]] for t in range(len(cj) - 1))
        new_comps.append(tuple(walk))

    def rebuild(x: Crossing, which: int) -> Crossing:
        # the cut reroutes incoming half-edges only: rename the terminating
        # occurrences, leave originating occurrences alone
        a = term_renames.get((which, x.under_in), x.under_in)
        b, d = x.over_a, x.over_b
        if x.sign == 1:
            d = term_renames.get((which, d), d)
        else:
            b = term_renames.get((which, b), b)
        return Crossing(a, b, x.under_out, d, x.sign)

    new_xs = [rebuild(x, 0) for x in k.crossings]
    for x in j.crossings:
        y = Crossing(rename_j[x.under_in], rename_j[x.over_a],
                     rename_j[x.under_out], rename_j[x.over_b], x.sign)
        new_xs.append(rebuild(y, 1))
    result, canon = canonical_with_map(LinkDiagram(new_xs, new_comps))
    map_k = {e: canon[e] for e in k.edges}
    map_j = {e: canon[rename_j[e]] for e in j.edges}
    return result, map_k, map_j


def multi_connected_sum(k: LinkDiagram, j: LinkDiagram,
                        splice: list[tuple[int, int]] | None = None) -> LinkDiagram:
    """Componentwise connected sum; see multi_connected_sum_with_maps."""
    return multi_connected_sum_with_maps(k, j, splice)[0]

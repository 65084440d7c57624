"""Realizability decision procedures and the constructive ribbon builder.

check_weak decides meridionality, componentwise commutation, and the
vanishing of the degree-2 obstruction sum; check_full adds conjugate
meridians, commutator membership, and the secondary obstruction in the
cyclic quotient.  The twist families produce systems that are always
realizable, and construct_ribbon builds an explicit labelled ribbon diagram
realizing any meridional system.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Crossing, LinkDiagram, linking_number
from .groups import CapExceeded, FiniteGroup, abelianization, evaluate_word
from .homenum import Homomorphism, is_meridional, peripheral_system
from .homology import (
    DEFAULT_CAP_ORDER,
    HomologyClass,
    jl_product,
    pontryagin_sum,
)
from .wirtinger import presentation


class RibbonInputError(ValueError):
    pass


class ConstructionError(RuntimeError):
    """The generated diagram failed its own re-derivation checks."""


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


@dataclass
class Verdict:
    """Outcome of the realizability conditions for (G, mu, lambda).

    condition_ii and condition_iv may be None when their hypotheses fail or
    a cap prevented evaluation; `not_applicable` and `cap_skipped` record
    why.  realizable is None when the conjugate-meridian hypothesis fails
    (the full characterization is only stated under it).
    """

    meridional: bool
    condition_i: list[bool]
    condition_ii: bool | None = None
    theta_witness: HomologyClass | None = None
    conjugate_meridians: bool | None = None
    condition_iii: list[bool] | None = None
    condition_iv: bool | None = None
    jl_witness: HomologyClass | None = None
    not_applicable: list[str] = field(default_factory=list)
    cap_skipped: list[str] = field(default_factory=list)
    diagnostic: str | None = None

    @property
    def weakly_realizable(self) -> bool:
        return bool(self.meridional and all(self.condition_i)
                    and self.condition_ii is True)

    @property
    def realizable(self) -> bool | None:
        if self.conjugate_meridians is None:
            return None
        if not self.conjugate_meridians:
            return None
        if self.cap_skipped:
            return None
        return bool(self.weakly_realizable
                    and self.condition_iii is not None
                    and all(self.condition_iii)
                    and self.condition_iv is True)

    def to_json(self) -> dict:
        return {
            "meridional": self.meridional,
            "condition_i": list(self.condition_i),
            "condition_ii": self.condition_ii,
            "theta_witness": (self.theta_witness.to_json()
                              if self.theta_witness is not None else None),
            "conjugate_meridians": self.conjugate_meridians,
            "condition_iii": (list(self.condition_iii)
                              if self.condition_iii is not None else None),
            "condition_iv": self.condition_iv,
            "jl_witness": (self.jl_witness.to_json()
                           if self.jl_witness is not None else None),
            "weakly_realizable": self.weakly_realizable,
            "realizable": self.realizable,
            "not_applicable": list(self.not_applicable),
            "cap_skipped": list(self.cap_skipped),
            "diagnostic": self.diagnostic,
        }


def check_weak(G: FiniteGroup, mu, lam,
               cap_order: int = DEFAULT_CAP_ORDER) -> Verdict:
    """Meridionality, componentwise commutation, vanishing degree-2 sum."""
    mu, lam = list(mu), list(lam)
    if len(mu) != len(lam) or not mu:
        raise ValueError("mu and lambda must be nonempty of equal length")
    v = Verdict(
        meridional=is_meridional(G, mu),
        condition_i=[G.commutes(m, l) for m, l in zip(mu, lam)],
    )
    if not all(v.condition_i):
        v.not_applicable.append("condition_ii needs commuting pairs")
        return v
    try:
        theta = pontryagin_sum(G, mu, lam, cap_order)
    except CapExceeded:
        v.cap_skipped.append("condition_ii")
        return v
    v.theta_witness = theta
    v.condition_ii = theta.is_zero
    return v


def check_full(G: FiniteGroup, mu, lam,
               cap_order: int = DEFAULT_CAP_ORDER) -> Verdict:
    """All four conditions; the secondary one only under its hypotheses."""
    mu, lam = list(mu), list(lam)
    v = check_weak(G, mu, lam, cap_order)
    v.conjugate_meridians = all(
        G.conjugacy_class(m) == G.conjugacy_class(mu[0]) for m in mu[1:])
    ab = abelianization(G)
    v.condition_iii = [l in ab.commutator_subgroup for l in lam]
    prerequisites_hold = (v.meridional and v.conjugate_meridians
                          and all(v.condition_i) and v.condition_ii is True
                          and all(v.condition_iii))
    if not v.conjugate_meridians:
        v.not_applicable.append(
            "condition_iv is defined only for pairwise-conjugate meridians")
        return v
    if not prerequisites_hold:
        if v.condition_ii is None and "condition_ii" in v.cap_skipped:
            v.cap_skipped.append("condition_iv")
        else:
            v.not_applicable.append(
                "condition_iv needs meridional mu, conditions (i)-(iii)")
        return v
    try:
        jl = jl_product(G, mu, lam, cap_order)
    except CapExceeded:
        v.cap_skipped.append("condition_iv")
        return v
    v.jl_witness = jl
    v.condition_iv = jl.is_zero
    if v.condition_iv is False:
        n = ab.quotient_order
        v.diagnostic = (
            "conditions (i)-(iii) hold but the secondary class is nonzero; "
            f"nearby weakly realizable candidates twist each lambda_i by "
            f"mu_i^(a_i) with a_i = 0 mod {n}, e.g. a_i in "
            f"{{0, {n}, {-n}, {2 * n}}}")
    return v


# ---------------------------------------------------------------------------
# known-realizable twist families
# ---------------------------------------------------------------------------


def quadratic_twist_exponents(b: int, c: int) -> tuple[int, int]:
    return (b * b + b * c, b * c + c * c)


def quadratic_twist_family(G: FiniteGroup, mu, b: int, c: int) -> list[int]:
    """(mu1^(b^2+bc), mu2^(bc+c^2)) for b + c = 0 mod |G/G'|.

    Always realizable for a 2-component meridional system.
    """
    mu = list(mu)
    if len(mu) != 2:
        raise ValueError("this family is defined for 2-component systems")
    n = abelianization(G).quotient_order
    if (b + c) % n != 0:
        raise ValueError(f"b + c must vanish mod {n}, got {b + c}")
    e1, e2 = quadratic_twist_exponents(b, c)
    return [G.power(mu[0], e1), G.power(mu[1], e2)]


def balanced_twist_families(G: FiniteGroup, mu, h: int) -> list[list[int]]:
    """Two always-realizable systems: (e, mu2^(n^2)) and
    (mu1^(hn), mu2^(-hn)) with n = |G/G'|."""
    mu = list(mu)
    if len(mu) != 2:
        raise ValueError("these families are defined for 2-component systems")
    n = abelianization(G).quotient_order
    return [
        [0, G.power(mu[1], n * n)],
        [G.power(mu[0], h * n), G.power(mu[1], -h * n)],
    ]


# ---------------------------------------------------------------------------
# ribbon construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RibbonInput:
    """A meridional system presented by conjugation data.

    mu[i][j] are elements with mu[i][0] the meridian of component i; the
    whole family must generate the group.  words[(i, j)] (j >= 1) is the
    conjugator word for mu[i][j], a sequence of letters (s, t, exp) standing
    for mu[s][t]^exp, multiplying left to right.
    """

    group: FiniteGroup
    mu: tuple[tuple[int, ...], ...]
    words: dict

    @property
    def r(self) -> int:
        return len(self.mu)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.mu)

    def meridians(self) -> list[int]:
        return [row[0] for row in self.mu]

    def evaluate_letters(self, letters) -> int:
        G = self.group
        acc = 0
        for s, t, e in letters:
            v = self.mu[s][t]
            if e == -1:
                v = G.inverse[v]
            elif e != 1:
                raise RibbonInputError("letter exponents must be +1 or -1")
            acc = G.mul(acc, v)
        return acc

    def validate(self):
        G = self.group
        expected = {(i, j) for i in range(self.r)
                    for j in range(1, len(self.mu[i]))}
        if set(self.words.keys()) != expected:
            raise RibbonInputError(
                f"words must be given exactly for {sorted(expected)}")
        for (i, j), letters in self.words.items():
            for s, t, e in letters:
                if not (0 <= s < self.r and 0 <= t < len(self.mu[s])):
                    raise RibbonInputError(f"letter references unknown mu[{s}][{t}]")
            w = self.evaluate_letters(letters)
            got = G.conjugate(w, self.mu[i][0])
            if got != self.mu[i][j]:
                raise RibbonInputError(
                    f"word ({i},{j}) conjugates mu[{i}][0] to "
                    f"{G.element_names[got]}, expected "
                    f"{G.element_names[self.mu[i][j]]}")
        flat = [v for row in self.mu for v in row]
        if len(G.subgroup_closure(flat)) != G.order:
            raise RibbonInputError("the mu entries do not generate the group")

    @staticmethod
    def from_json(G: FiniteGroup, obj: dict) -> "RibbonInput":
        mu = tuple(tuple(row) for row in obj["mu"])
        words = {}
        for item in obj.get("words", []):
            words[(item["i"], item["j"])] = [tuple(l) for l in item["letters"]]
        inp = RibbonInput(group=G, mu=mu, words=words)
        inp.validate()
        return inp


@dataclass
class RibbonRealization:
    diagram: LinkDiagram
    labelling: dict            # generator index -> element
    hom: Homomorphism
    mu: list[int]
    band_count: int


_ROT_CCW = {"E": "N", "N": "W", "W": "S", "S": "E"}


def _crossing_sign(over_dir: str, under_dir: str) -> int:
    return 1 if _ROT_CCW[over_dir] == under_dir else -1


def construct_ribbon(inp: RibbonInput) -> RibbonRealization:
    """Build the labelled ribbon diagram realizing the meridian system.

    Layout: one tall circle per mu entry, side by side, left strand down
    and right strand up.  Each conjugator word becomes a flat band issuing
    from the base circle of its component; per letter the band crosses the
    lettered circle passing under exactly one strand (chosen by the
    exponent sign and travel direction), and over everything else; the band
    finally splices into its target circle.  Letters are woven nearest the
    splice first so the accumulated conjugation multiplies in word order.
    """
    inp.validate()
    G = inp.group
    r = inp.r
    circle_order = [(i, j) for i in range(r) for j in range(len(inp.mu[i]))]
    col_of = {c: k for k, c in enumerate(circle_order)}

    circle_label = {col_of[c]: inp.mu[c[0]][c[1]] for c in circle_order}

    crossings: list[dict] = []
    strand_events: dict[tuple[int, str], list] = {
        (k, side): [] for k in range(len(circle_order)) for side in "LR"}

    def register(x: float, band_dir: str, band_role: str, level_key,
                 over_label: int):
        """Create one crossing between a band arc and a vertical strand.

        over_label is the group element labelling the over strand at this
        point: the circle's element when the band dives under (crossings sit
        outside every sandwich), or the band's running label when it passes
        over.
        """
        c = int(x) // 2
        side = "L" if int(x) % 2 == 0 else "R"
        strand_dir = "S" if side == "L" else "N"
        cid = len(crossings)
        if band_role == "U":
            rec = {"under_dir": band_dir, "over_dir": strand_dir,
                   "over_label": over_label}
        else:
            rec = {"under_dir": strand_dir, "over_dir": band_dir,
                   "over_label": over_label}
        crossings.append(rec)
        strand_events[(c, side)].append(
            (level_key, cid, "O" if band_role == "U" else "U"))
        return cid

    level_counter = 0
    bands = []   # per band: dict with legs and marker levels
    for i in range(r):
        for j in range(1, len(inp.mu[i])):
            letters = list(reversed(inp.words[(i, j)]))
            base_col = col_of[(i, 0)]
            target_col = col_of[(i, j)]
            pos = 2 * base_col + 1.5
            legs: list[tuple[str, list[tuple[int, str]]]] = []

            def strands_between(a: float, b: float) -> list[int]:
                lo, hi = (a, b) if a < b else (b, a)
                return [x for x in range(int(lo) + 1, int(hi) + 1)
                        if lo < x < hi]

            for s, t, e in letters:
                c = col_of[(s, t)]
                x_l, x_r = 2 * c, 2 * c + 1
                if pos < x_l:
                    span = [x for x in strands_between(pos, x_r + 0.5)]
                    ev = []
                    for x in span:
                        if x == x_l:
                            ev.append((x, "U" if e == 1 else "O"))
                        elif x == x_r:
                            ev.append((x, "O" if e == 1 else "U"))
                        else:
                            ev.append((x, "O"))
                    legs.append(("E", ev))
                    pos = x_r + 0.5
                elif pos > x_r:
                    span = [x for x in reversed(strands_between(x_l - 0.5, pos))]
                    ev = []
                    for x in span:
                        if x == x_r:
                            ev.append((x, "U" if e == 1 else "O"))
                        elif x == x_l:
                            ev.append((x, "O" if e == 1 else "U"))
                        else:
                            ev.append((x, "O"))
                    legs.append(("W", ev))
                    pos = x_l - 0.5
                else:
                    raise AssertionError("band position inside a corridor")
            target = 2 * target_col - 0.5
            if pos < target:
                legs.append(("E", [(x, "O") for x in strands_between(pos, target)]))
            elif pos > target:
                legs.append(("W", [(x, "O")
                                   for x in reversed(strands_between(target, pos))]))
            if not legs or legs[-1][0] == "W":
                legs.append(("E", []))

            leg_records = []
            band_label = inp.mu[i][0]
            for direction, ev in legs:
                level = level_counter
                level_counter += 1
                arc_a = []
                labels_at = []
                for x, role in ev:
                    if role == "U":
                        strand_dir = "S" if x % 2 == 0 else "N"
                        sigma = _crossing_sign(strand_dir, direction)
                        g = circle_label[x // 2]
                        gexp = g if sigma == 1 else G.inverse[g]
                        arc_a.append(register(x, direction, role,
                                              (level, 2), g))
                        band_label = G.conjugate(gexp, band_label)
                        labels_at.append(None)
                    else:
                        arc_a.append(register(x, direction, role,
                                              (level, 2), band_label))
                        labels_at.append(band_label)
                opposite = "W" if direction == "E" else "E"
                arc_b = []
                for (x, role), lbl in zip(reversed(ev), reversed(labels_at)):
                    g = circle_label[x // 2] if role == "U" else lbl
                    arc_b.append(register(x, opposite, role, (level, 0), g))
                leg_records.append({"a": arc_a, "b": arc_b})
            first_level = level_counter - len(legs)
            last_level = level_counter - 1
            band = {"i": i, "j": j, "legs": leg_records,
                    "attach_key": (first_level, 1),
                    "splice_key": (last_level, 1)}
            bands.append(band)
            strand_events[(base_col, "R")].append(
                (band["attach_key"], ("attach", len(bands) - 1), None))
            strand_events[(target_col, "L")].append(
                (band["splice_key"], ("splice", len(bands) - 1), None))

    # walk the merged components
    def strand_list(col: int, side: str):
        ev = sorted(strand_events[(col, side)], key=lambda t: t[0])
        if side == "L":
            ev.reverse()     # left strands run downward
        return ev

    events_by_component: list[list[tuple[int, str]]] = []

    def emit_band_arc(out, band, which: str):
        legs = band["legs"] if which == "a" else list(reversed(band["legs"]))
        for leg in legs:
            for cid in leg[which]:
                role = "U" if crossings[cid]["under_dir"] in "EW" else "O"
                out.append((cid, role))

    def emit_circle(out, col: int):
        """Full circle from its top: left strand down, bottom, right up."""
        for key, cid, role in strand_list(col, "L"):
            out.append((cid, role))
        for item in strand_list(col, "R"):
            key, cid, role = item
            if isinstance(cid, tuple):
                kind, bi = cid
                assert kind == "attach"
                emit_band_excursion(out, bi)
            else:
                out.append((cid, role))

    def emit_band_excursion(out, bi: int):
        band = bands[bi]
        emit_band_arc(out, band, "a")
        target_col = col_of[(band["i"], band["j"])]
        skey = band["splice_key"]
        left = strand_list(target_col, "L")   # descending y
        below = [t for t in left if t[0] < skey]
        above = [t for t in left if t[0] > skey]
        for key, cid, role in below:
            if isinstance(cid, tuple):
                raise AssertionError("nested splice on a target strand")
            out.append((cid, role))
        for item in strand_list(target_col, "R"):
            key, cid, role = item
            if isinstance(cid, tuple):
                raise AssertionError("attachment on a target circle")
            out.append((cid, role))
        for key, cid, role in above:
            if isinstance(cid, tuple):
                raise AssertionError("nested splice on a target strand")
            out.append((cid, role))
        emit_band_arc(out, band, "b")

    for i in range(r):
        out: list[tuple[int, str]] = []
        emit_circle(out, col_of[(i, 0)])
        events_by_component.append(out)

    # assign edges and build crossing slots
    comps: list[tuple[int, ...]] = []
    next_edge = 1
    for i, events in enumerate(events_by_component):
        k = len(events)
        if k == 0:
            comps.append(())
            continue
        edge_ids = tuple(range(next_edge, next_edge + k))
        next_edge += k
        comps.append(edge_ids)
        for t, (cid, role) in enumerate(events):
            incoming = edge_ids[t]
            outgoing = edge_ids[(t + 1) % k]
            key = "under" if role == "U" else "over"
            if key in crossings[cid]:
                raise AssertionError(f"crossing {cid} visited twice as {key}")
            crossings[cid][key] = (incoming, outgoing)

    built = []
    for rec in crossings:
        sign = _crossing_sign(rec["over_dir"], rec["under_dir"])
        a, c = rec["under"]
        oin, oout = rec["over"]
        if sign == 1:
            b, d = oout, oin
        else:
            b, d = oin, oout
        rec["sign"] = sign
        built.append(Crossing(under_in=a, over_a=b, under_out=c, over_b=d,
                              sign=sign))

    diagram = LinkDiagram(built, comps)
    labelling = _derive_labelling(diagram, G, events_by_component, comps,
                                  crossings, inp.meridians())
    hom = Homomorphism(
        assignment=tuple(labelling[g]
                         for g in range(presentation(diagram).generators)),
        target=G,
        surjective=len(G.subgroup_closure(list(labelling.values()))) == G.order)
    _verify_ribbon(inp, diagram, hom)
    return RibbonRealization(diagram=diagram, labelling=labelling, hom=hom,
                             mu=inp.meridians(), band_count=len(bands))


def _derive_labelling(d: LinkDiagram, G: FiniteGroup, events_by_component,
                      comps, crossings, mu) -> dict:
    """Edge labels read off the construction, then collected per arc.

    Walking a component, the label changes only at under-passes, by
    conjugation with the recorded over-strand label; it must close up to the
    meridian it started from.
    """
    label_of_edge: dict[int, int] = {}
    for i, events in enumerate(events_by_component):
        cur = mu[i]
        edge_ids = comps[i]
        for t, (cid, role) in enumerate(events):
            label_of_edge[edge_ids[t]] = cur
            if role == "U":
                rec = crossings[cid]
                o = rec["over_label"]
                gexp = o if rec["sign"] == 1 else G.inverse[o]
                cur = G.conjugate(gexp, cur)
        if events and cur != mu[i]:
            raise ConstructionError(
                f"label fails to close around component {i}")
    p = presentation(d)
    assignment: dict[int, int] = {}
    for gen, arc in enumerate(p.arcs):
        if not arc:
            assignment[gen] = mu[p.component_of[gen]]
            continue
        labels = {label_of_edge[e] for e in arc}
        if len(labels) != 1:
            raise ConstructionError(
                f"edges of arc {gen} carry inconsistent labels")
        assignment[gen] = labels.pop()
    return assignment


def _verify_ribbon(inp: RibbonInput, d: LinkDiagram, hom: Homomorphism):
    G = inp.group
    p = presentation(d)
    if d.num_components != inp.r:
        raise ConstructionError(
            f"built {d.num_components} components, expected {inp.r}")
    for w in p.relations:
        if evaluate_word(G, hom.assignment, w) != 0:
            raise ConstructionError("labelling violates a crossing relation")
    if not hom.surjective:
        raise ConstructionError("labelling is not surjective")
    mu = inp.meridians()
    for i in range(inp.r):
        if hom.assignment[p.meridian_generator[i]] != mu[i]:
            raise ConstructionError(f"meridian image mismatch on component {i}")
    for i in range(inp.r):
        for j in range(i + 1, inp.r):
            if linking_number(d, i, j) != 0:
                raise ConstructionError(
                    f"components {i},{j} have nonzero linking number")


# ---------------------------------------------------------------------------
# transporting realizations through diagram surgery
# ---------------------------------------------------------------------------


def _hom_from_edge_labels(d: LinkDiagram, G: FiniteGroup,
                          edge_label, component_label) -> Homomorphism:
    """Collect per-edge labels into an arc assignment (labels must agree on
    every arc); crossingless components take component_label."""
    p = presentation(d)
    assignment = []
    for gen, arc in enumerate(p.arcs):
        if not arc:
            assignment.append(component_label[p.component_of[gen]])
            continue
        labels = {edge_label[e] for e in arc}
        if len(labels) != 1:
            raise ConstructionError(f"arc {gen} has inconsistent labels")
        assignment.append(labels.pop())
    image = G.subgroup_closure(assignment)
    return Homomorphism(assignment=tuple(assignment), target=G,
                        surjective=len(image) == G.order)


def sum_realization(dk: LinkDiagram, dj: LinkDiagram, G: FiniteGroup,
                    hk: Homomorphism, hj: Homomorphism):
    """Default-splice connected sum with the merged labelling.

    Requires equal meridian images componentwise (the splice identifies the
    basepoint arcs).  Realizes the componentwise product of the summands'
    preferred systems; callers should confirm with verify_realization.
    """
    from .diagram import multi_connected_sum_with_maps

    pk, pj = presentation(dk), presentation(dj)
    mu_k = [hk.assignment[pk.meridian_generator[i]]
            for i in range(dk.num_components)]
    mu_j = [hj.assignment[pj.meridian_generator[i]]
            for i in range(dj.num_components)]
    if mu_k != mu_j:
        raise ValueError("summands must share meridian images at the splice")
    ds, map_k, map_j = multi_connected_sum_with_maps(dk, dj)
    edge_label: dict[int, int] = {}
    for e in dk.edges:
        edge_label[map_k[e]] = hk.assignment[pk.arc_of_edge[e]]
    for e in dj.edges:
        edge_label[map_j[e]] = hj.assignment[pj.arc_of_edge[e]]
    hom = _hom_from_edge_labels(ds, G, edge_label, mu_k)
    return ds, hom


def reversed_realization(d: LinkDiagram, G: FiniteGroup, h: Homomorphism):
    """Orientation reversal with the inverse labelling.

    Realizes the inverse peripheral system (mu^-1, lambda^-1)."""
    from .diagram import reverse_orientations_with_map

    p = presentation(d)
    rd, emap = reverse_orientations_with_map(d)
    edge_label = {emap[e]: G.inverse[h.assignment[p.arc_of_edge[e]]]
                  for e in d.edges}
    comp_label = [G.inverse[h.assignment[p.meridian_generator[i]]]
                  for i in range(d.num_components)]
    hom = _hom_from_edge_labels(rd, G, edge_label, comp_label)
    return rd, hom


# ---------------------------------------------------------------------------
# realization verification
# ---------------------------------------------------------------------------


def verify_realization(d: LinkDiagram, G: FiniteGroup, h: Homomorphism,
                       expected_mu, expected_lambda=None) -> bool:
    """True iff h is a surjection sending the meridians to expected_mu and
    (when given) the preferred-system longitudes to expected_lambda."""
    p = presentation(d)
    if len(h.assignment) != p.generators:
        raise ValueError("homomorphism does not match the diagram presentation")
    for w in p.relations:
        if evaluate_word(G, h.assignment, w) != 0:
            return False
    if not h.surjective:
        return False
    ps = peripheral_system(d, h)
    if list(ps.mu) != list(expected_mu):
        return False
    if expected_lambda is not None and list(ps.lam) != list(expected_lambda):
        return False
    return True

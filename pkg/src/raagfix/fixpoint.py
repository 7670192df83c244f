"""
Fixed and periodic points of graph-group endomorphisms.

The classification verdicts are decided purely from the graph.  Everything
else here produces finite evidence: ball scans for Fix and Per, projection
invariants, and the ascending chain H_1 ⊆ H_2 ⊆ ... of folded subgroups
whose strict growth is the desk-scale shadow of non-finite generation.
Nothing in this module claims that a list of fixed points generates Fix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alphabet import Classification, classify
from .freesub import FoldedGraph, fold, format_free_word, free_reduce, member
from .morphism import Morphism, apply, make_morphism, power, witness_auto, witness_endo
from .trace import GraphGroup, GroupElement, ball_enumerate, check_independent, project_pi, project_psi

ENDOMORPHISMS = "endomorphisms"
AUTOMORPHISMS = "automorphisms"

ALL_FG = "AllFinitelyGenerated"
NOT_ALL_FG = "NotAllFinitelyGenerated"
OUTSIDE_SCOPE = "OutsideTheoremScope"


@dataclass(frozen=True)
class Verdict:
    scope: str
    answer: str
    classification: Classification
    witness: Morphism | None = None
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "scope": self.scope,
            "answer": self.answer,
            "classification": self.classification.to_json(),
            "witness": self.witness.to_document()["images"] if self.witness else None,
            "notes": list(self.notes),
        }


def _factor_text(cls: Classification) -> str:
    return " * ".join(f"Z^{len(f)}" if len(f) > 1 else "Z" for f in cls.factors) or "1"


def classify_group(group: GraphGroup, scope: str = ENDOMORPHISMS) -> Verdict:
    if scope not in (ENDOMORPHISMS, AUTOMORPHISMS):
        raise ValueError(f"scope must be {ENDOMORPHISMS!r} or {AUTOMORPHISMS!r}")
    cls = classify(group.alphabet, group.relation)
    if cls.is_clique_union:
        return Verdict(scope, ALL_FG, cls, None, (
            f"G is the free product {_factor_text(cls)} of free abelian groups.",
            "Fix and Per are finitely generated for every endomorphism (Kurosh rank of Fix is bounded by the number of factors).",
        ))
    a, b, c = cls.witness_triple
    if scope == ENDOMORPHISMS or cls.is_transitive_forest:
        make = witness_endo if scope == ENDOMORPHISMS else witness_auto
        phi = make(group, cls.witness_triple)
        return Verdict(scope, NOT_ALL_FG, cls, phi, (
            f"({a},{b}) and ({b},{c}) commute but ({a},{c}) do not, so I ∪ Δ is not transitive.",
            f"Fixed points u of the witness satisfy π_{a}(u) = π_{c}(u) and {a}^i {c}^i is fixed for all i,"
            f" so the projection of Fix to F({a},{c}) meets {a}*{c}* in the non-regular set {{{a}^n {c}^n}}.",
            "A finitely generated subgroup would give a rational set there, so Fix and Per of the witness are not finitely generated.",
        ))
    kind, verts = cls.forbidden_witness
    return Verdict(scope, OUTSIDE_SCOPE, cls, None, (
        f"Γ has an induced {kind} on {', '.join(verts)}, so it is not a transitive forest.",
        "Outside transitive forests the automorphism question depends on the graph: "
        "on the square a-c, c-b, b-d, d-a (F2 x F2) every automorphism has finitely generated Fix and Per "
        "(demo ex-fgyes), while the graph a-b, b-c, c-d, c-e, b-e carries an automorphism whose Fix is not "
        "finitely generated (demo ex-fgno).",
    ))


def fix_in_ball(phi: Morphism, radius: int) -> list[GroupElement]:
    return [u for u in ball_enumerate(phi.group, radius) if apply(phi, u) == u]


def per_in_ball(phi: Morphism, radius: int, kmax: int) -> list[tuple[GroupElement, int]]:
    """Ball elements with their least period k ≤ kmax (Per is truncated at kmax)."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    powers = [power(phi, k) for k in range(1, kmax + 1)]
    out = []
    for u in ball_enumerate(phi.group, radius):
        for k, pk in enumerate(powers, start=1):
            if apply(pk, u) == u:
                out.append((u, k))
                break
    return out


@dataclass
class InvariantReport:
    generators: tuple[str, ...]
    radius: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "radius": self.radius,
            "checked": self.checked,
            "violations": [{"element": str(u), "exponents": vals} for u, vals in self.violations],
            "passed": self.passed,
        }


def projection_invariant_check(phi: Morphism, generators, radius: int) -> InvariantReport:
    """Check that π_x(u) is the same for every listed x over the fixed points in the ball."""
    generators = tuple(generators)
    for g in generators:
        phi.group.index(g)
    report = InvariantReport(generators, radius)
    for u in fix_in_ball(phi, radius):
        report.checked += 1
        vals = {g: project_pi(u, g) for g in generators}
        if len(set(vals.values())) > 1:
            report.violations.append((u, vals))
    return report


class ChainPreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class ChainLevel:
    n: int
    num_generators: int
    num_states: int
    probe: str
    probe_member: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "generators": self.num_generators,
            "states": self.num_states,
            "probe": self.probe,
            "probe_member": self.probe_member,
        }


@dataclass(frozen=True)
class ChainReport:
    family: tuple[str, ...]
    projection: tuple[str, ...]
    levels: tuple[ChainLevel, ...]
    extra_generators: tuple[str, ...]
    monotone: bool

    @property
    def stabilized(self) -> bool:
        hits = [lv.probe_member for lv in self.levels]
        if True not in hits:
            return False
        return all(hits[hits.index(True):])

    @property
    def strictly_ascending(self) -> bool:
        # probe is a level-(n+1) generator outside H_n
        return not any(lv.probe_member for lv in self.levels)

    def to_json(self) -> dict:
        return {
            "family": list(self.family),
            "projection": list(self.projection),
            "extra_generators": list(self.extra_generators),
            "levels": [lv.to_json() for lv in self.levels],
            "monotone": self.monotone,
            "stabilized": self.stabilized,
            "strictly_ascending": self.strictly_ascending,
        }


def family_element(group: GraphGroup, family, i: int) -> GroupElement:
    """x1^i x2^i ... xk^i."""
    word = []
    for x in family:
        word.extend([(group.index(x), 1)] * i)
    return group.normal_form(word)


def _named(group: GraphGroup, word):
    return tuple((group.alphabet.name(g), s) for g, s in word)


def chain_experiment(phi: Morphism, family, levels: int, projection=None,
                     include_fixed_generators: bool = True) -> ChainReport:
    """Fold H_n = ⟨Ψ(x1^i ... xk^i) : i ≤ n⟩ for n = 1..levels and probe the next family member.

    ``projection`` is the independent set Ψ projects onto (default: the family's
    generators).  With ``include_fixed_generators`` every projection generator
    that φ fixes joins every H_n, since it lies in Fix φ and projects to itself.
    """
    group = phi.group
    family = tuple(family)
    projection = tuple(projection) if projection is not None else tuple(dict.fromkeys(family))
    proj_idx = check_independent(group, projection)
    labels = tuple(group.alphabet.name(g) for g in sorted(proj_idx))
    if levels < 1:
        raise ValueError("need at least one level")

    images = []
    for i in range(1, levels + 2):
        u = family_element(group, family, i)
        if apply(phi, u) != u:
            raise ChainPreconditionError(f"family element {u} (i={i}) is not fixed: it maps to {apply(phi, u)}")
        images.append(free_reduce(_named(group, project_psi(u, projection))))

    extras = []
    if include_fixed_generators:
        for x in labels:
            g = group.generator(x)
            if apply(phi, g) == g:
                extras.append(((x, 1),))

    records = []
    graphs: list[FoldedGraph] = []
    for n in range(1, levels + 1):
        gens = extras + images[:n]
        h = fold(gens, labels)
        graphs.append(h)
        probe = images[n]
        records.append(ChainLevel(n, len(gens), h.num_states, format_free_word(probe), member(h, probe)))
    monotone = all(member(graphs[k + 1], w) for k in range(len(graphs) - 1) for w in graphs[k].generators)
    return ChainReport(family, projection, tuple(records), tuple(format_free_word(w) for w in extras), monotone)


@dataclass(frozen=True)
class PeriodComparison:
    radius: int
    kmax: int
    per_phi: tuple[GroupElement, ...]
    per_square: tuple[GroupElement, ...]

    @property
    def equal(self) -> bool:
        return set(self.per_phi) == set(self.per_square)

    def to_json(self) -> dict:
        a, b = set(self.per_phi), set(self.per_square)
        return {
            "radius": self.radius,
            "kmax": self.kmax,
            "per_phi": len(a),
            "per_phi_squared": len(b),
            "only_phi": sorted(str(u) for u in a - b),
            "only_phi_squared": sorted(str(u) for u in b - a),
            "equal": self.equal,
        }


def per_equals_fix_of_power_check(phi: Morphism, radius: int, kmax: int) -> PeriodComparison:
    """Compare Per φ with Per φ² on the ball (powers truncated at kmax and ⌈kmax/2⌉)."""
    per_phi = tuple(u for u, _ in per_in_ball(phi, radius, kmax))
    per_sq = tuple(u for u, _ in per_in_ball(power(phi, 2), radius, -(-kmax // 2)))
    return PeriodComparison(radius, kmax, per_phi, per_sq)


# --- F(a,b) x F(c,d): the square graph ------------------------------------

LEFT = ("a", "b")
RIGHT = ("c", "d")
_PSI = {"a": "c", "b": "d", "c": "a", "d": "b"}

TYPE_I = "TypeI"
TYPE_II = "TypeII"
NOT_RECOGNIZED = "NotRecognized"


def square_group() -> GraphGroup:
    """Γ = square a-c, c-b, b-d, d-a, so G = F(a,b) x F(c,d)."""
    return GraphGroup.build("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def _as_free(word, allowed, what):
    from .freesub import parse_free_word

    if isinstance(word, str):
        word = parse_free_word(word)
    word = free_reduce(tuple(word))
    bad = {n for n, _ in word} - set(allowed)
    if bad:
        raise ValueError(f"{what} uses letters {sorted(bad)} outside {allowed}")
    return word


def free_apply(images: dict, word):
    """Substitute free words for letters and freely reduce."""
    out = []
    for n, s in word:
        w = images[n]
        out.extend(w if s > 0 else [(m, -t) for m, t in reversed(w)])
    return free_reduce(out)


def _psi(word):
    return tuple((_PSI[n], s) for n, s in word)


def _is_onto(images: dict, labels) -> bool:
    # folded graph of the images is the rose on all labels iff they generate
    return fold(list(images.values()), labels) == fold([((x, 1),) for x in labels], labels)


def signed_permutation_fix(images: dict, labels):
    """Fix of a letter permutation with inversions, or None if ``images`` is not one.

    Such a map sends reduced words letter by letter to reduced words, so a
    word is fixed iff each of its letters is: Fix = ⟨x : x ↦ x⟩.
    """
    targets = set()
    for x in labels:
        w = images[x]
        if len(w) != 1:
            return None
        targets.add(w[0][0])
    if targets != set(labels):
        return None
    return [((x, 1),) for x in labels if images[x] == ((x, 1),)]


@dataclass(frozen=True)
class SquareClassification:
    kind: str
    phi1: dict | None
    phi2: dict | None
    morphism: Morphism | None
    diagnostic: str = ""

    def to_json(self) -> dict:
        fmt = lambda d: {k: format_free_word(v) for k, v in sorted(d.items())} if d else None
        return {"kind": self.kind, "phi1": fmt(self.phi1), "phi2": fmt(self.phi2), "diagnostic": self.diagnostic}


def fgyes_classify(images) -> SquareClassification:
    """Sort an automorphism of F(a,b) x F(c,d) into type I or type II.

    ``images`` maps each of a, b, c, d to a pair (word over a,b ; word over c,d).
    Type I: (u,v) ↦ (u φ1, v φ2).  Type II: (u,v) ↦ (v φ2 ψ⁻¹, u φ1 ψ) with
    ψ: a ↦ c, b ↦ d.
    """
    pairs = {}
    for x in LEFT + RIGHT:
        if x not in images:
            raise ValueError(f"missing image for {x}")
        u, v = images[x]
        pairs[x] = (_as_free(u, LEFT, f"left part of {x}"), _as_free(v, RIGHT, f"right part of {x}"))

    group = square_group()

    def morphism():
        return make_morphism(group, {x: _pair_word(group, p) for x, p in pairs.items()})

    def reject(msg):
        try:
            m = morphism()
        except ValueError:
            m = None
        return SquareClassification(NOT_RECOGNIZED, None, None, m, msg)

    au, av = pairs["a"]
    if au and not av:
        kind = TYPE_I
        left_side, right_side = LEFT, RIGHT
    elif av and not au:
        kind = TYPE_II
        left_side, right_side = RIGHT, LEFT
    else:
        return reject("image of a is trivial or has support in both factors, so it does not preserve "
                      "the set of elements with nonabelian centraliser")
    # left_side generators must land in the same factor as a; the others in the other factor
    for x in LEFT:
        u, v = pairs[x]
        if (kind == TYPE_I and v) or (kind == TYPE_II and u) or not (u or v):
            return reject(f"image of {x} is not inside the factor F({','.join(left_side)})")
    for x in RIGHT:
        u, v = pairs[x]
        if (kind == TYPE_I and u) or (kind == TYPE_II and v) or not (u or v):
            return reject(f"image of {x} is not inside the factor F({','.join(right_side)})")

    if kind == TYPE_I:
        phi1 = {x: pairs[x][0] for x in LEFT}
        phi2 = {x: pairs[x][1] for x in RIGHT}
    else:
        phi1 = {x: _psi(pairs[x][1]) for x in LEFT}
        phi2 = {x: _psi(pairs[x][0]) for x in RIGHT}
    if not _is_onto(phi1, LEFT) or not _is_onto(phi2, RIGHT):
        return reject("a component is not onto its free factor, so the map is not an automorphism")
    return SquareClassification(kind, phi1, phi2, morphism())


def _pair_word(group, pair):
    u, v = pair
    return tuple((group.index(n), s) for n, s in u + v)


@dataclass(frozen=True)
class SquareFix:
    kind: str
    generators: tuple[tuple[tuple, tuple], ...]
    complete: bool
    verified: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "generators": [[format_free_word(u), format_free_word(v)] for u, v in self.generators],
            "complete": self.complete,
            "verified": self.verified,
        }


class FixVerificationError(ValueError):
    pass


def _fixed_subgroup(images, labels, supplied, what):
    if supplied is None:
        found = signed_permutation_fix(images, labels)
        if found is None:
            raise ValueError(f"{what} is not a signed letter permutation; supply generators of its fixed subgroup")
        return found, True
    gens = [_as_free(z, labels, what) for z in supplied]
    for z in gens:
        if free_apply(images, z) != z:
            raise FixVerificationError(f"{format_free_word(z)} is not fixed by {what}")
    return gens, False


def fgyes_fix(cls: SquareClassification, k_generators=None, fix1=None, fix2=None) -> SquareFix:
    """Generators of Fix φ for a recognised automorphism of F(a,b) x F(c,d).

    Type I: Fix φ = Fix φ1 x Fix φ2, from ``fix1``/``fix2``.  Type II: Fix φ is
    the diagonal {(z, z φ1 ψ) : z ∈ K} with K = Fix(φ1 ψ φ2 ψ⁻¹) generated by
    ``k_generators``.  Missing generator lists are computed only for signed
    letter permutations.  Every output is checked by applying φ.
    """
    if cls.kind not in (TYPE_I, TYPE_II):
        raise ValueError("automorphism was not recognised as type I or II")
    if cls.kind == TYPE_I:
        f1, c1 = _fixed_subgroup(cls.phi1, LEFT, fix1, "phi1")
        f2, c2 = _fixed_subgroup(cls.phi2, RIGHT, fix2, "phi2")
        gens = [(z, ()) for z in f1] + [((), w) for w in f2]
        complete = c1 and c2
    else:
        # θ = φ1 ψ φ2 ψ⁻¹ on F(a,b)
        theta = {x: _psi(free_apply(cls.phi2, _psi(free_apply(cls.phi1, ((x, 1),))))) for x in LEFT}
        ks, complete = _fixed_subgroup(theta, LEFT, k_generators, "phi1 psi phi2 psi^-1")
        gens = [(z, _psi(free_apply(cls.phi1, z))) for z in ks]
    group = cls.morphism.group
    for pair in gens:
        u = group.normal_form(_pair_word(group, pair))
        if apply(cls.morphism, u) != u:
            raise FixVerificationError(f"{pair} is not fixed")
    return SquareFix(cls.kind, tuple(gens), complete, True)


def square_pairs_from_morphism(phi: Morphism) -> dict:
    """Split the images of a morphism of the square group into (left, right) pairs."""
    group = phi.group
    out = {}
    for x in LEFT + RIGHT:
        img = phi.image(x)
        out[x] = (_named(group, project_psi(img, LEFT)), _named(group, project_psi(img, RIGHT)))
    return out

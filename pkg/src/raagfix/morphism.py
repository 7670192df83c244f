"""
Endomorphisms of graph groups given by generator images.

Morphisms act on the right: ``apply(phi, u)`` is ``u φ`` and the composite
``phi.then(psi)`` sends ``u`` to ``(u φ) ψ``.

Surjectivity is certified by exhibiting every generator as a short product of
images.  Graph groups are residually finite, hence hopfian, so a surjective
endomorphism is an automorphism; injectivity is never checked directly.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .abelian import determinant
from .alphabet import is_transitive_forest
from .trace import GraphGroup, GroupElement, commutes


class WellDefinednessViolation(ValueError):
    """Images of an independent pair (x, y) fail to commute."""

    def __init__(self, pair, images):
        self.pair = pair
        super().__init__(
            f"({pair[0]}, {pair[1]}) ∈ I but their images {images[0]} and {images[1]} do not commute"
        )


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    group: GraphGroup
    images: tuple[GroupElement, ...]

    def __post_init__(self):
        if len(self.images) != self.group.rank:
            raise MorphismError(f"need {self.group.rank} images, got {len(self.images)}")
        for img in self.images:
            if img.group != self.group:
                raise MorphismError("image lives in a different group")
        name = self.group.alphabet.name
        for i, j in sorted(self.group.relation.edges):
            if not commutes(self.images[i], self.images[j]):
                raise WellDefinednessViolation((name(i), name(j)), (self.images[i], self.images[j]))

    @property
    def well_defined(self) -> bool:
        # construction fails otherwise
        return True

    def __call__(self, u: GroupElement) -> GroupElement:
        return apply(self, u)

    def image(self, name: str) -> GroupElement:
        return self.images[self.group.index(name)]

    def then(self, other: Morphism) -> Morphism:
        if other.group != self.group:
            raise MorphismError("cannot compose morphisms of different groups")
        return Morphism(self.group, tuple(apply(other, img) for img in self.images))

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(img.exponent_vector() for img in self.images)

    def is_identity(self) -> bool:
        return all(img.word == ((g, 1),) for g, img in enumerate(self.images))

    def to_document(self) -> dict:
        return {"images": {name: str(img) for name, img in zip(self.group.alphabet, self.images)}}

    def __str__(self):
        return ", ".join(f"{n} -> {img if img.word else '1'}" for n, img in zip(self.group.alphabet, self.images))


def make_morphism(group: GraphGroup, images: Mapping) -> Morphism:
    """Build a morphism; generators missing from ``images`` map to themselves.

    Values may be word strings (``""`` is the identity), raw words or elements.
    """
    unknown = set(images) - set(group.alphabet)
    if unknown:
        raise MorphismError(f"images given for unknown generators {sorted(unknown)}")
    out = []
    for name in group.alphabet:
        if name in images:
            out.append(group.element(images[name]))
        else:
            out.append(group.generator(name))
    return Morphism(group, tuple(out))


def parse_morphism(group: GraphGroup, doc) -> Morphism:
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or not isinstance(doc.get("images", {}), dict):
        raise MorphismError("morphism document needs an 'images' object")
    return make_morphism(group, doc.get("images", {}))


def load_morphism(group: GraphGroup, path) -> Morphism:
    return parse_morphism(group, Path(path).read_text(encoding="utf-8"))


def identity_morphism(group: GraphGroup) -> Morphism:
    return make_morphism(group, {})


def apply(phi: Morphism, u: GroupElement) -> GroupElement:
    if u.group != phi.group:
        raise MorphismError("element and morphism live in different groups")
    word = []
    for g, s in u.word:
        w = phi.images[g].word
        if s > 0:
            word.extend(w)
        else:
            word.extend((h, -t) for h, t in reversed(w))
    return phi.group.normal_form(word)


def power(phi: Morphism, n: int) -> Morphism:
    if n < 1:
        raise MorphismError("power needs n >= 1")
    out = phi
    for _ in range(n - 1):
        out = out.then(phi)
    return out


def abelianization_matrix(phi: Morphism) -> list[list[int]]:
    """``M[x][y]`` = exponent sum of ``y`` in the image of ``x``."""
    return [list(row) for row in phi.matrix]


def _check_triple(group: GraphGroup, triple) -> tuple[int, int, int]:
    a, b, c = (group.index(x) for x in triple)
    if len({a, b, c}) != 3:
        raise MorphismError(f"triple {tuple(triple)} must consist of distinct generators")
    if not (group.commute(a, b) and group.commute(b, c)):
        raise MorphismError(f"triple {tuple(triple)}: need (a,b) and (b,c) in I")
    if group.commute(a, c):
        raise MorphismError(f"triple {tuple(triple)}: (a,c) must not be in I")
    return a, b, c


def _triple_images(group, a, b, c, others):
    ga, gb, gc = (group.generator(group.alphabet.name(i)) for i in (a, b, c))
    images = {}
    for i, name in enumerate(group.alphabet):
        if i == a:
            images[name] = ga * gb
        elif i == b:
            images[name] = gb
        elif i == c:
            images[name] = ~gb * gc
        else:
            images[name] = others(name)
    return images


def witness_endo(group: GraphGroup, triple) -> Morphism:
    """a ↦ ab, b ↦ b, c ↦ b⁻¹c and every other generator ↦ 1."""
    a, b, c = _check_triple(group, triple)
    return make_morphism(group, _triple_images(group, a, b, c, lambda name: group.identity))


def witness_auto(group: GraphGroup, triple) -> Morphism:
    """a ↦ ab, c ↦ b⁻¹c and every other generator fixed.

    Only well defined in general on transitive forests, where (a,d) ∈ I forces
    (b,d) ∈ I.
    """
    forest, cert = is_transitive_forest(group.relation)
    if not forest:
        names = [group.alphabet.name(v) for v in cert.vertices]
        raise MorphismError(f"graph is not a transitive forest: induced {cert.kind} on {names}")
    a, b, c = _check_triple(group, triple)
    return make_morphism(group, _triple_images(group, a, b, c, group.generator))


def fgno_group() -> GraphGroup:
    return GraphGroup.build("abcde", [("a", "b"), ("b", "c"), ("c", "d"), ("c", "e"), ("b", "e")])


def example_fgno_auto() -> tuple[GraphGroup, Morphism]:
    """Five-generator automorphism whose fixed subgroup is not finitely generated."""
    group = fgno_group()
    phi = make_morphism(group, {"a": "a b^-1", "b": "b", "c": "c", "d": "d c^-1", "e": "e b c"})
    return group, phi


VERIFIED = "Verified"
REFUTED = "Refuted"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class AutoCertificate:
    verdict: str
    determinant: int
    depth: int
    # generator name -> word over images, as (generator name, ±1) factors
    preimages: dict = field(default_factory=dict)

    @property
    def needed_depth(self) -> int | None:
        """Length of the longest preimage word found, None unless Verified."""
        if not self.preimages:
            return None
        return max(len(w) for w in self.preimages.values())

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "determinant": self.determinant,
            "depth": self.depth,
            "needed_depth": self.needed_depth,
            "preimages": {k: format_image_word(v) for k, v in sorted(self.preimages.items())},
        }


def format_image_word(factors) -> str:
    if not factors:
        return "1"
    return " ".join(f"φ({n})" if s > 0 else f"φ({n})^-1" for n, s in factors)


def evaluate_image_word(phi: Morphism, factors) -> GroupElement:
    out = phi.group.identity
    for name, s in factors:
        img = phi.image(name)
        out = out * (img if s > 0 else ~img)
    return out


def certify_automorphism(phi: Morphism, depth: int = 4) -> AutoCertificate:
    """Try to prove ``phi`` is an automorphism.

    Refuted when the abelianisation is not unimodular.  Otherwise a
    breadth-first search over products of at most ``depth`` images and
    inverse images looks for every generator; success means ``phi`` is onto.
    """
    if depth < 1:
        raise MorphismError("depth must be at least 1")
    det = determinant(phi.matrix)
    if abs(det) != 1:
        return AutoCertificate(REFUTED, det, depth)
    group = phi.group
    factors = [(name, s) for name in group.alphabet for s in (1, -1)]
    steps = [(f, img if f[1] > 0 else ~img) for f in factors for img in [phi.image(f[0])]]
    targets = {group.generator(name): name for name in group.alphabet}
    found: dict[str, tuple] = {}
    seen = {group.identity: ()}
    level = [group.identity]
    for _ in range(depth):
        nxt = []
        for u in level:
            for f, step in steps:
                v = u * step
                if v not in seen:
                    seen[v] = seen[u] + (f,)
                    nxt.append(v)
                    if v in targets:
                        found[targets[v]] = seen[v]
        level = nxt
        if len(found) == len(targets):
            return AutoCertificate(VERIFIED, det, depth, found)
    return AutoCertificate(UNKNOWN, det, depth)

"""
Independence alphabets (A, I) viewed as simple graphs.

Generators are kept in a fixed total order (list order); every search in
this module walks vertices in that order so that witnesses are the
lexicographically least ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    generators: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        seen = set()
        for name in self.generators:
            if not isinstance(name, str) or not name:
                raise AlphabetError(f"generator names must be non-empty strings, got {name!r}")
            if any(ch.isspace() for ch in name) or "^" in name:
                raise AlphabetError(f"illegal generator name {name!r}")
            if name in seen:
                raise AlphabetError(f"duplicate generator {name!r}")
            seen.add(name)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.generators)}

    def index(self, name: str) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise AlphabetError(f"unknown generator {name!r}") from None

    def name(self, i: int) -> str:
        return self.generators[i]


@dataclass(frozen=True)
class IndependenceRelation:
    """Edge set of Γ(A, I) on vertices ``0..size-1``; pairs stored as (i, j) with i < j."""

    size: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        for i, j in self.edges:
            if not (0 <= i < j < self.size):
                raise AlphabetError(f"edge {(i, j)} is not canonical for {self.size} vertices")

    @classmethod
    def from_pairs(cls, size: int, pairs) -> IndependenceRelation:
        edges = set()
        for i, j in pairs:
            if i == j:
                raise AlphabetError(f"self-loop on vertex {i}")
            if not (0 <= i < size and 0 <= j < size):
                raise AlphabetError(f"edge {(i, j)} out of range")
            edges.add((min(i, j), max(i, j)))
        return cls(size, frozenset(edges))

    @classmethod
    def complete(cls, size: int) -> IndependenceRelation:
        return cls(size, frozenset(combinations(range(size), 2)))

    @cached_property
    def neighbours(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.size)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return tuple(frozenset(s) for s in adj)

    def related(self, i: int, j: int) -> bool:
        """True iff (i, j) ∈ I.  Irreflexive: ``related(i, i)`` is False."""
        return j in self.neighbours[i]


@dataclass(frozen=True)
class ForbiddenSubgraph:
    """Four vertices inducing a path or a square, listed along the path/cycle."""

    kind: str  # "path4" or "cycle4"
    vertices: tuple[int, int, int, int]


@dataclass(frozen=True)
class Classification:
    is_clique_union: bool
    witness_triple: tuple[str, str, str] | None
    is_transitive_forest: bool
    forbidden_witness: tuple[str, tuple[str, ...]] | None
    factors: tuple[tuple[str, ...], ...]

    def to_json(self) -> dict:
        return {
            "is_clique_union": self.is_clique_union,
            "witness_triple": list(self.witness_triple) if self.witness_triple else None,
            "is_transitive_forest": self.is_transitive_forest,
            "forbidden_witness": (
                {"kind": self.forbidden_witness[0], "vertices": list(self.forbidden_witness[1])}
                if self.forbidden_witness
                else None
            ),
            "factors": [list(f) for f in self.factors],
        }


def parse_alphabet(doc) -> tuple[Alphabet, IndependenceRelation]:
    """Read a graph document ``{"generators": [...], "edges": [[x, y], ...]}``.

    ``doc`` may be a dict or its JSON text.
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or "generators" not in doc:
        raise AlphabetError("graph document needs a 'generators' list")
    alphabet = Alphabet(tuple(doc["generators"]))
    pairs = []
    for edge in doc.get("edges", []):
        if len(edge) != 2:
            raise AlphabetError(f"edge must have two endpoints, got {edge!r}")
        x, y = edge
        if x == y:
            raise AlphabetError(f"self-loop on {x!r}")
        pairs.append((alphabet.index(x), alphabet.index(y)))
    return alphabet, IndependenceRelation.from_pairs(len(alphabet), pairs)


def load_alphabet(path) -> tuple[Alphabet, IndependenceRelation]:
    return parse_alphabet(Path(path).read_text(encoding="utf-8"))


def graph_document(alphabet: Alphabet, rel: IndependenceRelation) -> dict:
    return {
        "generators": list(alphabet.generators),
        "edges": [[alphabet.name(i), alphabet.name(j)] for i, j in sorted(rel.edges)],
    }


def is_union_of_cliques(rel: IndependenceRelation) -> tuple[bool, tuple[int, int, int] | None]:
    """Decide whether every component of Γ(A, I) is complete.

    On failure return the least triple (a, b, c) with (a,b), (b,c) ∈ I and
    (a,c) ∉ I, a != c.  Such a triple is exactly a failure of transitivity
    of I ∪ Δ_A.
    """
    nbrs = rel.neighbours
    for a in range(rel.size):
        for b in sorted(nbrs[a]):
            for c in sorted(nbrs[b]):
                if c != a and c not in nbrs[a]:
                    return False, (a, b, c)
    return True, None


def _induced_shape(rel: IndependenceRelation, quad) -> ForbiddenSubgraph | None:
    sub = [(x, y) for x, y in combinations(quad, 2) if rel.related(x, y)]
    if len(sub) not in (3, 4):
        return None
    deg = {v: 0 for v in quad}
    for x, y in sub:
        deg[x] += 1
        deg[y] += 1
    if len(sub) == 4:
        if any(d != 2 for d in deg.values()):
            return None
        kind = "cycle4"
        start = min(quad)
    else:
        if sorted(deg.values()) != [1, 1, 2, 2]:
            return None
        kind = "path4"
        start = min(v for v in quad if deg[v] == 1)
    # walk along the shape, preferring the smaller neighbour at the start
    order = [start]
    prev = None
    cur = start
    while len(order) < 4:
        options = sorted(v for v in quad if v != prev and v not in order and rel.related(cur, v))
        prev, cur = cur, options[0]
        order.append(cur)
    return ForbiddenSubgraph(kind, tuple(order))


def is_transitive_forest(rel: IndependenceRelation) -> tuple[bool, ForbiddenSubgraph | None]:
    """Brute-force scan of all 4-subsets for an induced path or square."""
    for quad in combinations(range(rel.size), 4):
        shape = _induced_shape(rel, quad)
        if shape is not None:
            return False, shape
    return True, None


def components(rel: IndependenceRelation) -> list[tuple[int, ...]]:
    parent = list(range(rel.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in rel.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for v in range(rel.size):
        groups.setdefault(find(v), []).append(v)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def decompose(rel: IndependenceRelation) -> list[tuple[int, ...]]:
    """Free factors of a clique-union graph group: one ℤ^k per component of size k."""
    ok, triple = is_union_of_cliques(rel)
    if not ok:
        raise AlphabetError(f"graph is not a disjoint union of cliques (witness {triple})")
    return components(rel)


def classify(alphabet: Alphabet, rel: IndependenceRelation) -> Classification:
    cliques, triple = is_union_of_cliques(rel)
    forest, cert = is_transitive_forest(rel)
    name = alphabet.name
    return Classification(
        is_clique_union=cliques,
        witness_triple=tuple(name(v) for v in triple) if triple else None,
        is_transitive_forest=forest,
        forbidden_witness=(cert.kind, tuple(name(v) for v in cert.vertices)) if cert else None,
        factors=tuple(tuple(name(v) for v in comp) for comp in components(rel)),
    )

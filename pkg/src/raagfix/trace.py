"""
Elements of a graph group G(A, I) as canonical words.

A letter is a pair ``(generator index, sign)``.  An element is stored as the
lexicographically least reduced word of its commutation class, where letters
are ordered by generator index and then ``+1`` before ``-1``.  Two words
represent the same element iff their normal forms coincide (the reduced
trace of an element is unique).

Homomorphisms act on the right throughout: ``u`` maps to ``u φ``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .alphabet import Alphabet, AlphabetError, IndependenceRelation, parse_alphabet

Letter = tuple[int, int]
Word = tuple[Letter, ...]


class WordSyntaxError(ValueError):
    pass


def letter_key(letter: Letter) -> tuple[int, int]:
    return (letter[0], 0 if letter[1] > 0 else 1)


def word_key(word) -> tuple:
    """Length-lex sort key."""
    return (len(word), tuple(letter_key(x) for x in word))


def inverse_word(word) -> Word:
    return tuple((g, -s) for g, s in reversed(word))


def free_reduce(word) -> Word:
    out: list[Letter] = []
    for g, s in word:
        if out and out[-1] == (g, -s):
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def reduce_word(word, rel: IndependenceRelation) -> list[Letter]:
    """Delete cancelling pairs ``x ... x^-1`` whose middle commutes with ``x``.

    Letters are pushed one at a time onto an already reduced prefix; a new
    letter cancels against the last occurrence of its generator provided
    everything after that occurrence commutes with it.
    """
    nbrs = rel.neighbours
    out: list[Letter] = []
    for g, s in word:
        j = len(out) - 1
        while j >= 0:
            h = out[j][0]
            if h == g:
                break
            if h not in nbrs[g]:
                j = -1
                break
            j -= 1
        if j >= 0 and out[j][1] == -s:
            del out[j]
        else:
            out.append((g, s))
    return out


def lex_canonical(word, rel: IndependenceRelation) -> Word:
    """Lexicographically least word in the commutation class of ``word``.

    Greedy: repeatedly emit the least letter that commutes with everything
    before it in the remaining word.
    """
    nbrs = rel.neighbours
    rest = list(word)
    out: list[Letter] = []
    while rest:
        blocked: set[int] = set()
        best = None
        for i, x in enumerate(rest):
            g = x[0]
            if blocked <= nbrs[g] and (best is None or letter_key(x) < letter_key(rest[best])):
                best = i
            blocked.add(g)
        out.append(rest.pop(best))
    return tuple(out)


@dataclass(frozen=True)
class GraphGroup:
    alphabet: Alphabet
    relation: IndependenceRelation

    def __post_init__(self):
        if len(self.alphabet) != self.relation.size:
            raise AlphabetError("alphabet and independence relation disagree on size")

    @classmethod
    def from_document(cls, doc) -> GraphGroup:
        return cls(*parse_alphabet(doc))

    @classmethod
    def load(cls, path) -> GraphGroup:
        return cls.from_document(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def build(cls, generators, edges=()) -> GraphGroup:
        return cls.from_document({"generators": list(generators), "edges": [list(e) for e in edges]})

    @property
    def rank(self) -> int:
        return len(self.alphabet)

    def index(self, name: str) -> int:
        return self.alphabet.index(name)

    def commute(self, g: int, h: int) -> bool:
        return self.relation.related(g, h)

    @cached_property
    def letters(self) -> tuple[Letter, ...]:
        return tuple((g, s) for g in range(self.rank) for s in (1, -1))

    def parse_word(self, text: str) -> Word:
        """Parse ``"a b^-1 c"``; the empty string is the identity."""
        word = []
        for token in text.split():
            name, sep, exp = token.partition("^")
            if sep and exp not in ("-1", "1"):
                raise WordSyntaxError(f"bad token {token!r}: only name or name^-1 allowed")
            try:
                g = self.alphabet.index(name)
            except AlphabetError as exc:
                raise WordSyntaxError(str(exc)) from None
            word.append((g, -1 if exp == "-1" else 1))
        return tuple(word)

    def format_word(self, word) -> str:
        name = self.alphabet.name
        return " ".join(name(g) if s > 0 else f"{name(g)}^-1" for g, s in word)

    def normal_form(self, word) -> GroupElement:
        return GroupElement(self, lex_canonical(reduce_word(word, self.relation), self.relation))

    def element(self, spec) -> GroupElement:
        if isinstance(spec, GroupElement):
            if spec.group != self:
                raise ValueError("element belongs to a different group")
            return spec
        if isinstance(spec, str):
            spec = self.parse_word(spec)
        return self.normal_form(spec)

    @cached_property
    def identity(self) -> GroupElement:
        return GroupElement(self, ())

    def generator(self, name: str) -> GroupElement:
        return GroupElement(self, ((self.alphabet.index(name), 1),))

    def ball(self, radius: int) -> list[GroupElement]:
        return ball_enumerate(self, radius)

    def to_document(self) -> dict:
        from .alphabet import graph_document

        return graph_document(self.alphabet, self.relation)


@dataclass(frozen=True)
class GroupElement:
    group: GraphGroup
    word: Word

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    def __invert__(self) -> GroupElement:
        return invert(self)

    def __pow__(self, n: int) -> GroupElement:
        base = self if n >= 0 else invert(self)
        out = self.group.identity
        for _ in range(abs(n)):
            out = multiply(out, base)
        return out

    def __len__(self):
        return len(self.word)

    def __str__(self):
        return self.group.format_word(self.word)

    def __repr__(self):
        return f"GroupElement({str(self)!r})"

    def is_identity(self) -> bool:
        return not self.word

    def exponent_vector(self) -> tuple[int, ...]:
        v = [0] * self.group.rank
        for g, s in self.word:
            v[g] += s
        return tuple(v)

    def sort_key(self):
        return word_key(self.word)


def _same_group(u: GroupElement, v: GroupElement):
    if u.group != v.group:
        raise ValueError("elements of different graph groups")


def normal_form(group: GraphGroup, word) -> GroupElement:
    return group.normal_form(word)


def multiply(u: GroupElement, v: GroupElement) -> GroupElement:
    _same_group(u, v)
    if not u.word:
        return v
    if not v.word:
        return u
    return u.group.normal_form(u.word + v.word)


def invert(u: GroupElement) -> GroupElement:
    return u.group.normal_form(inverse_word(u.word))


def commutes(u: GroupElement, v: GroupElement) -> bool:
    return multiply(u, v) == multiply(v, u)


def project_pi(u: GroupElement, a: str) -> int:
    """Exponent sum of generator ``a`` in ``u``."""
    g = u.group.index(a)
    return sum(s for h, s in u.word if h == g)


def check_independent(group: GraphGroup, subset) -> tuple[int, ...]:
    idx = tuple(group.index(x) if isinstance(x, str) else x for x in subset)
    for i, x in enumerate(idx):
        for y in idx[i + 1:]:
            if x == y or group.commute(x, y):
                raise ValueError(
                    f"{group.alphabet.name(x)} and {group.alphabet.name(y)} are not independent; "
                    "the projection to the free group on this subset is not a homomorphism"
                )
    return idx


def project_psi(u: GroupElement, subset) -> Word:
    """Image under the retraction onto the free group on ``subset`` (other generators ↦ 1)."""
    keep = set(check_independent(u.group, subset))
    return free_reduce(x for x in u.word if x[0] in keep)


def ball_enumerate(group: GraphGroup, radius: int) -> list[GroupElement]:
    """All elements of normal-form length ≤ radius, in length-lex order.

    Reduced words are geodesic, so every element of length k+1 is some
    element of length k times one letter.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    found = [group.identity]
    seen = {()}
    level = [group.identity]
    for k in range(radius):
        nxt = []
        for u in level:
            for x in group.letters:
                w = group.normal_form(u.word + (x,))
                if len(w.word) == k + 1 and w.word not in seen:
                    seen.add(w.word)
                    nxt.append(w)
        found.extend(nxt)
        level = nxt
    found.sort(key=GroupElement.sort_key)
    return found

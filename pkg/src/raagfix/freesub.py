"""
Free-group machinery: Stallings foldings and reduction automata.

Letters are ``(label, sign)`` pairs where ``label`` names a free generator.
An automaton carries the ordered tuple of labels it works over; that order,
with ``+1`` before ``-1``, is the letter order used for enumeration.

An automaton accepts words over the symmetrised alphabet.  ``benois_closure``
turns an automaton for X into one accepting exactly the reduced forms of
words in X, which is what makes rational subsets of a free group closed under
the boolean operations (complement taken inside the reduced words).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product

FreeLetter = tuple[str, int]


def parse_free_word(text: str) -> tuple[FreeLetter, ...]:
    out = []
    for token in text.split():
        name, sep, exp = token.partition("^")
        if sep and exp not in ("1", "-1"):
            raise ValueError(f"bad token {token!r}")
        out.append((name, -1 if exp == "-1" else 1))
    return tuple(out)


def format_free_word(word) -> str:
    return " ".join(n if s > 0 else f"{n}^-1" for n, s in word)


def free_reduce(word) -> tuple[FreeLetter, ...]:
    out: list[FreeLetter] = []
    for n, s in word:
        if out and out[-1] == (n, -s):
            out.pop()
        else:
            out.append((n, s))
    return tuple(out)


def inverse(word) -> tuple[FreeLetter, ...]:
    return tuple((n, -s) for n, s in reversed(word))


def is_reduced(word) -> bool:
    return all(word[i] != (word[i + 1][0], -word[i + 1][1]) for i in range(len(word) - 1))


def _labels_of(words) -> tuple[str, ...]:
    return tuple(sorted({n for w in words for n, _ in w}))


def _letter_order(labels):
    pos = {n: i for i, n in enumerate(labels)}
    return lambda x: (pos[x[0]], 0 if x[1] > 0 else 1)


class FoldedGraph:
    """Stallings graph of a finitely generated subgroup of a free group.

    States are ``0..num_states-1`` with base ``0``.  ``edges`` holds
    positively labelled edges ``(p, label, q)``; an edge is read backwards
    with the inverse letter.  States are numbered in breadth-first order from
    the base, exploring letters in label order, so two foldings of the same
    subgroup over the same labels are equal as objects.
    """

    def __init__(self, num_states, edges, generators, labels):
        self.num_states = num_states
        self.edges = frozenset(edges)
        self.generators = tuple(generators)
        self.labels = tuple(labels)
        self._out: dict[tuple[int, FreeLetter], int] = {}
        for p, n, q in self.edges:
            self._out[(p, (n, 1))] = q
            self._out[(q, (n, -1))] = p

    base = 0

    def step(self, state: int, letter: FreeLetter):
        return self._out.get((state, letter))

    def read(self, word, state: int = 0):
        for x in word:
            state = self.step(state, x)
            if state is None:
                return None
        return state

    def member(self, word) -> bool:
        return member(self, word)

    @property
    def signature(self):
        return (self.num_states, tuple(sorted(self.edges)))

    def __eq__(self, other):
        return isinstance(other, FoldedGraph) and self.signature == other.signature

    def __hash__(self):
        return hash(self.signature)

    def to_dot(self) -> str:
        lines = ["digraph folded {", "  rankdir=LR;", '  0 [shape=doublecircle];']
        for p, n, q in sorted(self.edges):
            lines.append(f'  {p} -> {q} [label="{n}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def fold(generators, labels=None) -> FoldedGraph:
    """Fold the flower graph of ``generators`` into its Stallings core graph."""
    gens = [free_reduce(w) for w in generators]
    if labels is None:
        labels = _labels_of(gens)
    labels = tuple(labels)
    missing = set(_labels_of(gens)) - set(labels)
    if missing:
        raise ValueError(f"generators use labels outside {labels}: {sorted(missing)}")

    # flower graph
    edges: list[tuple[int, str, int]] = []
    count = 1
    for w in gens:
        if not w:
            continue
        path = [0] + list(range(count, count + len(w) - 1)) + [0]
        count += len(w) - 1
        for (n, s), p, q in zip(w, path, path[1:]):
            edges.append((p, n, q) if s > 0 else (q, n, p))

    parent = list(range(count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        x, y = find(x), find(y)
        if x != y:
            # keep the base as a representative
            if y == 0:
                x, y = y, x
            parent[y] = x

    changed = True
    while changed:
        changed = False
        table: dict[tuple[int, FreeLetter], int] = {}
        for p, n, q in edges:
            p, q = find(p), find(q)
            for key, target in (((p, (n, 1)), q), ((q, (n, -1)), p)):
                old = table.get(key)
                if old is None:
                    table[key] = target
                elif find(old) != find(target):
                    union(old, target)
                    changed = True

    folded = {(find(p), n, find(q)) for p, n, q in edges}

    # prune hanging trees, never the base
    while True:
        degree: dict[int, int] = {}
        for p, _, q in folded:
            degree[p] = degree.get(p, 0) + 1
            degree[q] = degree.get(q, 0) + 1
        leaves = {v for v, d in degree.items() if d == 1 and v != 0}
        if not leaves:
            break
        folded = {e for e in folded if e[0] not in leaves and e[2] not in leaves}

    # canonical renumbering
    order = _letter_order(labels)
    out: dict[int, list[tuple[FreeLetter, int]]] = {}
    for p, n, q in folded:
        out.setdefault(p, []).append(((n, 1), q))
        out.setdefault(q, []).append(((n, -1), p))
    number = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for _, w in sorted(out.get(v, []), key=lambda t: order(t[0])):
            if w not in number:
                number[w] = len(number)
                queue.append(w)
    renamed = {(number[p], n, number[q]) for p, n, q in folded}
    return FoldedGraph(len(number), renamed, gens, labels)


def member(graph: FoldedGraph, word) -> bool:
    """Does the subgroup contain ``word``?  Exact: follow it from the base."""
    return graph.read(free_reduce(word)) == 0


@dataclass(frozen=True)
class Automaton:
    """Nondeterministic automaton over the symmetrised alphabet.

    Transitions are ``(p, letter, q)`` with ``letter`` either a free letter
    or ``None`` for an ε-move.
    """

    labels: tuple[str, ...]
    num_states: int
    transitions: frozenset
    initial: frozenset
    final: frozenset

    def __post_init__(self):
        for name in ("transitions", "initial", "final"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "labels", tuple(self.labels))
        known = set(self.labels)
        for p, x, q in self.transitions:
            if not (0 <= p < self.num_states and 0 <= q < self.num_states):
                raise ValueError(f"transition {(p, x, q)} leaves the state range")
            if x is not None and (x[0] not in known or x[1] not in (1, -1)):
                raise ValueError(f"bad letter {x!r}")

    @cached_property
    def letters(self) -> tuple[FreeLetter, ...]:
        return tuple((n, s) for n in self.labels for s in (1, -1))

    @cached_property
    def _moves(self) -> dict:
        moves: dict = {}
        for p, x, q in self.transitions:
            moves.setdefault((p, x), set()).add(q)
        return moves

    @cached_property
    def _eps(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(self._closure_of({p})) for p in range(self.num_states))

    def _closure_of(self, states) -> set[int]:
        todo = list(states)
        seen = set(states)
        while todo:
            p = todo.pop()
            for q in self._moves.get((p, None), ()):
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return seen

    def closure(self, states) -> frozenset:
        out: set[int] = set()
        for p in states:
            out |= self._eps[p]
        return frozenset(out)

    def step(self, states, letter) -> frozenset:
        nxt: set[int] = set()
        for p in states:
            nxt |= self._moves.get((p, letter), set())
        return self.closure(nxt)

    def start(self) -> frozenset:
        return self.closure(self.initial)

    def accepts(self, word) -> bool:
        states = self.start()
        for x in word:
            states = self.step(states, x)
            if not states:
                return False
        return bool(states & self.final)

    def remove_epsilon(self) -> Automaton:
        trans = set()
        for p in range(self.num_states):
            for r in self._eps[p]:
                for x in self.letters:
                    for q in self._moves.get((r, x), ()):
                        trans.add((p, x, q))
        final = {p for p in range(self.num_states) if self._eps[p] & self.final}
        return Automaton(self.labels, self.num_states, trans, self.initial, final).trim()

    def trim(self) -> Automaton:
        """Keep only states that are reachable and co-reachable; renumber."""
        fwd: dict[int, set[int]] = {}
        bwd: dict[int, set[int]] = {}
        for p, _, q in self.transitions:
            fwd.setdefault(p, set()).add(q)
            bwd.setdefault(q, set()).add(p)

        def reach(start, adj):
            seen = set(start)
            todo = list(start)
            while todo:
                p = todo.pop()
                for q in adj.get(p, ()):
                    if q not in seen:
                        seen.add(q)
                        todo.append(q)
            return seen

        useful = reach(self.initial, fwd) & reach(self.final, bwd)
        if not useful:
            return Automaton(self.labels, 1, (), {0}, ())
        number = {p: i for i, p in enumerate(sorted(useful))}
        return Automaton(
            self.labels,
            len(number),
            {(number[p], x, number[q]) for p, x, q in self.transitions if p in useful and q in useful},
            {number[p] for p in self.initial if p in useful},
            {number[p] for p in self.final if p in useful},
        )

    def determinize(self) -> Automaton:
        """Complete deterministic automaton by subset construction (ε-free, no ε-moves)."""
        start = self.start()
        index = {start: 0}
        queue = deque([start])
        trans = set()
        while queue:
            s = queue.popleft()
            for x in self.letters:
                t = self.step(s, x)
                if t not in index:
                    index[t] = len(index)
                    queue.append(t)
                trans.add((index[s], x, index[t]))
        final = {i for s, i in index.items() if s & self.final}
        return Automaton(self.labels, len(index), trans, {0}, final)

    def is_empty(self) -> bool:
        return not self.trim().final

    def to_dot(self) -> str:
        lines = ["digraph automaton {", "  rankdir=LR;"]
        for p in range(self.num_states):
            shape = "doublecircle" if p in self.final else "circle"
            extra = ", style=bold" if p in self.initial else ""
            lines.append(f"  {p} [shape={shape}{extra}];")
        for p, x, q in sorted(self.transitions, key=lambda t: (t[0], t[2], str(t[1]))):
            label = "ε" if x is None else format_free_word([x])
            lines.append(f'  {p} -> {q} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


ReductionAutomaton = Automaton


def word_automaton(labels, words) -> Automaton:
    """Automaton accepting exactly the finite set ``words`` (as given, unreduced)."""
    trans = set()
    final = set()
    count = 1
    for w in words:
        state = 0
        for x in w:
            trans.add((state, x, count))
            state = count
            count += 1
        final.add(state)
    return Automaton(tuple(labels), count, trans, {0}, final)


def reduced_words_automaton(labels) -> Automaton:
    """R_A: state 0 is the start, state ``1 + k`` remembers the last letter ``k``."""
    labels = tuple(labels)
    letters = [(n, s) for n in labels for s in (1, -1)]
    pos = {x: i + 1 for i, x in enumerate(letters)}
    trans = set()
    for src in [0] + list(pos.values()):
        last = letters[src - 1] if src else None
        for x in letters:
            if last is not None and x == (last[0], -last[1]):
                continue
            trans.add((src, x, pos[x]))
    n = len(letters) + 1
    return Automaton(labels, n, trans, {0}, set(range(n)))


def stars_automaton(labels, sequence) -> Automaton:
    """Accepts ``x1* x2* ... xk*`` for the given letters in order."""
    sequence = list(sequence)
    trans = set()
    for src in range(len(sequence) + 1):
        for j in range(max(src - 1, 0), len(sequence)):
            trans.add((src, sequence[j], j + 1))
    return Automaton(tuple(labels), len(sequence) + 1, trans, {0}, set(range(len(sequence) + 1)))


def benois_closure(aut: Automaton) -> Automaton:
    """Automaton accepting exactly the free reductions of the words ``aut`` accepts.

    Saturation: whenever ``p -x-> q``, ``q`` ε-reaches ``r`` and ``r -x⁻¹-> s``,
    add an ε-move ``p -> s``; repeat to a fixpoint, then intersect with the
    reduced words.
    """
    trans = set(aut.transitions)
    while True:
        current = Automaton(aut.labels, aut.num_states, trans, aut.initial, aut.final)
        new = set()
        for p, x, q in trans:
            if x is None:
                continue
            inv = (x[0], -x[1])
            for r in current._eps[q]:
                for s in current._moves.get((r, inv), ()):
                    if (p, None, s) not in trans:
                        new.add((p, None, s))
        if not new:
            break
        trans |= new
    return intersection(current, reduced_words_automaton(aut.labels))


def _check_labels(x: Automaton, y: Automaton):
    if x.labels != y.labels:
        raise ValueError(f"automata over different alphabets: {x.labels} vs {y.labels}")


def union(x: Automaton, y: Automaton) -> Automaton:
    _check_labels(x, y)
    k = x.num_states
    return Automaton(
        x.labels,
        k + y.num_states,
        set(x.transitions) | {(p + k, a, q + k) for p, a, q in y.transitions},
        set(x.initial) | {p + k for p in y.initial},
        set(x.final) | {p + k for p in y.final},
    )


def intersection(x: Automaton, y: Automaton) -> Automaton:
    _check_labels(x, y)
    x, y = x.remove_epsilon(), y.remove_epsilon()
    starts = [(p, q) for p, q in product(sorted(x.initial), sorted(y.initial))]
    index = {s: i for i, s in enumerate(starts)}
    queue = deque(starts)
    trans = set()
    while queue:
        p, q = queue.popleft()
        for a in x.letters:
            for p2 in x._moves.get((p, a), ()):
                for q2 in y._moves.get((q, a), ()):
                    if (p2, q2) not in index:
                        index[(p2, q2)] = len(index)
                        queue.append((p2, q2))
                    trans.add((index[(p, q)], a, index[(p2, q2)]))
    final = {i for (p, q), i in index.items() if p in x.final and q in y.final}
    return Automaton(x.labels, max(len(index), 1), trans, set(range(len(starts))), final).trim()


def complement(x: Automaton) -> Automaton:
    """Reduced words not accepted by ``x``."""
    d = x.determinize()
    flipped = Automaton(d.labels, d.num_states, d.transitions, d.initial, set(range(d.num_states)) - d.final)
    return intersection(flipped, reduced_words_automaton(x.labels))


def boolean_ops(x: Automaton, y: Automaton) -> dict[str, Automaton]:
    return {"union": union(x, y), "intersection": intersection(x, y), "complement": complement(x)}


def flower_automaton(generators, labels) -> Automaton:
    """One petal per generator and one per inverse, all through state 0."""
    trans = set()
    count = 1
    for w in generators:
        for petal in (tuple(w), inverse(w)):
            if not petal:
                continue
            path = [0] + list(range(count, count + len(petal) - 1)) + [0]
            count += len(petal) - 1
            for x, p, q in zip(petal, path, path[1:]):
                trans.add((p, x, q))
    return Automaton(tuple(labels), count, trans, {0}, {0})


def subgroup_language(graph: FoldedGraph) -> Automaton:
    """Reduced words of the subgroup, built from the generators (not the folding)."""
    return benois_closure(flower_automaton(graph.generators, graph.labels))


def enumerate_accepted(aut: Automaton, max_len: int) -> list[tuple[FreeLetter, ...]]:
    """Accepted words of length ≤ max_len in length-lex order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    order = _letter_order(aut.labels)
    letters = sorted(aut.letters, key=order)
    out = []
    frontier = [((), aut.start())]
    for length in range(max_len + 1):
        nxt = []
        for word, states in frontier:
            if states & aut.final:
                out.append(word)
            if length < max_len:
                for x in letters:
                    t = aut.step(states, x)
                    if t:
                        nxt.append((word + (x,), t))
        frontier = nxt
    return out

"""Brute-force reference computations, kept independent of the library code paths."""

from collections import deque
from itertools import product

from raagfix.freesub import Automaton


def letter_key(x):
    return (x[0], 0 if x[1] > 0 else 1)


def commutation_class(word, commute):
    """Every word reachable from ``word`` by swapping adjacent commuting letters."""
    word = tuple(word)
    seen = {word}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            if commute(w[i][0], w[i + 1][0]):
                v = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    return seen


def congruence_closure(word, commute):
    """Words reachable by adjacent commuting swaps and adjacent x x^-1 deletions."""
    word = tuple(word)
    seen = {word}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a[0] == b[0] and a[1] == -b[1]:
                v = w[:i] + w[i + 2:]
            elif commute(a[0], b[0]):
                v = w[:i] + (b, a) + w[i + 2:]
            else:
                continue
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def oracle_normal_form(word, commute):
    """Lex-least among the shortest words in the closure."""
    closure = congruence_closure(word, commute)
    m = min(len(w) for w in closure)
    return min((w for w in closure if len(w) == m), key=lambda w: [letter_key(x) for x in w])


def all_words(letters, max_len):
    for n in range(max_len + 1):
        yield from product(letters, repeat=n)


def kernel_box(m, bound):
    """Integer row vectors u in [-bound, bound]^n with u M = u."""
    n = len(m)
    out = []
    for u in product(range(-bound, bound + 1), repeat=n):
        if all(sum(u[i] * m[i][j] for i in range(n)) == u[j] for j in range(n)):
            out.append(u)
    return out


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == (x[0], -x[1]):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(word):
    return tuple((n, -s) for n, s in reversed(word))


def subgroup_products(generators, max_factors):
    """Reduced forms of all products of at most ``max_factors`` generators and inverses."""
    factors = [tuple(g) for g in generators] + [inverse(g) for g in generators]
    out = {()}
    level = {()}
    for _ in range(max_factors):
        level = {free_reduce(w + f) for w in level for f in factors}
        out |= level
    return out


def nfa_words(initial, final, trans, max_len, letters):
    """Accepted words of length ≤ max_len for an ε-free NFA ``trans: (p, x) -> set``."""
    out = []
    stack = [((), frozenset(initial))]
    while stack:
        w, states = stack.pop()
        if states & final:
            out.append(w)
        if len(w) < max_len:
            for x in letters:
                nxt = frozenset(q for p in states for q in trans.get((p, x), ()))
                if nxt:
                    stack.append((w + (x,), nxt))
    return out


def reductions_of_accepted(initial, final, trans, max_input, max_output, letters):
    """Reduced forms (length ≤ max_output) of accepted words of length ≤ max_input.

    Tracks (state, reduced prefix) pairs; a prefix longer than what the
    remaining letters could cancel down to ``max_output`` is dropped.
    """
    current = {(p, ()) for p in initial}
    result = {r for p, r in current if p in final}
    for k in range(1, max_input + 1):
        nxt = set()
        budget = max_output + (max_input - k)
        for p, r in current:
            for x in letters:
                for q in trans.get((p, x), ()):
                    if r and r[-1] == (x[0], -x[1]):
                        r2 = r[:-1]
                    else:
                        r2 = r + (x,)
                    if len(r2) <= budget:
                        nxt.add((q, r2))
        current = nxt
        result |= {r for p, r in current if p in final and len(r) <= max_output}
    return result


def cancelling_paths(num_states, trans):
    """Shortest word w with p -w-> q and free_reduce(w) = () for every such pair.

    ``trans`` maps (p, x) to a set of states.  Computed by relaxation
    until no pair gets a shorter word.
    """
    best = {(p, p): () for p in range(num_states)}
    changed = True
    while changed:
        changed = False
        cands = []
        for (p, x), targets in trans.items():
            inv = (x[0], -x[1])
            for p2 in targets:
                for (r, q2), w in list(best.items()):
                    if r != p2:
                        continue
                    for q in trans.get((q2, inv), ()):
                        cands.append(((p, q), (x,) + w + (inv,)))
        for (p, r), w1 in list(best.items()):
            for (r2, q), w2 in list(best.items()):
                if r == r2:
                    cands.append(((p, q), w1 + w2))
        for key, w in cands:
            if key not in best or len(w) < len(best[key]):
                best[key] = w
                changed = True
    return best


def shortest_preimage(initial, final, trans, num_states, target):
    """Shortest accepted word whose free reduction is ``target``, or None."""
    import heapq

    cancel = cancelling_paths(num_states, trans)
    dist = {}
    heap = [(0, p, 0, ()) for p in sorted(initial)]
    while heap:
        d, p, i, w = heapq.heappop(heap)
        if (p, i) in dist:
            continue
        dist[(p, i)] = w
        if i == len(target) and p in final:
            return w
        for (r, q), c in cancel.items():
            if r == p and c and (q, i) not in dist:
                heapq.heappush(heap, (d + len(c), q, i, w + c))
        if i < len(target):
            for q in trans.get((p, target[i]), ()):
                heapq.heappush(heap, (d + 1, q, i + 1, w + (target[i],)))
    return None


def random_nfa(rng, labels=("a", "c")):
    """ε-free NFA with 1 to 5 states and at most 3n transitions."""
    n = rng.randint(1, 5)
    letters = [(x, s) for x in labels for s in (1, -1)]
    trans = set()
    for _ in range(rng.randint(1, 3 * n)):
        trans.add((rng.randrange(n), rng.choice(letters), rng.randrange(n)))
    initial = {rng.randrange(n)}
    final = set(rng.sample(range(n), rng.randint(1, n)))
    return Automaton(tuple(labels), n, trans, initial, final)


def as_table(aut):
    table = {}
    for p, x, q in aut.transitions:
        table.setdefault((p, x), set()).add(q)
    return table

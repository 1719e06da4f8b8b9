"""Weyl group elements, Coxeter elements, and sorting-word combinatorics.

Elements act on weight coordinates (the stored matrix) and, in parallel, on
root coordinates; matrix equality is the canonical notion of element identity.
Coxeter elements are identified by their acyclic orientation of the diagram.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .cartan import CartanDatum, generate_roots
from .linalg import identity_mat, int_mat_inv, mat_mul, mat_vec


class WeylError(ValueError):
    pass


@dataclass(frozen=True)
class WeylElement:
    datum: CartanDatum
    mw: tuple                                   # action on weight coordinates
    mr: tuple = field(compare=False, repr=False)  # same action on root coordinates

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.datum, mat_mul(self.mw, other.mw), mat_mul(self.mr, other.mr))

    def inverse(self) -> "WeylElement":
        return WeylElement(self.datum, int_mat_inv(self.mw), int_mat_inv(self.mr))

    def apply_weight(self, coords: tuple) -> tuple:
        return mat_vec(self.mw, coords)

    def apply_root(self, coords: tuple) -> tuple:
        return mat_vec(self.mr, coords)

    def is_identity(self) -> bool:
        return self.mw == identity_mat(self.datum.n)

    def length(self) -> int:
        """Number of positive roots sent to negative roots."""
        roots = generate_roots(self.datum).positive_roots
        return sum(1 for r in roots if _is_neg(self.apply_root(r)))


def _is_neg(coords: tuple) -> bool:
    return all(x <= 0 for x in coords) and any(x < 0 for x in coords)


@lru_cache(maxsize=None)
def identity_element(datum: CartanDatum) -> WeylElement:
    e = identity_mat(datum.n)
    return WeylElement(datum, e, e)


@lru_cache(maxsize=None)
def simple_reflection(datum: CartanDatum, i: int) -> WeylElement:
    n = datum.n
    mw = tuple(
        tuple((1 if k == j else 0) - (datum.cartan[k][i] if j == i else 0) for j in range(n))
        for k in range(n)
    )
    mr = tuple(
        tuple((1 if k == j else 0) - (datum.cartan[i][j] if k == i else 0) for j in range(n))
        for k in range(n)
    )
    return WeylElement(datum, mw, mr)


def word_to_element(datum: CartanDatum, letters) -> WeylElement:
    out = identity_element(datum)
    for i in letters:
        out = out * simple_reflection(datum, i)
    return out


@dataclass(frozen=True)
class Word:
    """A word in the simple reflections, considered up to commutations."""

    letters: tuple

    def __len__(self):
        return len(self.letters)

    def element(self, datum: CartanDatum) -> WeylElement:
        return word_to_element(datum, self.letters)

    def is_reduced(self, datum: CartanDatum) -> bool:
        return self.element(datum).length() == len(self.letters)

    def render(self) -> str:
        return "".join(f"s{i + 1}" for i in self.letters) if self.letters else "e"


def commutation_class(datum: CartanDatum, letters: tuple, limit: int = 200000) -> set:
    """All words reachable by swapping adjacent commuting letters."""
    seen = {tuple(letters)}
    frontier = [tuple(letters)]
    while frontier:
        nxt = []
        for w in frontier:
            for k in range(len(w) - 1):
                a, b = w[k], w[k + 1]
                if a != b and datum.cartan[a][b] == 0:
                    w2 = w[:k] + (b, a) + w[k + 2:]
                    if w2 not in seen:
                        seen.add(w2)
                        nxt.append(w2)
        frontier = nxt
        if len(seen) > limit:
            raise WeylError("commutation class too large")
    return seen


@lru_cache(maxsize=None)
def longest_element(datum: CartanDatum) -> WeylElement:
    return word_to_element(datum, longest_word(datum))


@lru_cache(maxsize=None)
def longest_word(datum: CartanDatum) -> tuple:
    """A reduced word for w0 via the descent walk from the dominant vector."""
    n = datum.n
    v = tuple(1 for _ in range(n))
    picks = []
    from .cartan import reflect_weight

    while any(x > 0 for x in v):
        i = next(k for k in range(n) if v[k] > 0)
        v = reflect_weight(datum, i, v)
        picks.append(i)
    word = tuple(reversed(picks))
    if len(word) != generate_roots(datum).size:
        raise WeylError("longest-element walk produced a non-reduced word")
    return word


@lru_cache(maxsize=None)
def node_involution(datum: CartanDatum) -> tuple:
    """i* with w0 * omega_i = -omega_{i*}."""
    w0 = longest_element(datum)
    n = datum.n
    out = []
    for i in range(n):
        col = tuple(-w0.mw[k][i] for k in range(n))
        if sum(col) != 1 or any(x not in (0, 1) for x in col):
            raise WeylError("w0 column is not minus a fundamental weight")
        out.append(col.index(1))
    return tuple(out)


# --- Coxeter elements ----------------------------------------------------------------

@dataclass(frozen=True)
class CoxeterElement:
    datum: CartanDatum
    orientation: frozenset                       # (i, j) meaning s_i precedes s_j, per edge
    order: tuple = field(compare=False)          # one reduced expression
    h_values: tuple = field(compare=False, repr=False)
    wel: WeylElement = field(compare=False, repr=False)

    @property
    def n(self):
        return self.datum.n

    def precedes(self, i: int, j: int) -> bool:
        """i << j: defined for nodes joined by an edge."""
        return (i, j) in self.orientation

    def initial_nodes(self) -> tuple:
        return tuple(
            i for i in range(self.n)
            if all((i, j) in self.orientation for j in self.datum.neighbors(i))
        )

    def final_nodes(self) -> tuple:
        return tuple(
            i for i in range(self.n)
            if all((j, i) in self.orientation for j in self.datum.neighbors(i))
        )

    def inverse(self) -> "CoxeterElement":
        return coxeter_from_order(self.datum, tuple(reversed(self.order)))

    def h(self, i: int) -> int:
        return self.h_values[i]

    def max_h(self) -> int:
        return max(self.h_values)

    def render(self) -> str:
        return Word(self.order).render()


def coxeter_from_order(datum: CartanDatum, order) -> CoxeterElement:
    order = tuple(order)
    if sorted(order) != list(range(datum.n)):
        raise WeylError(f"{order} is not a permutation of the nodes")
    pos = {i: k for k, i in enumerate(order)}
    orientation = frozenset(
        (i, j) if pos[i] < pos[j] else (j, i) for (i, j) in datum.edges
    )
    wel = word_to_element(datum, order)
    h_values = _h_values(datum, wel)
    c = CoxeterElement(datum, orientation, order, h_values, wel)
    if sum(h_values) != generate_roots(datum).size:
        raise WeylError("h-values do not sum to the number of positive roots")
    return c


def _h_values(datum: CartanDatum, c: WeylElement) -> tuple:
    istar = node_involution(datum)
    roots = generate_roots(datum)
    bound = max(roots.coxeter_numbers) + 2
    n = datum.n
    out = []
    for i in range(n):
        target = tuple(-1 if k == istar[i] else 0 for k in range(n))
        lam = tuple(1 if k == i else 0 for k in range(n))
        for m in range(1, bound + 1):
            lam = c.apply_weight(lam)
            if lam == target:
                out.append(m)
                break
        else:
            raise WeylError("c^m * omega_i never reached -omega_{i*}")
    return tuple(out)


def coxeter_from_orientation(datum: CartanDatum, orientation: frozenset) -> CoxeterElement:
    """Lex-least topological order realizing the given edge orientation."""
    n = datum.n
    preds = {i: set() for i in range(n)}
    for (i, j) in orientation:
        preds[j].add(i)
    order = []
    remaining = set(range(n))
    while remaining:
        i = min(k for k in remaining if not (preds[k] & remaining))
        order.append(i)
        remaining.discard(i)
    c = coxeter_from_order(datum, tuple(order))
    if c.orientation != frozenset(orientation):
        raise WeylError("orientation is not acyclic")
    return c


def all_coxeter_elements(datum: CartanDatum) -> list:
    """Every Coxeter element, i.e. every orientation of the (forest) diagram."""
    edges = datum.edges
    out = []
    for mask in range(1 << len(edges)):
        orient = frozenset(
            (i, j) if not (mask >> k) & 1 else (j, i) for k, (i, j) in enumerate(edges)
        )
        out.append(coxeter_from_orientation(datum, orient))
    out.sort(key=lambda c: c.order)
    return out


@lru_cache(maxsize=None)
def bipartition(datum: CartanDatum) -> tuple:
    """Two-coloring (I_plus, I_minus); the smallest node of each component sits in I_plus."""
    n = datum.n
    color = [None] * n
    for comp in datum.components:
        color[comp[0]] = 1
        stack = [comp[0]]
        while stack:
            i = stack.pop()
            for j in datum.neighbors(i):
                if color[j] is None:
                    color[j] = -color[i]
                    stack.append(j)
                elif color[j] == color[i]:
                    raise WeylError("diagram is not bipartite")
    plus = tuple(i for i in range(n) if color[i] == 1)
    minus = tuple(i for i in range(n) if color[i] == -1)
    return plus, minus


def bipartite_coxeter(datum: CartanDatum, sign: int = 1) -> CoxeterElement:
    """t_plus * t_minus for sign=+1, t_minus * t_plus for sign=-1."""
    plus, minus = bipartition(datum)
    order = plus + minus if sign >= 0 else minus + plus
    return coxeter_from_order(datum, order)


def elementary_move(c: CoxeterElement, i: int) -> CoxeterElement:
    """Conjugate by s_i, allowed only when s_i is initial or final in c."""
    if i in c.initial_nodes():
        order = tuple(k for k in c.order if k != i) + (i,)
    elif i in c.final_nodes():
        order = (i,) + tuple(k for k in c.order if k != i)
    else:
        raise WeylError(f"s{i + 1} is neither initial nor final")
    return coxeter_from_order(c.datum, order)


def connect_coxeter(c: CoxeterElement, target: CoxeterElement, avoid=()) -> Word:
    """Elementary-move word w with w*c*w^{-1} = target, avoiding the given nodes.

    The word records moves right-to-left: the first move applied is the last
    letter.  Raises when the target is unreachable under the avoid set.
    """
    if c.datum != target.datum:
        raise WeylError("Coxeter elements live on different data")
    avoid = frozenset([avoid]) if isinstance(avoid, int) else frozenset(avoid)
    start = c.orientation
    goal = target.orientation
    prev = {start: None}
    frontier = [start]
    while frontier and goal not in prev:
        nxt = []
        for o in frontier:
            cur = coxeter_from_orientation(c.datum, o)
            for i in set(cur.initial_nodes()) | set(cur.final_nodes()):
                if i in avoid:
                    continue
                o2 = elementary_move(cur, i).orientation
                if o2 not in prev:
                    prev[o2] = (o, i)
                    nxt.append(o2)
        frontier = nxt
    if goal not in prev:
        raise WeylError("target not reachable under the avoid constraint")
    moves = []
    node = goal
    while prev[node] is not None:
        node, i = prev[node]
        moves.append(i)
    moves.reverse()                      # temporal order
    return Word(tuple(reversed(moves)))  # conjugation word: last move leftmost


def bipartite_via_leaf(c: CoxeterElement, leaf: int) -> tuple:
    """(t, word) with t bipartite, w*t*w^{-1} = c, and w avoiding leaf and its neighbor.

    The bipartite element is the one in which the leaf and its unique neighbor
    appear in the same order as they do in c.
    """
    nbrs = c.datum.neighbors(leaf)
    if len(nbrs) != 1:
        raise WeylError(f"node {leaf} is not a leaf")
    mate = nbrs[0]
    for sign in (1, -1):
        t = bipartite_coxeter(c.datum, sign)
        if ((leaf, mate) in t.orientation) == ((leaf, mate) in c.orientation):
            word = connect_coxeter(t, c, avoid=(leaf, mate))
            return t, word
    raise WeylError("no bipartite element matches the leaf order")


# --- sorting words -------------------------------------------------------------------

def c_sorting_word(c: CoxeterElement, w: WeylElement):
    """Lexicographically first subword of c^infinity realizing w.

    Returns (Word, factorization) where the factorization is the tuple of
    letter sets taken from the successive copies of c.
    """
    datum = c.datum
    v = w
    v_inv = w.inverse()
    letters = []
    blocks = []
    guard = w.length() + 1
    while not v.is_identity():
        block = []
        for i in c.order:
            # s_i is a left descent of v exactly when v^{-1} alpha_i < 0.
            img = v_inv.apply_root(tuple(1 if k == i else 0 for k in range(datum.n)))
            if _is_neg(img):
                s = simple_reflection(datum, i)
                v = s * v
                v_inv = v_inv * s
                block.append(i)
                letters.append(i)
        if not block:
            raise WeylError("sorting extraction stalled")
        blocks.append(frozenset(block))
        guard -= 1
        if guard < 0:
            raise WeylError("sorting extraction exceeded the length bound")
    return Word(tuple(letters)), tuple(blocks)


def is_sortable(c: CoxeterElement, w: WeylElement) -> bool:
    _, blocks = c_sorting_word(c, w)
    return all(blocks[k + 1] <= blocks[k] for k in range(len(blocks) - 1))


def is_antisortable(c: CoxeterElement, w: WeylElement) -> bool:
    w0 = longest_element(c.datum)
    return is_sortable(c.inverse(), w * w0)


def greedy_expression(c: CoxeterElement) -> Word:
    """Reorder c's expression by weakly decreasing h(i;c); ties keep input order."""
    letters = tuple(sorted(c.order, key=lambda i: -c.h_values[i]))
    # Sorting only ever swaps letters with distinct h, and adjacent diagram
    # nodes i << j force h(i) >= h(j), so every swap is between commuting letters.
    if coxeter_from_order(c.datum, letters) != c:
        raise WeylError("greedy reordering left the commutation class")
    return Word(letters)


def w_m_word(c: CoxeterElement, m: int):
    """Subword of c^m keeping, in the l-th copy, the letters with h(i;c) >= l."""
    if not 0 <= m <= c.max_h():
        raise WeylError(f"m={m} out of range 0..{c.max_h()}")
    greedy = greedy_expression(c).letters
    letters = []
    blocks = []
    for level in range(1, m + 1):
        block = tuple(i for i in greedy if c.h_values[i] >= level)
        letters.extend(block)
        blocks.append(frozenset(block))
    return Word(tuple(letters)), tuple(blocks)


def sorting_word_of_w0(c: CoxeterElement):
    word, blocks = w_m_word(c, c.max_h())
    return word, blocks


def singletons(c: CoxeterElement) -> list:
    """Elements arising as prefixes, up to commutations, of the c-sorting word of w0.

    Prefixes up to commutations are exactly the downsets of the dependence
    order on letter positions (p before q and the letters equal or adjacent).
    """
    datum = c.datum
    word = sorting_word_of_w0(c)[0].letters
    L = len(word)
    preds = [tuple(
        p for p in range(q)
        if word[p] == word[q] or datum.cartan[word[p]][word[q]] != 0
    ) for q in range(L)]
    ident = identity_element(datum)
    start = frozenset()
    elems = {start: ident}
    frontier = [start]
    found = {ident.mw: ident}
    while frontier:
        nxt = []
        for s in frontier:
            base = elems[s]
            for q in range(L):
                if q in s or any(p not in s for p in preds[q]):
                    continue
                s2 = s | {q}
                if s2 in elems:
                    continue
                el = base * simple_reflection(datum, word[q])
                elems[s2] = el
                found.setdefault(el.mw, el)
                nxt.append(s2)
        frontier = nxt
    out = sorted(found.values(), key=lambda e: (e.length(), e.mw))
    for el in out:
        if not (is_sortable(c, el) and is_antisortable(c, el)):
            raise WeylError("prefix element failed the sortable/antisortable check")
    return out


def enumerate_group(datum: CartanDatum, cap: int = 1152) -> list:
    """Breadth-first closure of the Weyl group; refuses to exceed the cap."""
    ident = identity_element(datum)
    seen = {ident.mw: ident}
    frontier = [ident]
    gens = [simple_reflection(datum, i) for i in range(datum.n)]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                ws = w * s
                if ws.mw not in seen:
                    if len(seen) >= cap:
                        raise WeylError(f"group larger than cap {cap}")
                    seen[ws.mw] = ws
                    nxt.append(ws)
        frontier = nxt
    return sorted(seen.values(), key=lambda e: (e.length(), e.mw))

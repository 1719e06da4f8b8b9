"""Seed mutation oracle: coefficient-free clusters, g-vectors, exchange graph.

This side of the build never looks at the label combinatorics; it only mutates
matrices and Laurent polynomials, so it can serve as an independent witness
for the g-vector parametrization and the exchange-relation formula.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cartan import CartanDatum
from .model import ClusterModel
from .weyl import CoxeterElement


class MutationError(ValueError):
    pass


# --- exact Laurent polynomials over Z ---------------------------------------------------

class LaurentPoly:
    """Sparse Laurent polynomial: exponent tuple -> integer coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @staticmethod
    def monomial(exps, coeff=1) -> "LaurentPoly":
        return LaurentPoly({tuple(exps): coeff})

    @staticmethod
    def one(n: int) -> "LaurentPoly":
        return LaurentPoly({(0,) * n: 1})

    @staticmethod
    def const(n: int, c: int) -> "LaurentPoly":
        return LaurentPoly({(0,) * n: c}) if c else LaurentPoly()

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) - c
        return LaurentPoly(out)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    def key(self):
        return tuple(sorted(self.terms.items()))

    def leading(self):
        e = max(self.terms)
        return e, self.terms[e]

    def render(self, names=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                (names[i] if names else f"x{i + 1}") + (f"^{p}" if p != 1 else "")
                for i, p in enumerate(e) if p
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def exact_div(p: LaurentPoly, q: LaurentPoly, max_steps: int = 100000) -> LaurentPoly:
    """p / q when the quotient is again Laurent with integer coefficients.

    Classic leading-term elimination in the lex order; any failure here is a
    Laurent-phenomenon violation, which the callers treat as fatal.
    """
    if not q:
        raise MutationError("division by zero polynomial")
    qe, qc = q.leading()
    rem = LaurentPoly(dict(p.terms))
    quot = {}
    steps = 0
    while rem:
        re, rc = rem.leading()
        if rc % qc:
            raise MutationError("division is not exact over the integers")
        e = tuple(a - b for a, b in zip(re, qe))
        c = rc // qc
        quot[e] = quot.get(e, 0) + c
        rem = rem - LaurentPoly({e: c}) * q
        steps += 1
        if steps > max_steps:
            raise MutationError("division does not terminate; quotient is not Laurent")
    return LaurentPoly(quot)


# --- exchange matrices and seeds ---------------------------------------------------------

@dataclass(frozen=True)
class ExchangeMatrix:
    b: tuple

    @property
    def n(self):
        return len(self.b)


def b_of_coxeter(datum: CartanDatum, c: CoxeterElement) -> ExchangeMatrix:
    """B(c): -a_ij when i precedes j, +a_ij when j precedes i, 0 off the diagram."""
    n = datum.n
    b = [[0] * n for _ in range(n)]
    for (i, j) in datum.edges:
        if c.precedes(i, j):
            b[i][j] = -datum.cartan[i][j]
            b[j][i] = datum.cartan[j][i]
        else:
            b[i][j] = datum.cartan[i][j]
            b[j][i] = -datum.cartan[j][i]
    d = datum.symmetrizer
    for i in range(n):
        for j in range(n):
            if d[i] * b[i][j] != -d[j] * b[j][i]:
                raise MutationError("B(c) is not skew-symmetrizable")
    return ExchangeMatrix(tuple(tuple(row) for row in b))


def _mutate_rect(mat, k, top):
    """Matrix mutation in direction k; rows beyond the square block are coefficient rows."""
    rows = len(mat)
    n = len(mat[0])
    out = [[0] * n for _ in range(rows)]
    for i in range(rows):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -mat[i][j]
            else:
                bik = mat[i][k]
                bkj = top[k][j]
                pos = (bik if bik > 0 else 0) * (bkj if bkj > 0 else 0)
                neg = (-bik if bik < 0 else 0) * (-bkj if bkj < 0 else 0)
                out[i][j] = mat[i][j] + pos - neg
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class Seed:
    bmat: tuple      # current exchange matrix (square)
    cmat: tuple      # principal-coefficient rows (c-vectors as columns)
    gcols: tuple     # g-vector of each cluster variable
    cluster: tuple   # LaurentPoly in the initial variables

    def key(self):
        return tuple(sorted(p.key() for p in self.cluster))


def initial_seed(datum: CartanDatum, c: CoxeterElement) -> Seed:
    n = datum.n
    b = b_of_coxeter(datum, c).b
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    cluster = tuple(LaurentPoly.monomial(tuple(1 if t == i else 0 for t in range(n))) for i in range(n))
    return Seed(bmat=b, cmat=ident, gcols=tuple(tuple(1 if t == i else 0 for t in range(n)) for i in range(n)),
                cluster=cluster)


def mutate(seed: Seed, k: int, b0: tuple) -> Seed:
    """Standard seed mutation at k, with the g-vector recurrence driven by c-vectors.

    Homogeneity under the principal grading gives
      g'_k = sum_i [b_ik]+ g_i - sum_j [c_jk]+ b0_j - g_k
    with b0_j the j-th column of the initial exchange matrix.
    """
    n = len(seed.bmat)
    b, cm, g = seed.bmat, seed.cmat, seed.gcols
    num_plus = LaurentPoly.one(n)
    num_minus = LaurentPoly.one(n)
    for i in range(n):
        bik = b[i][k]
        if bik > 0:
            num_plus = num_plus * _power(seed.cluster[i], bik, n)
        elif bik < 0:
            num_minus = num_minus * _power(seed.cluster[i], -bik, n)
    new_var = exact_div(num_plus + num_minus, seed.cluster[k])

    gk = [0] * n
    for i in range(n):
        if b[i][k] > 0:
            for t in range(n):
                gk[t] += b[i][k] * g[i][t]
    for j in range(n):
        if cm[j][k] > 0:
            for t in range(n):
                gk[t] -= cm[j][k] * b0[t][j]
    for t in range(n):
        gk[t] -= g[k][t]

    stacked = seed.bmat + seed.cmat
    mutated = _mutate_rect(stacked, k, seed.bmat)
    new_b, new_c = mutated[:n], mutated[n:]
    cluster = list(seed.cluster)
    cluster[k] = new_var
    gcols = list(g)
    gcols[k] = tuple(gk)
    return Seed(bmat=new_b, cmat=new_c, gcols=tuple(gcols), cluster=tuple(cluster))


def _power(p: LaurentPoly, e: int, n: int) -> LaurentPoly:
    out = LaurentPoly.one(n)
    for _ in range(e):
        out = out * p
    return out


@dataclass(frozen=True)
class ExchangeGraph:
    datum: CartanDatum
    c: CoxeterElement
    seeds: tuple                 # Seed per id, in BFS discovery order
    edges: tuple                 # (sid_a, sid_b, g_out, g_in) with sid_a < sid_b
    variables: dict              # g-vector -> LaurentPoly


def exchange_graph(datum: CartanDatum, c: CoxeterElement, rank_cap: int = 4,
                   max_seeds: int = 50000) -> ExchangeGraph:
    """Breadth-first closure of the seed graph from B(c); finite in finite type."""
    if datum.n > rank_cap:
        raise MutationError(f"rank {datum.n} exceeds the exchange-graph cap {rank_cap}")
    b0 = b_of_coxeter(datum, c).b
    start = initial_seed(datum, c)
    ids = {start.key(): 0}
    seeds = [start]
    variables = {}
    edges = set()
    for g, p in zip(start.gcols, start.cluster):
        variables[g] = p
    frontier = [0]
    while frontier:
        nxt = []
        for sid in frontier:
            seed = seeds[sid]
            for k in range(datum.n):
                new = mutate(seed, k, b0)
                key = new.key()
                if key not in ids:
                    if len(seeds) >= max_seeds:
                        raise MutationError("exchange graph exceeded the seed cap")
                    ids[key] = len(seeds)
                    seeds.append(new)
                    nxt.append(ids[key])
                tid = ids[key]
                gv_out, gv_in = seed.gcols[k], new.gcols[k]
                for gv, poly in ((gv_out, seed.cluster[k]), (gv_in, new.cluster[k])):
                    if variables.setdefault(gv, poly) != poly:
                        raise MutationError("one g-vector carries two distinct variables")
                a, b = sorted((sid, tid))
                edges.add((a, b, *(sorted((gv_out, gv_in)))))
        frontier = nxt
    deg = [0] * len(seeds)
    for (a, b, _, _) in edges:
        deg[a] += 1
        deg[b] += 1
    if any(d != datum.n for d in deg):
        raise MutationError("exchange graph is not n-regular")
    return ExchangeGraph(datum=datum, c=c, seeds=tuple(seeds), edges=tuple(sorted(edges)),
                         variables=variables)


def cluster_monomial(graph: ExchangeGraph, model: ClusterModel, weight_point: tuple) -> LaurentPoly:
    """x_{mu}: product of variables over the cluster expansion of a weight point."""
    out = LaurentPoly.one(graph.datum.n)
    for idx, coeff in model.expand_weight(weight_point).items():
        out = out * _power(graph.variables[model.labels[idx].weight], coeff, graph.datum.n)
    return out


def verify_exchange_relations(graph: ExchangeGraph, model: ClusterModel) -> list:
    """Check x_l * x_m = x_{l+m} + x_{l (+) m} on every exchange edge; list failures."""
    problems = []
    for (_, _, g1, g2) in graph.edges:
        a = model.id_by_weight.get(g1)
        b = model.id_by_weight.get(g2)
        if a is None or b is None:
            problems.append(("missing-label", g1, g2))
            continue
        if not (model.compat(a, b) == 1 and model.compat(b, a) == 1):
            problems.append(("not-exchangeable", g1, g2))
            continue
        s_w, u_w = model.uplus_weight(a, b)
        lhs = graph.variables[g1] * graph.variables[g2]
        rhs = cluster_monomial(graph, model, s_w) + cluster_monomial(graph, model, u_w)
        if lhs != rhs:
            problems.append(("identity-failed", g1, g2))
    return problems


def exchange_graph_json(graph: ExchangeGraph) -> dict:
    return {
        "datum": graph.datum.label,
        "coxeter": [i + 1 for i in graph.c.order],
        "seeds": [
            {"b": [list(r) for r in s.bmat], "g": [list(g) for g in s.gcols]}
            for s in graph.seeds
        ],
        "edges": [
            {"seeds": [a, b], "exchanged": [list(g1), list(g2)]}
            for (a, b, g1, g2) in graph.edges
        ],
        "variables": [
            {"g": list(g), "terms": [{"exponents": list(e), "coeff": c}
                                      for e, c in sorted(p.terms.items())]}
            for g, p in sorted(graph.variables.items())
        ],
    }


# --- principal-coefficient cross-check ---------------------------------------------------

def verify_g_vectors_principal(datum: CartanDatum, c: CoxeterElement, max_seeds: int = 2000) -> int:
    """Recompute g-vectors by reading principal-coefficient degrees; count variables.

    Each cluster variable with principal coefficients is homogeneous under
    deg(x_i) = e_i, deg(y_j) = -(column j of B(c)); its degree must equal the
    g-vector produced by the matrix recurrence.  Raises on any mismatch.
    """
    n = datum.n
    b0 = b_of_coxeter(datum, c).b

    def grade(poly: LaurentPoly):
        degs = set()
        for e, _ in poly.terms.items():
            d = [0] * n
            for i in range(n):
                for t in range(n):
                    d[t] += e[i] * (1 if t == i else 0)
            for j in range(n):
                for t in range(n):
                    d[t] -= e[n + j] * b0[t][j]
            degs.add(tuple(d))
        if len(degs) != 1:
            raise MutationError("principal-coefficient variable is not homogeneous")
        return degs.pop()

    start_cluster = tuple(
        LaurentPoly.monomial(tuple(1 if t == i else 0 for t in range(2 * n))) for i in range(n)
    )
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    start = Seed(bmat=b0, cmat=ident,
                 gcols=tuple(tuple(1 if t == i else 0 for t in range(n)) for i in range(n)),
                 cluster=start_cluster)
    seen = {start.key()}
    frontier = [start]
    count = 0
    gvecs = set(start.gcols)
    while frontier:
        nxt = []
        for seed in frontier:
            for k in range(n):
                new = _mutate_principal(seed, k, b0)
                if grade(new.cluster[k]) != new.gcols[k]:
                    raise MutationError("matrix g-vector differs from the principal grading")
                key = new.key()
                if key not in seen:
                    if len(seen) >= max_seeds:
                        raise MutationError("principal BFS exceeded the seed cap")
                    seen.add(key)
                    nxt.append(new)
                    gvecs.update(new.gcols)
        frontier = nxt
        count += len(nxt)
    return len(gvecs)


def _mutate_principal(seed: Seed, k: int, b0: tuple) -> Seed:
    """Seed mutation carrying principal coefficients inside the Laurent ring (2n vars)."""
    n = len(seed.bmat)
    two_n = 2 * n
    b, cm = seed.bmat, seed.cmat
    num_plus = LaurentPoly.one(two_n)
    num_minus = LaurentPoly.one(two_n)
    for i in range(n):
        bik = b[i][k]
        if bik > 0:
            num_plus = num_plus * _power(seed.cluster[i], bik, two_n)
        elif bik < 0:
            num_minus = num_minus * _power(seed.cluster[i], -bik, two_n)
    for j in range(n):
        cjk = cm[j][k]
        if cjk > 0:
            num_plus = num_plus * LaurentPoly.monomial(
                tuple(cjk if t == n + j else 0 for t in range(two_n)))
        elif cjk < 0:
            num_minus = num_minus * LaurentPoly.monomial(
                tuple(-cjk if t == n + j else 0 for t in range(two_n)))
    new_var = exact_div(num_plus + num_minus, seed.cluster[k])

    gk = [0] * n
    for i in range(n):
        if b[i][k] > 0:
            for t in range(n):
                gk[t] += b[i][k] * seed.gcols[i][t]
    for j in range(n):
        if cm[j][k] > 0:
            for t in range(n):
                gk[t] -= cm[j][k] * b0[t][j]
    for t in range(n):
        gk[t] -= seed.gcols[k][t]

    stacked = seed.bmat + seed.cmat
    mutated = _mutate_rect(stacked, k, seed.bmat)
    cluster = list(seed.cluster)
    cluster[k] = new_var
    gcols = list(seed.gcols)
    gcols[k] = tuple(gk)
    return Seed(bmat=mutated[:n], cmat=mutated[n:], gcols=tuple(gcols), cluster=tuple(cluster))

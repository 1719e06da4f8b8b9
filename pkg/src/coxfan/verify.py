"""Named verification suites over a (datum, Coxeter element) pair.

Each suite returns a list of CheckResult rows; the CLI prints them and the
test suite asserts on them.  Every check is exact: integer or rational
arithmetic end to end, with randomness only in seeded point/f sampling.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .cartan import CartanDatum, weight_to_root
from .linalg import bareiss_det
from .model import BipartiteOracle, ClusterModel, bar_map, build_model, cone_membership, iota_map, sigma_map
from .mutation import exchange_graph, verify_exchange_relations
from .polytope import (
    build_hrep,
    cambrian_rays,
    check_polytopality,
    default_f,
    polytopes_equal,
    random_valid_f,
    vertices,
    verify_support_function,
    violated_condition,
)
from .weyl import (
    CoxeterElement,
    c_sorting_word,
    enumerate_group,
    is_antisortable,
    is_sortable,
    longest_element,
    singletons,
    w_m_word,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _check(name, ok, detail=""):
    return CheckResult(name, bool(ok), str(detail))


SUITES = ("fan", "polytope", "cambrian", "exchange", "sorting", "maps")


def run_suite(name: str, datum: CartanDatum, c: CoxeterElement, seed: int = 0,
              points: int = 1000, random_fs: int = 20, group_cap: int = 200) -> list:
    if name == "fan":
        return suite_fan(datum, c, points=points, seed=seed)
    if name == "polytope":
        return suite_polytope(datum, c, random_fs=random_fs, seed=seed)
    if name == "cambrian":
        return suite_cambrian(datum, c)
    if name == "exchange":
        return suite_exchange(datum, c)
    if name == "sorting":
        return suite_sorting(datum, c, seed=seed, brute_force_cap=group_cap)
    if name == "maps":
        return suite_maps(datum, c, seed=seed)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")


# --- fan: Z-bases, unique expansions, completeness -------------------------------------

def suite_fan(datum: CartanDatum, c: CoxeterElement, points: int = 1000, seed: int = 0) -> list:
    model = build_model(datum, c)
    results = []
    bad_det = [cl for cl in model.clusters()
               if bareiss_det(tuple(model.labels[k].weight for k in cl)) not in (1, -1)]
    results.append(_check("cluster-z-basis", not bad_det,
                          f"{len(model.clusters())} clusters, {len(bad_det)} non-unimodular"))

    rng = random.Random(seed)
    pts = [tuple(rng.randint(-20, 20) for _ in range(datum.n)) for _ in range(points)]
    coeffs = cone_membership(model, pts)
    closed = (coeffs >= 0).all(axis=2)
    open_ = (coeffs > 0).all(axis=2)
    cover_ok = bool((closed.sum(axis=0) >= 1).all())
    disjoint_ok = bool((open_.sum(axis=0) <= 1).all())
    results.append(_check("cone-cover", cover_ok, f"{points} points in >=1 closed cone"))
    results.append(_check("cone-disjoint", disjoint_ok, "open cones pairwise disjoint on sample"))

    clusters = model.clusters()
    n = datum.n
    bad = 0
    for pi, p in enumerate(pts):
        exp = model.expand_root(p)
        support = list(exp)
        pairwise = all(
            model.compat(a, b) == 0 and model.compat(b, a) == 0
            for i, a in enumerate(support) for b in support[i + 1:]
        )
        want = {(k, v) for k, v in exp.items()}
        agree = True
        for ci in closed[:, pi].nonzero()[0]:
            got = {(clusters[ci][t], int(coeffs[ci, pi, t])) for t in range(n) if coeffs[ci, pi, t] > 0}
            if got != want:
                agree = False
        if not (pairwise and agree):
            bad += 1
    results.append(_check("expansion-unique", bad == 0,
                          f"{points} points, {bad} with ambiguous or incompatible expansion"))
    return results


# --- polytope: simplicity, support function, and the negative control --------------------

def suite_polytope(datum: CartanDatum, c: CoxeterElement, random_fs: int = 20, seed: int = 0) -> list:
    model = build_model(datum, c)
    rng = random.Random(seed)
    results = []
    fs = [default_f(datum)] + [random_valid_f(datum, rng) for _ in range(random_fs)]
    simple_ok = support_ok = strict_ok = True
    for f in fs:
        hrep = build_hrep(model, f)
        try:
            vrep = vertices(model, hrep)   # raises unless every vertex is simple
        except Exception:
            simple_ok = False
            continue
        if verify_support_function(model, f, vrep):
            support_ok = False
        if check_polytopality(model, f.values):
            strict_ok = False
    results.append(_check("vertices-simple", simple_ok, f"{len(fs)} support choices"))
    results.append(_check("support-function", support_ok,
                          "max over vertices matches F_c with maximizers = clusters"))
    results.append(_check("exchange-inequalities", strict_ok, "strict on every adjacent pair"))

    bad_f = _broken_f(datum)
    rejected = bool(violated_condition(datum, bad_f))
    fails = bool(check_polytopality(model, bad_f)) if not rejected else True
    results.append(_check("negative-control", rejected or fails,
                          f"f={bad_f} must be rejected or violate an inequality"))
    return results


def _broken_f(datum: CartanDatum):
    # Violate one column condition: f = default except one coordinate blown up.
    base = list(default_f(datum).values)
    if datum.n == 1:
        return (0,)
    base[1] = base[1] * 100
    return tuple(base)


# --- cambrian: ray equality and polytope equality ---------------------------------------

def suite_cambrian(datum: CartanDatum, c: CoxeterElement) -> list:
    model = build_model(datum, c)
    rays = set(cambrian_rays(model))
    want = {lab.weight for lab in model.labels}
    results = [_check("ray-equality", rays == want,
                      f"{len(rays)} singleton rays vs {len(want)} labels")]
    ok, witness = polytopes_equal(model, default_f(datum))
    results.append(_check("polytope-equality", ok, witness or "canonical H-reps identical"))
    return results


# --- exchange: the mutation oracle ------------------------------------------------------

def suite_exchange(datum: CartanDatum, c: CoxeterElement) -> list:
    model = build_model(datum, c)
    graph = exchange_graph(datum, c)
    results = []
    results.append(_check("seeds-are-clusters", len(graph.seeds) == len(model.clusters()),
                          f"{len(graph.seeds)} seeds vs {len(model.clusters())} clusters"))
    gmatch = set(graph.variables) == {lab.weight for lab in model.labels}
    results.append(_check("g-vectors-are-labels", gmatch,
                          f"{len(graph.variables)} variables vs {len(model.labels)} labels"))
    problems = verify_exchange_relations(graph, model)
    results.append(_check("exchange-relations", not problems,
                          f"{len(graph.edges)} edges, {len(problems)} failures"))
    return results


# --- sorting: section-6 machinery --------------------------------------------------------

def suite_sorting(datum: CartanDatum, c: CoxeterElement, seed: int = 0,
                  brute_force_cap: int = 200) -> list:
    results = []
    w0 = longest_element(datum)
    word, blocks = w_m_word(c, c.max_h())
    results.append(_check("w_m-evaluates-to-w0", word.element(datum) == w0,
                          f"length {len(word.letters)}"))
    _, extracted = c_sorting_word(c, w0)
    results.append(_check("w_m-is-sorting-word", blocks == extracted,
                          "greedy construction matches lex-first extraction"))
    sing = singletons(c)
    results.append(_check("singletons-prefixes", True, f"{len(sing)} c-singletons"))
    try:
        group = enumerate_group(datum, cap=brute_force_cap)
    except Exception:
        group = None
    if group is not None:
        brute = {w.mw for w in group if is_sortable(c, w) and is_antisortable(c, w)}
        results.append(_check("singletons-brute-force", brute == {w.mw for w in sing},
                              f"group order {len(group)}"))
    return results


# --- maps: compatibility-preserving bijections --------------------------------------------

def compat_pi_independent(model: ClusterModel, a: int, b: int) -> int:
    """Weight-side compatibility degree computed without the root-side tables.

    Walks tau on raw weight coordinates (omega_i if the weight is -omega_i,
    c times it otherwise) until the first argument is a fundamental weight,
    then reads the positive part of the alpha_i-coordinate of phi_c of the other.
    """
    datum, c = model.datum, model.c
    n = datum.n
    cinv = c.wel.inverse()
    x = model.labels[a].weight
    y = model.labels[b].weight

    def tau_w(v):
        node = _neg_fundamental(v)
        if node is not None:
            return tuple(-t for t in v)
        return c.wel.apply_weight(v)

    for _ in range(model.tau_order + 1):
        node = _fundamental(x)
        if node is not None:
            img = tuple(p - q for p, q in zip(cinv.apply_weight(y), y))
            val = weight_to_root(datum, img)[node]
            return int(val) if val > 0 else 0
        x, y = tau_w(x), tau_w(y)
    raise RuntimeError("weight-side walk never reached a fundamental weight")


def _fundamental(v):
    if sum(v) == 1 and all(t in (0, 1) for t in v):
        return v.index(1)
    return None


def _neg_fundamental(v):
    if sum(v) == -1 and all(t in (0, -1) for t in v):
        return v.index(-1)
    return None


def _table_preserved(src: ClusterModel, dst: ClusterModel, mapping, pairs) -> bool:
    return all(src.compat(a, b) == dst.compat(mapping[a], mapping[b]) for a, b in pairs)


def suite_maps(datum: CartanDatum, c: CoxeterElement, seed: int = 0,
               exhaustive_rank: int = 3, samples: int = 400) -> list:
    model = build_model(datum, c)
    L = len(model.labels)
    rng = random.Random(seed)
    if datum.n <= exhaustive_rank:
        pairs = [(a, b) for a in range(L) for b in range(L)]
    else:
        pairs = [(rng.randrange(L), rng.randrange(L)) for _ in range(samples)]
    results = []

    phi_ok = all(model.compat(a, b) == compat_pi_independent(model, a, b) for a, b in pairs)
    results.append(_check("phi-compat", phi_ok, "weight-side degree equals root-side degree"))

    sig_ok = True
    for i in model.c.initial_nodes():
        tgt, mp = sigma_map(model, i)
        sig_ok = sig_ok and _table_preserved(model, tgt, mp, pairs)
        sig_ok = sig_ok and all(tgt.tau(mp[a]) == mp[model.tau(a)] for a in range(L))
    results.append(_check("sigma", sig_ok, "per initial node: compat preserved, tau intertwined"))

    tgt, mp = bar_map(model)
    bar_ok = _table_preserved(model, tgt, mp, pairs)
    bar_ok = bar_ok and all(mp[model.tau(a)] == tgt.tau(mp[a], -1) for a in range(L))
    results.append(_check("bar", bar_ok, "compat preserved, bar(tau x) = tau^{-1}(bar x)"))

    iota_ok = True
    for drop in range(datum.n):
        nodes = tuple(k for k in range(datum.n) if k != drop)
        if not nodes:
            continue
        sub, emb, _ = iota_map(model, nodes)
        ls = len(sub.labels)
        sub_pairs = [(a, b) for a in range(ls) for b in range(ls)] if ls * ls <= 4 * samples else \
            [(rng.randrange(ls), rng.randrange(ls)) for _ in range(samples)]
        iota_ok = iota_ok and all(
            sub.compat(a, b) == model.compat(emb[a], emb[b]) for a, b in sub_pairs)
    results.append(_check("iota", iota_ok, "restriction preserves the degree"))

    if len(datum.components) == 1:
        oracle = BipartiteOracle(datum)
        mt = build_model(datum, oracle.t)
        tm = oracle.t_minus_map(mt)
        Lo = len(oracle.roots)
        if datum.n <= exhaustive_rank:
            opairs = [(a, b) for a in range(Lo) for b in range(Lo)]
        else:
            opairs = [(rng.randrange(Lo), rng.randrange(Lo)) for _ in range(samples)]
        t_ok = all(oracle.compat(a, b) == mt.compat(tm[a], tm[b]) for a, b in opairs)
        t_ok = t_ok and all(mt.tau(tm[a]) == tm[oracle.tau(-1, oracle.tau(1, a))]
                            for a in range(Lo))
        results.append(_check("t-minus", t_ok,
                              "bipartite oracle degree transported by t_-"))
    return results

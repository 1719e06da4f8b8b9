"""Generalized associahedra: H-representations, exact vertices, and the Cambrian build.

Points of the dual space are tuples z with z_i the value on omega_i, so a
facet normal is just the weight-coordinate vector of its label.  All vertex
and incidence decisions are exact (integer/Fraction arithmetic only).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cartan import CartanDatum
from .linalg import solve_exact, solve_fraction_free, vec_dot
from .model import ClusterModel
from .weyl import singletons


class PolytopeError(ValueError):
    pass


# --- admissible support data -----------------------------------------------------------

def f_conditions(datum: CartanDatum):
    """Constraints on f: equalities f(i)=f(i*) and one strict inequality per column.

    Returns (equalities, rows) where each row r encodes sum_i r[i] f(i) > 0.
    """
    from .weyl import node_involution

    istar = node_involution(datum)
    equalities = tuple(sorted((i, istar[i]) for i in range(datum.n) if i < istar[i]))
    rows = tuple(tuple(datum.cartan[i][j] for i in range(datum.n)) for j in range(datum.n))
    return equalities, rows


def render_condition(row) -> str:
    """Human-readable form of sum_i row[i] f(i) > 0."""
    parts = []
    for i, x in enumerate(row):
        if x == 0:
            continue
        term = f"f({i + 1})"
        if x == 1:
            parts.append(("+" if parts else "") + term)
        elif x == -1:
            parts.append("-" + term)
        else:
            parts.append(("+" if parts and x > 0 else "") + f"{x}{term}")
    return "".join(parts) + " > 0"


def folded_inequalities(datum: CartanDatum):
    """Inequality rows with f(i*) identified with f(i), deduplicated and primitive."""
    equalities, rows = f_conditions(datum)
    rep = list(range(datum.n))
    for i, j in equalities:
        rep[j] = i
    folded = set()
    for row in rows:
        acc = [0] * datum.n
        for i, x in enumerate(row):
            acc[rep[i]] += x
        g = 0
        for x in acc:
            g = gcd(g, abs(x))
        if g > 1:
            acc = [x // g for x in acc]
        folded.add(tuple(acc))
    return equalities, tuple(sorted(folded))


@dataclass(frozen=True)
class SupportData:
    """Values f(i) defining the support function F_c; validated against the datum."""

    values: tuple

    @staticmethod
    def make(datum: CartanDatum, values) -> "SupportData":
        vals = tuple(Fraction(v) for v in values)
        if len(vals) != datum.n:
            raise PolytopeError("f has the wrong arity")
        problem = violated_condition(datum, vals)
        if problem:
            raise PolytopeError(f"invalid support data: {problem}")
        return SupportData(vals)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]


def violated_condition(datum: CartanDatum, values) -> str:
    """Empty string when f is admissible, else a printable violated condition."""
    vals = tuple(Fraction(v) for v in values)
    equalities, rows = f_conditions(datum)
    for i, j in equalities:
        if vals[i] != vals[j]:
            return f"f({i + 1}) = f({j + 1})"
    for row in rows:
        if sum(r * v for r, v in zip(row, vals)) <= 0:
            return render_condition(row)
    return ""


def default_f(datum: CartanDatum) -> SupportData:
    """The exact solution of A^T f = (1,...,1); admissible for every finite type."""
    n = datum.n
    at = tuple(tuple(datum.cartan[i][j] for i in range(n)) for j in range(n))
    f = solve_fraction_free(at, (1,) * n)
    return SupportData.make(datum, f)


def random_valid_f(datum: CartanDatum, rng) -> SupportData:
    """Random admissible rational f, sampled exactly.

    Condition (2) says A^T f is componentwise positive, and a right-hand side
    invariant under i -> i* forces f(i) = f(i*) by uniqueness of the solve, so
    sampling a positive i*-symmetric vector r and solving A^T f = r covers the
    whole admissible cone.
    """
    from .weyl import node_involution

    istar = node_involution(datum)
    n = datum.n
    r = [None] * n
    for j in range(n):
        if r[j] is None:
            val = Fraction(rng.randint(1, 60), rng.randint(1, 12))
            r[j] = val
            r[istar[j]] = val
    at = tuple(tuple(datum.cartan[i][j] for i in range(n)) for j in range(n))
    return SupportData.make(datum, solve_fraction_free(at, tuple(r)))


# --- H- and V-representations ------------------------------------------------------------

@dataclass(frozen=True)
class Facet:
    normal: tuple        # integer weight coordinates of the label
    rhs: Fraction
    tag: tuple           # (i, m) of the defining label, 1-based node


@dataclass(frozen=True)
class HRep:
    facets: tuple

    def canonical(self) -> tuple:
        out = []
        for fa in self.facets:
            g = 0
            for x in fa.normal:
                g = gcd(g, abs(x))
            g = g or 1
            out.append((tuple(x // g for x in fa.normal), Fraction(fa.rhs) / g))
        return tuple(sorted(out))


@dataclass(frozen=True)
class VRep:
    vertices: tuple      # Fraction tuples
    clusters: tuple      # defining cluster (label ids) per vertex
    edges: tuple         # index pairs into vertices


def build_hrep(model: ClusterModel, f: SupportData) -> HRep:
    facets = []
    for lab in model.labels:
        facets.append(Facet(normal=lab.weight, rhs=f[lab.node], tag=(lab.node + 1, lab.power)))
    return HRep(tuple(facets))


def hrep_orbit_groups(model: ClusterModel, hrep: HRep):
    """Facets grouped by tau-orbit, in orbit order; all share one right-hand side."""
    groups = []
    for orb in model.orbits:
        normals = tuple(model.labels[k].weight for k in orb)
        rhs = {hrep.facets[k].rhs for k in orb}
        if len(rhs) != 1:
            raise PolytopeError("facets of one orbit carry different right-hand sides")
        groups.append((normals, rhs.pop()))
    return tuple(groups)


def vertices(model: ClusterModel, hrep: HRep) -> VRep:
    """One exact vertex per cluster; simplicity is asserted, not assumed."""
    facets = hrep.facets
    verts = []
    for cl in model.clusters():
        rows = tuple(facets[k].normal for k in cl)
        rhs = tuple(facets[k].rhs for k in cl)
        v = solve_fraction_free(rows, rhs)
        for k, fa in enumerate(facets):
            val = vec_dot(fa.normal, v)
            if k in cl:
                if val != fa.rhs:
                    raise PolytopeError("vertex misses a defining facet")
            elif val >= fa.rhs:
                raise PolytopeError("vertex is not simple: an extra facet is tight or violated")
        verts.append(tuple(Fraction(x) for x in v))
    clusters = model.clusters()
    edge_list = tuple(sorted((c1, c2) for (c1, c2, _, _) in model.adjacent_cluster_pairs()))
    return VRep(tuple(verts), tuple(clusters), edge_list)


def support_function_value(model: ClusterModel, f: SupportData, point_root: tuple) -> Fraction:
    """F_c evaluated through the cluster expansion (root-side input)."""
    total = Fraction(0)
    for idx, coeff in model.expand_root(point_root).items():
        total += coeff * f[model.labels[idx].node]
    return total


def verify_support_function(model: ClusterModel, f: SupportData, vrep: VRep) -> list:
    """max_v <v, lambda> must equal f(i) with maximizers exactly the clusters containing lambda."""
    problems = []
    for lab in model.labels:
        best = max(vec_dot(v, lab.weight) for v in vrep.vertices)
        if best != f[lab.node]:
            problems.append(f"support value of label {lab.index} is {best}, expected f({lab.node + 1})")
            continue
        argmax = {k for k, v in enumerate(vrep.vertices) if vec_dot(v, lab.weight) == best}
        containing = {k for k, cl in enumerate(vrep.clusters) if lab.index in cl}
        if argmax != containing:
            problems.append(f"maximizers of label {lab.index} are not its clusters")
    return problems


def check_polytopality(model: ClusterModel, f_values) -> list:
    """Strictness report for the exchange inequalities; runs on raw f on purpose.

    For every adjacent cluster pair with exchanged labels a, g the inequality
    F(a) + F(g) > max(F(a+g), F(a uplus g)) is evaluated through expansions;
    the returned list of violations is empty exactly when f supports a polytope.
    """
    vals = tuple(Fraction(v) for v in f_values)

    def F(point):
        return sum(coeff * vals[model.labels[idx].node]
                   for idx, coeff in model.expand_root(point).items())

    violations = []
    for (c1, c2, a, b) in model.adjacent_cluster_pairs():
        s, u = model.uplus(a, b)
        lhs = vals[model.labels[a].node] + vals[model.labels[b].node]
        rhs = max(F(s), F(u))
        if lhs <= rhs:
            violations.append((a, b, lhs, rhs))
    return violations


# --- the Cambrian construction ------------------------------------------------------------

def chamber_point(datum: CartanDatum, f: SupportData) -> tuple:
    """The point a with (a, omega_i) = f(i); raises unless a is strictly dominant."""
    a = f.values
    for j in range(datum.n):
        if sum(datum.cartan[i][j] * a[i] for i in range(datum.n)) <= 0:
            raise PolytopeError("point is not interior to the fundamental chamber")
    return a


def cambrian_rays(model: ClusterModel):
    """{w omega_i : w a c-singleton} with the weight index attached to each ray."""
    rays = {}
    for w in singletons(model.c):
        for i in range(model.n):
            point = tuple(w.mw[k][i] for k in range(model.n))
            if point in rays and rays[point] != i:
                raise PolytopeError("one ray received two distinct weight indices")
            rays[point] = i
    return rays


def cambrian_hrep(model: ClusterModel, a_pairings) -> HRep:
    """Half-space phi(w omega_j) <= (a, omega_j) for every Cambrian ray."""
    a = tuple(Fraction(x) for x in a_pairings)
    for j in range(model.n):
        if sum(model.datum.cartan[i][j] * a[i] for i in range(model.n)) <= 0:
            raise PolytopeError("pairing tuple lies outside the open chamber")
    facets = []
    for point, j in sorted(cambrian_rays(model).items()):
        facets.append(Facet(normal=point, rhs=a[j], tag=(j + 1, -1)))
    return HRep(tuple(facets))


def polytopes_equal(model: ClusterModel, f: SupportData):
    """Compare the cluster-side and Cambrian-side H-representations exactly.

    Returns (equal, witness); the witness names the first differing facet.
    """
    ours = build_hrep(model, f).canonical()
    cam = cambrian_hrep(model, f.values).canonical()
    if ours == cam:
        return True, None
    diff = set(ours).symmetric_difference(cam)
    return False, sorted(diff)[0]


# --- export ---------------------------------------------------------------------------------

def facet_vertex_cycle(vrep: VRep, facet_label: int) -> list:
    """Vertex indices around a rank-3 facet, walked along polytope edges."""
    on_facet = [k for k, cl in enumerate(vrep.clusters) if facet_label in cl]
    adj = {k: [] for k in on_facet}
    on = set(on_facet)
    for (u, v) in vrep.edges:
        if u in on and v in on:
            adj[u].append(v)
            adj[v].append(u)
    for k, nb in adj.items():
        if len(nb) != 2:
            raise PolytopeError("facet walk found a non-cycle incidence")
    start = min(on_facet)
    cycle = [start, min(adj[start])]
    while True:
        prev, cur = cycle[-2], cycle[-1]
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            break
        cycle.append(nxt)
    if len(cycle) != len(on_facet):
        raise PolytopeError("facet cycle does not cover its vertices")
    return cycle


def export_off(model: ClusterModel, hrep: HRep, vrep: VRep, precision: int = 12) -> str:
    """ASCII OFF body (rank 3 only); exact values live in the JSON sidecar."""
    if model.n != 3:
        raise PolytopeError("OFF export is defined for rank-3 data only")
    lines = ["OFF"]
    faces = [facet_vertex_cycle(vrep, lab.index) for lab in model.labels]
    lines.append(f"{len(vrep.vertices)} {len(faces)} {len(vrep.edges)}")
    for v in vrep.vertices:
        lines.append(" ".join(_decimal(x, precision) for x in v))
    for cyc in faces:
        lines.append(str(len(cyc)) + " " + " ".join(str(k) for k in cyc))
    return "\n".join(lines) + "\n"


def _decimal(x: Fraction, precision: int) -> str:
    sign = "-" if x < 0 else ""
    x = abs(Fraction(x))
    scaled = x * 10**precision
    digits = scaled.numerator // scaled.denominator
    whole, frac = divmod(digits, 10**precision)
    return f"{sign}{whole}.{str(frac).rjust(precision, '0')}"


def _frac_str(x) -> str:
    fr = Fraction(x)
    return f"{fr.numerator}/{fr.denominator}" if fr.denominator != 1 else str(fr.numerator)


def _frac_parse(s):
    if isinstance(s, int):
        return Fraction(s)
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den or 1))


def export_json(model: ClusterModel, f: SupportData, hrep: HRep, vrep: VRep) -> str:
    data = {
        "datum": model.datum.label,
        "coxeter": [i + 1 for i in model.c.order],
        "f": [_frac_str(x) for x in f.values],
        "facets": [
            {"normal": list(fa.normal), "rhs": _frac_str(fa.rhs), "label": {"i": fa.tag[0], "m": fa.tag[1]}}
            for fa in hrep.facets
        ],
        "vertices": [
            {"coords": [_frac_str(x) for x in v], "cluster": list(cl)}
            for v, cl in zip(vrep.vertices, vrep.clusters)
        ],
        "edges": [list(e) for e in vrep.edges],
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def load_json(text: str):
    """Inverse of export_json, returning (facets, vertices, clusters, edges)."""
    data = json.loads(text)
    facets = tuple(
        Facet(tuple(fa["normal"]), _frac_parse(fa["rhs"]), (fa["label"]["i"], fa["label"]["m"]))
        for fa in data["facets"]
    )
    verts = tuple(tuple(_frac_parse(x) for x in v["coords"]) for v in data["vertices"])
    clusters = tuple(tuple(v["cluster"]) for v in data["vertices"])
    edges = tuple(tuple(e) for e in data["edges"])
    return facets, verts, clusters, edges

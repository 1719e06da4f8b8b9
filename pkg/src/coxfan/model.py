"""Weight labels, almost-positive-root labels, compatibility, and cluster fans.

A model couples the two labelings of cluster variables: weights c^m * omega_i
(the g-vector side, living in P) and their images under the lattice
isomorphism phi_c = c^{-1} - 1 (the root side, living in Q).  Both views share
one label index space, one tau permutation, and one compatibility table.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cartan import (
    CartanDatum,
    generate_roots,
    reflect_root,
    root_to_weight,
    support_of_root,
    weight_to_root_int,
)
from .linalg import int_mat_inv, vec_add
from .weyl import CoxeterElement, coxeter_from_order, node_involution


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Label:
    """One cluster-variable label: weight view c^m omega_i, root view phi_c of it."""

    index: int
    node: int        # i
    power: int       # m with 0 <= m <= h(i;c)
    weight: tuple    # weight-basis coordinates of c^m omega_i
    root: tuple      # root-basis coordinates of the almost-positive root
    orbit: int

    @property
    def is_negative(self) -> bool:
        """True for the labels -beta_i^c (exactly the power-0 labels)."""
        return self.power == 0


class ClusterModel:
    """All label data for one (datum, Coxeter element) pair.

    Labels, the tau permutation, and the orbit structure are built eagerly;
    the compatibility table and the cluster list are computed on first use.
    """

    def __init__(self, datum: CartanDatum, c: CoxeterElement):
        if c.datum != datum:
            raise ModelError("Coxeter element belongs to a different datum")
        self.datum = datum
        self.c = c
        self.n = datum.n
        self._build_labels()
        self._build_tau()
        self._compat = None
        self._clusters = None
        self._adjacent = None
        self._restrictions = {}
        self._expand_cache = {}
        self._uplus_cache = {}

    # --- construction ---------------------------------------------------------------

    def _build_labels(self):
        datum, c = self.datum, self.c
        n = self.n
        cinv = c.wel.inverse()
        records = []
        for i in range(n):
            lam = tuple(1 if k == i else 0 for k in range(n))
            for m in range(c.h_values[i] + 1):
                records.append((i, m, lam))
                lam = c.wel.apply_weight(lam)
        roots = generate_roots(datum)
        weights_seen = set()
        rows = []
        for (i, m, w) in records:
            if w in weights_seen:
                raise ModelError("labels c^m omega_i are not pairwise distinct")
            weights_seen.add(w)
            img = tuple(a - b for a, b in zip(cinv.apply_weight(w), w))
            rows.append((i, m, w, weight_to_root_int(datum, img)))
        if len(rows) != roots.size + n:
            raise ModelError("label count differs from |Phi+| + n")

        # Independent construction of the negative labels: beta_i^c from the word.
        order = c.order
        betas = {}
        for k, i in enumerate(order):
            b = tuple(1 if t == i else 0 for t in range(n))
            for l in range(k + 1, n):
                b = reflect_root(datum, order[l], b)
            betas[i] = b
        sent_negative = {
            r for r in roots.positive_roots
            if all(x <= 0 for x in c.wel.apply_root(r))
        }
        if set(betas.values()) != sent_negative:
            raise ModelError("beta_i^c do not match the roots c sends negative")
        for (i, m, w, r) in rows:
            if m == 0 and tuple(-x for x in r) != betas[i]:
                raise ModelError("phi_c(omega_i) differs from -beta_i^c")
        root_set = {r for (_, _, _, r) in rows}
        expected = set(roots.positive_roots) | {tuple(-x for x in b) for b in betas.values()}
        if root_set != expected:
            raise ModelError("root labels differ from Phi+ union {-beta_i^c}")

        self._rows = rows
        self.beta = betas
        self.id_by_weight = {w: k for k, (_, _, w, _) in enumerate(rows)}
        self.id_by_root = {r: k for k, (_, _, _, r) in enumerate(rows)}
        self.neg_id = {i: self.id_by_weight[tuple(1 if k == i else 0 for k in range(n))]
                       for i in range(n)}

    def _build_tau(self):
        datum, c = self.datum, self.c
        istar = node_involution(datum)
        pos_of = {(i, m): k for k, (i, m, _, _) in enumerate(self._rows)}
        perm = [0] * len(self._rows)
        for k, (i, m, _, _) in enumerate(self._rows):
            if m < c.h_values[i]:
                perm[k] = pos_of[(i, m + 1)]
            else:
                perm[k] = pos_of[(istar[i], 0)]
        self.tau_perm = tuple(perm)

        # Cross-check the root-side description of tau.
        betas = set(self.beta.values())
        for k, (_, _, _, r) in enumerate(self._rows):
            img = self._rows[perm[k]][3]
            if r in betas:
                want = tuple(-x for x in r)
            else:
                want = c.wel.apply_root(r)
            if img != want:
                raise ModelError("tau disagrees with its root-side description")

        seen = [False] * len(perm)
        orbits = []
        orbit_of = [0] * len(perm)
        for i in range(self.n):
            k0 = self.neg_id[i]
            if seen[k0]:
                continue
            orb = []
            k = k0
            while not seen[k]:
                seen[k] = True
                orbit_of[k] = len(orbits)
                orb.append(k)
                k = perm[k]
            orbits.append(tuple(orb))
        if not all(seen):
            raise ModelError("an orbit misses every -beta label")
        self.orbits = tuple(orbits)
        self.labels = tuple(
            Label(k, i, m, w, r, orbit_of[k]) for k, (i, m, w, r) in enumerate(self._rows)
        )
        # Distance (along tau) from each label to the first -beta label, and its node.
        steps = [None] * len(perm)
        for orb in orbits:
            L = len(orb)
            neg_pos = [t for t, k in enumerate(orb) if self.labels[k].is_negative]
            for t, k in enumerate(orb):
                dist = min((p - t) % L for p in neg_pos)
                tgt = orb[(t + dist) % L]
                steps[k] = (dist, self.labels[tgt].node)
        self.steps_to_neg = tuple(steps)
        self.tau_order = _lcm_list([len(o) for o in orbits])

    # --- tau and compatibility --------------------------------------------------------

    def tau(self, label_id: int, exponent: int = 1) -> int:
        orb = self.orbits[self.labels[label_id].orbit]
        L = len(orb)
        t = orb.index(label_id)
        return orb[(t + exponent) % L]

    def compat_table(self):
        if self._compat is None:
            L = len(self.labels)
            table = [[0] * L for _ in range(L)]
            for a in range(L):
                dist, node = self.steps_to_neg[a]
                for b in range(L):
                    r = self.labels[self.tau(b, dist)].root
                    table[a][b] = r[node] if r[node] > 0 else 0
            for a in range(L):
                for b in range(L):
                    if (table[a][b] == 0) != (table[b][a] == 0):
                        raise ModelError("compatibility degree is not zero-symmetric")
            self._compat = tuple(tuple(row) for row in table)
        return self._compat

    def compat(self, a: int, b: int) -> int:
        return self.compat_table()[a][b]

    def compatible(self, a: int, b: int) -> bool:
        return a != b and self.compat(a, b) == 0

    # --- clusters ---------------------------------------------------------------------

    def clusters(self):
        """All maximal sets of pairwise compatible labels, each of size n."""
        if self._clusters is None:
            table = self.compat_table()
            L = len(self.labels)
            adj = [frozenset(b for b in range(L) if b != a and table[a][b] == 0 and table[b][a] == 0)
                   for a in range(L)]
            out = []
            _bron_kerbosch(frozenset(range(L)), frozenset(), [], adj, out)
            for cl in out:
                if len(cl) != self.n:
                    raise ModelError("maximal compatible set of wrong size")
            self._clusters = tuple(sorted(tuple(sorted(cl)) for cl in out))
        return self._clusters

    def adjacent_cluster_pairs(self):
        """Pairs of clusters sharing n-1 labels, with the exchanged labels."""
        if self._adjacent is None:
            clusters = self.clusters()
            by_face = {}
            for ci, cl in enumerate(clusters):
                for k in range(len(cl)):
                    by_face.setdefault(cl[:k] + cl[k + 1:], []).append((ci, cl[k]))
            pairs = []
            for face, touching in by_face.items():
                if len(touching) > 2:
                    raise ModelError("a ridge lies in more than two clusters")
                if len(touching) == 2:
                    (c1, a), (c2, b) = touching
                    pairs.append((c1, c2, a, b))
            self._adjacent = tuple(sorted(pairs))
        return self._adjacent

    # --- restriction to sub-diagrams ----------------------------------------------------

    def restriction(self, nodes: tuple):
        """(sub-model, embedding) for the sub-diagram on the given parent nodes.

        The embedding maps sub-label ids to parent-label ids (the twisted
        inclusion: positive roots go to themselves, -beta_i^{c_J} to -beta_i^c).
        """
        nodes = tuple(sorted(nodes))
        if nodes in self._restrictions:
            return self._restrictions[nodes]
        sub_datum = self.datum.restrict(nodes)
        sub_order = tuple(nodes.index(i) for i in self.c.order if i in nodes)
        sub_model = build_model(sub_datum, coxeter_from_order(sub_datum, sub_order))
        emb = []
        for lab in sub_model.labels:
            if lab.is_negative:
                emb.append(self.neg_id[nodes[lab.node]])
            else:
                full = [0] * self.n
                for pos, i in enumerate(nodes):
                    full[i] = lab.root[pos]
                emb.append(self.id_by_root[tuple(full)])
        result = (sub_model, tuple(emb), nodes)
        self._restrictions[nodes] = result
        return result

    # --- cluster expansions --------------------------------------------------------------

    def peel_negatives(self, gamma: tuple):
        """Coefficients of the -beta_i^c part of gamma, in the order of c's word.

        Returns (m, gamma_plus) with gamma = -sum m_i beta_i^c + gamma_plus,
        gamma_plus in the positive cone and supported where m vanishes.
        """
        acc = [-x for x in gamma]
        m = [0] * self.n
        for i in self.c.order:
            mi = acc[i] if acc[i] > 0 else 0
            m[i] = mi
            if mi:
                beta = self.beta[i]
                for t in range(self.n):
                    acc[t] -= mi * beta[t]
        gamma_plus = tuple(-x for x in acc)
        if any(x < 0 for x in gamma_plus) or any(m[i] and gamma_plus[i] for i in range(self.n)):
            raise ModelError("negative peel produced an invalid positive part")
        return tuple(m), gamma_plus

    def expand_root(self, gamma: tuple) -> dict:
        """The c-cluster expansion of a root-lattice point: label id -> coefficient."""
        gamma = tuple(int(x) for x in gamma)
        cached = self._expand_cache.get(gamma)
        if cached is None:
            cached = self._expand(gamma)
            if _recombine(self, cached) != gamma:
                raise ModelError("expansion does not reconstruct the input point")
            self._expand_cache[gamma] = cached
        return dict(cached)

    def _expand(self, gamma: tuple) -> dict:
        if all(x == 0 for x in gamma):
            return {}
        m, gamma_plus = self.peel_negatives(gamma)
        if any(m):
            res = {self.neg_id[i]: m[i] for i in range(self.n) if m[i]}
            if any(gamma_plus):
                nodes = tuple(i for i in range(self.n) if m[i] == 0)
                if not support_of_root(gamma_plus) <= set(nodes):
                    raise ModelError("positive part escapes the complementary sub-diagram")
                sub_model, emb, node_list = self.restriction(nodes)
                sub_gamma = tuple(gamma_plus[i] for i in node_list)
                for sid, coeff in sub_model._expand(sub_gamma).items():
                    if sub_model.labels[sid].is_negative:
                        raise ModelError("positive-cone point expanded over a negative label")
                    res[emb[sid]] = coeff
            return res
        # gamma sits in the positive cone: slide backwards along tau until it leaves.
        # Exit happens within max_i h(i;c) steps (each positive label (i, m)
        # reaches the negative label (i, 0) after m <= h(i;c) backward steps),
        # and every orbit length exceeds max h, so tau_order is a safe guard.
        cinv = self.c.wel.inverse()
        g = gamma
        k = 0
        while all(x >= 0 for x in g):
            g = cinv.apply_root(g)
            k += 1
            if k > self.tau_order:
                raise ModelError("positive-cone walk failed to terminate")
        inner = self._expand(g)
        return {self.tau(idx, k): coeff for idx, coeff in inner.items()}

    def expand_weight(self, mu: tuple) -> dict:
        """Expansion of a weight-lattice point; phi_c carries it to the root side."""
        cinv = self.c.wel.inverse()
        img = tuple(a - b for a, b in zip(cinv.apply_weight(tuple(mu)), tuple(mu)))
        return self.expand_root(weight_to_root_int(self.datum, img))

    def tau_extend_root(self, exponent: int, gamma: tuple) -> tuple:
        """Piecewise-linear extension of tau^exponent applied to a root point."""
        out = (0,) * self.n
        for idx, coeff in self.expand_root(gamma).items():
            out = vec_add(out, tuple(coeff * x for x in self.labels[self.tau(idx, exponent)].root))
        return out

    def tau_extend_weight(self, exponent: int, mu: tuple) -> tuple:
        out = (0,) * self.n
        for idx, coeff in self.expand_weight(mu).items():
            out = vec_add(out, tuple(coeff * x for x in self.labels[self.tau(idx, exponent)].weight))
        return out

    def uplus(self, a: int, b: int):
        """The companion of a+b in the tau-orbit of pairwise sums of an exchangeable pair.

        Returns (sum, uplus) as root-coordinate tuples; both are 0 on a rank-one
        component, where the exchangeable pair is {alpha, -alpha}.
        """
        key = (a, b) if a <= b else (b, a)
        if key in self._uplus_cache:
            return self._uplus_cache[key]
        if not (self.compat(a, b) == 1 and self.compat(b, a) == 1):
            raise ModelError("uplus requires compatibility degree 1 both ways")
        s = vec_add(self.labels[a].root, self.labels[b].root)
        values = set()
        for m in range(self.tau_order):
            p = vec_add(self.labels[self.tau(a, -m)].root, self.labels[self.tau(b, -m)].root)
            values.add(self.tau_extend_root(m, p))
        zero = (0,) * self.n
        if values == {zero}:
            # Rank-one component: the pair is {alpha, -alpha} and every sum vanishes.
            result = (s, s)
        elif len(values) != 2 or s not in values:
            raise ModelError(f"orbit of sums has {len(values)} values, expected 2")
        else:
            result = (s, next(v for v in values if v != s))
        self._uplus_cache[key] = result
        return result

    def uplus_weight(self, a: int, b: int):
        """uplus transported to the weight side through phi_c^{-1}."""
        s, u = self.uplus(a, b)
        return (vec_add(self.labels[a].weight, self.labels[b].weight),
                self._phi_inverse(u))

    def _phi_inverse(self, gamma: tuple) -> tuple:
        cinv = self.c.wel.inverse()
        phi = tuple(
            tuple(cinv.mw[r][k] - (1 if r == k else 0) for k in range(self.n))
            for r in range(self.n)
        )
        y = root_to_weight(self.datum, gamma)
        from .linalg import solve_fraction_free

        sol = solve_fraction_free(phi, y)
        out = []
        for x in sol:
            if getattr(x, "denominator", 1) != 1:
                raise ModelError("phi_c inverse left the weight lattice")
            out.append(int(x))
        return tuple(out)

    # --- serialization -----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "datum": self.datum.label,
            "coxeter": [i + 1 for i in self.c.order],
            "labels": [
                {
                    "id": lab.index,
                    "i": lab.node + 1,
                    "m": lab.power,
                    "weight": list(lab.weight),
                    "root": list(lab.root),
                    "negative": lab.is_negative,
                }
                for lab in self.labels
            ],
            "orbits": [list(o) for o in self.orbits],
            "compatibility": [list(row) for row in self.compat_table()],
            "clusters": [list(cl) for cl in self.clusters()],
        }


def _recombine(model: ClusterModel, expansion: dict) -> tuple:
    out = (0,) * model.n
    for idx, coeff in expansion.items():
        if coeff <= 0:
            raise ModelError("expansion carries a non-positive coefficient")
        out = vec_add(out, tuple(coeff * x for x in model.labels[idx].root))
    return out


def _bron_kerbosch(p, x, r, adj, out):
    if not p and not x:
        out.append(tuple(r))
        return
    pivot = max(p | x, key=lambda v: len(adj[v] & p))
    for v in sorted(p - adj[pivot]):
        _bron_kerbosch(p & adj[v], x & adj[v], r + [v], adj, out)
        p = p - {v}
        x = x | {v}


def _lcm_list(xs):
    from math import gcd

    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


@lru_cache(maxsize=None)
def build_model(datum: CartanDatum, c: CoxeterElement) -> ClusterModel:
    return ClusterModel(datum, c)


# --- structural maps ------------------------------------------------------------------

def sigma_map(model: ClusterModel, i: int):
    """Label bijection to the model of s_i c s_i, for s_i initial in c.

    Sends -beta_i^c to alpha_i and acts by s_i elsewhere.  Returns
    (target_model, mapping) with mapping[src_id] = dst_id.
    """
    from .weyl import elementary_move, simple_reflection

    if i not in model.c.initial_nodes():
        raise ModelError(f"s{i + 1} is not initial in c")
    target = build_model(model.datum, elementary_move(model.c, i))
    s = simple_reflection(model.datum, i)
    mapping = []
    for lab in model.labels:
        if lab.is_negative and lab.node == i:
            img = tuple(1 if k == i else 0 for k in range(model.n))
        else:
            img = s.apply_root(lab.root)
        mapping.append(target.id_by_root[img])
    return target, tuple(mapping)


def bar_map(model: ClusterModel):
    """Label bijection to the model of c^{-1}: identity on positive roots."""
    target = build_model(model.datum, model.c.inverse())
    mapping = []
    for lab in model.labels:
        if lab.is_negative:
            mapping.append(target.neg_id[lab.node])
        else:
            mapping.append(target.id_by_root[lab.root])
    return target, tuple(mapping)


def iota_map(model: ClusterModel, nodes: tuple):
    """(sub_model, embedding, nodes): the twisted inclusion of the sub-diagram labels."""
    return model.restriction(tuple(nodes))


def support_of_label(model: ClusterModel, label_id: int) -> frozenset:
    lab = model.labels[label_id]
    if lab.is_negative:
        return frozenset([lab.node])
    return support_of_root(lab.root)


# --- the bipartite almost-positive-root oracle ----------------------------------------

class BipartiteOracle:
    """Classic almost-positive-root model Phi_{>=-1} for a connected datum.

    Serves as an independent reference for every bipartite-element statement:
    it never touches the label machinery above except through the linear map
    t_minus, which carries it onto the model of t = t_plus * t_minus.
    """

    def __init__(self, datum: CartanDatum):
        if len(datum.components) != 1:
            raise ModelError("the bipartite oracle requires a connected datum")
        from .weyl import bipartition, bipartite_coxeter, word_to_element

        self.datum = datum
        self.n = datum.n
        self.plus, self.minus = bipartition(datum)
        roots = generate_roots(datum)
        self.h = roots.coxeter_numbers[0]
        neg = [tuple(-1 if k == i else 0 for k in range(datum.n)) for i in range(datum.n)]
        self.roots = tuple(list(roots.positive_roots) + neg)
        self.id_by_root = {r: k for k, r in enumerate(self.roots)}
        self.t_plus = word_to_element(datum, self.plus)
        self.t_minus = word_to_element(datum, self.minus)
        self.t = bipartite_coxeter(datum, 1)
        self._tau = {1: self._tau_perm(1), -1: self._tau_perm(-1)}

    def _tau_perm(self, eps: int):
        fixed = set(self.minus if eps > 0 else self.plus)
        mat = self.t_plus if eps > 0 else self.t_minus
        perm = []
        for r in self.roots:
            i = _neg_simple_node(r)
            if i is not None and i in fixed:
                perm.append(self.id_by_root[r])
            else:
                perm.append(self.id_by_root[mat.apply_root(r)])
        return tuple(perm)

    def tau(self, eps: int, label_id: int) -> int:
        return self._tau[eps][label_id]

    def compat(self, a: int, b: int) -> int:
        """Compatibility degree on Phi_{>=-1} via the invariance walk."""
        for start in (1, -1):
            x, y = a, b
            eps = start
            for _ in range(2 * (self.h + 2) + 2):
                i = _neg_simple_node(self.roots[x])
                if i is not None:
                    v = self.roots[y][i]
                    return v if v > 0 else 0
                x = self.tau(eps, x)
                y = self.tau(eps, y)
                eps = -eps
        raise ModelError("invariance walk never reached a negative simple root")

    def t_minus_map(self, model: ClusterModel):
        """Label bijection t_minus : Phi_{>=-1} -> Phi_ap(t) into the given model of t."""
        if model.c != self.t:
            raise ModelError("target model is not built on the bipartite element t")
        mapping = []
        for r in self.roots:
            mapping.append(model.id_by_root[self.t_minus.apply_root(r)])
        return tuple(mapping)


def _neg_simple_node(coords: tuple):
    node = None
    for k, x in enumerate(coords):
        if x > 0 or x < -1:
            return None
        if x == -1:
            if node is not None:
                return None
            node = k
    return node


# --- exact cone membership (batched, for fan verification) -----------------------------

def cone_coefficient_matrices(model: ClusterModel):
    """Integer inverse of each cluster's root-coordinate basis matrix.

    Clusters are Z-bases (determinant +-1), so the inverses are integral and
    cone membership reduces to integer sign checks.
    """
    import numpy as np

    mats = []
    for cl in model.clusters():
        basis = tuple(zip(*(model.labels[k].root for k in cl)))  # columns are labels
        inv = int_mat_inv(basis)
        mats.append(inv)
    arr = np.array(mats, dtype=np.int64)
    if arr.size and int(abs(arr).max()) > 1 << 20:
        raise ModelError("cone inverse entries are unexpectedly large")
    return arr


def cone_membership(model: ClusterModel, points):
    """Per-point coefficients over every cluster basis: array (clusters, points, n)."""
    import numpy as np

    inv = cone_coefficient_matrices(model)
    pts = np.asarray(points, dtype=np.int64)
    if pts.size and int(abs(pts).max()) > 1 << 20:
        raise ModelError("points too large for the int64 fast path")
    return np.einsum("cij,pj->cpi", inv, pts)

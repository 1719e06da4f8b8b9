"""Finite-type Cartan data, root and weight lattices, and exact basis plumbing.

Nodes are indexed 0..n-1 internally; rendering and CLI input use the 1-based
Bourbaki numbering.  All arithmetic is exact: integer where the lattice
guarantees it, Fraction otherwise.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import bareiss_det, mat_inv, mat_vec

ROOT = "root"
WEIGHT = "weight"

_LABEL_RE = re.compile(r"^([A-G])\s*(\d+)$")

# Valid rank ranges per irreducible family.
_RANK_RANGE = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (4, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


class CartanError(ValueError):
    """Raised for malformed labels or matrices that are not of finite type."""


@dataclass(frozen=True)
class LatticeVector:
    """Exact coordinate vector tagged with its basis (simple roots or fundamental weights)."""

    basis: str
    coords: tuple

    def __post_init__(self):
        if self.basis not in (ROOT, WEIGHT):
            raise CartanError(f"unknown basis tag {self.basis!r}")

    def _check(self, other: "LatticeVector"):
        if self.basis != other.basis:
            raise CartanError("arithmetic requires matching basis tags")
        if len(self.coords) != len(other.coords):
            raise CartanError("rank mismatch")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.basis, tuple(-a for a in self.coords))

    def __mul__(self, c) -> "LatticeVector":
        return LatticeVector(self.basis, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)


@dataclass(frozen=True)
class CartanDatum:
    """Validated finite-type Cartan matrix with symmetrizer and component data."""

    label: str
    cartan: tuple
    symmetrizer: tuple
    components: tuple

    @property
    def n(self) -> int:
        return len(self.cartan)

    def a(self, i: int, j: int) -> int:
        return self.cartan[i][j]

    @property
    def edges(self) -> tuple:
        n = self.n
        return tuple((i, j) for i in range(n) for j in range(i + 1, n) if self.cartan[i][j] != 0)

    def neighbors(self, i: int) -> tuple:
        return tuple(j for j in range(self.n) if j != i and self.cartan[i][j] != 0)

    def component_of(self, i: int) -> tuple:
        for comp in self.components:
            if i in comp:
                return comp
        raise CartanError(f"node {i} out of range")

    def restrict(self, nodes: tuple) -> "CartanDatum":
        """Sub-datum on the given nodes (kept in ascending order, re-indexed from 0)."""
        nodes = tuple(sorted(nodes))
        sub = tuple(tuple(self.cartan[i][j] for j in nodes) for i in nodes)
        return datum_from_matrix(sub, label=f"{self.label}[{','.join(str(i + 1) for i in nodes)}]")

    def __repr__(self):
        return f"CartanDatum({self.label!r})"


def _family_matrix(family: str, n: int) -> list:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2

    def edge(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if family in ("A", "B", "C"):
        for k in range(n - 1):
            edge(k, k + 1)
        if family == "B" and n >= 2:
            edge(n - 2, n - 1, -1, -2)
        if family == "C" and n >= 2:
            edge(n - 2, n - 1, -2, -1)
    elif family == "D":
        for k in range(n - 3):
            edge(k, k + 1)
        edge(n - 3, n - 2)
        edge(n - 3, n - 1)
    elif family == "E":
        # Bourbaki: chain 1-3-4-5-(6-7-8), node 2 hangs off node 4.
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        for u, v in zip(chain, chain[1:]):
            edge(u, v)
        edge(1, 3)
    elif family == "F":
        edge(0, 1)
        edge(1, 2, -1, -2)
        edge(2, 3)
    elif family == "G":
        edge(0, 1, -3, -1)
    else:
        raise CartanError(f"unknown family {family!r}")
    return a


def _compute_symmetrizer(cartan: tuple, components: tuple) -> tuple:
    """Positive integers d with d_i*a_ij = d_j*a_ji, minimal per component."""
    n = len(cartan)
    d = [None] * n
    for comp in components:
        d[comp[0]] = Fraction(1)
        stack = [comp[0]]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or cartan[i][j] == 0:
                    continue
                val = d[i] * Fraction(cartan[i][j], cartan[j][i])
                if d[j] is None:
                    d[j] = val
                    stack.append(j)
                elif d[j] != val:
                    raise CartanError("matrix is not symmetrizable")
        denom = 1
        for i in comp:
            denom = denom * d[i].denominator // _gcd(denom, d[i].denominator)
        for i in comp:
            d[i] = d[i] * denom
        g = 0
        for i in comp:
            g = _gcd(g, int(d[i]))
        for i in comp:
            d[i] = int(d[i]) // g
    return tuple(int(x) for x in d)


def _gcd(a, b):
    a, b = abs(int(a)), abs(int(b))
    while b:
        a, b = b, a % b
    return a


def _connected_components(cartan: tuple) -> tuple:
    n = len(cartan)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j != i and cartan[i][j] != 0 and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


def datum_from_matrix(matrix, label: str = "custom") -> CartanDatum:
    """Validation gate for raw integer Cartan matrices."""
    cartan = tuple(tuple(int(x) for x in row) for row in matrix)
    n = len(cartan)
    if any(len(row) != n for row in cartan):
        raise CartanError("matrix is not square")
    for i in range(n):
        if cartan[i][i] != 2:
            raise CartanError("diagonal entries must equal 2")
        for j in range(n):
            if i != j:
                if cartan[i][j] > 0:
                    raise CartanError("off-diagonal entries must be <= 0")
                if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                    raise CartanError("zero pattern must be symmetric")
    components = _connected_components(cartan)
    symmetrizer = _compute_symmetrizer(cartan, components)
    sym = tuple(tuple(symmetrizer[i] * cartan[i][j] for j in range(n)) for i in range(n))
    # Finite type <=> the symmetrized matrix is positive definite.
    for k in range(1, n + 1):
        minor = tuple(row[:k] for row in sym[:k])
        if bareiss_det(minor) <= 0:
            raise CartanError("matrix is not of finite type")
    return CartanDatum(label=label, cartan=cartan, symmetrizer=symmetrizer, components=components)


@lru_cache(maxsize=None)
def make_datum(label: str) -> CartanDatum:
    """Parse a product label like "A3", "B2xG2", or "A1xA1" into a validated datum."""
    pieces = [p.strip() for p in label.strip().split("x")]
    if not pieces or any(not p for p in pieces):
        raise CartanError(f"cannot parse type label {label!r}")
    blocks = []
    for piece in pieces:
        m = _LABEL_RE.match(piece)
        if not m:
            raise CartanError(f"cannot parse type label {piece!r}")
        family, rank = m.group(1), int(m.group(2))
        lo, hi = _RANK_RANGE[family]
        if rank < lo or (hi is not None and rank > hi):
            raise CartanError(f"rank {rank} invalid for family {family}")
        blocks.append(_family_matrix(family, rank))
    n = sum(len(b) for b in blocks)
    cartan = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                cartan[off + i][off + j] = x
        off += len(b)
    canonical = "x".join(p.upper().replace(" ", "") for p in pieces)
    return datum_from_matrix(cartan, label=canonical)


# --- basis changes and reflections -------------------------------------------------

@lru_cache(maxsize=None)
def _cartan_inverse(datum: CartanDatum) -> tuple:
    return mat_inv(datum.cartan)


def root_to_weight(datum: CartanDatum, coords: tuple) -> tuple:
    """alpha_j = sum_i a_ij omega_i, so weight coords are A @ root coords."""
    return mat_vec(datum.cartan, coords)


def weight_to_root(datum: CartanDatum, coords: tuple) -> tuple:
    return mat_vec(_cartan_inverse(datum), coords)


def weight_to_root_int(datum: CartanDatum, coords: tuple) -> tuple:
    """weight_to_root for points known to lie in the root lattice."""
    out = weight_to_root(datum, coords)
    res = []
    for x in out:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise CartanError("point does not lie in the root lattice")
            x = int(x)
        res.append(x)
    return tuple(res)


def convert(datum: CartanDatum, v: LatticeVector, target: str) -> LatticeVector:
    """Change of basis between root and weight coordinates (exact, possibly rational)."""
    if target not in (ROOT, WEIGHT):
        raise CartanError(f"unknown basis tag {target!r}")
    if v.basis == target:
        return v
    if v.basis == ROOT:
        return LatticeVector(WEIGHT, root_to_weight(datum, v.coords))
    return LatticeVector(ROOT, weight_to_root(datum, v.coords))


def reflect_root(datum: CartanDatum, i: int, coords: tuple) -> tuple:
    """Simple reflection s_i on root coordinates: only the i-th coordinate moves."""
    pairing = sum(datum.cartan[i][j] * coords[j] for j in range(datum.n))
    out = list(coords)
    out[i] = coords[i] - pairing
    return tuple(out)


def reflect_weight(datum: CartanDatum, i: int, coords: tuple) -> tuple:
    """s_i on weight coordinates: subtract coords_i times alpha_i (column i of A)."""
    ci = coords[i]
    if ci == 0:
        return tuple(coords)
    return tuple(coords[k] - ci * datum.cartan[k][i] for k in range(datum.n))


def reflect(datum: CartanDatum, i: int, v: LatticeVector) -> LatticeVector:
    if v.basis == ROOT:
        return LatticeVector(ROOT, reflect_root(datum, i, v.coords))
    return LatticeVector(WEIGHT, reflect_weight(datum, i, v.coords))


# --- root systems -------------------------------------------------------------------

@dataclass(frozen=True)
class RootSystem:
    datum: CartanDatum
    positive_roots: tuple          # root-basis coordinate tuples, sorted by (height, coords)
    index: dict
    coxeter_numbers: tuple         # one entry per component of the datum

    @property
    def size(self) -> int:
        return len(self.positive_roots)


@lru_cache(maxsize=None)
def generate_roots(datum: CartanDatum) -> RootSystem:
    """All positive roots as the closure of the simples under simple reflections."""
    n = datum.n
    simples = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    seen = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for r in frontier:
            for i in range(n):
                img = reflect_root(datum, i, r)
                if img not in seen and all(x >= 0 for x in img):
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    positives = tuple(sorted(seen, key=lambda r: (sum(r), r)))
    index = {r: k for k, r in enumerate(positives)}
    cox = []
    for comp in datum.components:
        count = sum(1 for r in positives if any(r[i] for i in comp))
        h, rem = divmod(2 * count, len(comp))
        if rem:
            raise CartanError("component root count is inconsistent")
        cox.append(h)
    return RootSystem(datum=datum, positive_roots=positives, index=index, coxeter_numbers=tuple(cox))


def support_of_root(coords: tuple) -> frozenset:
    """Nodes carrying a nonzero simple-root coordinate."""
    return frozenset(i for i, x in enumerate(coords) if x != 0)


def spaced(datum: CartanDatum, s1, s2) -> bool:
    """True when no node of s1 is equal or adjacent to a node of s2."""
    return all(datum.cartan[i][j] == 0 for i in s1 for j in s2 if i != j) and not (set(s1) & set(s2))


def is_positive(coords: tuple) -> bool:
    return all(x >= 0 for x in coords) and any(x > 0 for x in coords)


def is_negative(coords: tuple) -> bool:
    return all(x <= 0 for x in coords) and any(x < 0 for x in coords)


def fmt_combo(coords: tuple, symbol: str) -> str:
    """Render e.g. (-1, 0, 2) as "-w1+2w3" for human-readable output."""
    parts = []
    for i, x in enumerate(coords):
        if x == 0:
            continue
        term = f"{symbol}{i + 1}"
        if x == 1:
            parts.append(("+" if parts else "") + term)
        elif x == -1:
            parts.append("-" + term)
        else:
            parts.append(("+" if parts and x > 0 else "") + f"{x}{term}")
    return "".join(parts) if parts else "0"

"""Stars and Chow 1-complexes in an elementary geometry.

Points are triples of Fractions, directions are primitive integer triples.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations
from math import lcm
from typing import Iterable, NamedTuple, Sequence

from .exact_arith import as_fraction
from .geometry import (ElementaryGeometry, Kind, as_point, collapsed_directions, cone_lattice,
                       contains_point, factoring_functionals, translation_group)
from .lattice import IntegerMatrix, integer_kernel, primitive_part, smith_normal_form

__all__ = [
    "WeightedRay",
    "Star",
    "Vertex",
    "Edge",
    "ComplexRay",
    "ChowOneComplex",
    "StarDiscreteData",
    "TrivalentNormalization",
    "is_balanced",
    "multiplicity_and_normalize",
    "is_visible_star",
    "is_visible_complex",
    "asymptotic_star",
    "star_at_vertex",
    "stabilize",
    "discrete_data",
    "direction_between",
]

ORIGIN = (Fraction(0), Fraction(0), Fraction(0))


class WeightedRay(NamedTuple):
    direction: tuple
    weight: int


def _int_vector(v) -> tuple:
    out = []
    for x in v:
        if isinstance(x, bool):
            raise TypeError("booleans are not integers")
        out.append(int(x) if not isinstance(x, str) else int(x.strip()))
    return tuple(out)


def _check_ray(direction, weight) -> WeightedRay:
    d = _int_vector(direction)
    if len(d) != 3:
        raise ValueError(f"ray direction {direction!r} is not a vector of Z^3")
    prim, g = primitive_part(d)
    if g != 1:
        raise ValueError(f"ray direction {d} is not primitive")
    if not isinstance(weight, int) or isinstance(weight, bool) or weight < 1:
        raise ValueError(f"ray weight must be a positive integer, got {weight!r}")
    return WeightedRay(d, weight)


def direction_between(a, b) -> tuple[tuple, Fraction]:
    """Primitive direction from ``a`` to ``b`` and the lattice length of the segment."""
    disp = [y - x for x, y in zip(a, b)]
    den = lcm(*(x.denominator for x in disp))
    ints = [int(x * den) for x in disp]
    prim, g = primitive_part(ints)
    return prim, Fraction(g, den)


def _point_json(p) -> list:
    return [str(x) for x in p]


@dataclass(frozen=True)
class Star:
    geometry: ElementaryGeometry
    base: tuple
    rays: tuple
    internal_markings: int = 0

    def __post_init__(self):
        base = as_point(self.base)
        object.__setattr__(self, "base", base)
        rays = tuple(_check_ray(*r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        if not isinstance(self.internal_markings, int) or self.internal_markings < 0:
            raise ValueError("internal_markings must be a nonnegative integer")
        if not contains_point(self.geometry, base):
            raise ValueError(f"star base {base} lies outside the geometry")
        dirs = [r.direction for r in rays]
        if len(set(dirs)) != len(dirs):
            raise ValueError("star rays must have distinct directions")
        for d in dirs:
            if not self.geometry.is_admissible(base, d):
                raise ValueError(f"ray direction {d} is not admissible at {base}")

    @classmethod
    def full_boundary(cls, rays: Iterable, base=ORIGIN, k: int = 0) -> "Star":
        """Star in R^3; ``rays`` are ``(direction, weight)`` pairs or bare directions."""
        rr = [r if len(r) == 2 and isinstance(r[0], (tuple, list)) else (r, 1) for r in rays]
        return cls(ElementaryGeometry.full_boundary(), base, tuple(rr), k)

    @property
    def valence(self) -> int:
        return len(self.rays)

    def weighted_sum(self) -> tuple:
        return tuple(sum(r.weight * r.direction[i] for r in self.rays) for i in range(3))

    def weighted_vectors(self) -> list[tuple]:
        return [tuple(r.weight * x for x in r.direction) for r in self.rays]

    def sorted(self) -> "Star":
        return replace(self, rays=tuple(sorted(self.rays)))

    def translate(self, w) -> "Star":
        w = as_point(w)
        return replace(self, base=tuple(a + b for a, b in zip(self.base, w)))

    def transform(self, U: IntegerMatrix) -> "Star":
        """Apply ``v -> U v`` (full boundary only, ``U`` in GL_3(Z))."""
        if self.geometry.kind is not Kind.FULL_BOUNDARY:
            raise ValueError("GL_3(Z) only acts on full-boundary stars")
        if abs(U.det()) != 1:
            raise ValueError("transform is not unimodular")
        base = tuple(sum(U[i, j] * self.base[j] for j in range(3)) for i in range(3))
        return replace(self, base=base,
                       rays=tuple(WeightedRay(U @ r.direction, r.weight) for r in self.rays))

    def as_complex(self) -> "ChowOneComplex":
        return ChowOneComplex(self.geometry, (Vertex(self.base, False, frozenset(range(1, self.internal_markings + 1))),),
                              (), tuple(ComplexRay(0, r.direction, r.weight) for r in self.rays))

    def key(self) -> tuple:
        """Hashable identity up to the geometry's translation group."""
        base = translation_group(self.geometry).reduce(self.base)
        return (_geometry_key(self.geometry), base, tuple(sorted(self.rays)), self.internal_markings)

    def to_json(self) -> dict:
        return {
            "geometry": self.geometry.to_json(),
            "base": _point_json(self.base),
            "rays": [{"dir": list(r.direction), "weight": r.weight} for r in self.rays],
            "k": self.internal_markings,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Star":
        if not isinstance(data, dict):
            raise ValueError("star JSON must be an object")
        geometry = ElementaryGeometry.from_json(data.get("geometry", {"kind": "FullBoundary"}))
        rays = []
        for r in data.get("rays", []):
            if not isinstance(r, dict) or "dir" not in r:
                raise ValueError("each star ray needs a 'dir' field")
            rays.append((r["dir"], int(r.get("weight", 1))))
        return cls(geometry, data.get("base", ["0", "0", "0"]), tuple(rays), int(data.get("k", 0)))


def _geometry_key(g: ElementaryGeometry) -> tuple:
    return (g.kind.value, g.subkind, g.psi, g.psi1, g.psi2, g.collapsed_rays)


@dataclass(frozen=True)
class Vertex:
    position: tuple
    carries_class: bool = False
    markings: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "position", as_point(self.position))
        object.__setattr__(self, "markings", frozenset(self.markings))


class Edge(NamedTuple):
    endpoints: tuple
    weight: int


class ComplexRay(NamedTuple):
    vertex: int
    direction: tuple
    weight: int


@dataclass(frozen=True)
class ChowOneComplex:
    geometry: ElementaryGeometry
    vertices: tuple
    edges: tuple = ()
    rays: tuple = ()
    disjoint: bool = False

    def __post_init__(self):
        verts = tuple(v if isinstance(v, Vertex) else Vertex(*v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n == 0:
            raise ValueError("a Chow 1-complex needs at least one vertex")
        positions = [v.position for v in verts]
        if len(set(positions)) != n:
            raise ValueError("vertices must have distinct positions")
        for p in positions:
            if not contains_point(self.geometry, p):
                raise ValueError(f"vertex {p} lies outside the geometry")
        seen_marks: set = set()
        for v in verts:
            if seen_marks & v.markings:
                raise ValueError("a marking label is assigned to two vertices")
            seen_marks |= v.markings
        edges = []
        for e in self.edges:
            (a, b), w = e
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise ValueError(f"edge endpoints {a, b} are not two distinct vertices")
            if not isinstance(w, int) or w < 1:
                raise ValueError("edge weights must be positive integers")
            edges.append(Edge((a, b), w))
        object.__setattr__(self, "edges", tuple(edges))
        rays = []
        for r in self.rays:
            vi, d, w = r
            if not 0 <= vi < n:
                raise ValueError(f"ray attached to unknown vertex {vi}")
            wr = _check_ray(d, w)
            if not self.geometry.in_recession_cone(wr.direction):
                raise ValueError(f"ray direction {wr.direction} leaves the geometry")
            rays.append(ComplexRay(vi, wr.direction, w))
        object.__setattr__(self, "rays", tuple(rays))
        for i in range(n):
            dirs = [d for d, _ in self.half_edges(i)]
            if len(set(dirs)) != len(dirs):
                raise ValueError(f"two half-edges at vertex {i} overlap")
        if not self.disjoint and not self._connected():
            raise ValueError("complex is disconnected; set disjoint=True for a disjoint union")

    def _connected(self) -> bool:
        n = len(self.vertices)
        seen, stack = {0}, [0]
        while stack:
            i = stack.pop()
            for (a, b), _ in self.edges:
                for x, y in ((a, b), (b, a)):
                    if x == i and y not in seen:
                        seen.add(y)
                        stack.append(y)
        return len(seen) == n

    def half_edges(self, i: int) -> list[tuple[tuple, int]]:
        """(outgoing primitive direction, weight) for every edge and ray at vertex ``i``."""
        out = []
        for (a, b), w in self.edges:
            if i in (a, b):
                other = b if a == i else a
                d, _ = direction_between(self.vertices[i].position, self.vertices[other].position)
                out.append((d, w))
        out.extend((r.direction, r.weight) for r in self.rays if r.vertex == i)
        return out

    def edge_direction(self, e: Edge) -> tuple:
        a, b = e.endpoints
        return direction_between(self.vertices[a].position, self.vertices[b].position)[0]

    def valence(self, i: int) -> int:
        return len(self.half_edges(i))

    def translate(self, w) -> "ChowOneComplex":
        w = as_point(w)
        verts = tuple(replace(v, position=tuple(a + b for a, b in zip(v.position, w)))
                      for v in self.vertices)
        return replace(self, vertices=verts)

    def transform(self, U: IntegerMatrix) -> "ChowOneComplex":
        if self.geometry.kind is not Kind.FULL_BOUNDARY:
            raise ValueError("GL_3(Z) only acts on full-boundary complexes")
        mv = lambda p: tuple(sum(U[i, j] * p[j] for j in range(3)) for i in range(3))
        verts = tuple(replace(v, position=mv(v.position)) for v in self.vertices)
        rays = tuple(ComplexRay(r.vertex, U @ r.direction, r.weight) for r in self.rays)
        return replace(self, vertices=verts, rays=rays)

    def combinatorial_key(self) -> tuple:
        """Identity up to translation and edge lengths: vertex stars plus edge flows."""
        vkeys = []
        for i, v in enumerate(self.vertices):
            rays = tuple(sorted((r.direction, r.weight) for r in self.rays if r.vertex == i))
            vkeys.append((rays, tuple(sorted(v.markings)), v.carries_class))
        edges = []
        for e in self.edges:
            a, b = e.endpoints
            d = self.edge_direction(e)
            ka, kb = vkeys[a], vkeys[b]
            if (kb, tuple(-x for x in d)) < (ka, d):
                ka, kb, d = kb, ka, tuple(-x for x in d)
            edges.append((ka, kb, d, e.weight))
        return (_geometry_key(self.geometry), tuple(sorted(vkeys)), tuple(sorted(edges)))

    def to_json(self) -> dict:
        return {
            "geometry": self.geometry.to_json(),
            "vertices": [{"position": _point_json(v.position), "carries_class": v.carries_class,
                          "markings": sorted(v.markings)} for v in self.vertices],
            "edges": [{"endpoints": list(e.endpoints), "weight": e.weight} for e in self.edges],
            "rays": [{"vertex": r.vertex, "dir": list(r.direction), "weight": r.weight} for r in self.rays],
            "disjoint": self.disjoint,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChowOneComplex":
        if not isinstance(data, dict) or "vertices" not in data:
            raise ValueError("complex JSON needs a 'vertices' field")
        geometry = ElementaryGeometry.from_json(data.get("geometry", {"kind": "FullBoundary"}))
        verts = tuple(Vertex(v["position"], bool(v.get("carries_class", False)),
                             frozenset(v.get("markings", ()))) for v in data["vertices"])
        edges = tuple(Edge(tuple(e["endpoints"]), int(e.get("weight", 1))) for e in data.get("edges", []))
        rays = tuple(ComplexRay(int(r["vertex"]), _int_vector(r["dir"]), int(r.get("weight", 1)))
                     for r in data.get("rays", []))
        return cls(geometry, verts, edges, rays, bool(data.get("disjoint", False)))


# -- balancing and multiplicity ---------------------------------------------

def is_balanced(s: Star) -> bool:
    """Weighted ray sum lies in the span of the collapsed directions at the base."""
    total = s.weighted_sum()
    return all(sum(f[i] * total[i] for i in range(3)) == 0
               for f in factoring_functionals(s.geometry, s.base))


class TrivalentNormalization(NamedTuple):
    """Multiplicity data of a trivalent full-boundary star.

    ``U`` is unimodular and ``U @ (n_i v_i)`` for the rays listed in ``order``
    gives ``(n,0,0), (0,mn,0), (-n,-mn,0)`` when ``exact`` is true.  Otherwise
    no unimodular map reaches those rows exactly; ``U`` then only carries the
    span of the weighted rays onto ``<(n,0,0), (0,mn,0)>``.
    """

    n: int
    m: int
    N: int
    U: IntegerMatrix
    exact: bool
    order: tuple


def multiplicity_and_normalize(s: Star) -> TrivalentNormalization:
    if s.geometry.kind is not Kind.FULL_BOUNDARY:
        raise ValueError("multiplicity is defined for full-boundary stars")
    if s.valence != 3:
        raise ValueError(f"star is not trivalent (valence {s.valence})")
    if not is_balanced(s):
        raise ValueError("star is not balanced")
    w = s.weighted_vectors()
    snf = smith_normal_form(IntegerMatrix(w[:2], 3))
    factors = snf.invariant_factors
    if len(factors) < 2:
        raise ValueError("weighted rays span a lattice of rank < 2")
    d1, d2 = factors
    n, m = d1, d2 // d1
    for i, j in permutations(range(3), 2):
        U = _exact_normalizer(w[i], w[j], n, m * n)
        if U is not None:
            k = 3 - i - j
            return TrivalentNormalization(n, m, d1 * d2, U, True, (i, j, k))
    # rows satisfy w V = U^-1 D, so the column action v -> V^T v lands in <d1 e1, d2 e2>
    return TrivalentNormalization(n, m, d1 * d2, snf.V.transpose(), False, (0, 1, 2))


def _exact_normalizer(a, b, s: int, t: int) -> IntegerMatrix | None:
    """Unimodular ``U`` with ``U a = (s,0,0)`` and ``U b = (0,t,0)``, if any."""
    if any(x % s for x in a) or any(x % t for x in b):
        return None
    rows = [tuple(x // s for x in a), tuple(x // t for x in b)]
    snf = smith_normal_form(IntegerMatrix(rows, 3))
    if snf.invariant_factors != (1, 1):
        return None
    # rows = P^-1 [I|0] Q^-1, so the last row of Q^-1 completes them to a basis
    completion = _inverse_unimodular(snf.V).row(2)
    basis = IntegerMatrix(rows + [completion], 3).transpose()
    return _inverse_unimodular(basis)


def _inverse_unimodular(M: IntegerMatrix) -> IntegerMatrix:
    """Exact inverse of a matrix in GL_n(Z) via the adjugate."""
    n = M.rows
    det = M.det()
    if abs(det) != 1:
        raise ValueError("matrix is not unimodular")
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = IntegerMatrix([[M[r, c] for c in range(n) if c != j] for r in range(n) if r != i], n - 1) \
                if n > 1 else None
            row.append((-1) ** (i + j) * (minor.det() if minor is not None else 1))
        cof.append(row)
    return IntegerMatrix([[cof[j][i] * det for j in range(n)] for i in range(n)], n)


# -- visibility ---------------------------------------------------------------

def _quotient_map(v: tuple) -> list[tuple]:
    """Two rows of a unimodular matrix; together they are a surjection Z^3 -> Z^2 with kernel Z v."""
    snf = smith_normal_form(IntegerMatrix([[x] for x in v], 1))
    return [snf.U.row(1), snf.U.row(2)]


def _apply(rows: list[tuple], basis: list[tuple]) -> list[list[int]]:
    """Matrix of ``rows`` composed with the inclusion spanned by ``basis``."""
    return [[sum(r[k] * b[k] for k in range(3)) for b in basis] for r in rows]


def is_visible_star(s: Star) -> bool:
    """Injectivity of ``L_p -> prod_i L_{v_i}``.

    ``L_{v_i} = L_q / Z v_i`` embeds in ``Z^3 / Z v_i`` because ``Z v_i`` is
    saturated, so each factor is tested through the quotient ``Z^3 -> Z^3/Z v_i``.
    """
    basis = cone_lattice(s.geometry, s.base)
    if not basis:
        return True
    rows = []
    for r in s.rays:
        rows.extend(_apply(_quotient_map(r.direction), basis))
    if not rows:
        return False
    return not integer_kernel(IntegerMatrix(rows, len(basis)))


def is_visible_complex(c: ChowOneComplex) -> bool:
    """Injectivity of ``L_Gamma -> prod_E L_E x prod_H L_H``."""
    bases = [cone_lattice(c.geometry, v.position) for v in c.vertices]
    offsets, total = [], 0
    for b in bases:
        offsets.append(total)
        total += len(b)
    if total == 0:
        return True

    def block(vertex: int, qrows: list[tuple], sign: int = 1) -> list[list[int]]:
        mapped = _apply(qrows, bases[vertex])
        out = []
        for r in mapped:
            row = [0] * total
            for j, x in enumerate(r):
                row[offsets[vertex] + j] = sign * x
            out.append(row)
        return out

    compat, image = [], []
    for e in c.edges:
        a, b = e.endpoints
        q = _quotient_map(c.edge_direction(e))
        ra, rb = block(a, q), block(b, q, -1)
        compat.extend([p + r for p, r in zip(u, v)] for u, v in zip(ra, rb))
        image.extend(ra)
    for h in c.rays:
        image.extend(block(h.vertex, _quotient_map(h.direction)))
    if compat:
        kernel = integer_kernel(IntegerMatrix(compat, total))
    else:
        kernel = [tuple(int(i == j) for j in range(total)) for i in range(total)]
    if not kernel:
        return True
    if not image:
        return False
    composed = [[sum(row[k] * kv[k] for k in range(total)) for kv in kernel] for row in image]
    return not integer_kernel(IntegerMatrix(composed, len(kernel)))


# -- stars of complexes ------------------------------------------------------

def star_at_vertex(c: ChowOneComplex, v) -> Star:
    i = c.vertices.index(v) if isinstance(v, Vertex) else v
    if not isinstance(i, int) or not 0 <= i < len(c.vertices):
        raise ValueError(f"unknown vertex {v!r}")
    vert = c.vertices[i]
    return Star(c.geometry, vert.position, tuple(c.half_edges(i)), len(vert.markings))


def asymptotic_star(c: ChowOneComplex) -> Star:
    merged: dict = {}
    for r in c.rays:
        merged[r.direction] = merged.get(r.direction, 0) + r.weight
    marks = sum(len(v.markings) for v in c.vertices)
    return Star(c.geometry, ORIGIN, tuple(sorted(merged.items())), marks)


def _erasable(c: ChowOneComplex, i: int) -> bool:
    v = c.vertices[i]
    if v.carries_class or v.markings or len(c.vertices) == 1:
        return False
    half = c.half_edges(i)
    if len(half) != 2:
        return False
    (d1, w1), (d2, w2) = half
    if d1 != tuple(-x for x in d2):
        return False
    if not _in_span(d1, cone_lattice(c.geometry, v.position)):
        return False
    if w1 != w2:
        raise ValueError(f"2-valent collinear vertex {i} has unequal weights {w1} != {w2}")
    return True


def _in_span(d: tuple, basis: list[tuple]) -> bool:
    if not basis:
        return False
    M = IntegerMatrix(list(basis) + [d], 3).transpose()
    return any(k[-1] for k in integer_kernel(M))


def stabilize(c: ChowOneComplex) -> ChowOneComplex:
    """Erase unstable vertices (2-valent, class-free, marking-free, straight) until none remain."""
    while True:
        i = next((j for j in range(len(c.vertices)) if _erasable(c, j)), None)
        if i is None:
            return c
        c = _erase(c, i)


def _erase(c: ChowOneComplex, i: int) -> ChowOneComplex:
    incident = [e for e in c.edges if i in e.endpoints]
    others = [e for e in c.edges if i not in e.endpoints]
    rays = [r for r in c.rays if r.vertex != i]
    at_i = [r for r in c.rays if r.vertex == i]
    if len(incident) == 2:
        a = [x for x in incident[0].endpoints if x != i][0]
        b = [x for x in incident[1].endpoints if x != i][0]
        others.append(Edge((a, b), incident[0].weight))
    else:
        a = [x for x in incident[0].endpoints if x != i][0]
        rays.append(ComplexRay(a, at_i[0].direction, at_i[0].weight))
    remap = lambda j: j - (j > i)
    verts = c.vertices[:i] + c.vertices[i + 1:]
    edges = tuple(Edge((remap(a), remap(b)), w) for (a, b), w in others)
    rays = tuple(ComplexRay(remap(r.vertex), r.direction, r.weight) for r in rays)
    return ChowOneComplex(c.geometry, verts, edges, rays, c.disjoint)


def is_stable(c: ChowOneComplex) -> bool:
    return not any(_erasable(c, j) for j in range(len(c.vertices)))


def is_balanced_complex(c: ChowOneComplex) -> bool:
    return all(is_balanced(star_at_vertex(c, i)) for i in range(len(c.vertices)))


# -- discrete data -----------------------------------------------------------

class StarDiscreteData(NamedTuple):
    """Anticanonical degree ``d`` and ``sum_j (l(mu_j) - |mu_j|)``."""

    d: int
    ell_minus_size: int


def discrete_data(s: Star, mu: Sequence[Sequence[int]] | None = None) -> StarDiscreteData:
    """Discrete data of a full-boundary star with tangency partitions ``mu``.

    ``mu`` lists one partition per ray, in ray order; it defaults to maximal
    tangency ``((n_1), (n_2), ...)``.  With the full toric boundary every
    divisor is a boundary divisor, so ``d`` is the sum of the ray weights.
    """
    if s.geometry.kind is not Kind.FULL_BOUNDARY:
        raise ValueError("anticanonical degree is only read off the rays for the full boundary")
    if mu is None:
        mu = [(r.weight,) for r in s.rays]
    if len(mu) != len(s.rays):
        raise ValueError("need exactly one partition per ray")
    for part, r in zip(mu, s.rays):
        if sum(part) != r.weight or any(x < 1 for x in part):
            raise ValueError(f"{tuple(part)} is not a partition of the ray weight {r.weight}")
    d = sum(r.weight for r in s.rays)
    return StarDiscreteData(d, sum(len(p) - sum(p) for p in mu))

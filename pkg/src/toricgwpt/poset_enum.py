"""Enumeration of one-step degenerations of a star and of the smaller stars.

A degeneration of a star ``s`` is a stable, balanced, visible Chow 1-complex
whose asymptotic star is ``s``.  We split the rays of ``s`` over two or three
vertices, solve the balancing conditions for the edge flows and lay the
vertices out at integral points.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import floor, ceil, lcm, gcd
from typing import Iterator, NamedTuple

from .geometry import ElementaryGeometry, Kind
from .lattice import IntegerMatrix, hermite_normal_form, integer_kernel, primitive_part
from .stars_complexes import (ChowOneComplex, ComplexRay, Edge, Star, Vertex, asymptotic_star,
                    is_balanced, is_balanced_complex, is_stable, is_visible_complex, star_at_vertex)

__all__ = [
    "DegenerationCatalog",
    "one_step_degenerations",
    "stable_degenerations",
    "enumerate_4valent_curves",
    "smaller_stars",
    "gl3_normal_form",
    "set_partitions",
    "four_valent_star",
]


def set_partitions(items: list, blocks: int) -> Iterator[list[list]]:
    """Partitions of ``items`` into exactly ``blocks`` nonempty blocks, each listed once."""
    if blocks == 0:
        if not items:
            yield []
        return
    if len(items) < blocks:
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest, blocks - 1):
        yield [[first]] + p
    for p in set_partitions(rest, blocks):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def _vsum(*vs) -> tuple:
    return tuple(sum(c) for c in zip(*vs))


def _neg(v) -> tuple:
    return tuple(-x for x in v)


def _scale(k, v) -> tuple:
    return tuple(k * x for x in v)


def _cross(a, b) -> tuple:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


class _Layout(NamedTuple):
    """Vertex blocks, edge flows ``(a, b, vector)`` and rational positions."""

    blocks: list
    flows: list
    positions: list


def _normalize_positions(positions: list, base) -> list:
    """Translate so the first vertex sits at ``base`` and rescale offsets to coprime integers."""
    offsets = [tuple(x - y for x, y in zip(p, positions[0])) for p in positions]
    den = lcm(*(x.denominator for p in offsets for x in p))
    ints = [tuple(int(x * den) for x in p) for p in offsets]
    g = 0
    for p in ints:
        for x in p:
            g = gcd(g, x)
    g = g or 1
    return [tuple(b + Fraction(x, g) for b, x in zip(base, p)) for p in ints]


def _tree_layouts(sums: list) -> Iterator[_Layout]:
    b = len(sums)
    if b == 2:
        f = _neg(sums[0])
        if any(f):
            yield _Layout([0, 1], [(0, 1, f)], [(0, 0, 0), primitive_part(f)[0]])
        return
    # three blocks along a path: ends a, c and middle m
    for m in range(3):
        a, c = [i for i in range(3) if i != m]
        f_am, f_mc = _neg(sums[a]), sums[c]
        if not any(f_am) or not any(f_mc):
            continue
        pm = primitive_part(f_am)[0]
        pc = _vsum(pm, primitive_part(f_mc)[0])
        order = [a, m, c]
        pos = {a: (0, 0, 0), m: pm, c: pc}
        yield _Layout(order, [(a, m, f_am), (m, c, f_mc)], [pos[i] for i in order])


def _triangle_layouts(sums: list) -> Iterator[_Layout]:
    """Cycles 0 -> 1 -> 2 -> 0 with flows ``x - R0, x + R2, x`` for interior points ``x``."""
    r0, r2 = sums[0], sums[2]
    normal = _cross(r0, r2)
    if not any(normal):
        return
    plane = integer_kernel(IntegerMatrix([normal], 3))
    b1, b2 = plane

    def coords(v):
        # solve v = s b1 + t b2 exactly via a nonvanishing 2x2 minor
        for i, j in ((0, 1), (0, 2), (1, 2)):
            det = b1[i] * b2[j] - b1[j] * b2[i]
            if det:
                return (Fraction(v[i] * b2[j] - v[j] * b2[i], det),
                        Fraction(b1[i] * v[j] - b1[j] * v[i], det))
        raise AssertionError("plane basis is degenerate")

    corners = [(Fraction(0), Fraction(0)), coords(r0), coords(_neg(r2))]
    # x = alpha r0 + beta r2 in barycentric-like coordinates
    c0, c2 = coords(r0), coords(r2)
    det = c0[0] * c2[1] - c0[1] * c2[0]
    lo = [min(c[k] for c in corners) for k in range(2)]
    hi = [max(c[k] for c in corners) for k in range(2)]
    for s in range(ceil(lo[0]), floor(hi[0]) + 1):
        for t in range(ceil(lo[1]), floor(hi[1]) + 1):
            alpha = (s * c2[1] - t * c2[0]) / det
            beta = (c0[0] * t - c0[1] * s) / det
            if not (0 < alpha < 1 and -1 < beta < 0 and alpha - beta < 1):
                continue
            x = _vsum(_scale(s, b1), _scale(t, b2))
            f01, f12, f20 = _vsum(x, _neg(r0)), _vsum(x, r2), x
            p1 = tuple(alpha * v for v in f01)
            p2 = tuple(a - beta * v for a, v in zip(p1, f12))
            yield _Layout([0, 1, 2], [(0, 1, f01), (1, 2, f12), (2, 0, f20)],
                          [(Fraction(0),) * 3, p1, p2])


def _build(s: Star, blocks: list, layout: _Layout, marks: tuple) -> ChowOneComplex | None:
    positions = _normalize_positions([tuple(Fraction(x) for x in p) for p in layout.positions], s.base)
    index = {blk: i for i, blk in enumerate(layout.blocks)}
    verts = []
    for blk in layout.blocks:
        labels = frozenset(i + 1 for i, owner in enumerate(marks) if owner == blk)
        verts.append(Vertex(positions[index[blk]], False, labels))
    edges = [Edge((index[a], index[b]), primitive_part(f)[1]) for a, b, f in layout.flows]
    rays = [ComplexRay(index[blk], s.rays[i].direction, s.rays[i].weight)
            for blk, members in enumerate(blocks) for i in members]
    try:
        c = ChowOneComplex(s.geometry, tuple(verts), tuple(edges), tuple(rays))
    except ValueError:
        return None
    # every edge must point along its flow
    for (a, b, f), e in zip(layout.flows, c.edges):
        if c.edge_direction(e) != primitive_part(f)[0]:
            return None
    return c


def stable_degenerations(s: Star, vertex_bound: int = 2) -> Iterator[ChowOneComplex]:
    """Stable, strictly balanced complexes with 2..``vertex_bound`` vertices and asymptotic star ``s``.

    Visibility is not imposed here.  Internal markings are distributed over the
    vertices in every possible way.
    """
    if vertex_bound not in (2, 3):
        raise ValueError("vertex_bound must be 2 or 3")
    if not is_balanced(s):
        raise ValueError("star is not balanced")
    seen = set()
    indices = list(range(len(s.rays)))
    for nblocks in range(2, vertex_bound + 1):
        for blocks in set_partitions(indices, nblocks):
            sums = [_vsum(*(s.weighted_vectors()[i] for i in blk)) for blk in blocks]
            if any(_vsum(*sums)):
                continue
            layouts = list(_tree_layouts(sums))
            if nblocks == 3:
                layouts.extend(_triangle_layouts(sums))
            for layout in layouts:
                for marks in product(range(nblocks), repeat=s.internal_markings):
                    c = _build(s, blocks, layout, marks)
                    if c is None or not is_balanced_complex(c):
                        continue
                    try:
                        if not is_stable(c):
                            continue
                    except ValueError:
                        continue
                    key = c.combinatorial_key()
                    if key not in seen:
                        seen.add(key)
                        yield c


@dataclass(frozen=True)
class DegenerationCatalog:
    source: Star
    vertex_bound: int
    complexes: tuple
    invisible: tuple = ()

    def __len__(self) -> int:
        return len(self.complexes)

    def __iter__(self):
        return iter(self.complexes)

    def vertex_stars(self) -> list[Star]:
        return [star_at_vertex(c, i) for c in self.complexes for i in range(len(c.vertices))]

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "vertex_bound": self.vertex_bound,
            "complexes": [c.to_json() for c in self.complexes],
            "invisible_dropped": len(self.invisible),
        }


def one_step_degenerations(s: Star, vertex_bound: int = 2) -> DegenerationCatalog:
    keep, dropped = [], []
    for c in stable_degenerations(s, vertex_bound):
        (keep if is_visible_complex(c) else dropped).append(c)
    order = lambda c: repr(c.combinatorial_key())
    keep.sort(key=order)
    dropped.sort(key=order)
    return DegenerationCatalog(s, vertex_bound, tuple(keep), tuple(dropped))


# -- the 4-valent family -------------------------------------------------------

def four_valent_star(n: int) -> Star:
    """Rays ``(1,0,0), (0,1,0), (1,0,n), (-2,-1,-n)`` with unit weights."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return Star.full_boundary([(1, 0, 0), (0, 1, 0), (1, 0, n), (-2, -1, -n)])


def enumerate_4valent_curves(n: int, case: str) -> list[ChowOneComplex]:
    """Degenerations of :func:`four_valent_star` in the two generic splittings.

    Case ``"I"`` pairs ``(1,0,0)`` with ``(-2,-1,-n)``.  Case ``"II"`` pairs
    ``(0,1,0)`` with ``(-2,-1,-n)``; the remaining two rays either share a
    vertex or sit on the two far corners of a triangle.
    """
    s = four_valent_star(n)
    e1, e2, top, low = 0, 1, 2, 3
    if case == "I":
        splits = [[[e1, low], [e2, top]]]
    elif case == "II":
        splits = [[[e2, low], [e1, top]], [[e2, low], [e1], [top]]]
    else:
        raise ValueError("case must be 'I' or 'II'")
    out = []
    for blocks in splits:
        sums = [_vsum(*(s.weighted_vectors()[i] for i in blk)) for blk in blocks]
        layouts = list(_tree_layouts(sums)) if len(blocks) == 2 else list(_triangle_layouts(sums))
        for layout in layouts:
            c = _build(s, blocks, layout, ())
            if c is not None and is_balanced_complex(c) and is_stable(c):
                out.append(c)
    out.sort(key=lambda c: (len(c.vertices), repr(c.combinatorial_key())))
    return out


# -- smaller stars ---------------------------------------------------------------

def gl3_normal_form(s: Star) -> tuple:
    """Canonical key of a full-boundary star up to translation and GL_3(Z)."""
    if s.geometry.kind is not Kind.FULL_BOUNDARY:
        raise ValueError("GL_3(Z) normal form needs a full-boundary star")
    best = None
    for perm in permutations(s.rays):
        cols = [r.direction for r in perm]
        hnf = tuple(hermite_normal_form([[c[i] for c in cols] for i in range(3)], len(cols)))
        key = (hnf, tuple(r.weight for r in perm))
        if best is None or key < best:
            best = key
    return best + (s.internal_markings,)


def smaller_stars(s: Star, depth: int = 1, vertex_bound: int = 2, up_to_gl3: bool = False) -> list[Star]:
    """Vertex stars reachable by at most ``depth`` rounds of one-step degeneration.

    Stars are identified modulo the translation group of the geometry, or
    modulo translations and GL_3(Z) when ``up_to_gl3`` is set.  The source
    star itself is never reported.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    key = gl3_normal_form if up_to_gl3 else Star.key
    seen = {key(s)}
    found: list[Star] = []
    frontier = deque([(s, 0)])
    while frontier:
        star, level = frontier.popleft()
        if level >= depth:
            continue
        for c in one_step_degenerations(star, vertex_bound):
            for i in range(len(c.vertices)):
                v = star_at_vertex(c, i)
                k = key(v)
                if k in seen:
                    continue
                seen.add(k)
                found.append(v)
                frontier.append((v, level + 1))
    return found

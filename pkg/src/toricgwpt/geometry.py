"""The four elementary tropicalizations in R^3.

Each geometry is stored as a list of *constraints*: a coordinate index ``k``
together with integer linear functionals ``f_i`` on R^3 (not involving
coordinate ``k``), meaning ``p_k >= max_i f_i(p)``.  Every query below
(membership, face lattices, translations, collapsed directions) is derived
from that one representation:

* full boundary: no constraints (all of R^3)
* one non-boundary: ``z >= psi(x, y)``
* two non-boundary: ``y >= psi1(x)`` and ``z >= psi2(x)``
* three non-boundary: ``x, y, z >= 0``

Each constraint also owns one collapsed ray, the direction sent to zero by
the retraction ``R^3 -> Sigma`` across that boundary face.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import floor
from typing import Iterable, NamedTuple, Sequence

from .exact_arith import as_fraction
from .lattice import IntegerMatrix, hermite_normal_form, integer_kernel

__all__ = [
    "Kind",
    "ElementaryGeometry",
    "TranslationGroup",
    "contains_point",
    "translation_group",
    "cone_lattice",
    "collapsed_directions",
    "factoring_functionals",
    "as_point",
]

E = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


class Kind(str, Enum):
    FULL_BOUNDARY = "FullBoundary"
    ONE_NON_BOUNDARY = "OneNonBoundary"
    TWO_NON_BOUNDARY = "TwoNonBoundary"
    THREE_NON_BOUNDARY = "ThreeNonBoundary"


_SUBKINDS = {
    Kind.ONE_NON_BOUNDARY: ("straight", "ruled", "general"),
    Kind.TWO_NON_BOUNDARY: ("straight", "general"),
}

_DEFAULT_PSI = {
    "straight": ((0, 0),),
    "ruled": ((0, 0), (1, 0)),
    "general": ((0, 0), (1, 0), (0, 1)),
}


def as_point(p: Iterable) -> tuple:
    pt = tuple(as_fraction(x) for x in p)
    if len(pt) != 3:
        raise ValueError(f"expected a point of R^3, got {p!r}")
    return pt


def _dot(f: Sequence, p: Sequence):
    return sum(a * b for a, b in zip(f, p))


def _rank(rows: list[tuple]) -> int:
    return len(hermite_normal_form(rows, 3)) if rows else 0


class Constraint(NamedTuple):
    coord: int
    functionals: tuple  # tuple of 3-tuples

    def bound(self, p) -> Fraction:
        return max(_dot(f, p) for f in self.functionals)

    def active(self, p) -> tuple:
        b = self.bound(p)
        return tuple(f for f in self.functionals if _dot(f, p) == b)

    def equations(self, fs: Iterable) -> list[tuple]:
        return [tuple(int(i == self.coord) - f[i] for i in range(3)) for f in fs]


@dataclass(frozen=True)
class ElementaryGeometry:
    kind: Kind
    subkind: str | None = None
    psi: tuple = ()
    psi1: tuple = ()
    psi2: tuple = ()
    collapsed_rays: tuple = field(default=())

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (Kind.FULL_BOUNDARY, Kind.THREE_NON_BOUNDARY):
            if self.subkind is not None or self.psi or self.psi1 or self.psi2:
                raise ValueError(f"{kind.value} carries no subkind or functional data")
        elif kind is Kind.ONE_NON_BOUNDARY:
            if self.psi1 or self.psi2:
                raise ValueError("OneNonBoundary takes psi, not psi1/psi2")
            psi = tuple(tuple(int(x) for x in f) for f in self.psi)
            if not psi:
                psi = _DEFAULT_PSI[self.subkind or "straight"]
            if any(len(f) != 2 for f in psi):
                raise ValueError("OneNonBoundary psi functionals live on R^2: [a, b]")
            object.__setattr__(self, "psi", psi)
            object.__setattr__(self, "subkind", self._check_subkind(self._classify(psi)))
        else:
            if self.psi:
                raise ValueError("TwoNonBoundary takes psi1 and psi2, not psi")
            psi1 = tuple(tuple(int(x) for x in f) for f in self.psi1)
            psi2 = tuple(tuple(int(x) for x in f) for f in self.psi2)
            if not psi1 and not psi2:
                if (self.subkind or "straight") == "straight":
                    psi1, psi2 = ((0,),), ((0,),)
                else:
                    psi1, psi2 = ((0,), (1,)), ((0,),)
            psi1, psi2 = psi1 or ((0,),), psi2 or ((0,),)
            if any(len(f) != 1 for f in psi1 + psi2):
                raise ValueError("TwoNonBoundary psi functionals live on R: [a]")
            object.__setattr__(self, "psi1", psi1)
            object.__setattr__(self, "psi2", psi2)
            c1, c2 = self._classify(psi1), self._classify(psi2)
            found = "straight" if c1 == c2 == "straight" else "general"
            object.__setattr__(self, "subkind", self._check_subkind(found))
        rays = tuple(tuple(int(x) for x in r) for r in self.collapsed_rays)
        if not rays:
            rays = tuple(tuple(-x for x in E[c.coord]) for c in self.constraints)
        if len(rays) != len(self.constraints):
            raise ValueError(f"{kind.value} needs {len(self.constraints)} collapsed rays")
        for r, c in zip(rays, self.constraints):
            if len(r) != 3 or r[c.coord] >= 0:
                raise ValueError(f"collapsed ray {r} must point out of Sigma across its face")
        object.__setattr__(self, "collapsed_rays", rays)

    @staticmethod
    def _classify(functionals: tuple) -> str:
        if all(not any(f) for f in functionals):
            return "straight"
        diffs = [tuple(a - b for a, b in zip(f, functionals[0])) for f in functionals[1:]]
        rank = _rank([d + (0,) * (3 - len(d)) for d in diffs])
        if rank == 0:
            raise ValueError("a linear nonzero psi is straight after a change of coordinates; "
                             "pass it as zero")
        return "ruled" if rank == 1 else "general"

    def _check_subkind(self, found: str) -> str:
        allowed = _SUBKINDS[self.kind]
        if found not in allowed:
            found = "general"
        if self.subkind is not None and self.subkind != found:
            raise ValueError(f"declared subkind {self.subkind!r} but the functionals are {found!r}")
        return found

    @property
    def constraints(self) -> tuple:
        if self.kind is Kind.FULL_BOUNDARY:
            return ()
        if self.kind is Kind.ONE_NON_BOUNDARY:
            return (Constraint(2, tuple((a, b, 0) for a, b in self.psi)),)
        if self.kind is Kind.TWO_NON_BOUNDARY:
            return (Constraint(1, tuple((a, 0, 0) for (a,) in self.psi1)),
                    Constraint(2, tuple((a, 0, 0) for (a,) in self.psi2)))
        return tuple(Constraint(k, ((0, 0, 0),)) for k in range(3))

    # constructors

    @classmethod
    def full_boundary(cls) -> "ElementaryGeometry":
        return cls(Kind.FULL_BOUNDARY)

    @classmethod
    def one_non_boundary(cls, subkind: str | None = None, psi: Iterable = ()) -> "ElementaryGeometry":
        return cls(Kind.ONE_NON_BOUNDARY, subkind, tuple(psi))

    @classmethod
    def two_non_boundary(cls, subkind: str | None = None, psi1: Iterable = (),
                         psi2: Iterable = ()) -> "ElementaryGeometry":
        return cls(Kind.TWO_NON_BOUNDARY, subkind, psi1=tuple(psi1), psi2=tuple(psi2))

    @classmethod
    def three_non_boundary(cls) -> "ElementaryGeometry":
        return cls(Kind.THREE_NON_BOUNDARY)

    # local structure

    def tight_constraints(self, p) -> list[tuple[int, Constraint, tuple]]:
        """(index, constraint, active functionals) for constraints tight at ``p``."""
        out = []
        for idx, c in enumerate(self.constraints):
            if p[c.coord] == c.bound(p):
                out.append((idx, c, c.active(p)))
        return out

    def _face_equations(self, p, direction=None) -> list[tuple]:
        eqs = []
        for _, c, act in self.tight_constraints(p):
            if direction is not None:
                b = max(_dot(f, direction) for f in act)
                if direction[c.coord] > b:
                    continue
                act = tuple(f for f in act if _dot(f, direction) == b)
            eqs.extend(c.equations(act))
        return eqs

    def is_admissible(self, p, v) -> bool:
        """Whether ``p + eps * v`` lies in Sigma for small ``eps > 0``."""
        p = as_point(p)
        for _, c, act in self.tight_constraints(p):
            if v[c.coord] < max(_dot(f, v) for f in act):
                return False
        return True

    def in_recession_cone(self, v) -> bool:
        """Whether ``p + t v`` stays in Sigma for all ``t >= 0`` and all ``p`` in Sigma."""
        return all(v[c.coord] >= c.bound(v) for c in self.constraints)

    def local_lattice(self, p, v) -> list[tuple]:
        """Basis of the face lattice at ``p + eps * v`` for small ``eps > 0``."""
        p = as_point(p)
        if not self.is_admissible(p, v):
            raise ValueError(f"direction {tuple(v)} is not admissible at {p}")
        return _lattice_from_equations(self._face_equations(p, v))

    # serialization

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.subkind is not None:
            out["subkind"] = self.subkind
        if self.kind is Kind.ONE_NON_BOUNDARY:
            out["psi"] = [list(f) for f in self.psi]
        if self.kind is Kind.TWO_NON_BOUNDARY:
            out["psi1"] = [list(f) for f in self.psi1]
            out["psi2"] = [list(f) for f in self.psi2]
        out["collapsed_rays"] = [list(r) for r in self.collapsed_rays]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ElementaryGeometry":
        if not isinstance(data, dict) or "kind" not in data:
            raise ValueError("geometry JSON needs a 'kind' field")
        unknown = set(data) - {"kind", "subkind", "psi", "psi1", "psi2", "collapsed_rays"}
        if unknown:
            raise ValueError(f"unknown geometry fields: {sorted(unknown)}")
        conv = lambda rows: tuple(tuple(int(x) for x in r) for r in rows or ())
        return cls(Kind(data["kind"]), data.get("subkind"), conv(data.get("psi")),
                   conv(data.get("psi1")), conv(data.get("psi2")), conv(data.get("collapsed_rays")))


def _lattice_from_equations(eqs: list[tuple]) -> list[tuple]:
    if not eqs:
        return [E[0], E[1], E[2]]
    return integer_kernel(IntegerMatrix(eqs, 3))


class TranslationGroup(NamedTuple):
    rank: int
    generators: tuple

    def reduce(self, p) -> tuple:
        """Canonical representative of ``p`` modulo the group (a point of R^3)."""
        p = list(as_point(p))
        for g in self.generators:
            c = next(i for i, x in enumerate(g) if x)
            k = floor(p[c] / g[c])
            p = [x - k * y for x, y in zip(p, g)]
        return tuple(p)


def contains_point(g: ElementaryGeometry, p) -> bool:
    p = as_point(p)
    return all(p[c.coord] >= c.bound(p) for c in g.constraints)


def translation_group(g: ElementaryGeometry) -> TranslationGroup:
    """Integral ``w`` with ``w`` and ``-w`` in Sigma (the lineality lattice)."""
    eqs = []
    for c in g.constraints:
        eqs.extend(c.equations(c.functionals))
    gens = tuple(_lattice_from_equations(eqs))
    return TranslationGroup(len(gens), gens)


def cone_lattice(g: ElementaryGeometry, p) -> list[tuple]:
    """Basis of the integral tangent lattice of the face whose interior holds ``p``."""
    p = as_point(p)
    if not contains_point(g, p):
        raise ValueError(f"point {p} lies outside {g.kind.value}")
    return _lattice_from_equations(g._face_equations(p))


def collapsed_directions(g: ElementaryGeometry, p) -> list[tuple]:
    """Collapsed rays adjacent to the face of ``p``.

    A linear functional factors through the local retraction at ``p`` exactly
    when it vanishes on the span of these directions.
    """
    p = as_point(p)
    if not contains_point(g, p):
        raise ValueError(f"point {p} lies outside {g.kind.value}")
    return [g.collapsed_rays[idx] for idx, _, _ in g.tight_constraints(p)]


def factoring_functionals(g: ElementaryGeometry, p) -> list[tuple]:
    """Basis of the integral functionals that factor through the retraction at ``p``."""
    rays = collapsed_directions(g, p)
    if not rays:
        return [E[0], E[1], E[2]]
    return integer_kernel(IntegerMatrix(rays, 3))

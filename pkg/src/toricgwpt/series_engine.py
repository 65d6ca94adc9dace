"""Generating series: partition statistics, degeneration gluing, the closed
forms for linear and principal trivalent stars, and the GW/PT comparison
under ``q = -e^{iu}``.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial, prod
from typing import NamedTuple, Sequence

from .exact_arith import (I, GaussianRational, QForm, TruncatedULaurent, exp_series,
                          series_product, substitute_q_to_u)
from .stars_complexes import StarDiscreteData

__all__ = [
    "Side",
    "PartitionVector",
    "PartitionStats",
    "GWSeries",
    "PTSeries",
    "partition_stats",
    "glue_degeneration",
    "linear_star_series",
    "principal_series",
    "principal_pt",
    "principal_gw",
    "principal_pt_displayed",
    "CheckResult",
    "InsufficientPrecision",
    "compare_correspondence",
    "correspondence_check",
    "Prefactor",
    "fit_prefactor",
    "is_laurent_polynomial",
]

DEFAULT_ORDER = 24
FOURTH_ROOTS = (GaussianRational(1), GaussianRational(-1), I, -I)
MIN_KNOWN = 5


class Side(str, Enum):
    GW = "gw"
    PT = "pt"

    @classmethod
    def coerce(cls, x) -> "Side":
        if isinstance(x, Side):
            return x
        try:
            return cls(str(x).lower())
        except ValueError:
            raise ValueError(f"side must be 'gw' or 'pt', got {x!r}") from None


@dataclass(frozen=True)
class PartitionVector:
    partitions: tuple

    def __post_init__(self):
        parts = []
        for p in self.partitions:
            p = tuple(sorted((int(x) for x in p), reverse=True))
            if not p or p[-1] < 1:
                raise ValueError(f"{p} is not a partition of a positive integer")
            parts.append(p)
        object.__setattr__(self, "partitions", tuple(parts))

    @property
    def sizes(self) -> tuple:
        return tuple(sum(p) for p in self.partitions)

    @property
    def lengths(self) -> tuple:
        return tuple(len(p) for p in self.partitions)

    @property
    def total_size(self) -> int:
        return sum(self.sizes)

    @property
    def total_length(self) -> int:
        return sum(self.lengths)

    @property
    def ell_minus_size(self) -> int:
        return self.total_length - self.total_size

    def __str__(self):
        inner = ",".join("(" + ",".join(map(str, p)) + ("," if len(p) == 1 else "") + ")"
                         for p in self.partitions)
        return f"({inner})"

    @classmethod
    def parse(cls, text) -> "PartitionVector":
        """Accept ``((2,1),(3))``, ``[[2,1],[3]]`` or an already-decoded list."""
        if isinstance(text, PartitionVector):
            return text
        if not isinstance(text, str):
            return cls(tuple(tuple(p) for p in text))
        s = text.strip()
        if not s:
            return cls(())
        s = s.replace("(", "[").replace(")", "]")
        s = re.sub(r",\s*]", "]", s)
        try:
            data = json.loads(s)
        except json.JSONDecodeError:
            raise ValueError(f"cannot parse partition vector {text!r}") from None
        if not isinstance(data, list) or not all(isinstance(p, list) for p in data):
            raise ValueError(f"partition vector {text!r} must be a list of lists")
        return cls(tuple(tuple(p) for p in data))


class PartitionStats(NamedTuple):
    m: int
    aut: int
    sign: int


def partition_stats(mu) -> PartitionStats:
    mu = PartitionVector.parse(mu)
    m = prod(prod(p) for p in mu.partitions)
    aut = prod(factorial(c) for p in mu.partitions for c in Counter(p).values())
    return PartitionStats(m, aut, -1 if mu.ell_minus_size % 2 else 1)


@dataclass(frozen=True)
class GWSeries:
    series: TruncatedULaurent
    data: StarDiscreteData | None = None

    side = Side.GW

    def __str__(self):
        return str(self.series)


@dataclass(frozen=True)
class PTSeries:
    form: QForm
    data: StarDiscreteData | None = None

    side = Side.PT

    def __post_init__(self):
        object.__setattr__(self, "form", self.form.reduce())

    def __str__(self):
        return str(self.form)


def _glued_data(parts: Sequence, mu: PartitionVector) -> StarDiscreteData | None:
    # each glued ray pair removes both copies of the matched divisor contribution
    if any(p.data is None for p in parts):
        return None
    d = sum(p.data.d for p in parts) - 2 * mu.total_size
    ell = sum(p.data.ell_minus_size for p in parts) - 2 * mu.ell_minus_size
    return StarDiscreteData(d, ell)


def glue_degeneration(side, vertex_series: Sequence, mu) -> GWSeries | PTSeries:
    """One term of the degeneration formula for a fixed complex and partition vector."""
    side = Side.coerce(side)
    mu = PartitionVector.parse(mu)
    if not vertex_series:
        raise ValueError("need at least one vertex series")
    want = GWSeries if side is Side.GW else PTSeries
    for v in vertex_series:
        if not isinstance(v, want):
            raise ValueError(f"mixed sides: expected {side.value} series, got {type(v).__name__}")
    m, aut, sign = partition_stats(mu)
    data = _glued_data(vertex_series, mu)
    if side is Side.PT:
        form = QForm.from_q({-mu.total_size: Fraction(sign * m, aut)})
        for v in vertex_series:
            form = form * v.form
        return PTSeries(form, data)
    series = vertex_series[0].series
    for v in vertex_series[1:]:
        series = series_product(series, v.series)
    return GWSeries(series.shift(2 * mu.total_length).scale(Fraction(m, aut)), data)


def linear_star_series(side, d: int, ell: int = 1, order: int = DEFAULT_ORDER) -> GWSeries | PTSeries:
    """Closed-form series of the linear star of degree ``d`` with ``ell`` parts on one side."""
    side = Side.coerce(side)
    if d < 1 or ell < 1:
        raise ValueError("d and ell must be positive")
    data = StarDiscreteData(2 * d, (1 - d) + (ell - d))
    if side is Side.GW:
        if ell > 1:
            return GWSeries(TruncatedULaurent.zero(order), data)
        return GWSeries(TruncatedULaurent.monomial(-2, Fraction(1, d), order), data)
    if ell > 1:
        return PTSeries(QForm.zero(), data)
    return PTSeries(QForm.from_q({d: Fraction((-1) ** (d - 1), d)}), data)


def principal_pt(N: int) -> PTSeries:
    """``q (1 - (-q)^N)``."""
    if N < 1:
        raise ValueError("N must be positive")
    return PTSeries(QForm({Fraction(1): -1, Fraction(N + 1): 1}), StarDiscreteData(N + 2, 1 - N))


def principal_pt_displayed(n: int) -> PTSeries:
    """``q (1 + q)^n``; agrees with :func:`principal_pt` only for ``n = 1``."""
    if n < 1:
        raise ValueError("n must be positive")
    from math import comb
    return PTSeries(QForm.from_q({k + 1: comb(n, k) for k in range(n + 1)}), StarDiscreteData(n + 2, 1 - n))


def principal_gw(N: int, order: int = DEFAULT_ORDER) -> GWSeries:
    """Taylor expansion of ``(2/u^3) sin(N u / 2)`` through ``u^order``."""
    if N < 1:
        raise ValueError("N must be positive")
    coeffs = [Fraction(0)] * max(order + 3, 0)
    half = Fraction(N, 2)
    k = 0
    while 2 * k - 2 <= order:
        coeffs[2 * k] = (-1) ** k * 2 * half ** (2 * k + 1) / factorial(2 * k + 1)
        k += 1
    return GWSeries(TruncatedULaurent(-2, coeffs, order), StarDiscreteData(N + 2, 1 - N))


def principal_series(side, N: int, order: int = DEFAULT_ORDER) -> GWSeries | PTSeries:
    return principal_gw(N, order) if Side.coerce(side) is Side.GW else principal_pt(N)


# -- the correspondence --------------------------------------------------------

class InsufficientPrecision(ValueError):
    """The truncation order leaves too few known coefficients to compare."""


class CheckResult(NamedTuple):
    passed: bool
    first_mismatch_exponent: int | None

    def to_json(self) -> dict:
        return {"pass": self.passed, "first_mismatch_exponent": self.first_mismatch_exponent}


def _pt_side(pt: PTSeries, d: int, order: int) -> TruncatedULaurent:
    return substitute_q_to_u(QForm.monomial(Fraction(-d, 2)) * pt.form, order)


def _gw_side(series: TruncatedULaurent, k: int) -> TruncatedULaurent:
    return series.shift(k).scale((-I) ** k)


def _check_overlap(a: TruncatedULaurent, b: TruncatedULaurent) -> None:
    hi = min(a.order, b.order)
    for side in (a, b):
        if hi - side.min_exponent + 1 < MIN_KNOWN:
            raise InsufficientPrecision(
                f"only {max(hi - side.min_exponent + 1, 0)} known coefficients overlap; need {MIN_KNOWN}")


def compare_correspondence(pt: PTSeries, gw: GWSeries, d: int, sigma: int,
                           order: int = DEFAULT_ORDER) -> CheckResult:
    """Compare ``(-q)^{-d/2} pt`` with ``(-iu)^{d+sigma} gw`` after ``q = -e^{iu}``."""
    lhs, rhs = _pt_side(pt, d, order), _gw_side(gw.series, d + sigma)
    _check_overlap(lhs, rhs)
    k = lhs.first_mismatch(rhs)
    return CheckResult(k is None, k)


def correspondence_check(pt: PTSeries, gw: GWSeries, d: int, sigma: int,
                         order: int = DEFAULT_ORDER) -> bool:
    return compare_correspondence(pt, gw, d, sigma, order).passed


class Prefactor(NamedTuple):
    d: int
    sigma: int
    unit: GaussianRational

    def to_json(self) -> dict:
        return {"d": self.d, "sigma": self.sigma, "unit": str(self.unit)}


def fit_prefactor(pt: PTSeries, gw: GWSeries, order: int = DEFAULT_ORDER,
                  bound: int = 40) -> Prefactor | None:
    """Unique ``(d, sigma, unit)`` with ``unit (-q)^{-d/2} pt = (-iu)^{d+sigma} gw``, if any."""
    S = substitute_q_to_u(pt.form, order).strip()
    G = gw.series.strip()
    vs, vg = S.valuation(), G.valuation()
    if vs is None or vg is None:
        return None
    k = vs - vg
    R = _gw_side(G, k)
    hi = min(S.order, R.order)
    if hi - vs + 1 < MIN_KNOWN:
        raise InsufficientPrecision(f"only {max(hi - vs + 1, 0)} known coefficients overlap; need {MIN_KNOWN}")
    sc = S.coefficients
    hits = []
    for d in range(-bound, bound + 1):
        sigma = k - d
        if abs(sigma) > bound:
            continue
        unit = R[vs] / sc[0]
        if unit not in FOURTH_ROOTS:
            continue
        # coefficients of e^{-idu/2} S, compared lazily so most d fail after a term or two
        ec = exp_series(GaussianRational(0, Fraction(-d, 2)), hi - vs).coefficients
        if all(unit * sum((ec[i] * sc[j - i] for i in range(j + 1) if sc[j - i]), GaussianRational(0))
               == R[vs + j] for j in range(hi - vs + 1)):
            hits.append(Prefactor(d, sigma, unit))
    return hits[0] if len(hits) == 1 else None


def is_laurent_polynomial(f) -> bool:
    if isinstance(f, PTSeries):
        f = f.form
    return not f.reduce().denominator

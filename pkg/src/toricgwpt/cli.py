"""JSON command-line front end.

Every subcommand prints one object ``{"status", "payload", "diagnostics"}``.
Exit status is 0 on success, 1 for bad input and 2 for internal failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable, NamedTuple

from .exact_arith import QForm, TruncatedULaurent
from .geometry import translation_group
from .poset_enum import enumerate_4valent_curves, one_step_degenerations, smaller_stars
from .series_engine import (GWSeries, InsufficientPrecision, PTSeries, Side, compare_correspondence,
                            fit_prefactor, glue_degeneration, is_laurent_polynomial,
                            linear_star_series, principal_series)
from .stars_complexes import (ChowOneComplex, Star, asymptotic_star, is_balanced, is_visible_complex,
                              is_visible_star, multiplicity_and_normalize, stabilize)

__all__ = ["CommandResult", "UserError", "run_command", "main"]


class UserError(Exception):
    pass


class CommandResult(NamedTuple):
    status: str
    payload: Any
    diagnostics: list

    @property
    def exit_code(self) -> int:
        if self.status == "ok":
            return 0
        return 2 if any(d.startswith("internal") for d in self.diagnostics) else 1

    def to_json(self) -> str:
        return json.dumps({"status": self.status, "payload": self.payload,
                           "diagnostics": self.diagnostics}, sort_keys=True)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UserError(f"usage: {message}")

    def exit(self, status=0, message=None):
        raise UserError(message or "help requested")


# -- input handling ------------------------------------------------------------

def _read_input(args) -> Any:
    path = getattr(args, "input", None)
    try:
        if path and path != "-":
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
    except OSError as exc:
        raise UserError(f"cannot read input: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UserError(f"malformed JSON input: {exc}") from None
    # accept the output envelope of another subcommand unchanged
    if isinstance(data, dict) and set(data) == {"status", "payload", "diagnostics"}:
        data = data["payload"]
    return data


def _each(data, fn: Callable):
    return [fn(x) for x in data] if isinstance(data, list) else fn(data)


def _star(data) -> Star:
    if isinstance(data, dict) and "source" in data and "complexes" in data:
        data = data["source"]
    return Star.from_json(data)


def _complex(data) -> ChowOneComplex:
    return ChowOneComplex.from_json(data)


def _parse_side_text(side: Side, text):
    if isinstance(text, dict):
        text = text.get("series", text.get("form"))
    if not isinstance(text, str):
        raise UserError("series must be given in canonical text form")
    if side is Side.PT:
        return PTSeries(QForm.parse(text))
    return GWSeries(TruncatedULaurent.parse(text))


def _series_pair(data) -> tuple[PTSeries, GWSeries]:
    if not isinstance(data, dict) or "pt" not in data or "gw" not in data:
        raise UserError("expected an object with 'pt' and 'gw' series")
    return _parse_side_text(Side.PT, data["pt"]), _parse_side_text(Side.GW, data["gw"])


def _data_note(s) -> list:
    if s.data is None:
        return []
    return [f"d={s.data.d}", f"ell_minus_size={s.data.ell_minus_size}"]


# -- handlers ----------------------------------------------------------------------

def _star_normalize(args, data, diag):
    def one(x):
        s = _star(x)
        if args.trivalent:
            norm = multiplicity_and_normalize(s)
            if not norm.exact:
                diag.append("no unimodular map reaches the standard rows; using the Smith transform")
            s = s.translate([-c for c in s.base]).transform(norm.U)
        base = translation_group(s.geometry).reduce(s.base)
        return Star(s.geometry, base, tuple(sorted(s.rays)), s.internal_markings).to_json()
    return _each(data, one)


def _star_balance(args, data, diag):
    return _each(data, lambda x: is_balanced(_star(x)))


def _star_visible(args, data, diag):
    return _each(data, lambda x: is_visible_star(_star(x)))


def _star_multiplicity(args, data, diag):
    def one(x):
        r = multiplicity_and_normalize(_star(x))
        out = {"n": r.n, "m": r.m, "N": r.N}
        if args.with_transform:
            out.update(U=[list(row) for row in r.U.entries], exact=r.exact, order=list(r.order))
        return out
    return _each(data, one)


def _complex_stabilize(args, data, diag):
    return _each(data, lambda x: stabilize(_complex(x)).to_json())


def _complex_visible(args, data, diag):
    return _each(data, lambda x: is_visible_complex(_complex(x)))


def _complex_asymptotic(args, data, diag):
    return _each(data, lambda x: asymptotic_star(_complex(x)).to_json())


def _poset_degenerations(args, data, diag):
    def one(x):
        cat = one_step_degenerations(_star(x), args.vertex_bound)
        if cat.invisible:
            diag.append(f"dropped {len(cat.invisible)} stable but invisible complexes")
        return cat.to_json()
    return _each(data, one)


def _poset_smaller(args, data, diag):
    return _each(data, lambda x: [s.to_json() for s in
                                  smaller_stars(_star(x), args.depth, args.vertex_bound, args.gl3)])


def _poset_curves4v(args, data, diag):
    return [c.to_json() for c in enumerate_4valent_curves(args.n, args.case)]


def _series_principal(args, data, diag):
    s = principal_series(args.side, args.mult, args.order)
    diag.extend(_data_note(s))
    return str(s)


def _series_linear(args, data, diag):
    s = linear_star_series(args.side, args.d, args.ell, args.order)
    diag.extend(_data_note(s))
    return str(s)


def _series_glue(args, data, diag):
    side = Side.coerce(args.side)
    if isinstance(data, dict):
        data = data.get("series")
    if not isinstance(data, list):
        raise UserError("expected a list of vertex series")
    return str(glue_degeneration(side, [_parse_side_text(side, x) for x in data], args.mu))


def _series_check(args, data, diag):
    pt, gw = _series_pair(data)
    return compare_correspondence(pt, gw, args.d, args.sigma, args.order).to_json()


def _series_fit(args, data, diag):
    pt, gw = _series_pair(data)
    fit = fit_prefactor(pt, gw, args.order)
    return None if fit is None else fit.to_json()


def _series_laurent(args, data, diag):
    def one(x):
        if isinstance(x, dict):
            x = x.get("form", x.get("pt"))
        if not isinstance(x, str):
            raise UserError("expected a rational form in canonical text")
        f = QForm.parse(x)
        return {"is_laurent_polynomial": is_laurent_polynomial(f), "reduced": str(f.reduce())}
    return _each(data, one)


# -- parser ------------------------------------------------------------------------------

def _build_parser() -> _Parser:
    p = _Parser(prog="toricgwpt", description="Exact star, complex and series computations.")
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(group, name, handler, reads=True):
        sp = group.add_parser(name)
        sp.set_defaults(handler=handler, reads=reads)
        if reads:
            sp.add_argument("input", nargs="?", help="JSON file (default: standard input)")
        return sp

    star = groups.add_parser("star").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    leaf(star, "normalize", _star_normalize).add_argument(
        "--trivalent", action="store_true", help="apply the unimodular normalizing transform")
    leaf(star, "balance", _star_balance)
    leaf(star, "visible", _star_visible)
    leaf(star, "multiplicity", _star_multiplicity).add_argument("--with-transform", action="store_true")

    cx = groups.add_parser("complex").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    leaf(cx, "stabilize", _complex_stabilize)
    leaf(cx, "visible", _complex_visible)
    leaf(cx, "asymptotic-star", _complex_asymptotic)

    poset = groups.add_parser("poset").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    leaf(poset, "degenerations", _poset_degenerations).add_argument(
        "--vertex-bound", type=int, default=2, choices=(2, 3))
    sm = leaf(poset, "smaller", _poset_smaller)
    sm.add_argument("--depth", type=int, default=1)
    sm.add_argument("--vertex-bound", type=int, default=2, choices=(2, 3))
    sm.add_argument("--gl3", action="store_true", help="identify stars up to GL_3(Z)")
    cv = leaf(poset, "curves4v", _poset_curves4v, reads=False)
    cv.add_argument("--n", type=int, required=True)
    cv.add_argument("--case", choices=("I", "II"), required=True)

    series = groups.add_parser("series").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    pr = leaf(series, "principal", _series_principal, reads=False)
    pr.add_argument("--side", choices=("gw", "pt"), required=True)
    pr.add_argument("--mult", type=int, required=True)
    pr.add_argument("--order", type=int, default=24)
    ln = leaf(series, "linear", _series_linear, reads=False)
    ln.add_argument("--side", choices=("gw", "pt"), required=True)
    ln.add_argument("--d", type=int, required=True)
    ln.add_argument("--ell", type=int, default=1)
    ln.add_argument("--order", type=int, default=24)
    gl = leaf(series, "glue", _series_glue)
    gl.add_argument("--side", choices=("gw", "pt"), required=True)
    gl.add_argument("--mu", required=True, help='partition vector, e.g. "((2,1),(3))"')
    ck = leaf(series, "check", _series_check)
    ck.add_argument("--d", type=int, required=True)
    ck.add_argument("--sigma", type=int, required=True)
    ck.add_argument("--order", type=int, default=24)
    leaf(series, "fit", _series_fit).add_argument("--order", type=int, default=24)
    leaf(series, "is-laurent-poly", _series_laurent)
    return p


def run_command(argv: list[str]) -> CommandResult:
    diag: list[str] = []
    try:
        args = _build_parser().parse_args(argv)
        data = _read_input(args) if args.reads else None
        payload = args.handler(args, data, diag)
        return CommandResult("ok", payload, diag)
    except InsufficientPrecision as exc:
        return CommandResult("error", None, diag + [f"insufficient precision: {exc}"])
    except (UserError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}"
        return CommandResult("error", None, diag + [msg])
    except Exception as exc:  # invariant failure inside the library
        return CommandResult("error", None, diag + [f"internal error: {type(exc).__name__}: {exc}"])


def main(argv: list[str] | None = None) -> int:
    result = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(result.to_json() + "\n")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

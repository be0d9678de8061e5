"""Command-line front end: ``parhiggs <subcommand> [options] [--format text|json|csv]``.

Exit status is 0 on success, 1 on a validation error (including malformed
arguments) and 2 on a regime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

import yaml

from parhiggs import components, higgs, parabolic, spectral, vgeom
from parhiggs.errors import ParhiggsError, RegimeError, ValidationError
from parhiggs.rational import format_rational, parse_rational, rational_to_json

EXIT_OK, EXIT_VALIDATION, EXIT_REGIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """argparse reports usage errors as exit 2, which is reserved for regime errors here."""

    def error(self, message: str):  # type: ignore[override]
        raise ValidationError(f"{self.prog}: {message}")


# ------------------------------------------------------------------ parsing


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"not an integer: {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(_int(part) for part in text.split(","))


def _signature(args) -> vgeom.OrbifoldSignature:
    return vgeom.OrbifoldSignature(args.g, _int_list(args.orders))


def _line(args, sig: vgeom.OrbifoldSignature, degree: int, isotropy: str | None) -> vgeom.LineVBundle:
    iso = _int_list(isotropy) if isotropy is not None else (0,) * sig.s
    return vgeom.LineVBundle(sig, degree, iso)


def _point_groups(text: str) -> list[list[Fraction]]:
    """``"1/3,2/3;0,1/2"`` -> one weight multiset per marked point."""
    text = text.strip()
    if not text:
        return []
    return [[parse_rational(w) for w in group.split(",") if w.strip()] for group in text.split(";")]


def _bundle(args) -> parabolic.ParabolicBundleData:
    if args.bundle is not None:
        try:
            obj = json.loads(Path(args.bundle).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read bundle file {args.bundle}: {exc}") from None
        return parabolic.bundle_from_json(obj)
    if args.rank is None or args.degree is None:
        raise ValidationError("give --bundle FILE or both --rank and --degree")
    points = tuple(parabolic.PointWeights.from_multiset(ws) for ws in _point_groups(args.weights))
    return parabolic.ParabolicBundleData(args.rank, args.degree, points)


def _numerator_groups(text: str | None) -> list[list[int]] | None:
    if text is None:
        return None
    return [list(_int_list(group)) for group in text.split(";")]


# ------------------------------------------------------------------ handlers


def cmd_pardeg(args) -> dict:
    b = _bundle(args)
    return {"bundle": b, "pardeg": b.pardeg, "slope": b.slope}


def cmd_dual(args) -> dict:
    b = parabolic.dual(_bundle(args))
    return {"bundle": b, "pardeg": b.pardeg}


def cmd_tensor(args) -> dict:
    b = _bundle(args)
    groups = _point_groups(args.line_weights)
    if len(groups) != b.s or any(len(ws) != 1 for ws in groups):
        raise ValidationError(f"--line-weights needs exactly one weight at each of the {b.s} points")
    line = parabolic.parabolic_line(args.line_degree, [ws[0] for ws in groups])
    t = parabolic.tensor_line(b, line)
    return {"bundle": t, "pardeg": t.pardeg}


def _line_json(line: vgeom.LineVBundle) -> dict:
    return {**line.to_json(), "v_degree": line.v_degree}


def cmd_vpic(args) -> dict:
    sig = _signature(args)
    line = _line(args, sig, args.degree, args.isotropy)
    out: dict[str, Any] = {
        "signature": sig.to_json(),
        "line": _line_json(line),
        "inverse": _line_json(line.inverse()),
        "picard_components": vgeom.picard_component_count(sig),
    }
    if args.power is not None:
        out["power"] = _line_json(line**args.power)
    if args.other_degree is not None:
        other = _line(args, sig, args.other_degree, args.other_isotropy)
        out["tensor"] = _line_json(line * other)
    return out


def cmd_rr(args) -> dict:
    sig = _signature(args)
    return {"euler_characteristic": vgeom.euler_characteristic(_line(args, sig, args.degree, args.isotropy), sig)}


def cmd_cohom(args) -> dict:
    sig = _signature(args)
    h1, h2 = vgeom.z2_cohomology_ranks(sig)
    mv = vgeom.mv_alternating_check(sig)
    return {
        "h1": h1,
        "h2": h2,
        "mayer_vietoris": {
            "terms": [{"term": name, "rank": rank} for name, rank in mv.terms],
            "alternating_sum": mv.alternating_sum,
            "ok": mv.ok,
        },
    }


def cmd_sqrt(args) -> dict:
    sig = _signature(args)
    roots = vgeom.sqrt_solutions(vgeom.LineVBundle.canonical_kd(sig), sig)
    return {
        "target": vgeom.LineVBundle.canonical_kd(sig).to_json(),
        "jacobian_exponent": roots.jacobian_exponent,
        "total": roots.total,
        "diagnostic": roots.diagnostic,
        "rows": [r.to_json() for r in roots.solutions],
    }


def cmd_spectral(args) -> dict:
    return spectral.spectral_cover_data(_signature(args), args.n, args.twist_degree).to_json()


def cmd_hitchin(args) -> dict:
    sig = _signature(args)
    return {
        "base_dim": spectral.hitchin_base_dim(sig.genus, sig.s, args.n, args.strong),
        "strong": args.strong,
        "fiber_components": spectral.hitchin_fiber_components(sig, args.n),
    }


def cmd_prym(args) -> dict:
    return spectral.prym_data(_signature(args), args.twist_degree).to_json()


def cmd_toledo(args) -> dict:
    report = higgs.toledo_report(args.n, args.g, args.s, parse_rational(args.tau))
    return {"tau": report.tau, "bound": report.bound, "maximal": report.maximal}


def _shape(shape) -> list | None:
    return None if shape is None else [list(row) for row in shape]


def cmd_minima(args) -> dict:
    if args.n == 2:
        if args.pardeg is None:
            raise ValidationError("--pardeg is required for n = 2")
        verdict = higgs.classify_sp4(args.g, args.s, parse_rational(args.pardeg), args.beta == "present")
        return {
            "is_minimum": verdict.is_minimum,
            "case": verdict.case.value,
            "index": verdict.index,
            "beta_shape": _shape(verdict.beta_shape),
            "gamma_shape": _shape(verdict.gamma_shape),
        }
    sign, exponents = higgs.minima_decomposition_exponents(args.n)
    degrees = higgs.minima_decomposition_sp2n(args.n, args.g, args.s)
    return {
        "line_sign": sign,
        "exponents": list(exponents),
        "summand_pardegs": list(degrees),
        "total": sum(degrees, Fraction(0)),
        "toledo_bound": higgs.toledo_bound(args.n, args.g, args.s),
    }


def cmd_count(args) -> dict:
    return components.component_report(_signature(args), args.n, args.mode, _numerator_groups(args.weights))


def cmd_families(args) -> dict:
    sig = _signature(args)
    closed = components.family_counts(sig, args.n, args.mode)
    enumerated = components.enumeration_family_counts(sig, args.n, args.mode, _numerator_groups(args.weights))
    return {"closed_form": closed.to_json(), "enumeration": enumerated.to_json(), "agrees": closed == enumerated}


def cmd_enumerate(args) -> dict:
    classes = components.enumerate_invariant_classes(
        _signature(args), args.n, args.mode, _numerator_groups(args.weights)
    )
    return {"count": len(classes), "rows": [c.to_json() for c in classes]}


# ------------------------------------------------------------------ sweep

_RANGE_AXES = ("g", "s", "orders", "n")


def _axis_range(config: dict, name: str) -> range:
    bounds = config.get(name)
    if not isinstance(bounds, dict) or set(bounds) != {"from", "to"}:
        raise ValidationError(f"sweep axis {name!r} must be {{from: int, to: int}}")
    lo, hi = bounds["from"], bounds["to"]
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (lo, hi)) or lo > hi:
        raise ValidationError(f"sweep axis {name!r} needs integers with from <= to, got {bounds!r}")
    return range(lo, hi + 1)


def load_sweep_config(path: str | Path) -> dict:
    try:
        config = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ValidationError(f"cannot read sweep config {path}: {exc}") from None
    if not isinstance(config, dict):
        raise ValidationError("sweep config must be a mapping of axes")
    unknown = set(config) - set(_RANGE_AXES) - {"mode"}
    if unknown:
        raise ValidationError(f"unknown sweep axes: {sorted(unknown)}")
    axes = {name: _axis_range(config, name) for name in _RANGE_AXES}
    modes = config.get("mode", [components.Mode.WEIGHT_TYPE.value])
    if not isinstance(modes, list) or not modes:
        raise ValidationError("sweep axis 'mode' must be a non-empty list")
    axes["mode"] = [components.Mode(m) if m in {x.value for x in components.Mode} else _bad_mode(m) for m in modes]
    return axes


def _bad_mode(m) -> components.Mode:
    raise ValidationError(f"unknown mode {m!r}")


def sweep_cells(axes: dict) -> list[tuple[int, tuple[int, ...], int, components.Mode]]:
    """Admissible grid cells in grid order.

    Orders run over non-decreasing tuples, one per multiset. Cells outside the
    counting regime are dropped, as are the non-default modes for n >= 3,
    where the count does not depend on the mode.
    """
    cells = []
    for g in axes["g"]:
        for s in axes["s"]:
            for orders in itertools.combinations_with_replacement(axes["orders"], s):
                sig = vgeom.OrbifoldSignature(g, orders)
                for n in axes["n"]:
                    for mode in axes["mode"]:
                        if n >= 3 and mode is not components.Mode.WEIGHT_TYPE:
                            continue
                        try:
                            components.check_regime(sig, n, mode)
                        except RegimeError:
                            continue
                        cells.append((g, orders, n, mode))
    return cells


def sweep_row(cell: tuple[int, tuple[int, ...], int, components.Mode]) -> dict:
    g, orders, n, mode = cell
    sig = vgeom.OrbifoldSignature(g, orders)
    closed, expression = components.closed_form(sig, n, mode)
    enumerated = components.enumeration_count(sig, n, mode)
    return {
        "g": g,
        "s": len(orders),
        "orders": list(orders),
        "n": n,
        "mode": mode.value,
        "closed_form": closed,
        "enumeration": enumerated,
        "agrees": closed == enumerated and components.component_report(sig, n, mode)["enumeration_agrees"],
        "formula": expression,
    }


def run_sweep(axes: dict, jobs: int = 1) -> list[dict]:
    cells = sweep_cells(axes)
    if jobs <= 1:
        return [sweep_row(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(sweep_row, cells))


def cmd_sweep(args) -> dict:
    if args.jobs < 1:
        raise ValidationError("--jobs must be at least 1")
    rows = run_sweep(load_sweep_config(args.config), args.jobs)
    return {"cells": len(rows), "all_agree": all(r["agrees"] for r in rows), "rows": rows}


# ------------------------------------------------------------------ rendering


def _to_json(value):
    if isinstance(value, parabolic.ParabolicBundleData):
        return parabolic.bundle_to_json(value)
    if isinstance(value, Fraction):
        return rational_to_json(value)
    if isinstance(value, dict):
        return {k: _to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_json(v) for v in value]
    return value


def _scalar_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_scalar_text(v) for v in value)
    return str(value)


def _bundle_text(b: parabolic.ParabolicBundleData) -> dict:
    weights = ";".join(",".join(format_rational(w) for w in p.expanded()) for p in b.points)
    return {"rank": b.rank, "degree": b.degree, "weights": weights}


def _is_rational_json(value) -> bool:
    return isinstance(value, dict) and set(value) == {"num", "den"}


def _flatten(record: dict, prefix: str = "") -> list[tuple[str, str]]:
    out = []
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, parabolic.ParabolicBundleData):
            value = _bundle_text(value)
        if _is_rational_json(value):
            value = Fraction(value["num"], value["den"])
        if isinstance(value, dict):
            out.extend(_flatten(value, name + "."))
        elif isinstance(value, (list, tuple)) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                out.extend(_flatten(item, f"{name}.{i}."))
        else:
            out.append((name, _scalar_text(value)))
    return out


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_to_json(payload), sort_keys=True, indent=2) + "\n"
    rows = payload.get("rows")
    head = {k: v for k, v in payload.items() if k != "rows"}
    if fmt == "csv":
        table = [dict(_flatten(r)) for r in rows] if rows is not None else [dict(_flatten(head))]
        columns: list[str] = []
        for r in table:
            columns.extend(c for c in r if c not in columns)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(table)
        return buf.getvalue()
    pairs = _flatten(head)
    if rows is None and len(pairs) == 1:
        return pairs[0][1] + "\n"
    lines = [f"{k}: {v}" for k, v in pairs]
    if rows is not None:
        table = [dict(_flatten(r)) for r in rows]
        columns = []
        for r in table:
            columns.extend(c for c in r if c not in columns)
        if columns:
            cells = [columns] + [[r.get(c, "") for c in columns] for r in table]
            widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
            lines.extend("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells)
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ parser


def _add_signature(p: argparse.ArgumentParser) -> None:
    p.add_argument("--g", type=_int, required=True, help="genus of the underlying curve")
    p.add_argument("--orders", default="", help="comma-separated isotropy orders m_i")


def _add_bundle(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bundle", help="JSON file with a parabolic bundle")
    p.add_argument("--rank", type=_int)
    p.add_argument("--degree", type=_int)
    p.add_argument("--weights", default="", help="weights per point, e.g. '1/3,2/3;0,1/2'")


def _add_counting(p: argparse.ArgumentParser) -> None:
    _add_signature(p)
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--mode", default="weight-type", choices=[m.value for m in components.Mode])
    p.add_argument("--weights", help="weight numerators per point for non-reduced mode, e.g. '1,3;1'")


HANDLERS: dict[str, Callable[[argparse.Namespace], dict]] = {}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parhiggs", description="Invariants of parabolic Sp(2n,R)-Higgs moduli.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        HANDLERS[name] = handler
        return sub.add_parser(name, parents=[common], help=help_text)

    _add_bundle(add("pardeg", cmd_pardeg, "parabolic degree and slope"))
    _add_bundle(add("dual", cmd_dual, "parabolic dual"))
    p = add("tensor", cmd_tensor, "tensor with a parabolic line bundle")
    _add_bundle(p)
    p.add_argument("--line-degree", type=_int, required=True)
    p.add_argument("--line-weights", default="", help="one weight per point, e.g. '1/2;1/3'")

    p = add("vpic", cmd_vpic, "Picard V-group arithmetic")
    _add_signature(p)
    p.add_argument("--degree", type=_int, required=True)
    p.add_argument("--isotropy")
    p.add_argument("--power", type=_int)
    p.add_argument("--other-degree", type=_int)
    p.add_argument("--other-isotropy")

    p = add("rr", cmd_rr, "Riemann-Roch for a line V-bundle")
    _add_signature(p)
    p.add_argument("--degree", type=_int, required=True)
    p.add_argument("--isotropy")

    _add_signature(add("cohom", cmd_cohom, "Z/2 cohomology ranks and Mayer-Vietoris check"))
    _add_signature(add("sqrt", cmd_sqrt, "square roots of K(D)"))

    for name, handler, text in (
        ("spectral", cmd_spectral, "spectral cover data"),
        ("prym", cmd_prym, "Prym data of a double cover"),
    ):
        p = add(name, handler, text)
        _add_signature(p)
        if name == "spectral":
            p.add_argument("--n", type=_int, required=True)
        p.add_argument("--twist-degree", type=_int)

    p = add("hitchin", cmd_hitchin, "Hitchin base dimension and fiber components")
    _add_signature(p)
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--strong", action="store_true")

    p = add("toledo", cmd_toledo, "Toledo invariant against its bound")
    for flag in ("--n", "--g", "--s"):
        p.add_argument(flag, type=_int, required=True)
    p.add_argument("--tau", required=True)

    p = add("minima", cmd_minima, "minima classification and decompositions")
    for flag in ("--n", "--g", "--s"):
        p.add_argument(flag, type=_int, required=True)
    p.add_argument("--pardeg", help="parabolic degree of V (n = 2)")
    p.add_argument("--beta", choices=["present", "absent"], default="present")

    _add_counting(add("count", cmd_count, "connected component count"))
    _add_counting(add("families", cmd_families, "family decomposition of the count"))
    _add_counting(add("enumerate", cmd_enumerate, "list every invariant class"))

    p = add("sweep", cmd_sweep, "closed form against enumeration over a grid")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=_int, default=1)
    return parser


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Execute one request; returns ``(exit_status, stdout, stderr)``."""
    try:
        args = build_parser().parse_args(list(argv))
        payload = HANDLERS[args.subcommand](args)
        return EXIT_OK, render(payload, args.format), ""
    except RegimeError as exc:
        return EXIT_REGIME, "", f"regime error: {exc}\n"
    except ParhiggsError as exc:
        return EXIT_VALIDATION, "", f"error: {exc}\n"


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        build_parser().parse_args(list(argv))
    status, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    raise SystemExit(main())

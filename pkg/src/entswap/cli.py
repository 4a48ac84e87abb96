"""Command line interface: single-point evaluation, scans, verification.

Subcommands:

* ``point``   -- evaluate one (z, u, directions, Bell state) and print the
  amplitudes, weight, and concurrence;
* ``sweep``   -- run one of the standard scans (``fig2``/``fig3``/``fig4``)
  or a ``custom`` scan with explicit detector directions, streaming CSV or
  JSON;
* ``verify``  -- run the first-principles oracle against the closed forms on
  a grid and cross-check the analytic time integrals against adaptive
  quadrature.

Output conventions: CSV is UTF-8 with ``#``-prefixed metadata lines, then a
column header, then rows; numbers are printed with 9 significant digits and a
decimal point regardless of locale; undefined concurrences are empty cells.
JSON carries one object with ``meta`` and ``records`` holding the same
numeric content.  Angles are accepted in radians only.

Exit codes: 0 success; 1 usage error; 2 verification failure; 3 the result
contains only undefined concurrences (no events in the requested channel).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .amplitudes import (BellKind, DimensionlessPoint, closed_form_amplitudes, relative_weight)
from .kinematics import Direction, fig1_preset
from .oracle import (compare_to_closed_form, time_integral_f, time_integral_f_quadrature,
                     time_integral_g, time_integral_g_quadrature)
from .sweep import SweepKind, SweepRecord, SweepSpec, evaluate_point, run_sweep

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_NO_EVENTS = 3

SWEEP_COLUMNS = ("sweep_coord", "z", "u", "x", "j", "h_plus", "h_minus",
                 "abs_f_over_g", "concurrence", "causal_class")
POINT_COLUMNS = ("z", "u", "x", "j", "h_plus", "h_minus", "f", "g", "n_squared",
                 "abs_f_over_g", "concurrence", "causal_class")

# fixed (a, b, u) spot checks for the ordered integral, covering the three
# singular branch lines a = 0, b = 0, a + b = 0 and generic oscillation
_QUAD_CHECKS_F = ((2.0, 0.0, 1.0), (0.0, 0.0, 3.0), (1e-5, 2.0, 3.0),
                  (-3.0, 3.0, 2.0), (0.5, -0.5, 4.0), (7.0, 3.0, 0.1))
_QUAD_CHECKS_G = ((0.0, 0.0, 2.0), (1.0, 0.0, 2.0), (1.3, -0.7, 5.0))


class UsageError(Exception):
    """Bad command line input; mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".9g")
    if hasattr(value, "value"):  # enums
        return str(value.value)
    return str(value)


def _json_value(value):
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, float):
        # round-trips the 9-significant-digit CSV representation exactly
        return float(format(value, ".9g"))
    if hasattr(value, "value"):
        return value.value
    return value


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"{flag}: expected a comma-separated list of numbers, got {text!r}") from exc
    if not values:
        raise UsageError(f"{flag}: empty list")
    return values


def _parse_range(text: str, flag: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"{flag}: expected start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"{flag}: expected start:stop:count, got {text!r}") from exc
    if count < 2:
        raise UsageError(f"{flag}: count must be at least 2 (both endpoints are included)")
    if not start < stop:
        raise UsageError(f"{flag}: start must be below stop")
    return start, stop, count


def _parse_bell(label: str) -> BellKind:
    try:
        return BellKind.from_label(label)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _directions_from_args(args: argparse.Namespace) -> tuple[Direction, Direction]:
    angles = (args.theta_k, args.phi_k, args.theta_k2, args.phi_k2)
    given = [a for a in angles if a is not None]
    if given and len(given) != 4:
        raise UsageError("give all four of --theta-k --phi-k --theta-k2 --phi-k2, or none")
    if given:
        if args.preset is not None:
            raise UsageError("--preset conflicts with explicit angles")
        try:
            return (Direction(theta=args.theta_k, phi=args.phi_k),
                    Direction(theta=args.theta_k2, phi=args.phi_k2))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return fig1_preset()


def _direction_meta(dk: Direction, dk2: Direction) -> dict[str, str]:
    return {
        "theta_k": _format_value(dk.theta), "phi_k": _format_value(dk.phi),
        "theta_k2": _format_value(dk2.theta), "phi_k2": _format_value(dk2.phi),
    }


def _write_text(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    try:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out_path}: {exc}") from exc


def _emit_rows(rows: list[dict], columns: tuple[str, ...], meta: dict[str, str],
               fmt: str, out_path: str | None) -> None:
    if fmt == "csv":
        lines = [f"# {key}={value}" for key, value in meta.items()]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_format_value(row[c]) for c in columns))
        _write_text("\n".join(lines) + "\n", out_path)
    else:
        payload = {
            "meta": dict(meta),
            "records": [{c: _json_value(row[c]) for c in columns} for row in rows],
        }
        _write_text(json.dumps(payload, indent=2) + "\n", out_path)


def _record_row(record: SweepRecord, with_seconds: bool) -> dict:
    row = {
        "sweep_coord": record.sweep_coord, "z": record.z, "u": record.u, "x": record.x,
        "j": record.j, "h_plus": record.h_plus, "h_minus": record.h_minus,
        "abs_f_over_g": record.abs_f_over_g, "concurrence": record.concurrence,
        "causal_class": record.causal_class,
    }
    if with_seconds:
        row["t_seconds"] = record.t_seconds
    return row


def _sweep_columns(with_seconds: bool) -> tuple[str, ...]:
    return SWEEP_COLUMNS + ("t_seconds",) if with_seconds else SWEEP_COLUMNS


def _add_common_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default csv)")
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="output file (default standard output)")
    parser.add_argument("--omega", type=float, default=None, metavar="RAD_PER_S",
                        help="transition frequency; adds a t_seconds column")


def _add_direction_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", choices=("fig1",), default=None,
                        help="named detector geometry (default when no angles are given)")
    for flag in ("--theta-k", "--phi-k", "--theta-k2", "--phi-k2"):
        parser.add_argument(flag, type=float, default=None, metavar="RAD")


def build_parser() -> _Parser:
    parser = _Parser(prog="entswap", description=__doc__.splitlines()[0])
    subparsers = parser.add_subparsers(dest="command", required=True)

    point = subparsers.add_parser("point", help="evaluate a single parameter point")
    point.add_argument("--z", type=float, required=True, help="separation Omega L / c")
    point.add_argument("--u", type=float, required=True, help="interaction time Omega t")
    point.add_argument("--bell", default="psi+", help="Bell state: psi+ psi- phi+ phi-")
    _add_direction_flags(point)
    _add_common_output_flags(point)

    sweep = subparsers.add_parser("sweep", help="run a parameter scan")
    sweep_kinds = sweep.add_subparsers(dest="sweep_kind", required=True)

    fig2 = sweep_kinds.add_parser("fig2", help="concurrence vs x = L/(ct)")
    fig2.add_argument("--z", required=True, metavar="LIST",
                      help="fixed separations, e.g. 1,5,10")
    fig2.add_argument("--x", required=True, metavar="START:STOP:COUNT")
    fig2.add_argument("--bell", default="psi+")
    _add_common_output_flags(fig2)

    fig3 = sweep_kinds.add_parser("fig3", help="concurrence vs z = Omega L / c")
    fig3.add_argument("--u", required=True, metavar="LIST",
                      help="fixed interaction times, e.g. 1,4,7")
    fig3.add_argument("--z", required=True, metavar="START:STOP:COUNT")
    fig3.add_argument("--bell", default="psi+")
    _add_common_output_flags(fig3)

    fig4 = sweep_kinds.add_parser("fig4", help="concurrence vs shared detector azimuth")
    fig4.add_argument("--z", type=float, required=True)
    fig4.add_argument("--x", type=float, required=True)
    fig4.add_argument("--phi", required=True, metavar="START:STOP:COUNT")
    fig4.add_argument("--bell", default="psi+")
    _add_common_output_flags(fig4)

    custom = sweep_kinds.add_parser("custom", help="scan x or z with explicit directions")
    custom.add_argument("--scan", choices=("x", "z"), required=True)
    custom.add_argument("--range", required=True, metavar="START:STOP:COUNT")
    custom.add_argument("--z", default=None, metavar="LIST", help="fixed z values (x scan)")
    custom.add_argument("--u", default=None, metavar="LIST", help="fixed u values (z scan)")
    custom.add_argument("--bell", default="psi+")
    _add_direction_flags(custom)
    _add_common_output_flags(custom)

    verify = subparsers.add_parser("verify", help="oracle vs closed forms plus quadrature checks")
    verify.add_argument("--grid-z", default="1,5,10", metavar="LIST")
    verify.add_argument("--grid-u", default="0.5,1,2,5,10", metavar="LIST")
    verify.add_argument("--pairs", type=int, default=10,
                        help="random direction pairs tried besides the reference geometry")
    verify.add_argument("--seed", type=int, default=20240810)
    verify.add_argument("--bell", default="psi+")
    verify.add_argument("--tol", type=float, default=1e-6)
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--out", default=None, metavar="PATH")
    return parser


def _cmd_point(args: argparse.Namespace) -> int:
    bell = _parse_bell(args.bell)
    dk, dk2 = _directions_from_args(args)
    try:
        point = DimensionlessPoint(z=args.z, u=args.u)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    record = evaluate_point(point, dk, dk2, bell, sweep_coord=point.x, omega=args.omega)
    pair = closed_form_amplitudes(point, dk, dk2, bell)

    with_seconds = args.omega is not None
    columns = POINT_COLUMNS + ("t_seconds",) if with_seconds else POINT_COLUMNS
    row = _record_row(record, with_seconds)
    del row["sweep_coord"]
    # the closed-form amplitudes are real; keep them as plain numbers
    row["f"] = pair.f.real
    row["g"] = pair.g.real
    row["n_squared"] = relative_weight(pair)
    meta = {"tool": "entswap", "command": "point", "bell": bell.value}
    meta.update(_direction_meta(dk, dk2))
    if with_seconds:
        meta["omega"] = _format_value(args.omega)
    _emit_rows([row], columns, meta, args.format, args.out)
    return EXIT_NO_EVENTS if record.concurrence is None else EXIT_OK


def _build_sweep_spec(args: argparse.Namespace) -> tuple[SweepSpec, dict[str, str]]:
    bell = _parse_bell(args.bell)
    kind = args.sweep_kind
    try:
        if kind == "fig2":
            start, stop, count = _parse_range(args.x, "--x")
            spec = SweepSpec(kind=SweepKind.VS_X, range_start=start, range_stop=stop,
                             count=count, bell=bell,
                             z_values=_parse_float_list(args.z, "--z"), omega=args.omega)
            meta = {"kind": "fig2", "coord": "x", "group_by": "z",
                    "z_values": args.z, "range": args.x, "preset": "fig1"}
            dk, dk2 = fig1_preset()
            meta.update(_direction_meta(dk, dk2))
        elif kind == "fig3":
            start, stop, count = _parse_range(args.z, "--z")
            spec = SweepSpec(kind=SweepKind.VS_Z, range_start=start, range_stop=stop,
                             count=count, bell=bell,
                             u_values=_parse_float_list(args.u, "--u"), omega=args.omega)
            meta = {"kind": "fig3", "coord": "z", "group_by": "u",
                    "u_values": args.u, "range": args.z, "preset": "fig1"}
            dk, dk2 = fig1_preset()
            meta.update(_direction_meta(dk, dk2))
        elif kind == "fig4":
            start, stop, count = _parse_range(args.phi, "--phi")
            spec = SweepSpec(kind=SweepKind.VS_PHI, range_start=start, range_stop=stop,
                             count=count, bell=bell, z=args.z, x=args.x, omega=args.omega)
            meta = {"kind": "fig4", "coord": "phi",
                    "z": _format_value(args.z), "x": _format_value(args.x),
                    "range": args.phi, "preset": "fig4",
                    "theta": _format_value(math.pi / 4.0)}
        else:
            start, stop, count = _parse_range(args.range, "--range")
            directions = _directions_from_args(args)
            if args.scan == "x":
                if args.z is None:
                    raise UsageError("an x scan needs --z with fixed separations")
                spec = SweepSpec(kind=SweepKind.VS_X, range_start=start, range_stop=stop,
                                 count=count, bell=bell,
                                 z_values=_parse_float_list(args.z, "--z"),
                                 directions=directions, omega=args.omega)
                meta = {"kind": "custom", "coord": "x", "group_by": "z",
                        "z_values": args.z, "range": args.range}
            else:
                if args.u is None:
                    raise UsageError("a z scan needs --u with fixed interaction times")
                spec = SweepSpec(kind=SweepKind.VS_Z, range_start=start, range_stop=stop,
                                 count=count, bell=bell,
                                 u_values=_parse_float_list(args.u, "--u"),
                                 directions=directions, omega=args.omega)
                meta = {"kind": "custom", "coord": "z", "group_by": "u",
                        "u_values": args.u, "range": args.range}
            meta.update(_direction_meta(*directions))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    full_meta = {"tool": "entswap", "command": "sweep", "bell": bell.value}
    full_meta.update(meta)
    if args.omega is not None:
        full_meta["omega"] = _format_value(args.omega)
    return spec, full_meta


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec, meta = _build_sweep_spec(args)
    try:
        records = run_sweep(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    with_seconds = spec.omega is not None
    rows = [_record_row(r, with_seconds) for r in records]
    _emit_rows(rows, _sweep_columns(with_seconds), meta, args.format, args.out)
    if all(r.concurrence is None for r in records):
        return EXIT_NO_EVENTS
    return EXIT_OK


def _sample_direction(rng: np.random.Generator) -> Direction:
    # uniform on the sphere
    theta = math.acos(rng.uniform(-1.0, 1.0))
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return Direction(theta=theta, phi=phi)


@dataclass
class _VerifySummary:
    checked: int = 0
    ok: int = 0
    inconclusive: int = 0
    mismatches: int = 0
    max_error: float = 0.0


def _cmd_verify(args: argparse.Namespace) -> int:
    if not args.tol > 0.0:
        raise UsageError("--tol must be positive")
    if args.pairs < 0:
        raise UsageError("--pairs must be nonnegative")
    bell = _parse_bell(args.bell)
    grid_z = _parse_float_list(args.grid_z, "--grid-z")
    grid_u = _parse_float_list(args.grid_u, "--grid-u")
    if any(v <= 0 for v in grid_z + grid_u):
        raise UsageError("grid values must be positive")

    rng = np.random.default_rng(args.seed)
    pairs = [fig1_preset()] + [(_sample_direction(rng), _sample_direction(rng))
                               for _ in range(args.pairs)]

    ratio = _VerifySummary()
    minus_checked = 0
    minus_bad = 0
    offenders: list[tuple[float, str]] = []
    for z in grid_z:
        for u in grid_u:
            point = DimensionlessPoint(z=z, u=u)
            for index, (dk, dk2) in enumerate(pairs):
                report = compare_to_closed_form(point, dk, dk2, bell, tolerance=args.tol)
                if report.status == "zero_zero":
                    ratio.ok += 1
                elif report.status == "inconclusive":
                    ratio.inconclusive += 1
                elif report.status == "ok":
                    ratio.ok += 1
                else:
                    ratio.mismatches += 1
                ratio.checked += 1
                if report.ratio_rel_error is not None:
                    ratio.max_error = max(ratio.max_error, report.ratio_rel_error)
                    offenders.append((report.ratio_rel_error,
                                      f"z={_format_value(z)} u={_format_value(u)} "
                                      f"pair={index} status={report.status}"))
                for minus in (BellKind.PSI_MINUS, BellKind.PHI_MINUS):
                    minus_report = compare_to_closed_form(point, dk, dk2, minus)
                    minus_checked += 1
                    if minus_report.status != "zero_zero":
                        minus_bad += 1

    quad_ok = 0
    quad_failures: list[str] = []
    quad_max_error = 0.0
    for a, b, u in _QUAD_CHECKS_F:
        try:
            analytic = time_integral_f(a, b, u)
            numeric = time_integral_f_quadrature(a, b, u)
            error = abs(analytic - numeric) / max(abs(numeric), 1e-8 * u * u)
        except Exception as exc:  # quadrature failures are reported, not raised
            quad_failures.append(f"ordered a={a} b={b} u={u}: {exc}")
            continue
        quad_max_error = max(quad_max_error, error)
        if error < 1e-8:
            quad_ok += 1
        else:
            quad_failures.append(f"ordered a={a} b={b} u={u}: rel error {error:.3e}")
    for d1, d2, u in _QUAD_CHECKS_G:
        try:
            analytic = time_integral_g(d1, d2, u)
            numeric = time_integral_g_quadrature(d1, d2, u)
            error = abs(analytic - numeric) / max(abs(numeric), 1e-8 * u * u)
        except Exception as exc:
            quad_failures.append(f"factorized d1={d1} d2={d2} u={u}: {exc}")
            continue
        quad_max_error = max(quad_max_error, error)
        if error < 1e-8:
            quad_ok += 1
        else:
            quad_failures.append(f"factorized d1={d1} d2={d2} u={u}: rel error {error:.3e}")

    offenders.sort(key=lambda item: -item[0])
    passed = (ratio.mismatches == 0 and ratio.max_error < args.tol
              and minus_bad == 0 and not quad_failures)

    if args.format == "json":
        payload = {
            "bell": bell.value,
            "tolerance": args.tol,
            "ratio_checks": {"total": ratio.checked, "ok": ratio.ok,
                             "inconclusive": ratio.inconclusive,
                             "mismatches": ratio.mismatches,
                             "max_rel_error": _json_value(ratio.max_error)},
            "minus_channels": {"total": minus_checked, "nonvanishing": minus_bad},
            "quadrature": {"ok": quad_ok, "failures": quad_failures,
                           "max_rel_error": _json_value(quad_max_error)},
            "worst": [text for _, text in offenders[:5]],
            "passed": passed,
        }
        _write_text(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = [
            f"verification: bell={bell.value} grid_z={args.grid_z} grid_u={args.grid_u} "
            f"pairs={len(pairs)} tol={_format_value(args.tol)}",
            f"ratio checks: {ratio.ok} ok, {ratio.inconclusive} inconclusive, "
            f"{ratio.mismatches} mismatch; max rel error = {_format_value(ratio.max_error)}",
            f"minus channels: {minus_checked - minus_bad} vanish, {minus_bad} nonvanishing",
            f"time integrals vs quadrature: {quad_ok} ok, {len(quad_failures)} failed; "
            f"max rel error = {_format_value(quad_max_error)}",
        ]
        if offenders:
            lines.append("worst offenders:")
            lines.extend(f"  {text} error={_format_value(err)}" for err, text in offenders[:5])
        lines.extend(f"quadrature failure: {text}" for text in quad_failures)
        lines.append("PASS" if passed else "FAIL")
        _write_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "point":
            return _cmd_point(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_verify(args)
    except UsageError as exc:
        print(f"entswap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: JSON/CSV reports over the library operations."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import checks as checks_mod
from . import kernel as kmod
from .domains import (
    build_element,
    classify_element,
    domain_count,
    enumerate_domains,
    parse_group,
    predicted_eigenvalues,
    root_system_of,
)
from .errors import ArgumentError, ConfigurationError, LieKernelError
from .lattice import RadialPoint, domain_sublattice, winding_lattice
from .rootsys import build_root_system, cartan_matrix, rescale
from .volumes import volume_report
from .weyl import generate_weyl_group

__all__ = ["main", "render_json", "render_csv"]


# ---------------------------------------------------------------------------
# deterministic serialization: floats at 17 significant digits
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    x = float(x) + 0.0  # normalize -0.0
    if x != x or x in (float("inf"), float("-inf")):
        raise ArgumentError("non-finite value in output")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return f"{x:.17g}"


def render_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  "{k}": {render_json(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(isinstance(v, (int, float, str, bool)) for v in seq)
        if flat:
            return "[" + ", ".join(render_json(v) for v in seq) + "]"
        items = [f"{pad}  " + render_json(v, indent + 1) for v in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise ArgumentError(f"cannot serialize {type(obj)}")


def render_csv(records: list) -> str:
    if not records:
        return ""
    keys = list(records[0].keys())
    lines = [",".join(keys)]
    for rec in records:
        cells = []
        for k in keys:
            v = rec.get(k, "")
            if isinstance(v, (float, np.floating)):
                cells.append(_fmt_float(v))
            elif isinstance(v, (list, tuple)):
                cells.append(";".join(_fmt_float(x) if isinstance(x, float) else str(x) for x in v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _emit(args, payload, records_for_csv=None):
    if args.format == "csv":
        if records_for_csv is None:
            raise ArgumentError("csv output is only available for record-shaped results")
        text = render_csv(records_for_csv)
    else:
        text = render_json(payload) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# payload builders
# ---------------------------------------------------------------------------


def _parse_system(token: str):
    token = token.strip()
    if len(token) >= 2 and token[0].upper() in "ABCD" and token[1:].isdigit():
        return build_root_system(token[0].upper(), int(token[1:]))
    # fall back to a group name and use its root system
    return root_system_of(parse_group(token))


def _vectors(arr) -> list:
    return [[float(x) + 0.0 for x in row] for row in np.atleast_2d(arr)]


def cmd_roots(args) -> int:
    rs = _parse_system(args.system)
    if args.rescale is not None:
        rs = rescale(rs, args.rescale)
    payload = {
        "family": rs.family,
        "rank": rs.rank,
        "n": rs.n,
        "p": rs.p,
        "lambda": float(rs.lam),
        "rho": [float(x) for x in rs.rho],
        "rho2": float(rs.rho @ rs.rho),
        "simple_roots": _vectors(rs.simple_roots),
        "positive_roots": _vectors(rs.positive_roots),
        "highest_root": [float(x) for x in rs.highest_root],
        "highest_root_coeffs": [int(c) for c in rs.highest_root_coeffs],
        "fundamental_weights": _vectors(rs.weights),
        "cartan_matrix": [[int(v) for v in row] for row in cartan_matrix(rs)],
    }
    flat = {
        k: payload[k] for k in ("family", "rank", "n", "p", "lambda", "rho2")
    }
    flat["rho"] = payload["rho"]
    _emit(args, payload, [flat])
    return 0


def cmd_weyl(args) -> int:
    rs = _parse_system(args.system)
    group = generate_weyl_group(rs)
    payload = {
        "system": rs.name,
        "order": group.order,
        "parities": [int(e.parity) for e in group],
    }
    if args.matrices:
        payload["matrices"] = [_vectors(e.matrix) for e in group]
    _emit(args, payload, [{"system": rs.name, "order": group.order, "parities": payload["parities"]}])
    return 0


def cmd_volume(args) -> int:
    rs = _parse_system(args.system)
    rep = volume_report(rs)
    payload = {
        "system": rs.name,
        "group": rep.group,
        "torus": rep.torus,
        "coset": rep.coset,
        "factorization_residual": rep.factorization_residual,
    }
    _emit(args, payload, [payload])
    return 0


def _time_parameter(args) -> kmod.TimeParameter:
    if args.heat is not None and args.t is not None:
        raise ArgumentError("choose one of --heat and --t")
    if args.heat is not None:
        return kmod.TimeParameter.heat(args.heat)
    if args.t is not None:
        return kmod.TimeParameter.real(args.t, epsilon=args.eps)
    raise ArgumentError("a time is required: --heat TAU or --t T [--eps E]")


def _grid_points(args, rank: int, signature) -> list:
    base = np.zeros(rank)
    if args.point:
        base = np.array([float(v) for v in args.point.split(",")])
        if len(base) != rank:
            raise ArgumentError(f"--point needs {rank} comma-separated values")
    spec = args.grid or args.theta_grid
    if not spec:
        if not args.point:
            raise ArgumentError("provide --grid START:STOP:N or --point v1,v2,...")
        return [RadialPoint(tuple(base), signature)]
    try:
        start, stop, num = spec.split(":")
        start, stop, num = float(start), float(stop), int(num)
    except ValueError as exc:
        raise ArgumentError(f"bad grid spec {spec!r}; want START:STOP:N") from exc
    if num < 1:
        raise ArgumentError("grid needs at least one point")
    pts = []
    for v in np.linspace(start, stop, num):
        vec = base.copy()
        vec[args.axis] = v
        pts.append(RadialPoint(tuple(vec), signature))
    return pts


def _closed_form(group_name: str, domain_label: str, point: RadialPoint, tp) -> complex | None:
    fam = parse_group(group_name)
    if fam.rank != 1:
        return None
    try:
        if not fam.is_compact and domain_label == "D0":
            value = kmod.su11_kernel_d0(point.values[0], tp)
        else:
            if abs(np.sin(point.values[0] / 2.0)) < 1e-12:
                return None  # wall point: the closed series is 0/0 there
            value = kmod.su2_pathsum_series(point.values[0], tp)
    except LieKernelError:
        return None
    return value if np.isfinite(value.real) and np.isfinite(value.imag) else None


def cmd_kernel(args) -> int:
    fam = parse_group(args.group)
    rs = root_system_of(fam)
    domains = enumerate_domains(fam)
    domain = None
    if args.domain:
        matches = [d for d in domains if d.label.upper() == args.domain.upper()]
        if not matches:
            raise ArgumentError(
                f"{fam.name} has no domain {args.domain}; available: "
                + ", ".join(d.label for d in domains)
            )
        domain = matches[0]
    elif not fam.is_compact:
        raise ArgumentError(f"{fam.name} is non-compact; pick a domain with --domain")
    signature = domain.signature if domain else ("R",) * rs.rank
    tp = _time_parameter(args)
    points = _grid_points(args, rs.rank, signature)
    if not points:
        raise ArgumentError("empty evaluation grid")
    compact_request = domain is None or domain.b == 0

    routes = [args.route] if args.route != "both" else ["pathsum", "spectral"]
    if "spectral" in routes and not compact_request:
        raise ArgumentError("the spectral route exists only for compact requests")

    def evaluate(point):
        rec = {
            "phi": [float(v) for v in point.values],
            "signature": "".join(point.signature),
        }
        for route in routes:
            try:
                if route == "spectral":
                    req = kmod.KernelRequest(
                        rs=rs, phi=point, time=tp, tol=args.tol, level_cutoff=args.level_cutoff
                    )
                    kv = kmod.compact_spectral(req)
                elif compact_request:
                    req = kmod.KernelRequest(rs=rs, phi=point, time=tp, tol=args.tol)
                    kv = kmod.compact_pathsum(req)
                else:
                    req = kmod.KernelRequest(rs=rs, phi=point, time=tp, tol=args.tol, domain=domain)
                    kv = kmod.noncompact_pathsum(req)
            except kmod.SingularPointError:
                rec[f"{route}_skipped"] = "wall point"
                continue
            rec[f"{route}_re"] = float(kv.value.real)
            rec[f"{route}_im"] = float(kv.value.imag)
            rec[f"{route}_tag"] = kv.tag.value
            if kv.warning:
                rec[f"{route}_warning"] = kv.warning
        if "pathsum_re" in rec and "spectral_re" in rec:
            rec["discrepancy"] = abs(
                complex(rec["pathsum_re"], rec["pathsum_im"])
                - complex(rec["spectral_re"], rec["spectral_im"])
            )
        closed = _closed_form(args.group, domain.label if domain else "", point, tp)
        if closed is not None:
            rec["closed_re"] = float(closed.real)
            rec["closed_im"] = float(closed.imag)
        return rec

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            records = list(pool.map(evaluate, points))
    else:
        records = [evaluate(p) for p in points]
    payload = {
        "group": fam.name,
        "domain": domain.label if domain else "compact",
        "time_mode": tp.mode.value,
        "time_value": float(tp.value),
        "epsilon": float(tp.epsilon),
        "records": records,
    }
    _emit(args, payload, records)
    return 0


def table_payload(group_name: str) -> dict:
    fam = parse_group(group_name)
    rs = root_system_of(fam)
    lat = winding_lattice(rs)
    rows = []
    for dom in enumerate_domains(fam):
        sub = domain_sublattice(lat, dom)
        rows.append(
            {
                "label": dom.label,
                "a": dom.a,
                "signature": "".join(dom.signature),
                "mtilde_generators": _vectors(sub.generators) if sub.dim else [],
                "mtilde_coeffs": [[int(c) for c in row] for row in sub.coeffs] if sub.dim else [],
            }
        )
    return {
        "group": fam.name,
        "root_system": rs.name,
        "winding_generators": _vectors(lat.generators),
        "domains": rows,
    }


def cmd_table(args) -> int:
    payload = table_payload(args.group)
    rows = [
        {
            "group": payload["group"],
            "label": d["label"],
            "a": d["a"],
            "signature": d["signature"],
            "mtilde_generators": [x for row in d["mtilde_generators"] for x in row],
        }
        for d in payload["domains"]
    ]
    _emit(args, payload, rows)
    return 0


def cmd_domains(args) -> int:
    fam = parse_group(args.group)
    if args.action == "enumerate":
        payload = {
            "group": fam.name,
            "rank": fam.rank,
            "count": domain_count(fam),
            "domains": [
                {"label": d.label, "a": d.a, "signature": "".join(d.signature)}
                for d in enumerate_domains(fam)
            ],
        }
        _emit(args, payload, payload["domains"])
        return 0
    # classify
    with open(args.matrix, encoding="utf-8") as fh:
        raw = json.load(fh)
    flat = np.asarray(raw, dtype=float)
    if flat.ndim == 2 and flat.shape[1] == 2:  # row-major [re, im] pairs
        n = int(round(np.sqrt(len(flat))))
        mat = (flat[:, 0] + 1j * flat[:, 1]).reshape(n, n)
    elif flat.ndim == 3 and flat.shape[2] == 2:
        mat = flat[..., 0] + 1j * flat[..., 1]
    else:
        mat = np.asarray(raw, dtype=complex)
    dom, point = classify_element(fam, mat)
    eig = np.linalg.eigvals(np.asarray(mat, dtype=complex))
    pred = predicted_eigenvalues(fam, point)
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(pred[:, None] - eig[None, :])
    rows, cols = linear_sum_assignment(cost)
    residual = float(cost[rows, cols].max())
    payload = {
        "group": fam.name,
        "domain": dom.label,
        "signature": "".join(dom.signature),
        "radial": [float(v) for v in point.values],
        "eigenvalues": [[float(z.real), float(z.imag)] for z in eig],
        "residual": residual,
    }
    flat = {k: payload[k] for k in ("group", "domain", "signature", "residual")}
    flat["radial"] = payload["radial"]
    _emit(args, payload, [flat])
    return 0


def cmd_check(args) -> int:
    if args.list:
        for name in checks_mod.CHECKS:
            print(name)
        return 0
    results = checks_mod.run_checks(only=args.only)
    payload = {"checks": results, "passed": all(r["passed"] for r in results)}
    _emit(args, payload, results)
    return 0 if payload["passed"] else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liekernel",
        description="Evolution kernels and root-system machinery on classical group manifolds",
    )
    parser.add_argument("--config", help="JSON file with default option values (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("-o", "--output", help="write to file instead of stdout")

    p = sub.add_parser("roots", help="dump a root system")
    p.add_argument("system", help="root system like A2, or a group name")
    p.add_argument("--rescale", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("weyl", help="Weyl group order and parities")
    p.add_argument("system")
    p.add_argument("--matrices", action="store_true", help="include the full matrix list")
    common(p)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("volume", help="invariant volumes")
    p.add_argument("system")
    common(p)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("kernel", help="evaluate evolution kernels on a grid")
    p.add_argument("group", help="group name like SU2, SU(1,1)")
    p.add_argument("--domain", help="evolution domain label, e.g. D0")
    p.add_argument("--heat", type=float, default=None, help="heat time tau > 0")
    p.add_argument("--t", type=float, default=None, help="real time t")
    p.add_argument("--eps", type=float, default=0.0, help="damping for real time")
    p.add_argument("--grid", help="START:STOP:N sweep along --axis")
    p.add_argument("--theta-grid", dest="theta_grid", help="alias of --grid")
    p.add_argument("--axis", type=int, default=0)
    p.add_argument("--point", help="comma-separated base coordinates")
    p.add_argument("--route", choices=["pathsum", "spectral", "both"], default="pathsum")
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--level-cutoff", dest="level_cutoff", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("domains", help="enumerate domains or classify an element")
    p.add_argument("action", choices=["enumerate", "classify"])
    p.add_argument("group")
    p.add_argument("matrix", nargs="?", help="JSON matrix file for classify")
    common(p)
    p.set_defaults(func=cmd_domains)

    p = sub.add_parser("table", help="domain/winding tables for the catalogued groups")
    p.add_argument("group")
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("check", help="run the invariant suite")
    p.add_argument("--only", help="substring filter on check names")
    p.add_argument("--list", action="store_true", help="list check names and exit")
    common(p)
    p.set_defaults(func=cmd_check)
    return parser


def _apply_config(parser, argv):
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            defaults = json.load(fh)
        explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")}
        for key, value in defaults.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and attr not in explicit:
                setattr(args, attr, value)
    return args


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = _apply_config(parser, sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if getattr(args, "matrix", None) is None and getattr(args, "action", "") == "classify":
            raise ArgumentError("classify needs a matrix JSON file")
        return args.func(args)
    except (ArgumentError, ConfigurationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LieKernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver.

Exit codes: 0 pass, 1 mathematical disagreement or labelling failure, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .combinatorics import content_vector, enumerate_syt, parse_partition, size, tableau_from_contents
from .config import PRECISION_MODES, RunConfig, Tolerances
from .errors import DomainError, LabError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_z(text: str) -> list[Fraction]:
    """Comma-separated decimals, kept exact until a float backend needs them."""
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad parameter list {text!r}") from exc


def _z_for(cfg: RunConfig, z: Sequence[Fraction]):
    if cfg.precision == "exact":
        return list(z)
    return [float(x) for x in z]


def _split_tol_flags(argv: Sequence[str]) -> tuple[list[str], dict[str, str]]:
    """Pull ``--tol.NAME VALUE`` / ``--tol.NAME=VALUE`` out of argv; argparse has no dotted wildcard options."""
    rest, tol = [], {}
    it = iter(argv)
    for arg in it:
        if arg.startswith("--tol."):
            name, eq, value = arg[len("--tol."):].partition("=")
            if not eq:
                value = next(it, None)
                if value is None:
                    raise UsageError(f"{arg} needs a value")
            tol[name.replace("-", "_")] = value
        else:
            rest.append(arg)
    return rest, tol


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", choices=PRECISION_MODES, default="float64")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="schubert-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("syt", parents=[common], help="list standard tableaux of a shape")
    s.add_argument("mu")

    s = sub.add_parser("spectrum", parents=[common], help="Gaudin or Jucys-Murphy joint spectrum")
    s.add_argument("n", type=int)
    s.add_argument("mu")
    s.add_argument("z", nargs="?")
    s.add_argument("--jm", action="store_true")

    s = sub.add_parser("bethe", parents=[common], help="critical points attached to each tableau")
    s.add_argument("r", type=int)
    s.add_argument("mu")
    s.add_argument("z")

    s = sub.add_parser("label", parents=[common], help="agreement certificate for one instance")
    for name in ("r", "d"):
        s.add_argument(name, type=int)
    s.add_argument("mu")
    s.add_argument("z")

    s = sub.add_parser("asymptotics", parents=[common], help="CSV of the Jucys-Murphy limit errors")
    for name in ("r", "d"):
        s.add_argument(name, type=int)
    s.add_argument("mu")
    s.add_argument("z")
    s.add_argument("--decades", type=int, default=3)

    s = sub.add_parser("theta-check", parents=[common], help="continuity checks for the coordinate map")
    s.add_argument("instance", nargs="*", metavar="R D MU Z",
                   help="optional instance; without it the exact two-dimensional example is run")
    return p


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_syt(args, cfg) -> tuple[int, str]:
    mu = parse_partition(args.mu)
    tabs = enumerate_syt(mu)
    if args.json:
        return EXIT_PASS, _dump({"mu": list(mu), "count": len(tabs), "tableaux": [T.to_json() for T in tabs]})
    lines = [f"{len(tabs)} standard tableaux of shape {','.join(map(str, mu)) or '()'}"]
    lines += [str(T) for T in tabs]
    return EXIT_PASS, "\n".join(lines) + "\n"


def cmd_spectrum(args, cfg) -> tuple[int, str]:
    from .repthy import gaudin_family, joint_spectrum, jucys_murphy, singular_weight_basis

    mu = parse_partition(args.mu)
    if size(mu) != args.n:
        raise DomainError(f"|mu| = {size(mu)} must equal n = {args.n}")
    B = singular_weight_basis(args.n, max(len(mu), 1), mu)
    out = {"n": args.n, "mu": list(mu), "dim": B.dim}
    if args.jm:
        lines = joint_spectrum([jucys_murphy(a, B) for a in range(1, args.n + 1)])
        rows = []
        for line in lines:
            contents = [int(v) for v in line.values]
            rows.append({"contents": contents, "tableau": tableau_from_contents(contents).to_json()})
        out["jucys_murphy"] = sorted(rows, key=lambda x: x["contents"], reverse=True)
    else:
        if args.z is None:
            raise UsageError("spectrum needs z unless --jm is given")
        z = _z_for(cfg, parse_z(args.z))
        if len(z) != args.n:
            raise DomainError(f"need {args.n} parameters, got {len(z)}")
        if len(set(z)) != len(z):
            raise DomainError("repeated parameter in z")
        lines = joint_spectrum(gaudin_family(z, B), cfg.tol.commutator, cfg.tol.separation, cfg.tol.imag)
        out["z"] = [str(x) for x in parse_z(args.z)]
        out["gaudin"] = [line.to_json()["eigenvalues"] for line in lines]
    return EXIT_PASS, _dump(out)


def cmd_bethe(args, cfg) -> tuple[int, str]:
    from .bethe import MasterData, critical_point_from_y, marcus_construction
    from .errors import DegenerateCriticalPoint

    mu = parse_partition(args.mu)
    z = [float(x) for x in parse_z(args.z)]
    if size(mu) != len(z):
        raise DomainError(f"|mu| = {size(mu)} must equal n = {len(z)}")
    md = MasterData.for_shape(mu, args.r)
    records, code = [], EXIT_PASS
    for T in enumerate_syt(mu):
        mc = marcus_construction(T, z, args.r, cfg)
        rec = {"tableau": T.to_json(), "y": [p.to_json() for p in mc.y],
               "gluing": [{"k": s.k, "row": s.e, "s": list(map(float, s.s)), "closed_form_s1": s.closed_form_s1,
                           "transformed_residual": s.residual} for s in mc.steps]}
        try:
            cp = critical_point_from_y(md, z, mc.y, cfg, T)
            rec["critical_point"] = cp.to_json()
        except DegenerateCriticalPoint as exc:
            rec["critical_point"], code = None, EXIT_FAIL
            rec["error"] = exc.as_dict()
        records.append(rec)
    return code, _dump({"r": args.r, "mu": list(mu), "z": z, "config": cfg.as_dict(), "points": records})


def cmd_label(args, cfg) -> tuple[int, str]:
    from .labelling import verify_agreement

    mu = parse_partition(args.mu)
    z = [float(x) for x in parse_z(args.z)]
    cert = verify_agreement(z, mu, args.r, args.d, cfg)
    return (EXIT_PASS if cert.passed else EXIT_FAIL), _dump(cert.to_json())


def asymptotics_rows(z: Sequence[float], mu, decades: int) -> list[tuple[str, float, int, float]]:
    """``(tableau, t, a, |z_a H_a - c_T(a)|)`` along the scaling path for every eigenline at ``z``."""
    from .labelling import gaudin_spectrum
    from .repthy import Transport

    if decades <= 0:
        return []
    B, spectrum = gaudin_spectrum(tuple(float(x) for x in z), mu)
    rows = []
    for line in spectrum:
        tr = Transport(tuple(float(x) for x in z), B, np.asarray(line.vector, dtype=float))
        table = []
        for k in range(1, decades + 1):
            tr.advance(10.0 ** k)
            table.append((10.0 ** k, tr.values()))
        contents = [int(v) for v in np.rint(table[-1][1])]
        T = tableau_from_contents(contents)
        for t, vals in table:
            for a, v in enumerate(vals):
                rows.append((str(T), t, a + 1, abs(float(v) - contents[a])))
    rows.sort(key=lambda x: (x[0], x[1], x[2]))
    return rows


def cmd_asymptotics(args, cfg) -> tuple[int, str]:
    mu = parse_partition(args.mu)
    z = [float(x) for x in parse_z(args.z)]
    if size(mu) != len(z):
        raise DomainError(f"|mu| = {size(mu)} must equal n = {len(z)}")
    if len(mu) > args.r:
        raise DomainError(f"{mu} has more than r = {args.r} rows")
    rows = asymptotics_rows(z, mu, args.decades)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tableau", "t", "a", "error"])
    for T, t, a, err in rows:
        w.writerow([T, f"{t:g}", a, f"{err:.6e}"])
    # sanity: errors must not grow with t
    code = EXIT_PASS
    by_key: dict = {}
    for T, t, a, err in rows:
        by_key.setdefault((T, a), []).append(err)
    for errs in by_key.values():
        if any(b > a * 1.01 + 1e-12 for a, b in zip(errs, errs[1:])):
            code = EXIT_FAIL
    return code, buf.getvalue()


def cmd_theta_check(args, cfg) -> tuple[int, str]:
    if not args.instance:
        import sympy as sp

        from .labelling import symbolic_theta_limit

        s, u = sp.symbols("s u")
        lim_theta, theta_lim = symbolic_theta_limit([u ** 2 + s, u], s, u)
        out = {"family": "span{u^2 + s, u}", "lim_theta": [str(p) for p in lim_theta],
               "theta_lim": [str(p) for p in theta_lim], "continuous": lim_theta == theta_lim}
        return EXIT_PASS, _dump(out)
    if len(args.instance) != 4:
        raise UsageError("theta-check takes R D MU Z or nothing")
    from .labelling import section_limit, solve_intersection

    r, d = int(args.instance[0]), int(args.instance[1])
    mu = parse_partition(args.instance[2])
    z = [float(x) for x in parse_z(args.instance[3])]
    records, code = [], EXIT_PASS
    for p in solve_intersection(z, mu, r, d, cfg):
        _, step = section_limit(p.X, z, cfg)
        dists = step.theta_distances
        ratio = dists[3] / dists[4] if dists.get(4) else math.inf
        ok = dists.get(4, 0.0) <= 1e-10 or 5 <= ratio <= 20
        code = code if ok else EXIT_FAIL
        records.append({"tableau": p.tableau.to_json(), "row": step.row,
                        "distances": {str(k): v for k, v in sorted(dists.items())}, "ratio": ratio, "continuous": ok})
    return code, _dump({"r": r, "d": d, "mu": list(mu), "z": z, "points": records})


COMMANDS = {"syt": cmd_syt, "spectrum": cmd_spectrum, "bethe": cmd_bethe, "label": cmd_label,
            "asymptotics": cmd_asymptotics, "theta-check": cmd_theta_check}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv, tol_overrides = _split_tol_flags(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    try:
        cfg = RunConfig(precision=args.precision, tol=Tolerances().replace(**tol_overrides), seed=args.seed)
        code, text = COMMANDS[args.cmd](args, cfg)
    except (UsageError, DomainError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except LabError as exc:
        print(_dump({"error": exc.as_dict()}), end="", file=sys.stderr)
        return EXIT_FAIL
    _emit(text, args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

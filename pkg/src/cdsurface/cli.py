"""Command-line front end.

Subcommands:
  kernel  -- evaluate a kernel (matrix CD, surface scalar, or tiling
             correlation kernel) on a grid or at explicit point pairs and
             write a CSV/JSON table.
  verify  -- run a named verification suite and emit a JSON report of
             {check, residual, tolerance, pass} entries.
  prob    -- gap/point probabilities for a hexagon tiling model, by the
             determinant route and (when the enumeration guard permits)
             by exhaustive enumeration.

Exit codes: 0 success (all checks pass for `verify`), 1 failed check,
2 configuration/schema error, 3 numerical existence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import mops, sops, surface, tiling, weights
from .contour import default_n, unit_circle_quadrature
from .errors import (CDSurfaceError, InconsistentParametersError,
                     InvalidArgumentError, SingularSystemError,
                     SizeGuardError, UnsupportedFamilyError)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_CONFIG_ERRORS = (InvalidArgumentError, UnsupportedFamilyError,
                  InconsistentParametersError, KeyError, TypeError,
                  ValueError, json.JSONDecodeError)
_NUMERICAL_ERRORS = (SingularSystemError, SizeGuardError,
                     np.linalg.LinAlgError)


# --- formatting ----------------------------------------------------------

def _fmt(x: float) -> str:
    """17 significant digits, lowercase e exponent (round-trip exact)."""
    return f"{float(x):.16e}"


def _write_csv(rows: list, header: list, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v
                         for v in row])


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# --- config parsing ------------------------------------------------------

def _parse_complex(token: str) -> complex:
    """'re,im' or a plain real number."""
    parts = token.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise InvalidArgumentError(f"cannot parse complex value {token!r}")


def _parse_int_pair(token: str) -> tuple:
    parts = token.split(",")
    if len(parts) != 2:
        raise InvalidArgumentError(f"expected 'x,y', got {token!r}")
    return int(parts[0]), int(parts[1])


def _parse_hexagon(token: str) -> tuple:
    """'L,N,M' -> (L, N, M)."""
    parts = token.split(",")
    if len(parts) != 3:
        raise InvalidArgumentError(f"expected 'L,N,M', got {token!r}")
    return tuple(int(p) for p in parts)


def _family_from_args(args) -> weights.WeightFamily:
    if getattr(args, "family_json", None):
        spec = args.family_json
        if spec.startswith("@"):
            with open(spec[1:]) as fh:
                obj = json.load(fh)
        else:
            obj = json.loads(spec)
        return weights.family_from_json(obj)
    tag = args.family
    if tag is None:
        raise InvalidArgumentError("--family or --family-json is required")
    if tag == "cyclic":
        return weights.CyclicUniform(r_size=_req(args, "r"),
                                     L=_req(args, "L"), R=_req(args, "R"))
    if tag == "root-k":
        return weights.TwoByTwoRootK(k=_req(args, "k"),
                                     L=args.L if args.L else 2,
                                     M=args.M if args.M else 2)
    if tag == "periodic-2x1":
        return weights.Periodic2x1(a0=_req(args, "a0"), a1=_req(args, "a1"),
                                   b0=_req(args, "b0"), b1=_req(args, "b1"),
                                   L=_req(args, "L"), M=_req(args, "M"),
                                   N=_req(args, "NW"))
    if tag == "scalar-monomial":
        return weights.ScalarMonomial(r_size=args.r if args.r else 1,
                                      N=args.NW if args.NW else args.N)
    raise UnsupportedFamilyError(
        f"unknown family {tag!r} (use --family-json for periodic-2x2)")


def _req(args, name):
    val = getattr(args, name, None)
    if val is None:
        raise InvalidArgumentError(
            f"--{name.replace('NW', 'weight-N')} is required for "
            f"--family {args.family}")
    return val


def _hexagon_model(args) -> tiling.HexagonModel:
    if args.hexagon is None:
        raise InvalidArgumentError("--hexagon L,N,M is required")
    L, N, M = _parse_hexagon(args.hexagon)
    r = args.r or 1
    q = args.q or 1
    if args.a or args.b:
        if not (args.a and args.b):
            raise InvalidArgumentError("--a and --b must be given together")
        a = tuple(map(tuple, json.loads(args.a)))
        b = tuple(map(tuple, json.loads(args.b)))
        return tiling.HexagonModel(r=r, q=q, L=L, M=M, N=N, a=a, b=b)
    return tiling.HexagonModel.uniform(L, M, N, r=r, q=q)


# --- kernel command ------------------------------------------------------

def _probe_pairs(args) -> list:
    if args.at:
        toks = list(args.at)
        if len(toks) % 2:
            raise InvalidArgumentError("--at needs w z pairs (even count)")
        return [(_parse_complex(toks[i]), _parse_complex(toks[i + 1]))
                for i in range(0, len(toks), 2)]
    g = args.grid
    if g is None:
        raise InvalidArgumentError("provide --grid or --at")
    if g < 1:
        raise InvalidArgumentError("--grid must be >= 1")
    ws = 1.5 * np.exp(2j * np.pi * np.arange(g) / g)
    zs = 2.0 * np.exp(2j * np.pi * np.arange(g) / g)
    return [(w, z) for w in ws for z in zs]


def cmd_kernel(args) -> int:
    n = args.n or default_n()
    if args.kind == "tiling":
        model = _hexagon_model(args)
        if not args.at:
            raise InvalidArgumentError("--kind tiling requires --at "
                                       "x1,y1 x2,y2 pairs")
        toks = list(args.at)
        if len(toks) % 2:
            raise InvalidArgumentError("--at needs point pairs (even count)")
        ev = tiling.dk_evaluator(model, n)
        rows, results = [], []
        for i in range(0, len(toks), 2):
            x1, y1 = _parse_int_pair(toks[i])
            x2, y2 = _parse_int_pair(toks[i + 1])
            val = ev.scalar(x1, y1, x2, y2)
            rows.append([float(x1), float(y1), float(x2), float(y2),
                         float(val.real), float(val.imag)])
            results.append({"x1": x1, "y1": y1, "x2": x2, "y2": y2,
                            "K": [val.real, val.imag]})
        header = ["x1", "y1", "x2", "y2", "K_re", "K_im"]
        return _finish_kernel(args, rows, header, results)

    family = _family_from_args(args)
    if args.N is None:
        raise InvalidArgumentError("--N (kernel degree) is required")
    system = mops.mop_system(family, unit_circle_quadrature(n), args.N)
    pairs = _probe_pairs(args)
    r = family.r
    if args.kind == "surface":
        chart = surface.build_chart(family, args.N)
        rows, results = [], []
        for w, z in pairs:
            val = complex(surface.frak_R(chart, system, w, z))
            rows.append([w.real, w.imag, z.real, z.imag,
                         val.real, val.imag])
            results.append({"w": [w.real, w.imag], "z": [z.real, z.imag],
                            "S": [val.real, val.imag]})
        header = ["w_re", "w_im", "z_re", "z_im", "S_re", "S_im"]
        return _finish_kernel(args, rows, header, results)

    rows, results = [], []
    for w, z in pairs:
        K = mops.cd_kernel(system, w, z)
        flat = []
        for a in range(r):
            for b in range(r):
                flat += [K[a, b].real, K[a, b].imag]
        rows.append([w.real, w.imag, z.real, z.imag] + flat)
        results.append({"w": [w.real, w.imag], "z": [z.real, z.imag],
                        "K": [[[K[a, b].real, K[a, b].imag]
                               for b in range(r)] for a in range(r)]})
    header = ["w_re", "w_im", "z_re", "z_im"]
    for a in range(r):
        for b in range(r):
            header += [f"K{a}{b}_re", f"K{a}{b}_im"]
    return _finish_kernel(args, rows, header, results)


def _finish_kernel(args, rows, header, results) -> int:
    if args.format == "json":
        text = json.dumps(results, indent=2) + "\n"
    else:
        buf = io.StringIO()
        _write_csv(rows, header, buf)
        text = buf.getvalue()
    _emit(text, args.output)
    return EXIT_OK


# --- verify command ------------------------------------------------------

def _check(name: str, residual: float, tol: float,
           invert: bool = False) -> dict:
    """invert=True: the check passes when the residual EXCEEDS tol
    (used for failure witnesses)."""
    ok = residual > tol if invert else residual <= tol
    return {"check": name, "residual": float(residual),
            "tolerance": float(tol), "pass": bool(ok)}


def _suite_contour(args) -> list:
    checks = []
    for nq in (8, 64):
        quad = unit_circle_quadrature(nq)
        res = 0.0
        for k in range(-6, 7):
            val = quad.integrate(lambda z, k=k: z ** k)
            expect = 2j * np.pi if (k + 1) % nq == 0 else 0.0
            res = max(res, abs(val - expect))
        checks.append(_check(f"exactness-n{nq}", res, 1e-13))
    quad = unit_circle_quadrature(32)
    res = abs(quad.reversed().integrate(lambda z: 1 / z) + 2j * np.pi)
    checks.append(_check("orientation-reversal", res, 1e-13))
    truth = 2j * np.pi / (1.5 - 0.2)

    def f(z):
        return 1 / ((z - 0.2) * (z - 1.5))
    e64 = abs(unit_circle_quadrature(64).integrate(f) + truth)
    e128 = abs(unit_circle_quadrature(128).integrate(f) + truth)
    checks.append(_check("geometric-convergence-ratio",
                         e128 / e64 if e64 else 0.0, 0.1))
    return checks


_DEFAULT_FAMILIES = (
    ("cyclic-r2", lambda: weights.CyclicUniform(r_size=2, L=2, R=2)),
    ("cyclic-r3", lambda: weights.CyclicUniform(r_size=3, L=1, R=1)),
    ("root-k3", lambda: weights.TwoByTwoRootK(k=3, L=1, M=1)),
    ("periodic-2x1", lambda: weights.Periodic2x1(a0=1.0, a1=0.7, b0=1.2,
                                                 b1=0.5, L=4, M=2, N=2)),
    ("periodic-2x2", lambda: weights.Periodic2x2(
        a=((1.0, 2.0), (1.0, 1.0)), b=((1.0, 2.0), (1.0, 1.0)),
        L=4, M=2, N=2)),
    ("scalar-monomial", lambda: weights.ScalarMonomial(r_size=1, N=2)),
)


def _suite_spectral(args) -> list:
    rng = np.random.default_rng(args.seed)
    if args.family or args.family_json:
        fams = [(args.family or "json", _family_from_args(args))]
    else:
        fams = [(name, make()) for name, make in _DEFAULT_FAMILIES]
    checks = []
    for name, fam in fams:
        sd = fam.spectral()
        res = 0.0
        for _ in range(100):
            z = ((0.5 + 1.5 * rng.random())
                 * np.exp(2j * np.pi * rng.random()))
            res = max(res, weights.check_spectral(sd, fam, z))
        checks.append(_check(f"spectral-{name}", res, 1e-12))
    return checks


def _suite_mops(args) -> list:
    family = _family_from_args(args)
    N = args.N or 2
    quad = unit_circle_quadrature(args.n or default_n())
    system = mops.mop_system(family, quad, N)
    rng = np.random.default_rng(args.seed)
    r = family.r
    checks = []

    res = 0.0
    for _ in range(5):
        P = mops.MatrixPolynomial(rng.standard_normal((N, r, r))
                                  + 1j * rng.standard_normal((N, r, r)))
        z = 0.9 * np.exp(2j * np.pi * rng.random())
        res = max(res, mops.reproducing_residual(system, family, quad, P, z))
    checks.append(_check("reproducing", res, 1e-8))

    checks.append(_check("biorthogonality",
                         mops.biorthogonality_residual(system, family, quad),
                         1e-10))

    res_sf = res_fy = 0.0
    for _ in range(10):
        w = 1.3 * np.exp(2j * np.pi * rng.random())
        z = 0.8 * np.exp(2j * np.pi * rng.random())
        Kf = mops.cd_kernel_formula(system, w, z)
        res_sf = max(res_sf, float(np.max(np.abs(
            mops.cd_kernel_sum(system, w, z) - Kf))))
        res_fy = max(res_fy, float(np.max(np.abs(
            mops.kernel_from_Y(system, family, quad, w, z) - Kf))))
    checks.append(_check("sum-vs-formula", res_sf, 1e-10))
    checks.append(_check("formula-vs-Y", res_fy, 1e-7))

    z0 = 1.7 + 0.3j
    Y = mops.assemble_Y(system, family, quad, z0)
    checks.append(_check("det-Y-unimodular",
                         abs(np.linalg.det(Y) - 1.0), 1e-8))
    return checks


def _suite_surface(args) -> list:
    family = _family_from_args(args)
    N = args.N or 2
    n = args.n or default_n()
    quad = unit_circle_quadrature(n)
    system = mops.mop_system(family, quad, N)
    chart = surface.build_chart(family, N)
    rng = np.random.default_rng(args.seed)
    checks = []

    def kern(wn, zt):
        return surface.frak_R_w_nodes(chart, system, wn, zt)

    zetas = [complex(chart.phi_inv(0, 0.9 * np.exp(2j * np.pi * t)))
             for t in rng.random(5)]
    res = 0.0
    for _ in range(10):
        coeffs = (rng.standard_normal((N, chart.r))
                  + 1j * rng.standard_normal((N, chart.r)))
        p = chart.v_element(coeffs)
        for zt in zetas:
            res = max(res, surface.check_reproducing_plane(
                chart, kern, p, zt, n))
    checks.append(_check("v-member-reproducing", res, 1e-8))

    if args.expect_not_cd:
        def pz(zeta):
            return np.asarray(zeta, dtype=complex)
        res_bad = max(surface.check_reproducing_plane(chart, kern, pz, zt, n)
                      for zt in zetas)
        checks.append(_check("non-cd-witness", res_bad, 1e-2, invert=True))
        try:
            sops.solve_scalar_ops(chart.scalar_weight, chart.gamma_C(n),
                                  chart.r * N)
            checks.append({"check": "scalar-cd-nonexistence",
                           "residual": 0.0, "tolerance": 0.0,
                           "pass": False})
        except SingularSystemError:
            checks.append({"check": "scalar-cd-nonexistence",
                           "residual": float("inf"), "tolerance": 0.0,
                           "pass": True})
    return checks


def _suite_tiling_oracle(args) -> list:
    model = _hexagon_model(args)
    rng = np.random.default_rng(args.seed)
    checks = []
    systems = tiling.enumerate_path_systems(model)
    Z = sum(s.weight for s in systems)
    if model.is_uniform:
        mm = tiling.macmahon_count(model.L, model.M, model.N)
        checks.append(_check("enumeration-vs-macmahon",
                             abs(len(systems) - mm), 0.5))
    checks.append(_check("lgv-vs-enumeration",
                         abs(tiling.lgv_partition_function(model) - Z)
                         / abs(Z), 1e-10))

    singles = [(x, y) for x in range(model.L + 1)
               for y in model.column_range(x)]
    res = max(abs(tiling.point_probability(model, [pt], "determinant")
                  - tiling.point_probability(model, [pt], "enumeration"))
              for pt in singles)
    checks.append(_check("determinant-vs-enumeration-singles", res, 1e-8))

    res = 0.0
    for _ in range(10):
        pts = [singles[i] for i in rng.choice(len(singles), 2,
                                              replace=False)]
        res = max(res, abs(
            tiling.point_probability(model, pts, "determinant")
            - tiling.point_probability(model, pts, "enumeration")))
    checks.append(_check("determinant-vs-enumeration-pairs", res, 1e-8))

    res = max(abs(sum(tiling.column_probabilities(model, x).values())
                  - model.N) for x in range(model.L + 1))
    checks.append(_check("column-sums", res, 1e-7))
    return checks


_SUITES = {
    "contour": _suite_contour,
    "spectral": _suite_spectral,
    "mops": _suite_mops,
    "surface": _suite_surface,
    "tiling-oracle": _suite_tiling_oracle,
}


def cmd_verify(args) -> int:
    if args.suite not in _SUITES:
        raise InvalidArgumentError(
            f"unknown suite {args.suite!r}; known: {sorted(_SUITES)}")
    checks = _SUITES[args.suite](args)
    ok = all(c["pass"] for c in checks)
    report = {"suite": args.suite, "checks": checks, "pass": ok}
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK if ok else EXIT_FAIL


# --- prob command --------------------------------------------------------

def cmd_prob(args) -> int:
    model = _hexagon_model(args)
    points = [_parse_int_pair(tok) for tok in (args.points or [])]
    n = args.n or default_n()

    p_det = tiling.point_probability(model, points, "determinant", n)
    notice = None
    try:
        p_enum = tiling.point_probability(model, points, "enumeration")
    except SizeGuardError as exc:
        p_enum = None
        notice = f"enumeration skipped: {exc}"

    column_sums = {
        str(x): float(sum(tiling.column_probabilities(model, x, n=n)
                          .values()))
        for x in range(model.L + 1)}
    report = {
        "hexagon": {"L": model.L, "N": model.N, "M": model.M,
                    "r": model.r, "q": model.q},
        "points": [[x, y] for x, y in points],
        "probability_determinant": p_det,
        "probability_enumeration": p_enum,
        "column_sums": column_sums,
    }
    if notice:
        report["notice"] = notice
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


# --- argument parsing ----------------------------------------------------

def _add_family_args(p) -> None:
    p.add_argument("--family", help="family tag (cyclic, root-k, "
                                    "periodic-2x1, scalar-monomial)")
    p.add_argument("--family-json",
                   help="inline JSON or @file with {family, params}")
    p.add_argument("--r", type=int, help="matrix size / period")
    p.add_argument("--q", type=int, help="column period (tiling)")
    p.add_argument("--L", type=int)
    p.add_argument("--R", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--weight-N", dest="NW", type=int,
                   help="weight exponent N (periodic families)")
    for name in ("a0", "a1", "b0", "b1"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--a", help="JSON nested list of a-weights (tiling)")
    p.add_argument("--b", help="JSON nested list of b-weights (tiling)")
    p.add_argument("--hexagon", help="L,N,M")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdsurface",
        description="CD kernels for matrix weights, their scalar "
                    "counterparts on genus-0 surfaces, and tiling "
                    "correlation kernels.")
    sub = parser.add_subparsers(dest="command", required=True)

    pk = sub.add_parser("kernel", help="evaluate a kernel table")
    _add_family_args(pk)
    pk.add_argument("--N", type=int, help="kernel degree")
    pk.add_argument("--kind", choices=("matrix", "surface", "tiling"),
                    default="matrix")
    pk.add_argument("--grid", type=int, help="g x g probe grid")
    pk.add_argument("--at", nargs="+",
                    help="explicit w z (or x1,y1 x2,y2) pairs")
    pk.add_argument("--n", type=int, help="quadrature nodes")
    pk.add_argument("--format", choices=("csv", "json"), default="csv")
    pk.add_argument("--output")
    pk.set_defaults(func=cmd_kernel)

    pv = sub.add_parser("verify", help="run a verification suite")
    _add_family_args(pv)
    pv.add_argument("--suite", required=True)
    pv.add_argument("--N", type=int)
    pv.add_argument("--n", type=int)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--expect-not-cd", action="store_true",
                    help="assert the reproducing-failure witness instead "
                         "of full CD behaviour")
    pv.add_argument("--output")
    pv.set_defaults(func=cmd_verify)

    pp = sub.add_parser("prob", help="tiling point probabilities")
    _add_family_args(pp)
    pp.add_argument("--points", nargs="*", help="x,y points")
    pp.add_argument("--n", type=int)
    pp.add_argument("--output")
    pp.set_defaults(func=cmd_prob)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _CONFIG_ERRORS as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CDSurfaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

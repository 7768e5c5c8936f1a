"""Command-line front end.

Exit codes
----------
0  success (``bound``: maximal-dimension entanglement certified, ``final_bound > 0``)
1  ``verify``: at least one check failed
2  input error (unreadable or malformed file, invariant violated, bad option)
3  ``bound``: inconclusive, ``final_bound == 0``
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .axisym import (
    AxisymState,
    c2_axisym,
    c2_axisym_normalized,
    cg_axisym,
    coords_xy,
    distance_lower_bound,
)
from .core import MAX_DIM, InvalidStateError, as_density_matrix, as_pure_state, dm_from_pure
from .multipartite import cluster_report
from .oracles import convex_roof_upper
from .pure_measures import cg_of_F
from .slopt import BoundConfig, best_bound
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3


class InputError(Exception):
    pass


def _matrix(obj: dict, key_re: str = "re", key_im: str = "im") -> np.ndarray:
    if key_re not in obj:
        raise InputError(f"missing key {key_re!r}")
    try:
        re = np.array(obj[key_re], dtype=np.float64)
        im = np.array(obj.get(key_im, np.zeros_like(re)), dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix entries must be numbers: {exc}") from None
    if re.shape != im.shape:
        raise InputError(f"'re' and 'im' shapes differ: {re.shape} vs {im.shape}")
    return re + 1j * im


def load_state(path: str, max_dim: int = MAX_DIM) -> tuple[np.ndarray, str]:
    """Read a state file; returns the density matrix and the SHA-256 of the file bytes.

    Two layouts are accepted::

        {"d": 3, "re": [[...]], "im": [[...]]}            # d^2 x d^2 density matrix
        {"pure": {"d": 3, "re": [[...]], "im": [[...]]}}  # d x d amplitude matrix
    """
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    digest = hashlib.sha256(raw).hexdigest()
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path} is not UTF-8 JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise InputError("top-level JSON value must be an object")
    try:
        if "pure" in obj:
            sub = obj["pure"]
            if not isinstance(sub, dict):
                raise InputError("'pure' must be an object")
            c = _matrix(sub)
            d = sub.get("d")
            if d is not None and c.shape != (d, d):
                raise InputError(f"pure amplitudes must be {d}x{d}, got {c.shape}")
            rho = dm_from_pure(as_pure_state(c, max_dim=max_dim))
        else:
            rho = _matrix(obj)
            d = obj.get("d")
            if d is not None and rho.shape != (d * d, d * d):
                raise InputError(f"density matrix must be {d * d}x{d * d}, got {rho.shape}")
            rho = as_density_matrix(rho, max_dim=max_dim)
    except InvalidStateError as exc:
        raise InputError(str(exc)) from None
    return rho, digest


def write_state(path: str, rho: np.ndarray) -> None:
    d = int(round(math.sqrt(rho.shape[0])))
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"d": d, "re": rho.real.tolist(), "im": rho.imag.tolist()}, fh)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


# --------------------------------------------------------------------------
# commands


def cmd_bound(args) -> int:
    rho, digest = load_state(args.input, max_dim=args.max_dim)
    cfg = BoundConfig(
        use_nf=args.nf,
        use_lu=args.lu_opt,
        use_phases=args.phases,
        restarts=args.restarts,
        seed=args.seed,
    )
    rep = best_bound(rho, cfg)
    rep.input_digest = digest
    if args.upper_trials > 0:
        t0 = time.perf_counter()
        rep.upper_bound = convex_roof_upper(rho, trials=args.upper_trials, seed=args.seed).value
        rep.timings["upper_ms"] = 1e3 * (time.perf_counter() - t0)
    if args.format == "json":
        print(_dump(rep.as_dict(include_timings=args.timings)))
    else:
        print(f"input      {digest}")
        print(f"d          {rep.d}")
        print(f"fidelity   {rep.fidelity:.12g}")
        if rep.fidelity_optimized is not None:
            print(f"fidelity*  {rep.fidelity_optimized:.12g}")
        for name, val in sorted(rep.lower_bounds().items()):
            print(f"{name:<17}{val:.12g}")
        if rep.trace_factor is not None:
            print(f"trace factor     {rep.trace_factor:.12g}")
        for k, v in sorted(rep.distance_bounds.items()):
            print(f"distance k={k:<5}{v:.12g}")
        if rep.upper_bound is not None:
            print(f"upper bound      {rep.upper_bound:.12g}")
        print(f"final bound      {rep.final_bound:.12g}{'  (exact)' if rep.exact else ''}")
        if args.timings:
            for k, v in sorted(rep.timings.items()):
                print(f"{k:<17}{v:.3f}")
    return EXIT_OK if rep.final_bound > 0 else EXIT_INCONCLUSIVE


def curve_rows(d: int, samples: int) -> list[dict]:
    """Axisymmetric bounds along the ``c = 0`` edge of the triangle, ``F`` from 0 to 1."""
    rows = []
    lo = (d - 1) / d
    for F in np.linspace(0.0, 1.0, samples):
        F = float(F)
        b = (F - 1.0 / d) / (d - 1)
        xy = coords_xy(AxisymState(d, 1.0 / d, b, 0.0))
        rows.append(
            {
                "F": F,
                "cg_axisym": cg_axisym(F, d),
                "c2_axisym": c2_axisym(F, d),
                "c2_normalized": c2_axisym_normalized(F, d),
                "cg_of_F": cg_of_F(d, F).cg if F >= lo else None,
                "x": xy.x,
                "y": xy.y,
            }
        )
    return rows


CURVE_COLUMNS = ("F", "cg_axisym", "c2_axisym", "c2_normalized", "cg_of_F", "x", "y")


def cmd_curve(args) -> int:
    if args.d < 2 or args.samples < 2:
        raise InputError("--d must be >= 2 and --samples >= 2")
    rows = curve_rows(args.d, args.samples)
    try:
        fh = open(args.out, "w", newline="", encoding="utf-8") if args.out != "-" else sys.stdout
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc.strerror}") from None
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVE_COLUMNS)
        for r in rows:
            w.writerow(["" if r[c] is None else repr(float(r[c])) for c in CURVE_COLUMNS])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_cluster(args) -> int:
    n = args.qubits
    if n % 2 or not 4 <= n <= 12:
        raise InputError(f"--qubits must be even with 4 <= N <= 12, got {n}")
    rows = cluster_report(n, restarts=args.restarts, seed=args.seed)
    if args.format == "json":
        print(_dump({"n": n, "rows": [r.as_dict() for r in rows]}))
    elif args.format == "csv":
        cols = ["partition", "d", "schmidt_rank", "cg_pure", "f_opt", "w_star", "applicable", "gme_reference"]
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            dct = r.as_dict()
            w.writerow([dct[c] if not isinstance(dct[c], float) else repr(dct[c]) for c in cols])
    else:
        print(f"{'partition':<18}{'rank':>5}{'cg_pure':>10}{'f_opt':>10}{'w_star':>12}  gme_ref")
        for r in rows:
            w_txt = f"{r.threshold.w_star:12.6f}" if r.applicable else f"{'n/a':>12}"
            print(
                f"{r.label:<18}{r.schmidt_rank:>5}{r.cg_pure:>10.6f}{r.threshold.f_opt:>10.6f}"
                f"{w_txt}  {r.threshold.gme_reference:.6f}"
            )
        best = max(r.threshold.w_star for r in rows)
        print(f"max w_star = {best:.9f}   2^(-N/2) = {2.0 ** (-n / 2):.9f}")
    return EXIT_OK


def cmd_distance(args) -> int:
    rho, _ = load_state(args.input, max_dim=args.max_dim)
    d = int(round(math.sqrt(rho.shape[0])))
    k = args.schmidt_number
    if not 1 <= k <= d - 1:
        raise InputError(f"--schmidt-number must lie in [1, {d - 1}], got {k}")
    print(repr(distance_lower_bound(rho, k)))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    ok = True
    for name in names:
        res = run_suite(name, seed=args.seed)
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {name}: {res.checked - len(res.failures)}/{res.checked} checks")
        for f in res.failures[:10]:
            print(f"  {f}")
        ok &= res.passed
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gconc", description="Lower bounds on the G-concurrence of bipartite states.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="lower-bound the G-concurrence of a state file")
    b.add_argument("input")
    b.add_argument("--lu-opt", dest="lu_opt", action=argparse.BooleanOptionalAction, default=True)
    b.add_argument("--nf", action=argparse.BooleanOptionalAction, default=True)
    b.add_argument("--phases", action=argparse.BooleanOptionalAction, default=True)
    b.add_argument("--restarts", type=int, default=8)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--upper-trials", dest="upper_trials", type=int, default=0)
    b.add_argument("--max-dim", dest="max_dim", type=int, default=MAX_DIM)
    b.add_argument("--timings", action="store_true", help="include per-stage timings (breaks byte-reproducibility)")
    fmt = b.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    b.set_defaults(func=cmd_bound, format="json")

    c = sub.add_parser("curve", help="axisymmetric bounds on an F grid as CSV")
    c.add_argument("--d", type=int, default=4)
    c.add_argument("--samples", type=int, default=101)
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_curve)

    cl = sub.add_parser("cluster", help="noise thresholds of linear cluster states")
    cl.add_argument("--qubits", type=int, default=4)
    cl.add_argument("--restarts", type=int, default=8)
    cl.add_argument("--seed", type=int, default=0)
    fmt = cl.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    cl.set_defaults(func=cmd_cluster, format="text")

    ds = sub.add_parser("distance", help="lower bound on the HS distance to Schmidt number <= k")
    ds.add_argument("input")
    ds.add_argument("--schmidt-number", dest="schmidt_number", type=int, required=True)
    ds.add_argument("--max-dim", dest="max_dim", type=int, default=MAX_DIM)
    ds.set_defaults(func=cmd_distance)

    v = sub.add_parser("verify", help="run the randomized oracle checks")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"gconc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

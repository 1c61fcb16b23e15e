"""Command-line front end: ``gmeander <subcommand> [options]``.

Subcommands: validate, kernel, correlate, simulate, converge, dump-basis.
Exit codes: 0 success, 1 validation failure, 2 usage or configuration error,
3 numerical convergence failure.

Options may also come from a ``key = value`` file given with ``--config``
(``#`` starts a comment, dashes and underscores in keys are interchangeable);
flags given on the command line override the file.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

from .differint import ConvergenceError
from .params import AdmissibilityError, ModelParams, TimeGrid

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


# ------------------------------------------------------------------ parsing

def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text).strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text) -> list[int]:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _slices(text) -> list[list[float]]:
    """'0.5,1.2;0.8;' → [[0.5, 1.2], [0.8], []] (one group per time slice)."""
    return [_floats(part) for part in str(text).split(";")]


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; returns raw strings keyed with underscores."""
    out = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from exc
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            out[key.replace("-", "_")] = val
    return out


def resolve_threads(flag) -> int:
    """Thread count: flag, else MEANDER_THREADS, else the hardware default."""
    if flag is not None:
        n = flag
    elif os.environ.get("MEANDER_THREADS", "").strip():
        try:
            n = int(os.environ["MEANDER_THREADS"])
        except ValueError as exc:
            raise ConfigError("MEANDER_THREADS must be a positive integer") from exc
    else:
        n = os.cpu_count() or 1
    if n < 1:
        raise ConfigError("thread count must be positive")
    return n


def _positive_int(text) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


# (option, type, default, help) per subcommand; None defaults mean "required
# somewhere" only where the command checks for it
_COMMON = [
    ("--config", str, None, "key = value file; flags override it"),
    ("--threads", _positive_int, None, "worker threads (default: MEANDER_THREADS, else CPU count)"),
    ("--out", str, None, "output path (default: stdout)"),
]
_PARAMS = [
    ("--nu", float, 0.5, "Bessel index ν > −1"),
    ("--kappa", float, 1.0, "drift exponent 0 ≤ κ < 2(ν+1)"),
]

OPTIONS = {
    "validate": _COMMON + [
        ("--suites", str, "all", "comma-separated suites: specfun,differint,meander,skeworth,kernels,pfaffian,asymptotics,all"),
        ("--nu", float, None, "also run the parameter checks at this ν"),
        ("--kappa", float, None, "also run the parameter checks at this κ"),
    ],
    "kernel": _COMMON + _PARAMS + [
        ("--mode", str, "finite", "finite | infinite | homogeneous"),
        ("--N", int, 2, "particle number (finite mode, even)"),
        ("--T", float, 1.0, "time horizon (finite mode)"),
        ("--times", _floats, None, "observation times t_m (finite) or shifted times s_m ≤ 0"),
        ("--grid-x", _floats, None, "x values"),
        ("--grid-y", _floats, None, "y values"),
    ],
    "correlate": _COMMON + _PARAMS + [
        ("--mode", str, "finite", "finite | infinite | homogeneous"),
        ("--N", int, 2, "particle number (finite mode, even)"),
        ("--T", float, 1.0, "time horizon (finite mode)"),
        ("--times", _floats, None, "observation times (finite mode: T is appended) or shifted times"),
        ("--points", _slices, None, "points per time slice, e.g. '0.5,1.2;0.8'"),
    ],
    "simulate": _COMMON + _PARAMS + [
        ("--N", int, 1, "particle number"),
        ("--T", float, 1.0, "time horizon"),
        ("--times", _floats, None, "observation times (default: n-steps equal steps)"),
        ("--scheme", str, "exact_1particle", "exact_1particle (N = 1) | sde_euler (κ = 0)"),
        ("--paths", _positive_int, 1000, "number of paths"),
        ("--steps", _positive_int, 10, "number of observation steps (or Euler steps)"),
        ("--seed", int, 0, "random seed"),
    ],
    "converge": _COMMON + _PARAMS + [
        ("--mode", str, "R_even", "R_even | R_odd | Phi_even | Phi_odd | ptilde | I2lc | kernel"),
        ("--N", _ints, [50, 100, 200], "increasing list of N"),
        ("--theta", float, None, "scaled index θ = k/N"),
        ("--x", float, 1.0, "x"),
        ("--y", float, 2.0, "y (ptilde mode)"),
        ("--c", float, -2.0, "order c (I2lc mode)"),
        ("--times", _floats, None, "shifted times (default -2,-1; kernel mode -1,-0.5)"),
        ("--grid", _floats, [0.5, 1.0, 2.0], "points (kernel mode)"),
    ],
    "dump-basis": _COMMON + _PARAMS + [
        ("--K", int, 10, "degree cap"),
    ],
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gmeander", description="Non-colliding generalized meanders: kernels, "
                                 "correlations and validation.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, opts in OPTIONS.items():
        sp = sub.add_parser(name)
        for flag, typ, _, hlp in opts:
            sp.add_argument(flag, type=typ, default=None, help=hlp)
    return ap


def merged_options(args: argparse.Namespace) -> dict:
    """Defaults < config file < command-line flags."""
    opts = OPTIONS[args.command]
    types = {f.lstrip("-").replace("-", "_"): t for f, t, _, _ in opts}
    merged = {f.lstrip("-").replace("-", "_"): d for f, _, d, _ in opts}
    if args.config:
        for k, raw in read_config(args.config).items():
            if k not in types or k == "config":
                raise ConfigError(f"unknown config key {k!r} for {args.command}")
            try:
                merged[k] = types[k](raw)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ConfigError(f"bad value for {k!r}: {exc}") from exc
    for k, v in vars(args).items():
        if k != "command" and v is not None:
            merged[k] = v
    return merged


# ------------------------------------------------------------------- output

def fmt(v) -> str:
    return f"{float(v):.17g}"


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _write_csv(path, header, rows):
    with _sink(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([c if isinstance(c, (int, str)) else fmt(c) for c in r])


def _write_json(path, obj):
    with _sink(path) as fh:
        json.dump(obj, fh, indent=2, allow_nan=True)
        fh.write("\n")


# ----------------------------------------------------------------- commands

def _params(o, N=2, T=1.0, even=True) -> ModelParams:
    return ModelParams(o["nu"], o["kappa"], N=N, T=T, require_even=even)


def cmd_validate(o) -> int:
    from .validation import run_suites

    names = [s.strip() for s in o["suites"].split(",") if s.strip()]
    try:
        checks = run_suites(names)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from exc
    if o["nu"] is not None or o["kappa"] is not None:
        if o["nu"] is None or o["kappa"] is None:
            raise ConfigError("--nu and --kappa go together")
        checks += _parameter_checks(ModelParams(o["nu"], o["kappa"]))
    ok = all(c["pass"] for c in checks)
    _write_json(o["out"], {"suites": names, "all_pass": ok, "checks": checks})
    return EXIT_OK if ok else EXIT_FAIL


def _parameter_checks(p: ModelParams) -> list[dict]:
    """Checks at user-supplied (ν, κ)."""
    import numpy as np
    from scipy import integrate

    from .kernels import FiniteKernel
    from .pfaffian import pfaffian, CorrelationRequest, correlation
    from .skeworth import SkewBasis
    from .validation import Check

    out = []
    res = SkewBasis.build(p, K=40).inverse_residual()
    out.append(Check("alpha.beta = I at the given parameters", "inverse coefficient matrices", res, 0.0, 1e-9, res <= 1e-9))
    q = p.with_(N=2, T=1.0)
    g = TimeGrid(1.0, [0.5])
    fk = FiniteKernel(q, g)
    v = integrate.quad(lambda y: fk.S_tilde(1, y, 1, y), 0, np.inf, limit=400, epsabs=1e-12)[0]
    out.append(Check("one-point normalization N=2 at the given parameters", "one-point correlation integrates to N",
                     v, 2.0, 1e-4, abs(v - 2) <= 1e-4))
    A = correlation(CorrelationRequest("finite", q, g, [[0.4, 1.1], [0.9]]), fk).matrix
    d = np.linalg.det(A)
    err = abs(pfaffian(A) ** 2 - d) / max(abs(d), 1e-300)
    out.append(Check("Pf^2 = det on a kernel matrix", "Pfaffian definition", err, 0.0, 1e-10, err <= 1e-10))
    return [dict(c.as_dict(), suite="params") for c in out]


def _kernel_rows(o):
    from .kernels import FiniteKernel, InfiniteKernel, homogeneous_kernel

    mode = o["mode"]
    times, xs, ys = o["times"], o["grid_x"], o["grid_y"]
    if not xs or not ys:
        raise ConfigError("--grid-x and --grid-y are required")
    if mode == "finite":
        p = _params(o, N=o["N"], T=o["T"])
        grid = TimeGrid(p.T, times or [])
        prov = FiniteKernel(p, grid)
        idx = range(1, grid.M + 2)
        block = prov.block
    elif mode == "infinite":
        if not times:
            raise ConfigError("--times (shifted times) is required in infinite mode")
        if any(s >= 0 for s in times):
            raise ConfigError("infinite-mode kernels need shifted times s < 0")
        prov = InfiniteKernel(_params(o), tuple(times))
        idx = range(1, len(times) + 1)
        block = prov.block
    elif mode == "homogeneous":
        if not times:
            raise ConfigError("--times (shifted times) is required in homogeneous mode")
        nu = _params(o).nu
        idx = range(1, len(times) + 1)

        def block(m, x, n, y):
            s, t = times[m - 1], times[n - 1]
            return (0.0, homogeneous_kernel(nu, s, x, t, y), homogeneous_kernel(nu, t, y, s, x), 0.0)
    else:
        raise ConfigError(f"unknown mode {mode!r}")
    jobs = [(m, x, n, y) for m in idx for n in idx for x in xs for y in ys]

    def row(j):
        b = block(*j)
        vals = b if isinstance(b, tuple) else (b.d, b.s_fwd, b.s_bwd, b.i)
        return list(j) + [float(v) for v in vals]

    with ThreadPoolExecutor(resolve_threads(o["threads"])) as ex:
        return list(ex.map(row, jobs))


def cmd_kernel(o) -> int:
    rows = _kernel_rows(o)
    _write_csv(o["out"], ["m", "x", "n", "y", "D", "S_fwd", "S_bwd", "I"], rows)
    return EXIT_OK


def cmd_correlate(o) -> int:
    from .pfaffian import CorrelationRequest, correlation

    if not o["points"]:
        raise ConfigError("--points is required")
    mode = o["mode"]
    if mode == "finite":
        p = _params(o, N=o["N"], T=o["T"])
        times = TimeGrid(p.T, o["times"] or [])
    else:
        if not o["times"]:
            raise ConfigError("--times (shifted times) is required")
        p = _params(o)
        times = tuple(o["times"])
    res = correlation(CorrelationRequest(mode, p, times, o["points"]))
    _write_json(o["out"], res.as_dict())
    return EXIT_OK


def cmd_simulate(o) -> int:
    from .meander import simulate_paths, write_paths_csv

    p = _params(o, N=o["N"], T=o["T"], even=False)
    scheme = {"exact": "exact_1particle", "euler": "sde_euler"}.get(o["scheme"], o["scheme"])
    paths = simulate_paths(p, scheme, o["paths"], o["steps"], o["seed"], times=o["times"])
    with _sink(o["out"]) as fh:
        write_paths_csv(paths, fh)
    return EXIT_OK


def cmd_converge(o) -> int:
    from .kernels import asymptotic_validate, kernel_convergence

    _params(o)  # admissibility
    Ns = o["N"]
    if o["mode"] == "kernel":
        shifts = tuple(o["times"] or (-1.0, -0.5))
        reps = kernel_convergence(o["nu"], o["kappa"], Ns, shifts, tuple(o["grid"]))
        rows = [[r.name, n, f, l, e] for r in reps for n, f, l, e in r.rows()]
        _write_csv(o["out"], ["entry", "N", "finite", "limit", "rel_error"], rows)
        ok = all(r.passed for r in reps)
    else:
        shifts = tuple(o["times"] or (-2.0, -1.0))
        try:
            r = asymptotic_validate(o["nu"], o["kappa"], Ns, o["mode"], theta=o["theta"], x=o["x"],
                                    y=o["y"], shifts=shifts, c=o["c"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        _write_csv(o["out"], ["N", "finite", "limit", "rel_error"], [list(t) for t in r.rows()])
        ok = r.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dump_basis(o) -> int:
    from .skeworth import SkewBasis

    b = SkewBasis.build(_params(o), K=o["K"])
    rows = []
    for name, M in (("alpha", b.alpha), ("beta", b.beta)):
        for i in range(M.shape[0]):
            for j in range(i + 1):
                rows.append([name, i, j, M[i, j]])
    for q, r in enumerate(b.rstar):
        rows.append(["rstar", q, q, r])
    _write_csv(o["out"], ["table", "i", "j", "value"], rows)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "kernel": cmd_kernel,
    "correlate": cmd_correlate,
    "simulate": cmd_simulate,
    "converge": cmd_converge,
    "dump-basis": cmd_dump_basis,
}


_NUMERIC = re.compile(r"^-[\d.]")


def _glue_negatives(argv):
    """'--times -1,0' → '--times=-1,0' so argparse does not read a flag."""
    out = []
    for tok in argv:
        if out and _NUMERIC.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negatives(argv))  # exits 2 on usage errors
    try:
        opts = merged_options(args)
        if opts.get("threads") is not None or args.command in ("kernel", "converge"):
            resolve_threads(opts.get("threads"))
        return COMMANDS[args.command](opts)
    except ConvergenceError as exc:
        print(f"gmeander: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ConfigError, AdmissibilityError) as exc:
        print(f"gmeander: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"gmeander: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

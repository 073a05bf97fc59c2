"""Command-line interface.

Exit codes: 0 when every verdict passes, 1 when some verdict fails, 2 on
usage or I/O errors. Settings come from built-in defaults, then an optional
``--config`` file of ``key = value`` lines, then command-line flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__, rgraph
from .eigensym import eigenvalues
from .energy import graph_energy, laplacian_energy
from .experiments import KINDS, ExperimentConfig, run_experiment, summarize, write_results
from .freeconv import DEFAULT_DEGREE, abs_moment_bounds, psi_moments
from .specdist import SemicircleLaw, esd, ks_distance

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MATRICES = {
    "adjacency": lambda g, p: rgraph.adjacency(g),
    "laplacian": lambda g, p: rgraph.laplacian(g),
    "gutman": lambda g, p: rgraph.gutman_matrix(g),
    "centered": rgraph.centered_adjacency,
    "l1": rgraph.l1_matrix,
    "l2": rgraph.l2_matrix,
}

DEFAULTS = {
    "n": "100",
    "p": "0.5",
    "trials": "10",
    "seed": "0",
    "out": None,
    "format": "json",
    "margin": "0.02",
    "method": "householder",
    "jobs": "1",
    "degree": str(DEFAULT_DEGREE),
    "matrix": None,
}


class UsageError(Exception):
    pass


def read_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    settings = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown setting {key!r}")
        settings[key] = value
    return settings


def _settings(args) -> dict[str, str]:
    merged = dict(DEFAULTS)
    if args.config is not None:
        merged.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _single(values: list, name: str):
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value for this command")
    return values[0]


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _table(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _graph(s):
    n = _single(_int_list(s["n"]), "n")
    p = _single(_float_list(s["p"]), "p")
    return rgraph.sample_graph(n, p, int(s["seed"])), p


def cmd_sample(s) -> int:
    g, _ = _graph(s)
    rec = g.to_record()
    _emit(json.dumps(rec) + "\n" if s["format"] == "json" else _table([rec]), s["out"])
    return EXIT_OK


def _cmd_energy(s, fn) -> int:
    g, _ = _graph(s)
    rep = fn(g, s["method"])
    rec = {"n": g.n, "p": g.p, "seed": g.seed, **rep.as_dict()}
    _emit(json.dumps(rec) + "\n" if s["format"] == "json" else _table([rec]), s["out"])
    return EXIT_OK


def cmd_energy(s) -> int:
    return _cmd_energy(s, graph_energy)


def cmd_lenergy(s) -> int:
    return _cmd_energy(s, laplacian_energy)


def cmd_spectrum(s) -> int:
    g, p = _graph(s)
    values = eigenvalues(MATRICES[s["matrix"] or "adjacency"](g, p), s["method"]).values
    if s["format"] == "json":
        text = json.dumps(values.tolist()) + "\n"
    else:
        text = "".join(f"{v:.17g}\n" for v in values.tolist())
    _emit(text, s["out"])
    return EXIT_OK


def cmd_esd(s) -> int:
    """ESD of a scaled matrix: ``n**-0.5`` for adjacency-type matrices and
    ``(sigma sqrt(n))**-1`` for Laplacian-type ones."""
    g, p = _graph(s)
    kind = s["matrix"] or "centered"
    sigma = math.sqrt(p * (1.0 - p))
    if kind in ("adjacency", "centered"):
        scale = 1.0 / math.sqrt(g.n)
    elif sigma > 0:
        scale = 1.0 / (sigma * math.sqrt(g.n))
    else:
        raise UsageError(f"ESD of {kind} needs 0 < p < 1")
    dist = esd(eigenvalues(MATRICES[kind](g, p), s["method"]), scale)
    if s["format"] == "csv":
        _emit(dist.to_csv(), s["out"])
        return EXIT_OK
    rec = {"n": g.n, "p": p, "seed": g.seed, "matrix": kind, "scale": scale,
           "samples": dist.samples.tolist()}
    if kind == "centered" and sigma > 0:
        rec["ks_semicircle"] = ks_distance(dist, SemicircleLaw(sigma))
    _emit(json.dumps(rec) + "\n", s["out"])
    return EXIT_OK


def cmd_freeconv(s) -> int:
    degree = int(s["degree"])
    if degree < 1:
        raise UsageError("--degree must be at least 1")
    moments = psi_moments(degree)
    if s["format"] == "json":
        text = moments.to_json() + "\n"
    else:
        text = "k,moment\n" + "".join(
            f"{k},{m}\n" for k, m in enumerate(moments.to_strings(), start=1)
        )
    _emit(text, s["out"])
    if degree >= 4:
        lo, hi = abs_moment_bounds(moments[2], moments[4])
        print(f"E|X| in [{lo:.12g}, {hi:.12g}]", file=sys.stderr)
    return EXIT_OK


def cmd_experiment(s, kind: str) -> int:
    cfg = ExperimentConfig(
        kind=kind,
        n_list=_int_list(s["n"]),
        p_list=_float_list(s["p"]),
        trials=int(s["trials"]),
        seed=int(s["seed"]),
        out=s["out"],
        margin=float(s["margin"]),
        method=s["method"],
        jobs=int(s["jobs"]),
    )
    records = run_experiment(cfg)
    if cfg.out is not None:
        csv_path, json_path = write_results(records, cfg)
        print(f"wrote {csv_path} and {json_path}", file=sys.stderr)
    summary = summarize(records, cfg)
    if s["format"] == "json":
        sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    else:
        for cell in summary["cells"]:
            fractions = ", ".join(
                f"{k}={v:.3f}" for k, v in cell["verdict_fraction"].items() if v is not None
            )
            status = "PASS" if cell["passed"] else "FAIL"
            print(f"{status} n={cell['n']} p={cell['p']} trials={cell['trials']} {fractions}")
    return EXIT_OK if summary["all_pass"] else EXIT_FAIL


COMMANDS = {
    "sample": cmd_sample,
    "energy": cmd_energy,
    "lenergy": cmd_lenergy,
    "spectrum": cmd_spectrum,
    "esd": cmd_esd,
    "freeconv": cmd_freeconv,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", help="vertex count (comma-separated list for experiments)")
    common.add_argument("--p", help="edge probability (comma-separated list for experiments)")
    common.add_argument("--trials", help="trials per (n, p) cell")
    common.add_argument("--seed", help="graph seed, or master seed for experiments")
    common.add_argument("--out", help="output path (stdout when omitted)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--method", choices=("householder", "lapack"), help="eigensolver")

    parser = argparse.ArgumentParser(
        prog="graphenergy", description="Spectral energy of Erdős–Rényi random graphs."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sample", parents=[common], help="sample G(n, p) and print its record")
    sub.add_parser("energy", parents=[common], help="graph energy of a sample")
    sub.add_parser("lenergy", parents=[common], help="Laplacian energy of a sample")
    for name, what in (("spectrum", "eigenvalues"), ("esd", "empirical spectral distribution")):
        sp = sub.add_parser(name, parents=[common], help=f"{what} of a sample matrix")
        sp.add_argument("--matrix", choices=sorted(MATRICES))
    fc = sub.add_parser("freeconv", parents=[common],
                        help="exact moments of semicircle (+) normal free convolution")
    fc.add_argument("--degree", help=f"highest moment order (default {DEFAULT_DEGREE})")
    ex = sub.add_parser("experiment", parents=[common], help="run a Monte Carlo campaign")
    ex.add_argument("kind", choices=KINDS)
    ex.add_argument("--margin", help="statistical margin added to every verdict band")
    ex.add_argument("--jobs", help="worker processes")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        s = _settings(args)
        if args.command == "experiment":
            return cmd_experiment(s, args.kind)
        return COMMANDS[args.command](s)
    except (UsageError, ValueError) as exc:
        print(f"graphenergy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"graphenergy: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

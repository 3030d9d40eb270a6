"""Command-line interface: batch analysis, file formats, reports.

File formats (all JSON, schema-versioned, unknown fields rejected):

* game ``qxor/1``: ``n``, ``m``, ``G_re``, ``G_im`` as (n*m) x (n*m)
  row-major nested lists under the composite index ``(i, k) -> i*m + k``,
  optional ``episodes`` list of ``{"p", "c", "rho_re", "rho_im"}``.
* tuple ``qxor-tuple/1``: ``entries_re``/``entries_im`` lists of matrices.
* tensor ``qxor-tensor/1``: ``X``/``Y`` space descriptors
  (``{"kind": "matrix"|"dual", "dim": n}``) and ``coeff_re``/``coeff_im``.

JSON reports are byte-identical for identical inputs and seed; wall-clock
timings appear only in CSV reports, whose timing columns are excluded from
the determinism guarantee. Exit codes: 0 success, 1 selftest failure,
2 parse error, 3 validation error, 4 solver quality below minimum.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .budget import SolverBudget
from .config import ValidationError
from .factor import TensorElement, gamma_rc_upper, gamma_to_Gamma
from .games import (
    Episode,
    QuantumXorGame,
    chsh,
    diagonal_game,
    hadamard_game,
    random_game,
    swap_game,
)
from .maps import Space
from .solvers import HierarchyReport, analyze_game
from .tuples import col_norm, rc_norm, row_norm, rplus2c_split

EXIT_OK = 0
EXIT_SELFTEST_FAIL = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_QUALITY = 4


class SchemaError(ValueError):
    """The payload does not match the declared schema."""


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    restarts: int = 8
    max_sweeps: int = 120
    tol: float = 1e-8
    messages: tuple = (1, 2)
    ancilla: tuple = ((1, 1), (2, 2))
    levels: tuple = (1, 2)
    fmt: str = "json"
    out: str | None = None
    threads: int = 1

    def __post_init__(self):
        if not self.messages or not self.ancilla or not self.levels:
            raise ValidationError("schedules must be nonempty")
        if self.fmt not in ("json", "csv"):
            raise ValidationError("format must be json or csv")

    def budget(self) -> SolverBudget:
        return SolverBudget(
            restarts=self.restarts, max_sweeps=self.max_sweeps,
            tol=self.tol, seed=self.seed,
        )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _matrix_to_lists(m: np.ndarray):
    return [[float(v.real) for v in row] for row in m], [
        [float(v.imag) for v in row] for row in m
    ]


def _lists_to_matrix(re, im, what: str) -> np.ndarray:
    try:
        a = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"field {what} is not a numeric matrix: {exc}") from exc
    if a.ndim != 2:
        raise SchemaError(f"field {what} must be a 2-d array")
    return a


def game_to_payload(game: QuantumXorGame) -> dict:
    re, im = _matrix_to_lists(np.asarray(game.G))
    payload = {"schema": "qxor/1", "n": game.n, "m": game.m, "G_re": re, "G_im": im}
    if game.episodes is not None:
        eps = []
        for e in game.episodes:
            rre, rim = _matrix_to_lists(np.asarray(e.rho))
            eps.append({"p": e.p, "c": e.c, "rho_re": rre, "rho_im": rim})
        payload["episodes"] = eps
    return payload


def game_from_payload(payload: dict) -> QuantumXorGame:
    if not isinstance(payload, dict):
        raise SchemaError("top-level payload must be an object")
    if payload.get("schema") != "qxor/1":
        raise SchemaError("field schema must be 'qxor/1'")
    allowed = {"schema", "n", "m", "G_re", "G_im", "episodes"}
    unknown = sorted(set(payload) - allowed)
    if unknown:
        raise SchemaError(f"unknown field {unknown[0]}")
    for key in ("n", "m", "G_re", "G_im"):
        if key not in payload:
            raise SchemaError(f"missing field {key}")
    n, m = payload["n"], payload["m"]
    if not isinstance(n, int) or not isinstance(m, int) or n < 1 or m < 1:
        raise SchemaError("fields n and m must be positive integers")
    g = _lists_to_matrix(payload["G_re"], payload["G_im"], "G_re/G_im")
    if g.shape != (n * m, n * m):
        raise SchemaError("field G_re has wrong shape for (n, m)")
    episodes = None
    if "episodes" in payload:
        episodes = []
        for idx, e in enumerate(payload["episodes"]):
            extra = sorted(set(e) - {"p", "c", "rho_re", "rho_im"})
            if extra:
                raise SchemaError(f"unknown field episodes[{idx}].{extra[0]}")
            rho = _lists_to_matrix(e["rho_re"], e["rho_im"], f"episodes[{idx}].rho")
            episodes.append(Episode(float(e["p"]), int(e["c"]), rho))
    return QuantumXorGame(n, m, g, episodes=tuple(episodes) if episodes else None)


def _dump_json(obj, path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


CSV_COLUMNS = [
    "game_id", "n", "m", "beta_owq",
    "beta_product_lower", "beta_product_upper",
    "beta_entangled_lower", "beta_entangled_upper", "ent_dA", "ent_dB",
    "pi1o", "pi1cb_lower", "pi1cb_upper",
    "ratio_entangled_vs_owc", "violations",
    "owc_bounds",  # per-message d:lower:upper triples joined by ';'
    "time_total_s",  # excluded from the determinism guarantee
]


def _row_to_csv(row, elapsed: float) -> dict:
    owc = ";".join(
        f"{d}:{iv.lower!r}:{iv.upper!r}" for d, iv in row.beta_owc_per_d
    )
    return {
        "game_id": row.game_id,
        "n": row.n,
        "m": row.m,
        "beta_owq": repr(row.beta_owq),
        "beta_product_lower": repr(row.beta_product.lower),
        "beta_product_upper": repr(row.beta_product.upper),
        "beta_entangled_lower": repr(row.beta_entangled.lower),
        "beta_entangled_upper": repr(row.beta_entangled.upper),
        "ent_dA": row.entangled_dims[0],
        "ent_dB": row.entangled_dims[1],
        "pi1o": repr(row.pi1o),
        "pi1cb_lower": repr(row.pi1cb.lower),
        "pi1cb_upper": repr(row.pi1cb.upper),
        "ratio_entangled_vs_owc": repr(row.ratio_entangled_vs_owc),
        "violations": ";".join(row.violations),
        "owc_bounds": owc,
        "time_total_s": f"{elapsed:.3f}",
    }


def _emit_report(report: HierarchyReport, timings: dict, config: RunConfig):
    if config.fmt == "json":
        _dump_json(report.to_dict(), config.out)
        return
    rows = [_row_to_csv(r, timings.get(r.game_id, 0.0)) for r in report.rows]
    out = config.out
    if out:
        fh = open(out, "w", newline="")
    else:
        fh = sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
    finally:
        if out:
            fh.close()


def _analyze_many(named_games, config: RunConfig):
    budget = config.budget()

    def work(item):
        gid, game = item
        t0 = time.perf_counter()
        row = analyze_game(
            game, gid, budget,
            d_schedule=config.messages,
            ancilla_schedule=config.ancilla,
        )
        return row, time.perf_counter() - t0

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(work, named_games))
    else:
        results = [work(item) for item in named_games]
    rows = tuple(sorted((r for r, _ in results), key=lambda r: r.game_id))
    timings = {r.game_id: dt for r, dt in results}
    max_ratio = max((r.ratio_entangled_vs_owc for r in rows), default=0.0)
    violations = tuple(f"{r.game_id}:{v}" for r in rows for v in r.violations)
    return HierarchyReport(rows, max_ratio, violations), timings


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_analyze(game_file: str, config: RunConfig) -> int:
    try:
        with open(game_file) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        game = game_from_payload(payload)
    except SchemaError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    report, timings = _analyze_many([(game_file, game)], config)
    _emit_report(report, timings, config)
    if report.violations:
        print(
            f"solver quality below minimum: {report.violations[0]}", file=sys.stderr
        )
        return EXIT_QUALITY
    return EXIT_OK


def cmd_hierarchy(count: int, n: int, m: int, config: RunConfig) -> int:
    if count < 1:
        print("validation error: count must be at least one", file=sys.stderr)
        return EXIT_VALIDATION
    games = [
        (f"random-{i:04d}", random_game(n, m, seed=np.random.SeedSequence([config.seed, i])))
        for i in range(count)
    ]
    report, timings = _analyze_many(games, config)
    _emit_report(report, timings, config)
    if report.violations:
        print(
            f"solver quality below minimum: {report.violations[0]}", file=sys.stderr
        )
        return EXIT_QUALITY
    return EXIT_OK


def cmd_gallery(name: str, n: int | None, coeffs: str | None, out: str | None) -> int:
    try:
        if name == "swap":
            game = swap_game(n or 2)
        elif name == "chsh":
            game = chsh()
        elif name == "hadamard":
            game = hadamard_game(n or 2)
        elif name == "diagonal":
            if not coeffs:
                raise ValidationError("diagonal needs --coeffs 'a,b;c,d'")
            m = np.array(
                [[float(v) for v in row.split(",")] for row in coeffs.split(";")]
            )
            game = diagonal_game(m)
        else:
            raise ValidationError(f"unknown gallery name {name!r}")
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _dump_json(game_to_payload(game), out)
    return EXIT_OK


def cmd_norms(tuple_file: str, config: RunConfig) -> int:
    try:
        with open(tuple_file) as fh:
            payload = json.load(fh)
        if payload.get("schema") != "qxor-tuple/1":
            raise SchemaError("field schema must be 'qxor-tuple/1'")
        unknown = sorted(set(payload) - {"schema", "entries_re", "entries_im"})
        if unknown:
            raise SchemaError(f"unknown field {unknown[0]}")
        entries = [
            _lists_to_matrix(re, im, f"entries[{i}]")
            for i, (re, im) in enumerate(zip(payload["entries_re"], payload["entries_im"]))
        ]
    except (OSError, json.JSONDecodeError, KeyError, SchemaError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        t = np.stack(entries)
        res = rplus2c_split(t)
        out = {
            "row": row_norm(t),
            "col": col_norm(t),
            "rc": rc_norm(t),
            "rplus2c": res.value,
            "weight": res.value ** 2,
            "converged": res.converged,
        }
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _dump_json(out, config.out)
    return EXIT_OK


def _space_from_payload(p: dict, what: str) -> Space:
    if not isinstance(p, dict) or set(p) - {"kind", "dim"}:
        raise SchemaError(f"field {what} must be {{kind, dim}}")
    kind, dim = p.get("kind"), p.get("dim")
    if kind not in ("matrix", "dual") or not isinstance(dim, int):
        raise SchemaError(f"field {what} has invalid kind or dim")
    return Space(kind, dim, "full")


def cmd_factor(tensor_file: str, config: RunConfig) -> int:
    try:
        with open(tensor_file) as fh:
            payload = json.load(fh)
        if payload.get("schema") != "qxor-tensor/1":
            raise SchemaError("field schema must be 'qxor-tensor/1'")
        unknown = sorted(set(payload) - {"schema", "X", "Y", "coeff_re", "coeff_im"})
        if unknown:
            raise SchemaError(f"unknown field {unknown[0]}")
        x_space = _space_from_payload(payload["X"], "X")
        y_space = _space_from_payload(payload["Y"], "Y")
        coeff = _lists_to_matrix(payload["coeff_re"], payload["coeff_im"], "coeff")
    except (OSError, json.JSONDecodeError, KeyError, SchemaError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        z = TensorElement(x_space, y_space, coeff)
        res = gamma_rc_upper(z, config.budget())
        out = {
            "gamma_upper": res.gamma_upper,
            "x_norm_upper": res.x_norm_upper,
            "y_norm_upper": res.y_norm_upper,
            "evaluations": res.evaluations,
        }
        if x_space.kind == "dual":
            iv = gamma_to_Gamma(z, res.gamma_upper, config.budget(),
                                schedule=config.levels)
            out["factorization_interval"] = iv.to_dict()
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _dump_json(out, config.out)
    return EXIT_OK


def cmd_selftest(list_only: bool = False) -> int:
    from .acceptance import CRITERIA

    if list_only:
        for crit in CRITERIA:
            print(f"{crit.id}: {crit.title}")
        return EXIT_OK
    first_failure = None
    for crit in CRITERIA:
        t0 = time.perf_counter()
        try:
            crit.run()
            status = "pass"
        except AssertionError as exc:
            status = f"FAIL ({exc})"
            if first_failure is None:
                first_failure = crit.id
        elapsed = time.perf_counter() - t0
        print(f"[{crit.id}] {crit.title}: {status} ({elapsed:.1f}s)")
    if first_failure is not None:
        print(f"selftest failed, first failing criterion: {first_failure}",
              file=sys.stderr)
        return EXIT_SELFTEST_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--sweeps", type=int, default=120)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--messages", type=str, default="1,2",
                   help="comma-separated message counts")
    p.add_argument("--ancilla", type=str, default="1,2",
                   help="comma-separated ancilla dimensions (used symmetrically)")
    p.add_argument("--levels", type=str, default="1,2",
                   help="comma-separated amplification levels")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--threads", type=int, default=1)


def _config_from(args) -> RunConfig:
    messages = tuple(int(v) for v in args.messages.split(","))
    ancilla = tuple((int(v), int(v)) for v in args.ancilla.split(","))
    levels = tuple(int(v) for v in args.levels.split(","))
    return RunConfig(
        seed=args.seed, restarts=args.restarts, max_sweeps=args.sweeps,
        tol=args.tol, messages=messages, ancilla=ancilla, levels=levels,
        fmt=args.format, out=args.out, threads=args.threads,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qxor",
        description="Bias bounds and operator-space norms for quantum XOR games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one game file")
    p.add_argument("game_file")
    _add_common(p)

    p = sub.add_parser("hierarchy", help="analyze random games and aggregate")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    _add_common(p)

    p = sub.add_parser("gallery", help="emit a named game as JSON")
    p.add_argument("name", choices=("swap", "chsh", "hadamard", "diagonal"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--coeffs", type=str, default=None)
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("norms", help="tuple-norm calculator on a tuple file")
    p.add_argument("tuple_file")
    _add_common(p)

    p = sub.add_parser("factor", help="decomposition/factorization bounds on a tensor file")
    p.add_argument("tensor_file")
    _add_common(p)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--list", action="store_true", dest="list_only")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args.game_file, _config_from(args))
        if args.command == "hierarchy":
            return cmd_hierarchy(args.count, args.n, args.m, _config_from(args))
        if args.command == "gallery":
            return cmd_gallery(args.name, args.n, args.coeffs, args.out)
        if args.command == "norms":
            return cmd_norms(args.tuple_file, _config_from(args))
        if args.command == "factor":
            return cmd_factor(args.tensor_file, _config_from(args))
        if args.command == "selftest":
            return cmd_selftest(args.list_only)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())

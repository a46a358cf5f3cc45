"""Command-line front end.

Subcommands: equilibria, sweep, thresholds, pareto, brcurves, verify.
Tables go to stdout (or ``--out``) as CSV or JSON; errors go to stderr.

Exit codes: 0 success, 1 internal failure, 2 invalid input,
3 threshold pattern not found.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bifurcation import TABLE_COLUMNS, InvalidRange, PatternNotFound, find_thresholds, profit_branches
from .equilibria import br_conjugate, enumerate_equilibria, pareto_optimum
from .model import EntangledGame, InvalidParameter, ModelParams
from .oracle import GridSpec, grid_equilibria

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_PATTERN = 0, 1, 2, 3

EQUILIBRIUM_COLUMNS = (
    "gamma", "q1", "q2", "x1", "x2", "u1", "u2", "symmetric", "negative_quantity", "residual",
)
BRCURVE_COLUMNS = ("q_j", "q_i", "which_firm")
VERIFY_GAMMAS = (0.0, 0.1, 0.255, 0.27, 0.285, 0.296, 0.3, 0.6, 1.0)
BRCURVE_POINTS = 1000

DEFAULTS = {"a": 3.0, "b": 5.0, "d": 10.0}
CONFIG_KEYS = {"a": float, "b": float, "d": float, "gamma": float,
               "from": float, "to": float, "steps": int, "format": str, "out": str}
FLAG_DEST = {"from": "gamma_from", "to": "gamma_to"}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    gamma: float | None = None
    gamma_range: tuple[float, float, int] | None = None
    output_format: str | None = None
    output_path: Path | None = None


def read_config(path: str) -> dict:
    """Flat ``key=value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip().lstrip("-")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unrecognised line {raw!r}")
        try:
            values[key] = CONFIG_KEYS[key](val.strip())
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {val.strip()!r}")
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    if args.config:
        try:
            merged.update(read_config(args.config))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}")
    for key in CONFIG_KEYS:
        v = getattr(args, FLAG_DEST.get(key, key), None)
        if v is not None:
            merged[key] = v
    params = ModelParams(merged["a"], merged["b"], merged["d"])
    rng = None
    if all(k in merged for k in ("from", "to", "steps")):
        rng = (merged["from"], merged["to"], merged["steps"])
    out = merged.get("out")
    return RunConfig(
        params=params,
        gamma=merged.get("gamma"),
        gamma_range=rng,
        output_format=merged.get("format"),
        output_path=Path(out) if out else None,
    )


# -- serialisation ------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(format(float(v), ".12g"))


def render_table(columns, rows, fmt: str, params: dict) -> str:
    if fmt == "json":
        doc = {
            "params": {k: _json_value(v) for k, v in params.items()},
            "records": [{c: _json_value(r[c]) for c in columns} for r in rows],
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def render_summary(record: dict, fmt: str | None, params: dict) -> str:
    if fmt in ("csv", "json"):
        return render_table(tuple(record), [record], fmt, params)
    lines = []
    for k, v in record.items():
        if isinstance(v, float) and k.endswith(("residual", "width")):
            lines.append(f"{k}={v:.3e}")
        elif isinstance(v, float):
            lines.append(f"{k}={v:.6f}")
        else:
            lines.append(f"{k}={v}")
    return "\n".join(lines) + "\n"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        cfg.output_path.write_text(text)
    else:
        sys.stdout.write(text)


def _param_dict(cfg: RunConfig, **extra) -> dict:
    p = cfg.params
    return {"a": p.a, "b": p.b, "d": p.d, **extra}


def _require_gamma(cfg: RunConfig) -> float:
    if cfg.gamma is None:
        raise UsageError("--gamma is required")
    return cfg.gamma


def _require_range(cfg: RunConfig) -> tuple[float, float, int]:
    if cfg.gamma_range is None:
        raise UsageError("--from, --to and --steps are required")
    return cfg.gamma_range


# -- commands -----------------------------------------------------------------

def cmd_equilibria(cfg: RunConfig) -> int:
    g = _require_gamma(cfg)
    game = EntangledGame(cfg.params, g)
    rows = []
    for eq in enumerate_equilibria(game):
        rows.append({
            "gamma": g,
            "q1": eq.quantities.q1, "q2": eq.quantities.q2,
            "x1": eq.strategies.x1, "x2": eq.strategies.x2,
            "u1": eq.profits.u1, "u2": eq.profits.u2,
            "symmetric": eq.symmetric,
            "negative_quantity": eq.negative_quantity,
            "residual": eq.residual,
        })
    _emit(render_table(EQUILIBRIUM_COLUMNS, rows, cfg.output_format or "csv", _param_dict(cfg, gamma=g)), cfg)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    lo, hi, steps = _require_range(cfg)
    rows = profit_branches(cfg.params, lo, hi, steps)
    params = _param_dict(cfg, **{"from": lo, "to": hi, "steps": steps})
    _emit(render_table(TABLE_COLUMNS, rows, cfg.output_format or "csv", params), cfg)
    return EXIT_OK


def cmd_thresholds(cfg: RunConfig) -> int:
    th = find_thresholds(cfg.params)
    record = {"gamma1": th.gamma1, "gamma2": th.gamma2, "bracket_width": th.bracket_width}
    _emit(render_summary(record, cfg.output_format, _param_dict(cfg)), cfg)
    return EXIT_OK


def cmd_pareto(cfg: RunConfig) -> int:
    po = pareto_optimum(cfg.params)
    record = {
        "q_star": po.q_star,
        "alpha": po.alpha,
        "beta": po.beta,
        "profit_each": po.profit_each,
        "foc_residual": po.foc_residual(cfg.params.a),
    }
    _emit(render_summary(record, cfg.output_format, _param_dict(cfg)), cfg)
    return EXIT_OK


def cmd_brcurves(cfg: RunConfig) -> int:
    g = _require_gamma(cfg)
    game = EntangledGame(cfg.params, g)
    a = cfg.params.a
    rows = []
    for firm in (1, 2):
        for q in np.linspace(a - 3.0, a + 3.0, BRCURVE_POINTS):
            rows.append({"q_j": float(q), "q_i": br_conjugate(game, float(q)), "which_firm": firm})
    _emit(render_table(BRCURVE_COLUMNS, rows, cfg.output_format or "csv", _param_dict(cfg, gamma=g)), cfg)
    return EXIT_OK


def verify_rows(params: ModelParams, gammas=VERIFY_GAMMAS, tol: float = 1e-5) -> list[dict]:
    rows = []
    for g in gammas:
        game = EntangledGame(params, g)
        grid = GridSpec.around(params.a)
        oracle = grid_equilibria(game, grid)
        enum = [e.quantities for e in enumerate_equilibria(game)]
        err = max(
            (max(abs(x - y) for x, y in zip(p, q)) for p, q in zip(oracle, enum)),
            default=0.0,
        )
        ok = len(oracle) == len(enum) and err <= tol
        rows.append({"gamma": g, "oracle_count": len(oracle), "enumerated_count": len(enum),
                     "max_deviation": err, "pass": ok})
    return rows


def cmd_verify(cfg: RunConfig) -> int:
    rows = verify_rows(cfg.params)
    if cfg.output_format in ("csv", "json"):
        cols = ("gamma", "oracle_count", "enumerated_count", "max_deviation", "pass")
        _emit(render_table(cols, rows, cfg.output_format, _param_dict(cfg)), cfg)
    else:
        lines = [
            f"{'PASS' if r['pass'] else 'FAIL'} gamma={r['gamma']:.6f} "
            f"oracle={r['oracle_count']} enumerated={r['enumerated_count']} "
            f"max_dev={r['max_deviation']:.3e}"
            for r in rows
        ]
        _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_INTERNAL


COMMANDS = {
    "equilibria": cmd_equilibria,
    "sweep": cmd_sweep,
    "thresholds": cmd_thresholds,
    "pareto": cmd_pareto,
    "brcurves": cmd_brcurves,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float)
    common.add_argument("--b", type=float)
    common.add_argument("--d", type=float)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--config", metavar="PATH", help="flat key=value file; flags override it")

    parser = argparse.ArgumentParser(
        prog="qcournot",
        description="Nash equilibria of the entangled quartic-cost Cournot duopoly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("equilibria", "brcurves"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--gamma", type=float)
    p = sub.add_parser("sweep", parents=[common])
    p.add_argument("--from", dest="gamma_from", type=float)
    p.add_argument("--to", dest="gamma_to", type=float)
    p.add_argument("--steps", type=int)
    for name in ("thresholds", "pareto", "verify"):
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, InvalidParameter, InvalidRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PatternNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PATTERN
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    orbiconf homology --input s2.json --n 2 --coeff integral
    orbiconf verify stability --input disk.json --n-max 3
    orbiconf verify comma --n 4 --m 2 --points 6

Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 capacity.
Input files that do not exist on disk are looked up among the bundled
examples (``s2.json``, ``disk.json``, ``football.json``, ``cone3.json`` ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .comma import ActionGroupoid, comma_report
from .config import DEFAULT_CELL_CAPACITY, Coefficients, chi_c_report, conf_homology
from .errors import CapacityError, InputError, NotRegularError, PreconditionError
from .groups import FiniteGroup
from .maps import MapContext, duality_check, verify_dold, verify_stability, verify_transfer_degree
from .orbifold import GlobalQuotientOrbifold

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3

CHECKS = ("stability", "dold", "duality", "transfer", "chi-c", "comma")


@dataclass
class RunConfig:
    command: str
    check: str | None = None
    input: str | None = None
    n: int | None = None
    n_max: int | None = None
    m: int | None = None
    coeff: str = "rational"
    subdiv: int | None = None
    capacity: int = DEFAULT_CELL_CAPACITY
    fmt: str = "json"
    output: str | None = None
    seed: int | None = None
    points: int | None = None
    max_degree: int | None = None
    closed: str = "diagonal"

    def validate(self):
        for name in ("n", "n_max"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise InputError(f"--{name.replace('_', '-')} must be at least 1")
        if self.m is not None and self.m < 0:
            raise InputError("--m must be non-negative")
        if self.coeff not in ("rational", "integral") and not self.coeff.startswith("character:"):
            raise InputError(f"unknown coefficient choice {self.coeff!r}")


def bundled_inputs() -> list[str]:
    return sorted(p.name for p in resources.files("orbiconf.data").iterdir() if p.name.endswith(".json"))


def read_input(path: str) -> str:
    p = Path(path)
    if p.exists():
        return p.read_text()
    bundled = resources.files("orbiconf.data").joinpath(p.name)
    if bundled.is_file():
        return bundled.read_text()
    raise InputError(f"no such input file: {path}")


def load_orbifold(cfg: RunConfig) -> GlobalQuotientOrbifold:
    if cfg.input is None:
        raise InputError("--input is required")
    return GlobalQuotientOrbifold.from_json(read_input(cfg.input), subdiv=cfg.subdiv, name=Path(cfg.input).stem)


def _need(cfg, *names):
    for name in names:
        if getattr(cfg, name) is None:
            raise InputError(f"--{name.replace('_', '-')} is required for {cfg.check or cfg.command}")


def _header(cfg: RunConfig, X: GlobalQuotientOrbifold | None = None) -> dict:
    out = {"command": cfg.command}
    if cfg.check:
        out["check"] = cfg.check
    if cfg.input:
        out["input"] = Path(cfg.input).name
    if X is not None:
        out["subdiv"] = X.subdiv
    if cfg.seed is not None:
        out["seed"] = cfg.seed
    return out


def cmd_homology(cfg: RunConfig) -> dict:
    _need(cfg, "n")
    X = load_orbifold(cfg)
    coeffs = Coefficients.parse(cfg.coeff, X)
    rep = conf_homology(X, cfg.n, coeffs, max_degree=cfg.max_degree, capacity=cfg.capacity)
    out = _header(cfg, X)
    out.update(rep.to_dict())
    out["pass"] = True
    return out


def _comma_base(cfg: RunConfig) -> ActionGroupoid:
    if cfg.input is not None:
        try:
            data = json.loads(read_input(cfg.input))
            points = data["points"]
            G = FiniteGroup.generated_by(data.get("generators") or [], degree=points)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"comma base needs {{\"points\": k, \"generators\": [...]}}: {exc}") from exc
        return ActionGroupoid(G)
    _need(cfg, "points")
    return ActionGroupoid.trivial(cfg.points)


def cmd_verify(cfg: RunConfig) -> dict:
    check = cfg.check
    if check == "comma":
        _need(cfg, "n")
        base = _comma_base(cfg)
        ms = [cfg.m] if cfg.m is not None else list(range(cfg.n))
        rows = [comma_report(base, cfg.n, m) for m in ms]
        out = _header(cfg)
        out.update(rows=rows, **{"pass": all(r["pass"] for r in rows)})
        return out

    X = load_orbifold(cfg)
    out = _header(cfg, X)
    if check == "stability":
        _need(cfg, "n_max")
        table = verify_stability(X, cfg.n_max)
        out.update(table)
    elif check == "dold":
        _need(cfg, "n")
        rows = verify_dold(X, cfg.n, MapContext(X, cfg.max_degree))
        out.update(rows=rows, **{"pass": all(r["pass"] for r in rows)})
    elif check == "transfer":
        _need(cfg, "n")
        rows = verify_transfer_degree(X, cfg.n, MapContext(X, cfg.max_degree))
        if cfg.m is not None:
            rows = [r for r in rows if r["m"] == cfg.m]
        out.update(rows=rows, **{"pass": all(r["pass"] for r in rows)})
    elif check == "duality":
        _need(cfg, "n")
        out.update(duality_check(X, cfg.n, cfg.closed))
    elif check == "chi-c":
        _need(cfg, "n")
        rep = chi_c_report(X, cfg.n)
        rep["strata"] = {str(k): v for k, v in rep["strata"].items()}
        out.update(rep)
        out["pass"] = rep["additive"]
    else:
        raise InputError(f"unknown check {check!r}")
    return out


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    return str(v)


def to_markdown(report: dict) -> str:
    lines = []
    title = " ".join(str(report[k]) for k in ("command", "check", "input") if k in report)
    lines.append(f"## {title}")
    lines.append("")
    scalars = {k: v for k, v in report.items() if k not in ("rows", "strata") or not isinstance(v, list)}
    for k in sorted(scalars):
        if k in ("command", "check", "input"):
            continue
        lines.append(f"- **{k}**: {_cell(scalars[k])}")
    if "betti" in report:
        torsion = report.get("torsion")
        lines += ["", "| degree | betti | torsion |", "|---|---|---|"]
        for k, b in enumerate(report["betti"]):
            t = "" if torsion is None else " ".join(f"Z/{q}" for q in torsion[k])
            lines.append(f"| {k} | {b} | {t} |")
    for key in ("rows", "strata"):
        rows = report.get(key)
        if not isinstance(rows, list) or not rows:
            continue
        cols = []
        for r in rows:
            cols += [c for c in r if c not in cols]
        lines += ["", f"### {key}", "", "| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        for r in rows:
            lines.append("| " + " | ".join(_cell(r.get(c, "")) for c in cols) + " |")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="orbifold JSON (or a bundled example name)")
    common.add_argument("--n", type=int)
    common.add_argument("--n-max", type=int, dest="n_max")
    common.add_argument("--m", type=int)
    common.add_argument("--coeff", default="rational",
                        help="rational | integral | character:<trivial|sign|orientation|orientation-base>")
    common.add_argument("--subdiv", type=int, help="override the subdivision level")
    common.add_argument("--capacity", type=int, default=DEFAULT_CELL_CAPACITY)
    common.add_argument("--max-degree", type=int, dest="max_degree")
    common.add_argument("--closed", choices=("diagonal", "bad"), default="diagonal",
                        help="closed part of the compact-support pair")
    common.add_argument("--points", type=int, help="point count of the comma base (trivial group)")
    common.add_argument("--format", choices=("json", "markdown"), default="json", dest="fmt")
    common.add_argument("--output")
    common.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="orbiconf", description="Homology of orbifold configuration spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("homology", parents=[common], help="homology of Conf_n")
    v = sub.add_parser("verify", parents=[common], help="run a verification")
    v.add_argument("check", choices=CHECKS)
    sub.add_parser("examples", help="list bundled input files")
    return parser


def run(cfg: RunConfig) -> dict:
    cfg.validate()
    if cfg.command == "homology":
        return cmd_homology(cfg)
    if cfg.command == "verify":
        return cmd_verify(cfg)
    if cfg.command == "examples":
        return {"command": "examples", "inputs": bundled_inputs(), "pass": True}
    raise InputError(f"unknown command {cfg.command!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    try:
        report = run(cfg)
    except CapacityError as exc:
        print(f"orbiconf: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, PreconditionError, NotRegularError) as exc:
        print(f"orbiconf: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = to_markdown(report) if cfg.fmt == "markdown" else to_json(report)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.get("pass", True) else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())

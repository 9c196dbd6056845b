"""Command-line front end.  Every run writes exactly one JSON document.

Exit status: 0 on success, 1 when an analysis hits a resource limit,
2 on bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .cayley import DEFAULT_VERTEX_BUDGET, centralizer_oracle
from .checker import (
    AnalysisParams,
    analyze_reflection,
    bound_summary,
    canonical_json,
    conjugate_intersection_profile,
    verify_paper_examples,
)
from .coxeter import (
    DEFAULT_NODE_BUDGET,
    CoxeterInputError,
    ResourceLimitError,
    _parse_label,
    parse_system,
    reduce,
    render_system,
)
from .ends import ends_of_system, estimate_relative_ends
from .l2 import TriangleParams, bound_report_json, splitting_criterion
from .walls import crossing_obstruction, wall_certificate, wall_side_oracle


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


@dataclass
class RunConfig:
    command: str
    input_path: Optional[str] = None
    radii: List[int] = field(default_factory=lambda: [2, 3, 4, 5])
    vertex_budget: int = DEFAULT_VERTEX_BUDGET
    node_budget: int = DEFAULT_NODE_BUDGET
    default_label: Optional[str] = None
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.vertex_budget < 1 or self.node_budget < 1:
            raise InputError("budgets must be positive")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])) or not self.radii:
            raise InputError("radii schedule must be non-empty and strictly increasing")
        if self.radii[0] < 1:
            raise InputError("radii must be positive")

    @property
    def schedule(self):
        return [(r, 2 * r) for r in self.radii]


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="input_path", help="system in .cox format")
    common.add_argument("--radii", type=_int_list, default=None,
                        help="inner radii r of the ends schedule (R = 2r), e.g. '2,3,4,5'")
    common.add_argument("--vertex-budget", type=int, default=DEFAULT_VERTEX_BUDGET)
    common.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    common.add_argument("--default-label", help="override the default label (integer or inf)")
    common.add_argument("--out", dest="output_path", help="write the report here instead of stdout")

    parser = _Parser(prog="coxsplit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("ends", parents=[common], help="ends of the group")
    p = sub.add_parser("rel-ends", parents=[common], help="ends of the coset graph of a centralizer")
    p.add_argument("--centralizer", type=int, required=True)
    p.add_argument("--side", action="store_true", help="use the side-preserving wall stabilizer instead")
    p = sub.add_parser("wall-cert", parents=[common])
    p.add_argument("--gen", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p = sub.add_parser("crossings", parents=[common])
    p.add_argument("--gen", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--all", action="store_true", help="list every tested element, not only crossings")
    p = sub.add_parser("betti-bound", parents=[common])
    p.add_argument("--family", nargs="+", metavar="KEY=VALUE", help="n=8 p=2 q=3 r=7")
    p = sub.add_parser("check-splitting", parents=[common])
    p.add_argument("--gen", type=int, required=True)
    p = sub.add_parser("profile", parents=[common])
    p.add_argument("--centralizer", type=int, required=True)
    p.add_argument("--g", required=True, help="word for g, e.g. '3' or '1,2,3'")
    p.add_argument("--profile-radii", type=_int_list, default=[2, 4, 6])
    sub.add_parser("paper-examples", parents=[common])
    return parser


def _load_system(config: RunConfig):
    if not config.input_path:
        raise InputError(f"{config.command} needs --in")
    try:
        text = Path(config.input_path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {config.input_path}: {exc}") from None
    label = None
    if config.default_label is not None:
        label = _parse_label(config.default_label)
    return parse_system(text, default_label=label, node_budget=config.node_budget)


def _parse_family(pairs: Sequence[str]):
    values = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or key not in ("n", "p", "q", "r"):
            raise InputError(f"bad family parameter {item!r}")
        try:
            values[key] = int(value)
        except ValueError:
            raise InputError(f"bad family parameter {item!r}") from None
    if set(values) != {"n", "p", "q", "r"}:
        raise InputError("family needs n, p, q and r")
    return values["n"], TriangleParams(values["p"], values["q"], values["r"])


def _run_command(args, config: RunConfig, report: dict):
    cmd = config.command
    params = report["parameters"]
    if cmd == "paper-examples":
        report["results"] = verify_paper_examples()
        return
    if cmd == "betti-bound" and args.family:
        n, t = _parse_family(args.family)
        params["family"] = {"n": n, "triangle": [t.p, t.q, t.r]}
        try:
            report["results"] = bound_report_json(splitting_criterion(n, t))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return

    system = _load_system(config)
    report["input"]["system"] = render_system(system)
    if cmd == "betti-bound":
        report["results"] = bound_summary(system)
        return
    for name in ("gen", "centralizer"):
        i = getattr(args, name, None)
        if i is not None and not 1 <= i <= system.rank:
            raise InputError(f"--{name} {i} out of range 1..{system.rank}")

    if cmd == "ends":
        params["schedule"] = config.schedule
        est = ends_of_system(system, schedule=config.schedule, vertex_budget=config.vertex_budget)
        report["results"] = est.to_json()
        report["warnings"].extend(est.warnings)
    elif cmd == "rel-ends":
        oracle = (wall_side_oracle if args.side else centralizer_oracle)(system, args.centralizer)
        params.update(schedule=config.schedule, subgroup=oracle.descriptor)
        est = estimate_relative_ends(system, oracle, config.schedule, vertex_budget=config.vertex_budget)
        report["results"] = est.to_json()
        report["warnings"].extend(est.warnings)
    elif cmd == "wall-cert":
        params.update(gen=args.gen, radius=args.radius)
        if args.radius < 2:
            raise InputError("--radius must be >= 2")
        report["results"] = wall_certificate(system, args.gen, args.radius, config.vertex_budget).to_json()
    elif cmd == "crossings":
        params.update(gen=args.gen, radius=args.radius)
        if args.radius < 2:
            raise InputError("--radius must be >= 2")
        rep = crossing_obstruction(system, args.gen, args.radius, config.vertex_budget)
        report["results"] = rep.to_json(include_all=args.all)
    elif cmd == "check-splitting":
        analysis = AnalysisParams(ends_max_r=config.radii[-1] if args.radii else 3,
                                  vertex_budget=min(config.vertex_budget, AnalysisParams.vertex_budget))
        params.update(gen=args.gen)
        result = analyze_reflection(system, args.gen, analysis)
        report["results"] = result.to_json()
        report["errors"].extend(result.errors)
    elif cmd == "profile":
        try:
            g = reduce(system, _int_list(args.g))
        except argparse.ArgumentTypeError as exc:
            raise InputError(str(exc)) from None
        radii = args.profile_radii
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise InputError("--profile-radii must be strictly increasing")
        params.update(centralizer=args.centralizer, g=list(g.nf), radii=radii)
        prof = conjugate_intersection_profile(system, centralizer_oracle(system, args.centralizer), g, radii)
        report["results"] = prof.to_json()


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    report = {"command": None, "input": {"path": None}, "parameters": {}, "results": None,
              "warnings": [], "errors": [], "version": __version__}
    status = 0
    config = None
    try:
        args = build_parser().parse_args(argv)
        config = RunConfig(
            command=args.command,
            input_path=args.input_path,
            radii=args.radii or [2, 3, 4, 5],
            vertex_budget=args.vertex_budget,
            node_budget=args.node_budget,
            default_label=args.default_label,
            output_path=args.output_path,
        )
        report["command"] = config.command
        report["input"]["path"] = config.input_path
        report["parameters"].update(vertex_budget=config.vertex_budget, node_budget=config.node_budget)
        _run_command(args, config, report)
        if report["errors"]:
            status = 1
    except (InputError, CoxeterInputError) as exc:
        report["errors"].append(f"input error: {exc}")
        status = 2
    except ResourceLimitError as exc:
        report["errors"].append(f"resource limit: {exc}")
        status = 1
    text = canonical_json(report) + "\n"
    if config is not None and config.output_path:
        Path(config.output_path).write_text(text)
    else:
        stdout.write(text)
    return status


def main():
    logging.basicConfig(level=logging.ERROR)
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command line front end.

Exit status reports operational failure only (bad input, unreadable files,
failed preconditions).  Mathematical verdicts, negative or not, exit 0 and
are read from the report.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .abelian import fixed_lattice, periodic_lattice
from .alphabet import AlphabetError
from .fixpoint import (
    AUTOMORPHISMS,
    ENDOMORPHISMS,
    ChainPreconditionError,
    FixVerificationError,
    chain_experiment,
    classify_group,
    family_element,
    fgyes_classify,
    fgyes_fix,
    fix_in_ball,
    per_equals_fix_of_power_check,
    per_in_ball,
    projection_invariant_check,
    square_group,
)
from .morphism import (
    MorphismError,
    WellDefinednessViolation,
    certify_automorphism,
    example_fgno_auto,
    load_morphism,
)
from .trace import GraphGroup, WordSyntaxError

SCOPES = {"endo": ENDOMORPHISMS, "auto": AUTOMORPHISMS, ENDOMORPHISMS: ENDOMORPHISMS, AUTOMORPHISMS: AUTOMORPHISMS}
DEMOS = ("thm-endo", "thm-auto", "ex-fgyes", "ex-fgno")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    radius: int = 3
    levels: int = 6
    kmax: int = 4
    depth: int = 4
    output: str | None = None
    format: str = "text"

    def validate(self):
        for name in ("levels", "kmax", "depth"):
            if getattr(self, name) < 1:
                raise ConfigError(f"--{name} must be positive")
        if self.radius < 0:
            raise ConfigError("--radius must be non-negative")
        for path in self.inputs:
            if not Path(path).is_file():
                raise ConfigError(f"no such file: {path}")
        if self.format not in ("text", "json"):
            raise ConfigError("--format must be text or json")


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _render_text(value, indent: int, lines: list[str]):
    pad = "  " * indent
    if isinstance(value, dict):
        for key in sorted(value):
            v = value[key]
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{key}:")
                _render_text(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{key}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and item and not _flat_list(item):
                lines.append(f"{pad}-")
                _render_text(item, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, str):
        return repr(v) if v == "" else v
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) if not isinstance(x, str) else repr(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def render_text(report: dict) -> str:
    lines: list[str] = []
    _render_text(report, 0, lines)
    return "\n".join(lines) + "\n"


# --- demo scenarios ---------------------------------------------------------

PATH3 = {"generators": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}


def _family_table(phi, family, upto):
    rows = []
    for i in range(1, upto + 1):
        u = family_element(phi.group, family, i)
        rows.append({"i": i, "element": str(u), "fixed": phi(u) == u})
    return rows


def demo_thm_endo(radius: int = 5, levels: int = 6) -> dict:
    group = GraphGroup.from_document(PATH3)
    verdict = classify_group(group, ENDOMORPHISMS)
    phi = verdict.witness
    fixed_a = phi(group.generator("a")) == group.generator("a")
    fixed_c = phi(group.generator("c")) == group.generator("c")
    return {
        "demo": "thm-endo",
        "graph": group.to_document(),
        "verdict": verdict.to_json(),
        "morphism": phi.to_document()["images"],
        "well_defined": phi.well_defined,
        "abelianization": [list(r) for r in phi.matrix],
        "automorphism_certificate": certify_automorphism(phi, 4).to_json(),
        "fixed_lattice": fixed_lattice(phi.matrix).to_json(),
        "periodic_lattice": {"kmax": 4, **periodic_lattice(phi.matrix, 4).to_json()},
        "projection_invariant": projection_invariant_check(phi, ("a", "c"), radius).to_json(),
        "generators_moved": {"a": not fixed_a, "c": not fixed_c},
        "fixed_family": _family_table(phi, ("a", "c"), levels + 1),
        "chain": chain_experiment(phi, ("a", "c"), levels).to_json(),
    }


def demo_thm_auto(radius: int = 5, levels: int = 6) -> dict:
    group = GraphGroup.from_document(PATH3)
    verdict = classify_group(group, AUTOMORPHISMS)
    phi = verdict.witness
    return {
        "demo": "thm-auto",
        "graph": group.to_document(),
        "verdict": verdict.to_json(),
        "morphism": phi.to_document()["images"],
        "well_defined": phi.well_defined,
        "automorphism_certificate": certify_automorphism(phi, 2).to_json(),
        "fixed_lattice": fixed_lattice(phi.matrix).to_json(),
        "projection_invariant": projection_invariant_check(phi, ("a", "c"), radius).to_json(),
        "fixed_family": _family_table(phi, ("a", "c"), levels + 1),
        "chain": chain_experiment(phi, ("a", "c"), levels).to_json(),
    }


SWAP_IMAGES = {"a": ("", "c"), "b": ("", "d"), "c": ("a", ""), "d": ("b", "")}
TYPE_I_SAMPLE = {"a": ("a", ""), "b": ("b^-1", ""), "c": ("", "d"), "d": ("", "c")}


def demo_ex_fgyes(radius: int = 3, kmax: int = 4) -> dict:
    group = square_group()
    swap = fgyes_classify(SWAP_IMAGES)
    swap_fix = fgyes_fix(swap)
    sample = fgyes_classify(TYPE_I_SAMPLE)
    sample_fix = fgyes_fix(sample)
    return {
        "demo": "ex-fgyes",
        "graph": group.to_document(),
        "verdict": classify_group(group, AUTOMORPHISMS).to_json(),
        "swap": {
            "morphism": swap.morphism.to_document()["images"],
            "classification": swap.to_json(),
            "certificate": certify_automorphism(swap.morphism, 2).to_json(),
            "fix": swap_fix.to_json(),
            "per_vs_per_of_square": per_equals_fix_of_power_check(swap.morphism, radius, kmax).to_json(),
        },
        "type_i_sample": {
            "morphism": sample.morphism.to_document()["images"],
            "classification": sample.to_json(),
            "fix": sample_fix.to_json(),
            "per_vs_per_of_square": per_equals_fix_of_power_check(sample.morphism, radius, kmax).to_json(),
        },
    }


def demo_ex_fgno(radius: int = 4, levels: int = 4) -> dict:
    group, phi = example_fgno_auto()
    fixed = fix_in_ball(phi, radius)
    return {
        "demo": "ex-fgno",
        "graph": group.to_document(),
        "verdict": classify_group(group, AUTOMORPHISMS).to_json(),
        "morphism": phi.to_document()["images"],
        "well_defined": phi.well_defined,
        "automorphism_certificate": certify_automorphism(phi, 3).to_json(),
        "fixed_lattice": fixed_lattice(phi.matrix).to_json(),
        "fixed_in_ball": {"radius": radius, "count": len(fixed)},
        "projection_invariant": projection_invariant_check(phi, ("a", "d", "e"), radius).to_json(),
        "fixed_family": _family_table(phi, ("a", "e", "d"), levels + 1),
        "chain": chain_experiment(phi, ("a", "e", "d"), levels).to_json(),
    }


def run_demo(name: str, radius: int | None = None, levels: int | None = None) -> dict:
    if name == "thm-endo":
        return demo_thm_endo(radius if radius is not None else 5, levels or 6)
    if name == "thm-auto":
        return demo_thm_auto(radius if radius is not None else 5, levels or 6)
    if name == "ex-fgyes":
        return demo_ex_fgyes(radius if radius is not None else 3)
    if name == "ex-fgno":
        return demo_ex_fgno(radius if radius is not None else 4, levels or 4)
    raise ConfigError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")


# --- thin command wrappers ----------------------------------------------------

def _load(cfg: RunConfig, with_morphism: bool = True):
    group = GraphGroup.load(cfg.inputs[0])
    if not with_morphism:
        return group, None
    return group, load_morphism(group, cfg.inputs[1])


def cmd_classify(cfg: RunConfig, scope: str) -> dict:
    group, _ = _load(cfg, with_morphism=False)
    return classify_group(group, SCOPES[scope]).to_json()


def cmd_nf(cfg: RunConfig, word: str) -> dict:
    group, _ = _load(cfg, with_morphism=False)
    return {"input": word, "normal_form": str(group.element(word))}


def cmd_apply(cfg: RunConfig, word: str) -> dict:
    group, phi = _load(cfg)
    u = group.element(word)
    return {"input": str(u), "image": str(phi(u))}


def cmd_fix(cfg: RunConfig) -> dict:
    _, phi = _load(cfg)
    fixed = fix_in_ball(phi, cfg.radius)
    return {"radius": cfg.radius, "count": len(fixed), "fixed": [str(u) for u in fixed]}


def cmd_per(cfg: RunConfig) -> dict:
    _, phi = _load(cfg)
    per = per_in_ball(phi, cfg.radius, cfg.kmax)
    return {
        "radius": cfg.radius,
        "kmax": cfg.kmax,
        "truncated": True,
        "count": len(per),
        "periodic": [{"element": str(u), "period": k} for u, k in per],
    }


def cmd_chain(cfg: RunConfig, family: str, projection: str | None) -> dict:
    _, phi = _load(cfg)
    fam = [x for x in family.replace(",", " ").split()]
    proj = [x for x in projection.replace(",", " ").split()] if projection else None
    return chain_experiment(phi, fam, cfg.levels, proj).to_json()


def cmd_auto_check(cfg: RunConfig) -> dict:
    _, phi = _load(cfg)
    return certify_automorphism(phi, cfg.depth).to_json()


def cmd_abelian_fix(cfg: RunConfig) -> dict:
    _, phi = _load(cfg)
    return {
        "matrix": [list(r) for r in phi.matrix],
        "fixed_lattice": fixed_lattice(phi.matrix).to_json(),
        "periodic_lattice": {"kmax": cfg.kmax, **periodic_lattice(phi.matrix, cfg.kmax).to_json()},
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="raagfix", description="Fixed points of graph group endomorphisms.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, radius=None, levels=None, kmax=None, depth=None):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", "-o", help="write the report here instead of stdout")
        if radius is not None:
            p.add_argument("--radius", "-r", type=int, default=radius)
        if levels is not None:
            p.add_argument("--levels", "-N", type=int, default=levels)
        if kmax is not None:
            p.add_argument("--kmax", type=int, default=kmax)
        if depth is not None:
            p.add_argument("--depth", "-d", type=int, default=depth)
        return p

    p = common(sub.add_parser("classify", help="decide the fixed-point classification of a graph"))
    p.add_argument("graph")
    p.add_argument("--scope", choices=sorted(SCOPES), default="endo")

    p = common(sub.add_parser("demo", help="run a built-in scenario"))
    p.add_argument("name", choices=DEMOS)
    p.add_argument("--radius", "-r", type=int)
    p.add_argument("--levels", "-N", type=int)

    p = common(sub.add_parser("nf", help="normal form of a word"))
    p.add_argument("graph")
    p.add_argument("word")

    p = common(sub.add_parser("apply", help="apply a morphism to a word"))
    p.add_argument("graph")
    p.add_argument("morphism")
    p.add_argument("word")

    p = common(sub.add_parser("fix", help="fixed points in a ball"), radius=3)
    p.add_argument("graph")
    p.add_argument("morphism")

    p = common(sub.add_parser("per", help="periodic points in a ball"), radius=3, kmax=4)
    p.add_argument("graph")
    p.add_argument("morphism")

    p = common(sub.add_parser("chain", help="ascending chain experiment"), levels=6)
    p.add_argument("graph")
    p.add_argument("morphism")
    p.add_argument("--family", required=True, help="generators x1,...,xk of the fixed family x1^i...xk^i")
    p.add_argument("--projection", help="independent generators to project onto (default: the family)")

    p = common(sub.add_parser("auto-check", help="certify that a morphism is an automorphism"), depth=4)
    p.add_argument("graph")
    p.add_argument("morphism")

    p = common(sub.add_parser("abelian-fix", help="fixed and periodic lattices of the abelianisation"), kmax=4)
    p.add_argument("graph")
    p.add_argument("morphism")
    return parser


def _config(args) -> RunConfig:
    inputs = [getattr(args, k) for k in ("graph", "morphism") if getattr(args, k, None)]
    cfg = RunConfig(command=args.command, inputs=inputs, output=args.output, format=args.format)
    for name in ("radius", "levels", "kmax", "depth"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    cfg.validate()
    return cfg


def dispatch(args) -> dict:
    cfg = _config(args)
    cmd = args.command
    if cmd == "classify":
        return cmd_classify(cfg, args.scope)
    if cmd == "demo":
        return run_demo(args.name, args.radius, args.levels)
    if cmd == "nf":
        return cmd_nf(cfg, args.word)
    if cmd == "apply":
        return cmd_apply(cfg, args.word)
    if cmd == "fix":
        return cmd_fix(cfg)
    if cmd == "per":
        return cmd_per(cfg)
    if cmd == "chain":
        return cmd_chain(cfg, args.family, args.projection)
    if cmd == "auto-check":
        return cmd_auto_check(cfg)
    if cmd == "abelian-fix":
        return cmd_abelian_fix(cfg)
    raise ConfigError(f"unknown command {cmd}")


OPERATIONAL_ERRORS = (
    ConfigError,
    AlphabetError,
    WordSyntaxError,
    MorphismError,
    WellDefinednessViolation,
    ChainPreconditionError,
    FixVerificationError,
    json.JSONDecodeError,
    OSError,
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = dispatch(args)
    except OPERATIONAL_ERRORS as exc:
        print(f"raagfix: error: {exc}", file=sys.stderr)
        return 2
    text = render_json(report) if args.format == "json" else render_text(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

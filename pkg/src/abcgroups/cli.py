"""Command-line entry point.

Subcommands: enumerate (build or cache a ball index), ratio (class-ratio
CSV plus a gnuplot script), conjtest (key partition versus brute-force
oracle, JSON report), folner (translated-box report), spectral (periodic
part and projection-norm CSV), rewrite (word normal forms).

Exit codes: 0 success, 1 validation failure, 2 resource-cap failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields

from .conjugacy import (
    DEFAULT_ORBIT_BOUND,
    brute_force_partition,
    conjugacy_key,
)
from .enumeration import (
    DEFAULT_ELEMENT_CAP,
    BallIndex,
    CacheError,
    ResourceCapError,
    enumerate_ball,
    load_index,
    save_index,
)
from .folner import (
    DEFAULT_BOX_CAP,
    N1_SEARCH_CAP,
    translate_experiment,
)
from .groups import GroupContext, load_matrix_config, make_bs, parse_group_descriptor
from .ratios import gnuplot_script, ratio_table, write_csv
from .spectral import (
    epsilon_norm_table,
    relative_growth_table,
    unit_root_projection,
)
from .words import (
    cyclic_reduce,
    evaluate,
    format_word,
    parse_word,
    t_exponent,
    to_staircase,
)

__all__ = ["RunConfig", "parse_config", "format_config", "run", "main"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RESOURCE = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage, which is reserved for
    # resource-cap failures here
    def error(self, message):
        raise ValueError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    group: str | None = None
    radius: int | None = None
    f: str = "sqrt"
    out: str | None = None
    cache: str | None = None
    oracle_radius: int | None = None
    k: int = 2
    n: int | None = None
    matrix: str | None = None
    element_cap: int = DEFAULT_ELEMENT_CAP
    n1_cap: int = N1_SEARCH_CAP
    orbit_bound: int = DEFAULT_ORBIT_BOUND
    emit: str = "json"
    word: str | None = None


_COMMAND_FIELDS = {
    "enumerate": ("group", "radius", "cache", "element_cap"),
    "ratio": ("group", "radius", "f", "out", "cache", "element_cap"),
    "conjtest": (
        "group",
        "radius",
        "oracle_radius",
        "out",
        "element_cap",
        "orbit_bound",
    ),
    "folner": ("k", "n", "emit", "out", "element_cap", "n1_cap"),
    "spectral": ("matrix", "radius", "out", "element_cap"),
    "rewrite": ("group", "word"),
}


def build_parser() -> _Parser:
    parser = _Parser(prog="abcgroups", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    enum = sub.add_parser("enumerate", help="enumerate a ball and report sizes")
    enum.add_argument("--group", required=True)
    enum.add_argument("--radius", type=int, required=True)
    enum.add_argument("--cache", help="binary index path to reuse or create")
    enum.add_argument("--element-cap", type=int, default=DEFAULT_ELEMENT_CAP)

    ratio = sub.add_parser("ratio", help="conjugacy ratio table as CSV")
    ratio.add_argument("--group", required=True)
    ratio.add_argument("--radius", type=int, required=True)
    ratio.add_argument("--f", default="sqrt", help="sqrt, log2 or const:<c>")
    ratio.add_argument("--out", help="CSV path; a .gp script is written next to it")
    ratio.add_argument("--cache")
    ratio.add_argument("--element-cap", type=int, default=DEFAULT_ELEMENT_CAP)

    conj = sub.add_parser("conjtest", help="compare keys against the oracle")
    conj.add_argument("--group", required=True)
    conj.add_argument("--radius", type=int, required=True)
    conj.add_argument("--oracle-radius", type=int)
    conj.add_argument("--out")
    conj.add_argument("--element-cap", type=int, default=DEFAULT_ELEMENT_CAP)
    conj.add_argument("--orbit-bound", type=int, default=DEFAULT_ORBIT_BOUND)

    fol = sub.add_parser("folner", help="translated-box experiment report")
    fol.add_argument("--k", type=int, default=2)
    fol.add_argument("--n", type=int, required=True)
    fol.add_argument("--emit", choices=("json", "csv"), default="json")
    fol.add_argument("--out")
    fol.add_argument("--element-cap", type=int, default=DEFAULT_BOX_CAP)
    fol.add_argument("--n1-cap", type=int, default=N1_SEARCH_CAP)

    spec = sub.add_parser("spectral", help="periodic part and projection norms")
    spec.add_argument("--matrix", required=True, help="matrix family JSON path")
    spec.add_argument("--radius", type=int, required=True)
    spec.add_argument("--out")
    spec.add_argument("--element-cap", type=int, default=DEFAULT_ELEMENT_CAP)

    rew = sub.add_parser("rewrite", help="staircase and ascending word forms")
    rew.add_argument("--group", required=True)
    rew.add_argument("word", help="whitespace-separated letters, e.g. 't g0 T'")

    return parser


def parse_config(argv) -> RunConfig:
    namespace = build_parser().parse_args(argv)
    values = vars(namespace)
    command = values.pop("command")
    return RunConfig(command=command, **values)


def format_config(config: RunConfig) -> list[str]:
    """Argument list that parses back to the same config."""
    known = {f.name for f in fields(RunConfig)}
    wanted = _COMMAND_FIELDS.get(config.command)
    if wanted is None:
        raise ValueError(f"unknown subcommand {config.command!r}")
    out = [config.command]
    tail: list[str] = []
    for name in wanted:
        if name not in known:
            raise ValueError(f"unknown config field {name!r}")
        value = getattr(config, name)
        if value is None:
            continue
        if name == "word":
            tail.append(value)
            continue
        out.extend((f"--{name.replace('_', '-')}", str(value)))
    return out + tail


def _thread_count() -> int:
    """Validated ABC_THREADS value.

    Execution is sequential; any valid worker count produces the same
    output, so the variable only needs to fail loudly when malformed.
    """
    raw = os.environ.get("ABC_THREADS")
    if raw is None:
        return 1
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"ABC_THREADS must be an integer, got {raw!r}") from None
    if count < 1:
        raise ValueError(f"ABC_THREADS must be at least 1, got {count}")
    return count


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _obtain_index(ctx: GroupContext, config: RunConfig) -> BallIndex:
    if config.cache and os.path.exists(config.cache):
        index = load_index(config.cache)
        if (
            index.ctx.describe() == ctx.describe()
            and index.radius >= config.radius
        ):
            return index
    index = enumerate_ball(ctx, config.radius, config.element_cap)
    if config.cache:
        save_index(index, config.cache)
    return index


def _cmd_enumerate(config: RunConfig) -> int:
    ctx = parse_group_descriptor(config.group)
    index = _obtain_index(ctx, config)
    lines = ["r,ball,sphere"]
    for r in range(config.radius + 1):
        lines.append(f"{r},{index.ball_size(r)},{len(index.sphere(r))}")
    _write_text(config.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_ratio(config: RunConfig) -> int:
    ctx = parse_group_descriptor(config.group)
    index = _obtain_index(ctx, config)
    table = ratio_table(ctx, index, config.f, config.radius)
    if config.out is None:
        write_csv(table, sys.stdout)
    else:
        write_csv(table, config.out)
        with open(config.out + ".gp", "w", encoding="utf-8") as fh:
            fh.write(gnuplot_script(config.out))
    return EXIT_OK


def _cmd_conjtest(config: RunConfig) -> int:
    ctx = parse_group_descriptor(config.group)
    oracle_radius = config.oracle_radius
    if oracle_radius is None:
        oracle_radius = config.radius + 8
    if oracle_radius < config.radius:
        raise ValueError(
            f"oracle radius {oracle_radius} is below the ball radius {config.radius}"
        )
    index = enumerate_ball(ctx, oracle_radius, config.element_cap)
    by_key: dict = {}
    for g in index.elements(config.radius):
        by_key.setdefault(conjugacy_key(ctx, g, config.orbit_bound), []).append(g)
    blocks = brute_force_partition(ctx, index, config.radius, oracle_radius)
    block_of = {g: i for i, block in enumerate(blocks) for g in block}
    mismatches = []
    for block in blocks:
        keys = {conjugacy_key(ctx, g, config.orbit_bound) for g in block}
        if len(keys) > 1:
            mismatches.append(
                {
                    "kind": "split",
                    "elements": [ctx.format_element(g) for g in block],
                }
            )
    for key, members in sorted(by_key.items()):
        ids = {block_of[g] for g in members}
        if len(ids) > 1:
            mismatches.append(
                {
                    "kind": "unmerged",
                    "elements": [ctx.format_element(g) for g in members],
                }
            )
    report = {
        "group": config.group,
        "radius": config.radius,
        "oracle_radius": oracle_radius,
        "ball": index.ball_size(config.radius),
        "classes_by_key": len(by_key),
        "classes_by_oracle": len(blocks),
        "mismatches": mismatches[:20],
        "agreement": not mismatches,
    }
    _write_text(config.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_folner(config: RunConfig) -> int:
    ctx = make_bs(config.k)
    if config.n is None or config.n < 1:
        raise ValueError(f"--n must be at least 1, got {config.n}")
    if config.emit == "csv":
        lines = ["n,box_size,classes,ratio,right_defect_t,left_defect_t"]
        for n in range(1, config.n + 1):
            report = translate_experiment(ctx, n, config.element_cap)
            lines.append(
                f"{n},{report.box_size},{report.classes},{report.ratio},"
                f"{report.right_defects['t']},{report.left_defect_t}"
            )
        _write_text(config.out, "\n".join(lines) + "\n")
        return EXIT_OK
    report = translate_experiment(ctx, config.n, config.element_cap)
    payload = json.dumps(report.as_dict(ctx), indent=2, sort_keys=True)
    _write_text(config.out, payload + "\n")
    return EXIT_OK


def _cmd_spectral(config: RunConfig) -> int:
    ctx = load_matrix_config(config.matrix)
    index = enumerate_ball(ctx, config.radius, config.element_cap)
    setup = unit_root_projection(ctx.matrix)
    growth = relative_growth_table(ctx, index, setup.period)
    norms = epsilon_norm_table(ctx, index, setup)
    lines = ["r,ball,p_count,eps_max_num,eps_max_den"]
    for (r, ball, p_count), (_, eps) in zip(growth, norms):
        lines.append(f"{r},{ball},{p_count},{eps.numerator},{eps.denominator}")
    _write_text(config.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_rewrite(config: RunConfig) -> int:
    ctx = parse_group_descriptor(config.group)
    word = parse_word(config.word)
    value = evaluate(ctx, word)
    lines = [
        f"word: {format_word(word)}",
        f"value: {ctx.format_element(value)}",
        f"t_exponent: {t_exponent(word)}",
    ]
    exponent = t_exponent(word)
    if exponent >= 0:
        staircase = to_staircase(ctx, word)
        lines.append(f"staircase: {format_word(staircase)}")
    if exponent > 0:
        ascending = cyclic_reduce(ctx, word)
        lines.append(f"ascending: {format_word(ascending)}")
        lines.append(
            f"ascending_value: {ctx.format_element(evaluate(ctx, ascending))}"
        )
    _write_text(config.out, "\n".join(lines) + "\n")
    return EXIT_OK


_HANDLERS = {
    "enumerate": _cmd_enumerate,
    "ratio": _cmd_ratio,
    "conjtest": _cmd_conjtest,
    "folner": _cmd_folner,
    "spectral": _cmd_spectral,
    "rewrite": _cmd_rewrite,
}


def run(argv=None) -> int:
    try:
        config = parse_config(argv)
        _thread_count()
        return _HANDLERS[config.command](config)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, CacheError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())

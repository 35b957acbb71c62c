"""Command-line frontend.

Subcommands: blocks (iterated character engine), example3 (rank-1
closed form), zhat (plumbing oracle), match (exact linear matching),
check (invariant suites), cache (warm/clear derived tables).  Series
travel between subcommands as the JSON schema of the q-series module;
CSV output is available for external tools.

Exit codes: 0 success, 1 computational error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import shutil
import sys
from fractions import Fraction
from pathlib import Path

from .errors import QBlocksError
from . import abengine, blocks, checks, qser, repdata, rootsys, sl2closed, zhatref

CACHE_ENV = "QBLOCKS_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "qblocks"


def load_config(path: str | None) -> dict[str, str]:
    """Flat key=value file; keys mirror the long CLI flags."""
    if path is None:
        return {}
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise QBlocksError(f"bad config line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _resolve(args, config: dict[str, str], key: str, default, cast):
    cli_val = getattr(args, key, None)
    if cli_val is not None:
        return cli_val
    if key in config:
        return cast(config[key])
    return default


def parse_algebra(text: str) -> rootsys.RootSystem:
    m = re.fullmatch(r"([ADEade])(\d+)", text.strip())
    if not m:
        raise QBlocksError(f"cannot parse algebra {text!r}; expected e.g. A1, A2, D4")
    return rootsys.build_root_system(m.group(1).upper(), int(m.group(2)))


def _parse_ps(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace(" ", "").split(",") if v)


def _emit_series(series: qser.QSeries, args, config) -> None:
    fmt = _resolve(args, config, "format", "json", str)
    if fmt == "json":
        payload = json.dumps(series.to_json_dict(), separators=(", ", ": ")) + "\n"
    elif fmt == "csv":
        payload = series.to_csv()
    else:
        raise QBlocksError(f"unknown output format {fmt!r}")
    out = _resolve(args, config, "out", None, str)
    if out:
        Path(out).write_text(payload)
    else:
        sys.stdout.write(payload)


def _maybe_load_cached_group(rs: rootsys.RootSystem, cache_dir: Path) -> None:
    path = cache_dir / f"weyl_{rs.series}{rs.rank}.txt"
    if path.exists():
        try:
            rootsys.load_weyl_table(rs, path)
        except ValueError as exc:
            print(f"ignoring stale cache {path}: {exc}", file=sys.stderr)


def cmd_blocks(args, config) -> int:
    rs = parse_algebra(args.g)
    ps = blocks.validate_ps(_parse_ps(args.p))
    rmat = blocks.parse_r_matrix(args.r, len(ps), rs.rank)
    lhat = blocks.parse_lhat(rs, args.lhat, args.s)
    label = blocks.make_block_label(rs, ps, rmat, lhat)
    trunc = Fraction(_resolve(args, config, "trunc", "20", str))
    threads = int(_resolve(args, config, "threads", 1, int))
    _maybe_load_cached_group(rs, default_cache_dir())
    form = args.form or "conv"
    if form == "conv":
        series = abengine.nested_character(label, trunc, threads=threads)
    elif form == "mult":
        series = abengine.nested_character_mform(label, trunc)
    else:
        raise QBlocksError(f"unknown form {form!r}; use conv or mult")
    if args.expand_eta:
        series = qser.expand_eta(series)
    _emit_series(series, args, config)
    return 0


def cmd_example3(args, config) -> int:
    ps = _parse_ps(args.p)
    rvals = _parse_ps(args.r)
    trunc = Fraction(_resolve(args, config, "trunc", "20", str))
    series = sl2closed.example3_series(ps, rvals, args.s, trunc)
    if args.expand_eta:
        series = qser.expand_eta(series)
    _emit_series(series, args, config)
    return 0


def cmd_zhat(args, config) -> int:
    trunc = Fraction(_resolve(args, config, "trunc", "50", str))
    if args.seifert:
        graph = zhatref.seifert_to_plumbing(_parse_ps(args.seifert))
    elif args.graph:
        graph = zhatref.PlumbingGraph.from_json_dict(
            json.loads(Path(args.graph).read_text()))
    else:
        raise QBlocksError("zhat needs --seifert or --graph")
    series = zhatref.zhat_series(graph, trunc)
    _emit_series(series, args, config)
    return 0


def _load_series_file(path: str) -> list[qser.QSeries]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, list):
        return [qser.QSeries.from_json_dict(d) for d in data]
    return [qser.QSeries.from_json_dict(data)]


def cmd_match(args, config) -> int:
    targets = _load_series_file(args.target)
    if len(targets) != 1:
        raise QBlocksError("the target file must hold exactly one series")
    candidates: list[qser.QSeries] = []
    for path in args.candidates:
        candidates.extend(_load_series_file(path))
    result = zhatref.match_linear_combination(
        candidates, targets[0], Fraction(args.fit), Fraction(args.verify))
    payload = result.to_json_dict()
    if isinstance(result, zhatref.MatchResult):
        payload["match"] = True
    text = json.dumps(payload, separators=(", ", ": ")) + "\n"
    out = _resolve(args, config, "out", None, str)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if isinstance(result, zhatref.MatchResult) else 1


def cmd_check(args, config) -> int:
    trunc = Fraction(_resolve(args, config, "trunc", "20", str))
    results = checks.run_suite(args.suite, trunc)
    failed = 0
    for name, ok, detail in results:
        status = "ok" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        print(f"[{status}] {name}{suffix}")
        failed += not ok
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def cmd_cache(args, config) -> int:
    cache_dir = default_cache_dir()
    if args.action == "clear":
        if cache_dir.exists():
            shutil.rmtree(cache_dir)
        print(f"cleared {cache_dir}")
        return 0
    cache_dir.mkdir(parents=True, exist_ok=True)
    rs = parse_algebra(args.g or "A1")
    group = rootsys.weyl_group(rs)
    weyl_path = cache_dir / f"weyl_{rs.series}{rs.rank}.txt"
    rootsys.save_weyl_table(rs, group, weyl_path)
    cap = args.bound or 12
    table = repdata.KostantTable(rs, cap)
    part_path = cache_dir / f"kostant_{rs.series}{rs.rank}_cap{table.cap}.txt"
    repdata.save_partition_table(rs, table, part_path)
    print(f"warmed {weyl_path} ({len(group)} elements) and {part_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qblocks",
        description="Exact q-series engine for homological blocks of "
                    "Seifert homology spheres.")
    parser.add_argument("--config", help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--trunc", help="truncation bound for exponents")
        p.add_argument("--out", help="write output to this path")
        p.add_argument("--format", choices=["json", "csv"], help="output format")
        p.add_argument("--threads", type=int, help="worker threads for the engine")

    p = sub.add_parser("blocks", help="iterated character engine")
    p.add_argument("--g", required=True, help="algebra, e.g. A1, A2, D4")
    p.add_argument("--p", required=True, help="comma-separated coprime levels")
    p.add_argument("--r", required=True,
                   help="label rows 'r11,r12;r21,r22' (levels separated by ';')")
    p.add_argument("--s", type=int, help="rank-1 shorthand for the minuscule class")
    p.add_argument("--lhat", help="minuscule weight, 's=K' or coordinates 'c1,c2'")
    p.add_argument("--form", choices=["conv", "mult"], help="evaluation path")
    p.add_argument("--expand-eta", action="store_true",
                   help="multiply the symbolic eta power out")
    add_common(p)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("example3", help="rank-1 closed-form series")
    p.add_argument("--p", required=True, help="comma-separated coprime levels")
    p.add_argument("--r", required=True, help="comma-separated label entries")
    p.add_argument("--s", type=int, required=True, choices=[1, 2])
    p.add_argument("--expand-eta", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_example3)

    p = sub.add_parser("zhat", help="plumbing-graph reference series")
    p.add_argument("--seifert", help="comma-separated pairwise coprime fibers")
    p.add_argument("--graph", help="JSON file {framings: [...], edges: [[i,j],...]}")
    add_common(p)
    p.set_defaults(func=cmd_zhat)

    p = sub.add_parser("match", help="exact linear matching of series files")
    p.add_argument("--target", required=True, help="JSON series file")
    p.add_argument("--candidates", required=True, nargs="+",
                   help="JSON series files (each may hold a list)")
    p.add_argument("--fit", required=True, help="exponent bound for the fit window")
    p.add_argument("--verify", required=True, help="exponent bound for verification")
    p.add_argument("--out", help="write output to this path")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("check", help="run an invariant suite")
    p.add_argument("--suite", default="all",
                   help="one of rootsys, qser, blocks, sl2, zhat, all")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cache", help="warm or clear the table cache")
    p.add_argument("action", choices=["warm", "clear"])
    p.add_argument("--g", help="algebra to warm, e.g. A2")
    p.add_argument("--bound", type=int, help="partition table box bound")
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except (QBlocksError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``nonprojdp stats|coverage|parse|crosscheck|complexity``.

Exit codes: 0 success, 1 negative result (no parse, failed check), 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import glob
import json
import logging
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import __version__
from .chart import chart_metrics, compile_rules, recognize_gold, viterbi_parse
from .crosscheck import format_report, run_crosscheck
from .errors import (
    BudgetExceededError,
    ConlluParseError,
    LimitError,
    NoParseError,
    ScoreFileError,
    UnknownPresetError,
    UnsupportedByChartError,
)
from .oracle import DEFAULT_BUDGET, exact_oracle, greedy_oracle
from .scores import read_scores
from .transitions import PRESET_NAMES, DepTree, TransitionSystem, preset
from .treebank import CorpusStats, FileStats, MalformedTreeWarning, is_nonprojective, parse_conllu

log = logging.getLogger("nonprojdp")

DEFAULT_CHART_MAX_LEN = 40


class InputError(Exception):
    pass


def expand_paths(args: list[str]) -> list[Path]:
    """Files, directories (searched for ``*.conllu``) and glob patterns."""
    out: list[Path] = []
    for arg in args:
        p = Path(arg)
        if p.is_dir():
            found = sorted(p.rglob("*.conllu"))
            if not found:
                raise InputError(f"no .conllu files under {arg}")
            out.extend(found)
        elif p.exists():
            out.append(p)
        else:
            matches = sorted(glob.glob(arg, recursive=True))
            if not matches:
                raise InputError(f"no such file: {arg}")
            out.extend(Path(m) for m in matches)
    return out


def _pct(part: int, total: int) -> float:
    return 100.0 * part / total if total else 0.0


def _load(path: Path):
    with open(path, encoding="utf-8") as fh, warnings.catch_warnings():
        warnings.simplefilter("ignore", MalformedTreeWarning)
        doc = parse_conllu(fh, source=str(path))
    for ex in doc.excluded:
        log.info("%s:%d: excluded sentence: %s", path, ex.line, ex.reason)
    return doc


# --- stats ----------------------------------------------------------------


def cmd_stats(args) -> int:
    paths = expand_paths(args.paths)
    stats = CorpusStats()
    failures = 0
    for path in paths:
        try:
            doc = _load(path)
        except (OSError, UnicodeDecodeError, ConlluParseError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            stats.add(str(path), FileStats(error=str(exc)))
            failures += 1
            continue
        fs = FileStats(excluded=len(doc.excluded))
        for _, tree in doc.sentences:
            fs.total += 1
            fs.nonprojective += is_nonprojective(tree)
        stats.add(str(path), fs)
    if args.json:
        payload = {
            "files": [
                {"file": name, "total": fs.total, "nonprojective": fs.nonprojective,
                 "pct": round(_pct(fs.nonprojective, fs.total), 2), "excluded_malformed": fs.excluded,
                 "error": fs.error}
                for name, fs in stats.per_file.items()
            ],
            "total": stats.total_sentences,
            "nonprojective": stats.nonprojective_sentences,
            "pct": round(stats.percentage, 2),
            "excluded_malformed": stats.excluded_malformed,
        }
        print(json.dumps(payload, indent=2))
    else:
        for name, fs in stats.per_file.items():
            if fs.error is None:
                print(f"{name}\t{fs.total}\t{fs.nonprojective}\t{_pct(fs.nonprojective, fs.total):.2f}%")
        print(f"{stats.total_sentences}\t{stats.nonprojective_sentences}\t{stats.percentage:.2f}%")
    if stats.excluded_malformed:
        print(f"excluded {stats.excluded_malformed} malformed sentences", file=sys.stderr)
    return 2 if failures == len(paths) else 0


# --- coverage --------------------------------------------------------------


def decide(systems: tuple[TransitionSystem, ...], mode: str, budget: int, max_len: int | None,
           heads: tuple[int, ...]) -> list[tuple[bool, bool]]:
    """(covered, flagged) per system for one gold tree.

    Flagged sentences were decided by the greedy oracle as a fallback: either
    longer than ``max_len`` or over the exact-search state budget.
    """
    tree = DepTree(heads)
    out = []
    for sys_ in systems:
        if mode == "greedy":
            out.append((greedy_oracle(sys_, tree) is not None, False))
        elif max_len is not None and tree.n > max_len:
            out.append((greedy_oracle(sys_, tree) is not None, True))
        elif mode == "exact":
            try:
                out.append((exact_oracle(sys_, tree, budget), False))
            except BudgetExceededError:
                out.append((greedy_oracle(sys_, tree) is not None, True))
        else:
            out.append((recognize_gold(sys_, tree), False))
    return out


def cmd_coverage(args) -> int:
    names = args.system or ["attardi2", "alldeg1", "all", "alls0s1"]
    systems = tuple(preset(n) for n in names)
    if args.oracle == "chart":
        for s in systems:
            compile_rules(s)
    max_len = args.max_len
    if max_len is None and args.oracle == "chart":
        max_len = DEFAULT_CHART_MAX_LEN
    paths = expand_paths(args.paths)
    trees: list[tuple[int, ...]] = []
    excluded = 0
    failures = 0
    for path in paths:
        try:
            doc = _load(path)
        except (OSError, UnicodeDecodeError, ConlluParseError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            failures += 1
            continue
        excluded += len(doc.excluded)
        trees.extend(t.heads for _, t in doc.sentences if is_nonprojective(t))
    if paths and failures == len(paths):
        return 2

    work = partial(decide, systems, args.oracle, args.budget, max_len)
    if args.jobs > 1 and len(trees) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            decisions = list(pool.map(work, trees, chunksize=max(1, len(trees) // (args.jobs * 8))))
    else:
        decisions = [work(t) for t in trees]

    rows = []
    for k, sys_ in enumerate(systems):
        covered = sum(d[k][0] for d in decisions)
        flagged = sum(d[k][1] for d in decisions)
        rows.append({
            "system": sys_.name,
            "total": len(trees),
            "covered": covered,
            "pct": round(_pct(covered, len(trees)), 2),
            "flagged_long": flagged,
            "excluded_malformed": excluded,
        })
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print("system\ttotal\tcovered\tpct\tflagged_long\texcluded_malformed")
        for r in rows:
            print(f"{r['system']}\t{r['total']}\t{r['covered']}\t{r['pct']:.2f}\t{r['flagged_long']}\t{r['excluded_malformed']}")
    return 0


# --- parse -----------------------------------------------------------------


def _fmt_score(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(x)


def cmd_parse(args) -> int:
    sys_ = preset(args.system)
    try:
        with open(args.scores, encoding="utf-8") as fh:
            scores = read_scores(fh)
    except OSError as exc:
        raise InputError(str(exc)) from None
    except ScoreFileError as exc:
        raise InputError(f"{args.scores}: {exc}") from None
    collapsed = {"auto": None, "general": False, "collapsed": True}[args.engine]
    try:
        tree, total = viterbi_parse(sys_, scores, collapsed=collapsed)
    except NoParseError as exc:
        print(f"no parse: {exc}", file=sys.stderr)
        return 1
    for m, h in enumerate(tree.heads, start=1):
        print(f"{m}\t{h}")
    print(f"score\t{_fmt_score(total)}")
    return 0


# --- crosscheck / complexity -------------------------------------------------


def cmd_crosscheck(args) -> int:
    results = run_crosscheck(args.max_n, args.trials, args.seed)
    sys.stdout.write(format_report(results, args.max_n, args.trials, args.seed))
    return 0 if all(r.ok for r in results) else 1


def loglog_slope(xs, ys) -> float:
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx = sum(lx) / len(lx)
    my = sum(ly) / len(ly)
    num = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    den = sum((a - mx) ** 2 for a in lx)
    return num / den


def cmd_complexity(args) -> int:
    print("system\tn\titems\tapplications\tcollapsed")
    for name in args.system or ["all", "alls0s1"]:
        sys_ = preset(name)
        ms = [chart_metrics(sys_, n) for n in args.sizes]
        for n, m in zip(args.sizes, ms):
            print(f"{sys_.name}\t{n}\t{m.items}\t{m.applications}\t{int(m.collapsed)}")
        if len(args.sizes) > 1:
            si = loglog_slope(args.sizes, [m.items for m in ms])
            sa = loglog_slope(args.sizes, [m.applications for m in ms])
            print(f"# {sys_.name} slope items={si:.3f} applications={sa:.3f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonprojdp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="sentence counts and non-projectivity per file")
    p.add_argument("paths", nargs="+", help="CoNLL-U files, directories or globs")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("coverage", help="share of non-projective sentences each system derives")
    p.add_argument("paths", nargs="+")
    p.add_argument("--system", action="append", metavar="NAME",
                   help=f"transition system (repeatable); one of {', '.join(PRESET_NAMES)} or attardi<D>")
    p.add_argument("--oracle", choices=("greedy", "exact", "chart"), default="exact")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="exact-search state budget")
    p.add_argument("--max-len", type=int, default=None,
                   help=f"longer sentences use the greedy oracle (chart default {DEFAULT_CHART_MAX_LEN})")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("parse", help="highest-scoring derivable tree for an arc score file")
    p.add_argument("--system", required=True)
    p.add_argument("--scores", required=True, metavar="FILE")
    p.add_argument("--engine", choices=("auto", "general", "collapsed"), default="auto")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("crosscheck", help="oracle / chart / brute-force agreement on short sentences")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("complexity", help="chart item and rule-application counts by length")
    p.add_argument("--system", action="append", metavar="NAME")
    p.add_argument("--sizes", type=int, nargs="+", default=[6, 8, 10, 12, 14])
    p.set_defaults(func=cmd_complexity)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, UnknownPresetError, UnsupportedByChartError, LimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Short-sentence equivalence suite: oracles vs chart vs brute force."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .chart import build_chart, collapsible, compile_rules, recognize_gold
from .errors import LimitError
from .oracle import MAX_BRUTE_FORCE_N, exact_oracle, greedy_oracle, reachable_trees
from .scores import ScoreMatrix
from .transitions import PRESET_NAMES, all_trees, preset, run_sequence
from .treebank import is_nonprojective


@dataclass
class CheckResult:
    check: str
    system: str
    checked: int = 0
    mismatches: int = 0
    examples: list[str] = field(default_factory=list)

    def fail(self, what: str) -> None:
        self.mismatches += 1
        if len(self.examples) < 5:
            self.examples.append(what)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def check_oracles(name: str, max_n: int) -> CheckResult:
    """exact_oracle <=> recognize_gold <=> brute-force membership; greedy is sound."""
    sys = preset(name)
    res = CheckResult("oracle-equivalence", name)
    for n in range(1, max_n + 1):
        reach = reachable_trees(sys, n)
        for tree in all_trees(n):
            res.checked += 1
            exact = exact_oracle(sys, tree)
            chart = recognize_gold(sys, tree)
            brute = tree in reach
            if not exact == chart == brute:
                res.fail(f"{tree}: exact={exact} chart={chart} brute={brute}")
            seq = greedy_oracle(sys, tree)
            if seq is not None and (not exact or run_sequence(n, seq) != tree):
                res.fail(f"{tree}: greedy sequence is unsound")
    return res


def check_projectivity(max_n: int) -> CheckResult:
    sys = preset("arcstandard")
    res = CheckResult("projectivity-boundary", "arcstandard")
    for n in range(1, max_n + 1):
        reach = reachable_trees(sys, n)
        for tree in all_trees(n):
            res.checked += 1
            if (tree in reach) == is_nonprojective(tree):
                res.fail(str(tree))
    return res


def check_viterbi(name: str, max_n: int, trials: int, rng: random.Random) -> CheckResult:
    sys = preset(name)
    res = CheckResult("viterbi-optimality", name)
    reach = {n: reachable_trees(sys, n) for n in range(1, max_n + 1)}
    for _ in range(trials):
        n = rng.randint(1, max_n)
        scores = ScoreMatrix.random_integers(n, rng)
        chart = build_chart(sys, scores)
        tree, total = chart.best_tree()
        brute = max(scores.tree_score(t) for t in reach[n])
        res.checked += 1
        if total != brute or scores.tree_score(tree) != total or tree not in reach[n]:
            res.fail(f"n={n}: chart {total} ({tree}) vs brute force {brute}")
    return res


def check_engines(name: str, max_n: int, trials: int, rng: random.Random) -> CheckResult:
    """General and collapsed engines agree on every collapsible system."""
    sys = preset(name)
    res = CheckResult("engine-equivalence", name)
    for n in range(1, max_n + 1):
        for tree in all_trees(n):
            res.checked += 1
            g = recognize_gold(sys, tree, collapsed=False)
            c = recognize_gold(sys, tree, collapsed=True)
            if g != c:
                res.fail(f"{tree}: general={g} collapsed={c}")
    for _ in range(trials):
        n = rng.randint(1, max_n)
        scores = ScoreMatrix.random_integers(n, rng)
        g = build_chart(sys, scores, collapsed=False)
        c = build_chart(sys, scores, collapsed=True)
        res.checked += 1
        if g.goal_score() != c.goal_score():
            res.fail(f"n={n}: general={g.goal_score()} collapsed={c.goal_score()}")
        if any(item[0] != item[2] for item in g.items()):
            res.fail(f"n={n}: general engine derived an item with h1 != h2")
    return res


def run_crosscheck(max_n: int = 4, trials: int = 100, seed: int = 0,
                   systems=PRESET_NAMES) -> list[CheckResult]:
    if not 1 <= max_n <= MAX_BRUTE_FORCE_N:
        raise LimitError(f"max-n must be in 1..{MAX_BRUTE_FORCE_N}")
    rng = random.Random(seed)
    results = [check_projectivity(max_n)]
    for name in systems:
        results.append(check_oracles(name, max_n))
    for name in systems:
        results.append(check_viterbi(name, max_n, trials, rng))
    for name in systems:
        if collapsible(compile_rules(preset(name))):
            results.append(check_engines(name, max_n, trials, rng))
    return results


def format_report(results: list[CheckResult], max_n: int, trials: int, seed: int) -> str:
    lines = [f"# crosscheck max_n={max_n} trials={trials} seed={seed}", "check\tsystem\tchecked\tmismatches\tstatus"]
    for r in results:
        lines.append(f"{r.check}\t{r.system}\t{r.checked}\t{r.mismatches}\t{'PASS' if r.ok else 'FAIL'}")
        for ex in r.examples:
            lines.append(f"#   {ex}")
    failed = sum(not r.ok for r in results)
    lines.append(f"# {len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"

"""Tabular exact inference over I-computation items ``[h1, i, h2, h3, j]``.

An item says: starting with ``h1`` on top of the stack and the buffer at ``i``,
some computation replaces ``h1`` by ``h2 h3`` and moves the buffer to ``j``.
Every reduce rule joins two adjacent items

    premise1 = [A, iA, B, C, k]      premise2 = [C, k, D, E, j]

whose concatenation exposes the window ``s2=B, s1=D, s0=E, b0=j``; the rule
creates one arc and drops its modifier from the window.

Two engines are provided.  :class:`GeneralChart` stores 5-index items and
factors each rule into a fold over the eliminated window variable followed
by a join on the shared ``(C, k)`` pair, so no loop touches more than seven
indices.  :class:`CollapsedChart` applies when no rule reduces ``s2``: then
every item has ``h1 == h2`` and 4 indices suffice, with 6-index joins.

Items are finalized in order of increasing right end ``j`` and, for a fixed
``j``, increasing span, which is a topological order of the deduction rules
(each reduce premise has a strictly shorter span or an earlier right end).
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator

from .errors import NoParseError, UnsupportedByChartError
from .scores import NEG_INF, ScoreMatrix
from .transitions import B0, R, S0, S1, S2, DepTree, ReduceTransition, TransitionSystem

EPS = -1  # empty stack / buffer context

_SLOT_VAR = {S2: "B", S1: "D", S0: "E", B0: "j"}


@dataclass(frozen=True)
class RuleRow:
    transition: ReduceTransition
    head: str  # one of B, D, E, j
    modifier: str  # one of B, D, E
    conclusion: tuple[str, str]  # the two window nodes that stay, in stack order

    def __str__(self):
        a, b = self.conclusion
        return f"{self.transition}: arc {self.head}->{self.modifier}, conclusion (A,iA,{a},{b},j)"


def compile_rules(sys: TransitionSystem) -> tuple[RuleRow, ...]:
    rows = []
    for t in sys.reduces:
        if t not in R:
            raise UnsupportedByChartError(f"{t} lies outside the window s0, s1, s2, b0")
        mod = _SLOT_VAR[t.modifier]
        kept = tuple(v for v in "BDE" if v != mod)
        rows.append(RuleRow(t, _SLOT_VAR[t.head], mod, kept))  # type: ignore[arg-type]
    return tuple(rows)


def collapsible(rows) -> bool:
    return all(row.modifier != "B" for row in rows)


class CollapsedInvariantError(AssertionError):
    pass


@dataclass(frozen=True)
class ChartMetrics:
    items: int
    applications: int
    collapsed: bool


class Chart:
    """Common bookkeeping: scores, backpointers, goal lookup and tree extraction."""

    collapsed = False

    def __init__(self, rows, scores: ScoreMatrix):
        self.rows = tuple(rows)
        self.scores = scores
        self.n = scores.n
        self.best: dict[tuple, float] = {}
        self.back: dict[tuple, tuple | None] = {}
        self.applications = 0

    # subclasses fill these in
    def axiom(self) -> tuple: ...
    def goal(self) -> tuple: ...
    def expand(self, key: tuple) -> tuple: ...

    def items(self) -> Iterator[tuple]:
        """All derived items as 5-tuples ``(h1, i, h2, h3, j)``."""
        return (self.expand(k) for k in self.best)

    def goal_score(self) -> float:
        return self.best.get(self.goal(), NEG_INF)

    def recognized(self) -> bool:
        return self.goal() in self.best

    def arcs(self, key: tuple) -> list[tuple[int, int]]:
        out = []
        todo = [key]
        while todo:
            bp = self.back[todo.pop()]
            if bp is None:
                continue
            _, p1, p2, arc = bp
            out.append(arc)
            todo.append(p1)
            todo.append(p2)
        return out

    def best_tree(self) -> tuple[DepTree, float]:
        goal = self.goal()
        if goal not in self.best:
            raise NoParseError("no derivation reaches the goal item")
        return DepTree.from_arcs(self.n, self.arcs(goal)), self.best[goal]

    def metrics(self) -> ChartMetrics:
        return ChartMetrics(len(self.best), self.applications, self.collapsed)


class GeneralChart(Chart):
    """5-index engine; folds then joins so no loop nest exceeds 7 indices."""

    def __init__(self, rows, scores: ScoreMatrix):
        super().__init__(rows, scores)
        # premise1 index: (i, k) -> C -> [(A, B, score)]
        self.left: dict[tuple[int, int], dict[int, list]] = {}
        # premise2 index: (k, j) -> C -> [(D, E, score)]
        self.right: dict[tuple[int, int], dict[int, list]] = {}
        self.ends: dict[int, dict[int, int]] = defaultdict(dict)
        self._fold2: dict[tuple, dict] = {}
        self._fold1: dict[tuple, dict] = {}

    def axiom(self):
        return (EPS, 0, EPS, 0, 1)

    def goal(self):
        return (EPS, 0, EPS, 0, self.n + 1)

    def expand(self, key):
        return key

    def _register(self, i: int, j: int, found: dict) -> None:
        left = {}
        right = {}
        ends = self.ends[j]
        for key, (val, bp) in found.items():
            h1, _, h2, h3, _ = key
            self.best[key] = val
            self.back[key] = bp
            left.setdefault(h3, []).append((h1, h2, val))
            right.setdefault(h1, []).append((h2, h3, val))
            ends[h3] = ends.get(h3, 0) + 1
        if found:
            self.left[(i, j)] = left
            self.right[(i, j)] = right

    def _shift(self, j: int) -> dict:
        # premises: every item ending at j - 1; the shifted item carries no arcs
        found = {}
        for h3, count in sorted(self.ends[j - 1].items()):
            self.applications += count
            found[(h3, j - 1, h3, j - 1, j)] = (0.0, None)
        return found

    def run(self) -> GeneralChart:
        n = self.n
        self._register(0, 1, {self.axiom(): (0.0, None)})
        for j in range(2, n + 2):
            self._register(j - 1, j, self._shift(j))
            for i in range(j - 2, -1, -1):
                found = self._combine(i, j)
                self._register(i, j, found)
        return self

    # fold over the modifier when it sits in premise2 (D or E)
    def _fold_right(self, r: int, row: RuleRow, k: int, j: int, C: int, rights, b_head: int | None):
        key = (r, k, j, C, b_head)
        out = self._fold2.get(key)
        if out is not None:
            return out
        S = self.scores.rows()
        out = {}
        elim_d = row.modifier == "D"
        apps = 0
        for D, E, s in rights:
            if elim_d:
                mod, kept = D, E
            else:
                mod, kept = E, D
            if mod == 0:
                continue
            if row.head == "j":
                head = j
            elif row.head == "B":
                head = b_head
            else:
                head = kept
            a = S[head][mod]
            if a == NEG_INF:
                continue
            apps += 1
            v = s + a
            cur = out.get(kept)
            if cur is None or v > cur[0]:
                out[kept] = (v, mod)
        self.applications += apps
        self._fold2[key] = out
        return out

    # fold over B (premise1's h2) for rules reducing s2, keyed by the head value
    def _fold_left(self, r: int, i: int, k: int, C: int, lefts, head: int):
        key = (r, i, k, C, head)
        out = self._fold1.get(key)
        if out is not None:
            return out
        col = self.scores.rows()[head]
        out = {}
        apps = 0
        for A, B, s in lefts:
            if B == EPS or B == 0:
                continue
            a = col[B]
            if a == NEG_INF:
                continue
            apps += 1
            v = s + a
            cur = out.get(A)
            if cur is None or v > cur[0]:
                out[A] = (v, B)
        self.applications += apps
        self._fold1[key] = out
        return out

    def _combine(self, i: int, j: int) -> dict:
        n = self.n
        found: dict[tuple, tuple] = {}
        apps = 0
        for k in range(i + 1, j):
            L = self.left.get((i, k))
            Rt = self.right.get((k, j))
            if not L or not Rt:
                continue
            for C in sorted(L.keys() & Rt.keys()):
                lefts = L[C]
                rights = Rt[C]
                for r, row in enumerate(self.rows):
                    if row.head == "j" and j > n:
                        continue
                    if row.modifier == "B":
                        if row.head == "j":
                            G = self._fold_left(r, i, k, C, lefts, j)
                            if not G:
                                continue
                            for D, E, s2 in rights:
                                for A, (g, B) in G.items():
                                    apps += 1
                                    v = g + s2
                                    key = (A, i, D, E, j)
                                    cur = found.get(key)
                                    if cur is None or v > cur[0]:
                                        found[key] = (v, (r, (A, i, B, C, k), (C, k, D, E, j), (j, B)))
                        else:
                            head_is_d = row.head == "D"
                            for D, E, s2 in rights:
                                h = D if head_is_d else E
                                G = self._fold_left(r, i, k, C, lefts, h)
                                for A, (g, B) in G.items():
                                    apps += 1
                                    v = g + s2
                                    key = (A, i, D, E, j)
                                    cur = found.get(key)
                                    if cur is None or v > cur[0]:
                                        found[key] = (v, (r, (A, i, B, C, k), (C, k, D, E, j), (h, B)))
                    else:
                        elim_d = row.modifier == "D"
                        shared = None if row.head == "B" else self._fold_right(r, row, k, j, C, rights, None)
                        for A, B, s1 in lefts:
                            if shared is None:
                                if B == EPS:
                                    continue
                                F = self._fold_right(r, row, k, j, C, rights, B)
                            else:
                                F = shared
                            for kept, (f, x) in F.items():
                                apps += 1
                                v = s1 + f
                                key = (A, i, B, kept, j)
                                cur = found.get(key)
                                if cur is None or v > cur[0]:
                                    if row.head == "j":
                                        head = j
                                    elif row.head == "B":
                                        head = B
                                    else:
                                        head = kept
                                    p2 = (C, k, x, kept, j) if elim_d else (C, k, kept, x, j)
                                    found[key] = (v, (r, (A, i, B, C, k), p2, (head, x)))
        self.applications += apps
        return found


class CollapsedChart(Chart):
    """4-index engine for systems that never reduce ``s2``.

    Items are stored as ``(h1, i, h3, j)``; the implied ``h2`` equals ``h1``.
    """

    collapsed = True

    def __init__(self, rows, scores: ScoreMatrix):
        if not collapsible(rows):
            raise UnsupportedByChartError("collapsed mode requires a system that never reduces s2")
        super().__init__(rows, scores)
        self.left: dict[tuple[int, int], dict[int, list]] = {}
        self.right: dict[tuple[int, int], dict[int, list]] = {}
        self.ends: dict[int, dict[int, int]] = defaultdict(dict)
        # window values are addressed as (A, C, E, j) == (B, D, E, j) here
        pos = {"B": 0, "D": 1, "E": 2, "j": 3}
        self._compiled = [
            (r, pos[row.head], pos[row.modifier], pos[row.conclusion[0]], pos[row.conclusion[1]], row.head == "j")
            for r, row in enumerate(self.rows)
        ]

    def axiom(self):
        return (EPS, 0, 0, 1)

    def goal(self):
        return (EPS, 0, 0, self.n + 1)

    def expand(self, key):
        h1, i, h3, j = key
        return (h1, i, h1, h3, j)

    def _register(self, i, j, found):
        left = {}
        right = {}
        ends = self.ends[j]
        for key, (val, bp) in found.items():
            h1, _, h3, _ = key
            self.best[key] = val
            self.back[key] = bp
            left.setdefault(h3, []).append((h1, val))
            right.setdefault(h1, []).append((h3, val))
            ends[h3] = ends.get(h3, 0) + 1
        if found:
            self.left[(i, j)] = left
            self.right[(i, j)] = right

    def run(self) -> CollapsedChart:
        n = self.n
        self._register(0, 1, {self.axiom(): (0.0, None)})
        for j in range(2, n + 2):
            found = {}
            for h3, count in sorted(self.ends[j - 1].items()):
                self.applications += count
                found[(h3, j - 1, j - 1, j)] = (0.0, None)
            self._register(j - 1, j, found)
            for i in range(j - 2, -1, -1):
                self._register(i, j, self._combine(i, j))
        return self

    def _combine(self, i, j):
        n = self.n
        S = self.scores.rows()
        rules = [c for c in self._compiled if not (c[5] and j > n)]
        found: dict[tuple, tuple] = {}
        apps = 0
        for k in range(i + 1, j):
            L = self.left.get((i, k))
            Rt = self.right.get((k, j))
            if not L or not Rt:
                continue
            for C in sorted(L.keys() & Rt.keys()):
                lefts = L[C]
                rights = Rt[C]
                for A, s1 in lefts:
                    for E, s2 in rights:
                        window = (A, C, E, j)
                        base = s1 + s2
                        for r, hp, mp, c0, c1, _ in rules:
                            head = window[hp]
                            mod = window[mp]
                            if head == EPS or mod == 0:
                                continue
                            a = S[head][mod]
                            if a == NEG_INF:
                                continue
                            if window[c0] != A:
                                raise CollapsedInvariantError(
                                    f"rule {self.rows[r].transition} derived an item with h1 != h2"
                                )
                            apps += 1
                            v = base + a
                            key = (A, i, window[c1], j)
                            cur = found.get(key)
                            if cur is None or v > cur[0]:
                                found[key] = (v, (r, (A, i, C, k), (C, k, E, j), (head, mod)))
        self.applications += apps
        return found


def _select(sys: TransitionSystem, collapsed: bool | None):
    rows = compile_rules(sys)
    if collapsed is None:
        collapsed = collapsible(rows)
    return rows, (CollapsedChart if collapsed else GeneralChart)


def build_chart(sys: TransitionSystem, scores: ScoreMatrix, collapsed: bool | None = None) -> Chart:
    """Run the full chart closure; ``collapsed=None`` picks the engine from the rules."""
    rows, engine = _select(sys, collapsed)
    return engine(rows, scores).run()


def recognize_gold(sys: TransitionSystem, gold: DepTree, collapsed: bool | None = None) -> bool:
    return build_chart(sys, ScoreMatrix.gold(gold), collapsed).recognized()


def viterbi_parse(
    sys: TransitionSystem, scores: ScoreMatrix, n: int | None = None, collapsed: bool | None = None
) -> tuple[DepTree, float]:
    if n is not None and n != scores.n:
        raise ValueError(f"score matrix is for n={scores.n}, not {n}")
    tree, total = build_chart(sys, scores, collapsed).best_tree()
    if math.isinf(total):
        raise NoParseError("no derivation reaches the goal item")
    return tree, total


def chart_metrics(sys: TransitionSystem, n: int, scores: ScoreMatrix | None = None,
                  collapsed: bool | None = None) -> ChartMetrics:
    scores = ScoreMatrix.zeros(n) if scores is None else scores
    return build_chart(sys, scores, collapsed).metrics()

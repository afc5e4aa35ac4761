"""Arc score matrices and their text format.

The file format is line oriented::

    # comment
    n 4
    0 3 1.5
    3 1 -0.25

Unlisted (head, modifier) pairs are disallowed (score ``-inf``).
"""

from __future__ import annotations

import math
import random
from typing import IO, Iterable

from .errors import ScoreFileError
from .transitions import DepTree

NEG_INF = -math.inf


class ScoreMatrix:
    """Scores ``score(h, m)`` for heads ``0..n`` and modifiers ``1..n``."""

    def __init__(self, n: int, fill: float = NEG_INF):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self._s = [[fill] * (n + 1) for _ in range(n + 1)]
        for h in range(n + 1):
            self._s[h][0] = NEG_INF
            self._s[h][h] = NEG_INF

    def __call__(self, head: int, mod: int) -> float:
        return self._s[head][mod]

    def set(self, head: int, mod: int, value: float) -> None:
        if not (0 <= head <= self.n and 1 <= mod <= self.n) or head == mod:
            raise ValueError(f"arc ({head}, {mod}) cannot be scored for n={self.n}")
        self._s[head][mod] = float(value)

    def rows(self) -> list[list[float]]:
        return self._s

    def allowed(self, head: int, mod: int) -> bool:
        return self._s[head][mod] > NEG_INF

    def tree_score(self, tree: DepTree) -> float:
        return sum(self._s[h][m] for m, h in enumerate(tree.heads, start=1))

    @classmethod
    def zeros(cls, n: int) -> ScoreMatrix:
        return cls(n, fill=0.0)

    @classmethod
    def from_dict(cls, n: int, scores: dict[tuple[int, int], float]) -> ScoreMatrix:
        sm = cls(n)
        for (h, m), v in scores.items():
            sm.set(h, m, v)
        return sm

    @classmethod
    def gold(cls, tree: DepTree) -> ScoreMatrix:
        """Zero on the arcs of ``tree``, disallowed elsewhere."""
        sm = cls(tree.n)
        for m, h in enumerate(tree.heads, start=1):
            sm.set(h, m, 0.0)
        return sm

    @classmethod
    def random_integers(cls, n: int, rng: random.Random, low: int = -5, high: int = 5) -> ScoreMatrix:
        sm = cls(n)
        for h in range(n + 1):
            for m in range(1, n + 1):
                if h != m:
                    sm.set(h, m, rng.randint(low, high))
        return sm

    def __eq__(self, other):
        return isinstance(other, ScoreMatrix) and self.n == other.n and self._s == other._s


def parse_scores(lines: Iterable[str]) -> ScoreMatrix:
    sm = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if sm is None:
            if len(fields) != 2 or fields[0] != "n":
                raise ScoreFileError("expected header 'n <int>'", lineno)
            try:
                n = int(fields[1])
            except ValueError:
                raise ScoreFileError(f"bad sentence length {fields[1]!r}", lineno) from None
            if n < 1:
                raise ScoreFileError("sentence length must be >= 1", lineno)
            sm = ScoreMatrix(n)
            continue
        if len(fields) != 3:
            raise ScoreFileError("expected 'head modifier score'", lineno)
        try:
            h, m, v = int(fields[0]), int(fields[1]), float(fields[2])
        except ValueError:
            raise ScoreFileError(f"cannot parse {line!r}", lineno) from None
        if math.isnan(v):
            raise ScoreFileError("score is NaN", lineno)
        try:
            sm.set(h, m, v)
        except ValueError as exc:
            raise ScoreFileError(str(exc), lineno) from None
    if sm is None:
        raise ScoreFileError("missing 'n <int>' header")
    return sm


def read_scores(fh: IO[str]) -> ScoreMatrix:
    return parse_scores(fh)


def format_scores(sm: ScoreMatrix) -> str:
    out = [f"n {sm.n}"]
    for h in range(sm.n + 1):
        for m in range(1, sm.n + 1):
            if sm.allowed(h, m):
                out.append(f"{h} {m} {sm(h, m):g}")
    return "\n".join(out) + "\n"

"""Sentences, dependency trees, configurations and the shift/reduce semantics.

A configuration keeps the stack as a tuple of node ids (bottom to top) and the
buffer as the index of its first node; the buffer is always the contiguous
suffix ``buffer_start..n``.  Reduce transitions are described by a pair of
window slots (head, modifier) drawn from ``s0, s1, s2, ...`` and ``b0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import (
    IncompleteDerivationError,
    InvalidSentenceError,
    InvalidTreeError,
    RootReductionError,
    SequenceInvalidError,
    TransitionInapplicableError,
    UnknownPresetError,
)

ROOT = 0


@dataclass(frozen=True)
class Sentence:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidSentenceError(f"sentence length must be >= 1, got {self.n!r}")


@dataclass(frozen=True, order=True)
class Arc:
    head: int
    modifier: int

    def __post_init__(self):
        if self.modifier == ROOT:
            raise InvalidTreeError("node 0 cannot be a modifier")
        if self.head == self.modifier:
            raise InvalidTreeError(f"self loop on node {self.head}")

    def span(self) -> tuple[int, int]:
        return min(self.head, self.modifier), max(self.head, self.modifier)


@dataclass(frozen=True)
class DepTree:
    """A tree over tokens ``1..n`` rooted at the artificial node 0.

    ``heads[m - 1]`` is the head of token ``m``.
    """

    heads: tuple[int, ...]

    def __post_init__(self):
        heads = tuple(self.heads)
        object.__setattr__(self, "heads", heads)
        n = len(heads)
        if n < 1:
            raise InvalidTreeError("a tree needs at least one token")
        for m, h in enumerate(heads, start=1):
            if not isinstance(h, int) or not 0 <= h <= n:
                raise InvalidTreeError(f"head {h!r} of token {m} is out of range 0..{n}")
            if h == m:
                raise InvalidTreeError(f"token {m} is its own head")
        # every token must reach the root
        state = [0] * (n + 1)  # 0 unseen, 1 on path, 2 reaches root
        state[0] = 2
        for start in range(1, n + 1):
            path = []
            node = start
            while state[node] == 0:
                state[node] = 1
                path.append(node)
                node = heads[node - 1]
            if state[node] == 1:
                raise InvalidTreeError(f"cycle through token {node}")
            for p in path:
                state[p] = 2

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Arc | tuple[int, int]]) -> DepTree:
        heads: list[int | None] = [None] * n
        for arc in arcs:
            h, m = (arc.head, arc.modifier) if isinstance(arc, Arc) else arc
            if not 1 <= m <= n:
                raise InvalidTreeError(f"modifier {m} out of range 1..{n}")
            if heads[m - 1] is not None:
                raise InvalidTreeError(f"token {m} has two heads")
            heads[m - 1] = h
        missing = [m for m, h in enumerate(heads, start=1) if h is None]
        if missing:
            raise InvalidTreeError(f"tokens without head: {missing}")
        return cls(tuple(heads))  # type: ignore[arg-type]

    @property
    def n(self) -> int:
        return len(self.heads)

    def head_of(self, m: int) -> int:
        return self.heads[m - 1]

    def arcs(self) -> frozenset[tuple[int, int]]:
        return frozenset((h, m) for m, h in enumerate(self.heads, start=1))

    def dependents(self) -> list[list[int]]:
        """Dependents of every node ``0..n``, in increasing order."""
        deps: list[list[int]] = [[] for _ in range(self.n + 1)]
        for m, h in enumerate(self.heads, start=1):
            deps[h].append(m)
        return deps

    def __str__(self):
        return "{" + ", ".join(f"{m}->{h}" for m, h in enumerate(self.heads, start=1)) + "}"


def all_trees(n: int) -> list[DepTree]:
    """Every rooted labeled tree over ``n`` tokens, ``(n + 1) ** (n - 1)`` of them."""
    from itertools import product

    trees = []
    for heads in product(range(n + 1), repeat=n):
        try:
            trees.append(DepTree(heads))
        except InvalidTreeError:
            continue
    return trees


# --- slots and transitions -------------------------------------------------


@dataclass(frozen=True, order=True)
class Slot:
    """A window position: ``s<k>`` (k-th stack item from the top) or ``b0``."""

    kind: str  # "s" or "b"
    position: int = 0

    def __post_init__(self):
        if self.kind not in ("s", "b") or self.position < 0:
            raise ValueError(f"bad slot {self.kind}{self.position}")
        if self.kind == "b" and self.position != 0:
            raise ValueError("only b0 may be used as a slot")

    @property
    def index(self) -> int:
        """Window index: ``k`` for ``s<k>``, -1 for ``b0`` (adjacent to ``s0``)."""
        return self.position if self.kind == "s" else -1

    @property
    def on_stack(self) -> bool:
        return self.kind == "s"

    def __str__(self):
        return f"{self.kind}{self.position}"

    @classmethod
    def parse(cls, text: str) -> Slot:
        m = re.fullmatch(r"\s*([sb])(\d+)\s*", text)
        if not m:
            raise ValueError(f"cannot parse slot {text!r}")
        return cls(m.group(1), int(m.group(2)))


S0 = Slot("s", 0)
S1 = Slot("s", 1)
S2 = Slot("s", 2)
B0 = Slot("b", 0)


def stack_slot(k: int) -> Slot:
    return Slot("s", k)


class _Shift:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "SHIFT"

    def __str__(self):
        return "sh"

    def __reduce__(self):
        return (_Shift, ())


SHIFT = _Shift()


@dataclass(frozen=True)
class ReduceTransition:
    head: Slot
    modifier: Slot

    def __post_init__(self):
        if not self.modifier.on_stack:
            raise ValueError("the modifier of a reduce must come from the stack")
        if self.head == self.modifier:
            raise ValueError("head and modifier slots must differ")

    @property
    def degree(self) -> int:
        return abs(self.head.index - self.modifier.index)

    def __str__(self):
        return f"re({self.head},{self.modifier})"

    def __repr__(self):
        return str(self)


Transition = Union[_Shift, ReduceTransition]


def re_(head: Slot | str, modifier: Slot | str) -> ReduceTransition:
    if isinstance(head, str):
        head = Slot.parse(head)
    if isinstance(modifier, str):
        modifier = Slot.parse(modifier)
    return ReduceTransition(head, modifier)


def degree(t: ReduceTransition) -> int:
    return t.degree


def parse_transition(text: str) -> Transition:
    """Parse ``sh`` or ``re(h,m)`` (e.g. ``re(s0,s1)``)."""
    text = text.strip()
    if text == "sh":
        return SHIFT
    m = re.fullmatch(r"re\(\s*(\w+)\s*,\s*(\w+)\s*\)", text)
    if not m:
        raise ValueError(f"cannot parse transition {text!r}")
    return re_(m.group(1), m.group(2))


# The nine reduces expressible over the window {s0, s1, s2, b0}.
R: tuple[ReduceTransition, ...] = (
    re_(S0, S1),
    re_(S1, S0),
    re_(S0, S2),
    re_(S2, S0),
    re_(S1, S2),
    re_(S2, S1),
    re_(B0, S0),
    re_(B0, S1),
    re_(B0, S2),
)


@dataclass(frozen=True)
class TransitionSystem:
    name: str
    reduces: tuple[ReduceTransition, ...]

    def __post_init__(self):
        object.__setattr__(self, "reduces", tuple(self.reduces))
        if len(set(self.reduces)) != len(self.reduces):
            raise ValueError(f"duplicate reduce in system {self.name}")

    @property
    def max_degree(self) -> int:
        return max(t.degree for t in self.reduces)

    def within_window(self) -> bool:
        return all(t in R for t in self.reduces)

    def __str__(self):
        return self.name


def _attardi(d: int) -> tuple[ReduceTransition, ...]:
    reduces = [re_(S0, S1), re_(S1, S0)]
    for k in range(2, d + 1):
        reduces += [re_(S0, stack_slot(k)), re_(stack_slot(k), S0)]
    return tuple(reduces)


_PRESETS = {
    "arcstandard": _attardi(1),
    "attardi2": _attardi(2),
    "alldeg1": _attardi(2) + (re_(S1, S2), re_(S2, S1), re_(B0, S0)),
    "all": R,
    "alls0s1": tuple(t for t in R if t.modifier != S2),
}

PRESET_NAMES = ("arcstandard", "attardi2", "alldeg1", "all", "alls0s1")


def preset(name: str) -> TransitionSystem:
    """Look up a named system; ``attardi<D>`` / ``attardiD(D)`` give degree-D Attardi."""
    key = name.strip().lower()
    if key in _PRESETS:
        return TransitionSystem(key, _PRESETS[key])
    m = re.fullmatch(r"attardi(?:d\((\d+)\)|(\d+))", key)
    if m:
        d = int(m.group(1) or m.group(2))
        if d < 1:
            raise UnknownPresetError(f"Attardi degree must be >= 1: {name!r}")
        return TransitionSystem(f"attardi{d}", _attardi(d))
    raise UnknownPresetError(f"unknown transition system {name!r}")


# --- configurations ----------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    n: int
    stack: tuple[int, ...]
    buffer_start: int
    arcs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    @property
    def buffer(self) -> range:
        return range(self.buffer_start, self.n + 1)

    def resolve(self, slot: Slot) -> int:
        """Node id occupying ``slot``; raises if the slot is empty."""
        if slot.on_stack:
            if slot.position >= len(self.stack):
                raise TransitionInapplicableError(f"no {slot} on a stack of depth {len(self.stack)}")
            return self.stack[-1 - slot.position]
        if self.buffer_start > self.n:
            raise TransitionInapplicableError("b0 requested on an empty buffer")
        return self.buffer_start


def initial_config(n: int) -> Configuration:
    Sentence(n)
    return Configuration(n, (), 0, frozenset())


def is_terminal(c: Configuration, n: int | None = None) -> bool:
    n = c.n if n is None else n
    return c.buffer_start == n + 1 and c.stack == (ROOT,)


def apply_shift(c: Configuration) -> Configuration:
    if c.buffer_start > c.n:
        raise TransitionInapplicableError("shift on an empty buffer")
    return Configuration(c.n, c.stack + (c.buffer_start,), c.buffer_start + 1, c.arcs)


def resolve_reduce(c: Configuration, t: ReduceTransition) -> tuple[int, int]:
    """The (head, modifier) pair ``t`` would create in ``c``."""
    return c.resolve(t.head), c.resolve(t.modifier)


def apply_reduce(c: Configuration, t: ReduceTransition) -> Configuration:
    head, mod = resolve_reduce(c, t)
    if mod == ROOT:
        raise RootReductionError(f"{t} would reduce the root")
    pos = len(c.stack) - 1 - t.modifier.position
    stack = c.stack[:pos] + c.stack[pos + 1 :]
    return Configuration(c.n, stack, c.buffer_start, c.arcs | {(head, mod)})


def apply(c: Configuration, t: Transition) -> Configuration:
    if t is SHIFT:
        return apply_shift(c)
    return apply_reduce(c, t)  # type: ignore[arg-type]


def run_sequence(n: int, seq: Sequence[Transition | str]) -> DepTree:
    c = initial_config(n)
    for index, t in enumerate(seq):
        if isinstance(t, str):
            t = parse_transition(t)
        try:
            c = apply(c, t)
        except (TransitionInapplicableError, RootReductionError) as exc:
            raise SequenceInvalidError(index, exc) from exc
    if not is_terminal(c):
        raise IncompleteDerivationError(
            f"sequence ends in a non-terminal configuration (stack {list(c.stack)}, "
            f"buffer starts at {c.buffer_start})"
        )
    return DepTree.from_arcs(n, c.arcs)

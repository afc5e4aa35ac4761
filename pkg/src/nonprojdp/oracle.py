"""Oracles deciding whether a transition system can derive a gold tree.

``greedy_oracle`` is the deterministic static oracle used for corpus coverage.
``exact_oracle`` searches every gold-consistent derivation, and
``reachable_trees`` enumerates everything a system derives on short inputs.
"""

from __future__ import annotations

from .errors import BudgetExceededError, LimitError, RootReductionError, TransitionInapplicableError
from .transitions import (
    ROOT,
    SHIFT,
    Configuration,
    DepTree,
    ReduceTransition,
    Transition,
    TransitionSystem,
    apply_reduce,
    apply_shift,
    initial_config,
    is_terminal,
)

DEFAULT_BUDGET = 1_000_000
MAX_BRUTE_FORCE_N = 5


class _Gold:
    def __init__(self, gold: DepTree):
        self.n = gold.n
        self.heads = (None,) + gold.heads
        self.children = gold.dependents()
        self.n_deps = [len(c) for c in self.children]

    def is_arc(self, head: int, mod: int) -> bool:
        return mod != ROOT and self.heads[mod] == head


def _try_resolve(c: Configuration, t: ReduceTransition):
    try:
        return c.resolve(t.head), c.resolve(t.modifier)
    except TransitionInapplicableError:
        return None


def greedy_oracle(sys: TransitionSystem, gold: DepTree) -> list[Transition] | None:
    """Static oracle: first ready reduce in priority order, else shift.

    A reduce is ready when it creates a gold arc whose modifier already has all
    of its gold dependents. Returns the transition sequence, or None on failure.
    """
    g = _Gold(gold)
    attached = [0] * (g.n + 1)
    c = initial_config(g.n)
    seq: list[Transition] = []
    while not is_terminal(c):
        for t in sys.reduces:
            pair = _try_resolve(c, t)
            if pair is None:
                continue
            head, mod = pair
            if g.is_arc(head, mod) and attached[mod] == g.n_deps[mod]:
                c = apply_reduce(c, t)
                attached[head] += 1
                seq.append(t)
                break
        else:
            if c.buffer_start > g.n:
                return None
            c = apply_shift(c)
            seq.append(SHIFT)
    return seq


def exact_oracle(sys: TransitionSystem, gold: DepTree, state_budget: int = DEFAULT_BUDGET) -> bool:
    """Exhaustive search over gold-consistent derivations.

    States are memoized on (stack, buffer_start): with only gold arcs allowed,
    the arc set is exactly the gold arcs of nodes no longer on stack or buffer.
    Raises BudgetExceededError once more than ``state_budget`` states are seen.
    """
    if state_budget < 1:
        raise ValueError("state budget must be positive")
    g = _Gold(gold)
    n = g.n
    reduces = sys.reduces
    visited: set[tuple[tuple[int, ...], int]] = set()

    start = ((), 0)
    todo = [start]
    visited.add(start)
    while todo:
        stack, bs = todo.pop()
        if bs == n + 1 and stack == (ROOT,):
            return True
        present = set(stack)
        present.update(range(bs, n + 1))
        successors = []
        depth = len(stack)
        for t in reduces:
            if t.modifier.position >= depth:
                continue
            mod = stack[-1 - t.modifier.position]
            if t.head.on_stack:
                if t.head.position >= depth:
                    continue
                head = stack[-1 - t.head.position]
            else:
                if bs > n:
                    continue
                head = bs
            if not g.is_arc(head, mod):
                continue
            # ready: every gold dependent of mod already reduced
            if any(d in present for d in g.children[mod]):
                continue
            pos = depth - 1 - t.modifier.position
            successors.append((stack[:pos] + stack[pos + 1 :], bs))
        if bs <= n:
            successors.append((stack + (bs,), bs + 1))
        for state in successors:
            if state in visited:
                continue
            visited.add(state)
            if len(visited) > state_budget:
                raise BudgetExceededError(state_budget)
            todo.append(state)
    return False


def reachable_trees(sys: TransitionSystem, n: int) -> set[DepTree]:
    """Every tree over ``n`` tokens some transition sequence of ``sys`` derives."""
    if n > MAX_BRUTE_FORCE_N:
        raise LimitError(f"brute-force enumeration is limited to n <= {MAX_BRUTE_FORCE_N}")
    start = initial_config(n)
    seen = {start}
    todo = [start]
    trees: set[DepTree] = set()
    while todo:
        c = todo.pop()
        if is_terminal(c):
            trees.add(DepTree.from_arcs(n, c.arcs))
            continue
        nxt = []
        if c.buffer_start <= n:
            nxt.append(apply_shift(c))
        for t in sys.reduces:
            try:
                nxt.append(apply_reduce(c, t))
            except (TransitionInapplicableError, RootReductionError):
                pass
        for c2 in nxt:
            if c2 not in seen:
                seen.add(c2)
                todo.append(c2)
    return trees

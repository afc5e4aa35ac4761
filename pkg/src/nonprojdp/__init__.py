"""Non-projective transition-based dependency parsing with exact inference.

Transition systems built from reduces over the window ``s0, s1, s2, b0``,
oracles for measuring treebank coverage, and chart parsers over I-computation
items for recognition and arc-factored Viterbi search.
"""

from .chart import (
    ChartMetrics,
    CollapsedChart,
    GeneralChart,
    build_chart,
    chart_metrics,
    compile_rules,
    recognize_gold,
    viterbi_parse,
)
from .errors import *  # noqa: F401,F403
from .oracle import exact_oracle, greedy_oracle, reachable_trees
from .scores import ScoreMatrix, parse_scores, read_scores
from .transitions import (
    B0,
    PRESET_NAMES,
    R,
    S0,
    S1,
    S2,
    SHIFT,
    Arc,
    Configuration,
    DepTree,
    ReduceTransition,
    Sentence,
    Slot,
    TransitionSystem,
    all_trees,
    apply_reduce,
    apply_shift,
    degree,
    initial_config,
    is_terminal,
    parse_transition,
    preset,
    re_,
    run_sequence,
)
from .treebank import corpus_stats, is_nonprojective, parse_conllu, read_conllu

__version__ = "0.1.0"

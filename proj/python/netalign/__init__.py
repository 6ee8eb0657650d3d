"""Pairwise network alignment toolkit.

Synthesis, six aligners behind one registry, and ranking metrics. The heavy
lifting lives in the compiled extension; this package re-exports its surface.

>>> import netalign as na
>>> g1, g2, truth = na.permuted_pair(na.er_graph(100, 10, seed=0), seed=0)
>>> task = na.Task(g1, g2, truth, train_ratio=0.2, seed=0)
>>> res = na.align("isorank", task)
>>> na.hits_at_k(res.scores, task.test_pairs, 10)  # doctest: +SKIP
"""

from ._core import (
    AlignResult,
    Graph,
    Task,
    algorithms,
    align,
    default_params,
    er_graph,
    greedy_match,
    hits_at_k,
    mrr,
    permuted_pair,
    sinkhorn,
)

__all__ = [
    "AlignResult",
    "Graph",
    "Task",
    "algorithms",
    "align",
    "default_params",
    "er_graph",
    "greedy_match",
    "hits_at_k",
    "mrr",
    "permuted_pair",
    "sinkhorn",
]

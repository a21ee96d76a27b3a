"""Greedy K2 parent selection under a fixed node order."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .metric import PriorSpec, family_log_score, uniform_log_structure_prior
from .model import Dag, Database, tabulate_counts

IMPROVEMENT_TOL = 1e-12


@dataclass(frozen=True)
class SearchConfig:
    order: tuple[int, ...]
    max_parents: int
    prior: PriorSpec = field(default_factory=PriorSpec)

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError(f"order {self.order} is not a permutation")
        if self.max_parents < 0:
            raise ValueError("max_parents must be nonnegative")


@dataclass(frozen=True)
class SearchResult:
    dag: Dag
    family_scores: tuple[float, ...]

    @property
    def log_score(self) -> float:
        return math.fsum(self.family_scores)


def k2_search(db: Database, config: SearchConfig) -> SearchResult:
    """Run K2 and return the structure with each variable's family score.

    A candidate is added only if it beats the current family score by more
    than ``IMPROVEMENT_TOL``; ties go to the candidate earliest in the order.
    """
    if len(config.order) != db.n:
        raise ValueError("order length does not match the number of variables")
    parents = [frozenset() for _ in range(db.n)]
    scores = [0.0] * db.n
    for pos, node in enumerate(config.order):
        current = set()
        best = family_log_score(tabulate_counts(db, node, current), config.prior)
        candidates = list(config.order[:pos])
        while len(current) < config.max_parents:
            pick, pick_score = None, best
            for cand in candidates:
                if cand in current:
                    continue
                s = family_log_score(tabulate_counts(db, node, current | {cand}), config.prior)
                if s > pick_score + IMPROVEMENT_TOL and (pick is None or s > pick_score):
                    pick, pick_score = cand, s
            if pick is None:
                break
            current.add(pick)
            best = pick_score
        parents[node] = frozenset(current)
        scores[node] = best
    return SearchResult(Dag(tuple(parents)), tuple(scores))


def k2_random_restarts(db: Database, max_parents: int, prior: PriorSpec,
                       restarts: int, seed: int | None = None) -> tuple[SearchResult, tuple[int, ...]]:
    """Run K2 on ``restarts`` random orders; keep the highest-scoring result.

    Structures share a uniform prior, so comparing data likelihoods is the
    same as comparing joint scores. Returns the result and the order that
    produced it; earlier restarts win ties.
    """
    rng = np.random.default_rng(seed)
    best, best_order = None, None
    for _ in range(restarts):
        order = tuple(int(i) for i in rng.permutation(db.n))
        result = k2_search(db, SearchConfig(order, max_parents, prior))
        if best is None or result.log_score > best.log_score:
            best, best_order = result, order
    return best, best_order


def parse_order(text: str | None, names: Sequence[str]) -> tuple[int, ...]:
    """Comma-separated variable names; ``None`` means column order."""
    if text is None:
        return tuple(range(len(names)))
    wanted = [t.strip() for t in text.split(",") if t.strip()]
    missing = [w for w in wanted if w not in names]
    if missing:
        raise ValueError(f"unknown variable(s) in order: {missing}")
    return tuple(list(names).index(w) for w in wanted)


def joint_score_uniform(result: SearchResult, n: int) -> float:
    """log P(B_S, D) of a search result under a uniform prior over all n-node DAGs."""
    return result.log_score + uniform_log_structure_prior(n)

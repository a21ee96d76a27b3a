"""Exhaustive DAG enumeration and exact posterior normalization."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import EnumerationLimitError, StructureError
from .metric import PriorSpec, structure_log_score
from .model import Dag, Database, format_structure

DEFAULT_MAX_NODES = 5


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def enumerate_dags(n: int, max_nodes: int = DEFAULT_MAX_NODES) -> Iterator[Dag]:
    """Yield every labeled DAG on ``n`` nodes exactly once.

    Each node pair (a, b) with a < b is absent (0), a->b (1) or b->a (2);
    structures come out in lexicographic order of that state vector, with
    cyclic orientations skipped.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n > max_nodes:
        raise EnumerationLimitError(
            f"refusing to enumerate DAGs on {n} nodes (cap is {max_nodes}); "
            "the number of structures grows super-exponentially")
    pairs = _pairs(n)
    for states in itertools.product(range(3), repeat=len(pairs)):
        edges = [(a, b) if s == 1 else (b, a) for (a, b), s in zip(pairs, states) if s]
        try:
            yield Dag.from_edges(n, edges)
        except StructureError:
            continue


def logsumexp(values: Sequence[float]) -> float:
    """log(sum(exp(v))) with max subtraction, summed in the given order."""
    values = list(values)
    if not values:
        return -math.inf
    top = max(values)
    if math.isinf(top):
        return top
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


@dataclass(frozen=True)
class PosteriorEntry:
    dag: Dag
    log_joint: float
    posterior: float


@dataclass(frozen=True)
class PosteriorTable:
    entries: tuple[PosteriorEntry, ...]
    log_evidence: float

    def posterior_of(self, dag: Dag) -> float:
        for e in self.entries:
            if e.dag == dag:
                return e.posterior
        raise KeyError(dag)

    def entry(self, dag: Dag) -> PosteriorEntry:
        for e in self.entries:
            if e.dag == dag:
                return e
        raise KeyError(dag)

    def to_tsv(self, names: Sequence[str]) -> str:
        """Rows sorted by posterior (descending) then structure text."""
        rows = sorted(((format_structure(e.dag, names), e) for e in self.entries),
                      key=lambda t: (-t[1].posterior, t[0]))
        lines = ["structure\tlog_joint\tposterior"]
        lines += [f"{text}\t{e.log_joint:.6f}\t{e.posterior:.4f}" for text, e in rows]
        return "\n".join(lines) + "\n"


def posterior_over_structures(db: Database, prior: PriorSpec,
                              max_nodes: int = DEFAULT_MAX_NODES) -> PosteriorTable:
    """Score every DAG over the database variables under a uniform structure prior."""
    dags = list(enumerate_dags(db.n, max_nodes))
    log_structure_prior = -math.log(len(dags))
    log_joints = [structure_log_score(d, db, prior).log_score + log_structure_prior for d in dags]
    log_evidence = logsumexp(log_joints)
    entries = tuple(PosteriorEntry(d, lj, math.exp(lj - log_evidence))
                    for d, lj in zip(dags, log_joints))
    return PosteriorTable(entries, log_evidence)


def skeleton(dag: Dag) -> frozenset[frozenset[int]]:
    return frozenset(frozenset(e) for e in dag.edges())


def v_structures(dag: Dag) -> frozenset[tuple[int, int, int]]:
    """Colliders a -> c <- b whose parents a < b are not adjacent."""
    adjacent = skeleton(dag)
    found = set()
    for c, ps in enumerate(dag.parents):
        for a, b in itertools.combinations(sorted(ps), 2):
            if frozenset((a, b)) not in adjacent:
                found.add((a, c, b))
    return frozenset(found)


def markov_equivalent(a: Dag, b: Dag) -> bool:
    if a.n != b.n:
        raise ValueError("structures have different numbers of nodes")
    return skeleton(a) == skeleton(b) and v_structures(a) == v_structures(b)

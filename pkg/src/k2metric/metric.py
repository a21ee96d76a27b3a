"""K2, extended K2 (Dirichlet) and generalized K2 (Gamma) structure scores.

Every score is the natural log of the data likelihood P(D | B_S); the
structure prior is added separately by :func:`joint_log_score`. All three
metrics are evaluated through the Gamma form, which reduces to the
factorial forms when the pseudo-counts are nonnegative integers.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .errors import DataFormatError, PriorDomainError
from .gamma import log_gamma_array
from .model import CountTable, Dag, Database, tabulate_counts


class PriorKind(Enum):
    UNIFORM = "uniform"
    DIRICHLET = "dirichlet"
    ALPHA = "alpha"


def noninformative_pseudocounts(alpha: float, q: int, r: int) -> tuple[float, float]:
    """Pseudo-counts (N'_ijk, N'_ij) that make equivalent structures score equally."""
    if not alpha > 0:
        raise PriorDomainError(f"alpha must be positive, got {alpha!r}")
    if q < 1 or r < 1:
        raise PriorDomainError("q and r must be positive integers")
    return alpha / (q * r) - 1.0, alpha / q - r


@dataclass(frozen=True)
class PriorSpec:
    """Parameter prior used for every family of a structure.

    ``pseudo_counts`` maps ``(variable_index, frozenset(parent_indices))`` to
    a q x r matrix of N'_ijk. Families missing from the mapping get N' = 0.
    """

    kind: PriorKind = PriorKind.UNIFORM
    alpha: float | None = None
    pseudo_counts: Mapping[tuple[int, frozenset], np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind is PriorKind.ALPHA:
            if self.alpha is None or not self.alpha > 0 or math.isinf(self.alpha):
                raise PriorDomainError(f"alpha must be a positive finite real, got {self.alpha!r}")
        if self.kind is PriorKind.DIRICHLET:
            frozen = {}
            for (i, parents), matrix in self.pseudo_counts.items():
                matrix = np.array(matrix, dtype=np.float64)
                if matrix.ndim != 2:
                    raise PriorDomainError(f"pseudo-counts for variable {i} must be a matrix")
                if not np.all(matrix > -1.0):
                    raise PriorDomainError(
                        f"pseudo-counts for variable {i} must all exceed -1")
                matrix.setflags(write=False)
                frozen[(int(i), frozenset(parents))] = matrix
            object.__setattr__(self, "pseudo_counts", frozen)

    @classmethod
    def uniform(cls) -> "PriorSpec":
        return cls()

    @classmethod
    def noninformative(cls, alpha: float) -> "PriorSpec":
        return cls(PriorKind.ALPHA, alpha=float(alpha))

    @classmethod
    def dirichlet(cls, pseudo_counts) -> "PriorSpec":
        return cls(PriorKind.DIRICHLET, pseudo_counts=pseudo_counts)

    def family_pseudocounts(self, i: int, parents, q: int, r: int) -> np.ndarray:
        """q x r matrix of N'_ijk for variable ``i`` with the given parents."""
        if self.kind is PriorKind.UNIFORM:
            return np.zeros((q, r))
        if self.kind is PriorKind.ALPHA:
            return np.full((q, r), noninformative_pseudocounts(self.alpha, q, r)[0])
        matrix = self.pseudo_counts.get((i, frozenset(parents)))
        if matrix is None:
            return np.zeros((q, r))
        if matrix.shape != (q, r):
            raise PriorDomainError(
                f"pseudo-count matrix for variable {i} has shape {matrix.shape}, expected {(q, r)}")
        return matrix

    def describe(self) -> str:
        if self.kind is PriorKind.ALPHA:
            return f"alpha={self.alpha:g}"
        return self.kind.value


def parse_prior(text: str, db: Database | None = None) -> PriorSpec:
    """Parse ``uniform``, ``alpha=<x>`` or ``dirichlet=<path>``.

    A Dirichlet file needs the database to resolve variable names.
    """
    text = text.strip()
    if text == "uniform":
        return PriorSpec.uniform()
    key, sep, value = text.partition("=")
    if sep and key == "alpha":
        try:
            alpha = float(value)
        except ValueError:
            raise PriorDomainError(f"invalid alpha {value!r}") from None
        return PriorSpec.noninformative(alpha)
    if sep and key == "dirichlet":
        if db is None:
            raise PriorDomainError("a dirichlet prior needs a database to resolve names")
        with open(value, encoding="utf-8") as fh:
            return load_dirichlet(fh.read(), db)
    raise PriorDomainError(f"unrecognised prior {text!r}; use uniform, alpha=<x> or dirichlet=<path>")


def load_dirichlet(text: str, db: Database) -> PriorSpec:
    """Read pseudo-count matrices from JSON.

    Format::

        {"families": [{"variable": "x2", "parents": ["x1"],
                       "pseudo_counts": [[...], ...]}, ...]}

    Rows follow the canonical parent instantiation order of
    :func:`~k2metric.model.tabulate_counts`; columns follow the child domain.
    """
    try:
        doc = json.loads(text)
        families = doc["families"]
        table = {}
        for fam in families:
            i = db.index(fam["variable"])
            parents = frozenset(db.index(p) for p in fam.get("parents", []))
            q = int(np.prod([db.variables[p].cardinality for p in parents])) if parents else 1
            matrix = np.array(fam["pseudo_counts"], dtype=np.float64)
            if matrix.shape != (q, db.variables[i].cardinality):
                raise DataFormatError(
                    f"pseudo-counts for {fam['variable']!r} have shape {matrix.shape}, "
                    f"expected {(q, db.variables[i].cardinality)}")
            if (i, parents) in table:
                raise DataFormatError(f"family for {fam['variable']!r} listed twice")
            table[(i, parents)] = matrix
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (DataFormatError, PriorDomainError)):
            raise
        raise DataFormatError(f"malformed dirichlet prior file: {exc}") from None
    return PriorSpec.dirichlet(table)


def family_log_score(counts: CountTable, prior: PriorSpec) -> float:
    """Log contribution of one family to the generalized K2 metric."""
    n = counts.counts.astype(np.float64)
    n_prime = prior.family_pseudocounts(counts.variable_index, counts.parent_indices,
                                        counts.q, counts.r)
    r = counts.r
    n_prime_row = n_prime.sum(axis=1)
    row = n.sum(axis=1)
    row_term = log_gamma_array(n_prime_row + r) - log_gamma_array(row + n_prime_row + r)
    cell_term = log_gamma_array(n + n_prime + 1.0) - log_gamma_array(n_prime + 1.0)
    return float(row_term.sum() + cell_term.sum())


@dataclass(frozen=True)
class ScoreResult:
    log_score: float
    per_family: tuple[float, ...]


def structure_log_score(dag: Dag, db: Database, prior: PriorSpec) -> ScoreResult:
    """log P(D | B_S): the sum of family scores over every variable."""
    if dag.n != db.n:
        raise ValueError(f"structure has {dag.n} nodes but database has {db.n} variables")
    per_family = tuple(family_log_score(tabulate_counts(db, i, ps), prior)
                       for i, ps in enumerate(dag.parents))
    return ScoreResult(math.fsum(per_family), per_family)


def joint_log_score(dag: Dag, db: Database, prior: PriorSpec, log_structure_prior: float) -> float:
    """log P(B_S, D) given the log of the structure prior P(B_S)."""
    if log_structure_prior > 0:
        raise ValueError("log_structure_prior must be <= 0")
    return structure_log_score(dag, db, prior).log_score + log_structure_prior


def count_dags(n: int) -> int:
    """Number of labeled DAGs on ``n`` nodes (Robinson's recurrence)."""
    a = [1]
    for k in range(1, n + 1):
        a.append(sum((-1) ** (s + 1) * math.comb(k, s) * 2 ** (s * (k - s)) * a[k - s]
                     for s in range(1, k + 1)))
    return a[n]


def uniform_log_structure_prior(n: int) -> float:
    """log(1 / number of DAGs on n nodes)."""
    return -math.log(count_dags(n))

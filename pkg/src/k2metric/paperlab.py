"""The two-variable database family x2 = |x1| and the published experiments on it.

Values run over x1 in {-w..w} and x2 in {0..w}. The count vector is
``(a_0, a_1+, a_1-, ..., a_w+, a_w-)``: ``a_v+`` copies of (v, v) and
``a_v-`` copies of (-v, v).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np

from .metric import PriorSpec
from .model import Dag, Database, Variable
from .posterior import posterior_over_structures

# The three structures over (x1, x2), in the published column order.
B_S1 = Dag((frozenset(), frozenset({0})))   # x1 -> x2
B_S2 = Dag((frozenset({1}), frozenset()))   # x2 -> x1
B_S3 = Dag.empty(2)
STRUCTURES = (B_S1, B_S2, B_S3)

TABLE3_OMEGAS = (1, 2, 4, 8, 16)
TABLE3_SCALES = (1, 10, 100)
TABLE4_ALPHAS = (45.0, 15.0)

# Limit of P(B_S2 | D) for omega = 4 as every count grows without bound.
LIMIT_OMEGA4 = 9845600625 / 10114036081


def round_half_up(x: float, places: int = 4) -> str:
    q = Decimal(1).scaleb(-places)
    return str(Decimal(x).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class PaperFamilySpec:
    omega: int
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if self.omega < 1:
            raise ValueError("omega must be a positive integer")
        if len(self.counts) != 2 * self.omega + 1:
            raise ValueError(f"expected {2 * self.omega + 1} counts for omega={self.omega}, "
                             f"got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @classmethod
    def scaled(cls, omega: int, scale: int) -> "PaperFamilySpec":
        """``scale`` copies of every value pair (A_scale)."""
        return cls(omega, (scale,) * (2 * omega + 1))

    @property
    def m(self) -> int:
        return sum(self.counts)


def paper_variables(omega: int) -> tuple[Variable, Variable]:
    return (Variable("x1", tuple(str(v) for v in range(-omega, omega + 1))),
            Variable("x2", tuple(str(v) for v in range(omega + 1))))


def generate_paper_db(spec: PaperFamilySpec) -> Database:
    w = spec.omega
    x1 = [0]
    x2 = [0]
    for v in range(1, w + 1):
        x1 += [v, -v]
        x2 += [v, v]
    reps = np.asarray(spec.counts, dtype=np.int64)
    # domain index of x1 = value + omega, of x2 = value
    codes = np.column_stack([np.repeat(np.asarray(x1) + w, reps), np.repeat(np.asarray(x2), reps)])
    return Database(paper_variables(w), codes)


def structure_posteriors(db: Database, prior: PriorSpec) -> tuple[float, float, float]:
    """(P(B_S1|D), P(B_S2|D), P(B_S3|D)) under equal structure priors."""
    table = posterior_over_structures(db, prior)
    return tuple(table.posterior_of(d) for d in STRUCTURES)


@dataclass(frozen=True)
class Section31Report:
    log_joints: tuple[float, float, float]
    log_evidence: float
    posteriors: tuple[float, float, float]

    @property
    def joints(self) -> tuple[float, ...]:
        return tuple(math.exp(v) for v in self.log_joints)

    @property
    def evidence(self) -> float:
        return math.exp(self.log_evidence)

    def to_tsv(self) -> str:
        lines = ["structure\tjoint\tposterior"]
        for label, j, p in zip(("x1->x2", "x2->x1", "(none)"), self.joints, self.posteriors):
            lines.append(f"{label}\t{j:.3e}\t{round_half_up(p)}")
        lines.append(f"P(D)\t{self.evidence:.3e}\t")
        lines.append(f"ratio B_S2/B_S1\t{self.joints[1] / self.joints[0]:.4f}\t")
        return "\n".join(lines) + "\n"


def reproduce_section31(db: Database | None = None) -> Section31Report:
    """Joints, evidence and posteriors for the nine-case database under the K2 metric."""
    if db is None:
        db = generate_paper_db(PaperFamilySpec.scaled(4, 1))
    table = posterior_over_structures(db, PriorSpec.uniform())
    entries = [table.entry(d) for d in STRUCTURES]
    return Section31Report(tuple(e.log_joint for e in entries), table.log_evidence,
                           tuple(e.posterior for e in entries))


@dataclass(frozen=True)
class GridRow:
    label: str
    omega: int
    param: float
    posteriors: tuple[float, float, float]


def grid_to_tsv(rows: Sequence[GridRow], param_name: str) -> str:
    lines = [f"omega\t{param_name}\tP(B_S1|D)\tP(B_S2|D)\tP(B_S3|D)"]
    for row in rows:
        cells = "\t".join(round_half_up(p) for p in row.posteriors)
        lines.append(f"{row.omega}\t{row.label}\t{cells}")
    return "\n".join(lines) + "\n"


def reproduce_table3(omegas: Sequence[int] = TABLE3_OMEGAS,
                     scales: Sequence[int] = TABLE3_SCALES) -> list[GridRow]:
    rows = []
    for w in omegas:
        for s in scales:
            db = generate_paper_db(PaperFamilySpec.scaled(w, s))
            rows.append(GridRow(f"A_{s}", w, s, structure_posteriors(db, PriorSpec.uniform())))
    return rows


def reproduce_table4(alphas: Sequence[float] = TABLE4_ALPHAS, omega: int = 4) -> list[GridRow]:
    db = generate_paper_db(PaperFamilySpec.scaled(omega, 1))
    return [GridRow(f"{a:g}", omega, a, structure_posteriors(db, PriorSpec.noninformative(a)))
            for a in alphas]


def convergence_study(omega: int, scales: Sequence[int]) -> list[float]:
    """P(B_S2 | D) for A_scale, scale by scale."""
    if any(b <= a for a, b in zip(scales, scales[1:])):
        raise ValueError("scales must be strictly increasing")
    return [structure_posteriors(generate_paper_db(PaperFamilySpec.scaled(omega, s)),
                                 PriorSpec.uniform())[1]
            for s in scales]

"""Variables, databases, structures and the counting that every metric uses.

A :class:`Database` stores each cell as the integer index of its label in
the owning variable's domain, so the count tables can be produced with a
single :func:`numpy.bincount` per family.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import DataFormatError, MissingValueError, StructureError


@dataclass(frozen=True)
class Variable:
    """A categorical variable with an ordered domain of value labels."""

    name: str
    domain: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.domain:
            raise DataFormatError(f"variable {self.name!r} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise DataFormatError(f"variable {self.name!r} has duplicate domain labels")

    @property
    def cardinality(self) -> int:
        return len(self.domain)

    def index_of(self, label: str) -> int:
        try:
            return self.domain.index(label)
        except ValueError:
            raise DataFormatError(
                f"label {label!r} is not in the domain of {self.name!r}") from None


class Database:
    """An m x n table of categorical cases.

    ``codes[c, i]`` is the domain index of the value variable ``i`` takes
    in case ``c``. The array is read-only.
    """

    def __init__(self, variables: Sequence[Variable], codes=None):
        self.variables = tuple(variables)
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise DataFormatError("duplicate variable names")
        n = len(self.variables)
        if codes is None:
            codes = np.zeros((0, n), dtype=np.int64)
        codes = np.array(codes, dtype=np.int64, copy=True)
        if codes.ndim != 2 or codes.shape[1] != n:
            if codes.size == 0:
                codes = codes.reshape(0, n)
            else:
                raise DataFormatError(f"expected {n} columns, got array of shape {codes.shape}")
        for i, var in enumerate(self.variables):
            col = codes[:, i]
            if col.size and (col.min() < 0 or col.max() >= var.cardinality):
                raise DataFormatError(f"code out of range for variable {var.name!r}")
        codes.setflags(write=False)
        self.codes = codes

    @classmethod
    def from_rows(cls, variables: Sequence[Variable], rows: Iterable[Sequence[str]]) -> "Database":
        variables = tuple(variables)
        codes = []
        for row in rows:
            if len(row) != len(variables):
                raise DataFormatError(f"row has {len(row)} entries, expected {len(variables)}")
            codes.append([v.index_of(label) for v, label in zip(variables, row)])
        return cls(variables, np.array(codes, dtype=np.int64).reshape(len(codes), len(variables)))

    @property
    def m(self) -> int:
        return self.codes.shape[0]

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def cardinalities(self) -> list[int]:
        return [v.cardinality for v in self.variables]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructureError(f"unknown variable {name!r}") from None

    def rows(self) -> list[tuple[str, ...]]:
        return [tuple(v.domain[c] for v, c in zip(self.variables, row)) for row in self.codes]

    def take(self, order) -> "Database":
        """Database holding the cases at positions ``order`` (e.g. a permutation)."""
        return Database(self.variables, self.codes[np.asarray(order, dtype=np.int64)])

    def relabel(self, i: int, mapping: dict) -> "Database":
        """Rename the labels of variable ``i`` through an injective ``mapping``."""
        old = self.variables[i]
        new_domain = tuple(str(mapping[label]) for label in old.domain)
        variables = list(self.variables)
        variables[i] = Variable(old.name, new_domain)
        return Database(variables, self.codes)

    def to_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.names)
        writer.writerows(self.rows())

    def domains_text(self) -> str:
        return "".join(f"{v.name}: {','.join(v.domain)}\n" for v in self.variables)

    def __eq__(self, other):
        if not isinstance(other, Database):
            return NotImplemented
        return self.variables == other.variables and np.array_equal(self.codes, other.codes)

    def __repr__(self):
        return f"Database(n={self.n}, m={self.m}, r={self.cardinalities})"


def parse_domains(text: str) -> dict[str, tuple[str, ...]]:
    """Parse ``name: label1,label2,...`` lines. Blank lines and ``#`` comments are skipped."""
    domains = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, labels = line.partition(":")
        name = name.strip()
        if not sep or not name:
            raise DataFormatError(f"domain line {lineno}: expected 'name: label1,label2,...'")
        values = tuple(label.strip() for label in labels.split(","))
        if any(not v for v in values):
            raise DataFormatError(f"domain line {lineno}: empty label")
        if name in domains:
            raise DataFormatError(f"domain line {lineno}: {name!r} declared twice")
        domains[name] = values
    return domains


def load_database(source, domains: dict[str, Sequence[str]] | None = None) -> Database:
    """Read a database from CSV text or a text stream.

    Domains are the sorted distinct labels of each column unless ``domains``
    declares them explicitly, in which case the declared order is kept.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("missing header row") from None
    header = [h.strip() for h in header]
    if not header or any(not h for h in header):
        raise DataFormatError("header contains an empty variable name")
    if len(set(header)) != len(header):
        raise DataFormatError("duplicate variable names in header")
    domains = dict(domains or {})
    unknown = set(domains) - set(header)
    if unknown:
        raise DataFormatError(f"domain declared for unknown variable(s): {sorted(unknown)}")

    rows = []
    for lineno, row in enumerate(reader, 2):
        if not row:
            continue
        if len(row) != len(header):
            raise DataFormatError(f"line {lineno}: {len(row)} fields, expected {len(header)}")
        row = [cell.strip() for cell in row]
        for name, cell in zip(header, row):
            if not cell:
                raise MissingValueError(f"line {lineno}: missing value for {name!r}")
        rows.append(row)

    variables = []
    for i, name in enumerate(header):
        if name in domains:
            domain = tuple(domains[name])
        else:
            domain = tuple(sorted({row[i] for row in rows}))
            if not domain:
                raise DataFormatError(f"no values observed for {name!r} and no domain declared")
        variables.append(Variable(name, domain))
    return Database.from_rows(variables, rows)


@dataclass(frozen=True)
class Dag:
    """A directed acyclic graph given by one parent set per node."""

    parents: tuple[frozenset[int], ...]

    def __post_init__(self):
        parents = tuple(frozenset(int(p) for p in ps) for ps in self.parents)
        object.__setattr__(self, "parents", parents)
        n = len(parents)
        for i, ps in enumerate(parents):
            if i in ps:
                raise StructureError(f"node {i} is its own parent")
            if any(p < 0 or p >= n for p in ps):
                raise StructureError(f"parent index out of range for node {i}")
        try:
            tuple(TopologicalSorter({i: ps for i, ps in enumerate(parents)}).static_order())
        except CycleError as exc:
            raise StructureError(f"directed cycle through nodes {exc.args[1]}") from None

    @classmethod
    def empty(cls, n: int) -> "Dag":
        return cls(tuple(frozenset() for _ in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Dag":
        parents = [set() for _ in range(n)]
        for a, b in edges:
            parents[b].add(a)
        return cls(tuple(frozenset(p) for p in parents))

    @property
    def n(self) -> int:
        return len(self.parents)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((p, c) for c, ps in enumerate(self.parents) for p in ps)

    def topological_order(self) -> list[int]:
        return list(TopologicalSorter({i: ps for i, ps in enumerate(self.parents)}).static_order())


def parse_structure(text: str, names: Sequence[str]) -> Dag:
    """Parse ``parent->child`` edges separated by semicolons.

    ``names`` may be variable names or :class:`Variable` objects. The empty
    string is the structure without edges.
    """
    names = [getattr(v, "name", v) for v in names]
    index = {name: i for i, name in enumerate(names)}
    edges = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        parent, arrow, child = part.partition("->")
        parent, child = parent.strip(), child.strip()
        if not arrow or not parent or not child:
            raise StructureError(f"malformed edge {part!r}, expected 'parent->child'")
        for name in (parent, child):
            if name not in index:
                raise StructureError(f"unknown variable {name!r}")
        edge = (index[parent], index[child])
        if edge in edges:
            raise StructureError(f"duplicate edge {part!r}")
        edges.append(edge)
    return Dag.from_edges(len(names), edges)


def format_structure(dag: Dag, names: Sequence[str]) -> str:
    names = [getattr(v, "name", v) for v in names]
    return ";".join(f"{names[p]}->{names[c]}" for p, c in dag.edges())


@dataclass(frozen=True, eq=False)
class CountTable:
    """Sufficient statistics ``N_ijk`` for one (variable, parent set) family.

    Row ``j`` follows the mixed-radix enumeration of parent values with
    parents sorted by index and the last parent varying fastest. Every one
    of the ``q`` combinations has a row, observed or not.
    """

    variable_index: int
    parent_indices: tuple[int, ...]
    parent_cardinalities: tuple[int, ...]
    counts: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.counts.shape[0]

    @property
    def r(self) -> int:
        return self.counts.shape[1]

    @property
    def row_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def m(self) -> int:
        return int(self.counts.sum())

    def instantiation(self, j: int) -> tuple[int, ...]:
        """Parent domain indices making up instantiation ``j``."""
        return tuple(int(x) for x in np.unravel_index(j, self.parent_cardinalities)) \
            if self.parent_cardinalities else ()

    def instantiation_labels(self, variables: Sequence[Variable]) -> list[tuple[str, ...]]:
        domains = [variables[p].domain for p in self.parent_indices]
        return list(itertools.product(*domains))


def tabulate_counts(db: Database, i: int, parents: Iterable[int]) -> CountTable:
    parents = tuple(sorted(set(parents)))
    if i in parents:
        raise StructureError(f"variable {i} cannot be its own parent")
    cards = tuple(db.variables[p].cardinality for p in parents)
    q = int(np.prod(cards, dtype=np.int64)) if parents else 1
    r = db.variables[i].cardinality
    if parents:
        j = np.ravel_multi_index(tuple(db.codes[:, p] for p in parents), cards)
    else:
        j = np.zeros(db.m, dtype=np.int64)
    flat = np.bincount(j * r + db.codes[:, i], minlength=q * r)
    counts = flat.reshape(q, r)
    counts.setflags(write=False)
    return CountTable(i, parents, cards, counts)

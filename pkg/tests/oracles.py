"""Slow independent references used only by the tests."""
import itertools
import math
from fractions import Fraction


def theorem1_family(counts):
    """Exact K2 family factor prod_j (r-1)!/(N_ij+r-1)! prod_k N_ijk!."""
    value = Fraction(1)
    for row in counts:
        r = len(row)
        value *= Fraction(math.factorial(r - 1), math.factorial(sum(row) + r - 1))
        for n in row:
            value *= math.factorial(n)
    return value


def corollary1_family(counts, pseudo):
    """Exact Dirichlet family factor with nonnegative integer pseudo-counts."""
    value = Fraction(1)
    for row, prow in zip(counts, pseudo):
        r = len(row)
        n_ij, np_ij = sum(row), sum(prow)
        value *= Fraction(math.factorial(np_ij + r - 1), math.factorial(n_ij + np_ij + r - 1))
        for n, p in zip(row, prow):
            value *= Fraction(math.factorial(n + p), math.factorial(p))
    return value


def log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def _acyclic(n, edges):
    remaining = set(range(n))
    edges = set(edges)
    while remaining:
        sources = [v for v in remaining if not any(b == v and a in remaining for a, b in edges)]
        if not sources:
            return False
        remaining -= set(sources)
    return True


def brute_force_dag_edge_sets(n):
    """All acyclic subsets of the n(n-1) ordered pairs, as frozensets of edges."""
    ordered = [(a, b) for a in range(n) for b in range(n) if a != b]
    found = []
    for mask in range(1 << len(ordered)):
        edges = [e for k, e in enumerate(ordered) if mask >> k & 1]
        es = set(edges)
        if any((b, a) in es for a, b in edges):
            continue
        if _acyclic(n, edges):
            found.append(frozenset(edges))
    return found

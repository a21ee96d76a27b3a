"""Exit criteria for the package, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary (see
``conftest.py``). Run alone with ``pytest tests/test_acceptance.py``.
"""
import itertools
import math
import time

import numpy as np
import pytest
from oracles import brute_force_dag_edge_sets, corollary1_family, log_fraction, theorem1_family

from k2metric import (Database, PriorSpec, SearchConfig, Variable, enumerate_dags,
                      family_log_score, k2_search, load_database, markov_equivalent,
                      parse_structure, posterior_over_structures, structure_log_score)
from k2metric.metric import CountTable
from k2metric.paperlab import (B_S1, B_S2, B_S3, LIMIT_OMEGA4, PaperFamilySpec,
                               generate_paper_db, reproduce_table3, reproduce_table4,
                               round_half_up, structure_posteriors)

TABLE3 = {
    (1, 1): ("0.3600", "0.4000", "0.2400"),
    (1, 10): ("0.4172", "0.5828", "0.0000"),
    (1, 100): ("0.4020", "0.5980", "0.0000"),
    (2, 1): ("0.3729", "0.4833", "0.1438"),
    (2, 10): ("0.2745", "0.7255", "0.0000"),
    (2, 100): ("0.2276", "0.7724", "0.0000"),
    (4, 1): ("0.3425", "0.6163", "0.0413"),
    (4, 10): ("0.0727", "0.9273", "0.0000"),
    (4, 100): ("0.0305", "0.9695", "0.0000"),
    (8, 1): ("0.2205", "0.7771", "0.0024"),
    (8, 10): ("0.0023", "0.9977", "0.0000"),
    (8, 100): ("0.0001", "0.9999", "0.0000"),
    (16, 1): ("0.0682", "0.9318", "0.0000"),
    (16, 10): ("0.0000", "1.0000", "0.0000"),
}


def _rounds_to(value: float, printed: str) -> bool:
    """True when ``value`` shown with as many significant digits as ``printed`` equals it."""
    digits = len(printed.split("e")[0].replace(".", "")) - 1
    return f"{value:.{digits}e}" == printed


def test_ac1_section31_reproduction(table1_path):
    """AC1: nine-case joints, P(D) and posteriors, under 1 s"""
    start = time.perf_counter()
    db = load_database(table1_path.read_text())
    table = posterior_over_structures(db, PriorSpec.uniform())
    elapsed = time.perf_counter() - start
    joints = [math.exp(table.entry(d).log_joint) for d in (B_S1, B_S2, B_S3)]
    for value, printed in zip(joints, ["1.935e-17", "3.481e-17", "2.330e-18"]):
        assert _rounds_to(value, printed), (value, printed)
    assert _rounds_to(math.exp(table.log_evidence), "5.649e-17")
    posteriors = [round_half_up(table.posterior_of(d)) for d in (B_S1, B_S2, B_S3)]
    assert posteriors == ["0.3425", "0.6163", "0.0413"]
    assert elapsed < 1.0


def test_ac2_table3_reproduction():
    """AC2: all 14 published Table 3 cells (15-row grid) to 4 decimals, under 5 s"""
    start = time.perf_counter()
    rows = reproduce_table3()
    elapsed = time.perf_counter() - start
    assert len(rows) == 15
    checked = 0
    for row in rows:
        key = (row.omega, row.param)
        if key in TABLE3:
            assert tuple(round_half_up(p) for p in row.posteriors) == TABLE3[key], key
            checked += 1
    assert checked == len(TABLE3)
    assert elapsed < 5.0


def test_ac3_scaling_to_the_limit():
    """AC3: omega=4 scaling sequence and the scale-1e5 limit check"""
    expected = {10: ("0.0727", "0.9273"), 100: ("0.0305", "0.9695"), 1000: ("0.0269", "0.9731")}
    seq = []
    for scale in (1, 10, 100, 1000, 100000):
        p1, p2, _ = structure_posteriors(generate_paper_db(PaperFamilySpec.scaled(4, scale)),
                                         PriorSpec.uniform())
        if scale in expected:
            assert (round_half_up(p1), round_half_up(p2)) == expected[scale]
        seq.append(p2)
    assert all(b > a for a, b in zip(seq, seq[1:]))
    assert abs(seq[-1] - 9845600625 / 10114036081) <= 5e-4
    assert LIMIT_OMEGA4 == 9845600625 / 10114036081


def test_ac4_table4_reproduction():
    """AC4: alpha=45 and alpha=15 rows; reversed-arc log scores equal to 1e-9"""
    rows = reproduce_table4([45, 15])
    assert [round_half_up(p) for p in rows[0].posteriors] == ["0.3680", "0.3680", "0.2639"]
    assert [round_half_up(p) for p in rows[1].posteriors] == ["0.4150", "0.4150", "0.1700"]
    db = generate_paper_db(PaperFamilySpec.scaled(4, 1))
    for alpha in (45, 15):
        prior = PriorSpec.noninformative(alpha)
        a = structure_log_score(B_S1, db, prior).log_score
        b = structure_log_score(B_S2, db, prior).log_score
        assert abs(a - b) <= 1e-9


def test_ac5_reduction_to_factorial_forms():
    """AC5: Gamma form vs exact-rational K2 and Dirichlet oracles on 200 tables each"""
    rng = np.random.default_rng(20240601)
    for _ in range(200):
        q, r = (int(x) for x in rng.integers(1, 5, size=2))
        counts = rng.integers(0, 11, size=(q, r))
        parents = (1,) if q > 1 else ()
        ct = CountTable(0, parents, (q,) if parents else (), counts)

        expected = log_fraction(theorem1_family(counts.tolist()))
        got = family_log_score(ct, PriorSpec.uniform())
        assert got == pytest.approx(expected, rel=1e-9, abs=1e-12)

        pseudo = rng.integers(0, 6, size=(q, r))
        expected = log_fraction(corollary1_family(counts.tolist(), pseudo.tolist()))
        got = family_log_score(ct, PriorSpec.dirichlet({(0, frozenset(parents)): pseudo}))
        assert got == pytest.approx(expected, rel=1e-9, abs=1e-12)


def _random_three_var_db(rng):
    cards = rng.integers(1, 4, size=3)
    m = int(rng.integers(0, 31))
    codes = np.column_stack([rng.integers(0, c, size=m) for c in cards]).reshape(m, 3)
    return Database([Variable(f"v{i}", tuple(str(k) for k in range(c)))
                     for i, c in enumerate(cards)], codes)


def test_ac6_equivalent_structures_score_equally():
    """AC6: Markov-equivalent pairs agree to 1e-9 on 100 random databases; test has power"""
    rng = np.random.default_rng(7)
    dags = list(enumerate_dags(3))
    pairs = list(itertools.combinations(range(len(dags)), 2))
    equivalent = {p: markov_equivalent(dags[p[0]], dags[p[1]]) for p in pairs}
    assert any(equivalent.values()) and not all(equivalent.values())
    max_gap_nonequivalent = 0.0
    for _ in range(100):
        db = _random_three_var_db(rng)
        for alpha in (1.0, 5.0, 27.0):
            prior = PriorSpec.noninformative(alpha)
            scores = [structure_log_score(d, db, prior).log_score for d in dags]
            for (i, j), eq in equivalent.items():
                gap = abs(scores[i] - scores[j])
                if eq:
                    assert gap <= 1e-9, (i, j, gap)
                else:
                    max_gap_nonequivalent = max(max_gap_nonequivalent, gap)
    assert max_gap_nonequivalent > 1e-6


def test_ac7_enumeration_counts():
    """AC7: DAG counts 1, 3, 25, 543 agree with the brute-force oracle"""
    for n, count in zip(range(1, 5), (1, 3, 25, 543)):
        ours = [frozenset(d.edges()) for d in enumerate_dags(n)]
        oracle = brute_force_dag_edge_sets(n)
        assert len(ours) == len(set(ours)) == len(oracle) == count
        assert set(ours) == set(oracle)


def test_ac8_k2_search(table1_path):
    """AC8: K2 follows the order on the nine-case data and matches exhaustive search"""
    db = load_database(table1_path.read_text())
    names = db.names
    assert k2_search(db, SearchConfig((0, 1), 1)).dag == parse_structure("x1->x2", names)
    assert k2_search(db, SearchConfig((1, 0), 1)).dag == parse_structure("x2->x1", names)
    rng = np.random.default_rng(3)
    corpus = [db] + [generate_paper_db(PaperFamilySpec.scaled(w, s)) for w in (1, 2, 8) for s in (1, 10)]
    for _ in range(20):
        cards = rng.integers(1, 5, size=2)
        m = int(rng.integers(0, 40))
        codes = np.column_stack([rng.integers(0, c, size=m) for c in cards]).reshape(m, 2)
        corpus.append(Database([Variable(f"x{i + 1}", tuple(str(k) for k in range(c)))
                                for i, c in enumerate(cards)], codes))
    for data in corpus:
        for prior in (PriorSpec.uniform(), PriorSpec.noninformative(4.0)):
            table = posterior_over_structures(data, prior)
            for order in ((0, 1), (1, 0)):
                found = k2_search(data, SearchConfig(order, 1, prior)).dag
                best = max(e.log_joint for e in table.entries if not e.dag.parents[order[0]])
                assert table.entry(found).log_joint == pytest.approx(best, abs=1e-9)


def test_ac9_posteriors_normalize(table1_path):
    """AC9: enumerated posteriors sum to 1 within 1e-9 over the test corpus"""
    rng = np.random.default_rng(99)
    corpus = [load_database(table1_path.read_text()),
              load_database("a,b\n", domains={"a": ["0", "1"], "b": ["0", "1", "2"]})]
    corpus += [generate_paper_db(PaperFamilySpec.scaled(w, s)) for w in (1, 2, 4, 8, 16)
               for s in (1, 10, 100)]
    corpus += [_random_three_var_db(rng) for _ in range(20)]
    priors = [PriorSpec.uniform(), PriorSpec.noninformative(1.0), PriorSpec.noninformative(45.0)]
    for db, prior in itertools.product(corpus, priors):
        table = posterior_over_structures(db, prior)
        assert abs(math.fsum(e.posterior for e in table.entries) - 1.0) <= 1e-9


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

"""Release gate: one test per numbered criterion, each with its time budget.

Run with ``pytest tests/test_acceptance.py -v`` for one pass/fail line per
criterion.  Each test asserts both the mathematical claim and the wall-clock
bound it must meet on commodity hardware.
"""

import itertools
import random
import time

import pytest

from ramseykit import (FAILS, HOLDS, Signature, Structure, ap_check,
                       arrow_check, arrow_instance, build_joint_witness,
                       check_locally_based, coloring_refutes,
                       enumerate_embeddings, enumerate_qf_copies, erp_check,
                       extract_indiscernible_pattern, f_erp_check,
                       formula_set, graphs, indexed_sequence, isolator,
                       joint_arrow_check, linear_order, linear_orders,
                       orderability_search, parse_certificate, parse_term,
                       pure_set, pure_sets, qf_type_morleyisation, qftp,
                       reindex, rigidity_scan, same_qftp_partition,
                       serialize_structure, term_iteration_coloring)
from ramseykit.cli import main


def successor_chain(n):
    sig = Signature(relations=(), functions=(("s", 1),), constants=())
    return Structure(sig, n, {}, {"s": {(i,): i + 1 for i in range(n - 1)}},
                     {}, name=f"chain{n}")


def test_criterion_1_classical_ramsey_regression():
    t = time.monotonic()
    holds = arrow_check(linear_order(6), linear_order(3), linear_order(2), 2,
                        mode="decide")
    assert holds.verdict == HOLDS
    assert time.monotonic() - t < 1.0
    t = time.monotonic()
    fails = arrow_check(linear_order(5), linear_order(3), linear_order(2), 2,
                        mode="decide")
    assert fails.verdict == FAILS
    instance = arrow_instance(linear_order(5), linear_order(3),
                              linear_order(2), 2)
    assert coloring_refutes(instance, fails.coloring)
    assert time.monotonic() - t < 1.0


def test_criterion_2_rigidity_obstruction():
    t = time.monotonic()
    for n in range(1, 9):
        res = arrow_check(pure_set(n), pure_set(3), pure_set(2), 2,
                          mode="decide")
        assert res.verdict == FAILS, n
    assert time.monotonic() - t < 10.0


def test_criterion_3_expansion_invariants():
    sig = Signature(relations=(("R0", 2), ("R1", 2)), functions=(),
                    constants=())
    rng = random.Random(3)
    t = time.monotonic()
    for trial in range(200):
        size = rng.randint(1, 5)
        rels = {sym: {(a, b) for a in range(size) for b in range(size)
                      if rng.random() < 0.4}
                for sym, _ in sig.relations}
        M = Structure(sig, size, rels, {}, {})
        assert same_qftp_partition(M, qf_type_morleyisation(M, 3), 3), trial
        R = isolator(M, 3)
        assert same_qftp_partition(M, R, 3), trial
        for arity in (1, 2, 3):
            for abar in itertools.permutations(range(size), arity):
                assert enumerate_qf_copies(M, abar) == \
                    enumerate_qf_copies(R, abar), (trial, abar)
    assert time.monotonic() - t < 30.0


def test_criterion_4_orderability():
    t = time.monotonic()
    lo = orderability_search(linear_orders(4))
    assert lo.verdict == "ORDERABLE"
    assert lo.types == (qftp(linear_order(2), (0, 1)),)
    assert orderability_search(pure_sets(4)).verdict == "NOT-ORDERABLE"
    assert orderability_search(graphs(3)).verdict == "NOT-ORDERABLE"
    assert time.monotonic() - t < 5.0


def test_criterion_5_extraction_guarantee():
    # R(3,3,3) = 17 <= 20, so an LO_3 pattern always exists in the index
    graph_sig = Signature(relations=(("E", 2),), functions=(), constants=())
    delta = formula_set("E(x0, x1)", "x0 = x1")
    lo20, lo3 = linear_order(20), linear_order(3)
    rng = random.Random(11)
    t = time.monotonic()
    for trial in range(100):
        size = rng.randint(1, 8)
        edges = set()
        for a, b in itertools.combinations(range(size), 2):
            if rng.random() < 0.5:
                edges |= {(a, b), (b, a)}
        G = Structure(graph_sig, size, {"E": edges}, {}, {})
        I = indexed_sequence(lo20, G, [rng.randrange(size) for _ in range(20)])
        res = extract_indiscernible_pattern(I, lo3, delta)
        assert res.embedding is not None and res.verified, trial
        ok, _, _ = check_locally_based(reindex(I, res.embedding), I, delta,
                                       lo3.size)
        assert ok, trial
    assert time.monotonic() - t < 60.0


class TestCriterion6CoherenceSuite:
    def test_a_erp_pass_implies_ap_pass(self):
        # amalgams of two k-chains over a point need 2k-1 points, so the
        # configuration bound is what fits inside each window
        for n in range(2, 6):
            F = linear_orders(n)
            assert erp_check(F, 1 if n == 2 else 2, n).verdict == "PASS"
            assert ap_check(F, config_bound=(n + 1) // 2).verdict == "PASS"

    def test_b_erp_pass_implies_rigid(self):
        for n in range(2, 6):
            F = linear_orders(n)
            assert erp_check(F, 1 if n == 2 else 2, n).verdict == "PASS"
            assert rigidity_scan(F) == ()
        assert erp_check(pure_sets(3), 2, 3).verdict != "PASS"
        assert rigidity_scan(pure_sets(3)) != ()

    def test_c_erp_pass_implies_not_unorderable(self):
        for n in range(2, 6):
            F = linear_orders(n)
            assert erp_check(F, 1 if n == 2 else 2, n).verdict == "PASS"
            assert orderability_search(F).verdict != "NOT-ORDERABLE"

    def test_d_joint_witness_implies_individual_arrows(self):
        supply = [linear_order(n) for n in range(1, 13)]
        patterns = [linear_order(1), linear_order(2)]
        C = build_joint_witness(supply, linear_order(3), patterns).witness
        res = joint_arrow_check(C, linear_order(3), patterns, mode="sample",
                                seed=5, samples=500)
        assert dict(res.stats)["witnessed"] == 500
        for A in patterns:
            single = arrow_check(C, linear_order(3), A, 2, mode="decide")
            assert single.verdict == HOLDS, A.name

    def test_e_finite_subset_erp_matches_erp(self):
        corpora = ((linear_orders(4), 3, 4), (linear_orders(5), 2, 5),
                   (pure_sets(3), 2, 3))
        for F, pair_bound, witness_bound in corpora:
            erp = erp_check(F, pair_bound, witness_bound)
            ferp = f_erp_check(F, pair_bound, witness_bound)
            assert erp.verdict == ferp.verdict, F.label


def test_criterion_7_joint_arrow_composition():
    t = time.monotonic()
    supply = [linear_order(n) for n in range(1, 13)]
    res = build_joint_witness(supply, linear_order(3),
                              [linear_order(1), linear_order(2)])
    assert res.verdict == "WITNESS"
    C = res.witness
    assert C.size <= 11
    triples = [e.mapping for e in enumerate_embeddings(C, linear_order(3))]
    points = [e.mapping for e in enumerate_embeddings(C, linear_order(1))]
    pairs = [e.mapping for e in enumerate_embeddings(C, linear_order(2))]
    rng = random.Random(7)
    for trial in range(1000):
        c1 = {key: rng.randrange(2) for key in points}
        c2 = {key: rng.randrange(2) for key in pairs}
        assert any(c1[(a,)] == c1[(b,)] == c1[(c,)]
                   and c2[(a, b)] == c2[(a, c)] == c2[(b, c)]
                   for a, b, c in triples), trial
    assert time.monotonic() - t < 30.0


def test_criterion_8_term_iteration_coloring():
    chain = successor_chain(10)
    coloring = term_iteration_coloring(chain, (0,), parse_term("s(x0)"))
    for x in range(9):
        assert coloring.color_of((x,)) != coloring.color_of((x + 1,)), x


def test_criterion_9_determinism_and_replay(tmp_path, monkeypatch):
    lo2 = tmp_path / "lo2.struct"
    lo3 = tmp_path / "lo3.struct"
    lo5 = tmp_path / "lo5.struct"
    lo6 = tmp_path / "lo6.struct"
    for path, n in ((lo2, 2), (lo3, 3), (lo5, 5), (lo6, 6)):
        path.write_text(serialize_structure(linear_order(n)))
    chain = tmp_path / "chain.struct"
    chain.write_text(serialize_structure(successor_chain(5)))
    runs = (
        ["arrow", str(lo6), str(lo3), str(lo2), "--colors", "2",
         "--out", "arrow-holds.cert"],
        ["arrow", str(lo5), str(lo3), str(lo2), "--colors", "2",
         "--out", "arrow-fails.cert"],
        ["joint-arrow", str(lo6), str(lo3), str(lo2), "--colors", "2",
         "--seed", "5", "--out", "joint.cert"],
        ["degree", str(lo2), str(lo3), "--degree", "1", "--max-colors", "2",
         "--candidates", "linear-orders", "--upto", "6",
         "--out", "degree.cert"],
        ["generate", "pure-sets", "--upto", "4", "--out-class", "ps.cls",
         "--out", "generate.cert"],
        ["orderable", "ps.cls", "--out", "orderable.cert"],
        ["class-check", "ps.cls", "--pair-bound", "2",
         "--out", "class-check.cert"],
        ["expand", str(lo3), "--k", "2", "--out", "expand.cert"],
        ["isolate", str(lo3), "--k", "2", "--out", "isolate.cert"],
        ["elf", str(chain), "--tuple", "2", "--out", "elf.cert"],
    )
    emitted = {}
    for stage in ("one", "two"):
        workdir = tmp_path / stage
        workdir.mkdir()
        monkeypatch.chdir(workdir)
        for argv in runs:
            assert main(list(argv)) in (0, 1, 2), argv
            name = argv[argv.index("--out") + 1]
            data = (workdir / name).read_bytes()
            if stage == "one":
                emitted[name] = data
            else:
                assert data == emitted[name], name
    monkeypatch.chdir(tmp_path / "one")
    for name, data in emitted.items():
        assert main(["verify", name]) == 0, name
        parse_certificate(data.decode("utf-8"))

"""Finite classes, their structural properties, and orderability."""

import pytest

from ramseykit import (GENERATORS, ClassError, FiniteClass, Structure,
                       ap_check, elf_minimize, erp_check, f_erp_check,
                       finite_class, graphs, hp_check, jep_check,
                       linear_order, linear_orders, order_every_member,
                       orderability_search, ordered_graphs, pure_set,
                       pure_sets, qftp, rigidity_scan)

from conftest import FN_SIG, graph


def successor_chain(n):
    return Structure(FN_SIG, n, {"E": set()},
                     {"s": {(i,): i + 1 for i in range(n - 1)}}, {})


K1 = graph(1, [], name="K1")
I2 = graph(2, [], name="I2")
K2 = graph(2, [(0, 1)], name="K2")
K3 = graph(3, [(0, 1), (1, 2), (0, 2)], name="K3")
I3 = graph(3, [], name="I3")


class TestConstruction:
    def test_members_sorted_and_deduplicated(self):
        F = finite_class([linear_order(3), linear_order(2),
                          linear_order(3, name="again")])
        assert [M.size for M in F.members] == [2, 3]

    def test_isomorphic_duplicates_collapse(self):
        F = finite_class([graph(3, [(0, 1)]), graph(3, [(1, 2)])])
        assert len(F.members) == 1

    def test_empty_class_rejected(self):
        with pytest.raises(ClassError):
            finite_class([])

    def test_mixed_signatures_rejected(self):
        with pytest.raises(ClassError):
            finite_class([linear_order(2), pure_set(2)])

    def test_bound_violation_rejected(self):
        with pytest.raises(ClassError):
            FiniteClass(K2.signature, (K2,), 1)

    def test_members_upto(self):
        F = linear_orders(5)
        assert [M.size for M in F.members_upto(3)] == [1, 2, 3]


class TestGenerators:
    def test_counts(self):
        assert len(linear_orders(6).members) == 6
        assert len(pure_sets(4).members) == 4
        # graphs on <= 4 vertices up to isomorphism: 1 + 2 + 4 + 11
        assert len(graphs(4).members) == 18
        # a linear order rigidifies, so 2^binom(n,2) per size
        assert len(ordered_graphs(3).members) == 1 + 2 + 8

    def test_generated_classes_are_open(self):
        for name, gen in GENERATORS.items():
            F = gen(3)
            assert F.open_window, name
            assert F.label


class TestStructuralProperties:
    def test_hereditary_pass(self):
        assert hp_check(linear_orders(4)).verdict == "PASS"
        assert hp_check(graphs(3)).verdict == "PASS"

    def test_hereditary_fail_lists_missing_substructures(self):
        report = hp_check(finite_class([linear_order(3)]))
        assert report.verdict == "FAIL"
        assert report.rows

    def test_joint_embedding_pass(self):
        assert jep_check(linear_orders(4)).verdict == "PASS"

    def test_joint_embedding_window_semantics(self):
        # K3 and I3 need six vertices; a closed corpus is refuted, an open
        # one only runs out of witnesses
        closed = finite_class([K3, I3])
        assert jep_check(closed).verdict == "FAIL"
        open_ = finite_class([K3, I3], open_window=True)
        report = jep_check(open_)
        assert report.verdict == "INCONCLUSIVE"
        assert report.notes

    def test_amalgamation_pass_within_the_window(self):
        # two 3-chains over a shared point fit inside six points
        assert ap_check(linear_orders(6), config_bound=3).verdict == "PASS"

    def test_amalgamation_needs_room(self):
        # spans at the window edge cannot find amalgams inside it
        assert ap_check(linear_orders(3)).verdict == "INCONCLUSIVE"

    def test_amalgamation_window_semantics(self):
        # gluing an edge and a non-edge at a point needs a path
        closed = finite_class([K1, I2, K2])
        assert ap_check(closed).verdict == "FAIL"
        open_ = finite_class([K1, I2, K2], open_window=True)
        assert ap_check(open_).verdict == "INCONCLUSIVE"

    def test_rigidity_scan(self):
        assert rigidity_scan(linear_orders(5)) == ()
        assert [M.size for M in rigidity_scan(pure_sets(3))] == [2, 3]
        assert len(rigidity_scan(graphs(3))) == 6


class TestEmbeddingRamsey:
    def test_linear_orders_pass_with_doubling_witnesses(self):
        report = erp_check(linear_orders(6), 3, 6)
        assert report.verdict == "PASS"
        witness = {(a, b): w for a, b, w, _ in report.rows}
        assert witness[("LO_1", "LO_2")] == "LO_3"
        assert witness[("LO_1", "LO_3")] == "LO_5"
        assert witness[("LO_2", "LO_3")] == "LO_6"
        # a structure is trivially monochromatic inside itself
        assert witness[("LO_2", "LO_2")] == "LO_2"

    def test_pure_sets_fail_by_orientation_coloring(self):
        report = erp_check(pure_sets(4), 2, 4)
        assert report.verdict == "FAIL"
        assert any("Aut" in note for note in report.notes)

    def test_fail_is_relative_to_the_witness_bound(self):
        # (LO_2, LO_3) needs six points; the bound records the claim
        report = erp_check(linear_orders(4), 3, 4)
        assert report.verdict == "FAIL"
        assert ("witness_bound", 4) in report.bounds

    def test_budget_starvation_is_inconclusive(self):
        report = erp_check(linear_orders(6), 3, 6, budget=5)
        assert report.verdict == "INCONCLUSIVE"

    def test_bound_validation(self):
        with pytest.raises(ClassError):
            erp_check(linear_orders(3), 0, 3)
        with pytest.raises(ClassError):
            erp_check(linear_orders(3), 3, 2)

    def test_subset_variant_agrees_on_verdicts(self):
        for F, pair_bound, bound in [(linear_orders(4), 2, 4),
                                     (pure_sets(3), 2, 3)]:
            a = erp_check(F, pair_bound, bound).verdict
            b = f_erp_check(F, pair_bound, bound).verdict
            assert a == b


class TestOrderability:
    def test_linear_orders_are_orderable_by_their_own_type(self):
        res = orderability_search(linear_orders(4))
        assert res.verdict == "ORDERABLE"
        assert res.types == (qftp(linear_order(2), (0, 1)),)
        assert res.tried == ()
        for rel in order_every_member(linear_orders(4), res.types):
            assert rel.is_strict_linear_order

    def test_pure_sets_blocked_by_symmetric_type(self):
        res = orderability_search(pure_sets(4))
        assert res.verdict == "NOT-ORDERABLE"
        assert res.witness is not None
        assert res.tried == ()

    def test_graphs_blocked_by_symmetric_edge_type(self):
        assert orderability_search(graphs(3)).verdict == "NOT-ORDERABLE"

    def test_ordered_graphs_orderable(self):
        F = ordered_graphs(3)
        res = orderability_search(F)
        assert res.verdict == "ORDERABLE"
        for rel in order_every_member(F, res.types):
            assert rel.is_strict_linear_order

    def test_assignment_cap(self):
        res = orderability_search(ordered_graphs(3), max_assignments=1)
        assert res.verdict == "INCONCLUSIVE"


class TestElfMinimization:
    def test_order_pairs_need_the_whole_domain(self):
        assert elf_minimize(linear_order(5), (1, 3)) == (0, 1, 2, 3, 4)

    def test_chain_tail_supports_itself(self):
        # the type of a point two steps from the end pins its copies
        assert elf_minimize(successor_chain(4), (2,)) == (2,)

    def test_support_is_a_proper_subset_when_types_isolate(self):
        chain = successor_chain(5)
        support = elf_minimize(chain, (3,))
        assert set(support) < set(range(5))

"""Type tables, type-predicate expansions, and type-union relations."""

import itertools

import pytest
from hypothesis import given, settings

from ramseykit import (Structure, automorphism_group, define_by_type_union,
                       enumerate_qf_copies, induced_type, isolator,
                       linear_order, pure_set, qf_type_morleyisation, qftp,
                       realized_types, same_qftp_partition)

from conftest import FN_SIG, binary_structures, graph


def successor_chain(n):
    return Structure(FN_SIG, n, {"E": set()},
                     {"s": {(i,): i + 1 for i in range(n - 1)}}, {})


class TestRealizedTypes:
    def test_path_graph_pair_types(self):
        table = realized_types(graph(3, [(0, 1), (1, 2)]), 2)
        # singletons generate nothing, so one point type; pairs split into
        # diagonal, edge, and non-edge
        assert len(table.arity_rows(1)) == 1
        assert len(table.arity_rows(2)) == 3
        assert [arity for _, arity in table.symbols()] == [1, 2, 2, 2]

    def test_rows_partition_the_tuples(self):
        M = linear_order(3)
        table = realized_types(M, 2)
        for m in (1, 2):
            realized = sorted(itertools.chain.from_iterable(
                row[2] for row in table.arity_rows(m)))
            assert realized == sorted(itertools.product(range(3), repeat=m))

    def test_function_closures_split_point_types(self):
        # distance to the chain end is visible in the generated type
        table = realized_types(successor_chain(10), 1)
        assert len(table.rows) == 10
        assert all(len(row[2]) == 1 for row in table.rows)

    def test_names_are_arity_tagged_digests(self):
        table = realized_types(linear_order(2), 2)
        assert all(name.startswith(f"qft{t.arity}_")
                   for name, t, _ in table.rows)
        assert len({name for name, _, _ in table.rows}) == len(table.rows)

    def test_positive_arity_required(self):
        with pytest.raises(ValueError):
            realized_types(linear_order(2), 0)


class TestMorleyisation:
    def test_original_tables_survive(self):
        M = linear_order(3)
        out = qf_type_morleyisation(M, 2)
        assert out.size == 3
        assert out.rel_tuples("<") == M.rel_tuples("<")
        assert len(out.signature.relations) == 1 + 4

    def test_partition_unchanged(self):
        M = graph(4, [(0, 1), (1, 2), (2, 3)])
        assert same_qftp_partition(M, qf_type_morleyisation(M, 2), 2)

    @settings(max_examples=40, deadline=None)
    @given(binary_structures(max_size=4))
    def test_partition_unchanged_everywhere(self, M):
        assert same_qftp_partition(M, qf_type_morleyisation(M, 2), 2)

    def test_functions_carry_over(self):
        out = qf_type_morleyisation(successor_chain(3), 1)
        assert out.fn_value("s", (0,)) == 1
        assert out.fn_value("s", (2,)) is None


class TestIsolator:
    def test_purely_relational(self):
        out = isolator(successor_chain(3), 2)
        assert out.signature.functions == ()
        assert out.signature.constants == ()

    @settings(max_examples=40, deadline=None)
    @given(binary_structures(max_size=4))
    def test_partition_preserved_without_the_original_symbols(self, M):
        assert same_qftp_partition(M, isolator(M, 2), 2)

    def test_copy_sets_agree(self):
        M = linear_order(5)
        iso = isolator(M, 2)
        for abar in [(1, 3), (0, 4), (4, 2)]:
            assert enumerate_qf_copies(M, abar) == enumerate_qf_copies(iso, abar)

    def test_chain_points_become_predicates(self):
        out = isolator(successor_chain(4), 1)
        assert len(out.signature.relations) == 4
        assert all(arity == 1 for _, arity in out.signature.relations)


class TestSamePartition:
    def test_reflexive(self):
        M = graph(3, [(0, 1)])
        assert same_qftp_partition(M, M, 2)

    def test_detects_coarser_structure(self):
        assert not same_qftp_partition(linear_order(3), pure_set(3), 2)

    def test_domain_sizes_must_match(self):
        with pytest.raises(ValueError):
            same_qftp_partition(linear_order(2), linear_order(3), 1)

    def test_positive_arity_required(self):
        with pytest.raises(ValueError):
            same_qftp_partition(linear_order(2), linear_order(2), 0)


class TestTypeUnionRelation:
    def test_linear_order_from_its_pair_type(self):
        M = linear_order(4)
        rel = define_by_type_union(M, [qftp(M, (0, 1))])
        assert rel.pairs == tuple((a, b) for a in range(4) for b in range(4)
                                  if a < b)
        assert rel.is_strict_linear_order
        assert rel.holds(0, 3) and not rel.holds(3, 0)

    def test_distinctness_type_is_not_an_order(self):
        M = pure_set(3)
        rel = define_by_type_union(M, [qftp(M, (0, 1))])
        assert rel.irreflexive and rel.total
        assert not rel.antisymmetric and not rel.transitive
        assert not rel.is_strict_linear_order

    def test_diagonal_type_is_reflexive(self):
        M = pure_set(3)
        rel = define_by_type_union(M, [qftp(M, (0, 0))])
        assert rel.pairs == ((0, 0), (1, 1), (2, 2))
        assert not rel.irreflexive

    def test_union_of_both_directions_is_total_not_antisymmetric(self):
        M = linear_order(3)
        rel = define_by_type_union(M, [qftp(M, (0, 1)), qftp(M, (1, 0))])
        assert rel.total and rel.irreflexive and not rel.antisymmetric

    def test_automorphism_invariance_on_pentagon(self):
        pent = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
        rel = define_by_type_union(pent, [qftp(pent, (0, 1))])
        group = automorphism_group(pent)
        assert len(group) == 10
        for g in group.elements:
            for a, b in rel.pairs:
                assert rel.holds(g.apply(a), g.apply(b))

    @settings(max_examples=40, deadline=None)
    @given(binary_structures(max_size=4))
    def test_automorphism_invariance_everywhere(self, M):
        rel = define_by_type_union(M, [qftp(M, (0, min(1, M.size - 1)))])
        for g in automorphism_group(M).elements:
            for a in range(M.size):
                for b in range(M.size):
                    assert rel.holds(a, b) == rel.holds(g.apply(a), g.apply(b))

    def test_validation(self):
        M = linear_order(3)
        with pytest.raises(ValueError):
            define_by_type_union(M, [induced_type(M, (0, 1))])
        with pytest.raises(ValueError):
            define_by_type_union(M, [qftp(M, (0, 1, 2))])
        with pytest.raises(ValueError):
            define_by_type_union(M, [qftp(pure_set(3), (0, 1))])

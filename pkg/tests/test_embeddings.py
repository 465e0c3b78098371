"""Embeddings: preservation both ways, enumeration, automorphisms."""

import pytest
from hypothesis import given, settings

from ramseykit import (Embedding, EmbeddingError, Structure, automorphism_group,
                       embeds, enumerate_embeddings, first_embedding, is_rigid,
                       linear_order, pure_set)

from conftest import CONST_SIG, binary_structures, functional_structures, graph
from oracles import oracle_embeddings


class TestEmbeddingObject:
    def test_relations_reflected_not_just_preserved(self):
        # homomorphism squashing a non-edge onto an edge must be rejected
        p2 = graph(2, [])
        k2 = graph(2, [(0, 1)])
        with pytest.raises(EmbeddingError):
            Embedding(p2, k2, (0, 1)).validate()
        assert not Embedding(p2, k2, (0, 1)).is_valid()

    def test_injectivity_required(self):
        a = pure_set(2)
        with pytest.raises(EmbeddingError):
            Embedding(a, pure_set(3), (1, 1)).validate()

    def test_function_values_carried_forward(self):
        chain = Structure(CONST_SIG, 3, {"E": set()},
                          {"s": {(0,): 1, (1,): 2}}, {"e": 0})
        sub = Structure(CONST_SIG, 2, {"E": set()},
                        {"s": {(0,): 1}}, {"e": 0})
        assert Embedding(sub, chain, (0, 1)).is_valid()
        # undefined pattern entries stay free, so the host embeds its
        # own initial segment even though s is total there and not here
        assert embeds(chain, sub)

    def test_compose(self):
        lo2, lo3, lo5 = linear_order(2), linear_order(3), linear_order(5)
        inner = Embedding(lo2, lo3, (0, 2))
        outer = Embedding(lo3, lo5, (1, 2, 4))
        assert outer.compose(inner).mapping == (1, 4)


class TestEnumeration:
    def test_sorted_by_mapping(self):
        maps = [e.mapping for e in enumerate_embeddings(linear_order(4),
                                                        linear_order(2))]
        assert maps == sorted(maps)
        assert len(maps) == 6

    def test_fixed_pins(self):
        pins = {0: 2}
        maps = [e.mapping for e in enumerate_embeddings(
            linear_order(4), linear_order(2), fixed=pins)]
        assert maps == [(2, 3)]

    def test_first_embedding_none(self):
        assert first_embedding(pure_set(2), pure_set(3)) is None

    @settings(max_examples=100, deadline=None)
    @given(binary_structures(max_size=4), binary_structures(max_size=3))
    def test_matches_oracle(self, host, pattern):
        got = [e.mapping for e in enumerate_embeddings(host, pattern)]
        assert got == sorted(oracle_embeddings(host, pattern))

    @settings(max_examples=60, deadline=None)
    @given(functional_structures(max_size=4), functional_structures(max_size=3))
    def test_matches_oracle_with_functions(self, host, pattern):
        got = [e.mapping for e in enumerate_embeddings(host, pattern)]
        assert got == sorted(oracle_embeddings(host, pattern))

    @settings(max_examples=60, deadline=None)
    @given(binary_structures(max_size=4), binary_structures(max_size=3))
    def test_every_result_revalidates(self, host, pattern):
        for e in enumerate_embeddings(host, pattern):
            assert e.is_valid()


class TestAutomorphisms:
    def test_counts(self):
        assert len(automorphism_group(linear_order(5))) == 1
        assert len(automorphism_group(pure_set(3))) == 6
        assert len(automorphism_group(graph(2, [(0, 1)]))) == 2
        pentagon = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
        assert len(automorphism_group(pentagon)) == 10

    def test_rigidity(self):
        assert is_rigid(linear_order(4))
        assert not is_rigid(pure_set(2))

    def test_group_closure_under_composition(self):
        g = automorphism_group(graph(3, [(0, 1)]))
        maps = {e.mapping for e in g.elements}
        for a in g.elements:
            for b in g.elements:
                assert a.compose(b).mapping in maps

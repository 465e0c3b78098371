"""Structures: validation, closure, canonical labeling, isomorphism."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramseykit import (Signature, SignatureError, SignatureMismatch,
                       Structure, StructureError, canonical_certificate,
                       canonical_form, generated_substructure, is_isomorphic,
                       linear_order, pure_set, substructure_closure)

from conftest import FN_SIG, binary_structures, functional_structures, graph
from oracles import oracle_isomorphic


def successor_chain(n: int, defined_upto: int) -> Structure:
    return Structure(FN_SIG, n, {},
                     {"s": {(i,): i + 1 for i in range(defined_upto)}}, {})


class TestSignature:
    def test_duplicate_symbol_rejected(self):
        with pytest.raises(SignatureError):
            Signature((("E", 2), ("E", 2)), (), ())

    def test_zero_arity_rejected(self):
        with pytest.raises(SignatureError):
            Signature((("E", 0),), (), ())

    def test_symbols_sorted(self):
        sig = Signature((("R", 2), ("E", 1)), (), ())
        assert sig.relation_names == ("E", "R")


class TestStructureValidation:
    def test_out_of_range_tuple(self):
        sig = Signature((("E", 2),), (), ())
        with pytest.raises(StructureError):
            Structure(sig, 2, {"E": {(0, 5)}}, {}, {})

    def test_arity_mismatch(self):
        sig = Signature((("E", 2),), (), ())
        with pytest.raises(StructureError):
            Structure(sig, 3, {"E": {(0, 1, 2)}}, {}, {})

    def test_unknown_symbol(self):
        sig = Signature((("E", 2),), (), ())
        with pytest.raises(SignatureError):
            Structure(sig, 2, {"F": {(0, 1)}}, {}, {})

    def test_missing_constant(self):
        sig = Signature((), (), ("e",))
        with pytest.raises(StructureError):
            Structure(sig, 2, {}, {}, {})

    def test_partial_functions_allowed(self):
        M = successor_chain(10, 9)
        assert M.fn_value("s", (8,)) == 9
        assert M.fn_value("s", (9,)) is None

    def test_name_not_in_equality(self):
        a = linear_order(3, "one")
        b = linear_order(3, "two")
        assert a == b and hash(a) == hash(b)


class TestClosure:
    def test_successor_tail(self):
        M = successor_chain(10, 9)
        assert substructure_closure(M, {7}) == (7, 8, 9)

    def test_constants_always_included(self):
        sig = Signature((), (), ("e",))
        M = Structure(sig, 3, {}, {}, {"e": 2})
        assert substructure_closure(M, set()) == (2,)

    def test_generated_relabels_in_order(self):
        M = successor_chain(10, 9)
        sub, inclusion = generated_substructure(M, {7})
        assert inclusion == (7, 8, 9)
        assert sub.size == 3
        assert sub.fn_value("s", (0,)) == 1
        assert sub.fn_value("s", (2,)) is None


class TestCanonical:
    def test_idempotent_on_fixtures(self):
        for M in (linear_order(4), pure_set(3), graph(4, [(0, 1), (1, 2)])):
            cf = canonical_form(M)
            assert canonical_form(cf) == cf

    @settings(max_examples=150, deadline=None)
    @given(binary_structures(max_size=5))
    def test_idempotent(self, M):
        cf = canonical_form(M)
        assert canonical_form(cf) == cf

    @settings(max_examples=80, deadline=None)
    @given(binary_structures(max_size=4), st.randoms(use_true_random=False))
    def test_relabel_invariant(self, M, rng):
        perm = list(range(M.size))
        rng.shuffle(perm)
        rels = {sym: {tuple(perm[x] for x in t) for t in M.rel_tuples(sym)}
                for sym in M.signature.relation_names}
        relabeled = Structure(M.signature, M.size, rels, {}, {})
        assert canonical_certificate(relabeled) == canonical_certificate(M)
        assert canonical_form(relabeled) == canonical_form(M)

    @settings(max_examples=60, deadline=None)
    @given(functional_structures(max_size=4, constants=True))
    def test_idempotent_with_functions(self, M):
        cf = canonical_form(M)
        assert canonical_form(cf) == cf


class TestIsomorphism:
    def test_signature_mismatch_distinct_error(self):
        a = linear_order(2)
        b = pure_set(2)
        with pytest.raises(SignatureMismatch):
            is_isomorphic(a, b)

    def test_path_not_star(self):
        p4 = graph(4, [(0, 1), (1, 2), (2, 3)])
        star = graph(4, [(0, 1), (0, 2), (0, 3)])
        assert not is_isomorphic(p4, star)
        assert is_isomorphic(p4, graph(4, [(2, 0), (0, 1), (1, 3)]))

    @settings(max_examples=80, deadline=None)
    @given(binary_structures(max_size=4), binary_structures(max_size=4))
    def test_matches_oracle(self, M1, M2):
        assert is_isomorphic(M1, M2) == oracle_isomorphic(M1, M2)

"""Quantifier-free types of tuples, as canonical pointed certificates.

The quantifier-free type of a tuple ā in M is the canonical form of the
substructure generated by ā, pointed by ā's positions.  Two tuples have
equal types exactly when an isomorphism of their generated substructures
maps one tuple to the other componentwise -- across structures over the
same signature, not just within one structure.

A second, strictly tuple-local notion is also provided: the *induced
diagram type*, the canonical pointed form of the induced tables on the
tuple's bare point set (no closure).  The two notions agree on relational
constant-free structures; they differ exactly where function closure
leaks information, which is what term-iteration colorings need to ignore.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass

from .structures import (Signature, Structure, canonical_search,
                         generated_substructure, induced_substructure_tables,
                         structure_tables)


@dataclass(frozen=True)
class QfType:
    """Canonical pointed certificate of a tuple's generated substructure.

    ``kind`` distinguishes the closure semantics ("generated") from the
    tuple-local diagram semantics ("induced"); the two kinds never compare
    equal.
    """

    signature: Signature
    arity: int
    cert: tuple
    kind: str = "generated"

    def sort_key(self):
        return (self.arity, self.kind, self.cert)


def type_digest(t: QfType, length: int = 10) -> str:
    """Deterministic short hex digest, stable across runs and machines."""
    blob = repr((t.signature, t.arity, t.kind, t.cert)).encode()
    return hashlib.sha256(blob).hexdigest()[:length]


def _fast_path_ok(M: Structure) -> bool:
    return M.is_relational and not M.signature.constants


def _pretype_key(M: Structure, abar: tuple[int, ...]):
    # First-occurrence relabeling of the tuple's point set; valid only when
    # the generated substructure is the bare point set (relational, no
    # constants).  Tuples with equal keys share a canonical certificate.
    relabel: dict[int, int] = {}
    for e in abar:
        if e not in relabel:
            relabel[e] = len(relabel)
    inside = set(abar)
    tables = tuple(
        tuple(sorted(tuple(relabel[x] for x in t)
                     for t in M._rels[sym] if all(x in inside for x in t)))
        for sym, _ in M.signature.relations)
    return (len(relabel), tables, tuple(relabel[e] for e in abar))


def qftp(M: Structure, abar) -> QfType:
    """Quantifier-free type of a tuple (repeats allowed).

    Computed as the canonical pointed form of the generated substructure.
    Cached per tuple; relational constant-free structures additionally
    share certificates between tuples whose local diagrams already match
    under first-occurrence relabeling.
    """
    abar = tuple(int(x) for x in abar)
    for x in abar:
        if not 0 <= x < M.size:
            raise ValueError(f"tuple entry {x} out of domain range")
    hit = M._type_cache.get(abar)
    if hit is not None:
        return hit

    if _fast_path_ok(M):
        key = _pretype_key(M, abar)
        cert = M._pretype_cache.get(key)
        if cert is None:
            size, tables, pointing = key
            rel_items = tuple((sym, tabs) for (sym, _), tabs
                              in zip(M.signature.relations, tables))
            cert, _ = canonical_search(size, rel_items, (), (), pointing)
            M._pretype_cache[key] = cert
        t = QfType(M.signature, len(abar), cert)
    else:
        sub, closure = generated_substructure(M, set(abar))
        old2new = {e: i for i, e in enumerate(closure)}
        pointing = tuple(old2new[x] for x in abar)
        rel_items, fn_items, const_items = structure_tables(sub)
        cert, _ = canonical_search(sub.size, rel_items, fn_items,
                                   const_items, pointing)
        t = QfType(M.signature, len(abar), cert)

    M._type_cache[abar] = t
    return t


def induced_type(M: Structure, abar) -> QfType:
    """Tuple-local diagram type: induced tables on the bare point set.

    Function entries count only when arguments and value stay inside the
    point set, so term equations among the tuple's entries (like
    ``s(x0) = x1``) are captured while closure beyond the tuple is not.
    """
    abar = tuple(int(x) for x in abar)
    for x in abar:
        if not 0 <= x < M.size:
            raise ValueError(f"tuple entry {x} out of domain range")
    hit = M._induced_cache.get(abar)
    if hit is not None:
        return hit
    size, rel_items, fn_items, const_items, old2new = \
        induced_substructure_tables(M, set(abar))
    pointing = tuple(old2new[x] for x in abar)
    cert, _ = canonical_search(size, rel_items, fn_items, const_items, pointing)
    t = QfType(M.signature, len(abar), cert, kind="induced")
    M._induced_cache[abar] = t
    return t


def enumerate_qf_copies(M: Structure, abar) -> list[tuple[int, ...]]:
    """All injective tuples over M with the same quantifier-free type as ā.

    The reference tuple must itself be injective (copies-of-subsets
    semantics requires distinct points); the result is in lexicographic
    order, includes ā, and is *not* deduplicated up to re-enumeration of a
    shared support.
    """
    abar = tuple(int(x) for x in abar)
    if len(set(abar)) != len(abar):
        raise ValueError("reference tuple must have pairwise distinct entries")
    target = qftp(M, abar)
    return [p for p in itertools.permutations(range(M.size), len(abar))
            if qftp(M, p) == target]


def qf_copies_within(M: Structure, abar, ground) -> list[tuple[int, ...]]:
    """Copies of ā whose entries stay inside a ground subset of M.

    Types are still evaluated relative to the ambient M, so a copy's
    generated substructure may leave the ground set; only its entries are
    constrained.
    """
    abar = tuple(int(x) for x in abar)
    if len(set(abar)) != len(abar):
        raise ValueError("reference tuple must have pairwise distinct entries")
    pts = sorted(set(int(g) for g in ground))
    target = qftp(M, abar)
    return [p for p in itertools.permutations(pts, len(abar))
            if qftp(M, p) == target]


def copies_of_type(M: Structure, t: QfType,
                   ground=None) -> list[tuple[int, ...]]:
    """Injective tuples of M realizing a given (generated) type.

    The type may originate in a different structure over the same
    signature; certificates make the comparison meaningful.
    """
    if t.signature != M.signature:
        raise ValueError("type and structure signatures differ")
    if t.kind != "generated":
        raise ValueError("copies are enumerated for generated types only")
    pts = range(M.size) if ground is None else sorted(set(int(g) for g in ground))
    return [p for p in itertools.permutations(pts, t.arity)
            if qftp(M, p) == t]

"""Embeddings between finite structures.

An embedding is an injective map on domains that preserves *and reflects*
every relation atom, maps every defined function value to an equal defined
value (definedness is preserved forward, never reflected), and matches
constants.  Enumeration order is deterministic: results are sorted by
their mapping tuples, so the first embedding found is stable across runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .structures import SignatureMismatch, Structure


class EmbeddingError(ValueError):
    """A mapping tuple that is not an embedding, with the reason."""


@dataclass(frozen=True)
class Embedding:
    """An injective structure map, stored as ``mapping[i] = image of i``."""

    source: Structure
    target: Structure
    mapping: tuple[int, ...]

    def apply(self, i: int) -> int:
        return self.mapping[i]

    def apply_tuple(self, t) -> tuple[int, ...]:
        return tuple(self.mapping[x] for x in t)

    def image(self) -> frozenset[int]:
        return frozenset(self.mapping)

    @property
    def is_bijective(self) -> bool:
        return self.source.size == self.target.size

    def compose(self, inner: "Embedding") -> "Embedding":
        """``self`` after ``inner`` (inner's target must be self's source)."""
        if inner.target != self.source:
            raise EmbeddingError("composition mismatch: inner target differs from outer source")
        return Embedding(inner.source, self.target,
                         tuple(self.mapping[x] for x in inner.mapping))

    def inverse(self) -> "Embedding":
        if not self.is_bijective:
            raise EmbeddingError("only bijective embeddings can be inverted")
        inv = [0] * self.target.size
        for i, y in enumerate(self.mapping):
            inv[y] = i
        return Embedding(self.target, self.source, tuple(inv))

    # -- validation -----------------------------------------------------

    def validate(self) -> None:
        """Independent atom-by-atom re-check; raises on any violation.

        Deliberately not shared with the search in
        :func:`enumerate_embeddings`: the enumerator prunes incrementally,
        this walks every atom from scratch so returned embeddings can be
        re-certified without trusting the search.
        """
        src, tgt, m = self.source, self.target, self.mapping
        if src.signature != tgt.signature:
            raise EmbeddingError("source and target signatures differ")
        if len(m) != src.size:
            raise EmbeddingError("mapping length differs from source size")
        if any(not 0 <= y < tgt.size for y in m):
            raise EmbeddingError("mapping leaves the target domain")
        if len(set(m)) != len(m):
            raise EmbeddingError("mapping is not injective")
        for sym in src.signature.constants:
            if m[src.const(sym)] != tgt.const(sym):
                raise EmbeddingError(f"constant {sym} not preserved")
        for sym, ar in src.signature.relations:
            for t in itertools.product(range(src.size), repeat=ar):
                if src.holds(sym, t) != tgt.holds(sym, self.apply_tuple(t)):
                    raise EmbeddingError(
                        f"relation {sym} not preserved/reflected at {t}")
        for sym, _ in src.signature.functions:
            for args, val in src.fn_entries(sym):
                got = tgt.fn_value(sym, self.apply_tuple(args))
                if got != m[val]:
                    raise EmbeddingError(
                        f"function {sym} at {args}: expected image {m[val]}, target has {got}")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except EmbeddingError:
            return False
        return True


def _search(host: Structure, pattern: Structure, fixed, limit):
    n = pattern.size
    sig = pattern.signature

    pre: dict[int, int] = {}
    for sym in sig.constants:
        pe, he = pattern.const(sym), host.const(sym)
        if pre.setdefault(pe, he) != he:
            return []
    for k, v in (fixed or {}).items():
        if pre.setdefault(int(k), int(v)) != int(v):
            return []
    if len(set(pre.values())) != len(pre):
        return []

    rel_syms = sig.relations
    fn_syms = [(sym, pattern.fn_entries(sym)) for sym, _ in sig.functions]
    assign = [-1] * n
    used = [False] * host.size
    out: list[tuple[int, ...]] = []

    def consistent(e: int, img: int) -> bool:
        assigned = [x for x in range(n) if assign[x] >= 0 or x == e]

        def img_of(x: int) -> int:
            return img if x == e else assign[x]

        for sym, ar in rel_syms:
            for t in itertools.product(assigned, repeat=ar):
                if e not in t:
                    continue
                mapped = tuple(img_of(x) for x in t)
                if pattern.holds(sym, t) != host.holds(sym, mapped):
                    return False
        for sym, entries in fn_syms:
            for args, val in entries:
                scope = set(args) | {val}
                if e not in scope:
                    continue
                if any(assign[x] < 0 and x != e for x in scope):
                    continue
                if host.fn_value(sym, tuple(img_of(x) for x in args)) != img_of(val):
                    return False
        return True

    def rec(e: int) -> bool:
        if e == n:
            out.append(tuple(assign))
            return limit is not None and len(out) >= limit
        candidates = [pre[e]] if e in pre else range(host.size)
        for img in candidates:
            if used[img]:
                continue
            if not consistent(e, img):
                continue
            assign[e] = e_img = img
            used[img] = True
            done = rec(e + 1)
            assign[e] = -1
            used[e_img] = False
            if done:
                return True
        return False

    rec(0)
    return out


def enumerate_embeddings(host: Structure, pattern: Structure,
                         fixed: dict[int, int] | None = None) -> list[Embedding]:
    """All embeddings of ``pattern`` into ``host``, sorted by mapping tuple.

    ``fixed`` optionally pins pattern elements to host elements before the
    search (used by amalgamation checks).  Raises
    :class:`SignatureMismatch` when the signatures differ.
    """
    if host.signature != pattern.signature:
        raise SignatureMismatch("pattern and host signatures differ")
    maps = _search(host, pattern, fixed, limit=None)
    maps.sort()
    return [Embedding(pattern, host, m) for m in maps]


def embeds(host: Structure, pattern: Structure,
           fixed: dict[int, int] | None = None) -> bool:
    """Existence check with early exit (same search, first hit wins)."""
    if host.signature != pattern.signature:
        raise SignatureMismatch("pattern and host signatures differ")
    return bool(_search(host, pattern, fixed, limit=1))


def first_embedding(host: Structure, pattern: Structure,
                    fixed: dict[int, int] | None = None) -> Embedding | None:
    """Lexicographically least embedding, or None.

    Element images are tried in ascending order, so the first complete
    assignment is the lex-least mapping.
    """
    if host.signature != pattern.signature:
        raise SignatureMismatch("pattern and host signatures differ")
    maps = _search(host, pattern, fixed, limit=1)
    return Embedding(pattern, host, maps[0]) if maps else None


@dataclass(frozen=True)
class AutomorphismGroup:
    """All automorphisms of a structure, sorted by mapping tuple."""

    structure: Structure
    elements: tuple[Embedding, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)


def automorphism_group(A: Structure) -> AutomorphismGroup:
    """The full automorphism group.

    Self-embeddings of a finite structure are automatically bijective and,
    by a finite counting argument on function graphs, reflect function
    definedness, so the set of self-embeddings is the automorphism group
    (closed under composition and inverse, contains the identity).
    Results are cached on the structure.
    """
    if A._aut_cache is None:
        A._aut_cache = AutomorphismGroup(A, tuple(enumerate_embeddings(A, A)))
    return A._aut_cache


def is_rigid(A: Structure) -> bool:
    """True when the identity is the only automorphism."""
    return len(automorphism_group(A)) == 1

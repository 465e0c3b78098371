"""Brute-force reference implementations used to pin expected test values.

Everything here trades efficiency for obviousness: exhaustive loops over
all maps or all colorings, no pruning, no canonicalization.  Intended for
structures of at most 5 or 6 elements.
"""

import itertools

from ramseykit import Structure, substructure_closure


def oracle_is_embedding(pattern: Structure, host: Structure, mapping) -> bool:
    """Atom-by-atom check that mapping is an embedding pattern -> host."""
    if pattern.signature != host.signature:
        return False
    if len(set(mapping)) != len(mapping) or len(mapping) != pattern.size:
        return False
    for sym, ar in pattern.signature.relations:
        for tup in itertools.product(range(pattern.size), repeat=ar):
            image = tuple(mapping[x] for x in tup)
            if pattern.holds(sym, tup) != host.holds(sym, image):
                return False
    for sym, ar in pattern.signature.functions:
        for args in itertools.product(range(pattern.size), repeat=ar):
            value = pattern.fn_value(sym, args)
            if value is None:
                continue
            image = host.fn_value(sym, tuple(mapping[x] for x in args))
            if image != mapping[value]:
                return False
    for sym in pattern.signature.constants:
        if mapping[pattern.const(sym)] != host.const(sym):
            return False
    return True


def oracle_embeddings(host: Structure, pattern: Structure):
    """All embeddings as mapping tuples, by exhaustive injection scan."""
    return [m for m in itertools.permutations(range(host.size), pattern.size)
            if oracle_is_embedding(pattern, host, m)]


def oracle_isomorphic(M1: Structure, M2: Structure) -> bool:
    if M1.size != M2.size:
        return False
    return bool(oracle_embeddings(M2, M1))


def oracle_generated_qftp_equal(M1: Structure, t1, M2: Structure, t2) -> bool:
    """Pointed isomorphism of generated substructures, by brute force.

    The types of t1 and t2 agree exactly when some isomorphism of the
    closures carries t1 to t2 pointwise.
    """
    if M1.signature != M2.signature or len(t1) != len(t2):
        return False
    c1 = sorted(substructure_closure(M1, set(t1)))
    c2 = sorted(substructure_closure(M2, set(t2)))
    if len(c1) != len(c2):
        return False
    pos1 = {x: i for i, x in enumerate(c1)}
    pos2 = {x: i for i, x in enumerate(c2)}
    sub1 = _restrict(M1, c1)
    sub2 = _restrict(M2, c2)
    p1 = tuple(pos1[x] for x in t1)
    p2 = tuple(pos2[x] for x in t2)
    for m in itertools.permutations(range(len(c1))):
        if tuple(m[x] for x in p1) != p2:
            continue
        # isomorphism, not just embedding: definedness must match both
        # ways, so check the inverse too
        inv = [0] * len(m)
        for i, y in enumerate(m):
            inv[y] = i
        if oracle_is_embedding(sub1, sub2, m) and \
                oracle_is_embedding(sub2, sub1, tuple(inv)):
            return True
    return False


def _restrict(M: Structure, elements) -> Structure:
    """Induced substructure on a closed element list (sorted order)."""
    elements = list(elements)
    pos = {x: i for i, x in enumerate(elements)}
    inside = set(elements)
    rels = {}
    for sym, _ in M.signature.relations:
        rels[sym] = {tuple(pos[x] for x in t) for t in M.rel_tuples(sym)
                     if all(x in inside for x in t)}
    fns = {}
    for sym, _ in M.signature.functions:
        fns[sym] = {tuple(pos[x] for x in args): pos[v]
                    for args, v in M.fn_entries(sym)
                    if all(x in inside for x in args) and v in inside}
    consts = {sym: pos[M.const(sym)] for sym in M.signature.constants}
    return Structure(M.signature, len(elements), rels, fns, consts)


def oracle_induced_qftp_equal(M1: Structure, t1, M2: Structure, t2) -> bool:
    """Tuple-local diagram comparison: the positional map must be a
    well-defined bijection of entry sets preserving atoms, function values
    inside the entry sets (escape counts as undefined), and constants."""
    if M1.signature != M2.signature or len(t1) != len(t2):
        return False
    n = len(t1)
    for i in range(n):
        for j in range(n):
            if (t1[i] == t1[j]) != (t2[i] == t2[j]):
                return False
    s1, s2 = set(t1), set(t2)
    for sym, ar in M1.signature.relations:
        for ptup in itertools.product(range(n), repeat=ar):
            a1 = M1.holds(sym, tuple(t1[p] for p in ptup))
            a2 = M2.holds(sym, tuple(t2[p] for p in ptup))
            if a1 != a2:
                return False
    mapping = {t1[i]: t2[i] for i in range(n)}
    for sym, ar in M1.signature.functions:
        for ptup in itertools.product(range(n), repeat=ar):
            v1 = M1.fn_value(sym, tuple(t1[p] for p in ptup))
            v2 = M2.fn_value(sym, tuple(t2[p] for p in ptup))
            in1 = v1 if v1 in s1 else None
            in2 = v2 if v2 in s2 else None
            if (in1 is None) != (in2 is None):
                return False
            if in1 is not None and mapping[in1] != in2:
                return False
    for sym in M1.signature.constants:
        c1, c2 = M1.const(sym), M2.const(sym)
        in1 = c1 if c1 in s1 else None
        in2 = c2 if c2 in s2 else None
        if (in1 is None) != (in2 is None):
            return False
        if in1 is not None and mapping[in1] != in2:
            return False
    return True


def oracle_arrow_holds(C: Structure, B: Structure, A: Structure, r: int,
                       d: int = 1) -> bool:
    """Try every one of the r^m colorings of the A-copies in C.

    The arrow holds when each coloring leaves some B-copy whose inner
    A-copies use at most d colors.
    """
    acopies = oracle_embeddings(C, A)
    bcopies = oracle_embeddings(C, B)
    inner = oracle_embeddings(B, A)
    index = {m: i for i, m in enumerate(acopies)}
    members = [[index[tuple(bm[x] for x in am)] for am in inner]
               for bm in bcopies]
    if not bcopies:
        return False
    for colors in itertools.product(range(r), repeat=len(acopies)):
        if not any(len({colors[ci] for ci in mem}) <= d for mem in members):
            return False
    return True

"""Finite classes of structures and their combinatorial properties.

A class here is an explicit finite corpus: member structures in canonical
form, pairwise non-isomorphic, over one signature.  Classes produced by
the built-in generators are windows into infinite families, and the
checks account for that: a missing witness inside a window is
INCONCLUSIVE (the bound may be the only obstruction), while a missing
witness in a closed, explicitly given class is a FAIL.  Ramsey-property
failures are different: they are refutations by exhibited colorings, so
they are reported as FAIL in both cases, as bounded claims whose bounds
the report records.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .arrows import DEFAULT_BUDGET, FAILS, HOLDS, arrow_instance, check_instance, \
    subset_arrow_instance
from .embeddings import automorphism_group, embeds, enumerate_embeddings
from .expansions import TypeUnionRelation, define_by_type_union
from .qftypes import QfType, enumerate_qf_copies, qf_copies_within, qftp, type_digest
from .structures import Signature, Structure, canonical_certificate, canonical_form, \
    generated_substructure

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


class ClassError(ValueError):
    """Malformed class (empty, mixed signatures, bound violations)."""


@dataclass(frozen=True)
class FiniteClass:
    """Canonical members of one signature, sorted by (size, certificate).

    ``open_window`` marks corpora that stand for an infinite family (all
    generated classes do), which softens missing-witness verdicts from
    FAIL to INCONCLUSIVE.
    """

    signature: Signature
    members: tuple[Structure, ...]
    bound: int
    label: str = ""
    open_window: bool = False

    def __post_init__(self) -> None:
        if not self.members:
            raise ClassError("a class needs at least one member")
        certs = set()
        for M in self.members:
            if M.signature != self.signature:
                raise ClassError("members must share the class signature")
            if M.size > self.bound:
                raise ClassError(f"member {M.name!r} exceeds the size bound {self.bound}")
            cert = canonical_certificate(M)
            if cert in certs:
                raise ClassError(f"members must be pairwise non-isomorphic ({M.name!r})")
            certs.add(cert)

    def members_upto(self, size: int) -> tuple[Structure, ...]:
        return tuple(M for M in self.members if M.size <= size)


def finite_class(members, label: str = "", open_window: bool = False,
                 bound: int | None = None) -> FiniteClass:
    """Canonicalize, deduplicate up to isomorphism, and sort the members."""
    pool = list(members)
    if not pool:
        raise ClassError("a class needs at least one member")
    sig = pool[0].signature
    by_cert: dict = {}
    for M in pool:
        if M.signature != sig:
            raise ClassError("members must share one signature")
        by_cert.setdefault(canonical_certificate(M), M)
    canon = [canonical_form(M) for M in by_cert.values()]
    canon.sort(key=lambda M: (M.size, canonical_certificate(M)))
    top = max(M.size for M in canon)
    return FiniteClass(sig, tuple(canon), bound if bound is not None else top,
                       label, open_window)


# -- built-in generators ------------------------------------------------------

LO_SIGNATURE = Signature(relations=(("<", 2),))
GRAPH_SIGNATURE = Signature(relations=(("E", 2),))
ORDERED_GRAPH_SIGNATURE = Signature(relations=(("E", 2), ("<", 2)))
PURE_SIGNATURE = Signature()


def linear_order(n: int, name: str = "") -> Structure:
    return Structure(LO_SIGNATURE, n,
                     {"<": {(i, j) for i in range(n) for j in range(n) if i < j}},
                     name=name or f"LO_{n}")


def pure_set(n: int, name: str = "") -> Structure:
    return Structure(PURE_SIGNATURE, n, name=name or f"P_{n}")


def linear_orders(n: int) -> FiniteClass:
    """LO_1 .. LO_n: a window into the class of finite linear orders."""
    if n < 1:
        raise ClassError("generator bound must be positive")
    return FiniteClass(LO_SIGNATURE, tuple(linear_order(k) for k in range(1, n + 1)),
                       n, f"linear-orders<={n}", open_window=True)


def pure_sets(n: int) -> FiniteClass:
    if n < 1:
        raise ClassError("generator bound must be positive")
    return FiniteClass(PURE_SIGNATURE, tuple(pure_set(k) for k in range(1, n + 1)),
                       n, f"pure-sets<={n}", open_window=True)


def graphs(n: int) -> FiniteClass:
    """All simple undirected graphs up to isomorphism, sizes 1..n.

    Enumeration canonicalizes every edge set, so it is exponential in
    binom(n,2); intended for n <= 6.
    """
    if n < 1:
        raise ClassError("generator bound must be positive")
    members = []
    seen = set()
    for size in range(1, n + 1):
        vertex_pairs = list(itertools.combinations(range(size), 2))
        for bits in range(2 ** len(vertex_pairs)):
            edges = {p for i, p in enumerate(vertex_pairs) if bits >> i & 1}
            sym = {(a, b) for a, b in edges} | {(b, a) for a, b in edges}
            G = Structure(GRAPH_SIGNATURE, size, {"E": sym})
            cert = canonical_certificate(G)
            if cert in seen:
                continue
            seen.add(cert)
            members.append(canonical_form(
                Structure(GRAPH_SIGNATURE, size, {"E": sym},
                          name=f"g{size}_{len(members)}")))
    return FiniteClass(GRAPH_SIGNATURE, tuple(members), n, f"graphs<={n}",
                       open_window=True)


def ordered_graphs(n: int) -> FiniteClass:
    """Graphs carrying a linear order; rigid, so no isomorphism dedup needed."""
    if n < 1:
        raise ClassError("generator bound must be positive")
    members = []
    for size in range(1, n + 1):
        lt = {(i, j) for i in range(size) for j in range(size) if i < j}
        vertex_pairs = list(itertools.combinations(range(size), 2))
        for bits in range(2 ** len(vertex_pairs)):
            edges = {p for i, p in enumerate(vertex_pairs) if bits >> i & 1}
            sym = {(a, b) for a, b in edges} | {(b, a) for a, b in edges}
            members.append(Structure(ORDERED_GRAPH_SIGNATURE, size,
                                     {"E": sym, "<": lt},
                                     name=f"og{size}_{bits}"))
    return finite_class(members, f"ordered-graphs<={n}", open_window=True, bound=n)


GENERATORS = {
    "linear-orders": linear_orders,
    "pure-sets": pure_sets,
    "graphs": graphs,
    "ordered-graphs": ordered_graphs,
}


# -- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of one class-level property check.

    ``rows`` carry one tuple of primitives per checked configuration
    (enough to re-verify a FAIL without re-running the search); ``bounds``
    records every bound the verdict is relative to.
    """

    property: str
    verdict: str
    bounds: tuple[tuple[str, int], ...]
    rows: tuple[tuple, ...]
    notes: tuple[str, ...] = ()


# -- hereditary property ------------------------------------------------------


def hp_check(F: FiniteClass) -> PropertyReport:
    """Is every (nonempty, generated) substructure of a member a member?"""
    certs = {canonical_certificate(M) for M in F.members}
    rows = []
    missing = []
    checked = 0
    for M in F.members:
        seen_closures = set()
        for k in range(1, M.size + 1):
            for points in itertools.combinations(range(M.size), k):
                sub, closure = generated_substructure(M, points)
                if closure in seen_closures:
                    continue
                seen_closures.add(closure)
                checked += 1
                if canonical_certificate(sub) not in certs:
                    missing.append((M.name, closure, sub.size))
    verdict = PASS if not missing else FAIL
    rows = tuple(missing[:10]) if missing else (("substructures_checked", checked),)
    return PropertyReport("HP", verdict, (("members", len(F.members)),
                                          ("size_bound", F.bound)), rows)


# -- joint embedding ----------------------------------------------------------


def jep_check(F: FiniteClass) -> PropertyReport:
    """For every member pair, find one member embedding both."""
    rows = []
    unwitnessed = 0
    for i, A in enumerate(F.members):
        for B in F.members[i:]:
            witness = next((C.name for C in F.members
                            if embeds(C, A) and embeds(C, B)), None)
            rows.append((A.name, B.name, witness))
            if witness is None:
                unwitnessed += 1
    if unwitnessed == 0:
        verdict = PASS
    else:
        verdict = INCONCLUSIVE if F.open_window else FAIL
    notes = ()
    if unwitnessed and F.open_window:
        notes = ("missing witnesses may lie beyond the class bound",)
    return PropertyReport("JEP", verdict, (("members", len(F.members)),
                                           ("size_bound", F.bound)), tuple(rows), notes)


# -- amalgamation -------------------------------------------------------------


def ap_check(F: FiniteClass, config_bound: int | None = None) -> PropertyReport:
    """Amalgamate every span B <-e- A -f-> C over the class members.

    For each configuration the search looks for a member D and embeddings
    g: B -> D, h: C -> D with g after e equal to h after f; h is found by
    pinning its values on the image of f, so each g costs one constrained
    embedding search.
    """
    cap = config_bound if config_bound is not None else F.bound
    spans = 0
    failures = []
    rows = []
    small = F.members_upto(cap)
    for A in small:
        for B in small:
            emb_ab = enumerate_embeddings(B, A)
            if not emb_ab:
                continue
            for C in small:
                emb_ac = enumerate_embeddings(C, A)
                for e in emb_ab:
                    for f in emb_ac:
                        spans += 1
                        found = None
                        for D in F.members:
                            for g in enumerate_embeddings(D, B):
                                pins = {f.apply(a): g.apply(e.apply(a))
                                        for a in range(A.size)}
                                if embeds(D, C, fixed=pins):
                                    found = (D.name, g.mapping)
                                    break
                            if found:
                                break
                        if found is None:
                            failures.append((A.name, B.name, C.name,
                                             e.mapping, f.mapping))
                        elif len(rows) < 50:
                            rows.append((A.name, B.name, C.name,
                                         e.mapping, f.mapping, found[0]))
    if not failures:
        verdict = PASS
    else:
        verdict = INCONCLUSIVE if F.open_window else FAIL
        rows = failures[:10]
    notes = (f"{spans} spans checked",)
    if failures and F.open_window:
        notes += ("missing amalgams may lie beyond the class bound",)
    return PropertyReport("AP", verdict, (("config_bound", cap),
                                          ("size_bound", F.bound)), tuple(rows), notes)


# -- Ramsey properties --------------------------------------------------------


def _scan_arrow_witness(instances, budget):
    """(witness index or None, per-candidate verdicts, saw INCONCLUSIVE)."""
    verdicts = []
    for i, inst in enumerate(instances):
        res = check_instance(inst, "decide", budget=budget)
        verdicts.append(res.verdict)
        if res.verdict == HOLDS:
            return i, verdicts, False
    return None, verdicts, INCONCLUSIVE in verdicts


def erp_check(F: FiniteClass, pair_bound: int, witness_bound: int, *,
              budget: int | None = DEFAULT_BUDGET) -> PropertyReport:
    """Embedding Ramsey property over member pairs, two colors.

    Every (A, B) with A embeddable in B and |B| <= pair_bound needs some
    member C with |C| <= witness_bound where C -> (B)^A_2 is decided to
    hold.  FAIL is the bounded claim that for some pair every candidate
    was refuted outright; a budget-starved candidate downgrades the
    verdict to INCONCLUSIVE instead.
    """
    if pair_bound < min(M.size for M in F.members):
        raise ClassError("pair bound excludes every member")
    if witness_bound < pair_bound:
        raise ClassError("witness bound below pair bound leaves pairs unwitnessable")
    candidates = F.members_upto(witness_bound)
    rows = []
    saw_budget = False
    refuted_pair = None
    for B in F.members_upto(pair_bound):
        for A in F.members_upto(B.size):
            if not embeds(B, A):
                continue
            wi, verdicts, starved = _scan_arrow_witness(
                (arrow_instance(C, B, A, 2) for C in candidates), budget)
            witness = candidates[wi].name if wi is not None else None
            rows.append((A.name, B.name, witness, tuple(verdicts)))
            saw_budget = saw_budget or starved
            if witness is None and not starved and refuted_pair is None:
                refuted_pair = (A, B)
    notes = ()
    if refuted_pair is not None:
        verdict = FAIL
        A = refuted_pair[0]
        aut = len(automorphism_group(A))
        if aut > 1:
            notes = (f"|Aut({A.name})| = {aut} > 1 obstructs two-coloring",)
    elif any(r[2] is None for r in rows) or saw_budget:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    return PropertyReport("ERP", verdict, (("pair_bound", pair_bound),
                                           ("witness_bound", witness_bound)),
                          tuple(rows), notes)


def f_erp_check(F: FiniteClass, pair_bound: int, witness_bound: int, *,
                budget: int | None = DEFAULT_BUDGET) -> PropertyReport:
    """Finitary Ramsey property: A inside B range over subsets of members.

    Subset pairs are deduplicated by the type of B̄ followed by Ā (equal
    types give pointwise-transported arrow questions), and candidates are
    whole member domains: enlarging the ground set of a subset arrow
    preserves a positive answer, so full domains dominate all subsets.
    """
    if witness_bound < 1:
        raise ClassError("witness bound must be positive")
    seen: dict[QfType, tuple] = {}
    for M in F.members:
        elems = range(M.size)
        for bsize in range(0, min(pair_bound, M.size) + 1):
            for bbar in itertools.combinations(elems, bsize):
                for asize in range(0, bsize + 1):
                    for abar in itertools.combinations(bbar, asize):
                        key = qftp(M, bbar + abar)
                        if key not in seen:
                            seen[key] = (M, bbar, abar)
    candidates = F.members_upto(witness_bound)
    rows = []
    saw_budget = False
    refuted = False
    for key in sorted(seen, key=lambda t: t.sort_key()):
        M, bbar, abar = seen[key]
        a_type, b_type = qftp(M, abar), qftp(M, bbar)
        wi, verdicts, starved = _scan_arrow_witness(
            (subset_arrow_instance(C, a_type, b_type, 2) for C in candidates),
            budget)
        witness = candidates[wi].name if wi is not None else None
        rows.append((M.name, bbar, abar, witness, tuple(verdicts)))
        saw_budget = saw_budget or starved
        refuted = refuted or (witness is None and not starved)
    if refuted:
        verdict = FAIL
    elif any(r[3] is None for r in rows) or saw_budget:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    return PropertyReport("f-ERP", verdict, (("pair_bound", pair_bound),
                                             ("witness_bound", witness_bound)),
                          tuple(rows))


def rigidity_scan(F: FiniteClass) -> tuple[Structure, ...]:
    """Members with a nontrivial automorphism group."""
    return tuple(M for M in F.members if len(automorphism_group(M)) > 1)


# -- orderability -------------------------------------------------------------


@dataclass(frozen=True)
class OrderabilityResult:
    """Search outcome over union-of-binary-types order definitions.

    ORDERABLE carries the found type set (and per-member relations);
    NOT-ORDERABLE carries either a symmetric-type witness (some distinct
    pair whose type equals its own transpose can never be ordered) or the
    record of every rejected orientation choice.
    """

    verdict: str  # ORDERABLE | NOT-ORDERABLE | INCONCLUSIVE
    types: tuple[QfType, ...]
    witness: tuple | None
    tried: tuple[tuple, ...]


def orderability_search(F: FiniteClass, *,
                        max_assignments: int = 1 << 16) -> OrderabilityResult:
    """Hunt a set of binary types whose union linearly orders every member.

    Off-diagonal pair types come in transpose pairs; a valid set picks
    exactly one orientation of each (totality and antisymmetry are then
    automatic), so the search walks all orientation choices and tests
    transitivity member by member.  A realized type equal to its own
    transpose kills every candidate at once.
    """
    realizer: dict[QfType, tuple[int, tuple[int, int]]] = {}
    for mi, M in enumerate(F.members):
        for a in range(M.size):
            for b in range(M.size):
                if a != b:
                    realizer.setdefault(qftp(M, (a, b)), (mi, (a, b)))
    transpose = {}
    for t, (mi, (a, b)) in realizer.items():
        transpose[t] = qftp(F.members[mi], (b, a))
    for t in sorted(realizer, key=lambda t: t.sort_key()):
        if transpose[t] == t:
            mi, pair = realizer[t]
            return OrderabilityResult(
                "NOT-ORDERABLE", (), (F.members[mi].name, pair, type_digest(t)), ())

    classes = []
    done = set()
    for t in sorted(realizer, key=lambda t: realizer[t]):
        if t in done:
            continue
        done.add(t)
        done.add(transpose[t])
        classes.append((t, transpose[t]))  # first element tried first

    if 2 ** len(classes) > max_assignments:
        return OrderabilityResult(
            "INCONCLUSIVE", (), None,
            ((f"{len(classes)} orientation classes exceed the assignment cap",),))

    tried = []
    for choice in itertools.product((0, 1), repeat=len(classes)):
        phi = [pair[c] for pair, c in zip(classes, choice)]
        violation = None
        for M in F.members:
            rel = define_by_type_union(M, phi)
            if not rel.is_strict_linear_order:
                flags = {"irreflexive": rel.irreflexive,
                         "antisymmetric": rel.antisymmetric,
                         "transitive": rel.transitive, "total": rel.total}
                bad = sorted(k for k, v in flags.items() if not v)
                violation = (M.name, tuple(bad))
                break
        if violation is None:
            return OrderabilityResult("ORDERABLE", tuple(phi), None, tuple(tried))
        tried.append((choice, *violation))
    return OrderabilityResult("NOT-ORDERABLE", (), None, tuple(tried))


def order_every_member(F: FiniteClass, types) -> tuple[TypeUnionRelation, ...]:
    """Evaluate one type set on every member (certificate re-verification)."""
    return tuple(define_by_type_union(M, types) for M in F.members)


# -- elf minimization ---------------------------------------------------------


def elf_minimize(B: Structure, abar) -> tuple[int, ...]:
    """Smallest point set of B carrying every qf-copy of ā.

    The union of the copy supports: dropping any of its points loses the
    copy that contributed it, so the union is inclusion-minimal with
    qf_copies_within equal to the full copy list (which is re-asserted).
    """
    copies = enumerate_qf_copies(B, abar)
    support = sorted({x for c in copies for x in c})
    assert qf_copies_within(B, tuple(abar), support) == copies
    return tuple(support)

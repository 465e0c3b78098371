"""Partition arrows between finite structures.

The arrow C -> (B)^A_r says: however the copies of A in C are colored
with r colors, some copy of B in C has all of its inner A-copies the same
color.  Deciding it at finite scale is a complete backtracking search for
a *bad* coloring (one with no monochromatic B-copy); the search
generalizes to degree caps d (bad now means every B-copy shows more than
d distinct colors), which is what Ramsey-degree probing and joint arrows
need.

Copies come in two flavors sharing one engine: embedding copies
(binom(C, A) as injective structure maps) and subset copies (tuples in a
host realizing a fixed quantifier-free type).  All results carry enough
state to re-verify certificates without re-running any search.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .embeddings import Embedding, automorphism_group, enumerate_embeddings, first_embedding
from .formulas import eval_term, term_variables
from .qftypes import QfType, copies_of_type, qftp
from .structures import Structure, generated_substructure, substructure_closure

HOLDS = "HOLDS"
FAILS = "FAILS"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_BUDGET = 10_000_000
DEFAULT_SAMPLES = 200


class ArrowError(ValueError):
    """Ill-posed arrow query (bad mode, bad color count, bad coloring)."""


class TermColoringError(ValueError):
    """A term-iteration precondition failed; the message says which."""


# -- colorings ---------------------------------------------------------------


@dataclass(frozen=True)
class Coloring:
    """A total assignment of colors in {0..r-1} to a list of copy keys.

    Keys are mapping tuples (embedding copies) or element tuples (subset
    copies); both are plain integer tuples.
    """

    r: int
    assignments: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ArrowError("number of colors must be positive")
        seen = {}
        for key, c in self.assignments:
            if not 0 <= c < self.r:
                raise ArrowError(f"color {c} out of range for r={self.r}")
            if key in seen:
                raise ArrowError(f"copy {key} colored twice")
            seen[key] = c
        object.__setattr__(self, "_map", seen)

    def color_of(self, key: tuple[int, ...]) -> int:
        try:
            return self._map[key]  # type: ignore[attr-defined]
        except KeyError:
            raise ArrowError(f"coloring is not defined on copy {key}") from None

    def keys(self) -> tuple[tuple[int, ...], ...]:
        return tuple(key for key, _ in self.assignments)

    def __len__(self) -> int:
        return len(self.assignments)


# -- instances ---------------------------------------------------------------


@dataclass(frozen=True)
class ArrowInstance:
    """The combinatorial core of one arrow query.

    ``members[j]`` lists indices into ``copy_keys`` of the A-copies lying
    inside the j-th B-copy.  Once built, everything downstream is pure
    hypergraph coloring; ``kind`` only records where the keys came from.
    """

    kind: str  # "embedding" | "subset"
    r: int
    copy_keys: tuple[tuple[int, ...], ...]
    bcopy_keys: tuple[tuple[int, ...], ...]
    members: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ArrowError("number of colors must be positive")
        if len(self.members) != len(self.bcopy_keys):
            raise ArrowError("one member list per B-copy required")


def arrow_instance(C: Structure, B: Structure, A: Structure, r: int) -> ArrowInstance:
    """Embedding-copy instance: copies are binom(C,A), B-copies binom(C,B).

    The members of a B-copy e are the compositions e after f over
    f in binom(B,A); composition of embeddings is an embedding, so every
    member is an existing copy key.
    """
    acopies = enumerate_embeddings(C, A)
    bcopies = enumerate_embeddings(C, B)
    inner = enumerate_embeddings(B, A)
    index = {e.mapping: i for i, e in enumerate(acopies)}
    members = tuple(tuple(sorted(index[e.compose(f).mapping] for f in inner))
                    for e in bcopies)
    return ArrowInstance("embedding", r,
                         tuple(e.mapping for e in acopies),
                         tuple(e.mapping for e in bcopies), members)


def subset_arrow_instance(host: Structure, a_type: QfType, b_type: QfType,
                          r: int, ground=None) -> ArrowInstance:
    """Subset-copy instance: copies are tuples of ``host`` realizing a type.

    Types are evaluated relative to the ambient host even when ``ground``
    restricts which elements copies may use.  The inner copies of a B-copy
    are the A-copies supported inside its point set; tuples of equal type
    support equally many, which the construction asserts.
    """
    acopies = copies_of_type(host, a_type, ground)
    bcopies = copies_of_type(host, b_type, ground)
    members = []
    for bt in bcopies:
        inside = set(bt)
        members.append(tuple(i for i, t in enumerate(acopies)
                             if all(x in inside for x in t)))
    counts = {len(m) for m in members}
    assert len(counts) <= 1, "inner copy count must not depend on the B-copy"
    return ArrowInstance("subset", r, tuple(acopies), tuple(bcopies), tuple(members))


# -- the bad-coloring search -------------------------------------------------


def _search_bad_coloring(members, ncopies: int, r: int, d: int, budget):
    """Complete DFS for a coloring where every B-copy shows > d colors.

    Returns ``(colors or None, stats, exhausted)``.  ``exhausted`` is True
    only when the whole space was covered, so ``None, stats, True`` is a
    proof that no bad coloring exists.  Symmetry over color names is
    broken by first-use order (a fresh color may only be one past the
    largest color used so far), which is sound: badness is invariant
    under renaming colors.
    """
    stats = {"nodes": 0, "prunes": 0, "early_exit": 0}
    nb = len(members)
    if nb == 0:
        # no B-copies at all: every coloring is vacuously bad
        return [0] * ncopies, stats, False
    totals = [len(m) for m in members]
    if r <= d or min(totals) <= d:
        # some B-copy can never show more than d colors
        return None, stats, True

    copy_to_b: list[list[int]] = [[] for _ in range(ncopies)]
    for bi, mem in enumerate(members):
        for ci in mem:
            copy_to_b[ci].append(bi)

    counts = [[0] * r for _ in range(nb)]
    assigned = [0] * nb
    distinct = [0] * nb
    colors = [-1] * ncopies
    safe = 0  # B-copies already past d distinct colors

    def feasible(ci: int, c: int) -> bool:
        for bi in copy_to_b[ci]:
            if assigned[bi] + 1 == totals[bi]:
                extra = 1 if counts[bi][c] == 0 else 0
                if distinct[bi] + extra <= d:
                    return False
        return True

    def do_assign(ci: int, c: int) -> None:
        nonlocal safe
        colors[ci] = c
        for bi in copy_to_b[ci]:
            if counts[bi][c] == 0:
                distinct[bi] += 1
                if distinct[bi] == d + 1:
                    safe += 1
            counts[bi][c] += 1
            assigned[bi] += 1

    def undo_assign(ci: int, c: int) -> None:
        nonlocal safe
        colors[ci] = -1
        for bi in copy_to_b[ci]:
            counts[bi][c] -= 1
            assigned[bi] -= 1
            if counts[bi][c] == 0:
                if distinct[bi] == d + 1:
                    safe -= 1
                distinct[bi] -= 1

    trail = [-1] * ncopies
    next_try = [0] * (ncopies + 1)
    saved_max = [-1] * (ncopies + 1)
    depth = 0
    while True:
        if depth == ncopies:
            return list(colors), stats, False
        advanced = False
        cap = min(r - 1, saved_max[depth] + 1)
        c = next_try[depth]
        while c <= cap:
            if feasible(depth, c):
                do_assign(depth, c)
                stats["nodes"] += 1
                if budget is not None and stats["nodes"] > budget:
                    undo_assign(depth, c)
                    return None, stats, False
                trail[depth] = c
                next_try[depth] = c + 1
                if safe == nb:
                    # every B-copy already refuted; any completion is bad
                    stats["early_exit"] += 1
                    out = [x if x >= 0 else 0 for x in colors]
                    return out, stats, False
                depth += 1
                next_try[depth] = 0
                saved_max[depth] = max(saved_max[depth - 1], c)
                advanced = True
                break
            stats["prunes"] += 1
            c += 1
        if advanced:
            continue
        depth -= 1
        if depth < 0:
            return None, stats, True
        undo_assign(depth, trail[depth])


def _sample_bad_coloring(members, ncopies: int, r: int, d: int,
                         seed: int, samples: int):
    """Random colorings; returns (first bad coloring or None, stats)."""
    rng = random.Random(seed)
    stats = {"samples": samples, "witnessed": 0, "bad_found": 0}
    first_bad = None
    for _ in range(samples):
        colors = [rng.randrange(r) for _ in range(ncopies)]
        good = None
        for bi, mem in enumerate(members):
            seen = set()
            for ci in mem:
                seen.add(colors[ci])
                if len(seen) > d:
                    break
            if len(seen) <= d:
                good = bi
                break
        if good is None:
            stats["bad_found"] += 1
            if first_bad is None:
                first_bad = colors
        else:
            stats["witnessed"] += 1
    return first_bad, stats


def coloring_refutes(instance: ArrowInstance, coloring: Coloring, d: int = 1) -> bool:
    """Independent certificate check: every B-copy shows more than d colors.

    Walks the instance from scratch; shares nothing with the search.
    """
    if coloring.r != instance.r:
        return False
    if set(coloring.keys()) != set(instance.copy_keys):
        return False
    by_key = {key: c for key, c in coloring.assignments}
    per_copy = [by_key[key] for key in instance.copy_keys]
    for mem in instance.members:
        if len({per_copy[ci] for ci in mem}) <= d:
            return False
    return True


# -- results -----------------------------------------------------------------


@dataclass(frozen=True)
class ArrowResult:
    verdict: str
    mode: str
    d: int
    seed: int
    budget: int | None
    stats: tuple[tuple[str, int], ...]
    coloring: Coloring | None
    instance: ArrowInstance

    @property
    def r(self) -> int:
        return self.instance.r

    def stat(self, key: str) -> int:
        return dict(self.stats).get(key, 0)


def _colors_to_coloring(instance: ArrowInstance, colors) -> Coloring:
    return Coloring(instance.r, tuple(zip(instance.copy_keys, colors)))


def check_instance(instance: ArrowInstance, mode: str = "decide", *, d: int = 1,
                   seed: int = 0, budget: int | None = DEFAULT_BUDGET,
                   samples: int = DEFAULT_SAMPLES) -> ArrowResult:
    """Run one instance in decide, refute, or sample mode.

    decide: complete search; HOLDS means exhaustion proved no bad coloring.
    refute: sampling first, then the budgeted search; FAILS on any bad
    coloring, HOLDS if the search happens to exhaust, else INCONCLUSIVE.
    sample: sampling only; never HOLDS.

    Every FAILS result is re-verified through :func:`coloring_refutes`
    before being returned.
    """
    if mode not in ("decide", "refute", "sample"):
        raise ArrowError(f"unknown mode {mode!r}")
    if d < 1:
        raise ArrowError("degree cap must be positive")
    ncopies = len(instance.copy_keys)

    def fails(colors, stats) -> ArrowResult:
        coloring = _colors_to_coloring(instance, colors)
        if not coloring_refutes(instance, coloring, d):
            raise AssertionError("search produced a coloring that does not re-verify")
        return ArrowResult(FAILS, mode, d, seed, budget,
                           tuple(sorted(stats.items())), coloring, instance)

    if mode == "sample":
        colors, stats = _sample_bad_coloring(instance.members, ncopies,
                                             instance.r, d, seed, samples)
        if colors is not None:
            return fails(colors, stats)
        return ArrowResult(INCONCLUSIVE, mode, d, seed, budget,
                           tuple(sorted(stats.items())), None, instance)

    stats: dict[str, int] = {}
    if mode == "refute":
        colors, sstats = _sample_bad_coloring(instance.members, ncopies,
                                              instance.r, d, seed, samples)
        stats.update(sstats)
        if colors is not None:
            return fails(colors, stats)

    colors, dstats, exhausted = _search_bad_coloring(
        instance.members, ncopies, instance.r, d, budget)
    stats.update(dstats)
    if colors is not None:
        return fails(colors, stats)
    verdict = HOLDS if exhausted else INCONCLUSIVE
    return ArrowResult(verdict, mode, d, seed, budget,
                       tuple(sorted(stats.items())), None, instance)


def arrow_check(C: Structure, B: Structure, A: Structure, r: int,
                mode: str = "decide", *, seed: int = 0,
                budget: int | None = DEFAULT_BUDGET,
                samples: int = DEFAULT_SAMPLES) -> ArrowResult:
    """Decide / refute / sample the arrow C -> (B)^A_r over embedding copies."""
    if r < 1:
        raise ArrowError("number of colors must be positive")
    instance = arrow_instance(C, B, A, r)
    return check_instance(instance, mode, seed=seed, budget=budget, samples=samples)


def find_monochromatic_copy(C: Structure, B: Structure, A: Structure,
                            coloring: Coloring) -> Embedding | None:
    """First B-copy whose inner A-copies all share one color, or None.

    The coloring must be total on binom(C, A); a B-copy with no inner
    A-copies counts as (vacuously) monochromatic.
    """
    instance = arrow_instance(C, B, A, coloring.r)
    if set(coloring.keys()) != set(instance.copy_keys):
        raise ArrowError("coloring keys do not match binom(C, A)")
    per_copy = [coloring.color_of(key) for key in instance.copy_keys]
    for bkey, mem in zip(instance.bcopy_keys, instance.members):
        if len({per_copy[ci] for ci in mem}) <= 1:
            return Embedding(B, C, bkey)
    return None


# -- Ramsey degrees ----------------------------------------------------------


@dataclass(frozen=True)
class DegreeBounds:
    """Outcome of probing upper witnesses for the Ramsey degree of A.

    ``verdict`` is WITNESS (some candidate C has the <= d image property
    for every probed r), IMPOSSIBLE (d is below the automorphism lower
    bound, so no C can exist), or INCONCLUSIVE.  ``checked`` records one
    (candidate name, size, per-r verdicts) row per scanned candidate.
    """

    lower: int
    d: int
    r_cap: int
    verdict: str
    witness: Structure | None
    checked: tuple[tuple[str, int, tuple[tuple[int, str], ...]], ...]

    def __post_init__(self) -> None:
        if self.verdict == "WITNESS":
            assert self.lower <= self.d, "witnessed degree below the lower bound"


def ramsey_degree_lower(A: Structure) -> int:
    """|Aut(A)|: colors distinguishing re-enumerations of one copy survive."""
    return len(automorphism_group(A))


def ramsey_degree_upper_probe(A: Structure, B: Structure, candidates,
                              d: int, *, r_cap: int = 3,
                              budget: int | None = DEFAULT_BUDGET) -> DegreeBounds:
    """Scan candidates for C where every r-coloring (r <= r_cap) leaves some
    B-copy with at most d colors on its inner A-copies.

    Candidates are tried in the order supplied (generators should yield by
    increasing size).  When d is below |Aut(A)| no witness can exist and
    the scan is skipped.  Colors r <= d hold trivially and are not probed.
    """
    if d < 1:
        raise ArrowError("degree cap must be positive")
    if first_embedding(B, A) is None:
        raise ArrowError("A must embed in B")
    lower = ramsey_degree_lower(A)
    if d < lower:
        return DegreeBounds(lower, d, r_cap, "IMPOSSIBLE", None, ())

    checked = []
    for C in candidates:
        name = C.name or f"size{C.size}"
        per_r = []
        all_hold = True
        inconclusive = False
        for r in range(d + 1, r_cap + 1):
            instance = arrow_instance(C, B, A, r)
            colors, _, exhausted = _search_bad_coloring(
                instance.members, len(instance.copy_keys), r, d, budget)
            if colors is not None:
                per_r.append((r, FAILS))
                all_hold = False
                break
            if not exhausted:
                per_r.append((r, INCONCLUSIVE))
                all_hold = False
                inconclusive = True
                break
            per_r.append((r, HOLDS))
        checked.append((name, C.size, tuple(per_r)))
        if all_hold:
            return DegreeBounds(lower, d, r_cap, "WITNESS", C, tuple(checked))
        if inconclusive:
            break
    return DegreeBounds(lower, d, r_cap, "INCONCLUSIVE", None, tuple(checked))


# -- joint arrows ------------------------------------------------------------


@dataclass(frozen=True)
class JointInstance:
    """One B-copy list shared by several pattern copy lists."""

    rs: tuple[int, ...]
    ds: tuple[int, ...]
    bcopy_keys: tuple[tuple[int, ...], ...]
    pattern_copies: tuple[tuple[tuple[int, ...], ...], ...]
    pattern_members: tuple[tuple[tuple[int, ...], ...], ...]


@dataclass(frozen=True)
class JointArrowResult:
    verdict: str
    mode: str
    seed: int
    stats: tuple[tuple[str, int], ...]
    witness_key: tuple[int, ...] | None
    colorings: tuple[Coloring, ...] | None
    instance: JointInstance


def joint_instance(C: Structure, B: Structure, patterns, rs, ds) -> JointInstance:
    bcopies = enumerate_embeddings(C, B)
    pattern_copies = []
    pattern_members = []
    for A in patterns:
        if first_embedding(B, A) is None:
            raise ArrowError("every pattern must embed in B")
        acopies = enumerate_embeddings(C, A)
        inner = enumerate_embeddings(B, A)
        index = {e.mapping: i for i, e in enumerate(acopies)}
        pattern_copies.append(tuple(e.mapping for e in acopies))
        pattern_members.append(tuple(
            tuple(sorted(index[e.compose(f).mapping] for f in inner))
            for e in bcopies))
    return JointInstance(tuple(rs), tuple(ds),
                         tuple(e.mapping for e in bcopies),
                         tuple(pattern_copies), tuple(pattern_members))


def _joint_good_bcopy(instance: JointInstance, per_pattern_colors) -> int | None:
    """Index of the first B-copy within every pattern's degree cap, or None."""
    np = len(instance.rs)
    for bi in range(len(instance.bcopy_keys)):
        ok = True
        for p in range(np):
            seen = set()
            cap = instance.ds[p]
            for ci in instance.pattern_members[p][bi]:
                seen.add(per_pattern_colors[p][ci])
                if len(seen) > cap:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return bi
    return None


def joint_arrow_check(C: Structure, B: Structure, patterns, rs=None, ds=None,
                      mode: str = "sample", *, seed: int = 0,
                      samples: int = 500,
                      budget: int | None = DEFAULT_BUDGET) -> JointArrowResult:
    """Simultaneous arrows: seek one B-copy within every pattern's cap.

    sample: random coloring tuples; FAILS on the first tuple leaving no
    B-copy good for all patterns at once, else INCONCLUSIVE.
    refute: additionally runs the per-pattern complete search first (a
    single pattern coloring past its cap on every B-copy refutes the joint
    statement on its own); with one pattern this collapses to the plain
    check, so exhaustion there upgrades to HOLDS.
    """
    patterns = list(patterns)
    rs = [2] * len(patterns) if rs is None else list(rs)
    ds = [1] * len(patterns) if ds is None else list(ds)
    if not (len(patterns) == len(rs) == len(ds)):
        raise ArrowError("patterns, colors, and caps must have equal length")
    if any(r < 1 for r in rs) or any(d < 1 for d in ds):
        raise ArrowError("colors and caps must be positive")
    if mode not in ("refute", "sample"):
        raise ArrowError(f"unknown joint mode {mode!r}")

    instance = joint_instance(C, B, patterns, rs, ds)
    nb = len(instance.bcopy_keys)
    stats: dict[str, int] = {}

    def fails(per_pattern_colors) -> JointArrowResult:
        colorings = tuple(
            Coloring(rs[p], tuple(zip(instance.pattern_copies[p],
                                      per_pattern_colors[p])))
            for p in range(len(patterns)))
        assert _joint_good_bcopy(instance, per_pattern_colors) is None
        return JointArrowResult(FAILS, mode, seed, tuple(sorted(stats.items())),
                                None, colorings, instance)

    if nb == 0:
        return fails([[0] * len(pc) for pc in instance.pattern_copies])

    if mode == "refute":
        exhausted_all = True
        for p in range(len(patterns)):
            colors, dstats, exhausted = _search_bad_coloring(
                instance.pattern_members[p], len(instance.pattern_copies[p]),
                rs[p], ds[p], budget)
            stats[f"nodes_{p}"] = dstats["nodes"]
            if colors is not None:
                # this pattern alone breaks every B-copy; pad the others
                tuple_colors = [[0] * len(pc) for pc in instance.pattern_copies]
                tuple_colors[p] = colors
                return fails(tuple_colors)
            exhausted_all = exhausted_all and exhausted
        if exhausted_all and len(patterns) == 1:
            return JointArrowResult(HOLDS, mode, seed, tuple(sorted(stats.items())),
                                    None, None, instance)

    rng = random.Random(seed)
    stats["samples"] = samples
    stats["witnessed"] = 0
    first_witness = None
    for _ in range(samples):
        per_pattern = [[rng.randrange(rs[p]) for _ in instance.pattern_copies[p]]
                       for p in range(len(patterns))]
        good = _joint_good_bcopy(instance, per_pattern)
        if good is None:
            return fails(per_pattern)
        stats["witnessed"] += 1
        if first_witness is None:
            first_witness = instance.bcopy_keys[good]
    return JointArrowResult(INCONCLUSIVE, mode, seed, tuple(sorted(stats.items())),
                            first_witness, None, instance)


@dataclass(frozen=True)
class JointWitnessStage:
    pattern_index: int
    target_name: str
    witness_name: str | None
    scanned: tuple[tuple[str, str], ...]  # (candidate name, verdict)


@dataclass(frozen=True)
class JointWitnessResult:
    verdict: str  # "WITNESS" | "INCONCLUSIVE"
    witness: Structure | None
    stages: tuple[JointWitnessStage, ...]


def build_joint_witness(candidates, B: Structure, patterns, rs=None, *,
                        budget: int | None = DEFAULT_BUDGET) -> JointWitnessResult:
    """Compose single-arrow witnesses into a joint one, one pattern at a time.

    Stage k replaces the current target T by the first candidate C (in
    supply order, so generators should yield by increasing size) with
    C -> (T)^{A}_r decided to hold, starting from T = B.  Patterns are
    consumed from the last to the first, which keeps the composed witness
    small when later patterns are the larger ones.  With no patterns the
    target itself is the witness.
    """
    patterns = list(patterns)
    rs = [2] * len(patterns) if rs is None else list(rs)
    if len(rs) != len(patterns):
        raise ArrowError("one color count per pattern required")
    pool = list(candidates)
    names = [C.name or f"candidate{i}" for i, C in enumerate(pool)]

    current = B
    stages = []
    for p in range(len(patterns) - 1, -1, -1):
        A, r = patterns[p], rs[p]
        scanned = []
        found = None
        for C, name in zip(pool, names):
            res = check_instance(arrow_instance(C, current, A, r),
                                 "decide", budget=budget)
            scanned.append((name, res.verdict))
            if res.verdict == HOLDS:
                found = C
                break
        stages.append(JointWitnessStage(
            p, current.name or f"size{current.size}",
            found.name if found is not None else None, tuple(scanned)))
        if found is None:
            return JointWitnessResult("INCONCLUSIVE", None, tuple(stages))
        current = found
    return JointWitnessResult("WITNESS", current, tuple(stages))


# -- explicit colorings from term iteration ----------------------------------


def _apply_terms(M: Structure, terms, point: tuple[int, ...]):
    env = {i: v for i, v in enumerate(point)}
    out = []
    for t in terms:
        v = eval_term(M, t, env)
        if v is None:
            return None
        out.append(v)
    return tuple(out)


def term_iteration_coloring(M: Structure, bbar, term) -> Coloring:
    """2-coloring of the copies of b̄ by parity along the term orbit.

    ``term`` is one term (width-1 tuples) or one term per coordinate.  The
    step map u |-> t(u) must move b̄ to a distinct tuple of the same local
    diagram type; across all copies it must be acyclic and injective where
    defined (these are checked, not assumed).  Copies are taken in the
    tuple-local diagram sense, so the equations t makes between a tuple
    and its successor are part of the type; every copy of b̄ followed by
    t(b̄) is then a consecutive orbit pair and gets both parities.
    """
    bbar = tuple(int(x) for x in bbar)
    if not bbar:
        raise TermColoringError("the base tuple must be nonempty")
    terms = list(term) if isinstance(term, (list, tuple)) else [term]
    if len(terms) != len(bbar):
        raise TermColoringError(
            f"{len(bbar)} coordinates need {len(bbar)} terms, got {len(terms)}")
    for t in terms:
        bad = [v for v in term_variables(t) if v >= len(bbar)]
        if bad:
            raise TermColoringError(f"term uses unbound variable x{bad[0]}")

    from .qftypes import induced_type  # local: the only type notion used here

    tb = _apply_terms(M, terms, bbar)
    if tb is None:
        raise TermColoringError("t(b̄) is undefined")
    if tb == bbar:
        raise TermColoringError("t(b̄) must differ from b̄")
    base_type = induced_type(M, bbar)
    if induced_type(M, tb) != base_type:
        raise TermColoringError("b̄ and t(b̄) have different local diagram types")

    width = len(bbar)
    copies = [p for p in itertools.product(range(M.size), repeat=width)
              if induced_type(M, p) == base_type]
    copy_set = set(copies)

    succ: dict[tuple[int, ...], tuple[int, ...]] = {}
    pred: dict[tuple[int, ...], tuple[int, ...]] = {}
    for u in copies:
        v = _apply_terms(M, terms, u)
        if v is None or v not in copy_set:
            continue
        succ[u] = v
        if v in pred:
            raise TermColoringError(
                f"t is not injective on the copies: {pred[v]} and {u} both step to {v}")
        pred[v] = u

    parity: dict[tuple[int, ...], int] = {}
    for u in copies:
        if u in pred:
            continue
        n, node = 0, u
        while True:
            parity[node] = n % 2
            nxt = succ.get(node)
            if nxt is None:
                break
            n += 1
            node = nxt
    if len(parity) != len(copies):
        raise TermColoringError("the term orbit is periodic within the copies")

    coloring = Coloring(2, tuple((u, parity[u]) for u in copies))

    # the guarantee behind the construction: every copy of b̄ followed by
    # t(b̄) straddles one orbit step, hence sees both colors
    pair_type = induced_type(M, bbar + tb)
    for q in itertools.product(range(M.size), repeat=2 * width):
        if induced_type(M, q) != pair_type:
            continue
        head, tail = q[:width], q[width:]
        if coloring.color_of(head) == coloring.color_of(tail):
            raise TermColoringError(
                f"monochromatic concatenated copy {q}: the term equations do not "
                "pin the successor (composite terms can leave the point set)")
    return coloring


# -- promotion of point-set witnesses to generated targets -------------------


@dataclass(frozen=True)
class PromotionResult:
    structure: Structure
    precheck: ArrowResult
    recheck: ArrowResult


def promote_arrow_witness(C: Structure, A: Structure, b_prime, B: Structure, *,
                          seed: int = 0, budget: int | None = DEFAULT_BUDGET,
                          samples: int = DEFAULT_SAMPLES) -> PromotionResult:
    """Carry C -> (B′)^A_2 over to the structure B′ generates.

    ``b_prime`` is a point set of B that generates it and supports every
    A-copy of B.  Both facts are re-verified, as is the point-set arrow
    itself (decide mode); the promoted arrow over the full B is then
    re-checked in refute mode.  Copies are subset copies throughout.
    """
    bp = tuple(sorted(set(int(x) for x in b_prime)))
    if substructure_closure(B, bp) != tuple(range(B.size)):
        raise ArrowError("the point set does not generate B")
    a_type = qftp(A, tuple(range(A.size)))
    if a_type.signature != B.signature:
        raise ArrowError("A and B signatures differ")
    inside = set(bp)
    escaped = [e.mapping for e in enumerate_embeddings(B, A)
               if not all(x in inside for x in e.mapping)]
    if escaped:
        raise ArrowError(f"A-copies of B escape the point set: {escaped[:3]}")

    bp_type = qftp(B, bp)
    precheck = check_instance(subset_arrow_instance(C, a_type, bp_type, 2),
                              "decide", seed=seed, budget=budget, samples=samples)
    if precheck.verdict != HOLDS:
        raise ArrowError(f"point-set arrow not verified: {precheck.verdict}")

    promoted, _ = generated_substructure(C, range(C.size))
    assert promoted.size == C.size  # finite structures are already closed
    b_type = qftp(B, tuple(range(B.size)))
    recheck = check_instance(subset_arrow_instance(promoted, a_type, b_type, 2),
                             "refute", seed=seed, budget=budget, samples=samples)
    if recheck.verdict == FAILS:
        raise ArrowError("promoted arrow refuted; promotion preconditions understate")
    return PromotionResult(promoted, precheck, recheck)


# -- external checking -------------------------------------------------------


def render_cnf(instance: ArrowInstance) -> str:
    """DIMACS encoding whose satisfying assignments are the bad colorings.

    Variable ci*r + c + 1 says copy ci has color c; exactly-one clauses
    per copy, plus one clause per (B-copy, color) forbidding that B-copy
    from being monochromatic in that color.  Satisfiable exactly when the
    arrow FAILS.
    """
    r = instance.r
    ncopies = len(instance.copy_keys)

    def var(ci: int, c: int) -> int:
        return ci * r + c + 1

    clauses: list[list[int]] = []
    for ci in range(ncopies):
        clauses.append([var(ci, c) for c in range(r)])
        for c1 in range(r):
            for c2 in range(c1 + 1, r):
                clauses.append([-var(ci, c1), -var(ci, c2)])
    for mem in instance.members:
        for c in range(r):
            clauses.append([-var(ci, c) for ci in mem])

    lines = [f"c arrow instance kind={instance.kind} r={r} "
             f"copies={ncopies} bcopies={len(instance.bcopy_keys)}",
             "c variable ci*r + c + 1 <-> copy ci gets color c"]
    for ci, key in enumerate(instance.copy_keys):
        lines.append(f"c copy {ci} = {','.join(map(str, key))}")
    lines.append(f"p cnf {ncopies * r} {len(clauses)}")
    for cl in clauses:
        lines.append(" ".join(map(str, cl)) + " 0")
    return "\n".join(lines) + "\n"

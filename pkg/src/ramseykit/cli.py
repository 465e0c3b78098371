"""Command-line front end: file parsing, dispatch, and replayable artifacts.

Every run (except ``verify``) writes a plain-text certificate embedding its
inputs, configuration, seed, and verdict data; ``verify`` replays one with
no further search.  Exit codes: 0 the property holds or a witness was
found, 1 refuted with certificate, 2 inconclusive within budget, 3 input
error.  The node budget defaults to 10^7 and can be preset through the
``RAMSEYKIT_BUDGET`` environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from .arrows import (ArrowError, HOLDS, FAILS, INCONCLUSIVE, check_instance,
                     arrow_instance, joint_arrow_check,
                     ramsey_degree_upper_probe, render_cnf,
                     subset_arrow_instance)
from .certificates import (Certificate, CertificateError, coloring_lines,
                           encode_key, decode_key, parse_certificate,
                           replay_certificate, write_certificate)
from .classes import (ClassError, GENERATORS, ap_check, elf_minimize,
                      erp_check, f_erp_check, hp_check, jep_check,
                      orderability_search, rigidity_scan)
from .expansions import isolator, qf_type_morleyisation
from .fileformat import (ParseError, parse_class_file, parse_sequence_file,
                         parse_structure_file, serialize_class,
                         serialize_structure)
from .formulas import FormulaError
from .indiscernibles import (DEFAULT_ARITY_CAP, IndiscernibilityError,
                             extract_indiscernible_pattern, is_indiscernible)
from .qftypes import qftp
from .structures import SignatureError, StructureError

DEFAULT_BUDGET = 10_000_000

_EXIT = {
    HOLDS: 0, "PASS": 0, "WITNESS": 0, "ORDERABLE": 0, "FOUND": 0,
    "INDISCERNIBLE": 0, "DONE": 0,
    FAILS: 1, "FAIL": 1, "NOT-ORDERABLE": 1, "NONE": 1,
    "NOT-INDISCERNIBLE": 1, "IMPOSSIBLE": 1,
    INCONCLUSIVE: 2,
}

_INPUT_ERRORS = (ParseError, StructureError, SignatureError, ArrowError,
                 ClassError, FormulaError, IndiscernibilityError,
                 CertificateError, OSError, ValueError)


@dataclass(frozen=True)
class WorkbenchConfig:
    """Everything that influences a run besides the input files."""

    budget: int
    seed: int
    mode: str = ""
    k: int | None = None
    out: str = ""

    def __post_init__(self) -> None:
        if self.budget <= 0:
            raise ArrowError("budget must be positive")

    def render(self) -> str:
        parts = [f"budget={self.budget}", f"seed={self.seed}"]
        if self.mode:
            parts.append(f"mode={self.mode}")
        if self.k is not None:
            parts.append(f"k={self.k}")
        return " ".join(parts)


def _default_budget() -> int:
    raw = os.environ.get("RAMSEYKIT_BUDGET", "")
    return int(raw) if raw else DEFAULT_BUDGET


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_structure(path: str):
    return parse_structure_file(_read(path), base_dir=os.path.dirname(path) or ".")


def _emit(cert: Certificate, out: str, echo: list[str]) -> None:
    write_certificate(cert, out)
    for line in echo:
        print(line)
    print(f"certificate: {out}")


def _stat_line(stats) -> str:
    return " ".join(f"{name}={value}" for name, value in stats)


# -- subcommand handlers -------------------------------------------------------


def _cmd_arrow(args, command: str) -> int:
    C = _read_structure(args.ground)
    B = _read_structure(args.target)
    A = _read_structure(args.pattern)
    if args.copies == "embedding":
        instance = arrow_instance(C, B, A, args.colors)
    else:
        a_type = qftp(A, tuple(range(A.size)))
        b_type = qftp(B, tuple(range(B.size)))
        instance = subset_arrow_instance(C, a_type, b_type, args.colors)
    if args.format == "cnf":
        text = render_cnf(instance)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
            print(f"cnf: {args.out}")
        else:
            sys.stdout.write(text)
        return 0

    config = WorkbenchConfig(args.budget, args.seed, mode=args.mode)
    result = check_instance(instance, args.mode, d=args.degree,
                            seed=args.seed, budget=args.budget,
                            samples=args.samples)
    payload = [f"copies {args.copies}", f"r {args.colors}", f"d {args.degree}",
               f"acopies {len(instance.copy_keys)}",
               f"bcopies {len(instance.bcopy_keys)}"]
    if result.coloring is not None:
        payload.extend(coloring_lines(result.coloring))
    cert = Certificate(
        kind="arrow", command=command, config=config.render(),
        verdict=result.verdict, stats=result.stats,
        sections=(("ground", serialize_structure(C)),
                  ("target", serialize_structure(B)),
                  ("pattern", serialize_structure(A))),
        payload=tuple(payload))
    _emit(cert, args.out or "arrow.cert",
          [f"verdict: {result.verdict}", f"stats: {_stat_line(result.stats)}"])
    return _EXIT[result.verdict]


def _cmd_joint_arrow(args, command: str) -> int:
    C = _read_structure(args.ground)
    B = _read_structure(args.target)
    patterns = [_read_structure(p) for p in args.patterns]
    rs = [int(x) for x in args.colors.split(",")]
    ds = ([int(x) for x in args.degrees.split(",")] if args.degrees
          else [1] * len(patterns))
    config = WorkbenchConfig(args.budget, args.seed, mode=args.mode)
    result = joint_arrow_check(C, B, patterns, rs, ds, args.mode,
                               seed=args.seed, samples=args.samples,
                               budget=args.budget)
    payload = [f"rs {','.join(map(str, rs))}", f"ds {','.join(map(str, ds))}",
               f"bcopies {len(result.instance.bcopy_keys)}"]
    if result.colorings is not None:
        for p, coloring in enumerate(result.colorings):
            payload.extend(coloring_lines(coloring, prefix=f"color{p}"))
    sections = [("ground", serialize_structure(C)),
                ("target", serialize_structure(B))]
    sections.extend((f"pattern{p}", serialize_structure(A))
                    for p, A in enumerate(patterns))
    cert = Certificate(
        kind="joint-arrow", command=command, config=config.render(),
        verdict=result.verdict, stats=result.stats,
        sections=tuple(sections), payload=tuple(payload))
    _emit(cert, args.out or "joint-arrow.cert",
          [f"verdict: {result.verdict}", f"stats: {_stat_line(result.stats)}"])
    return _EXIT[result.verdict]


def _cmd_degree(args, command: str) -> int:
    A = _read_structure(args.pattern)
    B = _read_structure(args.target)
    candidates = GENERATORS[args.candidates](args.upto).members
    config = WorkbenchConfig(args.budget, args.seed)
    result = ramsey_degree_upper_probe(A, B, candidates, args.degree,
                                       r_cap=args.max_colors,
                                       budget=args.budget)
    payload = [f"lower {result.lower}", f"d {result.d}",
               f"r_cap {result.r_cap}"]
    for name, size, per_r in result.checked:
        cells = " ".join(f"r={r}:{v}" for r, v in per_r)
        payload.append(f"probe {name} size={size} {cells}".rstrip())
    sections = [("pattern", serialize_structure(A)),
                ("target", serialize_structure(B))]
    if result.witness is not None:
        sections.append(("witness", serialize_structure(result.witness)))
    cert = Certificate(
        kind="degree", command=command, config=config.render(),
        verdict=result.verdict, sections=tuple(sections),
        payload=tuple(payload))
    echo = [f"verdict: {result.verdict}",
            f"lower bound (automorphisms): {result.lower}"]
    if result.witness is not None:
        echo.append(f"witness: {result.witness.name or result.witness.size}")
    _emit(cert, args.out or "degree.cert", echo)
    return _EXIT[result.verdict]


def _cmd_class_check(args, command: str) -> int:
    text = _read(args.classfile)
    F = parse_class_file(text, base_dir=os.path.dirname(args.classfile) or ".")
    config = WorkbenchConfig(args.budget, args.seed)
    witness_bound = args.witness_bound if args.witness_bound else F.bound
    reports = [
        hp_check(F),
        jep_check(F),
        ap_check(F, args.ap_bound),
        erp_check(F, args.pair_bound, witness_bound, budget=args.budget),
        f_erp_check(F, args.pair_bound, witness_bound, budget=args.budget),
    ]
    nonrigid = rigidity_scan(F)
    payload = [f"property {rep.property} {rep.verdict}" for rep in reports]
    payload.append(f"nonrigid {len(nonrigid)}")
    notes = tuple(note for rep in reports for note in rep.notes)
    verdicts = [rep.verdict for rep in reports]
    overall = ("FAIL" if "FAIL" in verdicts
               else INCONCLUSIVE if INCONCLUSIVE in verdicts else "PASS")
    cert = Certificate(
        kind="class-check", command=command, config=config.render(),
        verdict=overall, notes=notes,
        sections=(("class", serialize_class(F)),), payload=tuple(payload))
    echo = [f"{rep.property}: {rep.verdict}" for rep in reports]
    echo.append(f"members with extra automorphisms: {len(nonrigid)}")
    echo.append(f"overall: {overall}")
    _emit(cert, args.out or "class-check.cert", echo)
    return _EXIT[overall]


def _cmd_orderable(args, command: str) -> int:
    F = parse_class_file(_read(args.classfile),
                         base_dir=os.path.dirname(args.classfile) or ".")
    config = WorkbenchConfig(args.budget, args.seed)
    result = orderability_search(F, max_assignments=args.max_assignments)
    payload = [f"tried {len(result.tried)}"]
    if result.verdict == "ORDERABLE":
        for t in result.types:
            mi, pair = _find_realizer(F, t)
            payload.append(f"phi {mi} {encode_key(pair)}")
    cert = Certificate(
        kind="orderable", command=command, config=config.render(),
        verdict=result.verdict,
        sections=(("class", serialize_class(F)),), payload=tuple(payload))
    echo = [f"verdict: {result.verdict}",
            f"orientation sets tried: {len(result.tried)}"]
    if result.verdict == "ORDERABLE":
        echo.append(f"defining types: {len(result.types)}")
    _emit(cert, args.out or "orderable.cert", echo)
    return _EXIT[result.verdict]


def _find_realizer(F, t):
    for mi, M in enumerate(F.members):
        for a in range(M.size):
            for b in range(M.size):
                if a != b and qftp(M, (a, b)) == t:
                    return mi, (a, b)
    raise ClassError("orderability type has no realizer in the class")


def _cmd_expansion(args, command: str, kind: str) -> int:
    M = _read_structure(args.structfile)
    k = args.k if args.k is not None else M.size
    config = WorkbenchConfig(args.budget, args.seed, k=k)
    out = qf_type_morleyisation(M, k) if kind == "expand" else isolator(M, k)
    out_text = serialize_structure(out, name=(M.name or "M") + f"_{kind}")
    if args.out_structure:
        with open(args.out_structure, "w", encoding="utf-8") as fh:
            fh.write(out_text)
    cert = Certificate(
        kind=kind, command=command, config=config.render(), verdict="DONE",
        sections=(("input", serialize_structure(M)), ("output", out_text)),
        payload=(f"k {k}",
                 f"relations {len(out.signature.relations)}"))
    echo = [f"k: {k}", f"output relations: {len(out.signature.relations)}"]
    if args.out_structure:
        echo.append(f"structure: {args.out_structure}")
    _emit(cert, args.out or f"{kind}.cert", echo)
    return 0


def _cmd_indiscernible(args, command: str) -> int:
    I, delta = parse_sequence_file(_read(args.seqfile),
                                   base_dir=os.path.dirname(args.seqfile) or ".")
    config = WorkbenchConfig(args.budget, args.seed)
    ok, violations = is_indiscernible(I, delta, args.cap)
    verdict = "INDISCERNIBLE" if ok else "NOT-INDISCERNIBLE"
    payload = [f"cap {args.cap}"]
    payload.extend(
        f"violation {encode_key(rep)} {encode_key(tup)} {label}"
        for rep, tup, label in violations)
    cert = Certificate(
        kind="indiscernible", command=command, config=config.render(),
        verdict=verdict,
        sections=(("sequence", _read(args.seqfile)),), payload=tuple(payload))
    echo = [f"verdict: {verdict}", f"violations: {len(violations)}"]
    _emit(cert, args.out or "indiscernible.cert", echo)
    return _EXIT[verdict]


def _cmd_extract(args, command: str) -> int:
    seq_text = _read(args.seqfile)
    I, delta = parse_sequence_file(seq_text,
                                   base_dir=os.path.dirname(args.seqfile) or ".")
    N_target = _read_structure(args.patternfile)
    config = WorkbenchConfig(args.budget, args.seed)
    result = extract_indiscernible_pattern(I, N_target, delta)
    verdict = "FOUND" if result.embedding is not None else "NONE"
    payload = [f"candidates {result.candidates_checked}"]
    if result.embedding is not None:
        payload.append(f"embedding {encode_key(result.embedding.mapping)}")
    cert = Certificate(
        kind="extract", command=command, config=config.render(),
        verdict=verdict,
        sections=(("sequence", seq_text),
                  ("pattern", serialize_structure(N_target))),
        payload=tuple(payload))
    echo = [f"verdict: {verdict}",
            f"candidates checked: {result.candidates_checked}"]
    if result.embedding is not None:
        echo.append(f"index copy: {encode_key(result.embedding.mapping)}")
    _emit(cert, args.out or "extract.cert", echo)
    return _EXIT[verdict]


def _cmd_elf(args, command: str) -> int:
    B = _read_structure(args.structfile)
    abar = decode_key(args.tuple)
    config = WorkbenchConfig(args.budget, args.seed)
    ground = elf_minimize(B, abar)
    cert = Certificate(
        kind="elf", command=command, config=config.render(), verdict="DONE",
        sections=(("host", serialize_structure(B)),),
        payload=(f"tuple {encode_key(abar)}", f"ground {encode_key(ground)}"))
    _emit(cert, args.out or "elf.cert",
          [f"minimal ground: {encode_key(ground)} ({len(ground)} elements)"])
    return 0


def _cmd_generate(args, command: str) -> int:
    F = GENERATORS[args.family](args.upto)
    config = WorkbenchConfig(args.budget, args.seed)
    text = serialize_class(F, name=args.family)
    if args.out_class:
        with open(args.out_class, "w", encoding="utf-8") as fh:
            fh.write(text)
    cert = Certificate(
        kind="generate", command=command, config=config.render(),
        verdict="DONE", sections=(("class", text),),
        payload=(f"family {args.family}", f"upto {args.upto}",
                 f"members {len(F.members)}"))
    echo = [f"members: {len(F.members)}"]
    if args.out_class:
        echo.append(f"class file: {args.out_class}")
    _emit(cert, args.out or "generate.cert", echo)
    return 0


def _cmd_verify(args) -> int:
    cert = parse_certificate(_read(args.certfile))
    report = replay_certificate(cert)
    print(f"kind: {cert.kind}")
    print(f"recorded verdict: {cert.verdict}")
    for line in report.checks:
        print(f"  {line}")
    print("replay: ok" if report.ok else "replay: FAILED")
    return 0 if report.ok else 1


# -- argument parsing ----------------------------------------------------------


def _common(sub, mode_choices=None, default_mode=None) -> None:
    sub.add_argument("--budget", type=int, default=_default_budget(),
                     help="search node budget (env RAMSEYKIT_BUDGET)")
    sub.add_argument("--seed", type=int, default=0, help="random seed")
    sub.add_argument("--samples", type=int, default=200,
                     help="random colorings per sampling pass")
    sub.add_argument("--out", default="", help="certificate path")
    if mode_choices:
        sub.add_argument("--mode", choices=mode_choices, default=default_mode)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramseykit",
        description="Partition arrows, Ramsey expansions, and generalized "
                    "indiscernibles over finite structures.")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("arrow", help="decide or refute C -> (B)^A_r")
    p.add_argument("ground")
    p.add_argument("target")
    p.add_argument("pattern")
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--degree", type=int, default=1,
                   help="color count allowed per target copy")
    p.add_argument("--copies", choices=("embedding", "subset"),
                   default="embedding")
    p.add_argument("--format", choices=("text", "cnf"), default="text",
                   help="cnf: export the instance instead of solving")
    _common(p, ("decide", "refute", "sample"), "decide")

    p = subs.add_parser("joint-arrow", help="simultaneous arrows, one ground")
    p.add_argument("ground")
    p.add_argument("target")
    p.add_argument("patterns", nargs="+")
    p.add_argument("--colors", required=True,
                   help="comma-separated color counts, one per pattern")
    p.add_argument("--degrees", default="",
                   help="comma-separated caps, one per pattern")
    _common(p, ("sample", "refute"), "sample")

    p = subs.add_parser("degree", help="probe Ramsey degree witnesses")
    p.add_argument("pattern")
    p.add_argument("target")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--max-colors", type=int, default=3)
    p.add_argument("--candidates", choices=sorted(GENERATORS), required=True)
    p.add_argument("--upto", type=int, required=True)
    _common(p)

    p = subs.add_parser("class-check", help="HP / JEP / AP / Ramsey properties")
    p.add_argument("classfile")
    p.add_argument("--pair-bound", type=int, default=3)
    p.add_argument("--witness-bound", type=int, default=0,
                   help="0 means the largest member size")
    p.add_argument("--ap-bound", type=int, default=None)
    _common(p)

    p = subs.add_parser("orderable", help="search for an ordering type union")
    p.add_argument("classfile")
    p.add_argument("--max-assignments", type=int, default=1 << 16)
    _common(p)

    for kind in ("expand", "isolate"):
        p = subs.add_parser(
            kind, help=("adjoin type predicates" if kind == "expand"
                        else "replace the signature by type predicates"))
        p.add_argument("structfile")
        p.add_argument("--k", type=int, default=None,
                       help="max tuple arity (default: domain size)")
        p.add_argument("--out-structure", default="")
        _common(p)

    p = subs.add_parser("indiscernible", help="check an indexed sequence")
    p.add_argument("seqfile")
    p.add_argument("--cap", type=int, default=DEFAULT_ARITY_CAP)
    _common(p)

    p = subs.add_parser("extract", help="find an indiscernible index copy")
    p.add_argument("seqfile")
    p.add_argument("patternfile")
    _common(p)

    p = subs.add_parser("elf", help="minimal ground set for a tuple's copies")
    p.add_argument("structfile")
    p.add_argument("--tuple", required=True, help="comma-separated elements")
    _common(p)

    p = subs.add_parser("generate", help="write a built-in class window")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--out-class", default="")
    _common(p)

    p = subs.add_parser("verify", help="replay a certificate without search")
    p.add_argument("certfile")

    return parser


_HANDLERS = {
    "arrow": _cmd_arrow,
    "joint-arrow": _cmd_joint_arrow,
    "degree": _cmd_degree,
    "class-check": _cmd_class_check,
    "orderable": _cmd_orderable,
    "indiscernible": _cmd_indiscernible,
    "extract": _cmd_extract,
    "elf": _cmd_elf,
    "generate": _cmd_generate,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    command = "ramseykit " + " ".join(argv)
    try:
        if args.subcommand == "verify":
            return _cmd_verify(args)
        if args.subcommand in ("expand", "isolate"):
            return _cmd_expansion(args, command, args.subcommand)
        return _HANDLERS[args.subcommand](args, command)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Plain-text result certificates with search-free replay.

A certificate embeds its inputs, its configuration, the verdict, and the
verdict's supporting data, then closes with a digest line over everything
above it.  ``replay_certificate`` re-validates the verdict from that data
alone: refutations are checked coloring-by-coloring, witnesses are
re-verified, derivations are recomputed and compared, but the bad-coloring
search itself never runs again.  Exhaustion verdicts (HOLDS and friends)
carry no polynomial witness; replay checks their instance arithmetic and
says so rather than silently re-searching.

Rendering is deterministic: no timestamps, no absolute paths, fixed
ordering, so equal (input, config, seed) gives byte-identical files.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass, field

from . import arrows
from .arrows import ArrowError, Coloring, arrow_instance, coloring_refutes
from .classes import GENERATORS, elf_minimize, order_every_member
from .embeddings import Embedding, automorphism_group
from .expansions import isolator, qf_type_morleyisation
from .indiscernibles import (check_locally_based, is_indiscernible, reindex)
from .qftypes import qftp
from .fileformat import (parse_class_file, parse_sequence_file,
                         parse_structure_file, serialize_class)

_HEADER = "ramseykit certificate v1"


class CertificateError(ValueError):
    """Malformed, corrupted, or irreproducible certificate."""


@dataclass(frozen=True)
class Certificate:
    kind: str
    command: str
    config: str
    verdict: str
    stats: tuple[tuple[str, int], ...] = ()
    notes: tuple[str, ...] = ()
    sections: tuple[tuple[str, str], ...] = ()
    payload: tuple[str, ...] = ()

    def section(self, label: str) -> str:
        for name, text in self.sections:
            if name == label:
                return text
        raise CertificateError(f"certificate has no section {label!r}")

    def has_section(self, label: str) -> bool:
        return any(name == label for name, _ in self.sections)

    def payload_values(self, key: str) -> list[str]:
        prefix = key + " "
        return [line[len(prefix):] for line in self.payload
                if line.startswith(prefix)]

    def payload_value(self, key: str) -> str:
        values = self.payload_values(key)
        if len(values) != 1:
            raise CertificateError(f"expected exactly one payload {key!r} line")
        return values[0]


def _body_lines(cert: Certificate) -> list[str]:
    lines = [_HEADER,
             f"kind: {cert.kind}",
             f"command: {cert.command}",
             f"config: {cert.config}",
             f"verdict: {cert.verdict}"]
    lines.extend(f"stat: {name}={value}" for name, value in cert.stats)
    lines.extend(f"note: {note}" for note in cert.notes)
    for label, text in cert.sections:
        lines.append(f"begin {label}")
        lines.extend(("  " + ln).rstrip() for ln in text.rstrip("\n").split("\n"))
        lines.append(f"end {label}")
    lines.append("begin payload")
    lines.extend(("  " + ln).rstrip() for ln in cert.payload)
    lines.append("end payload")
    return lines


def render_certificate(cert: Certificate) -> str:
    body = _body_lines(cert)
    digest = hashlib.sha256(("\n".join(body) + "\n").encode("utf-8")).hexdigest()
    return "\n".join(body) + f"\ndigest: {digest}\n"


def parse_certificate(text: str) -> Certificate:
    lines = text.splitlines()
    if not lines or lines[0] != _HEADER:
        raise CertificateError("missing certificate header")
    if not lines[-1].startswith("digest: "):
        raise CertificateError("missing digest line")
    digest = lines[-1][len("digest: "):]
    body = lines[:-1]
    want = hashlib.sha256(("\n".join(body) + "\n").encode("utf-8")).hexdigest()
    if digest != want:
        raise CertificateError("digest mismatch: certificate corrupted")

    fields = {"kind": None, "command": None, "config": None, "verdict": None}
    stats: list[tuple[str, int]] = []
    notes: list[str] = []
    sections: list[tuple[str, str]] = []
    payload: tuple[str, ...] = ()
    i = 1
    while i < len(body):
        line = body[i]
        if line.startswith("begin "):
            label = line[len("begin "):]
            block = []
            i += 1
            while i < len(body) and body[i] != f"end {label}":
                if body[i] and not body[i].startswith("  "):
                    raise CertificateError(f"unindented line inside {label!r}")
                block.append(body[i][2:])
                i += 1
            if i == len(body):
                raise CertificateError(f"unterminated section {label!r}")
            if label == "payload":
                payload = tuple(block)
            else:
                sections.append((label, "\n".join(block) + "\n"))
        elif line.startswith("stat: "):
            name, _, value = line[len("stat: "):].partition("=")
            stats.append((name, int(value)))
        elif line.startswith("note: "):
            notes.append(line[len("note: "):])
        else:
            key, sep, value = line.partition(": ")
            if not sep or key not in fields:
                raise CertificateError(f"unexpected certificate line {line!r}")
            fields[key] = value
        i += 1
    missing = [k for k, v in fields.items() if v is None]
    if missing:
        raise CertificateError(f"certificate missing {missing[0]!r} line")
    return Certificate(fields["kind"], fields["command"], fields["config"],
                       fields["verdict"], tuple(stats), tuple(notes),
                       tuple(sections), payload)


def write_certificate(cert: Certificate, path: str) -> None:
    """Write-then-rename so readers never observe a torn file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cert-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(render_certificate(cert))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- payload helpers ------------------------------------------------------------


def encode_key(key: tuple[int, ...]) -> str:
    return ",".join(map(str, key)) if key else "-"


def decode_key(text: str) -> tuple[int, ...]:
    if text == "-":
        return ()
    return tuple(int(x) for x in text.split(","))


def coloring_lines(coloring: Coloring, prefix: str = "color") -> list[str]:
    return [f"{prefix} {encode_key(key)} {c}" for key, c in coloring.assignments]


def decode_coloring(r: int, lines: list[str]) -> Coloring:
    rows = []
    for entry in lines:
        key, _, c = entry.rpartition(" ")
        rows.append((decode_key(key), int(c)))
    return Coloring(r, tuple(rows))


# -- replay ----------------------------------------------------------------------


@dataclass
class ReplayReport:
    ok: bool
    verdict: str
    checks: list[str] = field(default_factory=list)

    def add(self, text: str) -> None:
        self.checks.append(text)

    def fail(self, text: str) -> None:
        self.checks.append("FAILED: " + text)
        self.ok = False


def replay_certificate(cert: Certificate) -> ReplayReport:
    """Reproduce the verdict from embedded data without re-searching.

    Raises on structural problems; returns a report whose ``ok`` means the
    verdict was reproduced (for witness verdicts) or is consistent with
    the recorded run (for exhaustion verdicts, noted explicitly).
    """
    handler = _REPLAYERS.get(cert.kind)
    if handler is None:
        raise CertificateError(f"no replay rule for kind {cert.kind!r}")
    report = ReplayReport(True, cert.verdict)
    handler(cert, report)
    return report


def _replay_arrow(cert: Certificate, report: ReplayReport) -> None:
    C = parse_structure_file(cert.section("ground"))
    B = parse_structure_file(cert.section("target"))
    A = parse_structure_file(cert.section("pattern"))
    r = int(cert.payload_value("r"))
    d = int(cert.payload_value("d"))
    copies = cert.payload_value("copies")
    if copies == "embedding":
        instance = arrow_instance(C, B, A, r)
    else:
        a_type = qftp(A, tuple(range(A.size)))
        b_type = qftp(B, tuple(range(B.size)))
        instance = arrows.subset_arrow_instance(C, a_type, b_type, r)
    report.add(f"instance rebuilt: {len(instance.copy_keys)} copies, "
               f"{len(instance.bcopy_keys)} target copies")
    if int(cert.payload_value("acopies")) != len(instance.copy_keys) or \
            int(cert.payload_value("bcopies")) != len(instance.bcopy_keys):
        report.fail("recorded copy counts do not match the inputs")
        return
    if cert.verdict == "FAILS":
        coloring = decode_coloring(r, cert.payload_values("color"))
        if coloring_refutes(instance, coloring, d):
            report.add("refuting coloring re-verified: every target copy "
                       f"shows more than {d} colors")
        else:
            report.fail("recorded coloring does not refute the arrow")
    else:
        report.add(f"{cert.verdict} records an exhaustive or budgeted search; "
                   "replay checks instance arithmetic only")


def _replay_joint(cert: Certificate, report: ReplayReport) -> None:
    C = parse_structure_file(cert.section("ground"))
    B = parse_structure_file(cert.section("target"))
    patterns = []
    k = 0
    while cert.has_section(f"pattern{k}"):
        patterns.append(parse_structure_file(cert.section(f"pattern{k}")))
        k += 1
    rs = [int(x) for x in cert.payload_value("rs").split(",")]
    ds = [int(x) for x in cert.payload_value("ds").split(",")]
    instance = arrows.joint_instance(C, B, patterns, rs, ds)
    report.add(f"joint instance rebuilt: {len(instance.bcopy_keys)} target copies")
    if cert.verdict == "FAILS":
        per_pattern = []
        for p in range(len(patterns)):
            coloring = decode_coloring(rs[p], cert.payload_values(f"color{p}"))
            per_pattern.append([coloring.color_of(key)
                                for key in instance.pattern_copies[p]])
        good = arrows._joint_good_bcopy(instance, per_pattern)
        if good is None:
            report.add("joint refutation re-verified: no target copy is "
                       "monochromatic for all patterns at once")
        else:
            report.fail(f"target copy {good} is jointly monochromatic")
    else:
        report.add(f"{cert.verdict} records a search outcome; replay checks "
                   "instance arithmetic only")


def _replay_degree(cert: Certificate, report: ReplayReport) -> None:
    A = parse_structure_file(cert.section("pattern"))
    lower = len(automorphism_group(A))
    if lower != int(cert.payload_value("lower")):
        report.fail("recorded automorphism count is wrong")
        return
    report.add(f"lower bound re-derived: |Aut| = {lower}")
    d = int(cert.payload_value("d"))
    if cert.verdict == "IMPOSSIBLE":
        if lower > d:
            report.add(f"d = {d} < {lower} reproduced as impossible")
        else:
            report.fail(f"d = {d} is not below the automorphism count")
    elif cert.verdict == "WITNESS":
        parse_structure_file(cert.section("witness"))
        report.add("witness parses; its HOLDS claims are exhaustion records")
    else:
        report.add("probe exhausted its candidate supply; consistency only")


def _replay_orderable(cert: Certificate, report: ReplayReport) -> None:
    F = parse_class_file(cert.section("class"))
    if cert.verdict == "ORDERABLE":
        types = []
        for row in cert.payload_values("phi"):
            mi, tup = row.split(" ")
            types.append(qftp(F.members[int(mi)], decode_key(tup)))
        relations = order_every_member(F, frozenset(types))
        bad = [i for i, rel in enumerate(relations)
               if not rel.is_strict_linear_order]
        if bad:
            report.fail(f"type union is not a linear order on member {bad[0]}")
        else:
            report.add(f"type union re-verified as a strict linear order on "
                       f"all {len(F.members)} members")
    else:
        report.add(f"{cert.verdict} records an exhausted orientation search; "
                   "replay checks the class parses")


def _replay_class_check(cert: Certificate, report: ReplayReport) -> None:
    F = parse_class_file(cert.section("class"))
    report.add(f"class parses: {len(F.members)} members, "
               f"{'open' if F.open_window else 'closed'} window")
    for row in cert.payload_values("property"):
        report.add("recorded: " + row)


def _replay_expand(cert: Certificate, report: ReplayReport) -> None:
    M = parse_structure_file(cert.section("input"))
    k = int(cert.payload_value("k"))
    out = parse_structure_file(cert.section("output"))
    fresh = (qf_type_morleyisation(M, k) if cert.kind == "expand"
             else isolator(M, k))
    if fresh == out:
        report.add("expansion recomputed and identical to the recorded output")
    else:
        report.fail("recomputed expansion differs from the recorded output")


def _replay_indiscernible(cert: Certificate, report: ReplayReport) -> None:
    I, delta = parse_sequence_file(cert.section("sequence"))
    cap = int(cert.payload_value("cap"))
    ok, violations = is_indiscernible(I, delta, cap)
    verdict = "INDISCERNIBLE" if ok else "NOT-INDISCERNIBLE"
    if verdict == cert.verdict:
        report.add(f"re-evaluated: {verdict} with {len(violations)} violations")
    else:
        report.fail(f"re-evaluation gives {verdict}, certificate says {cert.verdict}")


def _replay_extract(cert: Certificate, report: ReplayReport) -> None:
    I, delta = parse_sequence_file(cert.section("sequence"))
    N_target = parse_structure_file(cert.section("pattern"))
    if cert.verdict == "FOUND":
        mapping = decode_key(cert.payload_value("embedding"))
        g = Embedding(N_target, I.index, mapping)
        J = reindex(I, g)
        ok, _ = is_indiscernible(J, delta, N_target.size)
        based, _, _ = check_locally_based(J, I, delta, N_target.size)
        if ok and based:
            report.add("extraction re-verified: indiscernible and locally based")
        else:
            report.fail("recorded embedding fails re-verification")
    else:
        report.add("NONE records an exhausted candidate scan; replay checks "
                   "the inputs parse")


def _replay_elf(cert: Certificate, report: ReplayReport) -> None:
    B = parse_structure_file(cert.section("host"))
    abar = decode_key(cert.payload_value("tuple"))
    fresh = elf_minimize(B, abar)
    if fresh == decode_key(cert.payload_value("ground")):
        report.add(f"minimal ground recomputed: {len(fresh)} elements")
    else:
        report.fail("recomputed minimal ground differs")


def _replay_generate(cert: Certificate, report: ReplayReport) -> None:
    family = cert.payload_value("family")
    bound = int(cert.payload_value("upto"))
    fresh = serialize_class(GENERATORS[family](bound), name=family)
    if fresh == cert.section("class"):
        report.add(f"{family} regenerated up to {bound}: identical bytes")
    else:
        report.fail("regenerated class differs from the recorded one")


_REPLAYERS = {
    "arrow": _replay_arrow,
    "joint-arrow": _replay_joint,
    "degree": _replay_degree,
    "orderable": _replay_orderable,
    "class-check": _replay_class_check,
    "expand": _replay_expand,
    "isolate": _replay_expand,
    "indiscernible": _replay_indiscernible,
    "extract": _replay_extract,
    "elf": _replay_elf,
    "generate": _replay_generate,
}

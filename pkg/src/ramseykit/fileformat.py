"""Line-oriented text files for structures, classes, and indexed sequences.

The grammar is deliberately small enough to write by hand.  ``#`` starts a
comment, blank lines separate nothing.  A file is a series of blocks:

    signature S
    relation < 2
    function s 1
    constant e

    structure LO_3 : S
    domain 3
    < : (0,1) (0,2) (1,2)
    s : 0->1 1->2
    e = 0

    class orders : S
    member LO_3
    generate linear-orders upto 4   # members up to iso; implies `open`

    sequence walk : S
    index LO_3
    target LO_3
    width 1
    map 0 -> (0)
    delta <(x0, x1)

``member``, ``index``, and ``target`` name an inline structure from the
same file, or a path relative to the file's directory.  Domain elements
are bare indices; external names live only here, never inside structures.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from .classes import GENERATORS, FiniteClass, finite_class
from .formulas import FormulaError, parse_formula, render_formula
from .indiscernibles import ALL_FORMULAS, FormulaSet, IndexedSequence
from .structures import Signature, Structure, StructureError, SignatureError


class ParseError(ValueError):
    """Input rejected, with the 1-based source line."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class Document:
    """Everything defined in one file, keyed by declared name."""

    signatures: dict[str, Signature] = field(default_factory=dict)
    structures: dict[str, Structure] = field(default_factory=dict)
    classes: dict[str, FiniteClass] = field(default_factory=dict)
    sequences: dict[str, tuple[IndexedSequence, object]] = field(default_factory=dict)


_TUPLE = re.compile(r"\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)")
_FN_ENTRY = re.compile(r"(\d+(?:\s*,\s*\d+)*)\s*->\s*(\d+)")


def _strip(line: str) -> str:
    cut = line.find("#")
    if cut >= 0:
        line = line[:cut]
    return line.strip()


class _Builder:
    """Accumulates one block; committed when the next block starts."""

    def __init__(self, doc: Document, base_dir: str | None) -> None:
        self.doc = doc
        self.base_dir = base_dir
        self.kind: str | None = None
        self.line = 0

    # -- signature block -------------------------------------------------

    def start_signature(self, name: str, line: int) -> None:
        self.commit(line)
        self.kind = "signature"
        self.line = line
        self.name = name
        self.rels: list[tuple[str, int]] = []
        self.fns: list[tuple[str, int]] = []
        self.consts: list[str] = []

    # -- structure block -------------------------------------------------

    def start_structure(self, name: str, signame: str, line: int) -> None:
        self.commit(line)
        if signame not in self.doc.signatures:
            raise ParseError(f"unknown signature {signame!r}", line)
        self.kind = "structure"
        self.line = line
        self.name = name
        self.sig = self.doc.signatures[signame]
        self.size: int | None = None
        self.rel_tables: dict[str, set[tuple[int, ...]]] = {}
        self.fn_tables: dict[str, dict[tuple[int, ...], int]] = {}
        self.const_table: dict[str, int] = {}

    def _check_range(self, value: int, line: int) -> int:
        assert self.size is not None
        if not 0 <= value < self.size:
            raise ParseError(f"element {value} outside domain of size {self.size}", line)
        return value

    def relation_row(self, sym: str, rest: str, line: int) -> None:
        if self.size is None:
            raise ParseError("domain must come before tables", line)
        arity = self.sig.rel_arity(sym)
        seen = self.rel_tables.setdefault(sym, set())
        consumed = 0
        for m in _TUPLE.finditer(rest):
            consumed += len(m.group(0).strip())
            entries = tuple(self._check_range(int(x), line)
                            for x in m.group(1).split(","))
            if len(entries) != arity:
                raise ParseError(
                    f"{sym} expects arity {arity}, got tuple {entries}", line)
            seen.add(entries)
        if re.sub(r"[\s()\d,]", "", rest):
            raise ParseError(f"bad relation row for {sym}: {rest!r}", line)

    def function_row(self, sym: str, rest: str, line: int) -> None:
        if self.size is None:
            raise ParseError("domain must come before tables", line)
        arity = self.sig.fn_arity(sym)
        table = self.fn_tables.setdefault(sym, {})
        matched = False
        for m in _FN_ENTRY.finditer(rest):
            matched = True
            args = tuple(self._check_range(int(x), line)
                         for x in m.group(1).split(","))
            value = self._check_range(int(m.group(2)), line)
            if len(args) != arity:
                raise ParseError(
                    f"{sym} expects arity {arity}, got arguments {args}", line)
            if args in table:
                raise ParseError(f"{sym}{args} assigned twice", line)
            table[args] = value
        if not matched and rest.strip():
            raise ParseError(f"bad function row for {sym}: {rest!r}", line)

    def constant_row(self, sym: str, rest: str, line: int) -> None:
        if self.size is None:
            raise ParseError("domain must come before tables", line)
        if not rest.strip().isdigit():
            raise ParseError(f"constant {sym} needs a domain element, got {rest!r}", line)
        if sym in self.const_table:
            raise ParseError(f"constant {sym} assigned twice", line)
        self.const_table[sym] = self._check_range(int(rest.strip()), line)

    # -- class block -----------------------------------------------------

    def start_class(self, name: str, signame: str, line: int) -> None:
        self.commit(line)
        if signame not in self.doc.signatures:
            raise ParseError(f"unknown signature {signame!r}", line)
        self.kind = "class"
        self.line = line
        self.name = name
        self.sig = self.doc.signatures[signame]
        self.members: list[Structure] = []
        self.open_window = False

    def resolve_structure(self, ref: str, line: int) -> Structure:
        if ref in self.doc.structures:
            return self.doc.structures[ref]
        path = ref if os.path.isabs(ref) else os.path.join(self.base_dir or ".", ref)
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                return parse_structure_file(fh.read(),
                                            base_dir=os.path.dirname(path) or ".")
        raise ParseError(f"no inline structure or file named {ref!r}", line)

    # -- sequence block --------------------------------------------------

    def start_sequence(self, name: str, line: int) -> None:
        self.commit(line)
        self.kind = "sequence"
        self.line = line
        self.name = name
        self.index: Structure | None = None
        self.target: Structure | None = None
        self.width: int | None = None
        self.rows: dict[int, tuple[int, ...]] = {}
        self.deltas: list = []
        self.delta_all = False

    # -- commit ------------------------------------------------------------

    def commit(self, line: int) -> None:
        if self.kind is None:
            return
        try:
            if self.kind == "signature":
                self.doc.signatures[self.name] = Signature(
                    tuple(self.rels), tuple(self.fns), tuple(self.consts))
            elif self.kind == "structure":
                if self.size is None:
                    raise ParseError(f"structure {self.name!r} has no domain", self.line)
                self.doc.structures[self.name] = Structure(
                    self.sig, self.size,
                    {s: frozenset(t) for s, t in self.rel_tables.items()},
                    self.fn_tables, self.const_table, name=self.name)
            elif self.kind == "class":
                for m in self.members:
                    if m.signature != self.sig:
                        raise ParseError(
                            f"member {m.name!r} does not match the class signature",
                            self.line)
                self.doc.classes[self.name] = finite_class(
                    self.members, label=self.name, open_window=self.open_window)
            elif self.kind == "sequence":
                if self.index is None or self.target is None:
                    raise ParseError(
                        f"sequence {self.name!r} needs index and target", self.line)
                width = self.width
                if width is None:
                    width = len(next(iter(self.rows.values()), (0,)))
                missing = [i for i in range(self.index.size) if i not in self.rows]
                if missing:
                    raise ParseError(
                        f"sequence {self.name!r} missing map for index {missing[0]}",
                        self.line)
                seq = IndexedSequence(self.index, self.target, width,
                                      tuple(self.rows[i] for i in range(self.index.size)))
                delta = ALL_FORMULAS if self.delta_all else FormulaSet(tuple(self.deltas))
                self.doc.sequences[self.name] = (seq, delta)
        except (SignatureError, StructureError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), line if self.kind != "structure" else self.line) from exc
        self.kind = None


def parse_document(text: str, base_dir: str | None = None) -> Document:
    doc = Document()
    b = _Builder(doc, base_dir)
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "signature":
            b.start_signature(_one_name(rest, lineno), lineno)
        elif head == "relation" and b.kind == "signature":
            b.rels.append(_sym_arity(rest, lineno))
        elif head == "function" and b.kind == "signature":
            b.fns.append(_sym_arity(rest, lineno))
        elif head == "constant" and b.kind == "signature":
            b.consts.append(_one_name(rest, lineno))
        elif head == "structure":
            name, signame = _name_colon_name(rest, lineno)
            b.start_structure(name, signame, lineno)
        elif head == "domain" and b.kind == "structure":
            if not rest.isdigit():
                raise ParseError(f"domain needs a size, got {rest!r}", lineno)
            b.size = int(rest)
        elif head == "class":
            name, signame = _name_colon_name(rest, lineno)
            b.start_class(name, signame, lineno)
        elif head == "member" and b.kind == "class":
            b.members.append(b.resolve_structure(_one_name(rest, lineno), lineno))
        elif head == "generate" and b.kind == "class":
            m = re.fullmatch(r"(\S+)\s+upto\s+(\d+)", rest)
            if not m or m.group(1) not in GENERATORS:
                families = ", ".join(sorted(GENERATORS))
                raise ParseError(f"expected `generate <{families}> upto <n>`", lineno)
            b.members.extend(GENERATORS[m.group(1)](int(m.group(2))).members)
            b.open_window = True
        elif head == "open" and b.kind == "class" and not rest:
            b.open_window = True
        elif head == "sequence":
            b.start_sequence(_one_name(rest.partition(":")[0].strip() or rest, lineno),
                             lineno)
        elif head == "index" and b.kind == "sequence":
            b.index = b.resolve_structure(_one_name(rest, lineno), lineno)
        elif head == "target" and b.kind == "sequence":
            b.target = b.resolve_structure(_one_name(rest, lineno), lineno)
        elif head == "width" and b.kind == "sequence":
            if not rest.isdigit():
                raise ParseError(f"width needs an integer, got {rest!r}", lineno)
            b.width = int(rest)
        elif head == "map" and b.kind == "sequence":
            m = re.fullmatch(r"(\d+)\s*->\s*\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)", rest)
            if not m:
                raise ParseError(f"expected `map <i> -> (a, b, ...)`, got {rest!r}", lineno)
            i = int(m.group(1))
            if i in b.rows:
                raise ParseError(f"map for index {i} given twice", lineno)
            b.rows[i] = tuple(int(x) for x in m.group(2).split(","))
        elif head == "delta" and b.kind == "sequence":
            if rest == "ALL":
                b.delta_all = True
            else:
                try:
                    b.deltas.append(parse_formula(rest))
                except FormulaError as exc:
                    raise ParseError(str(exc), lineno) from exc
        elif b.kind == "structure":
            sym, sep, tail = _table_line(line)
            if sep == ":" and sym in b.sig.relation_names:
                b.relation_row(sym, tail, lineno)
            elif sep == ":" and sym in b.sig.function_names:
                b.function_row(sym, tail, lineno)
            elif sep == "=" and sym in b.sig.constants:
                b.constant_row(sym, tail, lineno)
            else:
                raise ParseError(f"unknown symbol or directive {sym!r}", lineno)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    b.commit(len(lines))
    return doc


def _one_name(rest: str, line: int) -> str:
    if not rest or " " in rest:
        raise ParseError(f"expected a single name, got {rest!r}", line)
    return rest


def _sym_arity(rest: str, line: int) -> tuple[str, int]:
    parts = rest.split()
    if len(parts) != 2 or not parts[1].isdigit():
        raise ParseError(f"expected `<symbol> <arity>`, got {rest!r}", line)
    return parts[0], int(parts[1])


def _name_colon_name(rest: str, line: int) -> tuple[str, str]:
    name, sep, signame = rest.partition(":")
    name, signame = name.strip(), signame.strip()
    if not sep or not name or not signame:
        raise ParseError(f"expected `<name> : <signature>`, got {rest!r}", line)
    return name, signame


def _table_line(line: str) -> tuple[str, str, str]:
    for sep in (":", "="):
        sym, found, tail = line.partition(sep)
        if found and " " not in sym.strip():
            return sym.strip(), sep, tail
    return line.split()[0], "", ""


# -- single-object conveniences -----------------------------------------------


def parse_structure_file(text: str, base_dir: str | None = None) -> Structure:
    doc = parse_document(text, base_dir)
    if len(doc.structures) != 1:
        raise ParseError(
            f"expected exactly one structure, found {len(doc.structures)}", 1)
    return next(iter(doc.structures.values()))


def parse_class_file(text: str, base_dir: str | None = None) -> FiniteClass:
    doc = parse_document(text, base_dir)
    if len(doc.classes) != 1:
        raise ParseError(f"expected exactly one class, found {len(doc.classes)}", 1)
    return next(iter(doc.classes.values()))


def parse_sequence_file(text: str, base_dir: str | None = None):
    doc = parse_document(text, base_dir)
    if len(doc.sequences) != 1:
        raise ParseError(f"expected exactly one sequence, found {len(doc.sequences)}", 1)
    return next(iter(doc.sequences.values()))


# -- serialization --------------------------------------------------------------


def serialize_signature(sig: Signature, name: str = "S") -> str:
    lines = [f"signature {name}"]
    for sym, ar in sig.relations:
        lines.append(f"relation {sym} {ar}")
    for sym, ar in sig.functions:
        lines.append(f"function {sym} {ar}")
    for sym in sig.constants:
        lines.append(f"constant {sym}")
    return "\n".join(lines) + "\n"


def _structure_body(M: Structure, name: str, sig_name: str) -> list[str]:
    lines = [f"structure {name} : {sig_name}", f"domain {M.size}"]
    for sym in M.signature.relation_names:
        cells = " ".join("(" + ",".join(map(str, t)) + ")"
                         for t in M.rel_tuples(sym))
        lines.append(f"{sym} : {cells}".rstrip())
    for sym in M.signature.function_names:
        cells = " ".join(",".join(map(str, a)) + "->" + str(v)
                         for a, v in M.fn_entries(sym))
        lines.append(f"{sym} : {cells}".rstrip())
    for sym in M.signature.constants:
        lines.append(f"{sym} = {M.const(sym)}")
    return lines


def serialize_structure(M: Structure, name: str | None = None,
                        sig_name: str = "S") -> str:
    name = name or M.name or "M"
    out = [serialize_signature(M.signature, sig_name).rstrip(), ""]
    out.extend(_structure_body(M, name, sig_name))
    return "\n".join(out) + "\n"


def serialize_class(F: FiniteClass, name: str = "C", sig_name: str = "S") -> str:
    out = [serialize_signature(F.signature, sig_name).rstrip(), ""]
    member_names = []
    for k, M in enumerate(F.members):
        mname = M.name or f"M{k}"
        member_names.append(mname)
        out.extend(_structure_body(M, mname, sig_name))
        out.append("")
    out.append(f"class {name} : {sig_name}")
    out.extend(f"member {mname}" for mname in member_names)
    if F.open_window:
        # window of a larger class: verdicts needing missing witnesses stay open
        out.append("open")
    return "\n".join(out) + "\n"


def serialize_sequence(I: IndexedSequence, delta, name: str = "I",
                       sig_name: str = "S") -> str:
    out = [serialize_signature(I.index.signature, sig_name).rstrip(), ""]
    out.extend(_structure_body(I.index, I.index.name or "N", sig_name))
    out.append("")
    if I.target.signature == I.index.signature:
        tgt_sig = sig_name
    else:
        tgt_sig = sig_name + "T"
        out.append(serialize_signature(I.target.signature, tgt_sig).rstrip())
        out.append("")
    out.extend(_structure_body(I.target, I.target.name or "M", tgt_sig))
    out.append("")
    out.append(f"sequence {name}")
    out.append(f"index {I.index.name or 'N'}")
    out.append(f"target {I.target.name or 'M'}")
    out.append(f"width {I.width}")
    for i, row in enumerate(I.assignment):
        out.append(f"map {i} -> ({','.join(map(str, row))})")
    if delta == ALL_FORMULAS:
        out.append("delta ALL")
    else:
        out.extend(f"delta {render_formula(phi)}" for phi in delta.formulas)
    return "\n".join(out) + "\n"

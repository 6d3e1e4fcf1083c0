"""Hilbert systems: axiom schemas, tautology decision, proof checking.

A proof is a numbered sequence of lines, each justified by an axiom
schema instance, a propositional tautology, a premise, or one of the
rules MP, R1, RI-R, REW.  Checking is purely syntactic: a schema
instance must match by uniform substitution, a rule application must
have the exact required shape.  Multi-step propositional reasoning must
therefore be expanded into explicit tautology + MP lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .semantics import FrameClass, frame_class
from .syntax import (
    FI,
    IR,
    And,
    Atom,
    Bot,
    Box,
    Formula,
    Iff,
    Imp,
    Not,
    Or,
    Top,
    W,
    parse,
    print_formula,
    substitute,
)


class AbstractionLimitError(ValueError):
    pass


class ProofScriptError(ValueError):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


# ---------------------------------------------------------------------------
# Propositional tautology decision by abstraction + truth tables

_LETTER_LIMIT = 20


def _abstraction_letters(f: Formula) -> list[Formula]:
    """Maximal non-Boolean subformulas (atoms and modal formulas), in
    first-occurrence order."""
    letters: list[Formula] = []
    seen: set[Formula] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, (Atom, W, Box, IR, FI)):
            if g not in seen:
                seen.add(g)
                letters.append(g)
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, Or, Imp, Iff)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return letters


def is_tautology(f: Formula) -> bool:
    """Truth-table validity after abstracting modal subformulas to letters."""
    letters = _abstraction_letters(f)
    if len(letters) > _LETTER_LIMIT:
        raise AbstractionLimitError(
            f"{len(letters)} abstraction letters exceed the limit of {_LETTER_LIMIT}"
        )
    rows = 1 << len(letters)
    full = (1 << rows) - 1
    # Truth-table columns packed into ints: bit v = value on row v.
    column = {}
    for i, letter in enumerate(letters):
        ones = (1 << (1 << i)) - 1
        col = 0
        pos = 1 << i
        step = 1 << (i + 1)
        while pos < rows:
            col |= ones << pos
            pos += step
        column[letter] = col

    def go(g: Formula) -> int:
        if g in column:
            return column[g]
        if isinstance(g, Top):
            return full
        if isinstance(g, Bot):
            return 0
        if isinstance(g, Not):
            return full ^ go(g.arg)
        if isinstance(g, And):
            return go(g.left) & go(g.right)
        if isinstance(g, Or):
            return go(g.left) | go(g.right)
        if isinstance(g, Imp):
            return (full ^ go(g.left)) | go(g.right)
        if isinstance(g, Iff):
            return full ^ (go(g.left) ^ go(g.right))
        raise TypeError(f"not a formula: {g!r}")

    return go(f) == full


# ---------------------------------------------------------------------------
# Schemas and systems


@dataclass(frozen=True)
class Schema:
    """A template whose atoms are metavariables for uniform substitution."""

    name: str
    template: Formula

    def match(self, f: Formula) -> dict[str, Formula] | None:
        return match_schema(self, f)


def match_schema(schema: Schema, f: Formula) -> dict[str, Formula] | None:
    """The unique substitution with substitute(template, s) == f, or None."""
    binding: dict[str, Formula] = {}

    def walk(t: Formula, g: Formula) -> bool:
        if isinstance(t, Atom):
            bound = binding.get(t.name)
            if bound is None:
                binding[t.name] = g
                return True
            return bound == g
        if type(t) is not type(g):
            return False
        if isinstance(t, (Top, Bot)):
            return True
        if isinstance(t, (Not, W, Box, IR, FI)):
            return walk(t.arg, g.arg)
        return walk(t.left, g.left) and walk(t.right, g.right)

    return binding if walk(schema.template, f) else None


def _schema(name: str, text: str) -> Schema:
    return Schema(name, parse(text))


SCHEMAS: dict[str, Schema] = {
    s.name: s
    for s in (
        _schema("A1", "W phi -> ~phi"),
        _schema("A2", "W phi & W psi -> W (phi & psi)"),
        _schema("AD", "~W F"),
        _schema("AT", "~W phi"),
        _schema("A4", "W psi & W (phi & psi) -> W ((W chi -> W (phi & chi)) & psi)"),
        _schema("A5", "W psi & ~W (phi & psi) -> W ((W chi -> ~W (phi & chi)) & psi)"),
        _schema("AB", "W psi & ~phi -> W ((W chi -> ~W (phi & chi)) & psi)"),
        _schema("RI-Equ", "IR phi <-> IR ~phi"),
        _schema("RI-Con", "IR phi & ~phi & IR psi & ~psi -> IR (phi & psi)"),
        _schema("RI-D", "~IR F"),
        # RI-4 is exactly the image of A4 under the W-to-IR rewrite.
        _schema(
            "RI-4",
            "(IR psi & ~psi) & (IR (phi & psi) & ~(phi & psi))"
            " -> IR ((IR chi & ~chi -> IR (phi & chi) & ~(phi & chi)) & psi)"
            " & ~((IR chi & ~chi -> IR (phi & chi) & ~(phi & chi)) & psi)",
        ),
    )
}


@dataclass(frozen=True)
class System:
    name: str
    schemas: frozenset[str]
    rules: frozenset[str]  # subset of {"MP", "R1", "RI-R", "REW"}
    frames: FrameClass


def _system(name: str, schemas: Sequence[str], rules: Sequence[str], frames: str) -> System:
    return System(name, frozenset(schemas), frozenset(rules), frame_class(frames))


_W_RULES = ("MP", "R1", "REW")
_RI_RULES = ("MP", "RI-R", "REW")

SYSTEMS: dict[str, System] = {
    s.name: s
    for s in (
        _system("KW", ("A1", "A2"), _W_RULES, "all"),
        _system("KDW", ("A1", "A2", "AD"), _W_RULES, "serial"),
        _system("TW", ("A1", "A2", "AT"), _W_RULES, "reflexive"),
        _system("K4W", ("A1", "A2", "A4"), _W_RULES, "transitive"),
        _system("K5W", ("A1", "A2", "A5"), _W_RULES, "euclidean"),
        _system("K45W", ("A1", "A2", "A5", "A4"), _W_RULES, "euclidean"),
        _system("KD5W", ("A1", "A2", "A5", "AD"), _W_RULES, "serial+transitive+euclidean"),
        _system("BW", ("A1", "A2", "AB"), _W_RULES, "symmetric"),
        _system("KRI", ("RI-Equ", "RI-Con"), _RI_RULES, "all"),
        _system("KD4RI", ("RI-Equ", "RI-Con", "RI-D", "RI-4"), _RI_RULES, "serial+transitive"),
    )
}


# ---------------------------------------------------------------------------
# Proof objects


@dataclass(frozen=True)
class ByAxiom:
    schema: str
    subst: tuple[tuple[str, Formula], ...] | None = None


@dataclass(frozen=True)
class ByTaut:
    pass


@dataclass(frozen=True)
class ByPremise:
    pass


@dataclass(frozen=True)
class ByMP:
    antecedent: int
    implication: int


@dataclass(frozen=True)
class ByR1:
    source: int


@dataclass(frozen=True)
class ByRIR:
    source: int


@dataclass(frozen=True)
class ByREW:
    source: int


Justification = ByAxiom | ByTaut | ByPremise | ByMP | ByR1 | ByRIR | ByREW


@dataclass(frozen=True)
class ProofLine:
    index: int
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Proof:
    system: System
    premises: tuple[Formula, ...]
    lines: tuple[ProofLine, ...]

    def __post_init__(self):
        if not self.lines:
            raise ValueError("a proof needs at least one line")

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula


@dataclass
class CheckResult:
    accepted: bool
    line: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.accepted


def _reject(line: ProofLine, reason: str) -> CheckResult:
    return CheckResult(False, line.index, reason)


def check_proof(proof: Proof, strict: bool = False) -> CheckResult:
    """Validate every line; rejections name the first bad line.

    ``strict=True`` disables the REW rule (admissible, not primitive).
    Line indices are labels: references are resolved by label and must
    point at earlier lines, so renumbering that preserves order is fine.
    """
    system = proof.system
    seen: dict[int, Formula] = {}
    for line in proof.lines:
        if line.index in seen:
            return _reject(line, f"duplicate line index {line.index}")
        j = line.justification

        def resolve(ref: int) -> Formula | None:
            return seen.get(ref)

        if isinstance(j, ByAxiom):
            if j.schema not in system.schemas:
                return _reject(line, f"schema {j.schema} is not an axiom of {system.name}")
            schema = SCHEMAS[j.schema]
            if j.subst is not None:
                if substitute(schema.template, dict(j.subst)) != line.formula:
                    return _reject(line, f"stated substitution does not yield the line from {j.schema}")
            elif match_schema(schema, line.formula) is None:
                return _reject(line, f"not an instance of {j.schema}")
        elif isinstance(j, ByTaut):
            if not is_tautology(line.formula):
                return _reject(line, "not a propositional tautology")
        elif isinstance(j, ByPremise):
            if line.formula not in proof.premises:
                return _reject(line, "not among the premises")
        elif isinstance(j, ByMP):
            if "MP" not in system.rules:
                return _reject(line, f"MP not available in {system.name}")
            fi, fj = resolve(j.antecedent), resolve(j.implication)
            if fi is None or fj is None:
                return _reject(line, "MP reference to a missing or later line")
            if fj != Imp(fi, line.formula):
                return _reject(line, "MP shape mismatch")
        elif isinstance(j, ByR1):
            if "R1" not in system.rules:
                return _reject(line, f"R1 not available in {system.name}")
            fi = resolve(j.source)
            if fi is None:
                return _reject(line, "R1 reference to a missing or later line")
            if not isinstance(fi, Imp):
                return _reject(line, "R1 source is not an implication")
            want = Imp(And(W(fi.left), Not(fi.right)), W(fi.right))
            if line.formula != want:
                return _reject(line, "R1 shape mismatch")
        elif isinstance(j, ByRIR):
            if "RI-R" not in system.rules:
                return _reject(line, f"RI-R not available in {system.name}")
            fi = resolve(j.source)
            if fi is None:
                return _reject(line, "RI-R reference to a missing or later line")
            if not isinstance(fi, Imp):
                return _reject(line, "RI-R source is not an implication")
            want = Imp(And(IR(fi.left), Not(fi.left)), Or(IR(fi.right), fi.right))
            if line.formula != want:
                return _reject(line, "RI-R shape mismatch")
        elif isinstance(j, ByREW):
            if strict or "REW" not in system.rules:
                return _reject(line, f"REW not available in {system.name}" + (" (strict mode)" if strict else ""))
            fi = resolve(j.source)
            if fi is None:
                return _reject(line, "REW reference to a missing or later line")
            if not isinstance(fi, Iff):
                return _reject(line, "REW source is not a biconditional")
            wanted = (
                Iff(W(fi.left), W(fi.right)),
                Iff(IR(fi.left), IR(fi.right)),
            )
            if line.formula not in wanted:
                return _reject(line, "REW shape mismatch")
        else:  # pragma: no cover
            return _reject(line, f"unknown justification {j!r}")
        seen[line.index] = line.formula
    return CheckResult(True)


def check_derived_rule(
    system: System,
    premise_templates: Sequence[Schema],
    conclusion_template: Schema,
    witness: Proof,
    strict: bool = False,
) -> CheckResult:
    """A witness proof establishes an instance of the rule.

    The premises must instantiate the premise templates and the
    conclusion the conclusion template, all under one substitution.
    """
    if witness.system.name != system.name:
        return CheckResult(False, None, f"witness is in {witness.system.name}, not {system.name}")
    if len(witness.premises) != len(premise_templates):
        return CheckResult(False, None, "premise count differs from the rule")
    binding: dict[str, Formula] = {}
    for template, premise in zip(premise_templates, witness.premises):
        local = match_schema(template, premise)
        if local is None:
            return CheckResult(False, None, f"premise {print_formula(premise)} does not instantiate {template.name}")
        for k, v in local.items():
            if binding.setdefault(k, v) != v:
                return CheckResult(False, None, f"inconsistent instantiation of {k}")
    local = match_schema(conclusion_template, witness.conclusion)
    if local is None:
        return CheckResult(
            False, None, f"conclusion {print_formula(witness.conclusion)} does not instantiate {conclusion_template.name}"
        )
    for k, v in local.items():
        if binding.setdefault(k, v) != v:
            return CheckResult(False, None, f"inconsistent instantiation of {k}")
    return check_proof(witness, strict=strict)


# ---------------------------------------------------------------------------
# Proof scripts

_LINE_RE = re.compile(r"^(\d+)\.\s*(.*?)\s*;\s*(.*)$")
_AXIOM_RE = re.compile(r"^([A-Za-z0-9-]+)(\{.*\})?$")


def _parse_justification(text: str, line_no: int) -> Justification:
    text = text.strip()
    parts = text.split()
    if parts and parts[0] == "taut":
        return ByTaut()
    if parts and parts[0] == "premise":
        return ByPremise()
    if parts and parts[0] == "mp":
        if len(parts) != 3 or not all(p.isdigit() for p in parts[1:]):
            raise ProofScriptError("mp needs two line numbers", line_no)
        return ByMP(int(parts[1]), int(parts[2]))
    for word, ctor in (("r1", ByR1), ("rir", ByRIR), ("rew", ByREW)):
        if parts and parts[0] == word:
            if len(parts) != 2 or not parts[1].isdigit():
                raise ProofScriptError(f"{word} needs one line number", line_no)
            return ctor(int(parts[1]))
    m = _AXIOM_RE.match(text)
    if m and m.group(1) in SCHEMAS:
        subst = None
        if m.group(2):
            body = m.group(2)[1:-1].strip()
            entries = []
            if body:
                for part in body.split(","):
                    if ":=" not in part:
                        raise ProofScriptError(f"bad substitution entry {part!r}", line_no)
                    var, val = part.split(":=", 1)
                    var = var.strip()
                    try:
                        entries.append((var, parse(val)))
                    except ValueError as exc:
                        raise ProofScriptError(f"bad substitution formula: {exc}", line_no) from None
            subst = tuple(entries)
        return ByAxiom(m.group(1), subst)
    raise ProofScriptError(f"unknown justification {text!r}", line_no)


def parse_proof_script(text: str) -> Proof:
    """Line-oriented script: a header block then numbered proof lines.

    Header entries: ``system: NAME`` (required) and any number of
    ``premise: FORMULA`` lines.  Proof lines read
    ``<index>. <formula> ; <justification>``.  ``#`` starts a comment.
    """
    system: System | None = None
    premises: list[Formula] = []
    lines: list[ProofLine] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("system:"):
            name = stripped[len("system:"):].strip()
            if name not in SYSTEMS:
                raise ProofScriptError(f"unknown system {name!r}", line_no)
            system = SYSTEMS[name]
            continue
        if stripped.startswith("premise:"):
            try:
                premises.append(parse(stripped[len("premise:"):].strip()))
            except ValueError as exc:
                raise ProofScriptError(f"bad premise: {exc}", line_no) from None
            continue
        m = _LINE_RE.match(stripped)
        if not m:
            raise ProofScriptError(f"unparseable proof line {stripped!r}", line_no)
        index = int(m.group(1))
        try:
            formula = parse(m.group(2))
        except ValueError as exc:
            raise ProofScriptError(f"bad formula: {exc}", line_no) from None
        lines.append(ProofLine(index, formula, _parse_justification(m.group(3), line_no)))
    if system is None:
        raise ProofScriptError("missing 'system:' header", 1)
    if not lines:
        raise ProofScriptError("no proof lines", 1)
    return Proof(system, tuple(premises), tuple(lines))


# ---------------------------------------------------------------------------
# Programmatic proofs: the n-indexed conjunction rules


class _Builder:
    """Accumulates checked-shape proof lines with fresh indices."""

    def __init__(self, system: System, premises: Sequence[Formula]):
        self.system = system
        self.premises = tuple(premises)
        self.lines: list[ProofLine] = []

    def _add(self, formula: Formula, justification: Justification) -> int:
        index = len(self.lines) + 1
        self.lines.append(ProofLine(index, formula, justification))
        return index

    def premise(self, f: Formula) -> int:
        return self._add(f, ByPremise())

    def taut(self, f: Formula) -> int:
        return self._add(f, ByTaut())

    def axiom(self, name: str, f: Formula) -> int:
        return self._add(f, ByAxiom(name))

    def mp(self, antecedent: int, implication: int) -> int:
        imp = self.lines[implication - 1].formula
        assert isinstance(imp, Imp)
        return self._add(imp.right, ByMP(antecedent, implication))

    def r1(self, source: int) -> int:
        src = self.lines[source - 1].formula
        assert isinstance(src, Imp)
        return self._add(
            Imp(And(W(src.left), Not(src.right)), W(src.right)), ByR1(source)
        )

    def rir(self, source: int) -> int:
        src = self.lines[source - 1].formula
        assert isinstance(src, Imp)
        return self._add(
            Imp(And(IR(src.left), Not(src.left)), Or(IR(src.right), src.right)),
            ByRIR(source),
        )

    def rew_w(self, source: int) -> int:
        src = self.lines[source - 1].formula
        assert isinstance(src, Iff)
        return self._add(Iff(W(src.left), W(src.right)), ByREW(source))

    def rew_ir(self, source: int) -> int:
        src = self.lines[source - 1].formula
        assert isinstance(src, Iff)
        return self._add(Iff(IR(src.left), IR(src.right)), ByREW(source))

    def chain(self, sources: Sequence[int], target: Formula) -> int:
        """Close over earlier lines propositionally: one taut line + MPs."""
        stacked = target
        for ref in reversed(sources):
            stacked = Imp(self.lines[ref - 1].formula, stacked)
        at = self.taut(stacked)
        for ref in sources:
            at = self.mp(ref, at)
        return at

    def proof(self) -> Proof:
        return Proof(self.system, self.premises, tuple(self.lines))


def _conj(parts: Sequence[Formula]) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


@dataclass(frozen=True)
class DerivedRule:
    premises: tuple[Schema, ...]
    conclusion: Schema
    witness: Proof


def conjunction_rule_w(n: int) -> DerivedRule:
    """From c1 & ... & cn -> f derive W(c1 & g) & ... & W(cn & g) & ~f -> W f.

    The witness instantiates the metavariables with fresh atoms and
    replays the grouping argument concretely (A2 plus REW per step).
    """
    if not 0 <= n <= 3:
        raise ValueError("witnesses are built for n between 0 and 3")
    chis = [Atom(x) for x in ("a", "b", "c")[:n]]
    phi, psi = Atom("p"), Atom("q")
    meta_chis = [Atom(x) for x in ("chi1", "chi2", "chi3")[:n]]
    meta_phi, meta_psi = Atom("phi"), Atom("psi")

    if n == 0:
        premise_t = Schema("rule-premise", meta_phi)
        conclusion_t = Schema("rule-conclusion", Imp(Not(meta_phi), W(meta_phi)))
        b = _Builder(SYSTEMS["KW"], (phi,))
        l1 = b.premise(phi)
        b.chain([l1], Imp(Not(phi), W(phi)))
        return DerivedRule((premise_t,), conclusion_t, b.proof())

    meta_c = _conj(meta_chis)
    premise_t = Schema("rule-premise", Imp(meta_c, meta_phi))
    meta_ant = _conj([W(And(x, meta_psi)) for x in meta_chis] + [Not(meta_phi)])
    conclusion_t = Schema("rule-conclusion", Imp(meta_ant, W(meta_phi)))

    c = _conj(chis)
    b = _Builder(SYSTEMS["KW"], (Imp(c, phi),))
    l1 = b.premise(Imp(c, phi))
    l2 = b.r1(l1)  # W C & ~f -> W f
    l3 = b.taut(Imp(And(c, psi), c))
    l4 = b.r1(l3)  # W (C & g) & ~C -> W C
    core_target = Imp(And(W(And(c, psi)), Not(phi)), W(phi))
    core = b.chain([l1, l2, l4], core_target)
    if n == 1:
        return DerivedRule((premise_t,), conclusion_t, b.proof())

    # Grouping: from W(c1 & g), ..., W(cn & g) reach W(C & g) stepwise.
    prefix = chis[0]
    grouped_src: int | None = None  # line for Ant_k -> W(D_k & g)
    ant = W(And(chis[0], psi))
    for x in chis[1:]:
        bigger = And(prefix, x)
        a2 = b.axiom(
            "A2",
            Imp(
                And(W(And(prefix, psi)), W(And(x, psi))),
                W(And(And(prefix, psi), And(x, psi))),
            ),
        )
        flat = b.taut(Iff(And(And(prefix, psi), And(x, psi)), And(bigger, psi)))
        rew = b.rew_w(flat)
        step_target = Imp(And(W(And(prefix, psi)), W(And(x, psi))), W(And(bigger, psi)))
        step = b.chain([a2, rew], step_target)
        new_ant = And(ant, W(And(x, psi)))
        if grouped_src is None:
            grouped_src = step
        else:
            grouped_src = b.chain(
                [grouped_src, step], Imp(new_ant, W(And(bigger, psi)))
            )
        ant = new_ant
        prefix = bigger
    b.chain([grouped_src, core], Imp(And(ant, Not(phi)), W(phi)))
    return DerivedRule((premise_t,), conclusion_t, b.proof())


def conjunction_rule_ri(n: int) -> DerivedRule:
    """The IR analogue: from c1 & ... & cn -> f derive
    IR(c1 & g) & ~(c1 & g) & ... & ~(cn & g) -> IR f | f."""
    if not 0 <= n <= 3:
        raise ValueError("witnesses are built for n between 0 and 3")
    chis = [Atom(x) for x in ("a", "b", "c")[:n]]
    phi, psi = Atom("p"), Atom("q")
    meta_chis = [Atom(x) for x in ("chi1", "chi2", "chi3")[:n]]
    meta_phi, meta_psi = Atom("phi"), Atom("psi")

    def wrongish(g: Formula) -> list[Formula]:
        return [IR(g), Not(g)]

    if n == 0:
        premise_t = Schema("rule-premise", meta_phi)
        conclusion_t = Schema("rule-conclusion", Or(IR(meta_phi), meta_phi))
        b = _Builder(SYSTEMS["KRI"], (phi,))
        l1 = b.premise(phi)
        b.chain([l1], Or(IR(phi), phi))
        return DerivedRule((premise_t,), conclusion_t, b.proof())

    meta_c = _conj(meta_chis)
    premise_t = Schema("rule-premise", Imp(meta_c, meta_phi))
    meta_ant_parts: list[Formula] = []
    for x in meta_chis:
        meta_ant_parts += [IR(And(x, meta_psi)), Not(And(x, meta_psi))]
    conclusion_t = Schema(
        "rule-conclusion", Imp(_conj(meta_ant_parts), Or(IR(meta_phi), meta_phi))
    )

    c = _conj(chis)
    b = _Builder(SYSTEMS["KRI"], (Imp(c, phi),))
    l1 = b.premise(Imp(c, phi))
    l2 = b.rir(l1)  # IR C & ~C -> IR f | f
    l3 = b.taut(Imp(And(c, psi), c))
    l4 = b.rir(l3)  # IR (C & g) & ~(C & g) -> IR C | C
    core_target = Imp(
        And(IR(And(c, psi)), Not(And(c, psi))), Or(IR(phi), phi)
    )
    core = b.chain([l1, l2, l4], core_target)
    if n == 1:
        return DerivedRule((premise_t,), conclusion_t, b.proof())

    prefix = chis[0]
    grouped_src: int | None = None  # Ant_k -> IR(D_k & g) & ~(D_k & g)
    ant = _conj(wrongish(And(chis[0], psi)))
    for x in chis[1:]:
        bigger = And(prefix, x)
        px, xx = And(prefix, psi), And(x, psi)
        ricon = b.axiom(
            "RI-Con",
            Imp(_conj([IR(px), Not(px), IR(xx), Not(xx)]), IR(And(px, xx))),
        )
        flat = b.taut(Iff(And(px, xx), And(bigger, psi)))
        rew = b.rew_ir(flat)
        pair_ant = _conj([IR(px), Not(px), IR(xx), Not(xx)])
        step_target = Imp(
            pair_ant, _conj(wrongish(And(bigger, psi)))
        )
        step = b.chain([ricon, rew, flat], step_target)
        new_ant = _conj([ant, IR(xx), Not(xx)])
        if grouped_src is None:
            grouped_src = step
        else:
            grouped_src = b.chain(
                [grouped_src, step],
                Imp(new_ant, _conj(wrongish(And(bigger, psi)))),
            )
        ant = new_ant
        prefix = bigger
    b.chain([grouped_src, core], Imp(ant, Or(IR(phi), phi)))
    return DerivedRule((premise_t,), conclusion_t, b.proof())

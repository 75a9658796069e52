"""Axiom schemas, a Hilbert proof checker and a randomized soundness fuzzer.

Schemas are instantiated from explicit bindings (degrees ``c``/``d``,
formulas ``phi``/``psi``, index terms ``idx``/``i``/``j``). A proof line that
cites a schema is accepted when it equals the instance up to removal of
double negations, which keeps translated proofs checkable without adding
bookkeeping lines.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from . import indices as ix
from .core import ONE, ZERO, FuzzyContext, Sort, SortError, degree, format_degree, full_mask
from .syntax import (
    Conj,
    Formula,
    Modal,
    Nec,
    Neg,
    ParseError,
    Suff,
    Weight,
    double_negation_normal,
    expand_derived,
    iff,
    implies,
    in_necessity_fragment,
    in_sufficiency_fragment,
    is_indexed,
    parse,
    parse_declarations,
    parse_index,
    translate_rho,
)


class SideConditionError(ValueError):
    pass


class ScriptError(ValueError):
    def __init__(self, message: str, line: int = 0) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


# --------------------------------------------------------------------------
# schemas


@dataclass(frozen=True)
class Bindings:
    c: Optional[Fraction] = None
    d: Optional[Fraction] = None
    phi: Optional[Formula] = None
    psi: Optional[Formula] = None
    idx: Optional[ix.IndexTerm] = None
    i: Optional[ix.IndexTerm] = None
    j: Optional[ix.IndexTerm] = None
    form: int = 1

    def need(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise SideConditionError(f"missing binding(s): {', '.join(missing)}")


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    params: tuple[str, ...]
    build: Callable[[Bindings], Formula]
    forms: int = 1
    note: str = ""

    def instantiate(self, bindings: Bindings) -> Formula:
        bindings.need(*self.params)
        if not 1 <= bindings.form <= self.forms:
            raise SideConditionError(f"{self.name} has {self.forms} form(s)")
        if bindings.phi is not None and bindings.psi is not None and "psi" in self.params:
            if bindings.phi.sort is not bindings.psi.sort:
                raise SortError(f"{self.name}: phi and psi must have the same sort")
        return self.build(bindings)


def _w(c: Fraction, strict: bool = False) -> Weight:
    return Weight(c, strict)


def _k_nec(strict: bool):
    def build(b: Bindings) -> Formula:
        t, w = b.phi.sort, _w(b.c, strict)
        return implies(Nec(w, t, implies(b.phi, b.psi), b.idx),
                       implies(Nec(w, t, b.phi, b.idx), Nec(w, t, b.psi, b.idx)))
    return build


def _k_suff(strict: bool):
    def build(b: Bindings) -> Formula:
        t, w = b.phi.sort, _w(b.c, strict)
        return implies(Suff(w, t, Conj(b.phi, Neg(b.psi)), b.idx),
                       implies(Suff(w, t, Neg(b.phi), b.idx), Suff(w, t, Neg(b.psi), b.idx)))
    return build


def _strict_below_one(b: Bindings) -> None:
    # [1+] and [[1+]] never hold, so the strict B schemas only hold for c < 1
    if b.c >= ONE:
        raise SideConditionError("the strict B schemas need c < 1")


def _b_nec(strict: bool):
    def build(b: Bindings) -> Formula:
        if strict:
            _strict_below_one(b)
        t = b.phi.sort
        if strict:  # phi -> [c+] <1-c> phi
            inner = expand_derived("pos", ONE - b.c, b.phi, b.idx)
        else:  # phi -> [c] <(1-c)+> phi
            inner = expand_derived("pos_strict", ONE - b.c, b.phi, b.idx)
        return implies(b.phi, Nec(_w(b.c, strict), t.other, inner, b.idx))
    return build


def _b_suff(strict: bool):
    def build(b: Bindings) -> Formula:
        if strict:
            _strict_below_one(b)
        t, w = b.phi.sort, _w(b.c, strict)
        return implies(b.phi, Suff(w, t.other, Suff(w, t, b.phi, b.idx), b.idx))
    return build


def _con(which: int):
    def build(b: Bindings) -> Formula:
        t, phi, idx = b.phi.sort, b.phi, b.idx
        guard = Neg(Conj(Nec(_w(ONE), t, Neg(phi), idx), Suff(_w(ONE), t, phi, idx)))
        if which == 1:
            body = implies(Nec(_w(ONE - b.c), t, Neg(phi), idx), Neg(Suff(_w(b.c, True), t, phi, idx)))
        else:
            body = implies(Nec(_w(ONE - b.c, True), t, Neg(phi), idx), Neg(Suff(_w(b.c), t, phi, idx)))
        return implies(guard, body)
    return build


def _con_unguarded(b: Bindings) -> Formula:
    """CON1 without its guard: not valid, used to check the fuzzer bites."""
    t, phi = b.phi.sort, b.phi
    return implies(Nec(_w(ONE - b.c), t, Neg(phi), b.idx), Neg(Suff(_w(b.c, True), t, phi, b.idx)))


def _weaken(node: type):
    def build(b: Bindings) -> Formula:
        if not b.c > b.d:
            raise SideConditionError(f"needs c > d, got c={format_degree(b.c)}, d={format_degree(b.d)}")
        t = b.phi.sort
        return implies(node(_w(b.c), t, b.phi, b.idx), node(_w(b.d, True), t, b.phi, b.idx))
    return build


def _strict_to_plain(node: type):
    def build(b: Bindings) -> Formula:
        t = b.phi.sort
        return implies(node(_w(b.c, True), t, b.phi, b.idx), node(_w(b.c), t, b.phi, b.idx))
    return build


def _bounds(node: type):
    def build(b: Bindings) -> Formula:
        t = b.phi.sort
        if b.form == 1:
            return Neg(node(_w(ONE, True), t, b.phi, b.idx))
        return node(_w(ZERO), t, b.phi, b.idx)
    return build


def _def_union(strict: bool):
    def build(b: Bindings) -> Formula:
        t, w = b.phi.sort, _w(b.c, strict)
        return iff(Nec(w, t, b.phi, ix.Union(b.i, b.j)),
                   Conj(Nec(w, t, b.phi, b.i), Nec(w, t, b.phi, b.j)))
    return build


def _def_inter(strict: bool):
    def build(b: Bindings) -> Formula:
        t, w = b.phi.sort, _w(b.c, strict)
        return iff(Suff(w, t, b.phi, ix.Inter(b.i, b.j)),
                   Conj(Suff(w, t, b.phi, b.i), Suff(w, t, b.phi, b.j)))
    return build


def _def_compl(strict: bool):
    def build(b: Bindings) -> Formula:
        t, w = b.phi.sort, _w(b.c, strict)
        return iff(Nec(w, t, b.phi, ix.Compl(b.i)), Suff(w, t, Neg(b.phi), b.i))
    return build


def _def_zero(b: Bindings) -> Formula:
    return Nec(_w(ONE), b.phi.sort, b.phi, ix.Zero())


_CPHI = ("c", "phi")
SCHEMAS: dict[str, AxiomSchema] = {s.name: s for s in [
    AxiomSchema("K[c]", ("c", "phi", "psi"), _k_nec(False)),
    AxiomSchema("K[c+]", ("c", "phi", "psi"), _k_nec(True)),
    AxiomSchema("B[c]", _CPHI, _b_nec(False)),
    AxiomSchema("B[c+]", _CPHI, _b_nec(True)),
    AxiomSchema("K[[c]]", ("c", "phi", "psi"), _k_suff(False)),
    AxiomSchema("K[[c+]]", ("c", "phi", "psi"), _k_suff(True)),
    AxiomSchema("B[[c]]", _CPHI, _b_suff(False)),
    AxiomSchema("B[[c+]]", _CPHI, _b_suff(True)),
    AxiomSchema("CON1", _CPHI, _con(1)),
    AxiomSchema("CON2", _CPHI, _con(2)),
    AxiomSchema("BK_i", ("c", "d", "phi"), _weaken(Nec)),
    AxiomSchema("BK_ii", ("c", "d", "phi"), _weaken(Suff)),
    AxiomSchema("BK_iii", _CPHI, _strict_to_plain(Nec)),
    AxiomSchema("BK_iv", _CPHI, _strict_to_plain(Suff)),
    AxiomSchema("BK_v", ("phi",), _bounds(Nec), forms=2),
    AxiomSchema("BK_vi", ("phi",), _bounds(Suff), forms=2),
    AxiomSchema("DefU", ("c", "phi", "i", "j"), _def_union(False)),
    AxiomSchema("DefU+", ("c", "phi", "i", "j"), _def_union(True)),
    AxiomSchema("DefI", ("c", "phi", "i", "j"), _def_inter(False)),
    AxiomSchema("DefI+", ("c", "phi", "i", "j"), _def_inter(True)),
    AxiomSchema("DefC", ("c", "phi", "i"), _def_compl(False)),
    AxiomSchema("DefC+", ("c", "phi", "i"), _def_compl(True)),
    AxiomSchema("Def0", ("phi",), _def_zero),
]}

# Deliberately broken schemas, for checking that the fuzzer finds failures.
MUTANTS: dict[str, AxiomSchema] = {
    "CON1-unguarded": AxiomSchema("CON1-unguarded", _CPHI, _con_unguarded),
}

_ALIASES = {"K_[c]": "K[c]", "K_[c+]": "K[c+]", "B_[c]": "B[c]", "B_[c+]": "B[c+]",
            "K_[[c]]": "K[[c]]", "K_[[c+]]": "K[[c+]]", "B_[[c]]": "B[[c]]", "B_[[c+]]": "B[[c+]]"}


def schema(name: str) -> AxiomSchema:
    key = _ALIASES.get(name, name)
    if key in SCHEMAS:
        return SCHEMAS[key]
    if key in MUTANTS:
        return MUTANTS[key]
    raise KeyError(f"unknown axiom schema {name!r}")


def instantiate_axiom(schema_or_name: AxiomSchema | str, bindings: Bindings | None = None, **kw) -> Formula:
    """Build an instance. Keyword arguments are accepted as a shortcut:
    ``instantiate_axiom("BK_i", c="0.5", d="0.3", phi=p)``."""
    sch = schema(schema_or_name) if isinstance(schema_or_name, str) else schema_or_name
    if bindings is None:
        kw = dict(kw)
        for key in ("c", "d"):
            if key in kw and kw[key] is not None:
                kw[key] = degree(kw[key])
        bindings = Bindings(**kw)
    return sch.instantiate(bindings)


# --------------------------------------------------------------------------
# systems


BM = frozenset({"DefU", "DefU+", "DefI", "DefI+", "DefC", "DefC+", "Def0"})
_NEC_AX = frozenset({"K[c]", "K[c+]", "B[c]", "B[c+]", "BK_i", "BK_iii", "BK_v"})
_SUFF_AX = frozenset({"K[[c]]", "K[[c+]]", "B[[c]]", "B[[c+]]", "BK_ii", "BK_iv", "BK_vi"})
_CON = frozenset({"CON1", "CON2"})


@dataclass(frozen=True)
class ProofSystem:
    name: str
    axioms: frozenset[str]
    rules: frozenset[str]
    language: str  # "nec", "suff" or "full"
    indexed: bool = False

    def admits(self, phi: Formula) -> Optional[str]:
        """Why ``phi`` is outside the system's language, or None."""
        if self.language == "nec" and not in_necessity_fragment(phi):
            return f"{self.name} has no sufficiency modalities"
        if self.language == "suff" and not in_sufficiency_fragment(phi):
            return f"{self.name} has no necessity modalities"
        if not self.indexed and is_indexed(phi):
            return f"{self.name} has no indexed modalities"
        return None


SYSTEMS: dict[str, ProofSystem] = {s.name: s for s in [
    ProofSystem("2WKB", _NEC_AX, frozenset({"mp", "ug-nec"}), "nec"),
    ProofSystem("2WKF", _SUFF_AX, frozenset({"mp", "ug-suff"}), "suff"),
    ProofSystem("2WML", _NEC_AX | _SUFF_AX | _CON, frozenset({"mp", "ug-nec", "ug-suff"}), "full"),
    ProofSystem("2WBML", _NEC_AX | _SUFF_AX | _CON | BM, frozenset({"mp", "ug-nec", "ug-suff", "eq"}),
                "full", True),
    ProofSystem("2WBML-N", (_NEC_AX | _CON | BM) - {"DefI", "DefI+"}, frozenset({"mp", "ug-nec", "eq"}),
                "full", True),
    ProofSystem("2WBML-D", (_SUFF_AX | _CON | BM) - {"DefU", "DefU+"}, frozenset({"mp", "ug-suff", "eq"}),
                "full", True),
]}


def system(name: str | ProofSystem) -> ProofSystem:
    if isinstance(name, ProofSystem):
        return name
    try:
        return SYSTEMS[name.upper().replace("△", "D").replace("DELTA", "D")]
    except KeyError:
        raise KeyError(f"unknown proof system {name!r}; choose from {', '.join(SYSTEMS)}") from None


# --------------------------------------------------------------------------
# propositional tautologies


def _components(phi: Formula, out: dict[Formula, int]) -> None:
    if isinstance(phi, Neg):
        _components(phi.arg, out)
    elif isinstance(phi, Conj):
        _components(phi.left, out)
        _components(phi.right, out)
    elif phi not in out:
        out[phi] = len(out)


def _prop_eval(phi: Formula, env: Mapping[Formula, bool]) -> bool:
    if isinstance(phi, Neg):
        return not _prop_eval(phi.arg, env)
    if isinstance(phi, Conj):
        return _prop_eval(phi.left, env) and _prop_eval(phi.right, env)
    return env[phi]


def is_tautology(phi: Formula, max_components: int = 20) -> bool:
    """Truth-table check treating atoms and modal subformulas as variables."""
    comps: dict[Formula, int] = {}
    _components(phi, comps)
    if len(comps) > max_components:
        raise ValueError(f"too many components ({len(comps)}) for a truth table")
    keys = list(comps)
    for values in itertools.product((False, True), repeat=len(keys)):
        if not _prop_eval(phi, dict(zip(keys, values))):
            return False
    return True


# --------------------------------------------------------------------------
# proof scripts


@dataclass(frozen=True)
class Justification:
    kind: str  # premise, hyp, ax, mp, ug-nec, ug-suff, taut, eq
    schema: str = ""
    bindings_text: Mapping[str, str] = field(default_factory=dict)
    refs: tuple[int, ...] = ()
    eq_terms: Optional[tuple[ix.IndexTerm, ix.IndexTerm]] = None

    def __str__(self) -> str:
        if self.kind == "ax":
            parts = [f"ax {self.schema}"] + [f"{k}={v}" for k, v in self.bindings_text.items()]
            return " ".join(parts)
        if self.kind in ("mp", "ug-nec", "ug-suff"):
            return " ".join([self.kind] + [str(r) for r in self.refs])
        if self.kind == "eq" and self.eq_terms is not None:
            return f"eq {ix.format_index(self.eq_terms[0])} = {ix.format_index(self.eq_terms[1])}"
        return self.kind


@dataclass(frozen=True)
class ProofLine:
    number: int
    formula: Formula
    justification: Justification

    def __str__(self) -> str:
        return f"{self.number}. {self.formula} ; {self.justification}"


@dataclass(frozen=True)
class ProofScript:
    lines: tuple[ProofLine, ...]
    declarations: Mapping[str, Sort] = field(default_factory=dict)

    def __str__(self) -> str:
        out = []
        if self.declarations:
            out.append(_format_decl(self.declarations))
        out.extend(str(line) for line in self.lines)
        return "\n".join(out) + "\n"

    @property
    def conclusion(self) -> Optional[Formula]:
        return self.lines[-1].formula if self.lines else None


def _format_decl(decl: Mapping[str, Sort]) -> str:
    groups = []
    for sort in (Sort.OBJECT, Sort.PROPERTY):
        names = sorted(k for k, s in decl.items() if s is sort)
        if names:
            groups.append(f"{sort.value}: {' '.join(names)}")
    return "{" + "; ".join(groups) + "}"


_LINE_RE = re.compile(r"^\s*(\d+)\s*\.\s*(.*)$")
_BIND_RE = re.compile(r"(?:^|\s)(c|d|phi|psi|idx|i|j|form)\s*=")


def _split_line(body: str, number: int) -> tuple[str, str]:
    depth = 0
    for k, ch in enumerate(body):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        elif ch == ";" and depth == 0:
            return body[:k].strip(), body[k + 1:].strip()
    raise ScriptError("missing ';' before the justification", number)


def _parse_justification(text: str, number: int) -> Justification:
    words = text.split()
    if not words:
        raise ScriptError("empty justification", number)
    head = words[0].lower().replace("_", "-")
    if head in ("premise", "hyp", "taut"):
        if len(words) != 1:
            raise ScriptError(f"'{head}' takes no arguments", number)
        return Justification(head)
    if head in ("mp", "ug-nec", "ug-suff"):
        want = 2 if head == "mp" else 1
        try:
            refs = tuple(int(w) for w in words[1:])
        except ValueError:
            raise ScriptError(f"'{head}' expects line numbers", number) from None
        if len(refs) != want:
            raise ScriptError(f"'{head}' expects {want} line number(s)", number)
        return Justification(head, refs=refs)
    if head == "eq":
        rest = text.split(None, 1)[1] if len(words) > 1 else ""
        if not rest:
            return Justification("eq")
        if "=" not in rest:
            raise ScriptError("eq expects 'I = J'", number)
        left, right = rest.split("=", 1)
        try:
            return Justification("eq", eq_terms=(parse_index(left), parse_index(right)))
        except ParseError as exc:
            raise ScriptError(f"bad index term: {exc}", number) from None
    if head == "ax":
        if len(words) < 2:
            raise ScriptError("'ax' needs a schema name", number)
        name = words[1]
        try:
            schema(name)
        except KeyError as exc:
            raise ScriptError(str(exc.args[0]), number) from None
        rest = text.split(None, 2)[2] if len(words) > 2 else ""
        marks = list(_BIND_RE.finditer(rest))
        if marks and rest[:marks[0].start()].strip():
            raise ScriptError(f"unexpected text {rest[:marks[0].start()].strip()!r}", number)
        bindings: dict[str, str] = {}
        for k, m in enumerate(marks):
            end = marks[k + 1].start() if k + 1 < len(marks) else len(rest)
            key = m.group(1)
            if key in bindings:
                raise ScriptError(f"binding {key!r} given twice", number)
            bindings[key] = rest[m.end():end].strip()
        return Justification("ax", schema=_ALIASES.get(name, name), bindings_text=bindings)
    raise ScriptError(f"unknown justification {words[0]!r}", number)


def parse_script(text: str, declarations: Optional[Mapping[str, Sort]] = None) -> ProofScript:
    """Read ``<n>. <formula> ; <justification>`` lines.

    Blank lines and ``#`` comments are skipped; a line that is only a
    ``{o: ...; p: ...}`` block declares atom sorts for the whole script.
    Line numbers must run 1, 2, 3, ...
    """
    decl: dict[str, Sort] = dict(declarations or {})
    lines: list[ProofLine] = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("{"):
            try:
                decl.update(parse_declarations(stripped))
            except ParseError as exc:
                raise ScriptError(f"bad declaration block: {exc}") from None
            continue
        m = _LINE_RE.match(stripped)
        if m is None:
            raise ScriptError(f"cannot read step {stripped!r}", len(lines) + 1)
        number = int(m.group(1))
        if number != len(lines) + 1:
            raise ScriptError(f"expected step {len(lines) + 1}, found {number}", number)
        ftext, jtext = _split_line(m.group(2), number)
        try:
            formula = parse(ftext, declarations=decl)
        except ParseError as exc:
            raise ScriptError(f"bad formula: {exc}", number) from None
        lines.append(ProofLine(number, formula, _parse_justification(jtext, number)))
    return ProofScript(tuple(lines), decl)


# --------------------------------------------------------------------------
# checking


@dataclass(frozen=True)
class LineVerdict:
    number: int
    ok: bool
    message: str = ""
    depends_on_hypotheses: bool = False


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    system: str
    lines: tuple[LineVerdict, ...]
    conclusion: Optional[Formula] = None

    @property
    def errors(self) -> list[str]:
        return [f"line {v.number}: {v.message}" for v in self.lines if not v.ok]

    def __bool__(self) -> bool:
        return self.accepted


def _binding_candidates(text: str, key: str, decl: Mapping[str, Sort]) -> list:
    if key in ("c", "d"):
        return [degree(text)]
    if key == "form":
        return [int(text)]
    if key in ("idx", "i", "j"):
        return [parse_index(text)]
    out = []
    for sort in (Sort.OBJECT, Sort.PROPERTY):
        try:
            f = parse(text, expected_sort=sort, declarations=decl)
        except ParseError:
            continue
        if f not in out:
            out.append(f)
    if not out:
        parse(text, declarations=decl)  # raise the informative error
    return out


def _match_axiom(line: ProofLine, decl: Mapping[str, Sort]) -> Optional[str]:
    just = line.justification
    sch = schema(just.schema)
    options: dict[str, list] = {}
    for key, text in just.bindings_text.items():
        try:
            options[key] = _binding_candidates(text, key, decl)
        except (ParseError, ValueError) as exc:
            return f"bad binding {key}={text!r}: {exc}"
    extra = set(options) - set(sch.params) - {"idx", "form"}
    if extra:
        return f"{sch.name} takes no binding(s) {', '.join(sorted(extra))}"
    target = double_negation_normal(line.formula)
    keys = list(options)
    last_error = "does not match the instance"
    for combo in itertools.product(*(options[k] for k in keys)):
        try:
            inst = sch.instantiate(Bindings(**dict(zip(keys, combo))))
        except (SideConditionError, SortError) as exc:
            last_error = str(exc)
            continue
        if double_negation_normal(inst) == target:
            return None
        last_error = f"instance is {inst}"
    return f"{sch.name}: {last_error}"


def _match_eq(line: ProofLine) -> Optional[str]:
    phi = line.formula
    # shape: (A -> B) & (B -> A) with A, B the same modality up to index
    if not (isinstance(phi, Conj) and isinstance(phi.left, Neg) and isinstance(phi.left.arg, Conj)):
        return "eq lines must read [x]^I a <-> [x]^J a"
    a, nb = phi.left.arg.left, phi.left.arg.right
    if not isinstance(nb, Neg) or phi != iff(a, nb.arg):
        return "eq lines must read [x]^I a <-> [x]^J a"
    b = nb.arg
    if not (isinstance(a, Modal) and type(a) is type(b) and a.weight == b.weight and a.tag == b.tag
            and a.arg == b.arg and a.index is not None and b.index is not None):
        return "eq lines must relate one modality under two indices"
    want = line.justification.eq_terms
    if want is not None and {ix.normal_key(want[0]), ix.normal_key(want[1])} != \
            {ix.normal_key(a.index), ix.normal_key(b.index)}:
        return "cited index terms differ from the ones in the formula"
    if not ix.za_equal(a.index, b.index):
        return f"index terms {ix.format_index(a.index)} and {ix.format_index(b.index)} are not equal"
    return None


def _dn_equal(a: Formula, b: Formula) -> bool:
    return a == b or double_negation_normal(a) == double_negation_normal(b)


def check_proof(script: ProofScript | str, premises: Optional[Sequence[Formula]] = None,
                system_name: str | ProofSystem = "2WML") -> Verdict:
    """Verify every line of a script.

    ``premise`` lines are global assumptions: they behave like theorems
    supplied from outside, so the generalization rules may use them.
    ``hyp`` lines are local hypotheses; anything derived from them is
    marked, and the generalization rules refuse marked lines. When
    ``premises`` is given, both kinds must cite a listed formula.
    """
    if isinstance(script, str):
        script = parse_script(script)
    sysm = system(system_name)
    allowed = None if premises is None else set(premises)
    verdicts: list[LineVerdict] = []
    formulas: list[Formula] = []
    dependent: list[bool] = []
    for line in script.lines:
        phi, just = line.formula, line.justification
        dep = False
        problem = sysm.admits(phi)
        if problem is None:
            kind = just.kind
            if kind in ("premise", "hyp"):
                if allowed is not None and phi not in allowed:
                    problem = "not among the given premises"
                dep = kind == "hyp"
            elif kind == "taut":
                try:
                    if not is_tautology(phi):
                        problem = "not a propositional tautology"
                except ValueError as exc:
                    problem = str(exc)
            elif kind == "ax":
                if just.schema not in sysm.axioms:
                    problem = f"{just.schema} is not an axiom of {sysm.name}"
                else:
                    problem = _match_axiom(line, script.declarations)
            elif kind == "eq":
                if "eq" not in sysm.rules:
                    problem = f"{sysm.name} has no eq rule"
                else:
                    problem = _match_eq(line)
            elif kind in ("mp", "ug-nec", "ug-suff"):
                if kind not in sysm.rules:
                    problem = f"{sysm.name} has no {kind} rule"
                elif any(not 1 <= r < line.number for r in just.refs):
                    problem = "references must point to earlier lines"
                elif kind == "mp":
                    i, j = just.refs
                    a, b = formulas[i - 1], formulas[j - 1]
                    if b != implies(a, phi) and a == implies(b, phi):
                        a, b = b, a
                    if b != implies(a, phi):
                        problem = f"line {j} is not line {i} -> this line"
                    dep = dependent[i - 1] or dependent[j - 1]
                else:
                    (i,) = just.refs
                    src = formulas[i - 1]
                    if dependent[i - 1]:
                        problem = f"line {i} depends on hypotheses; generalization needs a theorem"
                    elif kind == "ug-nec":
                        if not (isinstance(phi, Nec) and phi.weight == Weight(ONE) and phi.index is None
                                and _dn_equal(phi.arg, src)):
                            problem = f"expected [1]_{src.sort.value} applied to line {i}"
                    else:
                        if not isinstance(src, Neg):
                            problem = f"line {i} is not a negation"
                        elif not (isinstance(phi, Suff) and phi.weight == Weight(ONE) and phi.index is None
                                  and _dn_equal(phi.arg, src.arg)):
                            problem = f"expected [[1]]_{src.sort.value} applied to the negand of line {i}"
        ok = problem is None
        verdicts.append(LineVerdict(line.number, ok, problem or "", dep))
        formulas.append(phi)
        dependent.append(dep)
    accepted = bool(script.lines) and all(v.ok for v in verdicts)
    return Verdict(accepted, sysm.name, tuple(verdicts), script.conclusion)


# --------------------------------------------------------------------------
# translating whole scripts between the fragments


_TO_NEC = {"K[[c]]": "K[c]", "K[[c+]]": "K[c+]", "B[[c]]": "B[c]", "B[[c+]]": "B[c+]",
           "BK_ii": "BK_i", "BK_iv": "BK_iii", "BK_vi": "BK_v"}
_TO_SUFF = {v: k for k, v in _TO_NEC.items()}
# schemas whose phi binding must absorb the negation that the translation adds
_NEGATED_PHI = {"BK_i", "BK_ii", "BK_iii", "BK_iv", "BK_v", "BK_vi"}


def translate_script(script: ProofScript | str, direction: str) -> ProofScript:
    """Apply the fragment translation to every line and rewrite the
    justifications so the result is a proof in the other fragment."""
    if isinstance(script, str):
        script = parse_script(script)
    to_nec = direction.replace("->", "2").lower() == "suff2nec"
    names = _TO_NEC if to_nec else _TO_SUFF
    rule_map = {"ug-suff": "ug-nec"} if to_nec else {"ug-nec": "ug-suff"}
    out = []
    for line in script.lines:
        just = line.justification
        new_formula = translate_rho(line.formula, direction)
        if just.kind == "ax":
            if just.schema not in names:
                raise ScriptError(f"{just.schema} has no counterpart in the other fragment", line.number)
            target = names[just.schema]
            binds = {}
            for key, text in just.bindings_text.items():
                if key in ("phi", "psi"):
                    f = translate_rho(parse(text, declarations=script.declarations), direction)
                    if key == "phi" and target in _NEGATED_PHI:
                        f = Neg(f)
                    binds[key] = f"({f})"
                else:
                    binds[key] = text
            just = Justification("ax", target, binds)
        elif just.kind in rule_map:
            just = Justification(rule_map[just.kind], refs=just.refs)
        out.append(ProofLine(line.number, new_formula, just))
    return ProofScript(tuple(out), script.declarations)


# --------------------------------------------------------------------------
# soundness fuzzing


@dataclass(frozen=True)
class Counterexample:
    schema: str
    formula: Formula
    model: object
    world: str
    minimized: object

    def describe(self) -> str:
        return f"{self.schema}: {self.formula} fails at {self.world}"


@dataclass(frozen=True)
class FuzzReport:
    seed: int
    trials: int
    instances: int
    ug_nec_checks: int
    ug_suff_checks: int
    counterexamples: tuple[Counterexample, ...]
    per_schema: Mapping[str, int]

    @property
    def sound(self) -> bool:
        return not self.counterexamples


def _random_bindings(rng: random.Random, sch: AxiomSchema, grid: Sequence[Fraction], sort: Sort,
                     formula: Callable[[Sort], Formula], index_names: Sequence[str] = ()) -> Bindings:
    from .generators import random_degree, random_degree_pair, random_index

    kw: dict = {}
    if "d" in sch.params:
        pool = sorted(set(grid) | {ZERO, ONE})
        kw["c"], kw["d"] = random_degree_pair(rng, pool)
    elif "c" in sch.params:
        kw["c"] = random_degree(rng, grid)
        if sch.name in ("B[c+]", "B[[c+]]"):
            while kw["c"] >= ONE:
                kw["c"] = random_degree(rng, grid)
    if "phi" in sch.params:
        kw["phi"] = formula(sort)
    if "psi" in sch.params:
        kw["psi"] = formula(sort)
    if "i" in sch.params:
        kw["i"] = random_index(rng, index_names, 2)
    if "j" in sch.params:
        kw["j"] = random_index(rng, index_names, 2)
    if sch.forms > 1:
        kw["form"] = rng.randint(1, sch.forms)
    return Bindings(**kw)


def restrict_model(model, sort: Sort, drop: int):
    """Delete one element (by index) from one domain of a model."""
    from .multirel import MultiContext
    from .semantics import Model

    ctx = model.context

    def squeeze(mask: int) -> int:
        low = mask & ((1 << drop) - 1)
        return low | ((mask >> (drop + 1)) << drop)

    def cut_matrix(rows):
        if sort is Sort.OBJECT:
            return tuple(r for k, r in enumerate(rows) if k != drop)
        return tuple(tuple(v for k, v in enumerate(r) if k != drop) for r in rows)

    objects = tuple(g for k, g in enumerate(ctx.objects) if not (sort is Sort.OBJECT and k == drop))
    attributes = tuple(m for k, m in enumerate(ctx.attributes) if not (sort is Sort.PROPERTY and k == drop))
    if isinstance(ctx, MultiContext):
        new_ctx = MultiContext(objects, attributes, {k: cut_matrix(v) for k, v in ctx.relations.items()})
    else:
        new_ctx = FuzzyContext(objects, attributes, cut_matrix(ctx.incidence))
    v1 = {k: squeeze(v) if sort is Sort.OBJECT else v for k, v in model.v1.items()}
    v2 = {k: squeeze(v) if sort is Sort.PROPERTY else v for k, v in model.v2.items()}
    return Model(new_ctx, v1, v2)


def minimize_witness(model, phi: Formula):
    """Greedily delete domain elements while ``phi`` still fails somewhere."""
    from .semantics import Evaluator

    def fails(m) -> bool:
        return Evaluator(m).mask(phi) != full_mask(m.context.size(phi.sort))

    changed = True
    while changed:
        changed = False
        for sort in (Sort.OBJECT, Sort.PROPERTY):
            n = model.context.size(sort)
            if n <= 1:
                continue
            for k in range(n):
                smaller = restrict_model(model, sort, k)
                if fails(smaller):
                    model, changed = smaller, True
                    break
            if changed:
                break
    return model


def soundness_fuzz(trials: int = 1000, max_domain: int = 4, schema_filter: Optional[Iterable[str]] = None,
                   seed: int = 0, formulas_per_schema: int = 2, formula_depth: int = 2,
                   stop_at_first: bool = False) -> FuzzReport:
    """Check schema instances and both generalization rules on random models.

    ``schema_filter`` selects schemas by name (mutants included); by default
    every non-indexed schema is tried. Indexed schemas are exercised on
    multi-relational models by :func:`check_bm_axioms`.
    """
    from .generators import random_context, random_formula, random_model, rational_grid
    from .semantics import Evaluator

    rng = random.Random(seed)
    names = list(schema_filter) if schema_filter is not None else [n for n in SCHEMAS if n not in BM]
    chosen = [schema(n) for n in names]
    counter: list[Counterexample] = []
    per_schema = {s.name: 0 for s in chosen}
    instances = ug_nec = ug_suff = 0
    for _ in range(trials):
        grid = rational_grid(rng)
        ctx = random_context(rng, rng.randint(1, max_domain), rng.randint(1, max_domain), grid)
        model = random_model(rng, ctx)
        ev = Evaluator(model)
        degrees = sorted(set(grid) | {ONE - g for g in grid})

        def formula(sort: Sort) -> Formula:
            return random_formula(rng, sort, rng.randint(0, formula_depth), degrees)

        valid_samples: list[Formula] = []
        for sch in chosen:
            for _ in range(formulas_per_schema):
                sort = rng.choice((Sort.OBJECT, Sort.PROPERTY))
                inst = sch.instantiate(_random_bindings(rng, sch, degrees, sort, formula))
                instances += 1
                per_schema[sch.name] += 1
                bad = full_mask(ctx.size(inst.sort)) & ~ev.mask(inst)
                if bad:
                    world = ctx.universe(inst.sort)[(bad & -bad).bit_length() - 1]
                    counter.append(Counterexample(sch.name, inst, model, world, minimize_witness(model, inst)))
                    if stop_at_first:
                        return FuzzReport(seed, trials, instances, ug_nec, ug_suff, tuple(counter), per_schema)
                else:
                    valid_samples.append(inst)
        # generalization rules: use formulas valid in this model (axiom
        # instances and any random formula that happens to be valid)
        extra = [formula(rng.choice((Sort.OBJECT, Sort.PROPERTY))) for _ in range(4)]
        for f in valid_samples[:6] + extra:
            full = full_mask(ctx.size(f.sort))
            m = ev.mask(f)
            if m == full:
                ug_nec += 1
                g = Nec(Weight(ONE), f.sort, f)
                if ev.mask(g) != full_mask(ctx.size(g.sort)):
                    counter.append(Counterexample("ug-nec", g, model, "", model))
            if m == 0 or (m == full):
                target = f if m == 0 else Neg(f)
                ug_suff += 1
                g = Suff(Weight(ONE), target.sort, target)
                if ev.mask(g) != full_mask(ctx.size(g.sort)):
                    counter.append(Counterexample("ug-suff", g, model, "", model))
    return FuzzReport(seed, trials, instances, ug_nec, ug_suff, tuple(counter), per_schema)


def check_bm_axioms(trials: int = 500, max_domain: int = 3, primitives: Sequence[str] = ("a", "b", "c"),
                    seed: int = 0, per_schema: int = 2, formula_depth: int = 2,
                    schemas: Optional[Iterable[str]] = None) -> FuzzReport:
    """Validity of the multi-relational axioms on random multi-relational models."""
    from .generators import FormulaShape, random_formula, random_model, rational_grid
    from .multirel import random_multicontext
    from .semantics import Evaluator

    rng = random.Random(seed)
    chosen = [schema(n) for n in (schemas if schemas is not None else sorted(BM))]
    counter: list[Counterexample] = []
    counts = {s.name: 0 for s in chosen}
    instances = 0
    for _ in range(trials):
        names = list(primitives[:rng.randint(1, len(primitives))])
        grid = rational_grid(rng)
        mctx = random_multicontext(rng, rng.randint(1, max_domain), rng.randint(1, max_domain), names, grid)
        model = random_model(rng, mctx)
        ev = Evaluator(model)
        degrees = sorted(set(grid) | {ONE - g for g in grid})
        shape = FormulaShape(indices=tuple(names))

        def formula(sort: Sort) -> Formula:
            return random_formula(rng, sort, rng.randint(0, formula_depth), degrees, shape=shape)

        for sch in chosen:
            for _ in range(per_schema):
                sort = rng.choice((Sort.OBJECT, Sort.PROPERTY))
                inst = sch.instantiate(_random_bindings(rng, sch, degrees, sort, formula, names))
                instances += 1
                counts[sch.name] += 1
                bad = full_mask(mctx.size(inst.sort)) & ~ev.mask(inst)
                if bad:
                    world = mctx.universe(inst.sort)[(bad & -bad).bit_length() - 1]
                    counter.append(Counterexample(sch.name, inst, model, world, minimize_witness(model, inst)))
    return FuzzReport(seed, trials, instances, 0, 0, tuple(counter), counts)

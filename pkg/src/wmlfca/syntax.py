"""Two-sorted weighted modal formulas: AST, parser, printer, translations.

Concrete syntax::

    formula := iff
    iff     := imp ('<->' iff)?          right associative
    imp     := or ('->' imp)?            right associative
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '!' unary | MOD unary | atom | '(' formula ')'
    MOD     := '[' W ']_t'  '[' W '+]_t'  '[[' W ']]_t'  '[[' W '+]]_t'
             | '<' W ']_t' ...           (angle forms, derived)
             each optionally followed by '^' INDEX

``t`` is ``o`` or ``p`` and names the sort of the modality's argument.
Weights are decimals or ``num/den``. A leading ``{o: a b; p: c}`` block
declares atom sorts; undeclared atoms take whatever sort their position
demands.

Only negation, conjunction, atoms and the two primitive modalities exist
in the AST. ``->``, ``|``, ``<->`` and the angle modalities are expanded
while parsing: ``a -> b`` is ``!(a & !b)``, ``a | b`` is ``!(!a & !b)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Mapping, Optional

from . import indices as ix
from .core import ONE, ZERO, DegreeError, Sort, SortError, degree, format_degree


class ParseError(ValueError):
    """Malformed formula text. ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int = 0, text: str = "") -> None:
        self.position = position
        self.text = text
        super().__init__(f"{message} (at position {position})")


class FormulaSortError(ParseError, SortError):
    pass


class FragmentError(ValueError):
    pass


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Weight:
    degree: Fraction
    strict: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "degree", degree(self.degree))

    def __str__(self) -> str:
        return format_degree(self.degree) + ("+" if self.strict else "")


class Formula:
    """Base class. Nodes are immutable, hashable, and sort-correct by
    construction; ``sort`` is computed, and the hash is cached because
    model checking memoizes on formulas."""

    __slots__ = ()
    sort: Sort
    _hash: int

    def _key(self) -> tuple:
        raise NotImplementedError

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:  # type: ignore[attr-defined]
            return False
        return self._key() == other._key()  # type: ignore[attr-defined]

    def __ne__(self, other: object) -> bool:
        return not self == other

    def __str__(self) -> str:
        return format_formula(self)


def _init(node: Formula, sort: Sort) -> None:
    object.__setattr__(node, "sort", sort)
    object.__setattr__(node, "_hash", hash((type(node).__name__,) + node._key()))


@dataclass(frozen=True, eq=False, repr=True)
class Atom(Formula):
    name: str
    atom_sort: Sort
    sort: Sort = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _init(self, self.atom_sort)

    def _key(self) -> tuple:
        return (self.name, self.atom_sort)

    __hash__ = Formula.__hash__
    __eq__ = Formula.__eq__


@dataclass(frozen=True, eq=False)
class Neg(Formula):
    arg: Formula
    sort: Sort = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _init(self, self.arg.sort)

    def _key(self) -> tuple:
        return (self.arg,)

    __hash__ = Formula.__hash__
    __eq__ = Formula.__eq__


@dataclass(frozen=True, eq=False)
class Conj(Formula):
    left: Formula
    right: Formula
    sort: Sort = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.left.sort is not self.right.sort:
            raise SortError("conjunction of formulas of different sorts")
        _init(self, self.left.sort)

    def _key(self) -> tuple:
        return (self.left, self.right)

    __hash__ = Formula.__hash__
    __eq__ = Formula.__eq__


class Modal(Formula):
    """Shared behaviour of the two primitive modalities.

    ``tag`` is the sort of the argument; the modal formula has the other
    sort. ``index`` is an index term for the multi-relational language.
    """

    __slots__ = ()
    weight: Weight
    tag: Sort
    arg: Formula
    index: Optional[ix.IndexTerm]

    def _check(self) -> None:
        if self.arg.sort is not self.tag:
            raise SortError(f"modality tagged _{self.tag.value} applied to a formula of sort "
                            f"{self.arg.sort.value}")
        _init(self, self.tag.other)

    def _key(self) -> tuple:
        return (self.weight, self.tag, self.arg, self.index)

    def with_arg(self, arg: Formula) -> "Modal":
        return type(self)(self.weight, self.tag, arg, self.index)  # type: ignore[call-arg]


@dataclass(frozen=True, eq=False)
class Nec(Modal):
    """Necessity ``[c]_t`` / ``[c+]_t``."""

    weight: Weight
    tag: Sort
    arg: Formula
    index: Optional[ix.IndexTerm] = None
    sort: Sort = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._check()

    __hash__ = Formula.__hash__
    __eq__ = Formula.__eq__


@dataclass(frozen=True, eq=False)
class Suff(Modal):
    """Sufficiency ``[[c]]_t`` / ``[[c+]]_t``."""

    weight: Weight
    tag: Sort
    arg: Formula
    index: Optional[ix.IndexTerm] = None
    sort: Sort = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._check()

    __hash__ = Formula.__hash__
    __eq__ = Formula.__eq__


def implies(a: Formula, b: Formula) -> Formula:
    return Neg(Conj(a, Neg(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Neg(Conj(Neg(a), Neg(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return Conj(implies(a, b), implies(b, a))


def conj_all(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Conj(out, p)
    return out


def nec(c: object, tag: Sort, arg: Formula, strict: bool = False, index=None) -> Nec:
    return Nec(Weight(degree(c), strict), tag, arg, index)


def suff(c: object, tag: Sort, arg: Formula, strict: bool = False, index=None) -> Suff:
    return Suff(Weight(degree(c), strict), tag, arg, index)


DerivedKind = Literal["pos", "pos_strict", "suff_dual", "suff_dual_strict"]


def expand_derived(kind: DerivedKind, c: object, arg: Formula, index=None) -> Formula:
    """Definitional expansion of the dual modalities.

    ``<c>a = ![(1-c)+]!a``, ``<c+>a = ![1-c]!a``, and the same with
    sufficiency for the double-angle forms. The tag is the sort of ``arg``.
    """
    c = degree(c)
    tag = arg.sort
    if kind == "pos":
        return Neg(Nec(Weight(ONE - c, True), tag, Neg(arg), index))
    if kind == "pos_strict":
        return Neg(Nec(Weight(ONE - c, False), tag, Neg(arg), index))
    if kind == "suff_dual":
        return Neg(Suff(Weight(ONE - c, True), tag, Neg(arg), index))
    if kind == "suff_dual_strict":
        return Neg(Suff(Weight(ONE - c, False), tag, Neg(arg), index))
    raise ValueError(f"unknown derived modality {kind!r}")


# --------------------------------------------------------------------------
# traversal helpers


def subformulas(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        f = stack.pop()
        yield f
        if isinstance(f, Neg):
            stack.append(f.arg)
        elif isinstance(f, Conj):
            stack.extend((f.right, f.left))
        elif isinstance(f, Modal):
            stack.append(f.arg)


def atoms(phi: Formula) -> set[Atom]:
    return {f for f in subformulas(phi) if isinstance(f, Atom)}


def modal_depth(phi: Formula) -> int:
    if isinstance(phi, Atom):
        return 0
    if isinstance(phi, Neg):
        return modal_depth(phi.arg)
    if isinstance(phi, Conj):
        return max(modal_depth(phi.left), modal_depth(phi.right))
    return 1 + modal_depth(phi.arg)  # type: ignore[attr-defined]


def depth(phi: Formula) -> int:
    """Constructor depth: atoms 0, every connective or modality adds 1."""
    if isinstance(phi, Atom):
        return 0
    if isinstance(phi, Conj):
        return 1 + max(depth(phi.left), depth(phi.right))
    return 1 + depth(phi.arg)  # type: ignore[attr-defined]


def in_necessity_fragment(phi: Formula) -> bool:
    return not any(isinstance(f, Suff) for f in subformulas(phi))


def in_sufficiency_fragment(phi: Formula) -> bool:
    return not any(isinstance(f, Nec) for f in subformulas(phi))


def is_indexed(phi: Formula) -> bool:
    return any(isinstance(f, Modal) and f.index is not None for f in subformulas(phi))


def double_negation_normal(phi: Formula) -> Formula:
    """Remove every ``!!`` pair, also under modalities."""
    if isinstance(phi, Atom):
        return phi
    if isinstance(phi, Neg):
        if isinstance(phi.arg, Neg):
            return double_negation_normal(phi.arg.arg)
        return Neg(double_negation_normal(phi.arg))
    if isinstance(phi, Conj):
        return Conj(double_negation_normal(phi.left), double_negation_normal(phi.right))
    assert isinstance(phi, Modal)
    return phi.with_arg(double_negation_normal(phi.arg))


# --------------------------------------------------------------------------
# degree sets


@dataclass(frozen=True)
class DegreeSet:
    """A finite set of degrees containing 0 and 1, closed under ``1 - c``."""

    degrees: frozenset[Fraction]

    def __post_init__(self) -> None:
        ds = {degree(d) for d in self.degrees} | {ZERO, ONE}
        ds |= {ONE - d for d in ds}
        object.__setattr__(self, "degrees", frozenset(ds))

    @classmethod
    def of(cls, values: Iterable[object]) -> "DegreeSet":
        return cls(frozenset(degree(v) for v in values))

    def descending(self) -> list[Fraction]:
        return sorted(self.degrees, reverse=True)

    def __contains__(self, d: object) -> bool:
        return d in self.degrees

    def __iter__(self) -> Iterator[Fraction]:
        return iter(sorted(self.degrees))

    def __len__(self) -> int:
        return len(self.degrees)

    def __or__(self, other: "DegreeSet") -> "DegreeSet":
        return DegreeSet(self.degrees | other.degrees)

    def issubset(self, other: "DegreeSet") -> bool:
        return self.degrees <= other.degrees


def deg_of(phi: Formula | Iterable[Formula]) -> DegreeSet:
    """Degrees occurring in a formula (or a set of formulas), with their
    complements and the bounds 0 and 1."""
    formulas = [phi] if isinstance(phi, Formula) else list(phi)
    found = set()
    for f in formulas:
        for sub in subformulas(f):
            if isinstance(sub, Modal):
                found.add(sub.weight.degree)
    return DegreeSet(frozenset(found))


# --------------------------------------------------------------------------
# fragment translation


def translate_rho(phi: Formula, direction: str) -> Formula:
    """Swap sufficiency and necessity, inserting a negation under the modality.

    ``direction`` is ``"suff2nec"`` (``[[x]]_t a`` becomes ``[x]_t !a``) or
    ``"nec2suff"`` (the inverse map). Atoms, ``!`` and ``&`` are kept.
    """
    direction = direction.replace("->", "2").replace("→", "2").lower()
    if direction not in ("suff2nec", "nec2suff"):
        raise ValueError(f"unknown translation direction {direction!r}")
    if direction == "suff2nec":
        if not in_sufficiency_fragment(phi):
            raise FragmentError("suff2nec needs a formula without necessity modalities")
        return _rho(phi, Suff, Nec)
    if not in_necessity_fragment(phi):
        raise FragmentError("nec2suff needs a formula without sufficiency modalities")
    return _rho(phi, Nec, Suff)


def _rho(phi: Formula, src: type, dst: type) -> Formula:
    if isinstance(phi, Atom):
        return phi
    if isinstance(phi, Neg):
        return Neg(_rho(phi.arg, src, dst))
    if isinstance(phi, Conj):
        return Conj(_rho(phi.left, src, dst), _rho(phi.right, src, dst))
    assert isinstance(phi, src)
    return dst(phi.weight, phi.tag, Neg(_rho(phi.arg, src, dst)), phi.index)


# --------------------------------------------------------------------------
# printer

_IFF, _IMP, _OR, _AND, _UNARY = 1, 2, 3, 4, 5


def _as_imp(phi: Formula) -> Optional[tuple[Formula, Formula]]:
    if isinstance(phi, Neg) and isinstance(phi.arg, Conj) and isinstance(phi.arg.right, Neg):
        return phi.arg.left, phi.arg.right.arg
    return None


def _render(phi: Formula) -> tuple[str, int]:
    if isinstance(phi, Atom):
        return phi.name, _UNARY
    if isinstance(phi, Conj):
        left_imp, right_imp = _as_imp(phi.left), _as_imp(phi.right)
        if left_imp and right_imp and left_imp == (right_imp[1], right_imp[0]):
            a, b = left_imp
            return f"{_wrap(a, _IMP)} <-> {_wrap(b, _IFF)}", _IFF
        return f"{_wrap(phi.left, _AND)} & {_wrap(phi.right, _UNARY)}", _AND
    imp = _as_imp(phi)
    if imp is not None:
        a, b = imp
        if isinstance(a, Neg):
            return f"{_wrap(a.arg, _OR)} | {_wrap(b, _AND)}", _OR
        return f"{_wrap(a, _OR)} -> {_wrap(b, _IMP)}", _IMP
    if isinstance(phi, Neg):
        return "!" + _wrap(phi.arg, _UNARY), _UNARY
    assert isinstance(phi, Modal)
    return f"{format_modality(phi)} {_wrap(phi.arg, _UNARY)}", _UNARY


def _wrap(phi: Formula, needed: int) -> str:
    text, level = _render(phi)
    return text if level >= needed else f"({text})"


def format_modality(phi: Modal) -> str:
    open_, close = ("[", "]") if isinstance(phi, Nec) else ("[[", "]]")
    text = f"{open_}{phi.weight}{close}_{phi.tag.value}"
    if phi.index is not None:
        idx = ix.format_index(phi.index, top=False)
        text += "^" + idx
    return text


def format_formula(phi: Formula) -> str:
    return _render(phi)[0]


# --------------------------------------------------------------------------
# lexer

_WEIGHT = r"(\d+(?:\.\d*)?(?:\s*/\s*\d+)?|\.\d+(?:\s*/\s*\d+)?)"
_MOD_RE = re.compile(r"(\[\[|\[|<<|<)\s*" + _WEIGHT + r"\s*(\+?)\s*(\]\]|\]|>>|>)_([op])\b")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_CLOSERS = {"[[": "]]", "[": "]", "<<": ">>", "<": ">"}


@dataclass
class Token:
    kind: str
    value: object
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("<->", i):
            out.append(Token("<->", None, i))
            i += 3
            continue
        if text.startswith("->", i):
            out.append(Token("->", None, i))
            i += 2
            continue
        if ch in "[<":
            m = _MOD_RE.match(text, i)
            if m is None:
                raise ParseError("malformed modality", i, text)
            opener, weight_text, plus, closer, tag = m.groups()
            if _CLOSERS[opener] != closer:
                raise ParseError(f"modality opened with {opener!r} but closed with {closer!r}", i, text)
            try:
                w = degree(weight_text.replace(" ", ""))
            except DegreeError as exc:
                raise ParseError(f"bad weight: {exc}", i, text) from None
            kind = {"[": "nec", "[[": "suff", "<": "pos", "<<": "suff_dual"}[opener]
            out.append(Token("MOD", (kind, Weight(w, bool(plus)), Sort.parse(tag)), i))
            i = m.end()
            continue
        if ch in "!&|()^~{};:,":
            out.append(Token(ch, None, i))
            i += 1
            continue
        if ch == "0":
            out.append(Token("ZERO", None, i))
            i += 1
            continue
        m = _NAME_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {ch!r}", i, text)
        out.append(Token("NAME", m.group(), i))
        i = m.end()
    out.append(Token("EOF", None, n))
    return out


# --------------------------------------------------------------------------
# parser: raw tree first, sorts assigned afterwards


@dataclass
class _Raw:
    kind: str  # atom, neg, and, mod
    pos: int
    children: tuple = ()
    name: str = ""
    mod: tuple = ()
    index: Optional[ix.IndexTerm] = None


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self, kind: Optional[str] = None) -> Token:
        tok = self.tokens[self.i]
        if kind is not None and tok.kind != kind:
            want = "end of input" if kind == "EOF" else repr(kind)
            raise ParseError(f"expected {want}, found {self._describe(tok)}", tok.pos, self.text)
        self.i += 1
        return tok

    def _describe(self, tok: Token) -> str:
        if tok.kind == "EOF":
            return "end of input"
        if tok.kind == "NAME":
            return repr(tok.value)
        return repr(self.text[tok.pos:tok.pos + 3].strip() or tok.kind)

    def declarations(self) -> dict[str, Sort]:
        decl: dict[str, Sort] = {}
        if self.peek().kind != "{":
            return decl
        self.take("{")
        while self.peek().kind != "}":
            tok = self.take("NAME")
            if tok.value not in ("o", "p"):
                raise ParseError("declaration groups start with 'o:' or 'p:'", tok.pos, self.text)
            sort = Sort.parse(str(tok.value))
            self.take(":")
            while self.peek().kind == "NAME":
                name = self.take("NAME")
                if name.value in decl and decl[str(name.value)] is not sort:
                    raise FormulaSortError(f"{name.value!r} declared with both sorts", name.pos, self.text)
                decl[str(name.value)] = sort
                if self.peek().kind == ",":
                    self.take(",")
            if self.peek().kind == ";":
                self.take(";")
            elif self.peek().kind != "}":
                raise ParseError("expected ';' or '}' in declarations", self.peek().pos, self.text)
        self.take("}")
        return decl

    def formula(self) -> _Raw:
        return self.iff()

    def iff(self) -> _Raw:
        left = self.imp()
        if self.peek().kind == "<->":
            tok = self.take()
            right = self.iff()
            return _Raw("iff", tok.pos, (left, right))
        return left

    def imp(self) -> _Raw:
        left = self.disj()
        if self.peek().kind == "->":
            tok = self.take()
            right = self.imp()
            return _Raw("imp", tok.pos, (left, right))
        return left

    def disj(self) -> _Raw:
        node = self.conj()
        while self.peek().kind == "|":
            tok = self.take()
            node = _Raw("or", tok.pos, (node, self.conj()))
        return node

    def conj(self) -> _Raw:
        node = self.unary()
        while self.peek().kind == "&":
            tok = self.take()
            node = _Raw("and", tok.pos, (node, self.unary()))
        return node

    def unary(self) -> _Raw:
        tok = self.peek()
        if tok.kind == "!":
            self.take()
            return _Raw("neg", tok.pos, (self.unary(),))
        if tok.kind == "MOD":
            self.take()
            index = None
            if self.peek().kind == "^":
                self.take()
                index = self.index_unary()
            return _Raw("mod", tok.pos, (self.unary(),), mod=tok.value, index=index)  # type: ignore[arg-type]
        if tok.kind == "NAME":
            self.take()
            return _Raw("atom", tok.pos, name=str(tok.value))
        if tok.kind == "(":
            self.take()
            node = self.formula()
            self.take(")")
            return node
        raise ParseError(f"expected a formula, found {self._describe(tok)}", tok.pos, self.text)

    # index terms: '|' union, '&' intersection, '~' complement
    def index_expr(self) -> ix.IndexTerm:
        node = self.index_inter()
        while self.peek().kind == "|":
            self.take()
            node = ix.Union(node, self.index_inter())
        return node

    def index_inter(self) -> ix.IndexTerm:
        node = self.index_unary()
        while self.peek().kind == "&":
            self.take()
            node = ix.Inter(node, self.index_unary())
        return node

    def index_unary(self) -> ix.IndexTerm:
        tok = self.peek()
        if tok.kind == "~":
            self.take()
            return ix.Compl(self.index_unary())
        if tok.kind == "ZERO":
            self.take()
            return ix.Zero()
        if tok.kind == "NAME":
            self.take()
            return ix.Prim(str(tok.value))
        if tok.kind == "(":
            self.take()
            node = self.index_expr()
            self.take(")")
            return node
        raise ParseError(f"expected an index term, found {self._describe(tok)}", tok.pos, self.text)


def _infer_top(raw: _Raw, decl: Mapping[str, Sort]) -> Optional[Sort]:
    """Find a sort for the whole formula from the first constraint met."""
    stack: list[tuple[_Raw, bool]] = [(raw, False)]
    while stack:
        node, flipped = stack.pop()
        if node.kind == "mod":
            own = node.mod[2].other
            return own.other if flipped else own
        if node.kind == "atom" and node.name in decl:
            s = decl[node.name]
            return s.other if flipped else s
        for child in reversed(node.children):
            stack.append((child, flipped))
    return None


def _typed(raw: _Raw, sort: Sort, decl: Mapping[str, Sort], text: str) -> Formula:
    k = raw.kind
    if k == "atom":
        declared = decl.get(raw.name)
        if declared is not None and declared is not sort:
            raise FormulaSortError(
                f"atom {raw.name!r} is declared {declared.value} but used where a "
                f"{sort.value} formula is required", raw.pos, text)
        return Atom(raw.name, sort)
    if k == "neg":
        return Neg(_typed(raw.children[0], sort, decl, text))
    if k in ("and", "or", "imp", "iff"):
        a = _typed(raw.children[0], sort, decl, text)
        b = _typed(raw.children[1], sort, decl, text)
        return {"and": Conj, "or": disj, "imp": implies, "iff": iff}[k](a, b)
    kind, weight, tag = raw.mod
    if tag.other is not sort:
        raise FormulaSortError(
            f"modality tagged _{tag.value} yields a {tag.other.value} formula but a "
            f"{sort.value} formula is required", raw.pos, text)
    arg = _typed(raw.children[0], tag, decl, text)
    if kind == "nec":
        return Nec(weight, tag, arg, raw.index)
    if kind == "suff":
        return Suff(weight, tag, arg, raw.index)
    derived = ("pos" if kind == "pos" else "suff_dual") + ("_strict" if weight.strict else "")
    return expand_derived(derived, weight.degree, arg, raw.index)  # type: ignore[arg-type]


def parse(text: str, expected_sort: Optional[Sort] = None,
          declarations: Optional[Mapping[str, Sort]] = None) -> Formula:
    """Parse concrete syntax into a sort-correct formula.

    Raises :class:`ParseError` (or its subclass :class:`FormulaSortError`)
    carrying the offending position.
    """
    p = _Parser(text)
    decl = dict(declarations or {})
    decl.update(p.declarations())
    raw = p.formula()
    p.take("EOF")
    sort = expected_sort or _infer_top(raw, decl) or Sort.OBJECT
    return _typed(raw, sort, decl, text)


def parse_index(text: str) -> ix.IndexTerm:
    p = _Parser(text)
    term = p.index_expr()
    p.take("EOF")
    return term


def parse_declarations(text: str) -> dict[str, Sort]:
    """Read a stand-alone ``{o: ...; p: ...}`` block."""
    p = _Parser(text)
    decl = p.declarations()
    p.take("EOF")
    return decl

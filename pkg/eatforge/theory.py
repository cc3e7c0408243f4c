"""Finitely presented essentially algebraic theories.

Theories are partial Horn presentations: sorts, partial operation symbols and
axioms whose premises and conclusions are conjunctions of equality and
definedness atoms. This module holds the immutable syntax, the `.eat` text
format, validation diagnostics and theory morphisms.

DSL grammar (one declaration per line, `#` starts a comment):

    theory NAME
    sort NAME [rank N]
    op NAME : [SORT ...] -> SORT [total]
    axiom NAME [x:SORT, ...] : ATOMS |- ATOMS

ATOMS is a possibly empty `&`-separated list of `TERM = TERM` or `def TERM`.
A TERM is a context variable or `op(TERM, ...)`; constants are written `c()`.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from eatforge.errors import TheoryParseError
from eatforge.jsonio import dumps_line

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

    from eatforge.jsonio import JSONValue

log = logging.getLogger("eatforge.theory")

# =============================================================================
# SYNTAX
# =============================================================================


@dataclass(frozen=True)
class Sort:
    """A sort, optionally annotated with a rank index."""

    name: str
    rank: int | None = None


@dataclass(frozen=True)
class OpSymbol:
    """A partial operation symbol.

    `total` is documentation only: definedness is governed by axioms.
    """

    name: str
    arg_sorts: tuple[str, ...]
    result_sort: str
    total: bool = False

    @property
    def arity(self) -> int:
        """Number of arguments."""
        return len(self.arg_sorts)


@dataclass(frozen=True)
class Var:
    """A sorted variable. An empty sort marks a variable unbound by its context."""

    name: str
    sort: str


@dataclass(frozen=True)
class App:
    """Application of an operation symbol."""

    op: str
    args: tuple[Term, ...] = ()


type Term = Var | App


@dataclass(frozen=True)
class Eq:
    """Equality atom. In conclusions it asserts both sides defined and equal."""

    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Defined:
    """Definedness atom."""

    term: Term


type Atom = Eq | Defined


@dataclass(frozen=True)
class Axiom:
    """Horn sequent `context : premise |- conclusion`."""

    name: str
    context: tuple[Var, ...]
    premise: tuple[Atom, ...]
    conclusion: tuple[Atom, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TheoryPresentation:
    """A finite partial Horn presentation."""

    sorts: tuple[Sort, ...] = ()
    ops: tuple[OpSymbol, ...] = ()
    axioms: tuple[Axiom, ...] = ()
    name: str = ""

    @property
    def sort_names(self) -> tuple[str, ...]:
        """Declared sort names in order."""
        return tuple(s.name for s in self.sorts)

    @property
    def rank_annotations(self) -> dict[str, int]:
        """Map from ranked sort name to its rank."""
        return {s.name: s.rank for s in self.sorts if s.rank is not None}

    def op(self, name: str) -> OpSymbol | None:
        """Look up an operation symbol by name."""
        for symbol in self.ops:
            if symbol.name == name:
                return symbol
        return None

    def axiom(self, name: str) -> Axiom | None:
        """Look up an axiom by name."""
        for ax in self.axioms:
            if ax.name == name:
                return ax
        return None

    def extend(
        self,
        *,
        name: str | None = None,
        sorts: Iterable[Sort] = (),
        ops: Iterable[OpSymbol] = (),
        axioms: Iterable[Axiom] = (),
    ) -> TheoryPresentation:
        """Return a new presentation with extra declarations appended."""
        return TheoryPresentation(
            sorts=self.sorts + tuple(sorts),
            ops=self.ops + tuple(ops),
            axioms=self.axioms + tuple(axioms),
            name=self.name if name is None else name,
        )


def term_vars(term: Term) -> Iterator[Var]:
    """Yield variables of a term left to right (with repeats)."""
    if isinstance(term, Var):
        yield term
        return
    for arg in term.args:
        yield from term_vars(arg)


def atom_terms(atom: Atom) -> tuple[Term, ...]:
    """Terms occurring at the top of an atom."""
    if isinstance(atom, Eq):
        return (atom.lhs, atom.rhs)
    return (atom.term,)


def term_sort(theory: TheoryPresentation, term: Term) -> str | None:
    """Sort of a term, or None when its head symbol is undeclared."""
    if isinstance(term, Var):
        return term.sort or None
    symbol = theory.op(term.op)
    return symbol.result_sort if symbol is not None else None


def term_ops(term: Term) -> Iterator[str]:
    """Yield operation names occurring in a term."""
    if isinstance(term, App):
        yield term.op
        for arg in term.args:
            yield from term_ops(arg)


# =============================================================================
# PRETTY PRINTER
# =============================================================================


def format_term(term: Term) -> str:
    """Render a term in DSL syntax."""
    if isinstance(term, Var):
        return term.name
    return f"{term.op}({', '.join(format_term(a) for a in term.args)})"


def format_atom(atom: Atom) -> str:
    """Render an atom in DSL syntax."""
    if isinstance(atom, Eq):
        return f"{format_term(atom.lhs)} = {format_term(atom.rhs)}"
    return f"def {format_term(atom.term)}"


def format_axiom(axiom: Axiom) -> str:
    """Render one axiom declaration line."""
    context = ", ".join(f"{v.name}:{v.sort}" for v in axiom.context)
    premise = " & ".join(format_atom(a) for a in axiom.premise)
    conclusion = " & ".join(format_atom(a) for a in axiom.conclusion)
    head = f"axiom {axiom.name} [{context}] :"
    if premise:
        return f"{head} {premise} |- {conclusion}"
    return f"{head} |- {conclusion}"


def print_theory(theory: TheoryPresentation) -> str:
    """Render a presentation in the `.eat` grammar.

    Args:
        theory: Presentation to print.

    Returns:
        Text such that `parse_theory(print_theory(t)) == t` for valid `t`.

    """
    lines: list[str] = []
    if theory.name:
        lines.append(f"theory {theory.name}")
    for sort in theory.sorts:
        rank = f" rank {sort.rank}" if sort.rank is not None else ""
        lines.append(f"sort {sort.name}{rank}")
    for symbol in theory.ops:
        args = " ".join(symbol.arg_sorts)
        signature = f"{args} -> {symbol.result_sort}".lstrip()
        total = " total" if symbol.total else ""
        lines.append(f"op {symbol.name} : {signature}{total}")
    lines.extend(format_axiom(ax) for ax in theory.axioms)
    return "".join(f"{line}\n" for line in lines)


# =============================================================================
# PARSER
# =============================================================================

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<turnstile>\|-)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<num>\d+)|(?P<punct>[:,()\[\]&=]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line_no: int) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.lastgroup is None:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            msg = f"unexpected character {text[col - 1]!r}"
            raise TheoryParseError(msg, line_no, col)
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), match.start(kind) + 1))
        pos = match.end()
    return tokens


class _LineParser:
    """Recursive descent over the tokens of one declaration line."""

    def __init__(
        self,
        tokens: list[_Token],
        line_no: int,
        ops: Mapping[str, OpSymbol] | None = None,
    ) -> None:
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no
        self.ops = ops or {}
        self.context: dict[str, str] = {}

    def error(self, message: str) -> TheoryParseError:
        col = self.tokens[self.pos].col if self.pos < len(self.tokens) else 0
        if not col and self.tokens:
            last = self.tokens[-1]
            col = last.col + len(last.text)
        return TheoryParseError(message, self.line_no, col)

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at(self, text: str) -> bool:
        token = self.peek()
        return token is not None and token.text == text

    def take(self, text: str | None = None, kind: str | None = None) -> _Token:
        token = self.peek()
        if token is None:
            expected = text or kind or "token"
            msg = f"expected {expected!r}, found end of line"
            raise self.error(msg)
        if (text is not None and token.text != text) or (
            kind is not None and token.kind != kind
        ):
            expected = text or kind
            msg = f"expected {expected!r}, found {token.text!r}"
            raise self.error(msg)
        self.pos += 1
        return token

    def done(self) -> None:
        if self.peek() is not None:
            msg = f"unexpected trailing {self.tokens[self.pos].text!r}"
            raise self.error(msg)

    def term(self) -> Term:
        name = self.take(kind="ident").text
        if self.at("("):
            self.take("(")
            args: list[Term] = []
            if not self.at(")"):
                args.append(self.term())
                while self.at(","):
                    self.take(",")
                    args.append(self.term())
            self.take(")")
            return App(name, tuple(args))
        if name in self.context:
            return Var(name, self.context[name])
        symbol = self.ops.get(name)
        if symbol is not None and symbol.arity == 0:
            return App(name)
        return Var(name, "")

    def atom(self) -> Atom:
        token = self.peek()
        if token is not None and token.text == "def" and token.kind == "ident":
            self.take("def")
            return Defined(self.term())
        lhs = self.term()
        self.take("=")
        return Eq(lhs, self.term())

    def atoms(self, stop: str | None) -> tuple[Atom, ...]:
        if (stop is not None and self.at(stop)) or self.peek() is None:
            return ()
        found = [self.atom()]
        while self.at("&"):
            self.take("&")
            found.append(self.atom())
        return tuple(found)


def _check_sort(name: str, sorts: set[str], token: _Token, line_no: int) -> None:
    if name not in sorts:
        msg = f"unknown sort {name!r}"
        raise TheoryParseError(msg, line_no, token.col)


def decode_source(data: bytes) -> str:
    """Decode `.eat` bytes as UTF-8.

    Raises:
        TheoryParseError: Located at the first byte that is not UTF-8.

    """
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        col = exc.start - head.rfind(b"\n")
        msg = f"invalid UTF-8 byte 0x{data[exc.start]:02x}"
        raise TheoryParseError(msg, line, col) from exc


def parse_theory(text: str) -> TheoryPresentation:
    """Parse `.eat` source into a presentation.

    Args:
        text: DSL source.

    Returns:
        The parsed presentation. Scope and sorting problems inside axioms are
        left for `validate`.

    Raises:
        TheoryParseError: On syntax errors, duplicate names or unknown sorts
            in a signature declaration.

    """
    name = ""
    sorts: list[Sort] = []
    ops: dict[str, OpSymbol] = {}
    axioms: list[Axiom] = []
    sort_names: set[str] = set()
    axiom_names: set[str] = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = _tokenize(line, line_no)
        parser = _LineParser(tokens, line_no, ops)
        keyword = parser.take(kind="ident")
        match keyword.text:
            case "theory":
                if name:
                    msg = "duplicate theory header"
                    raise TheoryParseError(msg, line_no, keyword.col)
                name = parser.take(kind="ident").text
                parser.done()
            case "sort":
                token = parser.take(kind="ident")
                if token.text in sort_names:
                    msg = f"duplicate sort {token.text!r}"
                    raise TheoryParseError(msg, line_no, token.col)
                rank: int | None = None
                if parser.at("rank"):
                    parser.take("rank")
                    rank = int(parser.take(kind="num").text)
                parser.done()
                sort_names.add(token.text)
                sorts.append(Sort(token.text, rank))
            case "op":
                token = parser.take(kind="ident")
                if token.text in ops:
                    msg = f"duplicate op {token.text!r}"
                    raise TheoryParseError(msg, line_no, token.col)
                parser.take(":")
                arg_sorts: list[str] = []
                while not parser.at("->"):
                    sort_token = parser.take(kind="ident")
                    _check_sort(sort_token.text, sort_names, sort_token, line_no)
                    arg_sorts.append(sort_token.text)
                parser.take("->")
                result = parser.take(kind="ident")
                _check_sort(result.text, sort_names, result, line_no)
                total = False
                if parser.at("total"):
                    parser.take("total")
                    total = True
                parser.done()
                ops[token.text] = OpSymbol(
                    token.text, tuple(arg_sorts), result.text, total=total
                )
            case "axiom":
                axioms.append(_parse_axiom(parser, sort_names, axiom_names))
            case other:
                msg = f"unknown declaration {other!r}"
                raise TheoryParseError(msg, line_no, keyword.col)

    theory = TheoryPresentation(tuple(sorts), tuple(ops.values()), tuple(axioms), name)
    log.debug(
        "parsed theory %r: %s sorts, %s ops, %s axioms",
        name,
        len(theory.sorts),
        len(theory.ops),
        len(theory.axioms),
    )
    return theory


def _parse_axiom(
    parser: _LineParser, sort_names: set[str], axiom_names: set[str]
) -> Axiom:
    token = parser.take(kind="ident")
    if token.text in axiom_names:
        msg = f"duplicate axiom {token.text!r}"
        raise TheoryParseError(msg, parser.line_no, token.col)
    axiom_names.add(token.text)
    parser.take("[")
    context: list[Var] = []
    while not parser.at("]"):
        if context:
            parser.take(",")
        var_token = parser.take(kind="ident")
        parser.take(":")
        sort_token = parser.take(kind="ident")
        _check_sort(sort_token.text, sort_names, sort_token, parser.line_no)
        if var_token.text in parser.context:
            msg = f"duplicate variable {var_token.text!r}"
            raise TheoryParseError(msg, parser.line_no, var_token.col)
        parser.context[var_token.text] = sort_token.text
        context.append(Var(var_token.text, sort_token.text))
    parser.take("]")
    parser.take(":")
    premise = parser.atoms(stop="|-")
    parser.take("|-")
    conclusion = parser.atoms(stop=None)
    parser.done()
    return Axiom(token.text, tuple(context), premise, conclusion, line=parser.line_no)


def parse_term(
    text: str,
    theory: TheoryPresentation,
    variables: Mapping[str, str] | None = None,
) -> Term:
    """Parse a single term against a theory's signature.

    Args:
        text: Term source, e.g. `comp(g, f)`.
        theory: Signature used to resolve bare constant names.
        variables: Variable name to sort map.

    Returns:
        The parsed term.

    Raises:
        TheoryParseError: On syntax errors.

    """
    parser = _LineParser(_tokenize(text, 1), 1, {op.name: op for op in theory.ops})
    parser.context = dict(variables or {})
    term = parser.term()
    parser.done()
    return term


def parse_atom(
    text: str,
    theory: TheoryPresentation,
    variables: Mapping[str, str] | None = None,
) -> Atom:
    """Parse a single atom (`s = t` or `def t`)."""
    parser = _LineParser(_tokenize(text, 1), 1, {op.name: op for op in theory.ops})
    parser.context = dict(variables or {})
    atom = parser.atom()
    parser.done()
    return atom


# =============================================================================
# VALIDATION
# =============================================================================


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding."""

    severity: str
    message: str
    line: int = 0
    col: int = 0

    def to_json(self) -> dict[str, JSONValue]:
        """JSON object form."""
        return {
            "severity": self.severity,
            "message": self.message,
            "line": self.line,
            "col": self.col,
        }


def diagnostics_to_jsonl(diagnostics: Iterable[Diagnostic]) -> str:
    """Render diagnostics as JSON lines."""
    return "".join(f"{dumps_line(d.to_json())}\n" for d in diagnostics)


def _check_term(
    theory: TheoryPresentation,
    ops: Mapping[str, OpSymbol],
    context: Mapping[str, str],
    term: Term,
    where: str,
    line: int,
) -> list[Diagnostic]:
    found: list[Diagnostic] = []
    if isinstance(term, Var):
        if term.name not in context:
            found.append(
                Diagnostic("error", f"{where}: unbound variable {term.name}", line, 1)
            )
        elif term.sort and term.sort != context[term.name]:
            found.append(
                Diagnostic(
                    "error",
                    f"{where}: sort mismatch for variable {term.name}: "
                    f"{term.sort} vs {context[term.name]}",
                    line,
                    1,
                )
            )
        return found
    symbol = ops.get(term.op)
    if symbol is None:
        found.append(Diagnostic("error", f"{where}: undeclared op {term.op}", line, 1))
    elif symbol.arity != len(term.args):
        found.append(
            Diagnostic(
                "error",
                f"{where}: op {term.op} expects {symbol.arity} arguments, "
                f"got {len(term.args)}",
                line,
                1,
            )
        )
    for index, arg in enumerate(term.args):
        found.extend(_check_term(theory, ops, context, arg, where, line))
        if symbol is None or index >= symbol.arity:
            continue
        actual = _sort_in(ops, context, arg)
        expected = symbol.arg_sorts[index]
        if actual is not None and actual != expected:
            found.append(
                Diagnostic(
                    "error",
                    f"{where}: sort mismatch in argument {index + 1} of "
                    f"{term.op}: expected {expected}, got {actual}",
                    line,
                    1,
                )
            )
    return found


def _sort_in(
    ops: Mapping[str, OpSymbol], context: Mapping[str, str], term: Term
) -> str | None:
    if isinstance(term, Var):
        return context.get(term.name)
    symbol = ops.get(term.op)
    return symbol.result_sort if symbol is not None else None


def validate(theory: TheoryPresentation) -> list[Diagnostic]:
    """Check a presentation for naming, scope and sorting problems.

    Args:
        theory: Presentation to check.

    Returns:
        Diagnostics in a deterministic order; empty means valid.

    """
    found: list[Diagnostic] = []
    declared: set[str] = set()
    for sort in theory.sorts:
        if sort.name in declared:
            found.append(Diagnostic("error", f"duplicate sort {sort.name}"))
        declared.add(sort.name)
    ops: dict[str, OpSymbol] = {}
    for symbol in theory.ops:
        if symbol.name in ops:
            found.append(Diagnostic("error", f"duplicate op {symbol.name}"))
        ops[symbol.name] = symbol
        found.extend(
            Diagnostic("error", f"op {symbol.name}: undeclared sort {sort}")
            for sort in (*symbol.arg_sorts, symbol.result_sort)
            if sort not in declared
        )
    names: set[str] = set()
    for axiom in theory.axioms:
        if axiom.name in names:
            found.append(
                Diagnostic("error", f"duplicate axiom {axiom.name}", axiom.line, 1)
            )
        names.add(axiom.name)
        context: dict[str, str] = {}
        for var in axiom.context:
            if var.sort not in declared:
                found.append(
                    Diagnostic(
                        "error",
                        f"axiom {axiom.name}: undeclared sort {var.sort}",
                        axiom.line,
                        1,
                    )
                )
            context[var.name] = var.sort
        where = f"axiom {axiom.name}"
        for atom in (*axiom.premise, *axiom.conclusion):
            for term in atom_terms(atom):
                found.extend(_check_term(theory, ops, context, term, where, axiom.line))
            if isinstance(atom, Eq):
                left = _sort_in(ops, context, atom.lhs)
                right = _sort_in(ops, context, atom.rhs)
                if left is not None and right is not None and left != right:
                    found.append(
                        Diagnostic(
                            "error",
                            f"{where}: sort mismatch in equation: {left} vs {right}",
                            axiom.line,
                            1,
                        )
                    )
    if found:
        log.debug("theory %r has %s diagnostics", theory.name, len(found))
    return found


# =============================================================================
# MORPHISMS AND CHAINS
# =============================================================================


def _rename_term(
    term: Term,
    variables: Mapping[str, str],
    sort_map: Mapping[str, str],
    op_map: Mapping[str, str],
) -> Term:
    if isinstance(term, Var):
        name = variables.get(term.name, term.name)
        return Var(name, sort_map.get(term.sort, term.sort))
    return App(
        op_map.get(term.op, term.op),
        tuple(_rename_term(a, variables, sort_map, op_map) for a in term.args),
    )


def _rename_atom(
    atom: Atom,
    variables: Mapping[str, str],
    sort_map: Mapping[str, str],
    op_map: Mapping[str, str],
) -> Atom:
    if isinstance(atom, Eq):
        return Eq(
            _rename_term(atom.lhs, variables, sort_map, op_map),
            _rename_term(atom.rhs, variables, sort_map, op_map),
        )
    return Defined(_rename_term(atom.term, variables, sort_map, op_map))


type _AxiomShape = tuple[tuple[str, ...], tuple[Atom, ...], tuple[Atom, ...]]


def _shape(
    axiom: Axiom,
    sort_map: Mapping[str, str] | None = None,
    op_map: Mapping[str, str] | None = None,
) -> _AxiomShape:
    """Axiom body with variables renamed positionally, ignoring its name."""
    sorts = sort_map or {}
    ops = op_map or {}
    variables = {v.name: f"v{i}" for i, v in enumerate(axiom.context)}
    return (
        tuple(sorts.get(v.sort, v.sort) for v in axiom.context),
        tuple(_rename_atom(a, variables, sorts, ops) for a in axiom.premise),
        tuple(_rename_atom(a, variables, sorts, ops) for a in axiom.conclusion),
    )


@dataclass(frozen=True)
class TheoryMorphism:
    """Signature translation between presentations.

    Names missing from `sort_map` or `op_map` map to themselves.
    """

    source: TheoryPresentation
    target: TheoryPresentation
    sort_map: Mapping[str, str] = field(default_factory=dict[str, str])
    op_map: Mapping[str, str] = field(default_factory=dict[str, str])

    def map_sort(self, name: str) -> str:
        """Image of a sort name."""
        return self.sort_map.get(name, name)

    def map_op(self, name: str) -> str:
        """Image of an op name."""
        return self.op_map.get(name, name)

    def translate(self, axiom: Axiom) -> Axiom:
        """Translate a source axiom along the signature maps."""
        sort_map = {s.name: self.map_sort(s.name) for s in self.source.sorts}
        op_map = {o.name: self.map_op(o.name) for o in self.source.ops}
        return Axiom(
            axiom.name,
            tuple(Var(v.name, sort_map.get(v.sort, v.sort)) for v in axiom.context),
            tuple(_rename_atom(a, {}, sort_map, op_map) for a in axiom.premise),
            tuple(_rename_atom(a, {}, sort_map, op_map) for a in axiom.conclusion),
            axiom.line,
        )


def identity_morphism(theory: TheoryPresentation) -> TheoryMorphism:
    """Identity on a presentation."""
    return TheoryMorphism(theory, theory)


def inclusion_morphism(
    source: TheoryPresentation, target: TheoryPresentation
) -> TheoryMorphism:
    """Name-preserving morphism from a sub-presentation."""
    return TheoryMorphism(source, target)


def compose_morphisms(first: TheoryMorphism, second: TheoryMorphism) -> TheoryMorphism:
    """Compose `first: A -> B` with `second: B -> C` into `A -> C`."""
    return TheoryMorphism(
        first.source,
        second.target,
        {s.name: second.map_sort(first.map_sort(s.name)) for s in first.source.sorts},
        {o.name: second.map_op(first.map_op(o.name)) for o in first.source.ops},
    )


def _injective(names: Iterable[str], image: Mapping[str, str]) -> bool:
    seen: set[str] = set()
    for name in names:
        mapped = image[name]
        if mapped in seen:
            return False
        seen.add(mapped)
    return True


def check_inclusion(morphism: TheoryMorphism) -> bool:
    """Check a morphism syntactically.

    Args:
        morphism: Candidate theory morphism.

    Returns:
        True iff the signature maps are injective on names, preserve arities
        and sorts, and every translated source axiom occurs among the target
        axioms up to variable renaming.

    """
    source, target = morphism.source, morphism.target
    target_sorts = set(target.sort_names)
    sort_map = {s.name: morphism.map_sort(s.name) for s in source.sorts}
    op_map = {o.name: morphism.map_op(o.name) for o in source.ops}
    if not _injective(sort_map, sort_map) or not _injective(op_map, op_map):
        log.debug("morphism not injective on names")
        return False
    if any(image not in target_sorts for image in sort_map.values()):
        return False
    for symbol in source.ops:
        image = target.op(op_map[symbol.name])
        if image is None or image.result_sort != sort_map[symbol.result_sort]:
            return False
        if image.arg_sorts != tuple(sort_map[s] for s in symbol.arg_sorts):
            return False
    shapes = {_shape(ax) for ax in target.axioms}
    for axiom in source.axioms:
        if _shape(axiom, sort_map, op_map) not in shapes:
            log.debug("axiom %s has no counterpart in target", axiom.name)
            return False
    return True


@dataclass(frozen=True)
class TheoryChain:
    """Linear diagram of presentations joined by inclusions."""

    stages: tuple[TheoryPresentation, ...]
    inclusions: tuple[TheoryMorphism, ...]

    @classmethod
    def of(cls, stages: Iterable[TheoryPresentation]) -> TheoryChain:
        """Build a chain whose inclusions are name-preserving."""
        staged = tuple(stages)
        return cls(
            staged,
            tuple(
                inclusion_morphism(a, b)
                for a, b in zip(staged, staged[1:], strict=False)
            ),
        )

    def check(self) -> bool:
        """All inclusions are valid and connect consecutive stages."""
        if len(self.inclusions) != max(len(self.stages) - 1, 0):
            return False
        for index, morphism in enumerate(self.inclusions):
            if morphism.source != self.stages[index]:
                return False
            if morphism.target != self.stages[index + 1]:
                return False
            if not check_inclusion(morphism):
                return False
        return True

    def union(self) -> TheoryPresentation:
        """Colimit presentation: the union of all stages by name."""
        sorts: dict[str, Sort] = {}
        ops: dict[str, OpSymbol] = {}
        axioms: dict[str, Axiom] = {}
        for stage in self.stages:
            for sort in stage.sorts:
                sorts.setdefault(sort.name, sort)
            for symbol in stage.ops:
                ops.setdefault(symbol.name, symbol)
            for axiom in stage.axioms:
                axioms.setdefault(axiom.name, axiom)
        name = self.stages[-1].name if self.stages else ""
        return TheoryPresentation(
            tuple(sorts.values()), tuple(ops.values()), tuple(axioms.values()), name
        )

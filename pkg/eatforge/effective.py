"""Effective objects over the natural numbers.

Predicates and families are primitive-recursive expressions (`PrExpr`), so
every evaluation terminates. Searches that are only semi-decidable in
general take explicit bounds and return `BoundExceeded` instead of raising.

S-expression syntax for expressions:

    x | 7 | (succ e) | (+ a b) | (* a b) | (- a b)      ; "-" truncates at 0
    (< a b) (<= a b) (= a b) (!= a b) (> a b) (>= a b)  ; results in {0, 1}
    (not e) (and a b) (or a b)
    (sum (i b) e) (prod (i b) e) (mu (i b) e)           ; bounded, i < b
    (div a b) (mod a b)                                 ; derived forms

Functions are written `(lambda (x y) e)`. Bounded minimization returns the
bound when no witness exists below it.
"""

from __future__ import annotations

import itertools
import logging
import math
import operator
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING

from eatforge.errors import (
    ArityError,
    CertificateViolationError,
    MalformedCodeError,
    SExprError,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Mapping, Sequence

    from eatforge.jsonio import JSONValue

log = logging.getLogger("eatforge.effective")


# =============================================================================
# EXPRESSIONS
# =============================================================================


@dataclass(frozen=True)
class Arg:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Succ:
    arg: PrExpr


@dataclass(frozen=True)
class Add:
    left: PrExpr
    right: PrExpr


@dataclass(frozen=True)
class Mul:
    left: PrExpr
    right: PrExpr


@dataclass(frozen=True)
class Monus:
    """Truncated subtraction."""

    left: PrExpr
    right: PrExpr


@dataclass(frozen=True)
class Cmp:
    op: str
    left: PrExpr
    right: PrExpr


@dataclass(frozen=True)
class Not:
    arg: PrExpr


@dataclass(frozen=True)
class And:
    left: PrExpr
    right: PrExpr


@dataclass(frozen=True)
class Or:
    left: PrExpr
    right: PrExpr


@dataclass(frozen=True)
class BSum:
    var: str
    bound: PrExpr
    body: PrExpr


@dataclass(frozen=True)
class BProd:
    var: str
    bound: PrExpr
    body: PrExpr


@dataclass(frozen=True)
class BMu:
    """Least `var < bound` with nonzero body, else `bound`."""

    var: str
    bound: PrExpr
    body: PrExpr


type PrExpr = (
    Arg | Const | Succ | Add | Mul | Monus | Cmp | Not | And | Or | BSum | BProd | BMu
)
type Binder = BSum | BProd | BMu

_COMPARISONS: dict[str, Callable[[int, int], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
    "!=": operator.ne,
    ">": operator.gt,
    ">=": operator.ge,
}


def evaluate(expr: PrExpr, env: Mapping[str, int]) -> int:
    """Evaluate an expression under a variable assignment.

    Raises:
        ArityError: If a free variable has no value.

    """
    match expr:
        case Arg(name):
            if name not in env:
                msg = f"unbound variable {name}"
                raise ArityError(msg)
            return env[name]
        case Const(value):
            return value
        case Succ(arg):
            return evaluate(arg, env) + 1
        case Add(left, right):
            return evaluate(left, env) + evaluate(right, env)
        case Mul(left, right):
            return evaluate(left, env) * evaluate(right, env)
        case Monus(left, right):
            return max(evaluate(left, env) - evaluate(right, env), 0)
        case Cmp(op, left, right):
            return int(_COMPARISONS[op](evaluate(left, env), evaluate(right, env)))
        case Not(arg):
            return int(evaluate(arg, env) == 0)
        case And(left, right):
            return int(evaluate(left, env) != 0 and evaluate(right, env) != 0)
        case Or(left, right):
            return int(evaluate(left, env) != 0 or evaluate(right, env) != 0)
        case BSum(var, bound, body):
            return sum(
                evaluate(body, {**env, var: i}) for i in range(evaluate(bound, env))
            )
        case BProd(var, bound, body):
            return math.prod(
                evaluate(body, {**env, var: i}) for i in range(evaluate(bound, env))
            )
        case BMu(var, bound, body):
            limit = evaluate(bound, env)
            return next(
                (i for i in range(limit) if evaluate(body, {**env, var: i}) != 0),
                limit,
            )


def free_vars(expr: PrExpr) -> frozenset[str]:
    match expr:
        case Arg(name):
            return frozenset({name})
        case Const():
            return frozenset()
        case Succ(arg) | Not(arg):
            return free_vars(arg)
        case BSum(var, bound, body) | BProd(var, bound, body) | BMu(var, bound, body):
            return free_vars(bound) | (free_vars(body) - {var})
        case Add(l, r) | Mul(l, r) | Monus(l, r) | And(l, r) | Or(l, r) | Cmp(_, l, r):
            return free_vars(l) | free_vars(r)


def _fresh(stem: str, avoid: Iterable[str]) -> str:
    taken = set(avoid)
    return next(f"{stem}{n}" for n in itertools.count() if f"{stem}{n}" not in taken)


def substitute(expr: PrExpr, mapping: Mapping[str, PrExpr]) -> PrExpr:
    """Replace free variables, renaming binders that would capture."""
    match expr:
        case Arg(name):
            return mapping.get(name, expr)
        case Const():
            return expr
        case Succ(arg):
            return Succ(substitute(arg, mapping))
        case Not(arg):
            return Not(substitute(arg, mapping))
        case Cmp(op, left, right):
            return Cmp(op, substitute(left, mapping), substitute(right, mapping))
        case Add() | Mul() | Monus() | And() | Or():
            return type(expr)(
                substitute(expr.left, mapping), substitute(expr.right, mapping)
            )
        case BSum() | BProd() | BMu():
            return _substitute_binder(expr, mapping)


def _substitute_binder(expr: Binder, mapping: Mapping[str, PrExpr]) -> PrExpr:
    bound = substitute(expr.bound, mapping)
    inner = {k: v for k, v in mapping.items() if k != expr.var}
    clash = set().union(*(free_vars(v) for v in inner.values()))
    var, body = expr.var, expr.body
    if var in clash:
        var = _fresh(expr.var, clash | free_vars(body))
        body = substitute(body, {expr.var: Arg(var)})
    return type(expr)(var, bound, substitute(body, inner))


# =============================================================================
# FUNCTIONS AND PREDICATES
# =============================================================================


@dataclass(frozen=True)
class PrFunction:
    """A closed expression with named parameters."""

    params: tuple[str, ...]
    body: PrExpr

    def __post_init__(self) -> None:
        """Reject free variables that are not parameters."""
        extra = free_vars(self.body) - set(self.params)
        if extra:
            msg = f"free variables {sorted(extra)} are not parameters"
            raise ArityError(msg)

    @property
    def arity(self) -> int:
        return len(self.params)

    def __call__(self, *args: int) -> int:
        """Evaluate at natural-number arguments.

        Raises:
            ArityError: If the argument count differs from the arity.

        """
        if len(args) != self.arity:
            msg = f"expected {self.arity} arguments, got {len(args)}"
            raise ArityError(msg)
        return evaluate(self.body, dict(zip(self.params, args, strict=True)))

    def apply(self, *args: PrExpr) -> PrExpr:
        """Body with parameters replaced by expressions."""
        if len(args) != self.arity:
            msg = f"expected {self.arity} arguments, got {len(args)}"
            raise ArityError(msg)
        return substitute(self.body, dict(zip(self.params, args, strict=True)))


@dataclass(frozen=True)
class Predicate:
    """Unary function clamped to {0, 1} by `min(1, -)`."""

    function: PrFunction

    def __post_init__(self) -> None:
        """Require arity one."""
        if self.function.arity != 1:
            msg = f"predicates are unary, got arity {self.function.arity}"
            raise ArityError(msg)

    def __call__(self, x: int) -> int:
        return min(1, self.function(x))

    def holds(self, x: int) -> bool:
        return self(x) == 1


def div_expr(a: PrExpr, b: PrExpr, var: str = "_q") -> PrExpr:
    """Floor division, zero when dividing by zero."""
    var = _fresh(var, free_vars(a) | free_vars(b))
    quotient = BMu(var, Succ(a), Cmp(">", Mul(b, Succ(Arg(var))), a))
    return Mul(quotient, Not(Cmp("=", b, Const(0))))


def mod_expr(a: PrExpr, b: PrExpr) -> PrExpr:
    """Remainder, `a` itself when dividing by zero."""
    return Monus(a, Mul(b, div_expr(a, b)))


# =============================================================================
# S-EXPRESSIONS
# =============================================================================

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_BINARY = {"+": Add, "*": Mul, "-": Monus, "and": And, "or": Or}
_BINDERS = {"sum": BSum, "prod": BProd, "mu": BMu}

type SExpr = str | list[SExpr]


def _read(text: str) -> SExpr:
    tokens = _TOKEN.findall(text)
    pos = 0

    def walk() -> SExpr:
        nonlocal pos
        if pos >= len(tokens):
            msg = "unexpected end of expression"
            raise SExprError(msg)
        token = tokens[pos]
        pos += 1
        if token == ")":
            msg = "unexpected )"
            raise SExprError(msg)
        if token != "(":
            return token
        items: list[SExpr] = []
        while pos < len(tokens) and tokens[pos] != ")":
            items.append(walk())
        if pos >= len(tokens):
            msg = "missing )"
            raise SExprError(msg)
        pos += 1
        return items

    tree = walk()
    if pos != len(tokens):
        msg = f"trailing tokens after expression: {' '.join(tokens[pos:])}"
        raise SExprError(msg)
    return tree


def _expr(tree: SExpr) -> PrExpr:
    if isinstance(tree, str):
        if tree.isdigit():
            return Const(int(tree))
        if _NAME.fullmatch(tree):
            return Arg(tree)
        msg = f"bad atom {tree!r}"
        raise SExprError(msg)
    if not tree or not isinstance(tree[0], str):
        msg = "expected an operator"
        raise SExprError(msg)
    head, rest = tree[0], tree[1:]
    if head in _BINDERS:
        header = rest[0] if rest else None
        if (
            len(rest) != 2  # noqa: PLR2004
            or not isinstance(header, list)
            or len(header) != 2  # noqa: PLR2004
            or not isinstance(header[0], str)
        ):
            msg = f"({head} (i bound) body) expected"
            raise SExprError(msg)
        return _BINDERS[head](header[0], _expr(header[1]), _expr(rest[1]))
    args = [_expr(item) for item in rest]
    expected = 1 if head in {"succ", "not"} else 2
    if len(args) != expected:
        msg = f"{head} takes {expected} arguments, got {len(args)}"
        raise SExprError(msg)
    if head == "succ":
        return Succ(args[0])
    if head == "not":
        return Not(args[0])
    if head in _COMPARISONS:
        return Cmp(head, args[0], args[1])
    if head in _BINARY:
        return _BINARY[head](args[0], args[1])
    if head == "div":
        return div_expr(args[0], args[1])
    if head == "mod":
        return mod_expr(args[0], args[1])
    msg = f"unknown operator {head!r}"
    raise SExprError(msg)


def parse_sexpr(text: str) -> PrFunction:
    """Parse `(lambda (x ...) body)`.

    Raises:
        SExprError: On malformed text.
        ArityError: If the body has free variables that are not parameters.

    """
    tree = _read(text)
    if (
        not isinstance(tree, list)
        or len(tree) != 3  # noqa: PLR2004
        or tree[0] != "lambda"
        or not isinstance(tree[1], list)
        or not all(isinstance(p, str) for p in tree[1])
    ):
        msg = "expected (lambda (params...) body)"
        raise SExprError(msg)
    params = tuple(str(p) for p in tree[1])
    return PrFunction(params, _expr(tree[2]))


def parse_expr(text: str) -> PrExpr:
    """Parse a bare expression."""
    return _expr(_read(text))


_SYMBOLS: dict[type, str] = {Add: "+", Mul: "*", Monus: "-", And: "and", Or: "or"}
_BINDER_NAMES: dict[type, str] = {BSum: "sum", BProd: "prod", BMu: "mu"}


def expr_to_sexpr(expr: PrExpr) -> str:
    match expr:
        case Arg(name):
            return name
        case Const(value):
            return str(value)
        case Succ(arg):
            return f"(succ {expr_to_sexpr(arg)})"
        case Not(arg):
            return f"(not {expr_to_sexpr(arg)})"
        case Cmp(op, left, right):
            return f"({op} {expr_to_sexpr(left)} {expr_to_sexpr(right)})"
        case Add() | Mul() | Monus() | And() | Or():
            symbol = _SYMBOLS[type(expr)]
            return f"({symbol} {expr_to_sexpr(expr.left)} {expr_to_sexpr(expr.right)})"
        case BSum() | BProd() | BMu():
            name = _BINDER_NAMES[type(expr)]
            header = f"({expr.var} {expr_to_sexpr(expr.bound)})"
            return f"({name} {header} {expr_to_sexpr(expr.body)})"


def to_sexpr(fn: PrFunction) -> str:
    """Inverse of `parse_sexpr` up to derived forms."""
    return f"(lambda ({' '.join(fn.params)}) {expr_to_sexpr(fn.body)})"


# =============================================================================
# CODES
# =============================================================================


def pair(x: int, y: int) -> int:
    """Cantor pairing `(x + y)(x + y + 1) / 2 + y`."""
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    """Inverse of `pair`."""
    w = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def encode_list(items: Sequence[int]) -> int:
    """Length-prefixed code: `0` for `[]`, else `pair(k, body)`.

    The body of a singleton is its element and longer lists nest to the
    right: `body([x, *rest]) = pair(x, body(rest))`.
    """
    if not items:
        return 0
    body = items[-1]
    for x in reversed(items[:-1]):
        body = pair(x, body)
    return pair(len(items), body)


def decode_list(code: int) -> list[int]:
    """Inverse of `encode_list`.

    Raises:
        MalformedCodeError: If the length is zero but the body is not.

    """
    length, body = unpair(code)
    if length == 0:
        if body != 0:
            msg = f"{code} is not a list code"
            raise MalformedCodeError(msg)
        return []
    items: list[int] = []
    for _ in range(length - 1):
        head, body = unpair(body)
        items.append(head)
    items.append(body)
    return items


def is_list_code(code: int) -> bool:
    length, body = unpair(code)
    return length != 0 or body == 0


# =============================================================================
# CODED SUBSETS AND MAPS
# =============================================================================


@dataclass(frozen=True)
class BoundExceeded:
    """A bounded search found nothing below `bound`."""

    bound: int

    def to_json(self) -> dict[str, JSONValue]:
        return {"boundExceeded": self.bound}


@dataclass(frozen=True)
class CodedSubset:
    """Realisation of a predicate: `{x | alpha(x) = 1}`."""

    predicate: Predicate

    @classmethod
    def of(cls, text: str) -> CodedSubset:
        return cls(Predicate(parse_sexpr(text)))

    def contains(self, x: int) -> bool:
        return self.predicate.holds(x)

    def realisation(self, limit: int) -> list[int]:
        """Members below `limit`."""
        return [x for x in range(limit) if self.contains(x)]


NATURALS = CodedSubset(Predicate(PrFunction(("x",), Const(1))))


def minimal_representatives(alpha: Predicate) -> Predicate:
    """`x` with `alpha(x) = 1` and `alpha(y) = 0` for every `y < x`."""
    fn = alpha.function
    x = _fresh("x", free_vars(fn.body))
    y = _fresh("y", free_vars(fn.body) | {x})
    holds = Cmp("!=", fn.apply(Arg(x)), Const(0))
    earlier = BSum(y, Arg(x), Not(Cmp("=", fn.apply(Arg(y)), Const(0))))
    return Predicate(PrFunction((x,), And(holds, Cmp("=", earlier, Const(0)))))


def enumerate_subset(subset: CodedSubset, n: int, bound: int) -> int | BoundExceeded:
    """The `n`-th member (from 0) in increasing order, searching below `bound`."""
    seen = 0
    for x in range(bound):
        if subset.contains(x):
            if seen == n:
                return x
            seen += 1
    return BoundExceeded(bound)


@dataclass(frozen=True)
class CodedMap:
    """A total map on a coded subset, with a coded target."""

    domain: CodedSubset
    function: PrFunction
    codomain: CodedSubset = NATURALS

    def __post_init__(self) -> None:
        """Require a unary function."""
        if self.function.arity != 1:
            msg = f"coded maps are unary, got arity {self.function.arity}"
            raise ArityError(msg)

    def __call__(self, x: int) -> int:
        return self.function(x)


# =============================================================================
# FAMILIES
# =============================================================================


class FamilyMap(ABC):
    """Family over a coded base; the total space is coded by `pair(b, x)`."""

    @abstractmethod
    def base_contains(self, b: int) -> bool: ...

    @abstractmethod
    def in_fiber(self, b: int, x: int) -> bool: ...

    def total_contains(self, code: int) -> bool:
        b, x = unpair(code)
        return self.base_contains(b) and self.in_fiber(b, x)

    def fiber(self, b: int, bound: int) -> list[int]:
        """Fiber members below `bound`."""
        if not self.base_contains(b):
            return []
        return [x for x in range(bound) if self.in_fiber(b, x)]


@dataclass(frozen=True)
class CodedFamily(FamilyMap):
    """Family whose fibers are given by a binary expression `phi(b, x)`."""

    base: CodedSubset
    fiber_function: PrFunction

    def __post_init__(self) -> None:
        """Require a binary fiber expression."""
        if self.fiber_function.arity != 2:  # noqa: PLR2004
            msg = f"fiber expressions are binary, got arity {self.fiber_function.arity}"
            raise ArityError(msg)

    def base_contains(self, b: int) -> bool:
        return self.base.contains(b)

    def in_fiber(self, b: int, x: int) -> bool:
        return self.base.contains(b) and min(1, self.fiber_function(b, x)) == 1


@dataclass(frozen=True)
class ListFamily(FamilyMap):
    """`List(q)`: lists of base points, fibers are lists of fiber points."""

    inner: FamilyMap

    def base_contains(self, b: int) -> bool:
        if not is_list_code(b):
            return False
        return all(self.inner.base_contains(x) for x in decode_list(b))

    def in_fiber(self, b: int, x: int) -> bool:
        """Componentwise fiber membership.

        Raises:
            MalformedCodeError: If `b` is not a list code.

        """
        bases = decode_list(b)
        if not is_list_code(x):
            return False
        points = decode_list(x)
        return len(points) == len(bases) and all(
            self.inner.in_fiber(bi, xi) for bi, xi in zip(bases, points, strict=True)
        )

    def fiber(self, b: int, bound: int) -> list[int]:
        """Codes of lists whose entries lie in the inner fibers below `bound`."""
        if not self.base_contains(b):
            return []
        parts = [self.inner.fiber(bi, bound) for bi in decode_list(b)]
        return sorted(encode_list(xs) for xs in itertools.product(*parts))


def list_family(q: FamilyMap) -> ListFamily:
    return ListFamily(q)


@dataclass(frozen=True)
class MinimalSection:
    """Least-witness choice function of a family, searched below `bound`."""

    family: FamilyMap
    bound: int

    def at(self, b: int) -> int | BoundExceeded:
        """Least `x < bound` in the fiber over `b`.

        Raises:
            ValueError: If `b` is not a base point.

        """
        if not self.family.base_contains(b):
            msg = f"{b} is not in the base"
            raise ValueError(msg)
        return next(
            (x for x in range(self.bound) if self.family.in_fiber(b, x)),
            BoundExceeded(self.bound),
        )

    def table(self, bases: Iterable[int]) -> list[int | BoundExceeded]:
        """Section values at the given base points that lie in the base."""
        return [self.at(b) for b in bases if self.family.base_contains(b)]


def minimal_section(family: FamilyMap, bound: int) -> MinimalSection:
    return MinimalSection(family, bound)


# =============================================================================
# SPLIT IMAGES AND GRAPHS
# =============================================================================


@dataclass(frozen=True)
class SplitImage:
    """Image of a coded map with its minimal-preimage section."""

    map: CodedMap
    image: CodedSubset
    section: PrFunction
    bound: int

    def preimage(self, y: int) -> int | BoundExceeded:
        x = self.section(y)
        return BoundExceeded(self.bound) if x >= self.bound else x

    def section_law_failures(self, points: Iterable[int]) -> list[int]:
        """Image points where `f(s(y)) != y`."""
        return [
            y
            for y in points
            if self.image.contains(y) and self.map(self.section(y)) != y
        ]


def split_image(f: CodedMap, bound: int) -> SplitImage:
    """Factor `f` as a split epi onto its image followed by the inclusion.

    Image membership and the section search only consider preimages below
    `bound`.
    """
    used = free_vars(f.function.body) | free_vars(f.domain.predicate.function.body)
    x = _fresh("x", used)
    y = _fresh("y", used | {x})
    hit = And(
        f.domain.predicate.function.apply(Arg(x)),
        Cmp("=", f.function.apply(Arg(x)), Arg(y)),
    )
    section_body = BMu(x, Const(bound), hit)
    section = PrFunction((y,), section_body)
    image = CodedSubset(
        Predicate(PrFunction((y,), Cmp("<", section_body, Const(bound))))
    )
    return SplitImage(f, image, section, bound)


@dataclass(frozen=True)
class GraphReport:
    checked: int
    violations: tuple[str, ...]

    @property
    def certified(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class GraphFactorisation:
    """`f` as `(id, f)` into the product followed by the second projection.

    Graph points are coded `pair(x, pair(x, f(x)))`: the outer component is
    the source point, the inner pair its image in the product.
    """

    map: CodedMap

    def code(self, x: int) -> int:
        return pair(x, pair(x, self.map(x)))

    def contains(self, code: int) -> bool:
        x, inner = unpair(code)
        x2, y = unpair(inner)
        return x == x2 and self.map.domain.contains(x) and self.map(x) == y

    def certify(self, points: Iterable[int]) -> GraphReport:
        """Check diagonal pullback and composite legs on domain points."""
        checked, bad = 0, []
        for x in points:
            if not self.map.domain.contains(x):
                continue
            checked += 1
            code = self.code(x)
            source, product_point = unpair(code)
            first, second = unpair(product_point)
            if not self.contains(code):
                bad.append(f"{x}: graph point rejected")
            elif source != first:
                bad.append(f"{x}: not over the diagonal")
            elif second != self.map(x):
                bad.append(f"{x}: legs compose to {second}")
        return GraphReport(checked, tuple(bad))


def graph_factorisation(f: CodedMap) -> GraphFactorisation:
    return GraphFactorisation(f)


# =============================================================================
# QUOTIENTS AND GRAPHS
# =============================================================================


class QuotientVerdict(StrEnum):
    RELATED_WITHIN_BUDGET = "RelatedWithinBudget"
    UNKNOWN_AT_BUDGET = "UnknownAtBudget"


@dataclass(frozen=True)
class FormalQuotient:
    """A carrier with a relation; neighbours are searched below `window`."""

    carrier: CodedSubset
    relation: PrFunction
    window: int

    def related(self, a: int, b: int) -> bool:
        return self.relation(a, b) != 0 or self.relation(b, a) != 0


def quotient_eq(q: FormalQuotient, x: int, y: int, budget: int) -> QuotientVerdict:
    """Breadth-first search for a relation chain of at most `budget` steps.

    Intermediate points are searched below `window`; `y` itself is tested
    against every frontier point, wherever it lies.

    Raises:
        ValueError: If `x` or `y` is not in the carrier.

    """
    for point in (x, y):
        if not q.carrier.contains(point):
            msg = f"{point} is not in the carrier"
            raise ValueError(msg)
    if x == y:
        return QuotientVerdict.RELATED_WITHIN_BUDGET
    candidates = q.carrier.realisation(q.window)
    seen, frontier = {x}, [x]
    for _ in range(budget):
        if any(q.related(u, y) for u in frontier):
            return QuotientVerdict.RELATED_WITHIN_BUDGET
        frontier = [
            z
            for z in dict.fromkeys(
                z for u in frontier for z in candidates if q.related(u, z)
            )
            if z not in seen
        ]
        seen.update(frontier)
        if not frontier:
            break
    return QuotientVerdict.UNKNOWN_AT_BUDGET


@dataclass(frozen=True)
class TotalGraph:
    """Simple graph with edge predicate `edge(x, y)` and totality bounds."""

    nodes: CodedSubset
    edge: PrFunction
    root_bound: int
    edge_bound: int

    def has_edge(self, x: int, y: int) -> bool:
        return self.nodes.contains(y) and self.edge(x, y) != 0

    def successor(self, x: int) -> int | None:
        """Least successor of `x` below the edge bound."""
        return next((y for y in range(self.edge_bound) if self.has_edge(x, y)), None)


@dataclass(frozen=True)
class Branch:
    """Finite prefix of a branch: nodes `f0(0..n)` and edges `f1(0..n-1)`."""

    nodes: tuple[int, ...]
    edges: tuple[int, ...] = field(default=())

    def to_json(self) -> dict[str, JSONValue]:
        return {"branch": list(self.nodes), "edges": list(self.edges)}


def branch_of_total_graph(graph: TotalGraph, steps: int) -> Branch:
    """Start at the least node and follow least successors.

    Raises:
        CertificateViolationError: If no node lies below the root bound, or
            a node has no outgoing edge below the edge bound.

    """
    root = next(
        (x for x in range(graph.root_bound) if graph.nodes.contains(x)), None
    )
    if root is None:
        msg = f"no node below root bound {graph.root_bound}"
        raise CertificateViolationError(msg, node=-1, step=0)
    nodes, edges = [root], []
    for step in range(steps):
        here = nodes[-1]
        nxt = graph.successor(here)
        if nxt is None:
            msg = f"node {here} has no edge below bound {graph.edge_bound}"
            raise CertificateViolationError(msg, node=here, step=step)
        nodes.append(nxt)
        edges.append(pair(here, nxt))
    log.debug("branch of %s steps from %s", steps, root)
    return Branch(tuple(nodes), tuple(edges))


# =============================================================================
# BUNDLES
# =============================================================================


@dataclass(frozen=True)
class FamilyBundle:
    family: CodedFamily
    base_bound: int
    fiber_bound: int


@dataclass(frozen=True)
class GraphBundle:
    graph: TotalGraph
    steps: int


def _bounds(data: Mapping[str, JSONValue], names: Sequence[str]) -> list[int]:
    raw = data.get("bounds")
    if not isinstance(raw, dict):
        msg = "bundle needs a bounds object"
        raise SExprError(msg)
    values: list[int] = []
    for name in names:
        value = raw.get(name)
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            msg = f"bounds.{name} must be a nonnegative integer"
            raise SExprError(msg)
        values.append(value)
    return values


def _text(data: Mapping[str, JSONValue], key: str) -> str:
    value = data.get(key)
    if not isinstance(value, str):
        msg = f"bundle field {key} must be an s-expression string"
        raise SExprError(msg)
    return value


def family_from_json(data: JSONValue) -> FamilyBundle:
    """Read `{base, fiberExpr, bounds: {base, fiber}}`.

    Raises:
        SExprError: On missing fields or malformed expressions.
        ArityError: On expressions of the wrong arity.

    """
    if not isinstance(data, dict):
        msg = "family bundle must be a JSON object"
        raise SExprError(msg)
    base_bound, fiber_bound = _bounds(data, ("base", "fiber"))
    family = CodedFamily(
        CodedSubset.of(_text(data, "base")), parse_sexpr(_text(data, "fiberExpr"))
    )
    return FamilyBundle(family, base_bound, fiber_bound)


def graph_from_json(data: JSONValue) -> GraphBundle:
    """Read `{nodes, edgeExpr, bounds: {root, edge, steps}}`."""
    if not isinstance(data, dict):
        msg = "graph bundle must be a JSON object"
        raise SExprError(msg)
    root, edge, steps = _bounds(data, ("root", "edge", "steps"))
    graph = TotalGraph(
        CodedSubset.of(_text(data, "nodes")),
        parse_sexpr(_text(data, "edgeExpr")),
        root,
        edge,
    )
    return GraphBundle(graph, steps)


def section_report(bundle: FamilyBundle) -> list[JSONValue]:
    """Section values over base points below the base bound."""
    section = minimal_section(bundle.family, bundle.fiber_bound)
    return [
        value.to_json() if isinstance(value, BoundExceeded) else value
        for value in section.table(range(bundle.base_bound))
    ]


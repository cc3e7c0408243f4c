"""Fair saturation (chase) computing bounded stages of free models.

Given a validated theory and finitely many generator constants, `saturate`
runs fair rounds. Each round matches every axiom premise against the state
at round start, then fires every match: definedness conclusions create
elements (memoized per op and canonical arguments), equality conclusions
merge classes. Congruence closure is maintained incrementally through
per-class use lists, so operation tables stay functional after each merge.

Rounds are semi-naive by default: after the first round, a premise match
counts only if it reads a table entry or binds a class that was created or
grew by a merge during the previous round. Any other match already existed
then and has fired.

Element ids are allocated densely in creation order and double as the Gödel
number (birth index). A merged class is represented by its least-born member.

Usage:
    gens = Generators.from_spec(monoid, "M:a,b")
    state = saturate(monoid, gens, rounds=2)
    state.class_counts()  # {"M": ...}
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING

from eatforge import config
from eatforge.errors import (
    EatforgeError,
    EnumerationIndexError,
    ProvenanceError,
    ResourceLimitError,
    SortError,
    TheoryValidationError,
)
from eatforge.theory import (
    App,
    Atom,
    Axiom,
    Defined,
    Eq,
    OpSymbol,
    Term,
    TheoryChain,
    TheoryPresentation,
    Var,
    format_term,
    parse_atom,
    term_ops,
    term_vars,
    validate,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Iterator, Mapping

    from eatforge.jsonio import JSONValue

log = logging.getLogger("eatforge.chase")

GENERATOR_PREFIX = "generator:"
FACT_PREFIX = "fact:"
CONGRUENCE = "congruence"

type Substitution = dict[str, int]
type Key = tuple[int, ...]


class StageVerdict(StrEnum):
    """Outcome of a bounded equality check."""

    EQUAL_AT_STAGE = "equal-at-stage"
    UNKNOWN_AT_STAGE = "unknown-at-stage"


# =============================================================================
# GENERATORS
# =============================================================================


@dataclass(frozen=True)
class Generators:
    """Named constants per sort plus ground facts relating them."""

    constants: tuple[tuple[str, str], ...] = ()
    facts: tuple[Atom, ...] = ()

    @classmethod
    def from_spec(
        cls,
        theory: TheoryPresentation,
        spec: str = "",
        facts: Iterable[str] = (),
    ) -> Generators:
        """Build generators from `Sort:a,b;Sort2:c` and fact strings.

        Args:
            theory: Theory the generators extend.
            spec: Semicolon separated `Sort:name,...` groups.
            facts: Ground atoms over the constants, e.g. `dom(f) = A`.

        Returns:
            Parsed generators.

        Raises:
            EatforgeError: On malformed groups or unknown sorts.

        """
        constants: list[tuple[str, str]] = []
        for group in filter(None, (g.strip() for g in spec.split(";"))):
            sort, sep, names = group.partition(":")
            if not sep or sort.strip() not in theory.sort_names:
                msg = f"bad generator group {group!r}"
                raise EatforgeError(msg)
            constants.extend(
                (name.strip(), sort.strip())
                for name in names.split(",")
                if name.strip()
            )
        partial = cls(tuple(constants))
        extended = partial.extend_theory(theory)
        return cls(tuple(constants), tuple(parse_atom(f, extended) for f in facts))

    def extend_theory(self, theory: TheoryPresentation) -> TheoryPresentation:
        """Add one nullary op and one defining axiom per constant, plus facts."""
        taken = {op.name for op in theory.ops}
        ops: list[OpSymbol] = []
        axioms: list[Axiom] = []
        for name, sort in self.constants:
            if name in taken or sort not in theory.sort_names:
                msg = f"generator {name}:{sort} clashes with the signature"
                raise EatforgeError(msg)
            taken.add(name)
            ops.append(OpSymbol(name, (), sort, total=True))
            defined = (Defined(App(name)),)
            axioms.append(Axiom(f"{GENERATOR_PREFIX}{name}", (), (), defined))
        axioms.extend(
            Axiom(f"{FACT_PREFIX}{index}", (), (), (fact,))
            for index, fact in enumerate(self.facts)
        )
        return theory.extend(ops=ops, axioms=axioms)


# =============================================================================
# STATE
# =============================================================================


@dataclass(frozen=True)
class ElementInfo:
    """An element with its sort and birth index."""

    id: int
    sort: str
    birth_index: int


@dataclass(frozen=True)
class ProvenanceEntry:
    """One creation or merge with the axiom instance that justified it."""

    firing: int
    kind: str
    axiom: str
    substitution: tuple[tuple[str, int], ...]
    element: int
    other: int | None = None
    op: str | None = None
    args: Key = ()

    def to_json(self) -> dict[str, JSONValue]:
        """JSON object form."""
        return {
            "firing": self.firing,
            "kind": self.kind,
            "axiom": self.axiom,
            "substitution": {name: value for name, value in self.substitution},
            "element": self.element,
            "other": self.other,
            "op": self.op,
            "args": list(self.args),
        }


@dataclass(frozen=True)
class RoundStats:
    """Matcher instrumentation for one round."""

    round: int
    matches: int
    fired: int
    skipped: int
    created: int
    merged: int
    delta: int = -1


@dataclass(frozen=True)
class SaturationState:
    """A completed, read-only saturation stage."""

    theory: TheoryPresentation
    generators: dict[str, int]
    sorts: tuple[str, ...]
    canonical: tuple[int, ...]
    tables: dict[str, dict[Key, int]]
    stage: int
    provenance: tuple[ProvenanceEntry, ...]
    saturated: bool = False
    partial: bool = False
    verified: int = 0
    round_stats: tuple[RoundStats, ...] = field(default=(), compare=False)
    creations: dict[int, tuple[str, Key]] = field(
        default_factory=dict[int, tuple[str, Key]], compare=False
    )

    def find(self, element: int) -> int:
        """Canonical representative of an element."""
        return self.canonical[element]

    def element(self, element: int) -> ElementInfo:
        """Element record."""
        return ElementInfo(element, self.sorts[element], element)

    def classes(self, sort: str) -> list[int]:
        """Canonical classes of a sort in birth order."""
        return [
            e
            for e, (s, c) in enumerate(zip(self.sorts, self.canonical, strict=True))
            if s == sort and c == e
        ]

    def class_counts(self) -> dict[str, int]:
        """Number of canonical classes per declared sort."""
        return {name: len(self.classes(name)) for name in self.theory.sort_names}

    def members(self, representative: int) -> list[int]:
        """All elements of a class."""
        root = self.canonical[representative]
        return [e for e, c in enumerate(self.canonical) if c == root]

    def lookup(self, op: str, args: Key) -> int | None:
        """Canonical value of an op on canonical arguments, if defined."""
        value = self.tables.get(op, {}).get(tuple(self.canonical[a] for a in args))
        return None if value is None else self.canonical[value]

    def term_of(self, element: int) -> Term:
        """Closed term that created an element."""
        creations = self.creations
        cache: dict[int, Term] = {}

        def build(node: int) -> Term:
            if node not in cache:
                op, args = creations[node]
                cache[node] = App(op, tuple(build(a) for a in args))
            return cache[node]

        return build(element)

    def fingerprint(self) -> tuple[object, ...]:
        """Structure compared bit-exactly by replay audits."""
        return (
            self.sorts,
            self.canonical,
            tuple(
                sorted((op, tuple(sorted(t.items()))) for op, t in self.tables.items())
            ),
        )


# =============================================================================
# ENGINE
# =============================================================================


@dataclass
class _Index:
    classes: dict[str, list[int]]
    by_result: dict[str, dict[int, list[Key]]]
    by_arg: dict[str, list[dict[int, list[Key]]]]
    delta: frozenset[int] | None = None

    def fresh(self, *elements: int) -> bool:
        """Whether any element was created or grew since the previous round."""
        delta = self.delta
        return delta is None or any(e in delta for e in elements)


class _Builder:
    """Mutable saturation state; single writer."""

    def __init__(self, theory: TheoryPresentation, cap: int) -> None:
        self.theory = theory
        self.cap = cap
        self.parent: list[int] = []
        self.sorts: list[str] = []
        self.tables: dict[str, dict[Key, int]] = {op.name: {} for op in theory.ops}
        self.results = {op.name: op.result_sort for op in theory.ops}
        self.uses: dict[int, list[tuple[str, Key]]] = {}
        self.log: list[ProvenanceEntry] = []
        self.firing = 0
        self.reason: tuple[str, tuple[tuple[str, int], ...]] = ("", ())
        self.stage = 0
        self.stats: list[RoundStats] = []
        self.verified = 0
        self.touched: set[int] = set()

    # -- union-find ---------------------------------------------------------

    def find(self, element: int) -> int:
        parent = self.parent
        while parent[element] != element:
            parent[element] = parent[parent[element]]
            element = parent[element]
        return element

    def canon(self, args: Iterable[int]) -> Key:
        return tuple(self.find(a) for a in args)

    # -- primitive events ---------------------------------------------------

    def create(self, op: str, args: Key) -> int:
        if len(self.parent) >= self.cap:
            msg = f"element cap {self.cap} exceeded at stage {self.stage}"
            log.warning(msg)
            raise ResourceLimitError(msg, self.freeze(partial=True))
        element = len(self.parent)
        self.parent.append(element)
        self.touched.add(element)
        self.sorts.append(self.results[op])
        self.tables[op][args] = element
        for arg in dict.fromkeys(args):
            self.uses.setdefault(arg, []).append((op, args))
        axiom, subst = self.reason
        self.log.append(
            ProvenanceEntry(
                self.firing, "create", axiom, subst, element, op=op, args=args
            )
        )
        return element

    def merge(self, first: int, second: int) -> None:
        pending: list[tuple[int, int, str, Key]] = [(first, second, "", ())]
        while pending:
            a, b, cong_op, cong_key = pending.pop(0)
            ra, rb = self.find(a), self.find(b)
            if ra == rb:
                continue
            keep, gone = min(ra, rb), max(ra, rb)
            self.parent[gone] = keep
            self.touched.add(keep)
            if cong_op:
                self.log.append(
                    ProvenanceEntry(
                        self.firing,
                        "merge",
                        CONGRUENCE,
                        (),
                        keep,
                        other=gone,
                        op=cong_op,
                        args=cong_key,
                    )
                )
            else:
                axiom, subst = self.reason
                self.log.append(
                    ProvenanceEntry(
                        self.firing, "merge", axiom, subst, keep, other=gone
                    )
                )
            for op, key in self.uses.pop(gone, []):
                table = self.tables[op]
                if key not in table:
                    continue
                value = table.pop(key)
                new_key = self.canon(key)
                existing = table.get(new_key)
                if existing is None:
                    table[new_key] = value
                    for arg in dict.fromkeys(new_key):
                        self.uses.setdefault(arg, []).append((op, new_key))
                elif self.find(existing) != self.find(value):
                    pending.append((existing, value, op, new_key))

    # -- terms --------------------------------------------------------------

    def evaluate(self, term: Term, subst: Mapping[str, int]) -> int | None:
        if isinstance(term, Var):
            return self.find(subst[term.name])
        args: list[int] = []
        for arg in term.args:
            value = self.evaluate(arg, subst)
            if value is None:
                return None
            args.append(value)
        found = self.tables[term.op].get(tuple(args))
        return None if found is None else self.find(found)

    def define(self, term: Term, subst: Mapping[str, int]) -> int:
        if isinstance(term, Var):
            return self.find(subst[term.name])
        args = tuple(self.define(arg, subst) for arg in term.args)
        key = self.canon(args)
        found = self.tables[term.op].get(key)
        if found is not None:
            return self.find(found)
        return self.create(term.op, key)

    def holds(self, atom: Atom, subst: Mapping[str, int]) -> bool:
        if isinstance(atom, Defined):
            return self.evaluate(atom.term, subst) is not None
        left = self.evaluate(atom.lhs, subst)
        return left is not None and left == self.evaluate(atom.rhs, subst)

    def fire(self, axiom: Axiom, subst: Mapping[str, int]) -> int:
        """Assert an axiom instance's conclusion; return number of events."""
        bound = tuple((v.name, subst[v.name]) for v in axiom.context)
        self.reason = (axiom.name, bound)
        start = len(self.log)
        for atom in axiom.conclusion:
            if isinstance(atom, Defined):
                self.define(atom.term, subst)
            else:
                left = self.define(atom.lhs, subst)
                right = self.define(atom.rhs, subst)
                self.merge(left, right)
        produced = len(self.log) - start
        if produced:
            self.firing += 1
        return produced

    # -- matching -----------------------------------------------------------

    def index(self, delta: frozenset[int] | None = None) -> _Index:
        classes: dict[str, list[int]] = {}
        for element, sort in enumerate(self.sorts):
            if self.find(element) == element:
                classes.setdefault(sort, []).append(element)
        by_result: dict[str, dict[int, list[Key]]] = {}
        by_arg: dict[str, list[dict[int, list[Key]]]] = {}
        for symbol in self.theory.ops:
            results: dict[int, list[Key]] = {}
            positions: list[dict[int, list[Key]]] = [{} for _ in symbol.arg_sorts]
            for key, value in self.tables[symbol.name].items():
                results.setdefault(self.find(value), []).append(key)
                for pos, arg in enumerate(key):
                    positions[pos].setdefault(arg, []).append(key)
            by_result[symbol.name] = results
            by_arg[symbol.name] = positions
        return _Index(classes, by_result, by_arg, delta)

    def match_term(
        self, idx: _Index, term: Term, target: int | None, subst: Substitution
    ) -> Iterator[tuple[Substitution, int, bool]]:
        """Yield (substitution, value, touches delta) for each match of a term."""
        if isinstance(term, Var):
            bound = subst.get(term.name)
            if bound is not None:
                if target is None or bound == target:
                    yield subst, bound, False
                return
            if target is not None:
                yield {**subst, term.name: target}, target, False
                return
            for element in idx.classes.get(term.sort, ()):
                yield {**subst, term.name: element}, element, idx.fresh(element)
            return
        table = self.tables[term.op]
        keys: Iterable[Key]
        if target is not None:
            keys = idx.by_result[term.op].get(target, ())
        else:
            keys = table.keys()
            for pos, arg in enumerate(term.args):
                if isinstance(arg, Var) and arg.name in subst:
                    keys = idx.by_arg[term.op][pos].get(subst[arg.name], ())
                    break
        for key in list(keys):
            value = self.find(table[key])
            new = idx.fresh(value, *key)
            for matched, inner in self.match_args(idx, term.args, key, 0, subst):
                yield matched, value, new or inner

    def match_args(
        self,
        idx: _Index,
        args: tuple[Term, ...],
        key: Key,
        pos: int,
        subst: Substitution,
    ) -> Iterator[tuple[Substitution, bool]]:
        if pos == len(args):
            yield subst, False
            return
        for matched, _, new in self.match_term(idx, args[pos], key[pos], subst):
            for rest, later in self.match_args(idx, args, key, pos + 1, matched):
                yield rest, new or later

    def match_atom(
        self, idx: _Index, atom: Atom, subst: Substitution
    ) -> Iterator[tuple[Substitution, bool]]:
        if isinstance(atom, Defined):
            for matched, _, new in self.match_term(idx, atom.term, None, subst):
                yield matched, new
            return
        lhs, rhs = atom.lhs, atom.rhs
        if isinstance(lhs, Var) and lhs.name not in subst and not (
            isinstance(rhs, Var) and rhs.name not in subst
        ):
            lhs, rhs = rhs, lhs
        for matched, value, new in self.match_term(idx, lhs, None, subst):
            for both, _, other in self.match_term(idx, rhs, value, matched):
                yield both, new or other

    def match_axiom(self, idx: _Index, axiom: Axiom) -> list[Substitution]:
        """Premise matches; with a delta, only those touching it."""
        found: list[Substitution] = []
        seen: set[Key] = set()

        def walk(
            pos: int, subst: Substitution, *, fresh: bool
        ) -> Iterator[Substitution]:
            if pos == len(axiom.premise):
                yield from self.bind_rest(idx, axiom.context, subst, fresh=fresh)
                return
            for matched, new in self.match_atom(idx, axiom.premise[pos], subst):
                yield from walk(pos + 1, matched, fresh=fresh or new)

        for subst in walk(0, {}, fresh=idx.delta is None):
            key = tuple(subst[v.name] for v in axiom.context)
            if key not in seen:
                seen.add(key)
                found.append(subst)
        return found

    def bind_rest(
        self,
        idx: _Index,
        context: tuple[Var, ...],
        subst: Substitution,
        *,
        fresh: bool,
    ) -> Iterator[Substitution]:
        for pos, var in enumerate(context):
            if var.name not in subst:
                rest = context[pos + 1 :]
                last = all(v.name in subst for v in rest)
                for element in idx.classes.get(var.sort, ()):
                    new = idx.fresh(element)
                    if last and not (fresh or new):
                        continue
                    yield from self.bind_rest(
                        idx, rest, {**subst, var.name: element}, fresh=fresh or new
                    )
                return
        if fresh:
            yield subst

    # -- rounds -------------------------------------------------------------

    def run_round(
        self,
        fired: set[tuple[str, Key]],
        *,
        semi_naive: bool,
        verify_full: bool,
    ) -> RoundStats:
        self.stage += 1
        delta = (
            frozenset(self.find(e) for e in self.touched)
            if semi_naive and self.stage > 1
            else None
        )
        self.touched = set()
        idx = self.index(delta)
        matches = [
            (axiom, subst)
            for axiom in self.theory.axioms
            for subst in self.match_axiom(idx, axiom)
        ]
        before = len(self.log)
        fired_now = skipped = 0
        for axiom, subst in matches:
            canonical = {name: self.find(value) for name, value in subst.items()}
            key = (axiom.name, tuple(canonical[v.name] for v in axiom.context))
            if semi_naive and key in fired:
                skipped += 1
                if verify_full:
                    self.verify_instance(axiom, canonical)
                continue
            fired.add(key)
            self.fire(axiom, canonical)
            fired_now += 1
        events = self.log[before:]
        stats = RoundStats(
            self.stage,
            len(matches),
            fired_now,
            skipped,
            sum(1 for e in events if e.kind == "create"),
            sum(1 for e in events if e.kind == "merge"),
            -1 if delta is None else len(delta),
        )
        log.debug(
            "round %s: %s delta, %s matches, %s fired, %s created, %s merged",
            stats.round,
            stats.delta,
            stats.matches,
            stats.fired,
            stats.created,
            stats.merged,
        )
        self.stats.append(stats)
        return stats

    def verify_instance(self, axiom: Axiom, subst: Mapping[str, int]) -> None:
        if all(self.holds(atom, subst) for atom in axiom.conclusion):
            self.verified += 1
            return
        log.warning("instance of %s lost its conclusion; refiring", axiom.name)
        self.fire(axiom, subst)

    def freeze(
        self, *, partial: bool = False, saturated: bool = False
    ) -> SaturationState:
        canonical = tuple(self.find(e) for e in range(len(self.parent)))
        tables = {
            op: {key: canonical[value] for key, value in table.items()}
            for op, table in self.tables.items()
        }
        generators = {
            e.op or "": e.element
            for e in self.log
            if e.kind == "create" and e.axiom.startswith(GENERATOR_PREFIX)
        }
        return SaturationState(
            theory=self.theory,
            generators={name: canonical[e] for name, e in generators.items()},
            sorts=tuple(self.sorts),
            canonical=canonical,
            tables=tables,
            stage=self.stage,
            provenance=tuple(self.log),
            saturated=saturated,
            partial=partial,
            verified=self.verified,
            round_stats=tuple(self.stats),
            creations={
                e.element: (e.op or "", e.args) for e in self.log if e.kind == "create"
            },
        )


# =============================================================================
# OPERATIONS
# =============================================================================


def _require_valid(theory: TheoryPresentation) -> None:
    diagnostics = validate(theory)
    if diagnostics:
        msg = f"theory {theory.name!r} has {len(diagnostics)} validation errors"
        raise TheoryValidationError(msg, [d.message for d in diagnostics])


def saturate(
    theory: TheoryPresentation,
    generators: Generators | None = None,
    rounds: int = 0,
    *,
    cap: int | None = None,
    semi_naive: bool = True,
    verify_full: bool = False,
) -> SaturationState:
    """Run `rounds` fair chase rounds from the generator constants.

    Args:
        theory: Validated presentation.
        generators: Constants and ground facts; none by default.
        rounds: Round budget (nonnegative).
        cap: Element cap; defaults to EATFORGE_CAP or 10**6.
        semi_naive: Match only instances touching elements created or merged
            in the previous round, and skip those that already fired.
        verify_full: Re-check skipped instances against the current state.

    Returns:
        The state after the budget or at an earlier fixpoint.

    Raises:
        TheoryValidationError: If the theory has diagnostics.
        ResourceLimitError: If the element cap is exceeded.

    """
    if rounds < 0:
        msg = f"rounds must be nonnegative, got {rounds}"
        raise ValueError(msg)
    _require_valid(theory)
    gens = generators or Generators()
    extended = gens.extend_theory(theory)
    builder = _Builder(extended, config.default_cap() if cap is None else cap)
    for axiom in extended.axioms:
        if axiom.name.startswith(GENERATOR_PREFIX):
            builder.fire(axiom, {})
    fired: set[tuple[str, Key]] = set()
    saturated = False
    for _ in range(rounds):
        stats = builder.run_round(fired, semi_naive=semi_naive, verify_full=verify_full)
        if stats.created == 0 and stats.merged == 0:
            saturated = True
            builder.stage = rounds
            break
    log.info(
        "saturated %r to stage %s: %s elements, %s events",
        theory.name,
        builder.stage,
        len(builder.parent),
        len(builder.log),
    )
    return builder.freeze(saturated=saturated)


def replay(state: SaturationState, *, cap: int | None = None) -> SaturationState:
    """Rebuild a state by re-firing its provenance log from scratch.

    Every recorded firing is checked: its premise must hold in the replayed
    state and re-firing must emit exactly the recorded events.

    Raises:
        ProvenanceError: On any unjustified or diverging event.

    """
    builder = _Builder(state.theory, cap if cap is not None else config.default_cap())
    entries = state.provenance
    pos = 0
    while pos < len(entries):
        head = entries[pos]
        end = pos
        while end < len(entries) and entries[end].firing == head.firing:
            end += 1
        axiom = state.theory.axiom(head.axiom)
        if axiom is None:
            msg = f"firing {head.firing} cites unknown axiom {head.axiom!r}"
            raise ProvenanceError(msg)
        subst = dict(head.substitution)
        if not all(builder.holds(atom, subst) for atom in axiom.premise):
            msg = f"firing {head.firing}: premise of {axiom.name} does not hold"
            raise ProvenanceError(msg)
        start = len(builder.log)
        builder.firing = head.firing
        builder.fire(axiom, subst)
        if tuple(builder.log[start:]) != entries[pos:end]:
            msg = f"firing {head.firing} of {axiom.name} diverged on replay"
            raise ProvenanceError(msg)
        pos = end
    builder.stage = state.stage
    return builder.freeze(saturated=state.saturated)


def _check_env(state: SaturationState, env: Mapping[str, int], term: Term) -> None:
    for var in term_vars(term):
        if var.name not in env:
            msg = f"no binding for variable {var.name}"
            raise SortError(msg)
        actual = state.sorts[env[var.name]]
        if var.sort and actual != var.sort:
            msg = f"variable {var.name} has sort {var.sort}, bound to {actual}"
            raise SortError(msg)


def _eval(state: SaturationState, env: Mapping[str, int], term: Term) -> int | None:
    if isinstance(term, Var):
        return state.find(env[term.name])
    args: list[int] = []
    for arg in term.args:
        value = _eval(state, env, arg)
        if value is None:
            return None
        args.append(value)
    return state.lookup(term.op, tuple(args))


def eval_term(
    state: SaturationState, env: Mapping[str, int], term: Term
) -> int | None:
    """Evaluate a term bottom-up.

    Args:
        state: Completed saturation state.
        env: Variable name to element id.
        term: Term over the state's (generator-extended) signature.

    Returns:
        Canonical element id, or None when undefined at this stage.

    Raises:
        SortError: If `env` misses a variable or binds it at the wrong sort.

    """
    _check_env(state, env, term)
    for op in term_ops(term):
        if op not in state.tables:
            msg = f"unknown op {op}"
            raise SortError(msg)
    return _eval(state, env, term)


def eq_check(
    state: SaturationState, env: Mapping[str, int], lhs: Term, rhs: Term
) -> StageVerdict:
    """Semi-decide equality: equal verdicts are sound for the free model."""
    left = eval_term(state, env, lhs)
    right = eval_term(state, env, rhs)
    if left is not None and left == right:
        return StageVerdict.EQUAL_AT_STAGE
    return StageVerdict.UNKNOWN_AT_STAGE


def enumerate_class(state: SaturationState, sort: str, n: int) -> int:
    """Return the class with Gödel index `n` among classes of `sort`.

    Raises:
        EnumerationIndexError: If `n` is out of range.

    """
    classes = state.classes(sort)
    if not 0 <= n < len(classes):
        msg = f"index {n} out of range for sort {sort} ({len(classes)} classes)"
        raise EnumerationIndexError(msg)
    return classes[n]


# =============================================================================
# CHAINS
# =============================================================================


@dataclass(frozen=True)
class EquationRecord:
    """An identification in the union model and the first stage realizing it."""

    lhs: str
    rhs: str
    realized_at: int | None


@dataclass(frozen=True)
class ReductReport:
    """Comparison of the union model's reduct to one stage with later stages."""

    stage: int
    elements: int
    realized_elements: int
    element_stages: tuple[int | None, ...]
    equations: tuple[EquationRecord, ...]

    @property
    def match(self) -> bool:
        """Every element and equation is realized at some stage."""
        return self.realized_elements == self.elements and all(
            e.realized_at is not None for e in self.equations
        )


@dataclass(frozen=True)
class ChainReport:
    """Per-stage saturations with the compactness comparison."""

    stage_states: tuple[SaturationState, ...]
    union_state: SaturationState
    reducts: tuple[ReductReport, ...]

    @property
    def match(self) -> bool:
        """All requested reducts match."""
        return all(r.match for r in self.reducts)

    def to_json(self) -> dict[str, JSONValue]:
        """JSON summary without the full states."""
        return {
            "match": self.match,
            "unionClassCounts": dict(self.union_state.class_counts()),
            "stageClassCounts": [dict(s.class_counts()) for s in self.stage_states],
            "reducts": [
                {
                    "stage": r.stage,
                    "match": r.match,
                    "elements": r.elements,
                    "realizedElements": r.realized_elements,
                    "equations": [
                        {"lhs": e.lhs, "rhs": e.rhs, "realizedAt": e.realized_at}
                        for e in r.equations
                    ],
                }
                for r in self.reducts
            ],
        }


def _first_stage(
    states: list[SaturationState],
    start: int,
    ops: set[str],
    check: Callable[[SaturationState], bool],
) -> int | None:
    for index in range(start, len(states)):
        state = states[index]
        if ops <= state.tables.keys() and check(state):
            return index
    return None


def free_model_of_chain(
    chain: TheoryChain,
    generators: Generators | None = None,
    rounds: int = 0,
    *,
    stage_index: int | None = None,
    higher_rounds: int | None = None,
    cap: int | None = None,
) -> ChainReport:
    """Compare the union model's stage reducts with the stage models.

    For each requested stage `i`, every class of a stage-`i` sort in the union
    model must have its creating term defined in some stage `j >= i`, and
    every identification must hold there too. Stages are tried at `rounds`
    and then at `higher_rounds` when given.

    Returns:
        The report; `report.match` is the overall verdict.

    """
    if not chain.check():
        msg = "chain inclusions do not pass check_inclusion"
        raise EatforgeError(msg)
    union_state = saturate(chain.union(), generators, rounds, cap=cap)
    stage_states = [saturate(s, generators, rounds, cap=cap) for s in chain.stages]
    higher_states: list[SaturationState] | None = None
    indices = range(len(chain.stages)) if stage_index is None else [stage_index]
    reducts: list[ReductReport] = []
    for i in indices:
        sorts = set(chain.stages[i].sort_names)
        element_stages: list[int | None] = []
        equations: list[EquationRecord] = []
        for sort in union_state.theory.sort_names:
            if sort not in sorts:
                continue
            for cls in union_state.classes(sort):
                term = union_state.term_of(cls)
                ops = set(term_ops(term))

                def defined(s: SaturationState, t: Term = term) -> bool:
                    return _eval(s, {}, t) is not None

                found = _first_stage(stage_states, i, ops, defined)
                if found is None and higher_rounds is not None:
                    if higher_states is None:
                        higher_states = [
                            saturate(s, generators, higher_rounds, cap=cap)
                            for s in chain.stages
                        ]
                    found = _first_stage(higher_states, i, ops, defined)
                element_stages.append(found)
                for member in union_state.members(cls):
                    if member == cls:
                        continue
                    other = union_state.term_of(member)
                    both = ops | set(term_ops(other))

                    def equal(
                        s: SaturationState, a: Term = term, b: Term = other
                    ) -> bool:
                        left = _eval(s, {}, a)
                        return left is not None and left == _eval(s, {}, b)

                    realized = _first_stage(stage_states, i, both, equal)
                    if realized is None and higher_rounds is not None:
                        if higher_states is None:
                            higher_states = [
                                saturate(s, generators, higher_rounds, cap=cap)
                                for s in chain.stages
                            ]
                        realized = _first_stage(higher_states, i, both, equal)
                    equations.append(
                        EquationRecord(format_term(term), format_term(other), realized)
                    )
        report = ReductReport(
            i,
            len(element_stages),
            sum(1 for s in element_stages if s is not None),
            tuple(element_stages),
            tuple(equations),
        )
        log.info(
            "chain stage %s: %s/%s elements, %s equations, match=%s",
            i,
            report.realized_elements,
            report.elements,
            len(report.equations),
            report.match,
        )
        reducts.append(report)
    return ChainReport(tuple(stage_states), union_state, tuple(reducts))


# =============================================================================
# DUMP
# =============================================================================


def dump_state(state: SaturationState) -> dict[str, JSONValue]:
    """Deterministic JSON dump of a state."""
    sort_names = state.theory.sort_names
    return {
        "theory": state.theory.name,
        "stage": state.stage,
        "saturated": state.saturated,
        "partial": state.partial,
        "elements": len(state.sorts),
        "sorts": list(sort_names),
        "classCounts": dict(state.class_counts()),
        "generators": dict(state.generators),
        "classes": [
            {
                "id": cls,
                "birthIndex": cls,
                "sort": state.sorts[cls],
                "size": len(state.members(cls)),
            }
            for cls in sorted(set(state.canonical))
        ],
        "enumeration": {sort: list(state.classes(sort)) for sort in sort_names},
        "tables": {
            op: [[*key, value] for key, value in sorted(table.items())]
            for op, table in sorted(state.tables.items())
        },
        "provenance": [entry.to_json() for entry in state.provenance],
    }


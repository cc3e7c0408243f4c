"""Explicit finite categories with brute-force structure search.

Objects and morphisms are addressed by index. `composition[(f, g)]` is the
index of `g . f` (first `f`, then `g`), the same orientation as the JSON
interchange format `comp: [[f, g, gf], ...]`.

Every search enumerates candidates in index order, so results are
deterministic: least object first, then least morphism indices.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

from eatforge.errors import CategoryLawError

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Iterator, Mapping

    from eatforge.jsonio import JSONValue

log = logging.getLogger("eatforge.fincat")

type Cone = tuple[int, tuple[int, ...]]
# (source foot, target foot, morphism) of a diagram
type Arrow = tuple[int, int, int]


# =============================================================================
# CATEGORIES
# =============================================================================


@dataclass(frozen=True)
class Morphism:
    """A named arrow between object indices."""

    name: str
    dom: int
    cod: int


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """A finite category given by its full composition table.

    Construction checks the category laws and raises `CategoryLawError` on
    the first violation.
    """

    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    composition: Mapping[tuple[int, int], int]
    identities: tuple[int, ...]
    name: str = ""

    def __post_init__(self) -> None:
        """Check identities, composability, units and associativity."""
        n_obj, n_mor = len(self.objects), len(self.morphisms)
        if len(set(self.objects)) != n_obj:
            msg = f"{self.name}: duplicate object names"
            raise CategoryLawError(msg)
        for m in self.morphisms:
            if not (0 <= m.dom < n_obj and 0 <= m.cod < n_obj):
                msg = f"{self.name}: morphism {m.name} has an unknown endpoint"
                raise CategoryLawError(msg)
        if len(self.identities) != n_obj:
            count = len(self.identities)
            msg = f"{self.name}: expected {n_obj} identities, got {count}"
            raise CategoryLawError(msg)
        for obj, ident in enumerate(self.identities):
            m = self.morphisms[ident]
            if m.dom != obj or m.cod != obj:
                msg = (
                    f"{self.name}: identity {m.name} is not an endomorphism"
                    f" of {self.objects[obj]}"
                )
                raise CategoryLawError(msg)
        for f, g in itertools.product(range(n_mor), repeat=2):
            mf, mg = self.morphisms[f], self.morphisms[g]
            result = self.composition.get((f, g))
            if (mf.cod == mg.dom) != (result is not None):
                msg = f"{self.name}: composite {mf.name};{mg.name} is misdefined"
                raise CategoryLawError(msg)
            if result is None:
                continue
            r = self.morphisms[result]
            if (r.dom, r.cod) != (mf.dom, mg.cod):
                msg = f"{self.name}: composite {mf.name};{mg.name} has wrong ends"
                raise CategoryLawError(msg)
        for f, m in enumerate(self.morphisms):
            if (
                self.composition[(self.identities[m.dom], f)] != f
                or self.composition[(f, self.identities[m.cod])] != f
            ):
                msg = f"{self.name}: unit law fails at {m.name}"
                raise CategoryLawError(msg)
        table = self.composition
        for (f, g), fg in table.items():
            for h in self._out[self.morphisms[g].cod]:
                if table[(fg, h)] != table[(f, table[(g, h)])]:
                    names = ", ".join(self.morphisms[x].name for x in (f, g, h))
                    msg = f"{self.name}: associativity fails at ({names})"
                    raise CategoryLawError(msg)

    # -------------------------------------------------------------------------
    # construction helpers
    # -------------------------------------------------------------------------

    @classmethod
    def build(
        cls,
        objects: Iterable[str],
        morphisms: Iterable[tuple[str, str, str]],
        composition: Iterable[tuple[str, str, str]],
        identities: Mapping[str, str] | None = None,
        name: str = "",
    ) -> FiniteCategory:
        """Build a category from names.

        Args:
            objects: Object names in index order.
            morphisms: `(name, dom, cod)` triples in index order.
            composition: `(f, g, gf)` name triples; composites with an
                identity are filled in automatically.
            identities: Object name to identity morphism name. Defaults to
                the morphism named `id_<object>`.
            name: Label used in error messages and reports.

        Returns:
            The checked category.

        Raises:
            CategoryLawError: If names are unknown or a law fails.

        """
        objs = tuple(objects)
        obj_index = {o: i for i, o in enumerate(objs)}
        mors: list[Morphism] = []
        for mor_name, dom, cod in morphisms:
            if dom not in obj_index or cod not in obj_index:
                msg = f"{name}: morphism {mor_name} has an unknown endpoint"
                raise CategoryLawError(msg)
            mors.append(Morphism(mor_name, obj_index[dom], obj_index[cod]))
        mor_index = {m.name: i for i, m in enumerate(mors)}
        if len(mor_index) != len(mors):
            msg = f"{name}: duplicate morphism names"
            raise CategoryLawError(msg)
        chosen = identities if identities is not None else {o: f"id_{o}" for o in objs}
        try:
            ids = tuple(mor_index[chosen[o]] for o in objs)
        except KeyError as exc:
            msg = f"{name}: missing identity {exc.args[0]}"
            raise CategoryLawError(msg) from exc
        table: dict[tuple[int, int], int] = {}
        for f, g, gf in composition:
            try:
                table[(mor_index[f], mor_index[g])] = mor_index[gf]
            except KeyError as exc:
                msg = f"{name}: composition mentions unknown morphism {exc.args[0]}"
                raise CategoryLawError(msg) from exc
        for i, m in enumerate(mors):
            table.setdefault((ids[m.dom], i), i)
            table.setdefault((i, ids[m.cod]), i)
        return cls(objs, tuple(mors), table, ids, name)

    # -------------------------------------------------------------------------
    # basic access
    # -------------------------------------------------------------------------

    @cached_property
    def _homs(self) -> dict[tuple[int, int], tuple[int, ...]]:
        homs: dict[tuple[int, int], list[int]] = {}
        for i, m in enumerate(self.morphisms):
            homs.setdefault((m.dom, m.cod), []).append(i)
        return {k: tuple(v) for k, v in homs.items()}

    @cached_property
    def _out(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {o: [] for o in range(len(self.objects))}
        for i, m in enumerate(self.morphisms):
            out[m.dom].append(i)
        return {k: tuple(v) for k, v in out.items()}

    def hom(self, a: int, b: int) -> tuple[int, ...]:
        """Morphism indices from `a` to `b` in index order."""
        return self._homs.get((a, b), ())

    def into(self, b: int) -> Iterator[int]:
        """Morphism indices with codomain `b`."""
        return (i for i, m in enumerate(self.morphisms) if m.cod == b)

    def dom(self, f: int) -> int:
        return self.morphisms[f].dom

    def cod(self, f: int) -> int:
        return self.morphisms[f].cod

    def ident(self, obj: int) -> int:
        return self.identities[obj]

    def then(self, f: int, g: int) -> int:
        """Composite `g . f`."""
        return self.composition[(f, g)]

    def compose(self, g: int, f: int) -> int:
        """Composite `g . f`."""
        return self.composition[(f, g)]

    def label(self, f: int) -> str:
        m = self.morphisms[f]
        return f"{m.name}: {self.objects[m.dom]} -> {self.objects[m.cod]}"

    @cached_property
    def is_preorder(self) -> bool:
        """Every hom set has at most one element."""
        return all(len(v) <= 1 for v in self._homs.values())

    # -------------------------------------------------------------------------
    # morphism classes
    # -------------------------------------------------------------------------

    @cached_property
    def _monos(self) -> frozenset[int]:
        found: set[int] = set()
        for f, m in enumerate(self.morphisms):
            incoming = list(self.into(m.dom))
            if all(
                g == h
                for g, h in itertools.combinations(incoming, 2)
                if self.dom(g) == self.dom(h)
                and self.then(g, f) == self.then(h, f)
            ):
                found.add(f)
        return frozenset(found)

    @cached_property
    def _epis(self) -> frozenset[int]:
        found: set[int] = set()
        for f, m in enumerate(self.morphisms):
            outgoing = self._out[m.cod]
            if all(
                g == h
                for g, h in itertools.combinations(outgoing, 2)
                if self.cod(g) == self.cod(h)
                and self.then(f, g) == self.then(f, h)
            ):
                found.add(f)
        return frozenset(found)

    @cached_property
    def _isos(self) -> frozenset[int]:
        return frozenset(
            f for f in range(len(self.morphisms)) if self.inverse(f) is not None
        )

    @cached_property
    def _covers(self) -> frozenset[int]:
        found: set[int] = set()
        for f, m in enumerate(self.morphisms):
            proper = (
                k for k in self.into(m.cod) if k in self._monos and k not in self._isos
            )
            if all(self.factor_through(f, k) is None for k in proper):
                found.add(f)
        return frozenset(found)

    def inverse(self, f: int) -> int | None:
        """Least two-sided inverse of `f`, if any."""
        m = self.morphisms[f]
        for g in self.hom(m.cod, m.dom):
            if (
                self.then(f, g) == self.ident(m.dom)
                and self.then(g, f) == self.ident(m.cod)
            ):
                return g
        return None

    def is_mono(self, f: int) -> bool:
        """Left-cancellable: `f . g = f . h` implies `g = h`."""
        return f in self._monos

    def is_epi(self, f: int) -> bool:
        """Right-cancellable."""
        return f in self._epis

    def is_iso(self, f: int) -> bool:
        return f in self._isos

    def is_split_epi(self, f: int) -> bool:
        """Some `s` satisfies `f . s = id`."""
        m = self.morphisms[f]
        return any(self.then(s, f) == self.ident(m.cod) for s in self.hom(m.cod, m.dom))

    def factor_through(self, f: int, m: int) -> int | None:
        """Least `g` with `m . g = f`, if any."""
        for g in self.hom(self.dom(f), self.dom(m)):
            if self.then(g, m) == f:
                return g
        return None

    def is_cover(self, f: int) -> bool:
        """`f` factors through no proper subobject of its codomain."""
        return f in self._covers

    def is_extremal_epi(self, f: int) -> bool:
        """Epi such that every mono it factors through is iso."""
        if not self.is_epi(f):
            return False
        return all(
            self.is_iso(k)
            for k in self.into(self.cod(f))
            if self.is_mono(k) and self.factor_through(f, k) is not None
        )

    # -------------------------------------------------------------------------
    # limits
    # -------------------------------------------------------------------------

    def _cones(
        self, feet: tuple[int, ...], commutes: Callable[[tuple[int, ...]], bool]
    ) -> list[Cone]:
        return [
            (apex, legs)
            for apex in range(len(self.objects))
            for legs in itertools.product(*(self.hom(apex, foot) for foot in feet))
            if commutes(legs)
        ]

    def _universal(self, candidate: Cone, cones: list[Cone]) -> bool:
        apex, legs = candidate
        for other, other_legs in cones:
            mediating = [
                u
                for u in self.hom(other, apex)
                if all(
                    self.then(u, leg) == k
                    for leg, k in zip(legs, other_legs, strict=True)
                )
            ]
            if len(mediating) != 1:
                return False
        return True

    def _limit(
        self, feet: tuple[int, ...], commutes: Callable[[tuple[int, ...]], bool]
    ) -> Cone | None:
        cones = self._cones(feet, commutes)
        for candidate in cones:
            if self._universal(candidate, cones):
                return candidate
        return None

    def is_limit_cone(
        self,
        candidate: Cone,
        feet: tuple[int, ...],
        commutes: Callable[[tuple[int, ...]], bool] = lambda _legs: True,
    ) -> bool:
        """Whether `candidate` is a limit of the given shape."""
        return commutes(candidate[1]) and self._universal(
            candidate, self._cones(feet, commutes)
        )

    def terminal(self) -> int | None:
        """Least terminal object."""
        found = self._limit((), lambda _legs: True)
        return None if found is None else found[0]

    def is_terminal(self, obj: int) -> bool:
        return all(len(self.hom(x, obj)) == 1 for x in range(len(self.objects)))

    def product(self, a: int, b: int) -> Cone | None:
        """Binary product `(p, (p1, p2))`."""
        return self._limit((a, b), lambda _legs: True)

    def pullback(self, f: int, g: int) -> Cone | None:
        """Pullback `(p, (p1, p2))` of a cospan `f`, `g`."""
        if self.cod(f) != self.cod(g):
            return None
        return self._limit(
            (self.dom(f), self.dom(g)),
            lambda legs: self.then(legs[0], f) == self.then(legs[1], g),
        )

    def equalizer(self, f: int, g: int) -> Cone | None:
        """Equalizer `(e, (k, k;f))` of a parallel pair `f`, `g`."""
        if (self.dom(f), self.cod(f)) != (self.dom(g), self.cod(g)):
            return None
        return self.limit((self.dom(f), self.cod(f)), ((0, 1, f), (0, 1, g)))

    def commuting(self, arrows: Iterable[Arrow]) -> Callable[[tuple[int, ...]], bool]:
        """Cone condition of a diagram: `legs[i] ; f == legs[j]` per arrow."""
        shape = tuple(arrows)
        return lambda legs: all(self.then(legs[i], f) == legs[j] for i, j, f in shape)

    def limit(self, feet: tuple[int, ...], arrows: Iterable[Arrow] = ()) -> Cone | None:
        """Limit of the finite diagram with objects `feet` and arrows `(i, j, f)`."""
        return self._limit(feet, self.commuting(arrows))

    def kernel_pair(self, f: int) -> Cone | None:
        return self.pullback(f, f)

    def is_mono_via_kernel_pair(self, f: int) -> bool | None:
        """Both kernel-pair projections iso; `None` when no kernel pair exists."""
        kp = self.kernel_pair(f)
        if kp is None:
            return None
        p1, p2 = kp[1]
        return self.is_iso(p1) and self.is_iso(p2)

    @cached_property
    def has_finite_limits(self) -> bool:
        """Terminal object and all pullbacks exist."""
        if self.terminal() is None:
            return False
        n = len(self.morphisms)
        return all(
            self.pullback(f, g) is not None
            for f, g in itertools.product(range(n), repeat=2)
            if self.cod(f) == self.cod(g)
        )

    # -------------------------------------------------------------------------
    # subobjects and images
    # -------------------------------------------------------------------------

    def subobjects(self, obj: int) -> SubobjectLattice:
        """Monos into `obj` up to mutual factorisation."""
        monos = [m for m in self.into(obj) if self.is_mono(m)]
        classes: list[list[int]] = []
        for m in monos:
            for cls_ in classes:
                rep = cls_[0]
                if (
                    self.factor_through(m, rep) is not None
                    and self.factor_through(rep, m) is not None
                ):
                    cls_.append(m)
                    break
            else:
                classes.append([m])
        order = frozenset(
            (i, j)
            for (i, a), (j, b) in itertools.product(enumerate(classes), repeat=2)
            if self.factor_through(a[0], b[0]) is not None
        )
        top = next(i for i, c in enumerate(classes) if self.ident(obj) in c)
        return SubobjectLattice(obj, tuple(tuple(c) for c in classes), order, top)

    def image_factorisations(self, f: int) -> Iterator[tuple[int, int]]:
        """All `(cover, mono)` pairs composing to `f`, in tie-break order."""
        m = self.morphisms[f]
        for mid in range(len(self.objects)):
            for e in self.hom(m.dom, mid):
                if not self.is_cover(e):
                    continue
                for k in self.hom(mid, m.cod):
                    if self.is_mono(k) and self.then(e, k) == f:
                        yield e, k

    def image_factorisation(self, f: int) -> tuple[int, int] | None:
        """First cover-mono factorisation of `f`, or `None`."""
        return next(self.image_factorisations(f), None)

    def images_unique(self, f: int) -> bool:
        """Any two image factorisations are related by a commuting iso."""
        found = list(self.image_factorisations(f))
        for (e1, m1), (e2, m2) in itertools.combinations(found, 2):
            if not any(
                self.is_iso(u) and self.then(e1, u) == e2 and self.then(u, m2) == m1
                for u in self.hom(self.cod(e1), self.cod(e2))
            ):
                return False
        return True


@dataclass(frozen=True)
class SubobjectLattice:
    """Subobjects of one object ordered by factorisation."""

    target: int
    classes: tuple[tuple[int, ...], ...]
    order: frozenset[tuple[int, int]]
    top: int

    def leq(self, i: int, j: int) -> bool:
        return (i, j) in self.order

    def is_poset(self) -> bool:
        n = range(len(self.classes))
        reflexive = all(self.leq(i, i) for i in n)
        antisymmetric = all(
            not (self.leq(i, j) and self.leq(j, i)) for i in n for j in n if i != j
        )
        transitive = all(
            self.leq(i, k)
            for i in n
            for j in n
            for k in n
            if self.leq(i, j) and self.leq(j, k)
        )
        return reflexive and antisymmetric and transitive

    def top_is_greatest(self) -> bool:
        return all(self.leq(i, self.top) for i in range(len(self.classes)))


# =============================================================================
# FUNCTORS
# =============================================================================


@dataclass(frozen=True, eq=False)
class FinFunctor:
    """A functor between finite categories, checked on construction."""

    source: FiniteCategory
    target: FiniteCategory
    object_map: tuple[int, ...]
    morphism_map: tuple[int, ...]
    name: str = ""

    def __post_init__(self) -> None:
        """Check endpoints, identities and composites are preserved."""
        src, tgt = self.source, self.target
        if len(self.object_map) != len(src.objects) or len(self.morphism_map) != len(
            src.morphisms
        ):
            msg = f"{self.name}: maps do not cover the source"
            raise CategoryLawError(msg)
        for f, m in enumerate(src.morphisms):
            image = tgt.morphisms[self.morphism_map[f]]
            ends = (self.object_map[m.dom], self.object_map[m.cod])
            if (image.dom, image.cod) != ends:
                msg = f"{self.name}: image of {m.name} has wrong ends"
                raise CategoryLawError(msg)
        for obj, ident in enumerate(src.identities):
            if self.morphism_map[ident] != tgt.ident(self.object_map[obj]):
                msg = f"{self.name}: identity of {src.objects[obj]} not preserved"
                raise CategoryLawError(msg)
        for (f, g), gf in src.composition.items():
            composite = tgt.then(self.morphism_map[f], self.morphism_map[g])
            if self.morphism_map[gf] != composite:
                msg = f"{self.name}: composite {src.morphisms[gf].name} not preserved"
                raise CategoryLawError(msg)

    def obj(self, x: int) -> int:
        return self.object_map[x]

    def mor(self, f: int) -> int:
        return self.morphism_map[f]


def identity_functor(cat: FiniteCategory) -> FinFunctor:
    return FinFunctor(
        cat,
        cat,
        tuple(range(len(cat.objects))),
        tuple(range(len(cat.morphisms))),
        f"id[{cat.name}]",
    )


def monotone_functor(
    source: FiniteCategory,
    target: FiniteCategory,
    object_map: tuple[int, ...],
    name: str = "",
) -> FinFunctor:
    """Functor between preorders determined by its object map.

    Raises:
        CategoryLawError: If some arrow has no image arrow.

    """
    images: list[int] = []
    for m in source.morphisms:
        hom = target.hom(object_map[m.dom], object_map[m.cod])
        if not hom:
            msg = f"{name}: object map is not monotone"
            raise CategoryLawError(msg)
        images.append(hom[0])
    return FinFunctor(source, target, object_map, tuple(images), name)


# =============================================================================
# COMMA CATEGORIES
# =============================================================================


@dataclass(frozen=True, eq=False)
class CommaCategory:
    """`F1 / F0` with its two projections and the transformation alpha.

    `triples[x]` is `(c1, c0, phi)` for comma object `x` and `pairs[u]` is
    `(u1, u0)` for comma morphism `u`.
    """

    category: FiniteCategory
    first: FinFunctor
    second: FinFunctor
    triples: tuple[tuple[int, int, int], ...]
    pairs: tuple[tuple[int, int], ...]
    first_projection: FinFunctor
    second_projection: FinFunctor

    def alpha(self, obj: int) -> int:
        """Component of the comma transformation at a comma object."""
        return self.triples[obj][2]

    @cached_property
    def object_index(self) -> dict[tuple[int, int, int], int]:
        """Comma object of each triple."""
        return {t: i for i, t in enumerate(self.triples)}

    @cached_property
    def morphism_index(self) -> dict[tuple[tuple[int, int], tuple[int, int]], int]:
        """Comma morphism of each component pair with its ends."""
        cat = self.category
        return {(p, (cat.dom(i), cat.cod(i))): i for i, p in enumerate(self.pairs)}


def comma(first: FinFunctor, second: FinFunctor, *, iso: bool = False) -> CommaCategory:
    """Comma (or iso-comma) category of a cospan of functors.

    Args:
        first: `F1 : C1 -> D`.
        second: `F0 : C0 -> D`.
        iso: Restrict `phi` to isomorphisms.

    Returns:
        The comma category with projections to `C1` and `C0`.

    Raises:
        CategoryLawError: If the functors do not share a target.

    """
    if first.target is not second.target:
        msg = "comma needs functors with a common target"
        raise CategoryLawError(msg)
    c1, c0, d = first.source, second.source, first.target
    triples = [
        (x1, x0, phi)
        for x1 in range(len(c1.objects))
        for x0 in range(len(c0.objects))
        for phi in d.hom(first.obj(x1), second.obj(x0))
        if not iso or d.is_iso(phi)
    ]
    pairs: list[tuple[int, int]] = []
    ends: list[tuple[int, int]] = []
    for a, (a1, a0, phi) in enumerate(triples):
        for b, (b1, b0, psi) in enumerate(triples):
            for u1 in c1.hom(a1, b1):
                for u0 in c0.hom(a0, b0):
                    if d.then(first.mor(u1), psi) == d.then(phi, second.mor(u0)):
                        pairs.append((u1, u0))
                        ends.append((a, b))
    pair_index = {
        (pair, end): i for i, (pair, end) in enumerate(zip(pairs, ends, strict=True))
    }
    table: dict[tuple[int, int], int] = {}
    for f, ((f1, f0), (fa, fb)) in enumerate(zip(pairs, ends, strict=True)):
        for g, ((g1, g0), (ga, gb)) in enumerate(zip(pairs, ends, strict=True)):
            if fb == ga:
                both = (c1.then(f1, g1), c0.then(f0, g0))
                table[(f, g)] = pair_index[(both, (fa, gb))]
    names = tuple(
        f"({c1.objects[x1]},{c0.objects[x0]},{d.morphisms[phi].name})"
        for x1, x0, phi in triples
    )
    mors = tuple(
        Morphism(f"({c1.morphisms[u1].name},{c0.morphisms[u0].name}):{a}->{b}", a, b)
        for (u1, u0), (a, b) in zip(pairs, ends, strict=True)
    )
    identities = tuple(
        pair_index[((c1.ident(x1), c0.ident(x0)), (x, x))]
        for x, (x1, x0, _) in enumerate(triples)
    )
    kind = "iso-comma" if iso else "comma"
    label = f"{kind}({first.name},{second.name})"
    category = FiniteCategory(names, mors, table, identities, label)
    log.debug("%s has %s objects, %s morphisms", category.name, len(names), len(mors))
    return CommaCategory(
        category,
        first,
        second,
        tuple(triples),
        tuple(pairs),
        FinFunctor(
            category, c1, tuple(t[0] for t in triples), tuple(p[0] for p in pairs), "P1"
        ),
        FinFunctor(
            category, c0, tuple(t[1] for t in triples), tuple(p[1] for p in pairs), "P0"
        ),
    )


def iso_comma(first: FinFunctor, second: FinFunctor) -> CommaCategory:
    return comma(first, second, iso=True)


# =============================================================================
# CLAIM CHECKS
# =============================================================================


@dataclass(frozen=True)
class ClaimResult:
    """Outcome of one brute-force claim check on one instance."""

    claim: str
    instance: str
    passed: bool
    checked: int
    counterexamples: tuple[str, ...] = field(default=())

    def to_json(self) -> dict[str, JSONValue]:
        return {
            "claim": self.claim,
            "instance": self.instance,
            "passed": self.passed,
            "checked": self.checked,
            "counterexamples": list(self.counterexamples),
        }


def _result(claim: str, instance: str, checked: int, bad: list[str]) -> ClaimResult:
    return ClaimResult(claim, instance, not bad, checked, tuple(bad))


def _lifted_limit(
    cc: CommaCategory, feet: tuple[int, ...], arrows: tuple[Arrow, ...]
) -> bool | None:
    """Whether the componentwise limit of a comma diagram is a limit there.

    None when a component limit is missing or the second functor does not
    preserve the one in its source.
    """
    f1, f0 = cc.first, cc.second
    c1, c0, d, cat = f1.source, f0.source, f1.target, cc.category
    tops = [cc.triples[x] for x in feet]
    arrows1 = [(i, j, cc.pairs[u][0]) for i, j, u in arrows]
    arrows0 = [(i, j, cc.pairs[u][1]) for i, j, u in arrows]
    lim1 = c1.limit(tuple(t[0] for t in tops), arrows1)
    lim0 = c0.limit(tuple(t[1] for t in tops), arrows0)
    if lim1 is None or lim0 is None:
        return None
    (q1, legs1), (q0, legs0) = lim1, lim0
    image = (f0.obj(q0), tuple(f0.mor(leg) for leg in legs0))
    feet_d = tuple(f0.obj(t[1]) for t in tops)
    arrows_d = [(i, j, f0.mor(u0)) for i, j, u0 in arrows0]
    if not d.is_limit_cone(image, feet_d, d.commuting(arrows_d)):
        return None
    chi = [
        c
        for c in d.hom(f1.obj(q1), f0.obj(q0))
        if all(
            d.then(c, f0.mor(l0)) == d.then(f1.mor(l1), t[2])
            for l1, l0, t in zip(legs1, legs0, tops, strict=True)
        )
    ]
    if len(chi) != 1:
        return False
    z = cc.object_index[(q1, q0, chi[0])]
    legs = [
        cc.morphism_index.get(((l1, l0), (z, x)))
        for l1, l0, x in zip(legs1, legs0, feet, strict=True)
    ]
    if any(leg is None for leg in legs):
        return False
    cone = (z, tuple(leg for leg in legs if leg is not None))
    return cat.is_limit_cone(cone, feet, cat.commuting(arrows))


def comma_limit_shapes(cc: CommaCategory) -> dict[str, tuple[int, list[str]]]:
    """Check componentwise limits per shape: terminal, products, equalizers.

    These three shapes generate all finite limits. A diagram counts only when
    both component limits exist and the second functor preserves its one.

    Returns:
        Shape name to (instances checked, counterexamples).

    """
    cat = cc.category
    shapes: dict[str, tuple[int, list[str]]] = {}

    def run(
        name: str, diagrams: Iterable[tuple[tuple[int, ...], tuple[Arrow, ...], str]]
    ) -> None:
        checked, bad = 0, []
        for feet, arrows, label in diagrams:
            verdict = _lifted_limit(cc, feet, arrows)
            if verdict is None:
                continue
            checked += 1
            if not verdict:
                bad.append(f"{name} {label}")
        shapes[name] = (checked, bad)

    objects = range(len(cat.objects))
    run("terminal", [((), (), "object")])
    run(
        "product",
        (
            ((x, y), (), f"of {cat.objects[x]} and {cat.objects[y]}")
            for x, y in itertools.combinations_with_replacement(objects, 2)
        ),
    )
    run(
        "equalizer",
        (
            (
                (cat.dom(u), cat.cod(u)),
                ((0, 1, u), (0, 1, v)),
                f"of {cat.label(u)} and {cat.label(v)}",
            )
            for u, v in itertools.combinations(range(len(cat.morphisms)), 2)
            if (cat.dom(u), cat.cod(u)) == (cat.dom(v), cat.cod(v))
        ),
    )
    return shapes


def _comma_limits(cc: CommaCategory) -> tuple[int, list[str]]:
    shapes = comma_limit_shapes(cc).values()
    return sum(n for n, _ in shapes), [b for _, bad in shapes for b in bad]


def _comma_covers(cc: CommaCategory) -> tuple[int, list[str]]:
    c1, c0, cat = cc.first.source, cc.second.source, cc.category
    checked, bad = 0, []
    for u, (u1, u0) in enumerate(cc.pairs):
        if c1.is_cover(u1) and c0.is_cover(u0):
            checked += 1
            if not cat.is_cover(u):
                bad.append(cat.label(u))
    return checked, bad


def _comma_lifts(cc: CommaCategory) -> tuple[int, list[str]]:
    f1, f0 = cc.first, cc.second
    c1, c0, d = f1.source, f0.source, f1.target
    checked, bad = 0, []
    # functors out of the terminal category pick an object on each side
    for x1, x0 in itertools.product(range(len(c1.objects)), range(len(c0.objects))):
        checked += 1
        lifts = sum(1 for t in cc.triples if t[:2] == (x1, x0))
        transformations = len(d.hom(f1.obj(x1), f0.obj(x0)))
        if lifts != transformations:
            bad.append(f"point ({c1.objects[x1]},{c0.objects[x0]})")
    # functors out of the arrow category pick a morphism on each side
    for u1, u0 in itertools.product(range(len(c1.morphisms)), range(len(c0.morphisms))):
        checked += 1
        lifts = sum(1 for p in cc.pairs if p == (u1, u0))
        transformations = sum(
            1
            for phi in d.hom(f1.obj(c1.dom(u1)), f0.obj(c0.dom(u0)))
            for psi in d.hom(f1.obj(c1.cod(u1)), f0.obj(c0.cod(u0)))
            if d.then(f1.mor(u1), psi) == d.then(phi, f0.mor(u0))
        )
        if lifts != transformations:
            bad.append(f"arrow ({c1.morphisms[u1].name},{c0.morphisms[u0].name})")
    return checked, bad


def _regular_enough(cat: FiniteCategory) -> bool:
    return cat.is_preorder or cat.has_finite_limits


def verify_comma_claims(
    first: FinFunctor, second: FinFunctor, instance: str = ""
) -> list[ClaimResult]:
    """Brute-force the comma claims on one cospan.

    Checks componentwise terminal objects, binary products and equalizers
    where the second functor preserves them, that componentwise covers are covers
    (when both sides are preorders or have finite limits), and that lifts
    through the comma match transformations for point and arrow shapes.
    """
    label = instance or f"{first.name}/{second.name}"
    cc = comma(first, second)
    results = [_result("comma.limits", label, *_comma_limits(cc))]
    if _regular_enough(first.source) and _regular_enough(second.source):
        results.append(_result("comma.covers", label, *_comma_covers(cc)))
    results.append(_result("comma.lifts", label, *_comma_lifts(cc)))
    return results


def converse_cover_experiment(
    first: FinFunctor, second: FinFunctor, instance: str = ""
) -> ClaimResult:
    """Record whether every comma cover has covering components."""
    cc = comma(first, second)
    c1, c0, cat = first.source, second.source, cc.category
    checked, bad = 0, []
    for u, (u1, u0) in enumerate(cc.pairs):
        if cat.is_cover(u):
            checked += 1
            if not (c1.is_cover(u1) and c0.is_cover(u0)):
                bad.append(cat.label(u))
    return _result("comma.cover_converse", instance or cat.name, checked, bad)


def is_projective(cat: FiniteCategory, obj: int) -> bool:
    """Every map from `obj` lifts along every cover."""
    for e in range(len(cat.morphisms)):
        if not cat.is_cover(e):
            continue
        for f in cat.hom(obj, cat.cod(e)):
            if all(cat.then(g, e) != f for g in cat.hom(obj, cat.dom(e))):
                return False
    return True


def covers_split(cat: FiniteCategory, obj: int) -> bool:
    """Every cover with codomain `obj` has a section."""
    return all(cat.is_split_epi(e) for e in cat.into(obj) if cat.is_cover(e))


def check_projectivity_equiv(cat: FiniteCategory) -> ClaimResult:
    """Lifting property agrees with splitting of covers at every object."""
    bad = [
        cat.objects[x]
        for x in range(len(cat.objects))
        if is_projective(cat, x) != covers_split(cat, x)
    ]
    return _result("projective_split", cat.name, len(cat.objects), bad)


def check_cover_extremal(cat: FiniteCategory) -> ClaimResult | None:
    """Covers agree with extremal epis; `None` without finite limits."""
    if not cat.has_finite_limits:
        return None
    bad = [
        cat.label(f)
        for f in range(len(cat.morphisms))
        if cat.is_cover(f) != cat.is_extremal_epi(f)
    ]
    return _result("cover_extremal", cat.name, len(cat.morphisms), bad)


def check_mono_definitions(cat: FiniteCategory) -> ClaimResult:
    """Left-cancellation agrees with the kernel-pair test where it applies."""
    checked, bad = 0, []
    for f in range(len(cat.morphisms)):
        via_kernel = cat.is_mono_via_kernel_pair(f)
        if via_kernel is None:
            continue
        checked += 1
        if via_kernel != cat.is_mono(f):
            bad.append(cat.label(f))
    return _result("mono_kernel_pair", cat.name, checked, bad)


# =============================================================================
# CORPUS
# =============================================================================


def poset_category(
    size: int, relation: Iterable[tuple[int, int]], name: str = ""
) -> FiniteCategory:
    """Preorder category on `0..size-1`; the relation is closed reflexively."""
    leq = set(relation) | {(i, i) for i in range(size)}
    objects = tuple(str(i) for i in range(size))
    morphisms = [
        (f"id_{a}" if a == b else f"{a}<={b}", str(a), str(b)) for a, b in sorted(leq)
    ]
    names = {(a, b): m[0] for (a, b), m in zip(sorted(leq), morphisms, strict=True)}
    composition = [
        (names[(a, b)], names[(b, c)], names[(a, c)])
        for a, b in sorted(leq)
        for b2, c in sorted(leq)
        if b == b2
    ]
    return FiniteCategory.build(
        objects, morphisms, composition, name=name or f"poset{size}"
    )


def monoid_category(
    elements: tuple[str, ...], table: Mapping[tuple[str, str], str], name: str
) -> FiniteCategory:
    """One-object category; `elements[0]` is the unit and `table[(a, b)]` is `b . a`."""
    return FiniteCategory.build(
        ("*",),
        [(e, "*", "*") for e in elements],
        [(a, b, ab) for (a, b), ab in table.items()],
        identities={"*": elements[0]},
        name=name,
    )


def _transitive(pairs: frozenset[tuple[int, int]]) -> bool:
    return all((a, d) in pairs for a, b in pairs for c, d in pairs if b == c)


def all_posets(size: int) -> list[frozenset[tuple[int, int]]]:
    """Strict order relations on `0..size-1`, one per isomorphism class.

    Every finite poset has a linear extension, so only relations contained
    in the numeric order are generated before canonicalising.
    """
    candidates = list(itertools.combinations(range(size), 2))
    seen: set[tuple[tuple[int, int], ...]] = set()
    found: list[frozenset[tuple[int, int]]] = []
    for bits in range(1 << len(candidates)):
        rel = frozenset(p for i, p in enumerate(candidates) if bits >> i & 1)
        if not _transitive(rel):
            continue
        canonical = min(
            tuple(sorted((perm[a], perm[b]) for a, b in rel))
            for perm in itertools.permutations(range(size))
        )
        if canonical not in seen:
            seen.add(canonical)
            found.append(rel)
    return found


def fixture_categories() -> list[FiniteCategory]:
    """Non-poset categories exercising cover and mono definitions."""
    idempotent = monoid_category(
        ("id", "e"), {("e", "e"): "e"}, "idempotent"
    )
    z2 = monoid_category(("id", "t"), {("t", "t"): "id"}, "z2")
    parallel = FiniteCategory.build(
        ("A", "B"),
        [("id_A", "A", "A"), ("id_B", "B", "B"), ("f", "A", "B"), ("g", "A", "B")],
        [],
        name="parallel_pair",
    )
    return [idempotent, z2, parallel]


def default_corpus(max_size: int = 4) -> list[FiniteCategory]:
    """All posets with 1..max_size elements up to isomorphism, plus fixtures."""
    return _posets(max_size) + fixture_categories()


def monotone_maps(
    source: FiniteCategory, target: FiniteCategory
) -> Iterator[tuple[int, ...]]:
    """Object maps between preorders that extend to functors."""
    candidates = range(len(target.objects))
    for images in itertools.product(candidates, repeat=len(source.objects)):
        if all(target.hom(images[m.dom], images[m.cod]) for m in source.morphisms):
            yield images


def _automorphisms(cat: FiniteCategory) -> list[tuple[int, ...]]:
    n = len(cat.objects)
    return [
        perm
        for perm in itertools.permutations(range(n))
        if all(
            bool(cat.hom(a, b)) == bool(cat.hom(perm[a], perm[b]))
            for a, b in itertools.product(range(n), repeat=2)
        )
    ]


def monotone_maps_up_to_iso(
    source: FiniteCategory, target: FiniteCategory
) -> Iterator[tuple[int, ...]]:
    """Monotone maps, one per orbit under automorphisms of both preorders."""
    outer, inner = _automorphisms(target), _automorphisms(source)
    for images in monotone_maps(source, target):
        least = min(
            tuple(tau[images[sigma[i]]] for i in range(len(images)))
            for tau in outer
            for sigma in inner
        )
        if images == least:
            yield images


def _posets(max_size: int, min_size: int = 1) -> list[FiniteCategory]:
    return [
        poset_category(n, rel, f"poset{n}_{i}")
        for n in range(min_size, max_size + 1)
        for i, rel in enumerate(all_posets(n))
    ]


def comma_corpus(
    max_source: int = 2, max_target: int = 4, *, pair_source: int = 2
) -> Iterator[tuple[str, FinFunctor, FinFunctor]]:
    """Cospans of monotone maps into posets of at most `max_target` elements.

    Maps out of posets with at most `pair_source` elements are paired in
    every combination. Each larger map, up to `max_source` elements and up to
    isomorphism, is paired with the identity of its target on either side,
    so every monotone map between posets of the given sizes occurs in some
    cospan.
    """
    pairs = _posets(min(pair_source, max_source))
    singles = _posets(max_source, pair_source + 1)
    for d in _posets(max_target):
        ident = identity_functor(d)
        for c1, c0 in itertools.product(pairs, repeat=2):
            for m1 in monotone_maps(c1, d):
                f1 = monotone_functor(c1, d, m1, f"{c1.name}>{d.name}{list(m1)}")
                for m0 in monotone_maps(c0, d):
                    f0 = monotone_functor(c0, d, m0, f"{c0.name}>{d.name}{list(m0)}")
                    yield f"{f1.name}/{f0.name}", f1, f0
        for c in singles:
            for m in monotone_maps_up_to_iso(c, d):
                f = monotone_functor(c, d, m, f"{c.name}>{d.name}{list(m)}")
                yield f"{f.name}/id[{d.name}]", f, ident
                yield f"id[{d.name}]/{f.name}", ident, f


@dataclass
class VerificationReport:
    """Aggregated claim results over a corpus."""

    results: list[ClaimResult] = field(default_factory=list)
    experiments: list[ClaimResult] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.errors and all(r.passed for r in self.results)

    @property
    def instances(self) -> int:
        return len({r.instance for r in self.results})

    def to_json(self) -> dict[str, JSONValue]:
        checked: dict[str, int] = {}
        failed: dict[str, int] = {}
        for r in self.results:
            checked[r.claim] = checked.get(r.claim, 0) + r.checked
            failed[r.claim] = failed.get(r.claim, 0) + (0 if r.passed else 1)
        claims: dict[str, JSONValue] = {
            claim: {"checked": checked[claim], "failed": failed[claim]}
            for claim in sorted(checked)
        }
        return {
            "passed": self.passed,
            "instances": self.instances,
            "claims": claims,
            "failures": [r.to_json() for r in self.results if not r.passed],
            "experiments": [r.to_json() for r in self.experiments],
            "errors": list(self.errors),
        }


def verify_categories(
    categories: Iterable[FiniteCategory], report: VerificationReport | None = None
) -> VerificationReport:
    """Per-category claims plus the comma claims on the identity cospan."""
    report = report if report is not None else VerificationReport()
    for cat in categories:
        extremal = check_cover_extremal(cat)
        if extremal is not None:
            report.results.append(extremal)
        report.results.append(check_projectivity_equiv(cat))
        report.results.append(check_mono_definitions(cat))
        ident = identity_functor(cat)
        report.results.extend(
            verify_comma_claims(ident, ident, f"id/id[{cat.name}]")
        )
        log.debug("verified %s", cat.name)
    return report


def run_default_verification(
    max_size: int = 4,
    max_source: int = 2,
    max_target: int = 4,
    *,
    pair_source: int = 2,
) -> VerificationReport:
    """The built-in corpus: categories, then the poset cospans of `comma_corpus`."""
    report = verify_categories(default_corpus(max_size))
    cospans = comma_corpus(max_source, max_target, pair_source=pair_source)
    for label, f1, f0 in cospans:
        report.results.extend(verify_comma_claims(f1, f0, label))
        report.experiments.append(converse_cover_experiment(f1, f0, label))
    log.info("verified %s instances", report.instances)
    return report


# =============================================================================
# JSON INTERCHANGE
# =============================================================================


def category_to_json(cat: FiniteCategory) -> dict[str, JSONValue]:
    """Interchange form: `{name, objects, morphisms, comp, identities}`."""
    names = [m.name for m in cat.morphisms]
    return {
        "name": cat.name,
        "objects": list(cat.objects),
        "morphisms": [
            {"id": m.name, "dom": cat.objects[m.dom], "cod": cat.objects[m.cod]}
            for m in cat.morphisms
        ],
        "comp": [
            [names[f], names[g], names[gf]]
            for (f, g), gf in sorted(cat.composition.items())
        ],
        "identities": {
            o: names[i] for o, i in zip(cat.objects, cat.identities, strict=True)
        },
    }


def _as_list(value: JSONValue, what: str) -> list[JSONValue]:
    if not isinstance(value, list):
        msg = f"{what} must be a list"
        raise TypeError(msg)
    return value


def category_from_json(data: JSONValue, name: str = "") -> FiniteCategory:
    """Inverse of `category_to_json`; ids may be strings or integers.

    Raises:
        CategoryLawError: On a malformed document or a failed law.

    """
    if not isinstance(data, dict):
        msg = f"{name}: category must be a JSON object"
        raise CategoryLawError(msg)
    try:
        objects = [str(o) for o in _as_list(data["objects"], "objects")]
        morphisms: list[tuple[str, str, str]] = []
        for entry in _as_list(data["morphisms"], "morphisms"):
            if not isinstance(entry, dict):
                msg = "morphism entries must be objects"
                raise TypeError(msg)
            morphisms.append((str(entry["id"]), str(entry["dom"]), str(entry["cod"])))
        composition: list[tuple[str, str, str]] = []
        for triple in _as_list(data.get("comp", []), "comp"):
            f, g, gf = _as_list(triple, "comp entry")
            composition.append((str(f), str(g), str(gf)))
        raw_ids = data.get("identities")
        identities = (
            {str(k): str(v) for k, v in raw_ids.items()}
            if isinstance(raw_ids, dict)
            else None
        )
    except (KeyError, TypeError, ValueError) as exc:
        msg = f"{name}: malformed category document: {exc}"
        raise CategoryLawError(msg) from exc
    label = str(data.get("name") or name)
    return FiniteCategory.build(objects, morphisms, composition, identities, label)

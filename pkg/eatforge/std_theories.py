"""Generators for standard presentations.

Layers, each a strict syntactic extension of the previous one:

- `category_theory`: sorts Obj, Mor with dom, cod, id and partial comp.
- `regular_category_theory`: chosen terminal object, binary products,
  equalizers, pullbacks, image factorisations with stability, and a
  monomorphism witness encoded through kernel pairs.
- `r_topos_theory(r)`: adds a natural numbers object with a recursor, rank
  sorts Obj_0 .. Obj_{r-1} with inclusions into Obj, and power objects
  P_i : Obj_i -> Obj_{i+1} for each i < r - 1.

All presentations are authored as `.eat` text in printed form, so printing a
generated theory reproduces the shipped golden files byte for byte.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

from eatforge.theory import TheoryChain, TheoryPresentation, parse_theory, print_theory

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

log = logging.getLogger("eatforge.std_theories")

# =============================================================================
# LAYERS
# =============================================================================

_CAT_SORTS = ("sort Obj", "sort Mor")

_CAT_OPS = (
    "op dom : Mor -> Obj",
    "op cod : Mor -> Obj",
    "op id : Obj -> Mor",
    "op comp : Mor Mor -> Mor",
)

_CAT_AXIOMS = (
    "axiom dom_def [f:Mor] : |- def dom(f)",
    "axiom cod_def [f:Mor] : |- def cod(f)",
    "axiom id_def [x:Obj] : |- def id(x)",
    "axiom id_dom [x:Obj] : |- dom(id(x)) = x",
    "axiom id_cod [x:Obj] : |- cod(id(x)) = x",
    "axiom comp_def [f:Mor, g:Mor] : cod(f) = dom(g) |- def comp(g, f)",
    "axiom comp_composable [f:Mor, g:Mor] : def comp(g, f) |- cod(f) = dom(g)",
    "axiom comp_dom [f:Mor, g:Mor] : def comp(g, f) |- dom(comp(g, f)) = dom(f)",
    "axiom comp_cod [f:Mor, g:Mor] : def comp(g, f) |- cod(comp(g, f)) = cod(g)",
    "axiom unit_left [f:Mor] : |- comp(id(cod(f)), f) = f",
    "axiom unit_right [f:Mor] : |- comp(f, id(dom(f))) = f",
    "axiom assoc [f:Mor, g:Mor, h:Mor] : def comp(g, f) & def comp(h, g)"
    " |- comp(h, comp(g, f)) = comp(comp(h, g), f)",
)

_REG_OPS = (
    "op one : -> Obj",
    "op bang : Obj -> Mor",
    "op prod : Obj Obj -> Obj",
    "op p1 : Obj Obj -> Mor",
    "op p2 : Obj Obj -> Mor",
    "op pair : Mor Mor -> Mor",
    "op eq : Mor Mor -> Obj",
    "op eqm : Mor Mor -> Mor",
    "op eqlift : Mor Mor Mor -> Mor",
    "op pb : Mor Mor -> Obj",
    "op pb1 : Mor Mor -> Mor",
    "op pb2 : Mor Mor -> Mor",
    "op pblift : Mor Mor Mor Mor -> Mor",
    "op mono : Mor -> Mor",
    "op im : Mor -> Obj",
    "op imm : Mor -> Mor",
    "op imc : Mor -> Mor",
    "op imlift : Mor Mor -> Mor",
)

_REG_AXIOMS = (
    "axiom one_def [] : |- def one()",
    "axiom bang_dom [x:Obj] : |- dom(bang(x)) = x",
    "axiom bang_cod [x:Obj] : |- cod(bang(x)) = one()",
    "axiom bang_unique [f:Mor] : cod(f) = one() |- f = bang(dom(f))",
    "axiom prod_dom1 [x:Obj, y:Obj] : |- dom(p1(x, y)) = prod(x, y)",
    "axiom prod_cod1 [x:Obj, y:Obj] : |- cod(p1(x, y)) = x",
    "axiom prod_dom2 [x:Obj, y:Obj] : |- dom(p2(x, y)) = prod(x, y)",
    "axiom prod_cod2 [x:Obj, y:Obj] : |- cod(p2(x, y)) = y",
    "axiom pair_def [f:Mor, g:Mor] : dom(f) = dom(g) |- def pair(f, g)",
    "axiom pair_dom [f:Mor, g:Mor] : def pair(f, g) |- dom(pair(f, g)) = dom(f)",
    "axiom pair_cod [f:Mor, g:Mor] : def pair(f, g)"
    " |- cod(pair(f, g)) = prod(cod(f), cod(g))",
    "axiom pair_beta1 [f:Mor, g:Mor] : def pair(f, g)"
    " |- comp(p1(cod(f), cod(g)), pair(f, g)) = f",
    "axiom pair_beta2 [f:Mor, g:Mor] : def pair(f, g)"
    " |- comp(p2(cod(f), cod(g)), pair(f, g)) = g",
    "axiom pair_eta [h:Mor, x:Obj, y:Obj] : cod(h) = prod(x, y)"
    " |- h = pair(comp(p1(x, y), h), comp(p2(x, y), h))",
    "axiom eq_def [f:Mor, g:Mor] : dom(f) = dom(g) & cod(f) = cod(g) |- def eqm(f, g)",
    "axiom eq_dom [f:Mor, g:Mor] : def eqm(f, g) |- dom(eqm(f, g)) = eq(f, g)",
    "axiom eq_cod [f:Mor, g:Mor] : def eqm(f, g) |- cod(eqm(f, g)) = dom(f)",
    "axiom eq_commutes [f:Mor, g:Mor] : def eqm(f, g)"
    " |- comp(f, eqm(f, g)) = comp(g, eqm(f, g))",
    "axiom eqlift_def [f:Mor, g:Mor, h:Mor] : def eqm(f, g) & comp(f, h) = comp(g, h)"
    " |- def eqlift(f, g, h)",
    "axiom eqlift_dom [f:Mor, g:Mor, h:Mor] : def eqlift(f, g, h)"
    " |- dom(eqlift(f, g, h)) = dom(h)",
    "axiom eqlift_cod [f:Mor, g:Mor, h:Mor] : def eqlift(f, g, h)"
    " |- cod(eqlift(f, g, h)) = eq(f, g)",
    "axiom eqlift_beta [f:Mor, g:Mor, h:Mor] : def eqlift(f, g, h)"
    " |- comp(eqm(f, g), eqlift(f, g, h)) = h",
    "axiom eqlift_eta [f:Mor, g:Mor, k:Mor] : def eqm(f, g) & cod(k) = eq(f, g)"
    " |- k = eqlift(f, g, comp(eqm(f, g), k))",
    "axiom pb_def [f:Mor, g:Mor] : cod(f) = cod(g) |- def pb1(f, g) & def pb2(f, g)",
    "axiom pb_dom1 [f:Mor, g:Mor] : def pb1(f, g) |- dom(pb1(f, g)) = pb(f, g)",
    "axiom pb_cod1 [f:Mor, g:Mor] : def pb1(f, g) |- cod(pb1(f, g)) = dom(f)",
    "axiom pb_dom2 [f:Mor, g:Mor] : def pb2(f, g) |- dom(pb2(f, g)) = pb(f, g)",
    "axiom pb_cod2 [f:Mor, g:Mor] : def pb2(f, g) |- cod(pb2(f, g)) = dom(g)",
    "axiom pb_commutes [f:Mor, g:Mor] : def pb1(f, g)"
    " |- comp(f, pb1(f, g)) = comp(g, pb2(f, g))",
    "axiom pblift_def [f:Mor, g:Mor, h:Mor, k:Mor] : def pb1(f, g)"
    " & comp(f, h) = comp(g, k) |- def pblift(f, g, h, k)",
    "axiom pblift_dom [f:Mor, g:Mor, h:Mor, k:Mor] : def pblift(f, g, h, k)"
    " |- dom(pblift(f, g, h, k)) = dom(h)",
    "axiom pblift_cod [f:Mor, g:Mor, h:Mor, k:Mor] : def pblift(f, g, h, k)"
    " |- cod(pblift(f, g, h, k)) = pb(f, g)",
    "axiom pblift_beta1 [f:Mor, g:Mor, h:Mor, k:Mor] : def pblift(f, g, h, k)"
    " |- comp(pb1(f, g), pblift(f, g, h, k)) = h",
    "axiom pblift_beta2 [f:Mor, g:Mor, h:Mor, k:Mor] : def pblift(f, g, h, k)"
    " |- comp(pb2(f, g), pblift(f, g, h, k)) = k",
    "axiom pblift_eta [f:Mor, g:Mor, m:Mor] : def pb1(f, g) & cod(m) = pb(f, g)"
    " |- m = pblift(f, g, comp(pb1(f, g), m), comp(pb2(f, g), m))",
    "axiom mono_intro [f:Mor] : def pb1(f, f) & pb1(f, f) = pb2(f, f) |- def mono(f)",
    "axiom mono_id [x:Obj] : |- def mono(id(x))",
    "axiom mono_dom [f:Mor] : def mono(f) |- dom(mono(f)) = dom(f)",
    "axiom mono_cod [f:Mor] : def mono(f) |- cod(mono(f)) = pb(f, f)",
    "axiom mono_section [f:Mor] : def mono(f)"
    " |- comp(pb1(f, f), mono(f)) = id(dom(f))",
    "axiom mono_retract [f:Mor] : def mono(f)"
    " |- comp(mono(f), pb1(f, f)) = id(pb(f, f))",
    "axiom mono_kernel [f:Mor] : def mono(f) |- pb1(f, f) = pb2(f, f)",
    "axiom im_def [f:Mor] : |- comp(imm(f), imc(f)) = f",
    "axiom im_mono [f:Mor] : def imm(f) |- def mono(imm(f))",
    "axiom imm_dom [f:Mor] : def imm(f) |- dom(imm(f)) = im(f)",
    "axiom imm_cod [f:Mor] : def imm(f) |- cod(imm(f)) = cod(f)",
    "axiom imc_dom [f:Mor] : def imc(f) |- dom(imc(f)) = dom(f)",
    "axiom imc_cod [f:Mor] : def imc(f) |- cod(imc(f)) = im(f)",
    "axiom im_least [f:Mor, m:Mor, g:Mor] : def mono(m) & comp(m, g) = f"
    " |- def imlift(imm(f), m)",
    "axiom imlift_beta [h:Mor, m:Mor] : def imlift(h, m)"
    " |- comp(m, imlift(h, m)) = h",
    "axiom imlift_dom [h:Mor, m:Mor] : def imlift(h, m)"
    " |- dom(imlift(h, m)) = dom(h)",
    "axiom imlift_cod [h:Mor, m:Mor] : def imlift(h, m)"
    " |- cod(imlift(h, m)) = dom(m)",
    "axiom im_stable [f:Mor, g:Mor] : cod(f) = cod(g)"
    " |- def imlift(pb1(g, imm(f)), imm(pb1(g, f)))",
)

_NNO_OPS = (
    "op N : -> Obj",
    "op zero : -> Mor",
    "op succ : -> Mor",
    "op rec : Mor Mor -> Mor",
)

_NNO_AXIOMS = (
    "axiom nno_def [] : |- def N()",
    "axiom zero_dom [] : |- dom(zero()) = one()",
    "axiom zero_cod [] : |- cod(zero()) = N()",
    "axiom succ_dom [] : |- dom(succ()) = N()",
    "axiom succ_cod [] : |- cod(succ()) = N()",
    "axiom rec_def [a:Mor, f:Mor] : dom(a) = one() & cod(a) = dom(f)"
    " & cod(f) = dom(f) |- def rec(a, f)",
    "axiom rec_dom [a:Mor, f:Mor] : def rec(a, f) |- dom(rec(a, f)) = N()",
    "axiom rec_cod [a:Mor, f:Mor] : def rec(a, f) |- cod(rec(a, f)) = cod(a)",
    "axiom rec_zero [a:Mor, f:Mor] : def rec(a, f) |- comp(rec(a, f), zero()) = a",
    "axiom rec_succ [a:Mor, f:Mor] : def rec(a, f)"
    " |- comp(rec(a, f), succ()) = comp(f, rec(a, f))",
    "axiom rec_unique [a:Mor, f:Mor, h:Mor] : def rec(a, f) & dom(h) = N()"
    " & comp(h, zero()) = a & comp(h, succ()) = comp(f, h) |- h = rec(a, f)",
)


def _rank_sorts(i: int) -> tuple[str, ...]:
    return (f"sort Obj_{i} rank {i}",)


def _rank_ops(i: int) -> tuple[str, ...]:
    ops = [
        f"op obj_{i} : Obj_{i} -> Obj",
        f"op one_{i} : -> Obj_{i}",
        f"op prod_{i} : Obj_{i} Obj_{i} -> Obj_{i}",
    ]
    if i == 0:
        ops.append("op N_0 : -> Obj_0")
    else:
        ops.append(f"op up_{i - 1} : Obj_{i - 1} -> Obj_{i}")
    return tuple(ops)


def _rank_axioms(i: int) -> tuple[str, ...]:
    axioms = [
        f"axiom obj_{i}_def [x:Obj_{i}] : |- def obj_{i}(x)",
        f"axiom obj_{i}_one [] : |- obj_{i}(one_{i}()) = one()",
        f"axiom obj_{i}_prod [x:Obj_{i}, y:Obj_{i}]"
        f" : |- obj_{i}(prod_{i}(x, y)) = prod(obj_{i}(x), obj_{i}(y))",
    ]
    if i == 0:
        axioms.append("axiom obj_0_nno [] : |- obj_0(N_0()) = N()")
    else:
        j = i - 1
        axioms.append(
            f"axiom up_{j}_incl [x:Obj_{j}] : |- obj_{i}(up_{j}(x)) = obj_{j}(x)"
        )
    return tuple(axioms)


def _power_ops(i: int) -> tuple[str, ...]:
    return (
        f"op P_{i} : Obj_{i} -> Obj_{i + 1}",
        f"op mem_{i} : Obj_{i} -> Mor",
        f"op cl_{i} : Mor Obj_{i} -> Mor",
    )


def _power_axioms(i: int) -> tuple[str, ...]:
    n = i + 1
    carrier = f"obj_{i}(x)"
    power = f"obj_{n}(P_{i}(x))"
    relation = f"cod(m) = prod({carrier}, y)"

    def pulled(arrow: str) -> str:
        classifier = f"pair(p1({carrier}, y), comp({arrow}, p2({carrier}, y)))"
        return f"pb1({classifier}, mem_{i}(x))"

    pulled_cl = pulled(f"cl_{i}(m, x)")
    return (
        f"axiom P_{i}_def [x:Obj_{i}] : |- def P_{i}(x)",
        f"axiom mem_{i}_cod [x:Obj_{i}]"
        f" : |- cod(mem_{i}(x)) = prod({carrier}, {power})",
        f"axiom mem_{i}_mono [x:Obj_{i}] : |- def mono(mem_{i}(x))",
        f"axiom cl_{i}_def [m:Mor, x:Obj_{i}, y:Obj] : def mono(m) & {relation}"
        f" |- def cl_{i}(m, x)",
        f"axiom cl_{i}_dom [m:Mor, x:Obj_{i}, y:Obj] : def cl_{i}(m, x) & {relation}"
        f" |- dom(cl_{i}(m, x)) = y",
        f"axiom cl_{i}_cod [m:Mor, x:Obj_{i}] : def cl_{i}(m, x)"
        f" |- cod(cl_{i}(m, x)) = {power}",
        f"axiom cl_{i}_classifies [m:Mor, x:Obj_{i}, y:Obj] : def cl_{i}(m, x)"
        f" & {relation} |- def imlift(m, {pulled_cl})"
        f" & def imlift({pulled_cl}, m)",
        f"axiom cl_{i}_unique [k:Mor, x:Obj_{i}, y:Obj] : dom(k) = y"
        f" & cod(k) = {power} |- k = cl_{i}({pulled('k')}, x)",
    )


def _assemble(
    name: str,
    sorts: tuple[str, ...],
    ops: tuple[str, ...],
    axioms: tuple[str, ...],
) -> TheoryPresentation:
    text = "".join(f"{line}\n" for line in (f"theory {name}", *sorts, *ops, *axioms))
    return parse_theory(text)


# =============================================================================
# GENERATORS
# =============================================================================


def category_theory() -> TheoryPresentation:
    """Theory of categories with partial composition."""
    return _assemble("T_cat", _CAT_SORTS, _CAT_OPS, _CAT_AXIOMS)


def regular_category_theory() -> TheoryPresentation:
    """Theory of regular categories with chosen finite limits and images."""
    return _assemble(
        "T_reg", _CAT_SORTS, _CAT_OPS + _REG_OPS, _CAT_AXIOMS + _REG_AXIOMS
    )


@dataclass(frozen=True)
class RankedSignature:
    """An r-topos presentation together with its rank bound."""

    r: int
    theory: TheoryPresentation

    @property
    def rank_sorts(self) -> tuple[str, ...]:
        """Names of the rank sorts Obj_0 .. Obj_{r-1}."""
        return tuple(self.theory.rank_annotations)

    @property
    def power_ops(self) -> tuple[str, ...]:
        """Names of the power-object operations."""
        return tuple(op.name for op in self.theory.ops if op.name.startswith("P_"))


def r_topos_theory(r: int) -> RankedSignature:
    """Presentation T_r of r-toposes.

    Args:
        r: Rank bound, a nonnegative integer.

    Returns:
        The ranked signature with `max(r - 1, 0)` power-object families.

    Raises:
        ValueError: If `r` is negative or not an integer.

    """
    if not isinstance(r, int) or isinstance(r, bool) or r < 0:
        msg = f"rank bound must be a nonnegative integer, got {r!r}"
        raise ValueError(msg)
    sorts = list(_CAT_SORTS)
    ops = list(_CAT_OPS + _REG_OPS + _NNO_OPS)
    axioms = list(_CAT_AXIOMS + _REG_AXIOMS + _NNO_AXIOMS)
    for i in range(r):
        sorts.extend(_rank_sorts(i))
        ops.extend(_rank_ops(i))
        axioms.extend(_rank_axioms(i))
    for i in range(r - 1):
        ops.extend(_power_ops(i))
        axioms.extend(_power_axioms(i))
    theory = _assemble(f"T_{r}", tuple(sorts), tuple(ops), tuple(axioms))
    log.debug("generated T_%s with %s axioms", r, len(theory.axioms))
    return RankedSignature(r, theory)


def r_topos_chain(r_max: int) -> TheoryChain:
    """Chain T_0 -> T_1 -> ... -> T_rMax of inclusions."""
    if r_max < 0:
        msg = f"rMax must be nonnegative, got {r_max}"
        raise ValueError(msg)
    return TheoryChain.of(r_topos_theory(r).theory for r in range(r_max + 1))


# =============================================================================
# SMALL FIXTURE THEORIES
# =============================================================================

_MONOID_TEXT = """\
theory monoid
sort M
op e : -> M
op mul : M M -> M
axiom e_def [] : |- def e()
axiom mul_def [x:M, y:M] : |- def mul(x, y)
axiom unit_left [x:M] : |- mul(e(), x) = x
axiom unit_right [x:M] : |- mul(x, e()) = x
axiom assoc [x:M, y:M, z:M] : def mul(mul(x, y), z) |- mul(mul(x, y), z) = mul(x, mul(y, z))
"""  # noqa: E501


def monoid_theory() -> TheoryPresentation:
    """Monoids, with total multiplication stated by an axiom."""
    return parse_theory(_MONOID_TEXT)


def commutative_monoid_theory() -> TheoryPresentation:
    """Monoids plus commutativity."""
    return parse_theory(
        _MONOID_TEXT.replace("theory monoid", "theory commutative_monoid")
        + "axiom comm [x:M, y:M] : |- mul(x, y) = mul(y, x)\n"
    )


def monoid_chain() -> TheoryChain:
    """Monoids included in commutative monoids."""
    return TheoryChain.of((monoid_theory(), commutative_monoid_theory()))


def pointed_involution_chain() -> TheoryChain:
    """Bare sort, then a unary op, then the involution law."""
    base = "theory pointed_set\nsort X\n"
    unary = base.replace("pointed_set", "unary") + "op f : X -> X\n"
    unary += "axiom f_def [x:X] : |- def f(x)\n"
    involution = unary.replace("theory unary", "theory involution")
    involution += "axiom invol [x:X] : |- f(f(x)) = x\n"
    return TheoryChain.of(parse_theory(t) for t in (base, unary, involution))


# =============================================================================
# GOLDEN FILES
# =============================================================================

GOLDEN_FILES: dict[str, Callable[[], TheoryPresentation]] = {
    "cat.eat": category_theory,
    "reg.eat": regular_category_theory,
    "t0.eat": lambda: r_topos_theory(0).theory,
    "t1.eat": lambda: r_topos_theory(1).theory,
    "t2.eat": lambda: r_topos_theory(2).theory,
    "t3.eat": lambda: r_topos_theory(3).theory,
}


def write_goldens(directory: Path) -> list[Path]:
    """Regenerate the golden `.eat` files into a directory."""
    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for name, generate in GOLDEN_FILES.items():
        path = directory / name
        path.write_text(print_theory(generate()), encoding="utf-8")
        log.info("wrote %s", path)
        written.append(path)
    return written

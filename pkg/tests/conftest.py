"""Pytest fixtures for the eatforge test suite.

Theories are rebuilt per test (they are immutable and cheap); saturation
states that several tests read are session scoped.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import pytest

from eatforge.chase import Generators, SaturationState, saturate
from eatforge.fincat import FiniteCategory, poset_category
from eatforge.std_theories import category_theory, monoid_theory
from tests.constants import TestConstants as c  # noqa: N813

if TYPE_CHECKING:
    from pathlib import Path

    from eatforge.theory import TheoryPresentation

__all__: list[str] = ["c"]

_logger = logging.getLogger(__name__)


# =============================================================================
# THEORIES
# =============================================================================


@pytest.fixture
def monoid() -> TheoryPresentation:
    """The monoid presentation."""
    return monoid_theory()


@pytest.fixture
def monoid_generators(monoid: TheoryPresentation) -> Generators:
    """Two free generators a, b."""
    return Generators.from_spec(monoid, c.Monoid.GENERATORS)


@pytest.fixture(scope="session")
def monoid_state_short() -> SaturationState:
    """Free monoid on a, b after enough rounds for words of length two."""
    theory = monoid_theory()
    generators = Generators.from_spec(theory, c.Monoid.GENERATORS)
    return saturate(theory, generators, c.Monoid.ROUNDS_LENGTH_TWO)


@pytest.fixture(scope="session")
def monoid_state_long() -> SaturationState:
    """Free monoid on a, b after enough rounds for words of length four."""
    theory = monoid_theory()
    generators = Generators.from_spec(theory, c.Monoid.GENERATORS)
    state = saturate(theory, generators, c.Monoid.ROUNDS_LENGTH_FOUR)
    _logger.info("long monoid state has %s elements", len(state.sorts))
    return state


@pytest.fixture(scope="session")
def chain_graph_state() -> SaturationState:
    """Free category on the graph A -f-> B -g-> C."""
    theory = category_theory()
    generators = Generators.from_spec(
        theory, c.Category.CHAIN_GENERATORS, c.Category.CHAIN_FACTS
    )
    return saturate(theory, generators, c.Category.CHAIN_ROUNDS)


@pytest.fixture
def theories_dir() -> Path:
    """Directory with the golden `.eat` files."""
    return c.Project.get_project_root() / c.Directory.THEORIES


# =============================================================================
# FINITE CATEGORIES
# =============================================================================


@pytest.fixture
def chain_two() -> FiniteCategory:
    """The poset 0 <= 1."""
    return poset_category(2, [(0, 1)], "chain2")


@pytest.fixture
def discrete_two() -> FiniteCategory:
    """Two objects, identities only."""
    return poset_category(2, [], "discrete2")


@pytest.fixture
def idempotent() -> FiniteCategory:
    """One object with a non-identity idempotent e."""
    return FiniteCategory.build(
        ("*",),
        [("id", "*", "*"), ("e", "*", "*")],
        [("e", "e", "e")],
        identities={"*": "id"},
        name="idempotent",
    )

"""Finite category and comma-claim tests.

Categories:
- Construction: law checks and JSON interchange
- Morphism classes: monos, epis, covers, splitting
- Limits: terminal objects, products, equalizers, pullbacks, kernel pairs, images
- Functors and commas: projections, iso-commas, claim checks
- Corpus: poset enumeration and the verification report
"""

from __future__ import annotations

import pytest

from eatforge.errors import CategoryLawError
from eatforge.fincat import (
    FinFunctor,
    FiniteCategory,
    all_posets,
    category_from_json,
    category_to_json,
    check_cover_extremal,
    check_mono_definitions,
    check_projectivity_equiv,
    comma,
    comma_corpus,
    comma_limit_shapes,
    converse_cover_experiment,
    covers_split,
    default_corpus,
    fixture_categories,
    identity_functor,
    is_projective,
    iso_comma,
    monotone_functor,
    monotone_maps,
    monotone_maps_up_to_iso,
    poset_category,
    run_default_verification,
    verify_categories,
    verify_comma_claims,
)
from eatforge.jsonio import dumps, loads
from tests.conftest import c


def _index(cat: FiniteCategory, name: str) -> int:
    return next(i for i, m in enumerate(cat.morphisms) if m.name == name)


def _fork() -> FiniteCategory:
    """`e: E -> A` equalizing `f, g: A -> B`, with common composite `h`."""
    return FiniteCategory.build(
        ("E", "A", "B"),
        [
            ("id_E", "E", "E"),
            ("id_A", "A", "A"),
            ("id_B", "B", "B"),
            ("e", "E", "A"),
            ("f", "A", "B"),
            ("g", "A", "B"),
            ("h", "E", "B"),
        ],
        [("e", "f", "h"), ("e", "g", "h")],
        name="fork",
    )


# =============================================================================
# CONSTRUCTION
# =============================================================================


class TestConstruction:
    """Test law checking on construction."""

    def test_identities_filled(self, chain_two: FiniteCategory) -> None:
        """Composites with identities are filled in by `build`."""
        f = _index(chain_two, "0<=1")
        assert chain_two.then(chain_two.ident(0), f) == f
        assert chain_two.compose(chain_two.ident(1), f) == f
        assert chain_two.hom(0, 1) == (f,)
        assert chain_two.hom(1, 0) == ()

    def test_missing_identity(self) -> None:
        """Every object needs an identity."""
        with pytest.raises(CategoryLawError, match="missing identity"):
            FiniteCategory.build(("A",), [("f", "A", "A")], [])

    def test_undefined_composite(self) -> None:
        """Composable pairs must have a composite."""
        with pytest.raises(CategoryLawError, match="misdefined"):
            FiniteCategory.build(
                ("A",), [("id_A", "A", "A"), ("e", "A", "A")], [], name="bad"
            )

    def test_composite_of_non_composable(self) -> None:
        """Non-composable pairs must not have a composite."""
        with pytest.raises(CategoryLawError, match="misdefined"):
            FiniteCategory.build(
                ("A", "B"),
                [("id_A", "A", "A"), ("id_B", "B", "B"), ("f", "A", "B")],
                [("f", "f", "f")],
            )

    def test_associativity(self) -> None:
        """A non-associative table is rejected."""
        elements = ("id", "a", "b")
        table = {
            ("a", "a"): "b",
            ("a", "b"): "a",
            ("b", "a"): "b",
            ("b", "b"): "b",
        }
        with pytest.raises(CategoryLawError, match="associativity"):
            FiniteCategory.build(
                ("*",),
                [(e, "*", "*") for e in elements],
                [(x, y, xy) for (x, y), xy in table.items()],
                identities={"*": "id"},
            )

    def test_json_round_trip(self, idempotent: FiniteCategory) -> None:
        """Interchange documents rebuild the same category."""
        document = loads(dumps(category_to_json(idempotent)))
        rebuilt = category_from_json(document)
        assert rebuilt.objects == idempotent.objects
        assert rebuilt.morphisms == idempotent.morphisms
        assert dict(rebuilt.composition) == dict(idempotent.composition)
        assert rebuilt.name == "idempotent"

    @pytest.mark.parametrize(
        "document",
        [[], {"objects": ["A"]}, {"objects": ["A"], "morphisms": [1]}],
    )
    def test_json_malformed(self, document: object) -> None:
        """Malformed documents raise law errors."""
        with pytest.raises(CategoryLawError):
            category_from_json(document)  # type: ignore[arg-type]


# =============================================================================
# MORPHISM CLASSES
# =============================================================================


class TestMorphismClasses:
    """Test cancellation properties and covers."""

    def test_chain_bimorphism(self, chain_two: FiniteCategory) -> None:
        """In 0 <= 1 the arrow is mono and epi but not iso or cover."""
        f = _index(chain_two, "0<=1")
        assert chain_two.is_mono(f)
        assert chain_two.is_epi(f)
        assert not chain_two.is_iso(f)
        assert not chain_two.is_cover(f)
        assert not chain_two.is_extremal_epi(f)
        assert chain_two.is_cover(chain_two.ident(1))

    def test_split_epis(self, chain_two: FiniteCategory) -> None:
        """Identities split; 0 <= 1 has no arrow back."""
        f = _index(chain_two, "0<=1")
        assert chain_two.is_split_epi(chain_two.ident(0))
        assert not chain_two.is_split_epi(f)

    def test_posets_projective(self, chain_two: FiniteCategory) -> None:
        """Poset covers are identities, so every object is projective."""
        assert all(is_projective(chain_two, x) for x in range(2))
        assert all(covers_split(chain_two, x) for x in range(2))

    def test_idempotent(self, idempotent: FiniteCategory) -> None:
        """e is neither mono nor split, but it is a cover."""
        e = _index(idempotent, "e")
        assert not idempotent.is_mono(e)
        assert not idempotent.is_epi(e)
        assert not idempotent.is_split_epi(e)
        assert idempotent.is_cover(e)
        assert idempotent.inverse(e) is None

    def test_parallel_pair(self) -> None:
        """Parallel arrows are monos that factor through themselves."""
        parallel = fixture_categories()[2]
        f, g = _index(parallel, "f"), _index(parallel, "g")
        assert parallel.is_mono(f)
        assert parallel.is_mono(g)
        assert parallel.factor_through(f, g) is None
        assert parallel.factor_through(f, f) == parallel.ident(0)

    def test_group(self) -> None:
        """In Z/2 every arrow is iso and a split cover."""
        z2 = fixture_categories()[1]
        t = _index(z2, "t")
        assert z2.inverse(t) == t
        assert z2.is_cover(t)
        assert z2.is_split_epi(t)

    def test_projectivity(self, idempotent: FiniteCategory) -> None:
        """The lifting property and cover splitting agree."""
        assert not is_projective(idempotent, 0)
        assert not covers_split(idempotent, 0)
        assert check_projectivity_equiv(idempotent).passed


# =============================================================================
# LIMITS AND IMAGES
# =============================================================================


class TestLimits:
    """Test limit search and image factorisations."""

    def test_chain_limits(self, chain_two: FiniteCategory) -> None:
        """0 <= 1 has a terminal object, meets and pullbacks."""
        f = _index(chain_two, "0<=1")
        assert chain_two.terminal() == 1
        assert chain_two.is_terminal(1)
        product = chain_two.product(0, 1)
        assert product is not None
        assert product[0] == 0
        pullback = chain_two.pullback(f, chain_two.ident(1))
        assert pullback is not None
        assert pullback[0] == 0
        assert chain_two.has_finite_limits

    def test_no_terminal(self, discrete_two: FiniteCategory) -> None:
        """Two isolated objects have no terminal object."""
        assert discrete_two.terminal() is None
        assert not discrete_two.has_finite_limits
        assert discrete_two.product(0, 1) is None

    def test_kernel_pair_mono(self, chain_two: FiniteCategory) -> None:
        """Monos have kernel pairs with iso projections."""
        f = _index(chain_two, "0<=1")
        assert chain_two.is_mono_via_kernel_pair(f) is True
        assert check_mono_definitions(chain_two).passed

    def test_subobjects(self, chain_two: FiniteCategory) -> None:
        """The object 1 has two subobjects, the top one being identity."""
        lattice = chain_two.subobjects(1)
        assert len(lattice.classes) == 2
        assert lattice.is_poset()
        assert lattice.top_is_greatest()

    def test_image_factorisation(self, chain_two: FiniteCategory) -> None:
        """The image of 0 <= 1 is itself after the identity cover."""
        f = _index(chain_two, "0<=1")
        assert chain_two.image_factorisation(f) == (chain_two.ident(0), f)
        assert chain_two.images_unique(f)

    def test_equalizer(self) -> None:
        """The fork equalizes its parallel pair through `e`."""
        fork = _fork()
        f, g = _index(fork, "f"), _index(fork, "g")
        assert fork.equalizer(f, g) == (0, (_index(fork, "e"), _index(fork, "h")))
        assert fork.equalizer(f, _index(fork, "e")) is None

    @pytest.mark.parametrize("name", ["idempotent", "z2", "parallel_pair"])
    def test_no_equalizer(self, name: str) -> None:
        """The last two arrows of each non-poset fixture have no equalizer."""
        cat = next(cat for cat in fixture_categories() if cat.name == name)
        n = len(cat.morphisms)
        assert cat.equalizer(n - 2, n - 1) is None

    def test_cover_extremal(
        self, chain_two: FiniteCategory, idempotent: FiniteCategory
    ) -> None:
        """Covers are extremal epis where finite limits exist."""
        result = check_cover_extremal(chain_two)
        assert result is not None
        assert result.passed
        assert check_cover_extremal(idempotent) is None


# =============================================================================
# FUNCTORS AND COMMAS
# =============================================================================


class TestCommas:
    """Test functors, comma categories and the comma claims."""

    def test_not_monotone(self, chain_two: FiniteCategory) -> None:
        """Order-reversing object maps are not functors."""
        with pytest.raises(CategoryLawError, match="not monotone"):
            monotone_functor(chain_two, chain_two, (1, 0))

    def test_wrong_ends(self, chain_two: FiniteCategory) -> None:
        """Arrow images must have the mapped endpoints."""
        ident = chain_two.ident(0)
        with pytest.raises(CategoryLawError):
            FinFunctor(chain_two, chain_two, (0, 1), (ident, ident, ident), "bad")

    def test_monotone_maps(self, chain_two: FiniteCategory) -> None:
        """Three monotone self-maps of a two-chain."""
        assert sorted(monotone_maps(chain_two, chain_two)) == [
            (0, 0),
            (0, 1),
            (1, 1),
        ]

    def test_comma_of_identities(self, chain_two: FiniteCategory) -> None:
        """id/id on 0 <= 1 is the arrow poset with three objects."""
        ident = identity_functor(chain_two)
        cc = comma(ident, ident)
        assert len(cc.category.objects) == 3
        assert len(cc.category.morphisms) == 6
        assert cc.category.is_preorder
        for x, (x1, x0, phi) in enumerate(cc.triples):
            assert cc.alpha(x) == phi
            assert cc.first_projection.obj(x) == x1
            assert cc.second_projection.obj(x) == x0

    def test_iso_comma(self, chain_two: FiniteCategory) -> None:
        """The iso-comma keeps only invertible components."""
        ident = identity_functor(chain_two)
        assert len(iso_comma(ident, ident).category.objects) == 2

    def test_common_target(
        self, chain_two: FiniteCategory, discrete_two: FiniteCategory
    ) -> None:
        """Commas need a cospan."""
        with pytest.raises(CategoryLawError, match="common target"):
            comma(identity_functor(chain_two), identity_functor(discrete_two))

    def test_claims_on_chain(self, chain_two: FiniteCategory) -> None:
        """All comma claims hold on the two-chain."""
        ident = identity_functor(chain_two)
        results = verify_comma_claims(ident, ident)
        assert [r.claim for r in results] == [
            "comma.limits",
            "comma.covers",
            "comma.lifts",
        ]
        assert all(r.passed for r in results), [r.to_json() for r in results]
        assert all(r.checked > 0 for r in results)

    def test_equalizer_shape_checked(self) -> None:
        """Equalizers in the fork's arrow category are componentwise."""
        ident = identity_functor(_fork())
        shapes = comma_limit_shapes(comma(ident, ident))
        assert list(shapes) == ["terminal", "product", "equalizer"]
        checked, bad = shapes["equalizer"]
        assert checked > 0
        assert bad == []

    def test_equalizer_shape_skipped(self) -> None:
        """Without component equalizers no equalizer diagram is checked."""
        parallel = fixture_categories()[-1]
        ident = identity_functor(parallel)
        assert comma_limit_shapes(comma(ident, ident))["equalizer"] == (0, [])
        limits = verify_comma_claims(ident, ident)[0]
        assert limits.claim == "comma.limits"
        assert limits.passed

    def test_cover_claim_gated(self, idempotent: FiniteCategory) -> None:
        """Without finite limits or a preorder the cover claim is skipped."""
        ident = identity_functor(idempotent)
        claims = [r.claim for r in verify_comma_claims(ident, ident)]
        assert claims == ["comma.limits", "comma.lifts"]

    def test_converse_experiment(self, chain_two: FiniteCategory) -> None:
        """The converse is recorded as an experiment result."""
        ident = identity_functor(chain_two)
        result = converse_cover_experiment(ident, ident, "chain")
        assert result.claim == "comma.cover_converse"
        assert result.instance == "chain"


# =============================================================================
# CORPUS
# =============================================================================


class TestCorpus:
    """Test corpus generation and the report."""

    @pytest.mark.parametrize(
        ("size", "count"), list(enumerate(c.Corpus.POSET_COUNTS, start=1))
    )
    def test_poset_counts(self, size: int, count: int) -> None:
        """Posets up to isomorphism match the known counts."""
        assert len(all_posets(size)) == count

    def test_default_corpus(self) -> None:
        """24 posets plus the non-poset fixtures."""
        corpus = default_corpus()
        assert len(corpus) == c.Corpus.POSETS_UP_TO_FOUR + c.Corpus.FIXTURES
        assert len({cat.name for cat in corpus}) == len(corpus)

    def test_poset_category_is_preorder(self) -> None:
        """Poset categories have at most one arrow per hom."""
        cat = poset_category(3, [(0, 1), (1, 2), (0, 2)])
        assert cat.is_preorder
        assert len(cat.morphisms) == 6

    def test_verification_passes(self) -> None:
        """Every claim holds on the small corpus."""
        report = verify_categories(default_corpus(3))
        summary = report.to_json()
        assert report.passed, summary["failures"]
        assert summary["errors"] == []
        assert report.instances > 0
        claims = summary["claims"]
        assert isinstance(claims, dict)
        assert {"projective_split", "mono_kernel_pair", "comma.lifts"} <= set(claims)

    def test_maps_up_to_iso(
        self, chain_two: FiniteCategory, discrete_two: FiniteCategory
    ) -> None:
        """Swapping two isolated points identifies maps; a chain has no symmetry."""
        assert list(monotone_maps_up_to_iso(chain_two, chain_two)) == [
            (0, 0),
            (0, 1),
            (1, 1),
        ]
        assert list(monotone_maps_up_to_iso(discrete_two, discrete_two)) == [
            (0, 0),
            (0, 1),
        ]

    def test_larger_sources_meet_identities(self) -> None:
        """Maps out of larger posets are paired with the target identity."""
        cospans = list(comma_corpus(1, 2, pair_source=0))
        assert len(cospans) == c.Corpus.POINT_COSPANS_INTO_TWO
        assert len({label for label, _, _ in cospans}) == len(cospans)
        for _, first, second in cospans:
            assert first.target is second.target
            assert "id[" in first.name or "id[" in second.name

    @pytest.mark.slow
    @pytest.mark.timeout(3600)
    def test_full_corpus(self) -> None:
        """Every claim holds with source posets up to four elements."""
        report = run_default_verification(max_source=4)
        assert report.passed, report.to_json()["failures"]
        default_cospans = sum(1 for _ in comma_corpus())
        assert report.instances > default_cospans
        assert any(
            r.instance.startswith("poset4_") and "/id[" in r.instance
            for r in report.results
        )

"""Fuzzy value model: membership, possibility of equality, similarity."""

import pytest
from hypothesis import given, strategies as st

from fuzzydb import (
    AttributeDescriptor,
    FuzzyValue,
    FuzzyValueError,
    LabelDefinition,
    SimilarityError,
    SimilarityRelation,
    Trapezoid,
    ValueKind,
    check_degree,
    feq,
    format_number,
    possibility_eq,
    similarity_eq,
    to_trapezoid,
    validate_similarity,
)

# lattice of exactly representable floats keeps identities exact under +/-
lattice = st.integers(-40, 80).map(lambda k: k / 2)

trapezoids = st.tuples(lattice, lattice, lattice, lattice).map(
    lambda t: Trapezoid(*sorted(t))
)


class TestDegree:
    def test_accepts_bounds(self):
        assert check_degree(0.0) == 0.0
        assert check_degree(1.0) == 1.0
        assert check_degree(0.25) == 0.25

    @pytest.mark.parametrize("bad", [-0.001, 1.001, 2, -5])
    def test_rejects_outside(self, bad):
        with pytest.raises(FuzzyValueError):
            check_degree(bad)


class TestFormatNumber:
    @pytest.mark.parametrize(
        "value,text",
        [(444.0, "444"), (0.5, "0.5"), (-5.0, "-5"), (0.9, "0.9"), (26.0, "26")],
    )
    def test_trims_integral(self, value, text):
        assert format_number(value) == text

    @given(st.floats(allow_nan=False, allow_infinity=False, width=64))
    def test_round_trips(self, x):
        assert float(format_number(x)) == x


class TestTrapezoid:
    def test_rejects_disorder(self):
        with pytest.raises(FuzzyValueError):
            Trapezoid(10, 5, 20, 30)
        with pytest.raises(FuzzyValueError):
            Trapezoid(10, 20, 15, 30)
        with pytest.raises(FuzzyValueError):
            Trapezoid(10, 20, 30, 25)

    def test_membership_piecewise(self):
        t = Trapezoid(15, 20, 25, 30)
        assert t.membership(14) == 0
        assert t.membership(15) == 0
        assert t.membership(17.5) == 0.5
        assert t.membership(20) == 1
        assert t.membership(23) == 1
        assert t.membership(25) == 1
        assert t.membership(26) == 0.8
        assert t.membership(30) == 0
        assert t.membership(31) == 0

    def test_membership_step_edges(self):
        t = Trapezoid(10, 10, 20, 30)
        assert t.membership(10) == 1  # collapsed edge is a step
        assert t.membership(9.999) == 0
        point = Trapezoid(5, 5, 5, 5)
        assert point.membership(5) == 1
        assert point.membership(5.001) == 0

    @given(trapezoids, lattice)
    def test_membership_in_unit_range(self, t, x):
        assert 0.0 <= t.membership(x) <= 1.0

    @given(trapezoids, lattice, lattice)
    def test_membership_monotone_flanks(self, t, x1, x2):
        x1, x2 = min(x1, x2), max(x1, x2)
        if x2 <= t.b:
            assert t.membership(x1) <= t.membership(x2)
        if x1 >= t.c:
            assert t.membership(x1) >= t.membership(x2)


class TestFuzzyValueValidation:
    def test_interval_requires_order(self):
        with pytest.raises(FuzzyValueError):
            FuzzyValue.interval(5, 5)
        with pytest.raises(FuzzyValueError):
            FuzzyValue.interval(6, 5)

    def test_approx_requires_positive_margin(self):
        with pytest.raises(FuzzyValueError):
            FuzzyValue.approx(10, 0)
        with pytest.raises(FuzzyValueError):
            FuzzyValue.approx(10, -1)

    def test_simple_is_single_pair(self):
        v = FuzzyValue.simple(0.5, "matte")
        assert v.pairs == ((0.5, "matte"),)
        with pytest.raises(FuzzyValueError):
            FuzzyValue(ValueKind.SIMPLE, pairs=((0.5, "a"), (0.6, "b")))

    def test_distribution_needs_pairs(self):
        with pytest.raises(FuzzyValueError):
            FuzzyValue.poss_dist([])

    def test_distribution_rejects_zero_degree(self):
        with pytest.raises(FuzzyValueError):
            FuzzyValue.poss_dist([(0.0, "matte")])
        with pytest.raises(FuzzyValueError):
            FuzzyValue.simple(0, "matte")

    def test_distribution_rejects_excess_degree(self):
        with pytest.raises(FuzzyValueError):
            FuzzyValue.poss_dist([(1.2, "matte")])

    def test_distribution_rejects_duplicates(self):
        with pytest.raises(FuzzyValueError):
            FuzzyValue.poss_dist([(0.5, "matte"), (0.6, "MATTE")])
        with pytest.raises(FuzzyValueError):
            FuzzyValue.poss_dist([(0.5, 1.0), (0.6, 1.0)])

    def test_distribution_rejects_mixed_elements(self):
        with pytest.raises(FuzzyValueError):
            FuzzyValue.poss_dist([(0.5, "matte"), (0.6, 2.0)])

    def test_label_requires_name(self):
        with pytest.raises(FuzzyValueError):
            FuzzyValue(ValueKind.LABEL)


class TestToTrapezoid:
    def test_crisp_becomes_point(self):
        assert to_trapezoid(FuzzyValue.crisp(26)) == Trapezoid(26, 26, 26, 26)

    def test_interval_becomes_band(self):
        assert to_trapezoid(FuzzyValue.interval(60, 70)) == Trapezoid(60, 60, 70, 70)

    def test_approx_becomes_triangle(self):
        assert to_trapezoid(FuzzyValue.approx(70, 5)) == Trapezoid(65, 70, 70, 75)

    def test_trapezoid_passes_through(self):
        t = Trapezoid(15, 20, 25, 30)
        assert to_trapezoid(FuzzyValue.trapezoid(t)) is t

    def test_label_uses_resolver(self):
        t = Trapezoid(15, 20, 25, 30)
        assert to_trapezoid(FuzzyValue.label("young"), lambda name: t) is t
        with pytest.raises(FuzzyValueError):
            to_trapezoid(FuzzyValue.label("young"))

    def test_rejects_unordered_kinds(self):
        for v in (FuzzyValue.unknown(), FuzzyValue.simple(1, "matte")):
            with pytest.raises(FuzzyValueError):
                to_trapezoid(v)


class TestPossibilityEq:
    def test_known_pair(self):
        assert possibility_eq(Trapezoid(15, 20, 25, 30), Trapezoid(25, 30, 40, 45)) == 0.5

    def test_identical_is_one(self):
        t = Trapezoid(1, 2, 3, 4)
        assert possibility_eq(t, t) == 1.0

    def test_core_overlap_is_one(self):
        assert possibility_eq(Trapezoid(0, 10, 20, 30), Trapezoid(15, 18, 40, 50)) == 1.0

    def test_disjoint_supports_are_zero(self):
        assert possibility_eq(Trapezoid(0, 1, 2, 3), Trapezoid(4, 5, 6, 7)) == 0.0

    def test_touching_supports_are_zero(self):
        assert possibility_eq(Trapezoid(0, 1, 2, 3), Trapezoid(3, 4, 5, 6)) == 0.0

    def test_step_edge_pair(self):
        # falling step meets a rising edge at the step boundary
        assert possibility_eq(Trapezoid(0, 0, 10, 10), Trapezoid(5, 15, 20, 20)) == 0.5

    @given(trapezoids, trapezoids)
    def test_symmetric_and_bounded(self, t1, t2):
        p = possibility_eq(t1, t2)
        assert 0.0 <= p <= 1.0
        assert p == possibility_eq(t2, t1)

    @given(trapezoids, lattice)
    def test_point_comparison_equals_membership(self, t, x):
        point = Trapezoid(x, x, x, x)
        assert possibility_eq(point, t) == t.membership(x)

    @given(trapezoids)
    def test_self_is_one(self, t):
        assert possibility_eq(t, t) == 1.0


class TestSimilarityRelation:
    def test_identity(self):
        rel = SimilarityRelation.identity(["a", "b"])
        assert rel.get("a", "a") == 1.0
        assert rel.get("a", "b") == 0.0

    def test_set_degree_is_symmetric(self):
        rel = SimilarityRelation.identity(["a", "b", "c"])
        rel.set_degree("a", "C", 0.4)
        assert rel.get("c", "a") == 0.4
        assert rel.get("A", "c") == 0.4

    def test_diagonal_is_pinned(self):
        rel = SimilarityRelation.identity(["a", "b"])
        with pytest.raises(SimilarityError):
            rel.set_degree("a", "a", 0.5)
        rel.set_degree("a", "a", 1.0)  # a no-op, not an error

    def test_unknown_element(self):
        rel = SimilarityRelation.identity(["a", "b"])
        with pytest.raises(SimilarityError):
            rel.get("a", "z")

    def test_dimension_mismatch(self):
        with pytest.raises(SimilarityError):
            SimilarityRelation(("a", "b"), [[1.0, 0.0]])

    def test_duplicate_domain(self):
        with pytest.raises(SimilarityError):
            SimilarityRelation.identity(["a", "A"])

    @given(st.integers(0, 2), st.integers(0, 2), st.floats(0, 1))
    def test_stays_symmetric(self, i, j, s):
        rel = SimilarityRelation.identity(["x", "y", "z"])
        if i == j:
            return
        rel.set_degree(rel.domain[i], rel.domain[j], s)
        assert validate_similarity(rel).ok


class TestValidateSimilarity:
    def test_reports_clean_relation(self):
        rel = SimilarityRelation.identity(["a", "b"])
        report = validate_similarity(rel)
        assert report.ok
        assert "valid" in str(report)

    def test_names_asymmetric_pair(self):
        rel = SimilarityRelation.identity(["a", "b"])
        rel.matrix[0][1] = 0.8  # bypass set_degree on purpose
        report = validate_similarity(rel)
        assert not report.ok
        v = report.violations[0]
        assert v.kind == "symmetry"
        assert {v.element1, v.element2} == {"a", "b"}
        assert "0.8" in str(report)

    def test_reports_broken_diagonal_and_range(self):
        rel = SimilarityRelation.identity(["a", "b"])
        rel.matrix[1][1] = 0.9
        rel.matrix[0][1] = 1.5
        rel.matrix[1][0] = 1.5
        kinds = {v.kind for v in validate_similarity(rel).violations}
        assert kinds == {"reflexivity", "range"}


class TestSimilarityEq:
    @pytest.fixture()
    def rel(self):
        rel = SimilarityRelation.identity(["rubio", "moreno", "pelirrojo"])
        rel.set_degree("rubio", "moreno", 0.1)
        rel.set_degree("rubio", "pelirrojo", 0.8)
        rel.set_degree("moreno", "pelirrojo", 0.3)
        return rel

    def test_max_min_over_pairs(self, rel):
        a = FuzzyValue.poss_dist([(0.6, "rubio"), (0.9, "moreno")])
        b = FuzzyValue.simple(1, "pelirrojo")
        # max(min(0.6, 0.8), min(0.9, 0.3)) = 0.6
        assert similarity_eq(a, b, rel) == 0.6

    def test_label_counts_as_full_membership(self, rel):
        a = FuzzyValue.label("rubio")
        b = FuzzyValue.label("pelirrojo")
        assert similarity_eq(a, b, rel) == 0.8
        assert similarity_eq(a, a, rel) == 1.0

    def test_degree_caps_similarity(self, rel):
        a = FuzzyValue.simple(0.4, "rubio")
        b = FuzzyValue.label("rubio")
        assert similarity_eq(a, b, rel) == 0.4

    def test_numeric_elements_rejected(self, rel):
        with pytest.raises(SimilarityError):
            similarity_eq(FuzzyValue.simple(1, 3.0), FuzzyValue.label("rubio"), rel)


def make_ordered_attr():
    attr = AttributeDescriptor("people", "age", 2, "numeric")
    return attr


def make_scalar_attr():
    attr = AttributeDescriptor("people", "hair", 3, "scalar")
    rel = SimilarityRelation.identity(["rubio", "moreno", "pelirrojo"])
    rel.set_degree("rubio", "pelirrojo", 0.8)
    attr.similarity = rel
    return attr


class TestFeq:
    def test_unknown_wins_over_everything(self):
        attr = make_ordered_attr()
        unknown = FuzzyValue.unknown()
        for other in (FuzzyValue.undefined(), FuzzyValue.null(), FuzzyValue.crisp(5)):
            assert feq(unknown, other, attr) == 1.0
            assert feq(other, unknown, attr) == 1.0

    def test_undefined_then_null_give_zero(self):
        attr = make_ordered_attr()
        assert feq(FuzzyValue.undefined(), FuzzyValue.crisp(5), attr) == 0.0
        assert feq(FuzzyValue.null(), FuzzyValue.crisp(5), attr) == 0.0
        assert feq(FuzzyValue.undefined(), FuzzyValue.null(), attr) == 0.0

    def test_ordered_dispatch(self):
        attr = make_ordered_attr()
        young = FuzzyValue.trapezoid(15, 20, 25, 30)
        assert feq(FuzzyValue.crisp(26), young, attr) == 0.8
        assert feq(FuzzyValue.interval(20, 25), young, attr) == 1.0

    def test_ordered_resolves_labels(self):
        attr = make_ordered_attr()
        attr.attach_label(LabelDefinition(1, "young", Trapezoid(15, 20, 25, 30)))
        assert feq(FuzzyValue.label("young"), FuzzyValue.crisp(26), attr) == 0.8

    def test_scalar_dispatch(self):
        attr = make_scalar_attr()
        a = FuzzyValue.simple(0.9, "pelirrojo")
        assert feq(a, FuzzyValue.label("rubio"), attr) == 0.8

    def test_kind_mismatch_raises(self):
        with pytest.raises(FuzzyValueError):
            feq(FuzzyValue.simple(1, "rubio"), FuzzyValue.crisp(1), make_ordered_attr())
        with pytest.raises(FuzzyValueError):
            feq(FuzzyValue.interval(1, 2), FuzzyValue.label("rubio"), make_scalar_attr())

    def test_scalar_without_relation(self):
        attr = AttributeDescriptor("people", "hair", 3, "scalar")
        with pytest.raises(SimilarityError):
            feq(FuzzyValue.label("rubio"), FuzzyValue.label("rubio"), attr)

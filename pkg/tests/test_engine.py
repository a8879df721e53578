"""Core arithmetic: normalization, weighted scoring, and the worked example.

Expected values are frozen by hand from the worked example (weights 4/6 and
2/6; criterion weights 5/5, 4/9, 5/9; category scores 0.80 and 2/3; final
rating 34/45) or recomputed through tests/oracle.py.
"""

import random

import pytest

from oracle import rating_by_hand, random_instance, weights_by_hand
from rubric import engine, evaluation
from rubric.catalog import Category, CriteriaCatalog, Criterion, builtin_catalog
from rubric.errors import (
    AllZeroImportanceError,
    MissingCategoryScoreError,
    MissingScoreError,
)

CLARITY_WEIGHT = 2 / 3
SUCCINCTNESS_WEIGHT = 1 / 3
CLARITY_SCORE = 0.80
SUCCINCTNESS_SCORE = 2 / 3
ARTICLE_RATING = 34 / 45


class TestNormalize:
    """importance / sum of importances, zero entries carried at weight 0."""

    def test_category_weights_from_worked_example(self):
        importances = {"1": 4, "2": 2}
        importances.update({str(i): 0 for i in range(3, 12)})
        weights = engine.normalize(importances)
        assert weights["1"] == pytest.approx(CLARITY_WEIGHT, abs=1e-12)
        assert weights["2"] == pytest.approx(SUCCINCTNESS_WEIGHT, abs=1e-12)
        assert all(weights[str(i)] == 0.0 for i in range(3, 12))

    def test_criterion_weights_from_worked_example(self):
        weights = engine.normalize({"2.1": 4, "2.2": 5, "2.3": 0})
        assert weights["2.1"] == pytest.approx(4 / 9, abs=1e-12)
        assert weights["2.2"] == pytest.approx(5 / 9, abs=1e-12)
        assert weights["2.3"] == 0.0

    def test_single_entry(self):
        assert engine.normalize({"A": 5}) == {"A": 1.0}

    def test_weights_sum_to_one(self):
        rng = random.Random(7)
        for _ in range(50):
            importances = {f"k{i}": rng.randint(0, 5) for i in range(rng.randint(1, 11))}
            if all(v == 0 for v in importances.values()):
                importances["k0"] = 1
            weights = engine.normalize(importances)
            assert sum(weights.values()) == pytest.approx(1.0, abs=1e-12)
            assert all(w >= 0 for w in weights.values())

    def test_all_zero_raises(self):
        with pytest.raises(AllZeroImportanceError) as excinfo:
            engine.normalize({"A": 0, "B": 0})
        assert excinfo.value.code == "all_zero_importance"

    def test_empty_map_raises(self):
        with pytest.raises(AllZeroImportanceError):
            engine.normalize({})

    def test_matches_longhand(self):
        rng = random.Random(11)
        for _ in range(50):
            importances = {f"k{i}": rng.randint(0, 5) for i in range(rng.randint(1, 9))}
            importances["k0"] = max(importances.get("k0", 0), 1)
            expected = weights_by_hand(importances)
            actual = engine.normalize(importances)
            for key in importances:
                assert actual[key] == pytest.approx(expected[key], abs=1e-12)


class TestCategoryScore:
    """(sum of score x weight) / 5, with the division after the sum."""

    def test_clarity_from_worked_example(self):
        score = engine.category_score({"1.1": 4}, {"1.1": 1.0})
        assert score == pytest.approx(CLARITY_SCORE, abs=1e-12)

    def test_succinctness_from_worked_example(self):
        score = engine.category_score({"2.1": 5, "2.2": 2}, {"2.1": 4 / 9, "2.2": 5 / 9})
        assert score == pytest.approx(SUCCINCTNESS_SCORE, abs=1e-12)

    def test_all_fives_hits_the_ceiling(self):
        weights = engine.normalize({"a": 3, "b": 2, "c": 1})
        score = engine.category_score({"a": 5, "b": 5, "c": 5}, weights)
        assert score == pytest.approx(1.0, abs=1e-12)

    def test_zero_weight_scores_are_ignored(self):
        score = engine.category_score({"a": 4}, {"a": 1.0, "b": 0.0})
        assert score == pytest.approx(0.8, abs=1e-12)

    def test_missing_score_raises(self):
        with pytest.raises(MissingScoreError) as excinfo:
            engine.category_score({"a": 4}, {"a": 0.5, "b": 0.5})
        assert excinfo.value.code == "missing_score"


class TestArticleRating:
    """sum of category score x category weight."""

    def test_worked_example_rating(self):
        rating = engine.article_rating(
            {"1": CLARITY_SCORE, "2": SUCCINCTNESS_SCORE},
            {"1": CLARITY_WEIGHT, "2": SUCCINCTNESS_WEIGHT},
        )
        assert rating == pytest.approx(ARTICLE_RATING, abs=1e-12)

    def test_single_category_is_identity(self):
        assert engine.article_rating({"1": 0.62}, {"1": 1.0}) == pytest.approx(0.62)

    def test_uniform_scores_pass_through(self):
        weights = engine.normalize({"1": 2, "2": 3, "3": 1})
        rating = engine.article_rating({"1": 0.4, "2": 0.4, "3": 0.4}, weights)
        assert rating == pytest.approx(0.4, abs=1e-12)

    def test_missing_category_score_raises(self):
        with pytest.raises(MissingCategoryScoreError):
            engine.article_rating({"1": 0.5}, {"1": 0.5, "2": 0.5})


class TestEvaluate:
    """Composition of the four step operations over profile + assessment."""

    def test_worked_example_report(self, catalog, sample_profile, sample_assessment):
        report = engine.evaluate(catalog, sample_profile, sample_assessment)
        assert report.article_id == "a1"
        assert report.article_rating == pytest.approx(ARTICLE_RATING, abs=1e-9)
        assert report.category_scores["1"] == pytest.approx(CLARITY_SCORE, abs=1e-9)
        assert report.category_scores["2"] == pytest.approx(SUCCINCTNESS_SCORE, abs=1e-9)
        assert report.category_weights["1"] == pytest.approx(CLARITY_WEIGHT, abs=1e-9)
        assert report.category_weights["2"] == pytest.approx(SUCCINCTNESS_WEIGHT, abs=1e-9)
        assert report.criterion_weights["1"]["1.1"] == pytest.approx(1.0, abs=1e-9)
        assert report.criterion_weights["2"]["2.1"] == pytest.approx(4 / 9, abs=1e-9)
        assert report.criterion_weights["2"]["2.2"] == pytest.approx(5 / 9, abs=1e-9)

    def test_worked_example_display_strings(self, catalog, sample_profile, sample_assessment):
        report = engine.evaluate(catalog, sample_profile, sample_assessment)
        assert report.display_percentages["1"] == "80.00%"
        assert report.display_percentages["2"] == "66.67%"
        assert report.display_percentages["article_rating"] == "75.56%"
        assert engine.format_percent(report.category_weights["1"]) == "66.67%"
        assert engine.format_percent(report.category_weights["2"]) == "33.33%"
        assert engine.format_percent(report.criterion_weights["2"]["2.1"]) == "44.44%"
        assert engine.format_percent(report.criterion_weights["2"]["2.2"]) == "55.56%"

    def test_excluded_categories_carried_at_weight_zero(self, catalog, sample_profile,
                                                        sample_assessment):
        report = engine.evaluate(catalog, sample_profile, sample_assessment)
        assert report.category_weights["7"] == 0.0
        assert "7" not in report.category_scores

    def test_maximal_case(self, catalog):
        profile = evaluation.new_profile(catalog, "max", "everything matters")
        for category in catalog.categories:
            profile = evaluation.set_category_importance(profile, category.id, 5)
            for criterion in category.criteria:
                profile = evaluation.set_criterion_importance(profile, criterion.id, 5)
        assessment = evaluation.new_assessment("best", "best", profile)
        for criterion in catalog.iter_criteria():
            assessment = evaluation.set_score(assessment, profile, criterion.id, 5)
        report = engine.evaluate(catalog, profile, assessment)
        assert report.article_rating == pytest.approx(1.0, abs=1e-12)

    def test_all_zero_profile_tagged_with_category_step(self, catalog):
        profile = evaluation.new_profile(catalog, "empty", "nothing selected")
        assessment = evaluation.new_assessment("a", "a", profile)
        with pytest.raises(AllZeroImportanceError) as excinfo:
            engine.evaluate(catalog, profile, assessment)
        assert excinfo.value.step == "category_weights"

    def test_category_without_criteria_tagged_with_criterion_step(self, catalog):
        profile = evaluation.new_profile(catalog, "half", "category only")
        profile = evaluation.set_category_importance(profile, "1", 4)
        assessment = evaluation.new_assessment("a", "a", profile)
        with pytest.raises(AllZeroImportanceError) as excinfo:
            engine.evaluate(catalog, profile, assessment)
        assert excinfo.value.step == "criterion_weights"
        assert excinfo.value.detail.get("category_id") == "1"

    def test_missing_score_tagged(self, catalog, sample_profile):
        assessment = evaluation.new_assessment("a", "a", sample_profile)
        assessment = evaluation.set_score(assessment, sample_profile, "1.1", 4)
        with pytest.raises(MissingScoreError) as excinfo:
            engine.evaluate(catalog, sample_profile, assessment)
        assert excinfo.value.step == "category_scores"

    def test_hundred_random_instances_match_oracle(self):
        rng = random.Random(424242)
        for _ in range(100):
            tree, cat_imp, crit_imp, scores = random_instance(rng)
            catalog = _catalog_from_tree(tree)
            profile = _profile_from_maps(catalog, cat_imp, crit_imp)
            assessment = _assessment_from_scores(profile, scores)
            expected_scores, expected_rating = rating_by_hand(
                tree, cat_imp, crit_imp, scores
            )
            report = engine.evaluate(catalog, profile, assessment)
            assert report.article_rating == pytest.approx(expected_rating, abs=1e-9)
            for cat_id, expected in expected_scores.items():
                assert report.category_scores[cat_id] == pytest.approx(expected, abs=1e-9)


class TestFormatPercent:
    """Two decimals, half away from zero, '%' suffix."""

    @pytest.mark.parametrize("fraction,expected", [
        (2 / 3, "66.67%"),
        (1 / 3, "33.33%"),
        (4 / 9, "44.44%"),
        (5 / 9, "55.56%"),
        (0.8, "80.00%"),
        (34 / 45, "75.56%"),
        (1.0, "100.00%"),
        (0.0, "0.00%"),
    ])
    def test_worked_example_strings(self, fraction, expected):
        assert engine.format_percent(fraction) == expected

    def test_ties_round_away_from_zero(self):
        assert engine.format_percent(0.12125) == "12.13%"


# Helpers shared with other test modules via import.

def _catalog_from_tree(tree):
    categories = []
    for cat_id, crit_ids in tree.items():
        criteria = tuple(
            Criterion(id=crit_id, prompt=f"how well does it do {crit_id}?",
                      category_id=cat_id)
            for crit_id in crit_ids
        )
        categories.append(Category(id=cat_id, name=f"Category {cat_id}", criteria=criteria))
    return CriteriaCatalog(catalog_id="generated", version="1", categories=tuple(categories))


def _profile_from_maps(catalog, cat_imp, crit_imp):
    profile = evaluation.new_profile(catalog, "p", "generated profile")
    for cat_id, value in cat_imp.items():
        if value:
            profile = evaluation.set_category_importance(profile, cat_id, value)
    for crit_id, value in crit_imp.items():
        if value:
            profile = evaluation.set_criterion_importance(profile, crit_id, value)
    return profile


def _assessment_from_scores(profile, scores):
    assessment = evaluation.new_assessment("a", "a", profile)
    for crit_id, score in scores.items():
        assessment = evaluation.set_score(assessment, profile, crit_id, score)
    return assessment

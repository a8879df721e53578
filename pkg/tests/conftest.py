"""Shared fixtures: the worked-example profile, assessment, and store."""

import pytest

from rubric import evaluation
from rubric.catalog import builtin_catalog


@pytest.fixture()
def catalog():
    return builtin_catalog()


@pytest.fixture()
def sample_profile(catalog):
    """Clarity 4, Succinctness 2; criterion importances 1.1=5, 2.1=4, 2.2=5."""
    profile = evaluation.new_profile(catalog, "teaching-101", "Sample teaching program")
    profile = evaluation.set_category_importance(profile, "1", 4)
    profile = evaluation.set_category_importance(profile, "2", 2)
    profile = evaluation.set_criterion_importance(profile, "1.1", 5)
    profile = evaluation.set_criterion_importance(profile, "2.1", 4)
    profile = evaluation.set_criterion_importance(profile, "2.2", 5)
    return profile


@pytest.fixture()
def sample_assessment(sample_profile):
    """Scores 1.1=4, 2.1=5, 2.2=2 — complete under sample_profile."""
    assessment = evaluation.new_assessment("a1@teaching-101", "a1", sample_profile)
    assessment = evaluation.set_score(assessment, sample_profile, "1.1", 4)
    assessment = evaluation.set_score(assessment, sample_profile, "2.1", 5)
    assessment = evaluation.set_score(assessment, sample_profile, "2.2", 2)
    return assessment

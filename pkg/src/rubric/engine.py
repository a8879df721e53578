"""Pure rating arithmetic: normalization and weighted aggregation.

Importances normalize to weights (importance over the level's total), criterion
scores aggregate into category scores, category scores into the article rating.
Scores enter on the 1..5 scale; the division by the top score happens after
each category's weighted sum, so intermediate values match the method's own
presentation. Every function here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import TYPE_CHECKING, Mapping

from .errors import (
    AllZeroImportanceError,
    MissingCategoryScoreError,
    MissingScoreError,
)

if TYPE_CHECKING:
    from .catalog import CriteriaCatalog
    from .evaluation import Assessment, WeightProfile

TOP_SCORE = 5

# Marker for a criterion judged not applicable to a particular article. It is
# deliberately not a number: at evaluation time the criterion is dropped and
# its siblings' weights renormalize, instead of a zero dragging the category.
NOT_APPLICABLE = "NA"


@dataclass(frozen=True)
class RatingReport:
    """One article's evaluation: fractions of 1 plus display strings.

    ``display_percentages`` maps each scored category id, plus the key
    "article_rating", to its two-decimal percentage. Weights are carried for
    rendering; categories excluded by the profile keep weight 0 and get no
    score or criterion weights.
    """

    article_id: str
    category_scores: dict[str, float]
    article_rating: float
    display_percentages: dict[str, str]
    category_weights: dict[str, float]
    criterion_weights: dict[str, dict[str, float]]


def normalize(importances: Mapping[str, int]) -> dict[str, float]:
    """Weights: each importance divided by the sum over all entries.

    Zero-importance entries are carried at weight 0 rather than dropped, so
    callers can render the full framework.

    Raises:
        AllZeroImportanceError: no entry is positive, so this level of the
            evaluation is undefined.
    """
    total = sum(importances.values())
    if total <= 0:
        raise AllZeroImportanceError("every importance is 0: nothing is selected")
    return {key: value / total for key, value in importances.items()}


def category_score(scores: Mapping[str, int],
                   criterion_weights: Mapping[str, float]) -> float:
    """(sum of score x weight over weighted criteria) / 5.

    Raises:
        MissingScoreError: a criterion with positive weight has no numeric
            score in ``scores``.
    """
    weighted_sum = 0.0
    for criterion_id, weight in criterion_weights.items():
        if weight == 0:
            continue
        score = scores.get(criterion_id)
        if not isinstance(score, int) or not 1 <= score <= TOP_SCORE:
            raise MissingScoreError(
                f"criterion {criterion_id!r} carries weight but no score in 1..5",
                step="category_scores",
                detail={"criterion_id": criterion_id},
            )
        weighted_sum += score * weight
    return weighted_sum / TOP_SCORE


def article_rating(category_scores: Mapping[str, float],
                   category_weights: Mapping[str, float]) -> float:
    """Sum of category score x category weight over considered categories.

    Raises:
        MissingCategoryScoreError: a category with positive weight has no
            entry in ``category_scores``.
    """
    rating = 0.0
    for category_id, weight in category_weights.items():
        if weight == 0:
            continue
        if category_id not in category_scores:
            raise MissingCategoryScoreError(
                f"category {category_id!r} carries weight but has no score",
                step="article_rating",
                detail={"category_id": category_id},
            )
        rating += category_scores[category_id] * weight
    return rating


def format_percent(fraction: float) -> str:
    """Two-decimal percentage, ties rounded away from zero (0.755… -> "75.56%")."""
    percent = Decimal(str(fraction * 100)).quantize(
        Decimal("0.01"), rounding=ROUND_HALF_UP
    )
    return f"{percent}%"


def evaluate(catalog: CriteriaCatalog, profile: WeightProfile,
             assessment: Assessment) -> RatingReport:
    """Full pipeline over one assessment; deterministic for identical inputs.

    The profile must already be validated against the catalog and the
    assessment complete for the profile (see the evaluation module). Criteria
    the assessment marks NOT_APPLICABLE are treated as importance 0, so their
    siblings' weights renormalize.

    Raises:
        AllZeroImportanceError: tagged "category_weights" when no category is
            selected, "criterion_weights" when a selected category retains no
            scorable criterion.
        MissingScoreError: tagged "category_scores".
    """
    try:
        category_weights = normalize({
            category.id: profile.category_importance.get(category.id, 0)
            for category in catalog.categories
        })
    except AllZeroImportanceError:
        raise AllZeroImportanceError(
            "no category has a positive importance", step="category_weights"
        ) from None

    category_scores: dict[str, float] = {}
    criterion_weights: dict[str, dict[str, float]] = {}
    for category in catalog.categories:
        if category_weights[category.id] == 0:
            continue
        importances = {}
        for criterion in category.criteria:
            value = profile.criterion_importance.get(criterion.id, 0)
            if assessment.scores.get(criterion.id) == NOT_APPLICABLE:
                value = 0
            importances[criterion.id] = value
        try:
            weights = normalize(importances)
        except AllZeroImportanceError:
            raise AllZeroImportanceError(
                f"category {category.id!r} retains no criterion with positive "
                "importance and a usable score",
                step="criterion_weights",
                detail={"category_id": category.id},
            ) from None

        numeric_scores = {}
        for criterion_id, weight in weights.items():
            if weight == 0:
                continue
            score = assessment.scores.get(criterion_id)
            if not isinstance(score, int) or not 1 <= score <= TOP_SCORE:
                raise MissingScoreError(
                    f"criterion {criterion_id!r} is required by the profile "
                    "but carries no score in 1..5",
                    step="category_scores",
                    detail={"category_id": category.id, "criterion_id": criterion_id},
                )
            numeric_scores[criterion_id] = score

        criterion_weights[category.id] = weights
        category_scores[category.id] = category_score(numeric_scores, weights)

    rating = article_rating(category_scores, category_weights)
    display = {cat_id: format_percent(score) for cat_id, score in category_scores.items()}
    display["article_rating"] = format_percent(rating)
    return RatingReport(
        article_id=assessment.article_id,
        category_scores=category_scores,
        article_rating=rating,
        display_percentages=display,
        category_weights=category_weights,
        criterion_weights=criterion_weights,
    )

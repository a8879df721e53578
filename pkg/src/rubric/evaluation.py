"""Profiles, articles, and assessments: the two phases around the engine.

A weight profile captures a teaching program's importance ratings; an
assessment captures one article's criterion scores against a pinned profile
revision. Both are immutable snapshots — every mutation returns a fresh value
with the revision bumped, and the store serializes writers via those
revisions. Ratings are never stored; they are recomputed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime, timezone

from . import engine
from .catalog import CriteriaCatalog
from .engine import NOT_APPLICABLE, TOP_SCORE
from .errors import (
    IncompleteAssessmentError,
    IneffectiveCriterionError,
    MixedProfileError,
    OutOfRangeError,
    UnknownCategoryError,
    UnknownCriterionError,
    ValidationError,
)

DRAFT = "draft"
COMPLETE = "complete"

# Display labels for the two 0..5 / 1..5 scales. Purely cosmetic: the numbers
# are what the arithmetic uses.
IMPORTANCE_LABELS = {
    0: "Not Applicable",
    1: "Slightly Important",
    2: "Somewhat Important",
    3: "Moderately Important",
    4: "Important",
    5: "Extremely Important",
}
SCORE_LABELS = {
    1: "To a very small extent",
    2: "To a small extent",
    3: "To a moderate extent",
    4: "To a large extent",
    5: "To a very large extent",
}


def utc_now() -> str:
    """Current UTC time, RFC 3339 ("2026-08-16T09:30:00Z")."""
    return datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z")


@dataclass(frozen=True)
class WeightProfile:
    """One teaching program's importance ratings against a pinned catalog.

    The importance maps always carry every id of the referenced catalog
    (excluded items at 0), so consumers can render the full framework without
    re-deriving the id space.
    """

    profile_id: str
    name: str
    catalog_id: str
    catalog_version: str
    category_importance: dict[str, int]
    criterion_importance: dict[str, int]
    created_at: str
    updated_at: str
    revision: int = 1


@dataclass(frozen=True)
class ArticleRecord:
    article_id: str
    title: str
    authors: str | None = None
    year: int | None = None
    source: str | None = None
    notes: str | None = None

    def __post_init__(self):
        if not self.article_id.strip():
            raise ValidationError("article_id must be non-empty")
        if not self.title.strip():
            raise ValidationError(f"article {self.article_id!r}: title must be non-empty")


@dataclass(frozen=True)
class Assessment:
    """One article's criterion scores under one profile revision.

    ``scores`` maps criterion id to 1..5 or the NOT_APPLICABLE marker;
    ``status`` is recomputed on every change, never set by callers.
    """

    assessment_id: str
    article_id: str
    profile_id: str
    profile_revision: int
    scores: dict[str, int | str]
    status: str
    updated_at: str
    revision: int = 1


@dataclass(frozen=True)
class RankingEntry:
    article_id: str
    article_rating: float
    rank: int
    category_scores: dict[str, float]


def _check_importance(value, target_id: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= TOP_SCORE:
        raise OutOfRangeError(
            f"importance for {target_id!r} must be an integer 0..{TOP_SCORE}, got {value!r}",
            detail={"target": target_id},
        )
    return value


def _category_of(criterion_id: str) -> str:
    # Criterion ids extend their category id in dotted form (a catalog
    # invariant), so the category is recoverable without a catalog lookup.
    return criterion_id.rsplit(".", 1)[0]


def new_profile(catalog: CriteriaCatalog, profile_id: str, name: str,
                category_importance: dict[str, int] | None = None,
                criterion_importance: dict[str, int] | None = None,
                *, now: str | None = None) -> WeightProfile:
    """Fresh revision-1 profile; omitted importances default to 0.

    A profile with no selections is a legal staging state — it only becomes
    an error when evaluated.
    """
    categories = {category.id: 0 for category in catalog.categories}
    criteria = {criterion.id: 0 for criterion in catalog.iter_criteria()}
    for cat_id, value in (category_importance or {}).items():
        if cat_id not in categories:
            raise UnknownCategoryError(f"category {cat_id!r} is not in the catalog")
        categories[cat_id] = _check_importance(value, cat_id)
    for crit_id, value in (criterion_importance or {}).items():
        if crit_id not in criteria:
            raise UnknownCriterionError(f"criterion {crit_id!r} is not in the catalog")
        criteria[crit_id] = _check_importance(value, crit_id)
    stamp = now or utc_now()
    return WeightProfile(
        profile_id=profile_id,
        name=name,
        catalog_id=catalog.catalog_id,
        catalog_version=catalog.version,
        category_importance=categories,
        criterion_importance=criteria,
        created_at=stamp,
        updated_at=stamp,
        revision=1,
    )


def set_category_importance(profile: WeightProfile, category_id: str,
                            rating: int, *, now: str | None = None) -> WeightProfile:
    """New profile revision with one category importance changed."""
    if category_id not in profile.category_importance:
        raise UnknownCategoryError(f"category {category_id!r} is not in the profile's catalog")
    _check_importance(rating, category_id)
    updated = dict(profile.category_importance)
    updated[category_id] = rating
    return replace(
        profile,
        category_importance=updated,
        revision=profile.revision + 1,
        updated_at=now or utc_now(),
    )


def set_criterion_importance(profile: WeightProfile, criterion_id: str,
                             rating: int, *, now: str | None = None) -> WeightProfile:
    """New profile revision with one criterion importance changed."""
    if criterion_id not in profile.criterion_importance:
        raise UnknownCriterionError(f"criterion {criterion_id!r} is not in the profile's catalog")
    _check_importance(rating, criterion_id)
    updated = dict(profile.criterion_importance)
    updated[criterion_id] = rating
    return replace(
        profile,
        criterion_importance=updated,
        revision=profile.revision + 1,
        updated_at=now or utc_now(),
    )


def update_importance(profile: WeightProfile,
                      category: dict[str, int] | None = None,
                      criterion: dict[str, int] | None = None,
                      *, now: str | None = None) -> WeightProfile:
    """Apply a batch of importance edits as a single revision bump."""
    updated = profile
    for category_id, rating in (category or {}).items():
        updated = set_category_importance(updated, category_id, rating, now=now)
    for criterion_id, rating in (criterion or {}).items():
        updated = set_criterion_importance(updated, criterion_id, rating, now=now)
    if updated is profile:
        updated = replace(profile, updated_at=now or utc_now())
    return replace(updated, revision=profile.revision + 1)


def validate_profile(catalog: CriteriaCatalog, profile: WeightProfile) -> list[str]:
    """Structural violations of the profile against its catalog; empty is ok."""
    violations = []
    if (profile.catalog_id, profile.catalog_version) != (catalog.catalog_id, catalog.version):
        violations.append(
            f"profile references catalog {profile.catalog_id!r} "
            f"v{profile.catalog_version!r}, not {catalog.catalog_id!r} v{catalog.version!r}"
        )
    known_categories = {category.id for category in catalog.categories}
    known_criteria = {criterion.id for criterion in catalog.iter_criteria()}
    for cat_id, value in profile.category_importance.items():
        if cat_id not in known_categories:
            violations.append(f"unknown category {cat_id!r}")
        if not isinstance(value, int) or not 0 <= value <= TOP_SCORE:
            violations.append(f"category {cat_id!r}: importance {value!r} out of range")
    for crit_id, value in profile.criterion_importance.items():
        if crit_id not in known_criteria:
            violations.append(f"unknown criterion {crit_id!r}")
        if not isinstance(value, int) or not 0 <= value <= TOP_SCORE:
            violations.append(f"criterion {crit_id!r}: importance {value!r} out of range")
    return violations


def effective_criteria(profile: WeightProfile) -> dict[str, list[str]]:
    """Criteria the profile actually evaluates, grouped by selected category."""
    selected = {
        cat_id: [] for cat_id, value in profile.category_importance.items() if value > 0
    }
    for crit_id, value in profile.criterion_importance.items():
        if value > 0 and _category_of(crit_id) in selected:
            selected[_category_of(crit_id)].append(crit_id)
    return selected


def completion_status(profile: WeightProfile, scores: dict[str, int | str]) -> str:
    """COMPLETE when every effective criterion is scored or NA, with at least
    one numeric score per selected category; DRAFT otherwise."""
    for cat_id, crit_ids in effective_criteria(profile).items():
        if not crit_ids:
            return DRAFT
        numeric = 0
        for crit_id in crit_ids:
            value = scores.get(crit_id)
            if value == NOT_APPLICABLE:
                continue
            if isinstance(value, int) and 1 <= value <= TOP_SCORE:
                numeric += 1
            else:
                return DRAFT
        if numeric == 0:
            return DRAFT
    return COMPLETE


def new_assessment(assessment_id: str, article_id: str, profile: WeightProfile,
                   *, now: str | None = None) -> Assessment:
    """Fresh draft pinned to the profile's current revision."""
    return Assessment(
        assessment_id=assessment_id,
        article_id=article_id,
        profile_id=profile.profile_id,
        profile_revision=profile.revision,
        scores={},
        status=completion_status(profile, {}),
        updated_at=now or utc_now(),
        revision=1,
    )


def set_score(assessment: Assessment, profile: WeightProfile, criterion_id: str,
              score: int | str | None, *, now: str | None = None) -> Assessment:
    """New assessment revision with one criterion scored, marked NA, or reset.

    ``score`` is 1..5, NOT_APPLICABLE, or None to remove an existing score.
    Scoring a criterion the profile excludes is an error; removal is always
    allowed so assessments can be cleaned up after profile changes.
    """
    if criterion_id not in profile.criterion_importance:
        raise UnknownCriterionError(f"criterion {criterion_id!r} is not in the profile's catalog")

    scores = dict(assessment.scores)
    if score is None:
        scores.pop(criterion_id, None)
    else:
        if score == 0:
            raise OutOfRangeError(
                f"criterion {criterion_id!r}: 0 is not a score; mark the "
                f"criterion {NOT_APPLICABLE!r} to exclude it",
                detail={"criterion_id": criterion_id},
            )
        if score != NOT_APPLICABLE and (
            isinstance(score, bool) or not isinstance(score, int)
            or not 1 <= score <= TOP_SCORE
        ):
            raise OutOfRangeError(
                f"score for {criterion_id!r} must be 1..{TOP_SCORE} or "
                f"{NOT_APPLICABLE!r}, got {score!r}",
                detail={"criterion_id": criterion_id},
            )
        category_id = _category_of(criterion_id)
        if (profile.category_importance.get(category_id, 0) == 0
                or profile.criterion_importance[criterion_id] == 0):
            raise IneffectiveCriterionError(
                f"criterion {criterion_id!r} is excluded by profile "
                f"{profile.profile_id!r} and cannot be scored",
                detail={"criterion_id": criterion_id, "category_id": category_id},
            )
        scores[criterion_id] = score

    return replace(
        assessment,
        scores=scores,
        status=completion_status(profile, scores),
        updated_at=now or utc_now(),
        revision=assessment.revision + 1,
    )


def weight_preview(category_importance: dict[str, int],
                   criterion_importance: dict[str, int],
                   ) -> tuple[dict[str, float], dict[str, dict[str, float]]]:
    """Normalized weights for importances that may still be mid-edit.

    Returns category weights plus criterion weights grouped by category;
    categories whose criteria are all zero are left out of the second map
    rather than failing, so an editor can show the rest while the user
    keeps filling things in. All-zero category importances do fail.
    """
    category_weights = engine.normalize(category_importance)
    groups: dict[str, dict[str, int]] = {}
    for criterion_id, value in criterion_importance.items():
        groups.setdefault(_category_of(criterion_id), {})[criterion_id] = value
    criterion_weights = {
        category_id: engine.normalize(members)
        for category_id, members in groups.items()
        if any(isinstance(v, int) and not isinstance(v, bool) and v > 0
               for v in members.values())
    }
    return category_weights, criterion_weights


def update_scores(assessment: Assessment, profile: WeightProfile,
                  scores: dict[str, int | str | None],
                  *, now: str | None = None) -> Assessment:
    """Apply a batch of score edits as a single revision bump."""
    updated = assessment
    for criterion_id, score in scores.items():
        updated = set_score(updated, profile, criterion_id, score, now=now)
    if updated is assessment:
        updated = replace(assessment, updated_at=now or utc_now())
    return replace(updated, revision=assessment.revision + 1)


def preview_category_scores(profile: WeightProfile,
                            scores: dict[str, int | str]) -> dict[str, float]:
    """Category scores for the categories scored so far.

    A category appears once every effective criterion in it is scored or
    NA with at least one numeric score, so a partially filled assessment
    can show finished categories while others are still open. Agrees with
    the full evaluation once everything is scored.
    """
    preview: dict[str, float] = {}
    for category_id, criterion_ids in effective_criteria(profile).items():
        importance: dict[str, int] = {}
        numeric: dict[str, int] = {}
        settled = bool(criterion_ids)
        for criterion_id in criterion_ids:
            value = scores.get(criterion_id)
            if value == NOT_APPLICABLE:
                importance[criterion_id] = 0
            elif isinstance(value, int) and 1 <= value <= TOP_SCORE:
                importance[criterion_id] = profile.criterion_importance[criterion_id]
                numeric[criterion_id] = value
            else:
                settled = False
                break
        if settled and numeric:
            weights = engine.normalize(importance)
            preview[category_id] = engine.category_score(numeric, weights)
    return preview


def ranking_from_reports(reports: list[engine.RatingReport]) -> list[RankingEntry]:
    """Order rating reports best first; ties break by ascending article_id."""
    ordered = sorted(reports, key=lambda report: (-report.article_rating, report.article_id))
    return [
        RankingEntry(
            article_id=report.article_id,
            article_rating=report.article_rating,
            rank=position,
            category_scores=report.category_scores,
        )
        for position, report in enumerate(ordered, start=1)
    ]


def rank_articles(catalog: CriteriaCatalog, profile: WeightProfile,
                  assessments: list[Assessment]) -> list[RankingEntry]:
    """Rank complete assessments of one profile revision, best first.

    Raises:
        MixedProfileError: an assessment pins a different profile revision.
        IncompleteAssessmentError: an assessment is still a draft.
    """
    reports = []
    for assessment in assessments:
        if (assessment.profile_id != profile.profile_id
                or assessment.profile_revision != profile.revision):
            raise MixedProfileError(
                f"assessment {assessment.assessment_id!r} pins profile "
                f"{assessment.profile_id!r} r{assessment.profile_revision}, "
                f"expected {profile.profile_id!r} r{profile.revision}",
                detail={"assessment_id": assessment.assessment_id},
            )
        if assessment.status != COMPLETE:
            raise IncompleteAssessmentError(
                f"assessment {assessment.assessment_id!r} is still a draft",
                detail={"assessment_id": assessment.assessment_id},
            )
        reports.append(engine.evaluate(catalog, profile, assessment))
    return ranking_from_reports(reports)

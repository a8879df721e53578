"""What-if analysis over profile importances.

Deltas apply to a transient copy of the profile; nothing here touches stored
state. The scan is exhaustive over single-step (plus or minus 1) importance
changes rather than sampled — the instrument space is tiny, so every probe
is deterministic and testable.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import engine, evaluation
from .catalog import CriteriaCatalog
from .errors import InvalidPerturbationError, UnknownTargetError
from .evaluation import Assessment, RankingEntry, WeightProfile


@dataclass(frozen=True)
class WhatIfDelta:
    """One transient importance change; the target may be a category or a criterion."""

    target: str
    new_importance: int


@dataclass(frozen=True)
class SensitivityReport:
    baseline_ranking: list[RankingEntry]
    perturbed_ranking: list[RankingEntry]
    rating_deltas: dict[str, float]
    rank_reversals: list[tuple[str, str]]


def _apply_deltas(profile: WeightProfile, deltas: list[WhatIfDelta]) -> WeightProfile:
    for delta in deltas:
        if delta.target in profile.category_importance:
            profile = evaluation.set_category_importance(
                profile, delta.target, delta.new_importance
            )
        elif delta.target in profile.criterion_importance:
            profile = evaluation.set_criterion_importance(
                profile, delta.target, delta.new_importance
            )
        else:
            raise UnknownTargetError(
                f"what-if target {delta.target!r} is neither a category nor a criterion"
            )
    return profile


def _check_perturbation(perturbed: WeightProfile, assessments: list[Assessment]) -> None:
    """The perturbed profile must stay evaluable for every given assessment."""
    if all(value == 0 for value in perturbed.category_importance.values()):
        raise InvalidPerturbationError("deltas deselect every category")
    for cat_id, crit_ids in evaluation.effective_criteria(perturbed).items():
        if not crit_ids:
            raise InvalidPerturbationError(
                f"deltas leave category {cat_id!r} selected with no criterion",
                detail={"category_id": cat_id},
            )
    for assessment in assessments:
        if evaluation.completion_status(perturbed, assessment.scores) != evaluation.COMPLETE:
            raise InvalidPerturbationError(
                f"assessment {assessment.assessment_id!r} would become incomplete "
                "under the perturbed profile (a newly effective criterion is unscored)",
                detail={"assessment_id": assessment.assessment_id},
            )


def what_if(catalog: CriteriaCatalog, profile: WeightProfile,
            assessments: list[Assessment], deltas: list[WhatIfDelta]) -> SensitivityReport:
    """Compare the baseline ranking against one perturbed by the deltas.

    Assessments must be complete under the baseline profile. Deltas that
    would leave the profile unusable (every category deselected, a selected
    category without criteria, or an assessment no longer complete) raise
    InvalidPerturbationError.
    """
    baseline = evaluation.rank_articles(catalog, profile, assessments)
    perturbed_profile = _apply_deltas(profile, deltas)
    _check_perturbation(perturbed_profile, assessments)

    by_id = {assessment.article_id: assessment for assessment in assessments}
    perturbed_reports = [
        engine.evaluate(catalog, perturbed_profile, by_id[entry.article_id])
        for entry in baseline
    ]
    perturbed = evaluation.ranking_from_reports(perturbed_reports)

    baseline_rating = {entry.article_id: entry.article_rating for entry in baseline}
    perturbed_rating = {entry.article_id: entry.article_rating for entry in perturbed}
    rating_deltas = {
        entry.article_id: perturbed_rating[entry.article_id] - baseline_rating[entry.article_id]
        for entry in baseline
    }

    perturbed_rank = {entry.article_id: entry.rank for entry in perturbed}
    ordered_ids = [entry.article_id for entry in baseline]
    reversals = []
    for index, first in enumerate(ordered_ids):
        for second in ordered_ids[index + 1:]:
            if perturbed_rank[first] > perturbed_rank[second]:
                reversals.append((first, second))

    return SensitivityReport(
        baseline_ranking=baseline,
        perturbed_ranking=perturbed,
        rating_deltas=rating_deltas,
        rank_reversals=reversals,
    )


def stability_scan(catalog: CriteriaCatalog, profile: WeightProfile,
                   assessments: list[Assessment]) -> dict[str, bool]:
    """Flag every target whose single-step importance change reverses a rank.

    Targets are all categories plus the profile's effective criteria. Steps
    that would make the profile invalid or an assessment incomplete are
    skipped, mirroring what an evaluator could actually apply.
    """
    targets: dict[str, int] = {
        cat_id: profile.category_importance[cat_id]
        for cat_id in profile.category_importance
    }
    for crit_ids in evaluation.effective_criteria(profile).values():
        for crit_id in crit_ids:
            targets[crit_id] = profile.criterion_importance[crit_id]

    flags = {}
    for target, current in targets.items():
        reversed_here = False
        for candidate in (current - 1, current + 1):
            if not 0 <= candidate <= engine.TOP_SCORE:
                continue
            try:
                report = what_if(
                    catalog, profile, assessments, [WhatIfDelta(target, candidate)]
                )
            except InvalidPerturbationError:
                continue
            if report.rank_reversals:
                reversed_here = True
                break
        flags[target] = reversed_here
    return flags

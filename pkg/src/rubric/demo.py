"""The worked example as a step-by-step printable trace.

Everything here is computed live through the same code paths the store
and service use; the only fixed inputs are the three rating maps. The
demo touches no store, so its output is identical on every run.
"""

from __future__ import annotations

from . import engine, evaluation
from .catalog import builtin_catalog

CATEGORY_IMPORTANCE = {"1": 4, "2": 2}
CRITERION_IMPORTANCE = {"1.1": 5, "2.1": 4, "2.2": 5}
SCORES = {"1.1": 4, "2.1": 5, "2.2": 2}


def demo_lines() -> list[str]:
    catalog = builtin_catalog()
    profile = evaluation.new_profile(catalog, "demo", "Worked example",
                                     CATEGORY_IMPORTANCE, CRITERION_IMPORTANCE)
    assessment = evaluation.new_assessment("article@demo", "article", profile)
    assessment = evaluation.update_scores(assessment, profile, SCORES)
    report = engine.evaluate(catalog, profile, assessment)

    names = {category.id: category.name for category in catalog.categories}
    pct = engine.format_percent
    lines: list[str] = []
    add = lines.append

    add("Worked example: one article, two categories, three criteria.")
    add("")
    add("Step 1. Rate how much each category matters (0-5).")
    for cid, value in CATEGORY_IMPORTANCE.items():
        add(f"  {cid} {names[cid]:<13} {value}  "
            f"{evaluation.IMPORTANCE_LABELS[value]}")
    excluded = len(catalog.categories) - len(CATEGORY_IMPORTANCE)
    add(f"  the other {excluded} categories stay at 0 and are excluded")
    add("")
    add("Step 2. Normalize category importance into weights.")
    for cid in CATEGORY_IMPORTANCE:
        add(f"  {cid} {names[cid]:<13} {pct(report.category_weights[cid]):>7}")
    add("")
    add("Step 3. Rate how much each criterion matters (0-5).")
    for crit_id, value in CRITERION_IMPORTANCE.items():
        add(f"  {crit_id} {value}  {evaluation.IMPORTANCE_LABELS[value]}")
    add("")
    add("Step 4. Normalize criterion importance within each category.")
    for cid in CATEGORY_IMPORTANCE:
        for crit_id, weight in report.criterion_weights[cid].items():
            if crit_id in CRITERION_IMPORTANCE:
                add(f"  {crit_id} {pct(weight):>7}")
    add("")
    add("Step 5. Score the article against each effective criterion (1-5).")
    for crit_id, value in SCORES.items():
        add(f"  {crit_id} {value}  {evaluation.SCORE_LABELS[value]}")
    add("")
    add("Step 6. Weight the scores into one score per category.")
    for cid in CATEGORY_IMPORTANCE:
        add(f"  {cid} {names[cid]:<13} {pct(report.category_scores[cid]):>7}")
    add("")
    add("Step 7. Weight the category scores into the article rating.")
    add(f"  article rating {pct(report.article_rating)}")
    return lines

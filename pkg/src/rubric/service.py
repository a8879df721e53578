"""HTTP API over the store and the evaluation pipeline.

The browser workbench is a pure display layer, so every number it shows
has an endpoint here: stored entities, normalized-weight previews,
ratings, rankings, and transient what-if runs. Domain errors map onto
status codes in one place: not-found 404, revision conflicts 409,
everything else 422 with the error's code in the body.
"""

from __future__ import annotations

import os
from pathlib import Path

import uvicorn
from fastapi import Body, FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import engine, evaluation
from .catalog import dump_catalog, load_catalog
from .errors import (
    AllZeroImportanceError,
    ConflictError,
    IncompleteAssessmentError,
    NotFoundError,
    RubricError,
    ValidationError,
)
from .evaluation import Assessment, WeightProfile
from .sensitivity import WhatIfDelta, stability_scan, what_if
from .store import (
    Store,
    article_document,
    assessment_document,
    profile_document,
)

DEFAULT_ADDR = "127.0.0.1:8000"


def _status_for(error: RubricError) -> int:
    if isinstance(error, NotFoundError):
        return 404
    if isinstance(error, ConflictError):
        return 409
    return 422


def _require(body: dict, field: str, kind: type) -> object:
    value = body.get(field)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ValidationError(f"{field!r} must be a {kind.__name__}")
    return value


def _optional_map(body: dict, field: str) -> dict:
    value = body.get(field) or {}
    if not isinstance(value, dict):
        raise ValidationError(f"{field!r} must be an object")
    return value


def _ranking_entry(entry: evaluation.RankingEntry) -> dict:
    display = {
        category_id: engine.format_percent(score)
        for category_id, score in entry.category_scores.items()
    }
    display["article_rating"] = engine.format_percent(entry.article_rating)
    return {
        "article_id": entry.article_id,
        "article_rating": entry.article_rating,
        "rank": entry.rank,
        "category_scores": entry.category_scores,
        "display": display,
    }


def create_app(store_root: str | os.PathLike) -> FastAPI:
    store = Store.open(store_root)
    app = FastAPI(title="article rating service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RubricError)
    async def _domain_error(request: Request, exc: RubricError) -> JSONResponse:
        return JSONResponse(status_code=_status_for(exc),
                            content={"error": exc.to_payload()})

    @app.exception_handler(RequestValidationError)
    async def _request_error(request: Request,
                             exc: RequestValidationError) -> JSONResponse:
        kinds = {str(error.get("type", "")) for error in exc.errors()}
        code = "parse_error" if any(k.startswith("json") for k in kinds) \
            else "validation_error"
        return JSONResponse(
            status_code=422,
            content={"error": {"code": code, "message": "invalid request body"}},
        )

    # -- catalogs --------------------------------------------------

    @app.get("/api/catalogs")
    def list_catalogs() -> dict:
        return {"catalogs": [
            {"catalog_id": catalog_id, "version": version}
            for catalog_id, version in store.list_catalogs()
        ]}

    @app.get("/api/catalogs/{catalog_id}")
    def get_catalog(catalog_id: str, version: str | None = Query(None)) -> dict:
        if version is None:
            versions = [v for cid, v in store.list_catalogs() if cid == catalog_id]
            if not versions:
                raise NotFoundError(f"catalog {catalog_id} not found")
            if len(versions) > 1:
                raise ValidationError(
                    f"catalog {catalog_id} has {len(versions)} versions; "
                    f"pass ?version="
                )
            version = versions[0]
        return dump_catalog(store.get_catalog(catalog_id, version))

    @app.post("/api/catalogs", status_code=201)
    def add_catalog(payload: dict = Body(...)) -> dict:
        catalog = load_catalog(payload)
        store.put_catalog(catalog)
        return {"catalog_id": catalog.catalog_id, "version": catalog.version}

    # -- profiles --------------------------------------------------

    @app.get("/api/profiles")
    def list_profiles() -> dict:
        return {"profiles": [profile_document(p) for p in store.list_profiles()]}

    @app.post("/api/profiles", status_code=201)
    def add_profile(payload: dict = Body(...)) -> dict:
        profile_id = _require(payload, "profile_id", str)
        name = _require(payload, "name", str)
        catalog_id = payload.get("catalog_id", "builtin")
        catalog_version = payload.get("catalog_version", "1")
        try:
            catalog = store.get_catalog(catalog_id, catalog_version)
        except NotFoundError as exc:
            raise ValidationError(str(exc))
        profile = evaluation.new_profile(
            catalog, profile_id, name,
            _optional_map(payload, "category_importance"),
            _optional_map(payload, "criterion_importance"),
        )
        if not any(v > 0 for v in profile.category_importance.values()):
            raise AllZeroImportanceError(
                "every category importance is zero; rate at least one "
                "category above 0",
                step="category_weights",
            )
        store.put_profile(profile)
        return profile_document(profile)

    @app.get("/api/profiles/{profile_id}")
    def get_profile(profile_id: str,
                    revision: int | None = Query(None)) -> dict:
        return profile_document(store.get_profile(profile_id, revision))

    @app.patch("/api/profiles/{profile_id}/importance")
    def patch_importance(profile_id: str, payload: dict = Body(...)) -> dict:
        expected = _require(payload, "revision", int)
        profile = store.get_profile(profile_id)
        if profile.revision != expected:
            raise ConflictError(
                f"profile {profile_id} is at revision {profile.revision}, "
                f"request expected {expected}"
            )
        updated = evaluation.update_importance(
            profile,
            category=_optional_map(payload, "category"),
            criterion=_optional_map(payload, "criterion"),
        )
        store.put_profile(updated)
        return profile_document(updated)

    @app.delete("/api/profiles/{profile_id}", status_code=204)
    def delete_profile(profile_id: str) -> Response:
        store.delete_profile(profile_id)
        return Response(status_code=204)

    @app.post("/api/weights")
    def preview_weights(payload: dict = Body(...)) -> dict:
        """Normalized weights for importances the client is still editing."""
        try:
            category_weights, criterion_weights = evaluation.weight_preview(
                _optional_map(payload, "category_importance"),
                _optional_map(payload, "criterion_importance"),
            )
        except AllZeroImportanceError as exc:
            raise AllZeroImportanceError(str(exc), step="category_weights")
        return {
            "category_weights": category_weights,
            "criterion_weights": criterion_weights,
            "display": {
                "category": {
                    cid: engine.format_percent(w)
                    for cid, w in category_weights.items()
                },
                "criterion": {
                    criterion_id: engine.format_percent(weight)
                    for members in criterion_weights.values()
                    for criterion_id, weight in members.items()
                },
            },
        }

    # -- articles --------------------------------------------------

    @app.get("/api/articles")
    def list_articles() -> dict:
        return {"articles": [article_document(a) for a in store.list_articles()]}

    @app.post("/api/articles", status_code=201)
    def add_article(payload: dict = Body(...)) -> dict:
        article = evaluation.ArticleRecord(
            article_id=_require(payload, "article_id", str),
            title=_require(payload, "title", str),
            authors=payload.get("authors"),
            year=payload.get("year"),
            source=payload.get("source"),
            notes=payload.get("notes"),
        )
        store.put_article(article)
        return article_document(article)

    @app.get("/api/articles/{article_id}")
    def get_article(article_id: str) -> dict:
        return article_document(store.get_article(article_id))

    @app.delete("/api/articles/{article_id}", status_code=204)
    def delete_article(article_id: str) -> Response:
        store.delete_article(article_id)
        return Response(status_code=204)

    # -- assessments -----------------------------------------------

    @app.get("/api/assessments")
    def list_assessments(profile: str | None = Query(None),
                         article: str | None = Query(None)) -> dict:
        return {"assessments": [
            assessment_document(a)
            for a in store.list_assessments(profile_id=profile,
                                            article_id=article)
        ]}

    @app.post("/api/assessments", status_code=201)
    def add_assessment(payload: dict = Body(...)) -> dict:
        article_id = _require(payload, "article_id", str)
        profile_id = _require(payload, "profile_id", str)
        try:
            profile = store.get_profile(profile_id)
        except NotFoundError as exc:
            raise ValidationError(str(exc))
        assessment_id = payload.get("assessment_id") or f"{article_id}@{profile_id}"
        assessment = evaluation.new_assessment(assessment_id, article_id, profile)
        store.put_assessment(assessment)
        return assessment_document(assessment)

    @app.get("/api/assessments/{assessment_id}")
    def get_assessment(assessment_id: str) -> dict:
        return assessment_document(store.get_assessment(assessment_id))

    @app.patch("/api/assessments/{assessment_id}/scores")
    def patch_scores(assessment_id: str, payload: dict = Body(...)) -> dict:
        expected = _require(payload, "revision", int)
        assessment = store.get_assessment(assessment_id)
        if assessment.revision != expected:
            raise ConflictError(
                f"assessment {assessment_id} is at revision "
                f"{assessment.revision}, request expected {expected}"
            )
        profile = store.get_profile(assessment.profile_id,
                                    assessment.profile_revision)
        updated = evaluation.update_scores(
            assessment, profile, _optional_map(payload, "scores"))
        store.put_assessment(updated)
        return assessment_document(updated)

    @app.delete("/api/assessments/{assessment_id}", status_code=204)
    def delete_assessment(assessment_id: str) -> Response:
        store.delete_assessment(assessment_id)
        return Response(status_code=204)

    @app.get("/api/assessments/{assessment_id}/rating")
    def get_rating(assessment_id: str,
                   partial: bool = Query(False)) -> dict:
        assessment = store.get_assessment(assessment_id)
        profile = store.get_profile(assessment.profile_id,
                                    assessment.profile_revision)
        if partial:
            return _partial_rating(assessment, profile)
        if assessment.status != evaluation.COMPLETE:
            raise IncompleteAssessmentError(
                f"assessment {assessment_id} is still a draft; pass "
                f"?partial=true for a preview",
                detail={"assessment_id": assessment_id},
            )
        catalog = store.get_catalog(profile.catalog_id, profile.catalog_version)
        report = engine.evaluate(catalog, profile, assessment)
        return {
            "assessment_id": assessment.assessment_id,
            "article_id": assessment.article_id,
            "profile_id": assessment.profile_id,
            "profile_revision": assessment.profile_revision,
            "status": assessment.status,
            "article_rating": report.article_rating,
            "category_scores": report.category_scores,
            "category_weights": report.category_weights,
            "criterion_weights": report.criterion_weights,
            "display": report.display_percentages,
        }

    def _partial_rating(assessment: Assessment, profile: WeightProfile) -> dict:
        scores = evaluation.preview_category_scores(profile, assessment.scores)
        display = {
            category_id: engine.format_percent(score)
            for category_id, score in scores.items()
        }
        rating = None
        if assessment.status == evaluation.COMPLETE:
            weights = engine.normalize(profile.category_importance)
            rating = engine.article_rating(scores, weights)
            display["article_rating"] = engine.format_percent(rating)
        return {
            "assessment_id": assessment.assessment_id,
            "article_id": assessment.article_id,
            "profile_id": assessment.profile_id,
            "profile_revision": assessment.profile_revision,
            "status": assessment.status,
            "article_rating": rating,
            "category_scores": scores,
            "display": display,
        }

    # -- rankings and what-if --------------------------------------

    def _complete_assessments(profile: WeightProfile) -> list[Assessment]:
        return [
            a for a in store.list_assessments(profile_id=profile.profile_id)
            if a.profile_revision == profile.revision
            and a.status == evaluation.COMPLETE
        ]

    @app.get("/api/rankings")
    def get_rankings(profile: str | None = Query(None),
                     revision: int | None = Query(None)) -> dict:
        if profile is None:
            raise ValidationError("the profile query parameter is required")
        loaded = store.get_profile(profile, revision)
        catalog = store.get_catalog(loaded.catalog_id, loaded.catalog_version)
        ranking = evaluation.rank_articles(catalog, loaded,
                                           _complete_assessments(loaded))
        return {
            "profile_id": loaded.profile_id,
            "revision": loaded.revision,
            "ranking": [_ranking_entry(entry) for entry in ranking],
        }

    @app.post("/api/whatif")
    def run_whatif(payload: dict = Body(...)) -> dict:
        profile_id = _require(payload, "profile_id", str)
        profile = store.get_profile(profile_id, payload.get("revision"))
        catalog = store.get_catalog(profile.catalog_id, profile.catalog_version)
        assessments = _complete_assessments(profile)
        scan = payload.get("scan", False)
        raw_deltas = payload.get("deltas") or []
        if scan:
            if raw_deltas:
                raise ValidationError("a stability scan takes no deltas")
            return {
                "profile_id": profile.profile_id,
                "revision": profile.revision,
                "stability": stability_scan(catalog, profile, assessments),
            }
        if not isinstance(raw_deltas, list):
            raise ValidationError("'deltas' must be a list")
        deltas = []
        for item in raw_deltas:
            if not isinstance(item, dict) or "target" not in item:
                raise ValidationError(
                    "each delta needs 'target' and 'new_importance'")
            deltas.append(WhatIfDelta(target=item["target"],
                                      new_importance=item.get("new_importance")))
        report = what_if(catalog, profile, assessments, deltas)
        return {
            "profile_id": profile.profile_id,
            "revision": profile.revision,
            "baseline": [_ranking_entry(e) for e in report.baseline_ranking],
            "perturbed": [_ranking_entry(e) for e in report.perturbed_ranking],
            "rating_deltas": report.rating_deltas,
            "rank_reversals": [list(pair) for pair in report.rank_reversals],
        }

    # -- static vocabulary -----------------------------------------

    @app.get("/api/labels")
    def get_labels() -> dict:
        return {
            "importance": {str(k): v
                           for k, v in evaluation.IMPORTANCE_LABELS.items()},
            "score": {str(k): v for k, v in evaluation.SCORE_LABELS.items()},
        }

    return app


def serve(store_root: str | os.PathLike, addr: str | None = None) -> None:
    """Run the service until interrupted."""
    addr = addr or os.environ.get("RUBRIC_ADDR") or DEFAULT_ADDR
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValidationError(f"bind address {addr!r} is not host:port")
    Store.open(Path(store_root))
    uvicorn.run(create_app(store_root), host=host, port=int(port))

"""File-backed persistence plus CSV interchange.

One JSON document per entity under a root directory:

    meta.json                       schema stamp
    catalogs/<id>/<version>.json
    profiles/<id>/r000001.json      every revision kept; assessments pin them
    articles/<id>.json
    assessments/<id>.json           head revision only

Writes are optimistic: the caller supplies the revision it expects to
create and a concurrent writer loses with ConflictError, never with a
half-written file.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
import tempfile
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import engine
from .catalog import CriteriaCatalog, builtin_catalog, dump_catalog, load_catalog
from .errors import (
    ConflictError,
    MalformedCellError,
    NotFoundError,
    OutOfRangeError,
    ParseError,
    StoreError,
    UnknownColumnError,
    ValidationError,
)
from .evaluation import (
    ArticleRecord,
    Assessment,
    WeightProfile,
    completion_status,
    effective_criteria,
    new_assessment,
    rank_articles,
    set_score,
    validate_profile,
)

# Path components are derived from entity ids, so ids must stay inside
# one directory level.
_SAFE_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._@ -]{0,127}$")


def _require_safe_id(value: str, what: str) -> str:
    if not isinstance(value, str) or not _SAFE_ID.fullmatch(value) or ".." in value:
        raise ValidationError(f"{what} {value!r} is not a usable identifier")
    return value


def _write_json(path: Path, document: dict, *, exclusive: bool) -> None:
    """Publish a document atomically.

    With exclusive=True the write claims the path via os.link, so two
    racing writers cannot both succeed for the same revision.
    """
    payload = json.dumps(document, indent=2, sort_keys=True) + "\n"
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    tmp = Path(tmp_name)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(payload)
            handle.flush()
            os.fsync(handle.fileno())
        if exclusive:
            try:
                os.link(tmp, path)
            except FileExistsError:
                raise ConflictError(f"{path.name} already exists")
        else:
            os.replace(tmp, path)
            return
    finally:
        tmp.unlink(missing_ok=True)


def _read_json(path: Path, what: str) -> dict:
    try:
        raw = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise NotFoundError(f"{what} not found")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise StoreError(f"{path} is not valid JSON: {exc}")


def profile_document(profile: WeightProfile) -> dict:
    return {
        "kind": "profile",
        "profile_id": profile.profile_id,
        "name": profile.name,
        "catalog_id": profile.catalog_id,
        "catalog_version": profile.catalog_version,
        "category_importance": profile.category_importance,
        "criterion_importance": profile.criterion_importance,
        "created_at": profile.created_at,
        "updated_at": profile.updated_at,
        "revision": profile.revision,
    }


def profile_from_document(doc: dict) -> WeightProfile:
    return WeightProfile(
        profile_id=doc["profile_id"],
        name=doc["name"],
        catalog_id=doc["catalog_id"],
        catalog_version=doc["catalog_version"],
        category_importance=dict(doc["category_importance"]),
        criterion_importance=dict(doc["criterion_importance"]),
        created_at=doc["created_at"],
        updated_at=doc["updated_at"],
        revision=doc["revision"],
    )


def article_document(article: ArticleRecord) -> dict:
    return {
        "kind": "article",
        "article_id": article.article_id,
        "title": article.title,
        "authors": article.authors,
        "year": article.year,
        "source": article.source,
        "notes": article.notes,
    }


def article_from_document(doc: dict) -> ArticleRecord:
    return ArticleRecord(
        article_id=doc["article_id"],
        title=doc["title"],
        authors=doc.get("authors"),
        year=doc.get("year"),
        source=doc.get("source"),
        notes=doc.get("notes"),
    )


def assessment_document(assessment: Assessment) -> dict:
    return {
        "kind": "assessment",
        "assessment_id": assessment.assessment_id,
        "article_id": assessment.article_id,
        "profile_id": assessment.profile_id,
        "profile_revision": assessment.profile_revision,
        "scores": assessment.scores,
        "status": assessment.status,
        "updated_at": assessment.updated_at,
        "revision": assessment.revision,
    }


def assessment_from_document(doc: dict) -> Assessment:
    return Assessment(
        assessment_id=doc["assessment_id"],
        article_id=doc["article_id"],
        profile_id=doc["profile_id"],
        profile_revision=doc["profile_revision"],
        scores=dict(doc["scores"]),
        status=doc["status"],
        updated_at=doc["updated_at"],
        revision=doc["revision"],
    )


class Store:
    """A directory of JSON documents with optimistic revision checks."""

    SCHEMA_VERSION = "1"

    def __init__(self, root: Path):
        self.root = Path(root)

    # -- lifecycle ---------------------------------------------------

    @classmethod
    def init(cls, root: str | os.PathLike) -> "Store":
        root = Path(root)
        if (root / "meta.json").exists():
            raise StoreError(f"{root} is already initialized")
        for name in ("catalogs", "profiles", "articles", "assessments"):
            (root / name).mkdir(parents=True, exist_ok=True)
        _write_json(root / "meta.json", {"schema_version": cls.SCHEMA_VERSION},
                    exclusive=False)
        store = cls(root)
        store.put_catalog(builtin_catalog())
        return store

    @classmethod
    def open(cls, root: str | os.PathLike) -> "Store":
        root = Path(root)
        meta_path = root / "meta.json"
        if not meta_path.exists():
            raise StoreError(f"{root} is not an initialized store")
        meta = _read_json(meta_path, "store metadata")
        if meta.get("schema_version") != cls.SCHEMA_VERSION:
            raise StoreError(
                f"unsupported store schema {meta.get('schema_version')!r}"
            )
        return cls(root)

    # -- catalogs ----------------------------------------------------

    def _catalog_path(self, catalog_id: str, version: str) -> Path:
        _require_safe_id(catalog_id, "catalog id")
        _require_safe_id(version, "catalog version")
        return self.root / "catalogs" / catalog_id / f"{version}.json"

    def put_catalog(self, catalog: CriteriaCatalog) -> None:
        path = self._catalog_path(catalog.catalog_id, catalog.version)
        if path.exists():
            raise ConflictError(
                f"catalog {catalog.catalog_id} version {catalog.version} already stored"
            )
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = dump_catalog(catalog)
        doc["kind"] = "catalog"
        _write_json(path, doc, exclusive=True)

    def get_catalog(self, catalog_id: str, version: str) -> CriteriaCatalog:
        doc = _read_json(self._catalog_path(catalog_id, version),
                         f"catalog {catalog_id} version {version}")
        return load_catalog(doc)

    def list_catalogs(self) -> list[tuple[str, str]]:
        found = []
        for path in sorted((self.root / "catalogs").glob("*/*.json")):
            found.append((path.parent.name, path.stem))
        return found

    def delete_catalog(self, catalog_id: str, version: str) -> None:
        path = self._catalog_path(catalog_id, version)
        if not path.exists():
            raise NotFoundError(f"catalog {catalog_id} version {version} not found")
        for profile in self.list_profiles():
            if (profile.catalog_id, profile.catalog_version) == (catalog_id, version):
                raise ValidationError(
                    f"catalog {catalog_id} is referenced by profile "
                    f"{profile.profile_id}"
                )
        path.unlink()

    # -- profiles ----------------------------------------------------

    def _profile_dir(self, profile_id: str) -> Path:
        _require_safe_id(profile_id, "profile id")
        return self.root / "profiles" / profile_id

    @staticmethod
    def _revision_file(revision: int) -> str:
        return f"r{revision:06d}.json"

    def _head_revision(self, profile_id: str) -> int:
        directory = self._profile_dir(profile_id)
        revisions = [int(p.stem[1:]) for p in directory.glob("r*.json")]
        return max(revisions, default=0)

    def put_profile(self, profile: WeightProfile) -> None:
        try:
            catalog = self.get_catalog(profile.catalog_id, profile.catalog_version)
        except NotFoundError as exc:
            raise ValidationError(str(exc))
        violations = validate_profile(catalog, profile)
        if violations:
            raise ValidationError("; ".join(violations))
        head = self._head_revision(profile.profile_id)
        # A profile may be revised in memory before its first put, so only
        # updates are held to the exact next revision.
        if profile.revision < 1 or (head > 0 and profile.revision != head + 1):
            raise ConflictError(
                f"profile {profile.profile_id} is at revision {head}, "
                f"cannot store revision {profile.revision}"
            )
        directory = self._profile_dir(profile.profile_id)
        directory.mkdir(parents=True, exist_ok=True)
        _write_json(directory / self._revision_file(profile.revision),
                    profile_document(profile), exclusive=True)

    def get_profile(self, profile_id: str, revision: int | None = None) -> WeightProfile:
        if revision is None:
            revision = self._head_revision(profile_id)
            if revision == 0:
                raise NotFoundError(f"profile {profile_id} not found")
        path = self._profile_dir(profile_id) / self._revision_file(revision)
        doc = _read_json(path, f"profile {profile_id} revision {revision}")
        return profile_from_document(doc)

    def list_profiles(self) -> list[WeightProfile]:
        profiles = []
        for directory in sorted((self.root / "profiles").glob("*")):
            if directory.is_dir() and any(directory.glob("r*.json")):
                profiles.append(self.get_profile(directory.name))
        return profiles

    def delete_profile(self, profile_id: str) -> None:
        directory = self._profile_dir(profile_id)
        if not any(directory.glob("r*.json")):
            raise NotFoundError(f"profile {profile_id} not found")
        for assessment in self.list_assessments(profile_id=profile_id):
            raise ValidationError(
                f"profile {profile_id} is referenced by assessment "
                f"{assessment.assessment_id}"
            )
        for path in directory.glob("r*.json"):
            path.unlink()
        directory.rmdir()

    # -- articles ----------------------------------------------------

    def _article_path(self, article_id: str) -> Path:
        _require_safe_id(article_id, "article id")
        return self.root / "articles" / f"{article_id}.json"

    def put_article(self, article: ArticleRecord, *, replace: bool = False) -> None:
        path = self._article_path(article.article_id)
        if replace:
            if not path.exists():
                raise NotFoundError(f"article {article.article_id} not found")
            _write_json(path, article_document(article), exclusive=False)
            return
        if path.exists():
            raise ConflictError(f"article {article.article_id} already stored")
        _write_json(path, article_document(article), exclusive=True)

    def get_article(self, article_id: str) -> ArticleRecord:
        doc = _read_json(self._article_path(article_id), f"article {article_id}")
        return article_from_document(doc)

    def list_articles(self) -> list[ArticleRecord]:
        return [
            article_from_document(_read_json(path, "article"))
            for path in sorted((self.root / "articles").glob("*.json"))
        ]

    def delete_article(self, article_id: str) -> None:
        path = self._article_path(article_id)
        if not path.exists():
            raise NotFoundError(f"article {article_id} not found")
        for assessment in self.list_assessments(article_id=article_id):
            raise ValidationError(
                f"article {article_id} is referenced by assessment "
                f"{assessment.assessment_id}"
            )
        path.unlink()

    # -- assessments -------------------------------------------------

    def _assessment_path(self, assessment_id: str) -> Path:
        _require_safe_id(assessment_id, "assessment id")
        return self.root / "assessments" / f"{assessment_id}.json"

    def put_assessment(self, assessment: Assessment) -> None:
        try:
            self.get_article(assessment.article_id)
            profile = self.get_profile(assessment.profile_id,
                                       assessment.profile_revision)
        except NotFoundError as exc:
            raise ValidationError(str(exc))
        expected = completion_status(profile, assessment.scores)
        if assessment.status != expected:
            raise ValidationError(
                f"assessment {assessment.assessment_id} is marked "
                f"{assessment.status} but its scores say {expected}"
            )
        path = self._assessment_path(assessment.assessment_id)
        head = 0
        if path.exists():
            head = _read_json(path, "assessment")["revision"]
        if assessment.revision < 1 or (head > 0 and assessment.revision != head + 1):
            raise ConflictError(
                f"assessment {assessment.assessment_id} is at revision {head}, "
                f"cannot store revision {assessment.revision}"
            )
        if head == 0:
            _write_json(path, assessment_document(assessment), exclusive=True)
        else:
            _write_json(path, assessment_document(assessment), exclusive=False)

    def get_assessment(self, assessment_id: str) -> Assessment:
        doc = _read_json(self._assessment_path(assessment_id),
                         f"assessment {assessment_id}")
        return assessment_from_document(doc)

    def list_assessments(self, profile_id: str | None = None,
                         article_id: str | None = None) -> list[Assessment]:
        found = []
        for path in sorted((self.root / "assessments").glob("*.json")):
            assessment = assessment_from_document(_read_json(path, "assessment"))
            if profile_id is not None and assessment.profile_id != profile_id:
                continue
            if article_id is not None and assessment.article_id != article_id:
                continue
            found.append(assessment)
        return found

    def delete_assessment(self, assessment_id: str) -> None:
        path = self._assessment_path(assessment_id)
        if not path.exists():
            raise NotFoundError(f"assessment {assessment_id} not found")
        path.unlink()


# -- CSV interchange ------------------------------------------------


def export_ratings(catalog: CriteriaCatalog, profile: WeightProfile,
                   assessments: Sequence[Assessment],
                   articles: Mapping[str, ArticleRecord]) -> str:
    """Ranked results as RFC 4180 CSV, one row per article."""
    ranking = rank_articles(catalog, profile, assessments)
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(
        ["article_id", "title"]
        + [f"cat_{category.id}_score" for category in catalog.categories]
        + ["article_rating", "rank"]
    )
    for entry in ranking:
        record = articles.get(entry.article_id)
        if record is None:
            raise ValidationError(f"no article record for {entry.article_id}")
        cells = [entry.article_id, record.title]
        for category in catalog.categories:
            score = entry.category_scores.get(category.id)
            cells.append("" if score is None else engine.format_percent(score))
        cells.append(engine.format_percent(entry.article_rating))
        cells.append(str(entry.rank))
        writer.writerow(cells)
    return buffer.getvalue()


def _effective_columns(profile: WeightProfile) -> list[str]:
    columns = []
    for criterion_ids in effective_criteria(profile).values():
        columns.extend(criterion_ids)
    return columns


def export_assessments(catalog: CriteriaCatalog, profile: WeightProfile,
                       assessments: Iterable[Assessment]) -> str:
    """Raw scores as CSV: one column per effective criterion.

    The inverse of import_assessment_csv, so draft assessments are
    exported too (their unscored cells stay empty).
    """
    del catalog
    columns = _effective_columns(profile)
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["article_id"] + columns)
    for assessment in sorted(assessments, key=lambda a: a.article_id):
        cells = [assessment.article_id]
        for criterion_id in columns:
            value = assessment.scores.get(criterion_id)
            cells.append("" if value is None else str(value))
        writer.writerow(cells)
    return buffer.getvalue()


def import_assessment_csv(document: str, catalog: CriteriaCatalog,
                          profile: WeightProfile) -> list[Assessment]:
    """Parse a score sheet into fresh assessments; nothing is persisted.

    Cells are 1..5, "NA", or empty. Errors name the offending row and
    column so a spreadsheet user can find them.
    """
    del catalog
    rows = list(csv.reader(io.StringIO(document)))
    if not rows or not rows[0]:
        raise ParseError("the document has no header row")
    header = rows[0]
    if header[0] != "article_id":
        raise ParseError('the first column must be "article_id"')
    effective = set(_effective_columns(profile))
    columns = header[1:]
    for column in columns:
        if column not in effective:
            raise UnknownColumnError(
                f"column {column!r} is not an effective criterion of "
                f"profile {profile.profile_id}"
            )
    if len(set(columns)) != len(columns):
        raise ParseError("duplicate criterion columns")

    assessments = []
    for row_number, row in enumerate(rows[1:], start=1):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"row {row_number} has {len(row)} cells, "
                             f"expected {len(header)}")
        article_id = row[0].strip()
        if not article_id:
            raise ParseError(f"row {row_number} has no article id")
        assessment = new_assessment(f"{article_id}@{profile.profile_id}",
                                    article_id, profile)
        for column, cell in zip(columns, row[1:]):
            cell = cell.strip()
            if not cell:
                continue
            if cell == engine.NOT_APPLICABLE:
                assessment = set_score(assessment, profile, column,
                                       engine.NOT_APPLICABLE)
                continue
            try:
                value = int(cell)
            except ValueError:
                raise MalformedCellError(
                    f"row {row_number}, column {column}: {cell!r} is not "
                    f'a score, "NA", or an empty cell'
                )
            try:
                assessment = set_score(assessment, profile, column, value)
            except OutOfRangeError:
                raise MalformedCellError(
                    f"row {row_number}, column {column}: {cell!r} is outside 1..5"
                )
        assessments.append(assessment)
    return assessments

"""File store: revisions, referential integrity, atomicity, CSV interchange."""

import csv
import hashlib
import io
import json
from pathlib import Path

import pytest

from rubric import evaluation
from rubric.catalog import builtin_catalog, dump_catalog, load_catalog
from rubric.errors import (
    ConflictError,
    IncompleteAssessmentError,
    MalformedCellError,
    NotFoundError,
    StoreError,
    UnknownColumnError,
    ValidationError,
)
from rubric.evaluation import ArticleRecord
from rubric.store import (
    Store,
    export_assessments,
    export_ratings,
    import_assessment_csv,
)


@pytest.fixture()
def store(tmp_path):
    return Store.init(tmp_path / "data")


def _store_digest(root: Path) -> str:
    digest = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if path.is_file():
            digest.update(str(path.relative_to(root)).encode())
            digest.update(path.read_bytes())
    return digest.hexdigest()


class TestStoreLifecycle:
    def test_init_writes_schema_version(self, tmp_path):
        store = Store.init(tmp_path / "data")
        meta = json.loads((tmp_path / "data" / "meta.json").read_text())
        assert meta["schema_version"] == store.SCHEMA_VERSION

    def test_init_refuses_an_initialized_directory(self, tmp_path):
        Store.init(tmp_path / "data")
        with pytest.raises(StoreError):
            Store.init(tmp_path / "data")

    def test_open_requires_initialization(self, tmp_path):
        with pytest.raises(StoreError):
            Store.open(tmp_path / "missing")

    def test_unknown_schema_version_rejected(self, tmp_path):
        Store.init(tmp_path / "data")
        (tmp_path / "data" / "meta.json").write_text('{"schema_version": "99"}')
        with pytest.raises(StoreError):
            Store.open(tmp_path / "data")

    def test_builtin_catalog_available_after_init(self, store):
        assert store.get_catalog("builtin", "1") == builtin_catalog()
        assert ("builtin", "1") in store.list_catalogs()


class TestProfilePersistence:
    def test_round_trip(self, store, sample_profile):
        store.put_profile(sample_profile)
        assert store.get_profile(sample_profile.profile_id) == sample_profile

    def test_put_requires_next_revision(self, store, catalog):
        profile = evaluation.new_profile(catalog, "p", "staged")
        store.put_profile(profile)
        with pytest.raises(ConflictError):
            store.put_profile(profile)

    def test_revision_gap_is_a_conflict(self, store, catalog):
        profile = evaluation.new_profile(catalog, "p", "staged")
        store.put_profile(profile)
        r3 = evaluation.set_category_importance(
            evaluation.set_category_importance(profile, "1", 4), "2", 2
        )
        assert r3.revision == 3
        with pytest.raises(ConflictError):
            store.put_profile(r3)

    def test_history_is_retained(self, store, catalog):
        r1 = evaluation.new_profile(catalog, "p", "staged")
        store.put_profile(r1)
        r2 = evaluation.set_category_importance(r1, "1", 4)
        store.put_profile(r2)
        assert store.get_profile("p").revision == 2
        assert store.get_profile("p", revision=1) == r1

    def test_unknown_catalog_is_a_validation_error(self, store, catalog):
        profile = evaluation.new_profile(catalog, "p", "staged")
        orphan = evaluation.WeightProfile(
            profile_id="p", name="staged", catalog_id="nowhere", catalog_version="9",
            category_importance=profile.category_importance,
            criterion_importance=profile.criterion_importance,
            created_at=profile.created_at, updated_at=profile.updated_at, revision=1,
        )
        with pytest.raises(ValidationError):
            store.put_profile(orphan)

    def test_get_missing_profile(self, store):
        with pytest.raises(NotFoundError):
            store.get_profile("ghost")

    def test_failed_put_leaves_bytes_identical(self, store, sample_profile):
        store.put_profile(sample_profile)
        before = _store_digest(store.root)
        with pytest.raises(ConflictError):
            store.put_profile(sample_profile)
        assert _store_digest(store.root) == before


class TestArticlePersistence:
    def test_round_trip(self, store):
        article = ArticleRecord(article_id="a1", title="A title, with comma",
                                authors="Someone", year=2024)
        store.put_article(article)
        assert store.get_article("a1") == article

    def test_duplicate_id_conflicts(self, store):
        store.put_article(ArticleRecord(article_id="a1", title="first"))
        with pytest.raises(ConflictError):
            store.put_article(ArticleRecord(article_id="a1", title="second"))

    def test_replace_is_explicit(self, store):
        store.put_article(ArticleRecord(article_id="a1", title="first"))
        store.put_article(ArticleRecord(article_id="a1", title="second"), replace=True)
        assert store.get_article("a1").title == "second"

    def test_listing_is_sorted(self, store):
        store.put_article(ArticleRecord(article_id="b", title="second"))
        store.put_article(ArticleRecord(article_id="a", title="first"))
        assert [a.article_id for a in store.list_articles()] == ["a", "b"]


class TestAssessmentPersistence:
    def _stored_fixture(self, store, sample_profile, sample_assessment):
        store.put_profile(sample_profile)
        store.put_article(ArticleRecord(article_id="a1", title="Fixture article"))
        store.put_assessment(sample_assessment)

    def test_round_trip(self, store, sample_profile, sample_assessment):
        self._stored_fixture(store, sample_profile, sample_assessment)
        assert store.get_assessment(sample_assessment.assessment_id) == sample_assessment

    def test_missing_article_blocks_put(self, store, sample_profile, sample_assessment):
        store.put_profile(sample_profile)
        with pytest.raises(ValidationError):
            store.put_assessment(sample_assessment)

    def test_missing_profile_revision_blocks_put(self, store, sample_profile,
                                                 sample_assessment):
        store.put_profile(sample_profile)
        store.put_article(ArticleRecord(article_id="a1", title="Fixture article"))
        stale = evaluation.Assessment(
            assessment_id="x", article_id="a1",
            profile_id=sample_profile.profile_id, profile_revision=99,
            scores=sample_assessment.scores, status=sample_assessment.status,
            updated_at=sample_assessment.updated_at, revision=1,
        )
        with pytest.raises(ValidationError):
            store.put_assessment(stale)

    def test_stale_revision_conflicts(self, store, sample_profile, sample_assessment):
        self._stored_fixture(store, sample_profile, sample_assessment)
        with pytest.raises(ConflictError):
            store.put_assessment(sample_assessment)

    def test_update_with_next_revision(self, store, sample_profile, sample_assessment):
        self._stored_fixture(store, sample_profile, sample_assessment)
        updated = evaluation.set_score(sample_assessment, sample_profile, "2.2", 3)
        store.put_assessment(updated)
        assert store.get_assessment(sample_assessment.assessment_id).scores["2.2"] == 3

    def test_list_filters_by_profile(self, store, sample_profile, sample_assessment):
        self._stored_fixture(store, sample_profile, sample_assessment)
        assert store.list_assessments(profile_id=sample_profile.profile_id) != []
        assert store.list_assessments(profile_id="other") == []


class TestReferentialIntegrity:
    def test_article_with_assessments_cannot_be_deleted(self, store, sample_profile,
                                                        sample_assessment):
        store.put_profile(sample_profile)
        store.put_article(ArticleRecord(article_id="a1", title="Fixture article"))
        store.put_assessment(sample_assessment)
        with pytest.raises(ValidationError):
            store.delete_article("a1")
        store.delete_assessment(sample_assessment.assessment_id)
        store.delete_article("a1")

    def test_profile_with_assessments_cannot_be_deleted(self, store, sample_profile,
                                                        sample_assessment):
        store.put_profile(sample_profile)
        store.put_article(ArticleRecord(article_id="a1", title="Fixture article"))
        store.put_assessment(sample_assessment)
        with pytest.raises(ValidationError):
            store.delete_profile(sample_profile.profile_id)

    def test_catalog_with_profiles_cannot_be_deleted(self, store, sample_profile):
        store.put_profile(sample_profile)
        with pytest.raises(ValidationError):
            store.delete_catalog("builtin", "1")

    def test_delete_missing_entities(self, store):
        with pytest.raises(NotFoundError):
            store.delete_article("ghost")
        with pytest.raises(NotFoundError):
            store.delete_assessment("ghost")


class TestCustomCatalogPersistence:
    def test_round_trip(self, store):
        doc = dump_catalog(builtin_catalog())
        doc["catalog_id"] = "custom"
        doc["version"] = "2026-08"
        custom = load_catalog(doc)
        store.put_catalog(custom)
        assert store.get_catalog("custom", "2026-08") == custom

    def test_same_id_and_version_conflicts(self, store):
        with pytest.raises(ConflictError):
            store.put_catalog(builtin_catalog())


class TestRatingsCsv:
    def test_fixture_row(self, catalog, sample_profile, sample_assessment):
        document = export_ratings(
            catalog, sample_profile, [sample_assessment],
            {"a1": ArticleRecord(article_id="a1", title="Fixture article")},
        )
        rows = list(csv.reader(io.StringIO(document)))
        assert rows[0] == (
            ["article_id", "title"]
            + [f"cat_{i}_score" for i in range(1, 12)]
            + ["article_rating", "rank"]
        )
        assert rows[1][0] == "a1"
        assert rows[1][2] == "80.00%"
        assert rows[1][3] == "66.67%"
        assert rows[1][4] == ""
        assert rows[1][-2] == "75.56%"
        assert rows[1][-1] == "1"

    def test_zero_articles_yields_header_only(self, catalog, sample_profile):
        document = export_ratings(catalog, sample_profile, [], {})
        rows = list(csv.reader(io.StringIO(document)))
        assert len(rows) == 1

    def test_comma_in_title_round_trips(self, catalog, sample_profile, sample_assessment):
        document = export_ratings(
            catalog, sample_profile, [sample_assessment],
            {"a1": ArticleRecord(article_id="a1", title="Clarity, and more")},
        )
        rows = list(csv.reader(io.StringIO(document)))
        assert rows[1][1] == "Clarity, and more"

    def test_draft_assessment_rejected(self, catalog, sample_profile):
        draft = evaluation.new_assessment("d", "d", sample_profile)
        with pytest.raises(IncompleteAssessmentError):
            export_ratings(catalog, sample_profile, [draft], {})


class TestAssessmentCsv:
    def test_export_schema(self, catalog, sample_profile, sample_assessment):
        document = export_assessments(catalog, sample_profile, [sample_assessment])
        rows = list(csv.reader(io.StringIO(document)))
        assert rows[0] == ["article_id", "1.1", "2.1", "2.2"]
        assert rows[1] == ["a1", "4", "5", "2"]

    def test_import_reproduces_the_fixture(self, catalog, sample_profile):
        document = "article_id,1.1,2.1,2.2\r\na1,4,5,2\r\n"
        drafts = import_assessment_csv(document, catalog, sample_profile)
        assert len(drafts) == 1
        assessment = drafts[0]
        assert assessment.article_id == "a1"
        assert assessment.scores == {"1.1": 4, "2.1": 5, "2.2": 2}
        assert assessment.status == evaluation.COMPLETE
        assert assessment.profile_revision == sample_profile.revision

    def test_round_trip_is_structurally_equal(self, catalog, sample_profile,
                                              sample_assessment):
        document = export_assessments(catalog, sample_profile, [sample_assessment])
        drafts = import_assessment_csv(document, catalog, sample_profile)
        again = drafts[0]
        assert again.article_id == sample_assessment.article_id
        assert again.profile_id == sample_assessment.profile_id
        assert again.profile_revision == sample_assessment.profile_revision
        assert again.scores == sample_assessment.scores
        assert again.status == sample_assessment.status

    def test_na_cell_maps_to_the_marker(self, catalog, sample_profile):
        document = "article_id,1.1,2.1,2.2\r\na1,4,5,NA\r\n"
        drafts = import_assessment_csv(document, catalog, sample_profile)
        assert drafts[0].scores["2.2"] == "NA"
        assert drafts[0].status == evaluation.COMPLETE

    def test_empty_cells_stay_unscored(self, catalog, sample_profile):
        document = "article_id,1.1,2.1,2.2\r\na1,4,,\r\n"
        drafts = import_assessment_csv(document, catalog, sample_profile)
        assert drafts[0].scores == {"1.1": 4}
        assert drafts[0].status == evaluation.DRAFT

    def test_out_of_range_cell_names_row_and_column(self, catalog, sample_profile):
        document = "article_id,1.1,2.1,2.2\r\na1,6,5,2\r\n"
        with pytest.raises(MalformedCellError) as excinfo:
            import_assessment_csv(document, catalog, sample_profile)
        message = str(excinfo.value)
        assert "1.1" in message
        assert "row 1" in message

    def test_non_numeric_cell_is_malformed(self, catalog, sample_profile):
        document = "article_id,1.1,2.1,2.2\r\na1,great,5,2\r\n"
        with pytest.raises(MalformedCellError):
            import_assessment_csv(document, catalog, sample_profile)

    def test_ineffective_column_is_unknown(self, catalog, sample_profile):
        document = "article_id,1.1,2.1,2.2,2.3\r\na1,4,5,2,1\r\n"
        with pytest.raises(UnknownColumnError) as excinfo:
            import_assessment_csv(document, catalog, sample_profile)
        assert "2.3" in str(excinfo.value)

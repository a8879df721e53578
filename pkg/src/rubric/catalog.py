"""Criteria framework: categories, criteria, and the built-in catalog.

Catalogs are immutable after construction. The built-in catalog ships the
published 11-category / 33-criterion framework; custom catalogs may define
any category tree as long as criterion ids extend their category id in
dotted form ("<category>.<n>").
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError, ValidationError

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class Criterion:
    id: str
    prompt: str
    category_id: str


@dataclass(frozen=True)
class Category:
    id: str
    name: str
    criteria: tuple[Criterion, ...]


@dataclass(frozen=True)
class CriteriaCatalog:
    catalog_id: str
    version: str
    categories: tuple[Category, ...]

    def find_category(self, category_id: str) -> Category | None:
        for category in self.categories:
            if category.id == category_id:
                return category
        return None

    def find_criterion(self, criterion_id: str) -> Criterion | None:
        for criterion in self.iter_criteria():
            if criterion.id == criterion_id:
                return criterion
        return None

    def iter_criteria(self) -> Iterator[Criterion]:
        for category in self.categories:
            yield from category.criteria


# =============================================================================
# Built-in framework (11 categories, 33 criteria)
# =============================================================================
# The sole Objectiveness criterion is canonically "3.1"; some renderings of
# the framework mislabel it "03.3".

_BUILTIN_FRAMEWORK: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("Clarity", (
        "How simple is the article narrative (i.e. avoiding unnecessary words, "
        "jargon, technical language, and the extended used of citations)?",
        "To what extent does the article use a top down structure where the "
        "initial paragraph provides the setting and main issues of the research "
        "article?",
    )),
    ("Succinctness", (
        "To what extent does the article length match the effort required by "
        "students, as stipulated by the course, to allow them to conduct an "
        "optimal analysis of it?",
        "To what extent does the article provide sufficient information to allow "
        "students to develop coherent conclusions?",
        "To what extent does the article focus on the findings, rather than the "
        "inputs such as the literature review or the research methodology?",
    )),
    ("Objectiveness", (
        "To what extent is the article written in a neutral, unbiased manner, "
        "allowing students to develop their own opinion?",
    )),
    ("Realism", (
        "To what extent does the article incorporate real world examples?",
        "How authentic does the article seem given the level of evidence and "
        "facts presented?",
        "To what extent does the article cite participants to increase its "
        "realism?",
    )),
    ("Timeliness", (
        "To what extent are the research article's findings up-to-date?",
    )),
    ("Teaching friendliness", (
        "To what extent has the article been previously assessed for use in "
        "other teaching programs?",
    )),
    ("Depth", (
        "To what extent does the article provide multiple perspectives from "
        "different stakeholders?",
        "To what extent does the article provide distractors (non-pertinent "
        "features) to challenge students' analytical skills?",
        "To what extent does the complexity of data (qualitative and "
        "qualitative) presented by the article help to develop students' "
        "problem solving skills?",
        "To what extent does the article contain teaching aids to support "
        "student learning?",
        "To what extent does the article let students make their own decisions "
        "by not providing a diagnosis of the problem?",
        "To what extent does the article provide feedback on the possible "
        "actions of students?",
        "To what extent does the article synthesize an existing body of "
        "research for the area of study?",
    )),
    ("Engagement", (
        "To what extent does the article's storyline have a 'hook' to engage "
        "students?",
        "To what extent does the article have an engaging storyline?",
        "To what extent does the article include human factors such as "
        "cultural, socio-political factors, and ethical issues?",
        "To what extent does the article include controversy, contrast, "
        "conflict, dilemma, or other dramatic elements?",
        "To what extent does the article gradually disclose the content?",
        "To what extent does the article allow students to 'learn by doing'?",
    )),
    ("Relevance to practice", (
        "To what extent does the article describe current practitioner issues?",
        "To what extent does the article contribute with an implementable "
        "approach to resolve a practical issue?",
        "To what extent does the article stimulate a reader's casual "
        "assumptions by identifying emerging trends, structural changes or "
        "paradigms?",
        "To what extent does the article reflect collaboration between "
        "researchers and practitioners?",
    )),
    ("Teaching objectives focus", (
        "To what extent is the article applicable to the subject area?",
        "To what extent does the article fit into the teaching objectives of "
        "the subject?",
        "To what extent does the difficulty of the article match the ability "
        "of students in the subject?",
    )),
    ("Thinking skills development", (
        "To what extent does the article enable students to develop problem "
        "solving skills?",
        "To what extent does the article enable students to develop critical "
        "thinking skills?",
    )),
)


def builtin_catalog() -> CriteriaCatalog:
    """The shipped framework; structurally identical on every call."""
    categories = []
    for index, (name, prompts) in enumerate(_BUILTIN_FRAMEWORK, start=1):
        cat_id = str(index)
        criteria = tuple(
            Criterion(id=f"{cat_id}.{k}", prompt=prompt, category_id=cat_id)
            for k, prompt in enumerate(prompts, start=1)
        )
        categories.append(Category(id=cat_id, name=name, criteria=criteria))
    return CriteriaCatalog(catalog_id="builtin", version="1", categories=tuple(categories))


def validate_catalog(catalog: CriteriaCatalog) -> list[str]:
    """All invariant violations, each naming the offending id; empty means ok."""
    violations = []
    if not str(catalog.catalog_id).strip():
        violations.append("catalog_id is empty")
    if not str(catalog.version).strip():
        violations.append(f"catalog {catalog.catalog_id!r}: version is empty")

    seen_categories: set[str] = set()
    seen_criteria: set[str] = set()
    for category in catalog.categories:
        if not category.id.strip():
            violations.append("category with empty id")
            continue
        if category.id in seen_categories:
            violations.append(f"duplicate category id {category.id!r}")
        seen_categories.add(category.id)
        if not category.name.strip():
            violations.append(f"category {category.id!r}: name is empty")
        if not category.criteria:
            violations.append(f"category {category.id!r}: holds no criteria")
        for criterion in category.criteria:
            if criterion.id in seen_criteria:
                violations.append(f"duplicate criterion id {criterion.id!r}")
            seen_criteria.add(criterion.id)
            if not criterion.prompt.strip():
                violations.append(f"criterion {criterion.id!r}: prompt is empty")
            if criterion.category_id != category.id:
                violations.append(
                    f"criterion {criterion.id!r}: category_id "
                    f"{criterion.category_id!r} does not match {category.id!r}"
                )
            prefix = criterion.id.rsplit(".", 1)[0]
            if prefix != category.id:
                violations.append(
                    f"criterion {criterion.id!r}: id does not extend "
                    f"category id {category.id!r}"
                )
    return violations


def dump_catalog(catalog: CriteriaCatalog) -> dict:
    """Plain-dict document in the catalog file schema."""
    return {
        "schema_version": SCHEMA_VERSION,
        "catalog_id": catalog.catalog_id,
        "version": catalog.version,
        "categories": [
            {
                "id": category.id,
                "name": category.name,
                "criteria": [
                    {"id": criterion.id, "prompt": criterion.prompt}
                    for criterion in category.criteria
                ],
            }
            for category in catalog.categories
        ],
    }


def load_catalog(document: str | bytes | dict) -> CriteriaCatalog:
    """Parse and validate a catalog document (JSON text or parsed dict).

    Raises:
        ParseError: the document is not well-formed per the file schema.
        ValidationError: the parsed catalog violates an invariant.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"catalog document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ParseError("catalog document must be a JSON object")

    try:
        categories = []
        for raw_category in document["categories"]:
            cat_id = str(raw_category["id"])
            criteria = tuple(
                Criterion(id=str(raw["id"]), prompt=str(raw["prompt"]), category_id=cat_id)
                for raw in raw_category["criteria"]
            )
            categories.append(
                Category(id=cat_id, name=str(raw_category["name"]), criteria=criteria)
            )
        catalog = CriteriaCatalog(
            catalog_id=str(document["catalog_id"]),
            version=str(document["version"]),
            categories=tuple(categories),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"catalog document is missing or mistypes a field: {exc}") from exc

    violations = validate_catalog(catalog)
    if violations:
        raise ValidationError(
            "catalog document violates invariants: " + "; ".join(violations),
            detail={"violations": violations},
        )
    return catalog

"""Error taxonomy shared across the package.

Every failure carries a stable machine-readable ``code``; the HTTP layer and
the CLI print codes verbatim, so they form a closed, documented set. Engine
failures additionally carry the ``step`` of the pipeline they arose in.
"""

from __future__ import annotations


class RubricError(Exception):
    """Base class for all domain failures."""

    code = "error"

    def __init__(self, message: str, *, step: str | None = None,
                 detail: dict | None = None):
        super().__init__(message)
        self.step = step
        self.detail = dict(detail) if detail else {}

    def to_payload(self) -> dict:
        """Shape shared by the HTTP error body and ``--json`` CLI output."""
        payload: dict = {"code": self.code, "message": str(self)}
        detail = dict(self.detail)
        if self.step is not None:
            detail["step"] = self.step
        if detail:
            payload["detail"] = detail
        return payload


class AllZeroImportanceError(RubricError):
    """Nothing selected at a normalization level, so weights are undefined."""

    code = "all_zero_importance"


class MissingScoreError(RubricError):
    """A criterion with positive weight has no numeric score."""

    code = "missing_score"


class MissingCategoryScoreError(RubricError):
    """A category with positive weight has no category score."""

    code = "missing_category_score"


class OutOfRangeError(RubricError):
    """Importance outside 0..5, or score outside 1..5."""

    code = "out_of_range"


class UnknownCategoryError(RubricError):
    code = "unknown_category"


class UnknownCriterionError(RubricError):
    code = "unknown_criterion"


class UnknownTargetError(RubricError):
    """A what-if target that is neither a category nor a criterion."""

    code = "unknown_target"


class IneffectiveCriterionError(RubricError):
    """Scoring a criterion the profile excludes (importance 0 at either level)."""

    code = "ineffective_criterion"


class IncompleteAssessmentError(RubricError):
    code = "incomplete_assessment"


class MixedProfileError(RubricError):
    """Assessments from different profile revisions cannot be ranked together."""

    code = "mixed_profile"


class InvalidPerturbationError(RubricError):
    """A what-if delta that would leave the profile unusable."""

    code = "invalid_perturbation"


class ParseError(RubricError):
    code = "parse_error"


class ValidationError(RubricError):
    code = "validation_error"


class MalformedCellError(RubricError):
    """A CSV cell that is not 1..5, "NA", or empty."""

    code = "malformed_cell"


class UnknownColumnError(RubricError):
    code = "unknown_column"


class NotFoundError(RubricError):
    code = "not_found"


class ConflictError(RubricError):
    """Optimistic revision check failed; someone else wrote first."""

    code = "conflict"


class StoreError(RubricError):
    """Store directory missing, corrupt, or from an unrecognized schema."""

    code = "store_error"

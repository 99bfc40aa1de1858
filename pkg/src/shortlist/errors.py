"""Exception hierarchy shared by the engine, the HTTP service, and the CLI.

Every error carries a machine-readable ``code`` (used verbatim in API
payloads) and an HTTP status the service maps it to.  ``details`` holds
structured context such as the offending product or attribute id.
"""

from __future__ import annotations

from typing import Any


class ShortlistError(Exception):
    """Base class for all engine errors."""

    code = "ENGINE_ERROR"
    http_status = 400

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_payload(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


# -- catalog ---------------------------------------------------------------

class MalformedInput(ShortlistError):
    code = "MALFORMED_INPUT"


class SchemaViolation(ShortlistError):
    code = "SCHEMA_VIOLATION"


class UnknownAttribute(ShortlistError):
    code = "UNKNOWN_ATTRIBUTE"
    http_status = 404


class NoData(ShortlistError):
    code = "NO_DATA"
    http_status = 404


class UnknownProduct(ShortlistError):
    code = "UNKNOWN_PRODUCT"
    http_status = 404


# -- wheel / filtering -------------------------------------------------------

class UnknownNode(ShortlistError):
    code = "UNKNOWN_NODE"
    http_status = 404


class UnknownLabel(ShortlistError):
    code = "UNKNOWN_LABEL"


class NonComparableAttribute(ShortlistError):
    code = "NON_COMPARABLE_ATTRIBUTE"


class SameAttribute(ShortlistError):
    code = "SAME_ATTRIBUTE"


class EmptyAttrs(ShortlistError):
    code = "EMPTY_ATTRS"


# -- session ----------------------------------------------------------------

class UnknownVariant(ShortlistError):
    code = "UNKNOWN_VARIANT"
    http_status = 404


class UnknownSession(ShortlistError):
    code = "UNKNOWN_SESSION"
    http_status = 404


class NotInFilteredSet(ShortlistError):
    code = "NOT_IN_FILTERED_SET"
    http_status = 409


class BucketFull(ShortlistError):
    code = "BUCKET_FULL"
    http_status = 409


class EmptyBucket(ShortlistError):
    code = "EMPTY_BUCKET"
    http_status = 409


class MissingValue(ShortlistError):
    code = "MISSING_VALUE"


class IllegalTransition(ShortlistError):
    code = "ILLEGAL_TRANSITION"
    http_status = 409


class NotInBucket(ShortlistError):
    code = "NOT_IN_BUCKET"
    http_status = 409


class WrongStage(ShortlistError):
    code = "WRONG_STAGE"
    http_status = 409


# -- experiment / stats -------------------------------------------------------

class UnknownTask(ShortlistError):
    code = "UNKNOWN_TASK"
    http_status = 404


class UnknownTrial(ShortlistError):
    code = "UNKNOWN_TRIAL"
    http_status = 404


class IncompleteTrial(ShortlistError):
    code = "INCOMPLETE_TRIAL"
    http_status = 409


class InvalidSurvey(ShortlistError):
    code = "INVALID_SURVEY"


class WrongInstrument(ShortlistError):
    code = "WRONG_INSTRUMENT"


class EmptyAnswers(ShortlistError):
    code = "EMPTY_ANSWERS"


class MixedInstruments(ShortlistError):
    code = "MIXED_INSTRUMENTS"


class EmptySample(ShortlistError):
    code = "EMPTY_SAMPLE"


class InsufficientN(ShortlistError):
    code = "INSUFFICIENT_N"


class ModeMismatch(ShortlistError):
    code = "MODE_MISMATCH"


class CountExceedsN(ShortlistError):
    code = "COUNT_EXCEEDS_N"

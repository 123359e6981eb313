"""Exception types shared across the engine.

Conditions that the caller is expected to handle in-band (empty VAD input,
missing client speech in an interval, flat reactivity carry-over) are not
exceptions; only genuine contract violations raise.
"""

from __future__ import annotations


class CounselkitError(Exception):
    """Base class for all engine errors."""


# --- PPG signal path ---------------------------------------------------------

class EmptyWindowError(CounselkitError):
    """A PPG window contained no samples."""


class FlatSignalError(CounselkitError):
    """No pulse peaks were found in a full window."""


class InsufficientBeatsError(CounselkitError):
    """Fewer than two inter-beat intervals survived artifact gating."""


class RateMismatchWarning(UserWarning):
    """Observed sample rate deviates from the declared rate beyond tolerance."""


# --- speech frontend ---------------------------------------------------------

class KTooLargeError(CounselkitError):
    """Requested more clusters than there are points."""


# --- classifier zoo ----------------------------------------------------------

class TooFewSamplesError(CounselkitError):
    """Dataset too small for the requested split."""


class SingleClassTrainSetError(CounselkitError):
    """Training set contains only one label."""


class NonFiniteFeatureError(CounselkitError):
    """A feature vector contains NaN or infinity."""


class DimensionMismatchError(CounselkitError):
    """Feature vector length differs from what the model was trained on."""


class EmptyEvalSetError(CounselkitError):
    """Evaluation set is empty."""


# --- fusion ------------------------------------------------------------------

class InvalidDistributionError(CounselkitError):
    """Probability vector is negative or does not sum to one."""


class NegativeMuError(CounselkitError):
    """Reactivity mean must be non-negative."""


# --- session runtime ---------------------------------------------------------

class DuplicateSessionError(CounselkitError):
    """Session id already exists in the store."""


class ConsentViolationError(CounselkitError):
    """Requested modality or input is not covered by the client's consent."""


class SessionClosedError(CounselkitError):
    """Operation attempted on an ended session."""


class CorruptLogError(CounselkitError):
    """Event log has a sequence gap or an unreadable record."""


class InputOutOfOrderError(CounselkitError):
    """Interval input arrived for an already-ticked interval."""


# --- reporting / follow-up ---------------------------------------------------

class EmptyTranscriptError(CounselkitError):
    """Report generation needs at least one transcript turn."""


class GeneratorUnavailableError(CounselkitError):
    """Configured text generator could not be reached."""


class SchemaParseFailureError(CounselkitError):
    """Generator output did not match the five-section report schema."""


class QueueFullError(CounselkitError):
    """Outbox reached its bound; new messages are rejected."""

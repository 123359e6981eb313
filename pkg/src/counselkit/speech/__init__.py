"""Speech pipeline: VAD, speaker clustering, attribution, emotion events."""

from .attribute import attribute_speakers, cosine_distance
from .cluster import kmeanspp_cluster
from .emotion import AnnotationProvider, emit_speech_emotion
from .features import extract_frame_features
from .io import load_profiles, read_frames_jsonl, save_profiles, write_frames_jsonl
from .types import (
    ROLE_CLIENT,
    ROLE_COUNSELOR,
    ROLE_UNKNOWN,
    AudioFrameFeatures,
    CounselorProfile,
    SpeechEmotionEvent,
    SpeechSegment,
)
from .vad import detect_voice_activity, vad_threshold

__all__ = [
    "ROLE_CLIENT",
    "ROLE_COUNSELOR",
    "ROLE_UNKNOWN",
    "AnnotationProvider",
    "AudioFrameFeatures",
    "CounselorProfile",
    "SpeechEmotionEvent",
    "SpeechSegment",
    "attribute_speakers",
    "cosine_distance",
    "detect_voice_activity",
    "emit_speech_emotion",
    "extract_frame_features",
    "kmeanspp_cluster",
    "load_profiles",
    "read_frames_jsonl",
    "save_profiles",
    "vad_threshold",
    "write_frames_jsonl",
]

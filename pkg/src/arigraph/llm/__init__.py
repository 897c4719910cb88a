from arigraph.llm.models import (
    CallRecord,
    DecodeParams,
    FixtureMissing,
    LanguageModel,
    LMError,
    LMTransportError,
    OpenAIChatLM,
    ScriptedLM,
    TranscriptLM,
    Usage,
    write_fixtures,
)

__all__ = [
    "CallRecord", "DecodeParams", "FixtureMissing", "LanguageModel", "LMError", "LMTransportError",
    "OpenAIChatLM", "ScriptedLM", "TranscriptLM", "Usage", "write_fixtures",
]

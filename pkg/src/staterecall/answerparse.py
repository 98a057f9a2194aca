"""Extract the predicted option letter from raw model output.

The parser is a total function: malformed output never raises, it produces an
``Unparsed`` outcome with the most specific reason available.  That outcome
feeds the parsed-rate side of the metrics, so the classification rules here
ARE the definition of "successfully parsed" everywhere downstream.

Pipeline: strip reasoning spans (an unclosed open tag truncates the rest),
scan what remains for well-formed JSON objects, take the last one with a
top-level "answer" key, and resolve its value against the option letters
first, then (optionally) the exact option texts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

DEFAULT_REASONING_DELIMITERS: tuple[tuple[str, str], ...] = (("<think>", "</think>"),)


class ParseStatus(str, Enum):
    PARSED = "parsed"
    UNPARSED = "unparsed"


class UnparseReason(str, Enum):
    NO_JSON_OBJECT = "NoJsonObject"
    NO_ANSWER_KEY = "NoAnswerKey"
    INVALID_OPTION = "InvalidOption"
    TRUNCATED = "Truncated"
    EMPTY = "Empty"


@dataclass(frozen=True)
class ParserConfig:
    """Knobs for reasoning-span stripping and option-text fallback.

    Delimiters are configuration rather than constants because reasoning-trace
    markers vary across model families.
    """

    reasoning_delimiters: tuple[tuple[str, str], ...] = DEFAULT_REASONING_DELIMITERS
    accept_option_text: bool = True

    def __post_init__(self) -> None:
        for open_tag, close_tag in self.reasoning_delimiters:
            if not open_tag or not close_tag:
                raise ValueError("reasoning delimiter tags must be non-empty")
            if open_tag == close_tag:
                raise ValueError("open and close tags must differ within a pair")


@dataclass(frozen=True)
class ParseOutcome:
    status: ParseStatus
    letter: str | None = None
    reason: UnparseReason | None = None

    def __post_init__(self) -> None:
        if self.status is ParseStatus.PARSED and (self.letter is None or self.reason is not None):
            raise ValueError("parsed outcomes carry a letter and no reason")
        if self.status is ParseStatus.UNPARSED and (self.reason is None or self.letter is not None):
            raise ValueError("unparsed outcomes carry a reason and no letter")

    @property
    def is_parsed(self) -> bool:
        return self.status is ParseStatus.PARSED

    @staticmethod
    def parsed(letter: str) -> "ParseOutcome":
        return ParseOutcome(status=ParseStatus.PARSED, letter=letter)

    @staticmethod
    def unparsed(reason: UnparseReason) -> "ParseOutcome":
        return ParseOutcome(status=ParseStatus.UNPARSED, reason=reason)

    def to_dict(self) -> dict[str, str]:
        if self.is_parsed:
            return {"status": self.status.value, "letter": str(self.letter)}
        return {"status": self.status.value, "reason": str(self.reason.value)}  # type: ignore[union-attr]

    @staticmethod
    def from_dict(data: dict[str, str]) -> "ParseOutcome":
        if data["status"] == ParseStatus.PARSED.value:
            return ParseOutcome.parsed(data["letter"])
        return ParseOutcome.unparsed(UnparseReason(data["reason"]))


def strip_reasoning(raw: str, cfg: ParserConfig) -> tuple[str, bool]:
    """Remove reasoning spans; returns (text, truncated).

    Runs to a fixpoint so stripping is idempotent even when a removal splices
    two fragments into a new complete span.  An open tag with no matching
    close tag drops the remainder of the text and flags truncation.
    """
    truncated = False
    text = raw
    while True:
        changed = False
        for open_tag, close_tag in cfg.reasoning_delimiters:
            out: list[str] = []
            pos = 0
            while True:
                start = text.find(open_tag, pos)
                if start == -1:
                    out.append(text[pos:])
                    break
                out.append(text[pos:start])
                end = text.find(close_tag, start + len(open_tag))
                if end == -1:
                    truncated = True
                    break
                pos = end + len(close_tag)
            stripped = "".join(out)
            if stripped != text:
                changed = True
                text = stripped
        if not changed:
            return text, truncated


def _scan_json_objects(text: str) -> list[dict]:
    """All well-formed JSON objects, non-overlapping, left to right."""
    decoder = json.JSONDecoder()
    objects: list[dict] = []
    pos = 0
    while True:
        start = text.find("{", pos)
        if start == -1:
            return objects
        try:
            value, end = decoder.raw_decode(text, start)
        except ValueError:
            pos = start + 1
            continue
        if isinstance(value, dict):
            objects.append(value)
        pos = end


def parse_answer(
    raw: str,
    option_letters: Sequence[str],
    option_texts: Sequence[str],
    cfg: ParserConfig | None = None,
) -> ParseOutcome:
    """Classify one raw response against an instance's options."""
    if not option_letters or len(set(option_letters)) != len(option_letters):
        raise ValueError("option_letters must be non-empty and distinct")
    cfg = cfg or ParserConfig()

    text, truncated = strip_reasoning(raw, cfg)
    objects = _scan_json_objects(text)
    answers = [obj["answer"] for obj in objects if "answer" in obj]

    if not answers:
        if truncated:
            return ParseOutcome.unparsed(UnparseReason.TRUNCATED)
        if objects:
            return ParseOutcome.unparsed(UnparseReason.NO_ANSWER_KEY)
        if not text.strip():
            return ParseOutcome.unparsed(UnparseReason.EMPTY)
        return ParseOutcome.unparsed(UnparseReason.NO_JSON_OBJECT)

    value = answers[-1]
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        return ParseOutcome.unparsed(UnparseReason.INVALID_OPTION)
    normalized = str(value).strip().casefold()

    for letter in option_letters:
        if normalized == letter.casefold():
            return ParseOutcome.parsed(letter)
    if cfg.accept_option_text:
        for letter, option in zip(option_letters, option_texts):
            if normalized == option.strip().casefold():
                return ParseOutcome.parsed(letter)
    return ParseOutcome.unparsed(UnparseReason.INVALID_OPTION)

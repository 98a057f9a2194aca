"""Run orchestration: plan a grid, evaluate it, persist records, resume.

Persistence model: one run directory holds ``config.json`` (a snapshot of
every semantically relevant setting plus its hash), ``records.jsonl``
(append-only, one record per planned item, flushed strictly in plan order even
when completions arrive out of order), and ``metrics.csv`` (written when the
run finishes).  Because the records file is always a plan-order prefix, a
crashed run can be resumed by counting what is already there; a trailing
partial line from a crash is truncated with a warning.  Resume refuses to
touch a directory whose config hash differs from the requested config.
"""

from __future__ import annotations

import hashlib
import json
import time
import warnings
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

from staterecall.answerparse import ParseOutcome, ParserConfig, parse_answer
from staterecall.baselines import BaselineSpec, solve
from staterecall.endpointclient import EndpointClient, EndpointConfig, FinishReason
from staterecall.metrics import GridReport, aggregate, write_metrics_csv
from staterecall.promptrender import PromptTemplateConfig, render_instance
from staterecall.taskgen.astro import SwapPattern
from staterecall.taskgen.catalog import Catalog, default_catalog_path, load_catalog
from staterecall.taskgen.instance import (
    TaskInstance,
    canonical_json,
    generate_instance,
    payload_from_dict,
    payload_to_dict,
)
from staterecall.taskgen.seeds import MAX_SEED, Family, derive_instance_seed

DEFAULT_GRID: tuple[tuple[int, int], ...] = tuple(
    (m, n) for m in (4, 8, 16, 32, 64) for n in (4, 8, 16, 32, 64)
)

_RUN_ID_SAFE = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-")


class RunnerError(Exception):
    pass


class InvalidGridError(RunnerError):
    pass


class ConfigMismatchError(RunnerError):
    pass


class MalformedRecordsError(RunnerError):
    pass


@dataclass(frozen=True)
class RunConfig:
    family: Family
    solver: EndpointConfig | BaselineSpec
    output_dir: Path
    run_id: str
    grid: tuple[tuple[int, int], ...] = DEFAULT_GRID
    instances_per_bin: int = 100
    base_seed: int = 0
    swap_pattern: SwapPattern = SwapPattern.ANCHORED
    catalog_path: Path | None = None
    parser: ParserConfig = field(default_factory=ParserConfig)

    def __post_init__(self) -> None:
        if not self.grid:
            raise InvalidGridError("grid must be non-empty")
        if self.instances_per_bin < 1:
            raise ValueError("instances_per_bin must be >= 1")
        if not 0 <= self.base_seed <= MAX_SEED:
            raise ValueError("base_seed out of 64-bit range")
        if not self.run_id or not set(self.run_id) <= _RUN_ID_SAFE:
            raise ValueError(f"run_id not filesystem-safe: {self.run_id!r}")

    @property
    def run_dir(self) -> Path:
        return Path(self.output_dir) / self.run_id


@dataclass(frozen=True)
class PlanItem:
    m: int
    n: int
    index: int
    instance_seed: int

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.m, self.n, self.index)


@dataclass(frozen=True)
class RunRecord:
    family: Family
    m: int
    n: int
    index: int
    instance_seed: int
    payload: dict[str, Any]
    prompt: str
    raw: str
    finish_reason: str
    parse_outcome: ParseOutcome
    predicted: str | None
    correct_letter: str
    is_correct: bool
    attempts: int = 1
    latency_ms: float = 0.0
    timestamp: float = 0.0

    def __post_init__(self) -> None:
        if self.is_correct and not (
            self.parse_outcome.is_parsed and self.predicted == self.correct_letter
        ):
            raise ValueError("is_correct requires a parsed, matching prediction")

    @property
    def parsed(self) -> bool:
        return self.parse_outcome.is_parsed

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family.value,
            "m": self.m,
            "n": self.n,
            "index": self.index,
            "instance_seed": self.instance_seed,
            "payload": self.payload,
            "prompt": self.prompt,
            "raw": self.raw,
            "finish_reason": self.finish_reason,
            "parse": self.parse_outcome.to_dict(),
            "predicted": self.predicted,
            "correct_letter": self.correct_letter,
            "is_correct": self.is_correct,
            "attempts": self.attempts,
            "latency_ms": self.latency_ms,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "RunRecord":
        return RunRecord(
            family=Family(data["family"]),
            m=data["m"],
            n=data["n"],
            index=data["index"],
            instance_seed=data["instance_seed"],
            payload=data["payload"],
            prompt=data["prompt"],
            raw=data["raw"],
            finish_reason=data["finish_reason"],
            parse_outcome=ParseOutcome.from_dict(data["parse"]),
            predicted=data["predicted"],
            correct_letter=data["correct_letter"],
            is_correct=data["is_correct"],
            attempts=data.get("attempts", 1),
            latency_ms=data.get("latency_ms", 0.0),
            timestamp=data.get("timestamp", 0.0),
        )


def plan_run(cfg: RunConfig) -> list[PlanItem]:
    """Deterministic evaluation order: sorted by (m, n, index)."""
    bins = list(cfg.grid)
    if len(set(bins)) != len(bins):
        raise InvalidGridError("grid contains duplicate (m, n) bins")
    for m, n in bins:
        if m < 2 or n < 0:
            raise InvalidGridError(f"invalid bin (m={m}, n={n}): need m >= 2 and n >= 0")
    plan: list[PlanItem] = []
    for m, n in sorted(bins):
        for index in range(cfg.instances_per_bin):
            seed = derive_instance_seed(cfg.base_seed, cfg.family, m, n, index)
            plan.append(PlanItem(m=m, n=n, index=index, instance_seed=seed))
    return plan


def _solver_snapshot(solver: EndpointConfig | BaselineSpec) -> dict[str, Any]:
    if isinstance(solver, BaselineSpec):
        return {"kind": "baseline", **solver.to_dict()}
    # api_key deliberately excluded: secrets don't belong in snapshots, and
    # rotating a key must not invalidate resume.
    return {
        "kind": "endpoint",
        "base_url": solver.base_url,
        "model_id": solver.model_id,
        "variant": solver.variant.value,
        "temperature": solver.temperature,
        "max_output_tokens": solver.max_output_tokens,
        "request_timeout": solver.request_timeout,
        "max_retries": solver.max_retries,
        "max_in_flight": solver.max_in_flight,
    }


def _catalog_snapshot(cfg: RunConfig) -> dict[str, Any] | None:
    if cfg.family is not Family.ASTRO:
        return None
    path = Path(cfg.catalog_path) if cfg.catalog_path else default_catalog_path()
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    return {"path": "bundled" if cfg.catalog_path is None else str(cfg.catalog_path), "sha256": digest}


def config_snapshot(cfg: RunConfig) -> dict[str, Any]:
    """Semantic config only — everything that determines record content."""
    return {
        "schema": 1,
        "family": cfg.family.value,
        "grid": [list(pair) for pair in sorted(cfg.grid)],
        "instances_per_bin": cfg.instances_per_bin,
        "base_seed": cfg.base_seed,
        "swap_pattern": cfg.swap_pattern.value,
        "solver": _solver_snapshot(cfg.solver),
        "catalog": _catalog_snapshot(cfg),
        "parser": {
            "reasoning_delimiters": [list(pair) for pair in cfg.parser.reasoning_delimiters],
            "accept_option_text": cfg.parser.accept_option_text,
        },
    }


def snapshot_hash(snapshot: dict[str, Any]) -> str:
    return hashlib.sha256(canonical_json(snapshot).encode("utf-8")).hexdigest()


def load_records(path: Path | str) -> list[RunRecord]:
    """Load a records file, truncating a trailing partial line if present."""
    path = Path(path)
    records: list[RunRecord] = []
    raw = path.read_bytes()
    offset = 0
    while offset < len(raw):
        newline = raw.find(b"\n", offset)
        end = newline if newline != -1 else len(raw)
        line = raw[offset:end]
        try:
            data = json.loads(line.decode("utf-8"))
            record = RunRecord.from_dict(data)
        except (ValueError, KeyError, TypeError) as exc:
            if newline == -1:
                warnings.warn(
                    f"{path}: truncating partial trailing line at byte {offset}",
                    stacklevel=2,
                )
                with open(path, "r+b") as fh:
                    fh.truncate(offset)
                break
            raise MalformedRecordsError(f"{path}: corrupt record at byte {offset}: {exc}") from exc
        records.append(record)
        if newline == -1:
            break
        offset = newline + 1
    return records


def _prepare_run_dir(cfg: RunConfig, *, require_existing: bool) -> Path:
    run_dir = cfg.run_dir
    config_path = run_dir / "config.json"
    snapshot = config_snapshot(cfg)
    digest = snapshot_hash(snapshot)
    if require_existing and not config_path.exists():
        raise ConfigMismatchError(f"{run_dir}: nothing to resume (no config.json)")
    run_dir.mkdir(parents=True, exist_ok=True)
    if config_path.exists():
        stored = json.loads(config_path.read_text(encoding="utf-8"))
        if stored.get("hash") != digest:
            raise ConfigMismatchError(
                f"{run_dir}: existing run was created with a different config "
                f"(stored hash {stored.get('hash')!r}, requested {digest!r})"
            )
    else:
        document = {"snapshot": snapshot, "hash": digest, "created_at": time.time()}
        config_path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
    return run_dir


def _load_catalog_for(cfg: RunConfig) -> Catalog | None:
    if cfg.family is not Family.ASTRO:
        return None
    path = Path(cfg.catalog_path) if cfg.catalog_path else default_catalog_path()
    return load_catalog(path)


def _generate(cfg: RunConfig, item: PlanItem, catalog: Catalog | None) -> TaskInstance:
    return generate_instance(
        cfg.family,
        item.m,
        item.n,
        item.index,
        cfg.base_seed,
        catalog=catalog,
        pattern=cfg.swap_pattern,
    )


def _score(
    cfg: RunConfig,
    item: PlanItem,
    task: TaskInstance,
    prompt_text: str,
    raw: str,
    finish_reason: str,
    attempts: int,
    latency_ms: float,
) -> RunRecord:
    payload = task.payload
    outcome = parse_answer(raw, payload.option_letters, payload.option_texts, cfg.parser)
    predicted = outcome.letter if outcome.is_parsed else None
    return RunRecord(
        family=cfg.family,
        m=item.m,
        n=item.n,
        index=item.index,
        instance_seed=item.instance_seed,
        payload=payload_to_dict(payload),
        prompt=prompt_text,
        raw=raw,
        finish_reason=finish_reason,
        parse_outcome=outcome,
        predicted=predicted,
        correct_letter=payload.correct_letter,
        is_correct=outcome.is_parsed and predicted == payload.correct_letter,
        attempts=attempts,
        latency_ms=latency_ms,
        timestamp=time.time(),
    )


def _complete_items(
    cfg: RunConfig,
    items: list[PlanItem],
    catalog: Catalog | None,
    prompt_cfg: PromptTemplateConfig,
) -> Iterator[RunRecord]:
    """Yield finished records strictly in plan order."""
    if isinstance(cfg.solver, BaselineSpec):
        spec = cfg.solver
        for item in items:
            task = _generate(cfg, item, catalog)
            prompt = render_instance(task.payload, prompt_cfg)
            raw = solve(task, spec)
            yield _score(cfg, item, task, prompt.text, raw, FinishReason.STOP.value, 1, 0.0)
        return

    endpoint_cfg = cfg.solver
    with EndpointClient(endpoint_cfg) as client:
        def work(item: PlanItem) -> RunRecord:
            task = _generate(cfg, item, catalog)
            prompt = render_instance(task.payload, prompt_cfg)
            result = client.complete(prompt)
            return _score(
                cfg,
                item,
                task,
                prompt.text,
                result.raw_text,
                result.finish_reason.value,
                result.attempt_count,
                result.latency_ms,
            )

        # One worker per permitted in-flight request (the client's semaphore
        # enforces the same bound).  Iterating futures in submission order is
        # the reorder buffer: results are yielded in plan order no matter
        # when they complete, and with max_in_flight=1 requests leave in plan
        # order too.
        with ThreadPoolExecutor(max_workers=endpoint_cfg.max_in_flight) as pool:
            futures: list[tuple[PlanItem, Future[RunRecord]]] = [
                (item, pool.submit(work, item)) for item in items
            ]
            try:
                for _, future in futures:
                    yield future.result()
            except BaseException:
                for _, future in futures:
                    future.cancel()
                raise


def _run(cfg: RunConfig, *, require_existing: bool) -> GridReport:
    plan = plan_run(cfg)
    run_dir = _prepare_run_dir(cfg, require_existing=require_existing)
    records_path = run_dir / "records.jsonl"

    existing: list[RunRecord] = []
    if records_path.exists():
        existing = load_records(records_path)
    completed = {(r.m, r.n, r.index) for r in existing}
    unknown = completed - {item.key for item in plan}
    if unknown:
        raise ConfigMismatchError(f"{records_path}: records outside the planned grid: {sorted(unknown)[:3]}")
    remaining = [item for item in plan if item.key not in completed]

    catalog = _load_catalog_for(cfg)
    prompt_cfg = PromptTemplateConfig(family=cfg.family)
    if remaining:
        with open(records_path, "a", encoding="utf-8") as fh:
            for record in _complete_items(cfg, remaining, catalog, prompt_cfg):
                fh.write(json.dumps(record.to_dict(), ensure_ascii=False, separators=(",", ":")) + "\n")
                fh.flush()

    final_records = load_records(records_path)
    report = aggregate(final_records)
    write_metrics_csv(report, run_dir / "metrics.csv")
    return report


def execute_run(cfg: RunConfig) -> GridReport:
    """Run the full grid; safe to call again to finish a partial run."""
    return _run(cfg, require_existing=False)


def resume_run(cfg: RunConfig) -> GridReport:
    """Finish an existing run directory; refuses config mismatches."""
    return _run(cfg, require_existing=True)


def remaining_items(cfg: RunConfig) -> list[PlanItem]:
    """Planned items not yet present in the run's records file."""
    plan = plan_run(cfg)
    records_path = cfg.run_dir / "records.jsonl"
    if not records_path.exists():
        return plan
    completed = {(r.m, r.n, r.index) for r in load_records(records_path)}
    return [item for item in plan if item.key not in completed]


def rescore_records(records: list[RunRecord], parser: ParserConfig) -> list[RunRecord]:
    """Re-parse stored raw completions under a (possibly different) parser."""
    out: list[RunRecord] = []
    for record in records:
        payload = payload_from_dict(record.payload)
        outcome = parse_answer(record.raw, payload.option_letters, payload.option_texts, parser)
        predicted = outcome.letter if outcome.is_parsed else None
        out.append(
            RunRecord(
                family=record.family,
                m=record.m,
                n=record.n,
                index=record.index,
                instance_seed=record.instance_seed,
                payload=record.payload,
                prompt=record.prompt,
                raw=record.raw,
                finish_reason=record.finish_reason,
                parse_outcome=outcome,
                predicted=predicted,
                correct_letter=record.correct_letter,
                is_correct=outcome.is_parsed and predicted == record.correct_letter,
                attempts=record.attempts,
                latency_ms=record.latency_ms,
                timestamp=record.timestamp,
            )
        )
    return out

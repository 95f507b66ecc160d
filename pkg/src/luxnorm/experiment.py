"""Full experiment orchestration: normalize, evaluate, run the test suite.

Reports embed the exact configuration and sha256 checksums of every input
file, so a run can be audited and reproduced; re-running with the same
config yields an identical report except for the timestamp.
"""

from __future__ import annotations

import datetime
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from luxnorm import __version__
from luxnorm.align import ScoringScheme
from luxnorm.checklist import SuiteReport, load_suite, render_report, run_suite
from luxnorm.config import RunConfig, effective_workers
from luxnorm.dictionary import build_reverse_index, load_dictionary
from luxnorm.errors import LuxnormError
from luxnorm.metrics import MetricsReport, evaluate_sentences
from luxnorm.normalize import (
    Pipeline,
    PipelineConfig,
    load_lexicon,
    read_predictions,
    run_external_normalizer,
)


class StageError(LuxnormError):
    """A pipeline stage failed; earlier artifacts are left on disk."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class ExperimentReport:
    config: dict
    checksums: dict[str, str]
    metrics: MetricsReport
    suite: SuiteReport
    version: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "timestamp": self.timestamp,
            "config": self.config,
            "input_checksums": self.checksums,
            "metrics": self.metrics.to_dict(),
            "suite": self.suite.to_dict(),
        }

    def canonical_dict(self) -> dict:
        """Report content without volatile fields, for determinism checks."""
        data = self.to_dict()
        data.pop("timestamp")
        return data


def file_checksum(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def read_lines(path: Path) -> list[str]:
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def build_normalizer(config: RunConfig):
    """Resolve the configured normalizer into a batch callable."""
    workers = effective_workers(config.workers)
    if config.normalizer == "identity":
        return lambda sentences: list(sentences)
    if config.normalizer.startswith("cmd:"):
        command = config.normalizer[len("cmd:"):]
        return lambda sentences: run_external_normalizer(command, sentences)
    if config.normalizer != "pipeline":
        raise LuxnormError(f"unknown normalizer {config.normalizer!r}")
    dictionary = load_dictionary(config.dictionary)
    lexicon = load_lexicon(config.lexicon)
    pipeline = Pipeline(
        build_reverse_index(dictionary),
        lexicon,
        PipelineConfig(
            weights=config.weights,
            max_edit_distance=config.max_edit_distance,
            ngram_n=config.ngram_n,
            topk=config.topk,
        ),
    )
    return lambda sentences: pipeline.normalize_lines(sentences, workers=workers)


def run_experiment(config: RunConfig) -> ExperimentReport:
    """Execute normalize -> align/metrics -> checklist and write reports.

    Any stage failure raises StageError with the stage name; artifacts
    written by completed stages stay in the output directory.
    """
    out_dir = config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    scheme = ScoringScheme(config.match_bonus, config.mismatch_penalty, config.gap_penalty)

    def stage(name: str, fn):
        try:
            return fn()
        except Exception as exc:
            raise StageError(name, exc) from exc

    normalizer = stage("load-resources", lambda: build_normalizer(config))
    original = stage("read-eval-corpus", lambda: read_lines(config.eval_original))
    gold = stage("read-eval-corpus", lambda: read_lines(config.eval_gold))

    def normalize():
        if config.predictions is not None:
            return read_predictions(config.predictions, len(original))
        return normalizer(original)

    predicted = stage("normalize", normalize)
    (out_dir / "predictions.txt").write_text(
        "".join(line + "\n" for line in predicted), encoding="utf-8"
    )

    metrics, _ = stage(
        "evaluate", lambda: evaluate_sentences(original, predicted, gold, scheme)
    )
    suite = stage("load-suite", lambda: load_suite(config.suite))
    suite_report = stage("checklist", lambda: run_suite(normalizer, suite))

    checksums = {}
    for key in ("dictionary", "lexicon", "eval_original", "eval_gold", "suite", "predictions"):
        path = getattr(config, key)
        if path is not None:
            checksums[key] = file_checksum(path)

    report = ExperimentReport(
        config=config.to_dict(),
        checksums=checksums,
        metrics=metrics,
        suite=suite_report,
        version=__version__,
        timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
    )
    (out_dir / "report.json").write_text(
        json.dumps(report.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    (out_dir / "suite_report.txt").write_text(
        render_report(suite_report, "table") + "\n", encoding="utf-8"
    )
    return report

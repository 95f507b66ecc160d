"""Minimum-functionality test harness for normalizers.

The suite covers 21 orthographic rule categories, each tested in two
setups: CORRECT plants one rule-reversed misspelling that the normalizer
must fix, PRESERVE feeds an already-standard sentence that must come back
unchanged. The shipped suite has 10 sentences per category and setup
(420 units).

A normalizer is any callable mapping a list of sentences to a list of
normalized sentences, one output line per input line.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from luxnorm.align import GAP, ScoringScheme, needleman_wunsch
from luxnorm.errors import ParseError
from luxnorm.tokenizer import detokenize, tokenize

logger = logging.getLogger(__name__)

EXPECTED_CATEGORIES = 21
EXPECTED_UNITS_PER_CELL = 10
EXPECTED_TOTAL_UNITS = EXPECTED_CATEGORIES * 2 * EXPECTED_UNITS_PER_CELL

Normalizer = Callable[[Sequence[str]], list[str]]


class Setup(Enum):
    CORRECT = "CORRECT"
    PRESERVE = "PRESERVE"


@dataclass(frozen=True)
class TestUnit:
    """One suite sentence; target fields are set for CORRECT units only."""

    __test__ = False  # domain type, not a pytest class

    unit_id: int
    category: str
    setup: Setup
    sentence: str
    target_index: int | None = None
    expected: str | None = None
    gloss: str = ""
    provenance: str = ""

    def gold_sentence(self) -> str:
        """The fully standard version of this unit's sentence."""
        if self.setup is Setup.PRESERVE:
            return self.sentence
        tokens = tokenize(self.sentence)
        tokens[self.target_index] = self.expected
        return detokenize(tokens)


@dataclass
class TestSuite:
    __test__ = False  # domain type, not a pytest class

    units: list[TestUnit]
    categories: list[str]

    @property
    def is_complete(self) -> bool:
        return (
            len(self.categories) == EXPECTED_CATEGORIES
            and len(self.units) == EXPECTED_TOTAL_UNITS
        )

    def select(self, setup: Setup, category: str | None = None) -> list[TestUnit]:
        return [
            u
            for u in self.units
            if u.setup is setup and (category is None or u.category == category)
        ]


def default_suite_path() -> Path:
    """Location of the suite data shipped with the package."""
    return Path(resources.files("luxnorm") / "data" / "mft_suite.tsv")


def load_suite(path: str | Path | None = None) -> TestSuite:
    """Load and validate a suite TSV.

    Columns: category, setup, sentence, target_index, expected, gloss,
    provenance. CORRECT units must have a target token that actually
    differs from the expected form (otherwise there is nothing to fix and
    the unit is rejected). Partial suites load but are flagged.
    """
    path = Path(path) if path is not None else default_suite_path()
    units: list[TestUnit] = []
    categories: list[str] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 7:
                raise ParseError(
                    f"expected 7 tab-separated fields, got {len(fields)}",
                    path=str(path),
                    line=lineno,
                )
            category, setup_text, sentence, index_text, expected, gloss, provenance = fields
            if not category or not sentence:
                raise ParseError("empty category or sentence", path=str(path), line=lineno)
            try:
                setup = Setup(setup_text)
            except ValueError:
                raise ParseError(
                    f"setup must be CORRECT or PRESERVE, got {setup_text!r}",
                    path=str(path),
                    line=lineno,
                ) from None
            if setup is Setup.CORRECT:
                if not expected:
                    raise ParseError("CORRECT unit without expected form", path=str(path), line=lineno)
                try:
                    target_index = int(index_text)
                except ValueError:
                    raise ParseError(
                        f"target_index is not an integer: {index_text!r}",
                        path=str(path),
                        line=lineno,
                    ) from None
                tokens = tokenize(sentence)
                if not 0 <= target_index < len(tokens):
                    raise ParseError(
                        f"target_index {target_index} out of range for {len(tokens)} tokens",
                        path=str(path),
                        line=lineno,
                    )
                if tokens[target_index] == expected:
                    raise ParseError(
                        f"target token already equals expected form {expected!r}; "
                        "the corruption is missing",
                        path=str(path),
                        line=lineno,
                    )
                unit = TestUnit(
                    lineno, category, setup, sentence, target_index, expected, gloss, provenance
                )
            else:
                if index_text or expected:
                    raise ParseError(
                        "PRESERVE unit must not set target_index or expected",
                        path=str(path),
                        line=lineno,
                    )
                unit = TestUnit(lineno, category, setup, sentence, gloss=gloss, provenance=provenance)
            units.append(unit)
            if category not in categories:
                categories.append(category)
    if not units:
        raise ParseError("suite file contains no units", path=str(path))
    suite = TestSuite(units, categories)
    if not suite.is_complete:
        logger.warning(
            "partial suite: %d categories, %d units (expected %d/%d)",
            len(categories),
            len(units),
            EXPECTED_CATEGORIES,
            EXPECTED_TOTAL_UNITS,
        )
    return suite


@dataclass
class UnitFailure:
    unit_id: int
    category: str
    setup: Setup
    sentence: str
    produced: str

    def to_dict(self) -> dict:
        return {
            "unit_id": self.unit_id,
            "category": self.category,
            "setup": self.setup.value,
            "sentence": self.sentence,
            "produced": self.produced,
        }


@dataclass
class CellResult:
    """Outcome of one (category, setup) suite cell."""

    total: int = 0
    successes: int = 0
    collateral_changes: int = 0  # non-target edits in CORRECT units
    failures: list[UnitFailure] = field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return 100.0 * self.successes / self.total if self.total else 0.0


@dataclass
class SuiteReport:
    categories: list[str]
    cells: dict[tuple[str, Setup], CellResult]

    def cell(self, category: str, setup: Setup) -> CellResult:
        return self.cells.setdefault((category, setup), CellResult())

    def to_dict(self) -> dict:
        rows = {}
        for category in self.categories:
            correct = self.cell(category, Setup.CORRECT)
            preserve = self.cell(category, Setup.PRESERVE)
            rows[category] = {
                "correct": {
                    "total": correct.total,
                    "successes": correct.successes,
                    "rate": correct.success_rate,
                    "collateral_changes": correct.collateral_changes,
                },
                "preserve": {
                    "total": preserve.total,
                    "successes": preserve.successes,
                    "rate": preserve.success_rate,
                },
            }
        return {
            "categories": rows,
            "failures": [
                f.to_dict() for cell in self.cells.values() for f in cell.failures
            ],
        }


def _canonical(sentence: str) -> str:
    return unicodedata.normalize("NFC", " ".join(sentence.split()))


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def _correct_unit_passes(unit: TestUnit, produced: str) -> tuple[bool, int]:
    """Judge one CORRECT unit; returns (success, collateral edit count).

    The produced sentence is word-aligned with the input; the unit passes
    iff the output token aligned to the target position equals the
    expected form. Edits elsewhere are counted but do not fail the unit.
    """
    input_tokens = tokenize(unit.sentence)
    output_tokens = tokenize(produced)
    alignment = needleman_wunsch(input_tokens, output_tokens, ScoringScheme())
    success = False
    collateral = 0
    position = -1
    for in_token, out_token in alignment.columns:
        if in_token is not GAP:
            position += 1
            if position == unit.target_index:
                if isinstance(out_token, str) and _nfc(out_token) == _nfc(unit.expected):
                    success = True
                continue
        if in_token is GAP or out_token is GAP or _nfc(in_token) != _nfc(out_token):
            collateral += 1
    return success, collateral


def _run_normalizer(normalizer: Normalizer, sentences: list[str]) -> list[str | None]:
    """Run a batch; on failure, retry per sentence so one bad unit cannot
    take down the run. None marks sentences whose normalization failed."""
    try:
        outputs = list(normalizer(sentences))
        if len(outputs) == len(sentences):
            return outputs
        logger.warning(
            "normalizer returned %d outputs for %d inputs; retrying per sentence",
            len(outputs),
            len(sentences),
        )
    except Exception as exc:  # noqa: BLE001 - deliberately broad, run must continue
        logger.warning("batch normalization failed (%s); retrying per sentence", exc)
    outputs = []
    for sentence in sentences:
        try:
            result = list(normalizer([sentence]))
            outputs.append(result[0] if len(result) == 1 else None)
        except Exception as exc:  # noqa: BLE001
            logger.warning("normalization failed for %r: %s", sentence, exc)
            outputs.append(None)
    return outputs


def run_correct_setup(
    normalizer: Normalizer, units: Sequence[TestUnit]
) -> dict[str, CellResult]:
    """Score CORRECT units per category: was the planted error fixed?"""
    assert all(u.setup is Setup.CORRECT for u in units)
    outputs = _run_normalizer(normalizer, [u.sentence for u in units])
    results: dict[str, CellResult] = {}
    for unit, produced in zip(units, outputs):
        cell = results.setdefault(unit.category, CellResult())
        cell.total += 1
        if produced is None:
            cell.failures.append(
                UnitFailure(unit.unit_id, unit.category, unit.setup, unit.sentence, "<error>")
            )
            continue
        success, collateral = _correct_unit_passes(unit, produced)
        cell.collateral_changes += collateral
        if success:
            cell.successes += 1
        else:
            cell.failures.append(
                UnitFailure(unit.unit_id, unit.category, unit.setup, unit.sentence, produced)
            )
    return results


def run_preserve_setup(
    normalizer: Normalizer, units: Sequence[TestUnit]
) -> dict[str, CellResult]:
    """Score PRESERVE units per category: did correct input survive?"""
    assert all(u.setup is Setup.PRESERVE for u in units)
    outputs = _run_normalizer(normalizer, [u.sentence for u in units])
    results: dict[str, CellResult] = {}
    for unit, produced in zip(units, outputs):
        cell = results.setdefault(unit.category, CellResult())
        cell.total += 1
        if produced is not None and _canonical(produced) == _canonical(unit.sentence):
            cell.successes += 1
        else:
            cell.failures.append(
                UnitFailure(
                    unit.unit_id,
                    unit.category,
                    unit.setup,
                    unit.sentence,
                    "<error>" if produced is None else produced,
                )
            )
    return results


def run_suite(normalizer: Normalizer, suite: TestSuite) -> SuiteReport:
    """Run both setups over the whole suite."""
    report = SuiteReport(categories=list(suite.categories), cells={})
    for category, cell in run_correct_setup(normalizer, suite.select(Setup.CORRECT)).items():
        report.cells[(category, Setup.CORRECT)] = cell
    for category, cell in run_preserve_setup(normalizer, suite.select(Setup.PRESERVE)).items():
        report.cells[(category, Setup.PRESERVE)] = cell
    return report


def render_report(report: SuiteReport, fmt: str = "table") -> str:
    """Render per-category success rates, whole-number percentages."""
    header = ("category", "correct", "preserve")
    rows = [
        (
            category,
            str(int(round(report.cell(category, Setup.CORRECT).success_rate))),
            str(int(round(report.cell(category, Setup.PRESERVE).success_rate))),
        )
        for category in report.categories
    ]
    if fmt == "tsv":
        return "\n".join("\t".join(row) for row in [header, *rows])
    if fmt != "table":
        raise ValueError(f"unknown report format: {fmt!r}")
    widths = [max(len(row[i]) for row in [header, *rows]) for i in range(3)]
    lines = []
    for row in [header, *rows]:
        lines.append(
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        )
    return "\n".join(lines)

"""Parameter sensitivity sweeps and the unknown-code-region grid search.

A sweep re-runs the full analysis once per requested parameter value and
records the best-scoring candidate pairs for each, which is the data behind
score-vs-parameter line charts.  The region search scans [start, end) byte
windows over the image for the window whose best pair scores highest, used
when the code section's location is unknown.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .params import AnalysisParams, ParamError, WIRE_TO_ATTR
from .scoring import AnalysisError, CandidatePair, hex_word, pair_to_wire, score_all
from .stream import BinaryImage, CodeRegion, StreamError, extract_instructions

SWEEPABLE = (
    "instructionLength",
    "callOpcodeLength",
    "retOpcodeLength",
    "pcOffset",
    "returnToFunctionPrologueDistance",
)

MIN_REGION_INSTRUCTIONS = 64
_REFINE_CELLS = 3
# Cap on refinement positions per axis so a huge coarse step cannot explode
# the second pass.
_MAX_REFINE_STEPS = 16


@dataclass(frozen=True)
class SweepSpec:
    """One parameter to vary, the explicit values to try, and how many of the
    best pairs to keep per value."""

    parameter: str
    values: tuple
    top_n: int = 1

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ParamError(
                [("parameter", f"not sweepable; choose one of {', '.join(SWEEPABLE)}")]
            )
        if len(self.values) == 0:
            raise ParamError([("values", "must be a non-empty list")])
        if self.top_n < 1:
            raise ParamError([("topN", "must be >= 1")])


@dataclass(frozen=True)
class SweepPoint:
    """Outcome at one parameter value: either ranked pairs or an error."""

    value: object
    pairs: tuple[CandidatePair, ...] = ()
    instruction_length: int | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    points: tuple[SweepPoint, ...]


@dataclass(frozen=True)
class RegionScore:
    """A candidate code region with the best pair found inside it."""

    region: CodeRegion
    best: CandidatePair


def _analyze_once(image: BinaryImage, params: AnalysisParams, top_n: int):
    params = params.resolve_region_end(len(image))
    stream = extract_instructions(
        image,
        CodeRegion(params.file_offset, params.file_offset_end),
        params.instruction_length,
        params.endianness,
        params.pc_offset,
        params.pc_inc_per_instr,
    )
    ranked = score_all(stream, params.with_overrides(nr_candidates=max(top_n, 1)))
    return ranked.pairs[:top_n]


def run_sweep(image: BinaryImage, base_params: AnalysisParams, spec: SweepSpec) -> SweepResult:
    """Score the image once per value of the swept parameter.

    Each point is an independent analysis: the base record is cloned, the one
    parameter overridden, and the result recorded in input order.  A value
    that fails validation or decoding is recorded as a per-point error rather
    than aborting the sweep.  The configured code region is used as-is; the
    unknownCodeEntry search never runs inside a sweep.
    """
    attr = WIRE_TO_ATTR[spec.parameter]
    points = []
    for value in spec.values:
        try:
            params = base_params.with_overrides(**{attr: value})
            pairs = _analyze_once(image, params, spec.top_n)
            points.append(
                SweepPoint(
                    value=value,
                    pairs=pairs,
                    instruction_length=params.instruction_length,
                )
            )
        except (ParamError, StreamError, AnalysisError) as exc:
            points.append(SweepPoint(value=value, error=str(exc)))
    return SweepResult(parameter=spec.parameter, points=tuple(points))


def sweep_to_dict(result: SweepResult) -> dict:
    points = []
    for point in result.points:
        if point.error is not None:
            points.append({"value": point.value, "error": point.error})
        else:
            points.append(
                {
                    "value": point.value,
                    "pairs": [
                        pair_to_wire(p, point.instruction_length) for p in point.pairs
                    ],
                }
            )
    return {"parameter": result.parameter, "points": points}


def sweep_to_csv(result: SweepResult) -> str:
    """Flatten to CSV rows (value, rank, score, callOpcode, retOpcode).

    Errored points are omitted; the JSON form carries their messages.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["value", "rank", "score", "callOpcode", "retOpcode"])
    for point in result.points:
        if point.error is not None:
            continue
        for rank, pair in enumerate(point.pairs):
            writer.writerow(
                [
                    point.value,
                    rank,
                    repr(pair.score),
                    hex_word(pair.call_opcode, point.instruction_length),
                    hex_word(pair.ret_opcode, point.instruction_length),
                ]
            )
    return out.getvalue()


def default_granularity(image_size: int, instruction_length: int) -> int:
    """Coarse step that keeps the first-pass grid around a thousand regions."""
    byte_width = instruction_length // 8
    cells = 32
    return byte_width * max(1, math.ceil(image_size / byte_width / cells))


def _score_region(
    image: BinaryImage, params: AnalysisParams, start: int, end: int
) -> CandidatePair | None:
    region_params = params.with_overrides(
        file_offset=start, file_offset_end=end, unknown_code_entry=False
    )
    try:
        return _analyze_once(image, region_params, 1)[0]
    except (StreamError, AnalysisError):
        return None


def search_code_region(
    image: BinaryImage, base_params: AnalysisParams, step_granularity: int
) -> list[RegionScore]:
    """Grid-search candidate [start, end) code regions and rank them.

    A coarse grid at ``step_granularity`` runs first; the best cells are then
    refined near their boundaries at instruction-width granularity.  Regions
    must hold at least 64 instructions, the whole file is always one of the
    candidates, and the ranking is by best score, then larger region, then
    lower start offset.
    """
    byte_width = base_params.instruction_length // 8
    if step_granularity < byte_width or step_granularity % byte_width != 0:
        raise AnalysisError(
            f"stepGranularity must be a positive multiple of the instruction "
            f"byte width ({byte_width})"
        )
    min_bytes = MIN_REGION_INSTRUCTIONS * byte_width
    size = len(image)
    if size < min_bytes:
        raise AnalysisError("image too small for region search")

    scored: dict[tuple[int, int], CandidatePair] = {}

    def consider(start: int, end: int):
        if start < 0 or end > size or end - start < min_bytes:
            return
        if (start, end) in scored:
            return
        best = _score_region(image, base_params, start, end)
        if best is not None:
            scored[(start, end)] = best

    step = step_granularity
    for start in range(0, size - min_bytes + 1, step):
        # Anchor end offsets at the file end so the whole-file region is
        # always part of the grid.
        for end in range(size, start + min_bytes - 1, -step):
            consider(start, end)

    def ordering(item: tuple[tuple[int, int], CandidatePair]):
        (start, end), best = item
        return (-best.score, -(end - start), start)

    if step > byte_width:
        refine_step = byte_width * max(1, (step // byte_width) // _MAX_REFINE_STEPS)
        for (start, end), _ in sorted(scored.items(), key=ordering)[:_REFINE_CELLS]:
            for s in range(max(0, start - step), start + step + 1, refine_step):
                for e in range(end - step, min(size, end + step) + 1, refine_step):
                    consider(s, e)

    ranked = sorted(scored.items(), key=ordering)
    return [
        RegionScore(region=CodeRegion(start, end), best=best)
        for (start, end), best in ranked
    ]

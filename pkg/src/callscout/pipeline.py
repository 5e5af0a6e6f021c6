"""End-to-end analysis: decode, scan the candidate grid, build graphs.

``run_analysis`` is the one entry point behind both the CLI and the HTTP
service.  It resolves the code region (searching for it when the caller
marked the entry as unknown), ranks the candidate pairs, and attaches a call
graph to each ranked pair.  ``result_to_json`` is the single serializer, so
every surface emits byte-identical output for identical inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .edges import Edge, filter_valid_edges, potential_edges_absolute, potential_edges_relative
from .candidates import OpcodeMaskSpec
from .graph import CallGraph, build_call_graph, graph_to_dict
from .params import AnalysisParams
from .scoring import (
    NORMALIZATION_FACTOR,
    VALID_EDGE_WEIGHT,
    CandidatePair,
    pair_to_wire,
    score_all,
)
from .stream import BinaryImage, CodeRegion, InstructionStream, extract_instructions
from .sweep import default_granularity, search_code_region


@dataclass(frozen=True)
class RegionSearchInfo:
    """How the unknown-entry search settled on a region."""

    granularity: int
    regions_scored: int


@dataclass(frozen=True)
class Diagnostics:
    """Run facts that are not part of the ranking itself.

    The score constants are reported read-only; they define the metric and
    are not tunable.
    """

    instruction_count: int
    dropped_bytes: int
    file_offset: int
    file_offset_end: int
    valid_edge_weight: int = VALID_EDGE_WEIGHT
    normalization_factor: int = NORMALIZATION_FACTOR
    region_search: RegionSearchInfo | None = None


@dataclass(frozen=True)
class CandidateReport:
    """One ranked pair with the call graph it induces."""

    rank: int
    pair: CandidatePair
    graph: CallGraph


@dataclass(frozen=True)
class AnalysisResult:
    params: AnalysisParams
    diagnostics: Diagnostics
    candidates: tuple[CandidateReport, ...]


def _valid_edges_for(
    stream: InstructionStream, params: AnalysisParams, pair: CandidatePair
) -> list[Edge]:
    call_spec = OpcodeMaskSpec(params.call_opcode_length, params.instruction_length)
    ret_spec = OpcodeMaskSpec(params.ret_opcode_length, params.instruction_length)
    find = potential_edges_relative if params.is_relative_addressing else potential_edges_absolute
    potential = find(stream, pair.call_opcode, call_spec)
    return filter_valid_edges(
        stream,
        potential,
        pair.ret_opcode,
        ret_spec,
        params.return_to_function_prologue_distance,
    )


def run_analysis(image: BinaryImage, params: AnalysisParams) -> AnalysisResult:
    """Run the whole pipeline on one image and parameter record."""
    params = params.resolve_region_end(len(image))
    region_info = None
    if params.unknown_code_entry:
        granularity = default_granularity(len(image), params.instruction_length)
        regions = search_code_region(image, params, granularity)
        top = regions[0].region
        region_info = RegionSearchInfo(
            granularity=granularity, regions_scored=len(regions)
        )
        params = params.with_overrides(
            file_offset=top.file_offset, file_offset_end=top.file_offset_end
        )

    stream = extract_instructions(
        image,
        CodeRegion(params.file_offset, params.file_offset_end),
        params.instruction_length,
        params.endianness,
        params.pc_offset,
        params.pc_inc_per_instr,
    )
    ranked = score_all(stream, params)

    reports = []
    for rank, pair in enumerate(ranked.pairs):
        edges = _valid_edges_for(stream, params, pair)
        graph = build_call_graph(stream, edges, params.include_instructions)
        reports.append(CandidateReport(rank=rank, pair=pair, graph=graph))

    diagnostics = Diagnostics(
        instruction_count=len(stream),
        dropped_bytes=stream.dropped_bytes,
        file_offset=params.file_offset,
        file_offset_end=params.file_offset_end,
        region_search=region_info,
    )
    return AnalysisResult(params=params, diagnostics=diagnostics, candidates=tuple(reports))


def result_to_dict(result: AnalysisResult) -> dict:
    diag = result.diagnostics
    diagnostics = {
        "instructionCount": diag.instruction_count,
        "droppedBytes": diag.dropped_bytes,
        "codeRegion": {
            "fileOffset": diag.file_offset,
            "fileOffsetEnd": diag.file_offset_end,
        },
        "scoreConstants": {
            "validEdgeWeight": diag.valid_edge_weight,
            "normalizationFactor": diag.normalization_factor,
        },
    }
    if diag.region_search is not None:
        diagnostics["regionSearch"] = {
            "granularity": diag.region_search.granularity,
            "regionsScored": diag.region_search.regions_scored,
        }
    width = result.params.instruction_length
    return {
        "params": result.params.to_wire_dict(),
        "diagnostics": diagnostics,
        "candidates": [
            {
                "rank": report.rank,
                **pair_to_wire(report.pair, width),
                "graph": graph_to_dict(report.graph),
            }
            for report in result.candidates
        ],
    }


def result_to_json(result: AnalysisResult) -> str:
    """Canonical JSON rendering, shared by the CLI and the HTTP service."""
    return json.dumps(result_to_dict(result), indent=2) + "\n"

"""Heuristic call/return opcode detection and call graph recovery for
binaries from unknown fixed-width instruction sets."""

from .candidates import (
    CandidateRange,
    OpcodeCandidate,
    OpcodeMaskSpec,
    extract_operand,
    mask_opcode,
    rank_candidates,
)
from .edges import (
    Edge,
    filter_valid_edges,
    potential_edges_absolute,
    potential_edges_relative,
    signed_operand,
)
from .graph import (
    CallGraph,
    FunctionNode,
    GraphEdge,
    build_call_graph,
    export_graph,
    graph_from_dict,
    graph_to_dict,
)
from .params import AnalysisParams, ParamError, params_from_wire
from .pipeline import (
    AnalysisResult,
    CandidateReport,
    Diagnostics,
    result_to_dict,
    result_to_json,
    run_analysis,
)
from .scoring import (
    NORMALIZATION_FACTOR,
    VALID_EDGE_WEIGHT,
    AnalysisError,
    CandidatePair,
    RankedCandidates,
    hex_word,
    ocp_score,
    pair_to_wire,
    rank_pairs,
    score_all,
)
from .stream import (
    BinaryImage,
    CodeRegion,
    Instruction,
    InstructionStream,
    StreamError,
    extract_instructions,
    load_image,
)
from .sweep import (
    RegionScore,
    SweepResult,
    SweepSpec,
    run_sweep,
    search_code_region,
    sweep_to_csv,
    sweep_to_dict,
)
from .synth import GroundTruth, InfeasibleSpecError, SynthSpec, generate

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "AnalysisParams",
    "AnalysisResult",
    "BinaryImage",
    "CallGraph",
    "CandidatePair",
    "CandidateRange",
    "CandidateReport",
    "CodeRegion",
    "Diagnostics",
    "Edge",
    "FunctionNode",
    "GraphEdge",
    "GroundTruth",
    "InfeasibleSpecError",
    "Instruction",
    "InstructionStream",
    "NORMALIZATION_FACTOR",
    "OpcodeCandidate",
    "OpcodeMaskSpec",
    "ParamError",
    "RankedCandidates",
    "RegionScore",
    "StreamError",
    "SweepResult",
    "SweepSpec",
    "SynthSpec",
    "VALID_EDGE_WEIGHT",
    "build_call_graph",
    "export_graph",
    "extract_instructions",
    "extract_operand",
    "filter_valid_edges",
    "generate",
    "graph_from_dict",
    "graph_to_dict",
    "hex_word",
    "load_image",
    "mask_opcode",
    "ocp_score",
    "pair_to_wire",
    "params_from_wire",
    "potential_edges_absolute",
    "potential_edges_relative",
    "rank_candidates",
    "rank_pairs",
    "result_to_dict",
    "result_to_json",
    "run_analysis",
    "run_sweep",
    "score_all",
    "search_code_region",
    "signed_operand",
    "sweep_to_csv",
    "sweep_to_dict",
]

"""Candidate-pair scoring and top-K ranking.

Every (call opcode, return opcode) pair drawn from the two candidate ranges
gets a candidacy score

    (2 * valid_edges + potential_edges) / (3 * call_count)

which lands in [0, 1] because valid_edges <= potential_edges <= call_count.
Valid edges weigh double because they are the stronger call signal: branch
instructions also produce resolvable operands, but rarely target an
instruction sitting right after a function epilogue.

``score_all`` evaluates the full candidate grid.  Streams up to 64-bit
instruction words go through a vectorized engine; wider words fall back to a
plain-Python engine with identical semantics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .candidates import CandidateRange, OpcodeMaskSpec, rank_candidates
from .edges import filter_valid_edges, potential_edges_absolute, potential_edges_relative
from .params import AnalysisParams
from .stream import InstructionStream

VALID_EDGE_WEIGHT = 2
NORMALIZATION_FACTOR = 3


class AnalysisError(RuntimeError):
    """Analysis cannot proceed on this input (empty stream, empty ranges, ...)."""


@dataclass(frozen=True)
class CandidatePair:
    """A (call opcode, return opcode) hypothesis with its counts and score."""

    call_opcode: int
    ret_opcode: int
    call_count: int
    potential_edges: int
    valid_edges: int
    score: float


@dataclass(frozen=True)
class RankedCandidates:
    """Top candidate pairs, descending by score, bounded by ``capacity``."""

    pairs: tuple[CandidatePair, ...]
    capacity: int


def ocp_score(call_count: int, potential_edges: int, valid_edges: int) -> float:
    """Opcode candidacy probability score for one candidate pair."""
    if call_count < 1:
        raise ValueError("call_count must be >= 1")
    if not 0 <= valid_edges <= potential_edges <= call_count:
        raise ValueError(
            f"count ordering violated: valid={valid_edges} potential={potential_edges} "
            f"calls={call_count}"
        )
    return (VALID_EDGE_WEIGHT * valid_edges + potential_edges) / (
        NORMALIZATION_FACTOR * call_count
    )


def hex_word(value: int, instruction_length: int) -> str:
    """Full-width uppercase hex rendering of an instruction-sized value."""
    return f"0x{value:0{instruction_length // 4}X}"


def pair_to_wire(pair: CandidatePair, instruction_length: int) -> dict:
    return {
        "callOpcode": hex_word(pair.call_opcode, instruction_length),
        "retOpcode": hex_word(pair.ret_opcode, instruction_length),
        "ocpScore": pair.score,
        "callCount": pair.call_count,
        "potentialEdges": pair.potential_edges,
        "validEdges": pair.valid_edges,
    }


def _ranked_masked_numpy(
    masked: np.ndarray, rng: CandidateRange
) -> list[tuple[int, int]]:
    values, counts = np.unique(masked, return_counts=True)
    order = np.lexsort((values, -counts.astype(np.int64)))
    picked = order[rng.start : rng.end]
    return [(int(values[i]), int(counts[i])) for i in picked]


def _pair_stats_numpy(stream: InstructionStream, params: AnalysisParams) -> list[CandidatePair]:
    n = len(stream)
    inc = stream.pc_inc_per_instr
    call_spec = OpcodeMaskSpec(params.call_opcode_length, params.instruction_length)
    ret_spec = OpcodeMaskSpec(params.ret_opcode_length, params.instruction_length)
    values = np.array(stream.values, dtype=np.uint64)

    call_masked = values & np.uint64(call_spec.opcode_mask)
    ret_masked = values & np.uint64(ret_spec.opcode_mask)
    call_cands = _ranked_masked_numpy(call_masked, CandidateRange(*params.call_candidate_range))
    ret_cands = _ranked_masked_numpy(ret_masked, CandidateRange(*params.ret_candidate_range))
    if not call_cands:
        raise AnalysisError("no call candidates in callCandidateRange")
    if not ret_cands:
        raise AnalysisError("no return candidates in retCandidateRange")

    # One epilogue-position prefix sum per return candidate, shared by all
    # call candidates.
    prefixes = {}
    for ret_value, _ in ret_cands:
        is_ret = ret_masked == np.uint64(ret_value)
        prefix = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(is_ret, out=prefix[1:])
        prefixes[ret_value] = prefix

    distance = params.return_to_function_prologue_distance
    pairs = []
    for call_value, call_count in call_cands:
        callers = np.flatnonzero(call_masked == np.uint64(call_value))
        operands = values[callers] & np.uint64(call_spec.operand_mask)
        if params.is_relative_addressing:
            w = call_spec.operand_bits
            signed = (operands << np.uint64(64 - w)).view(np.int64) >> np.int64(64 - w)
            aligned = signed % inc == 0
            targets = callers[aligned] + signed[aligned] // inc
            in_range = (targets >= 0) & (targets < n)
            targets = targets[in_range]
        else:
            above_base = operands >= np.uint64(stream.pc_offset)
            delta = operands[above_base] - np.uint64(stream.pc_offset)
            hits = (delta % np.uint64(inc) == 0) & (delta // np.uint64(inc) < n)
            targets = (delta[hits] // np.uint64(inc)).astype(np.int64)
        potential = int(targets.size)
        window_lo = np.maximum(targets - distance, 0)
        for ret_value, _ in ret_cands:
            prefix = prefixes[ret_value]
            valid = int(np.count_nonzero(prefix[targets] - prefix[window_lo]))
            pairs.append(
                CandidatePair(
                    call_opcode=call_value,
                    ret_opcode=ret_value,
                    call_count=call_count,
                    potential_edges=potential,
                    valid_edges=valid,
                    score=ocp_score(call_count, potential, valid),
                )
            )
    return pairs


def _pair_stats_python(stream: InstructionStream, params: AnalysisParams) -> list[CandidatePair]:
    call_spec = OpcodeMaskSpec(params.call_opcode_length, params.instruction_length)
    ret_spec = OpcodeMaskSpec(params.ret_opcode_length, params.instruction_length)
    call_cands = rank_candidates(stream, call_spec, CandidateRange(*params.call_candidate_range))
    ret_cands = rank_candidates(stream, ret_spec, CandidateRange(*params.ret_candidate_range))
    if not call_cands:
        raise AnalysisError("no call candidates in callCandidateRange")
    if not ret_cands:
        raise AnalysisError("no return candidates in retCandidateRange")

    find_edges = (
        potential_edges_relative if params.is_relative_addressing else potential_edges_absolute
    )
    distance = params.return_to_function_prologue_distance
    pairs = []
    for call_cand in call_cands:
        potential = find_edges(stream, call_cand.canonical_value, call_spec)
        for ret_cand in ret_cands:
            valid = filter_valid_edges(
                stream, potential, ret_cand.canonical_value, ret_spec, distance
            )
            pairs.append(
                CandidatePair(
                    call_opcode=call_cand.canonical_value,
                    ret_opcode=ret_cand.canonical_value,
                    call_count=call_cand.frequency,
                    potential_edges=len(potential),
                    valid_edges=len(valid),
                    score=ocp_score(call_cand.frequency, len(potential), len(valid)),
                )
            )
    return pairs


def rank_pairs(pairs: list[CandidatePair], capacity: int) -> RankedCandidates:
    """Order by score descending, ties by ascending opcode values, keep top K."""
    ordered = sorted(pairs, key=lambda p: (-p.score, p.call_opcode, p.ret_opcode))
    return RankedCandidates(pairs=tuple(ordered[:capacity]), capacity=capacity)


def score_all(stream: InstructionStream, params: AnalysisParams) -> RankedCandidates:
    """Evaluate every candidate pair in the configured ranges and rank them."""
    if len(stream) == 0:
        raise AnalysisError("empty instruction stream")
    if params.instruction_length <= 64:
        pairs = _pair_stats_numpy(stream, params)
    else:
        pairs = _pair_stats_python(stream, params)
    return rank_pairs(pairs, params.nr_candidates)

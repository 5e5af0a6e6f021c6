"""Synthetic fixed-width-ISA binaries with planted, exactly-known ground truth.

The generator lays out ``function_count`` functions back to back.  Every
function ends in one return word, so each function entry after the first is
immediately preceded by an epilogue.  Call words reference entries of other
functions (never the entry function, which has no epilogue above it) under
the chosen addressing mode.  Filler words are rejection-sampled so that they
neither match the planted call or return masks nor carry an operand that
resolves to an instruction address.  That makes the planted pair's counts
exact: its call count, potential edges, and valid edges are all equal to the
number of planted calls, no other candidate can form a single potential
edge, and the planted pair is the unique score-1.0 ranking winner.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from random import Random

from .candidates import CandidateRange, OpcodeMaskSpec, mask_opcode, rank_candidates
from .edges import Edge, signed_operand
from .params import AnalysisParams
from .stream import BinaryImage, CodeRegion, InstructionStream, extract_instructions

_REJECTION_LIMIT = 2000


class InfeasibleSpecError(ValueError):
    """The requested synthetic layout cannot be constructed."""


@dataclass(frozen=True)
class SynthSpec:
    """Layout recipe for one synthetic binary.

    ``calls_per_function`` bounds the per-function call count (inclusive).
    ``noise_ratio`` is the approximate fraction of filler words.
    ``uncalled_prefix`` leaves functions 1..k without incoming calls, so they
    collapse into the entry node of the recovered graph.
    ``ensure_all_called`` forces every callable function to receive at least
    one call.
    """

    instruction_length: int
    call_opcode_length: int
    ret_opcode_length: int
    call_opcode: int
    ret_opcode: int
    function_count: int
    calls_per_function: tuple[int, int] = (1, 3)
    addressing: str = "absolute"
    pc_offset: int = 0
    pc_inc_per_instr: int = 1
    noise_ratio: float = 0.0
    endianness: str = "big"
    seed: int = 0
    ensure_all_called: bool = False
    uncalled_prefix: int = 0


@dataclass(frozen=True)
class GroundTruth:
    """What the generator planted, plus parameters that exactly decode it."""

    function_entries: tuple[int, ...]
    planted_edges: tuple[Edge, ...]
    params: AnalysisParams


def _validate(spec: SynthSpec) -> tuple[OpcodeMaskSpec, OpcodeMaskSpec]:
    if spec.instruction_length <= 0 or spec.instruction_length % 8 != 0:
        raise InfeasibleSpecError("instruction length must be a positive multiple of 8")
    call_spec = OpcodeMaskSpec(spec.call_opcode_length, spec.instruction_length)
    ret_spec = OpcodeMaskSpec(spec.ret_opcode_length, spec.instruction_length)
    if call_spec.operand_bits == 0:
        raise InfeasibleSpecError("call opcode needs operand bits")
    if mask_opcode(spec.call_opcode, call_spec) != spec.call_opcode:
        raise InfeasibleSpecError("call opcode is not canonical under its mask")
    if mask_opcode(spec.ret_opcode, ret_spec) != spec.ret_opcode:
        raise InfeasibleSpecError("return opcode is not canonical under its mask")
    # The two opcodes must differ in their shared top bits, otherwise planted
    # call words could count as returns or vice versa.
    shared = min(spec.call_opcode_length, spec.ret_opcode_length)
    shift = spec.instruction_length - shared
    if spec.call_opcode >> shift == spec.ret_opcode >> shift:
        raise InfeasibleSpecError(
            "call and return opcodes collide in their top "
            f"{shared} bits; counts would be ambiguous"
        )
    if spec.function_count < 1:
        raise InfeasibleSpecError("need at least one function")
    lo, hi = spec.calls_per_function
    if not 0 <= lo <= hi:
        raise InfeasibleSpecError("invalid calls_per_function bounds")
    if spec.uncalled_prefix < 0 or spec.uncalled_prefix >= spec.function_count:
        raise InfeasibleSpecError("uncalled_prefix out of range")
    callable_count = spec.function_count - 1 - spec.uncalled_prefix
    if hi > 0 and callable_count < 1:
        raise InfeasibleSpecError("no callable functions for the requested calls")
    if not 0.0 <= spec.noise_ratio <= 0.9:
        raise InfeasibleSpecError("noise_ratio must be in [0, 0.9]")
    if spec.addressing not in ("absolute", "relative"):
        raise InfeasibleSpecError(f"unknown addressing mode {spec.addressing!r}")
    if spec.endianness not in ("big", "little"):
        raise InfeasibleSpecError(f"unknown endianness {spec.endianness!r}")
    if spec.pc_offset < 0 or spec.pc_inc_per_instr < 1:
        raise InfeasibleSpecError("invalid address model")
    return call_spec, ret_spec


def _resolves(spec: SynthSpec, operand_bits: int, operand: int, position: int, total: int) -> bool:
    """Would this call-field operand produce a potential edge at ``position``?"""
    if spec.addressing == "absolute":
        if operand < spec.pc_offset:
            return False
        delta = operand - spec.pc_offset
        return delta % spec.pc_inc_per_instr == 0 and delta // spec.pc_inc_per_instr < total
    offset = signed_operand(operand, operand_bits)
    if offset % spec.pc_inc_per_instr != 0:
        return False
    return 0 <= position + offset // spec.pc_inc_per_instr < total


def _encode_call(spec: SynthSpec, call_spec: OpcodeMaskSpec, caller: int, target: int) -> int:
    if spec.addressing == "absolute":
        operand = spec.pc_offset + target * spec.pc_inc_per_instr
        if operand > call_spec.operand_mask:
            raise InfeasibleSpecError(
                f"operand width too small to address instruction {target}"
            )
    else:
        offset = (target - caller) * spec.pc_inc_per_instr
        half = 1 << (call_spec.operand_bits - 1)
        if not -half <= offset < half:
            raise InfeasibleSpecError(
                f"relative offset {offset} does not fit in {call_spec.operand_bits} bits"
            )
        operand = offset & call_spec.operand_mask
    return spec.call_opcode | operand


def _draw_noise(
    spec: SynthSpec,
    call_spec: OpcodeMaskSpec,
    ret_spec: OpcodeMaskSpec,
    rng: Random,
    position: int,
    total: int,
) -> int:
    for _ in range(_REJECTION_LIMIT):
        word = rng.getrandbits(spec.instruction_length)
        if mask_opcode(word, call_spec) == spec.call_opcode:
            continue
        if mask_opcode(word, ret_spec) == spec.ret_opcode:
            continue
        if _resolves(spec, call_spec.operand_bits, word & call_spec.operand_mask, position, total):
            continue
        return word
    raise InfeasibleSpecError(
        "could not draw collision-free noise; operand space too small for this layout"
    )


def generate(spec: SynthSpec) -> tuple[BinaryImage, GroundTruth]:
    """Emit a synthetic binary and the exact truth about its layout."""
    call_spec, ret_spec = _validate(spec)
    rng = Random(spec.seed)
    lo, hi = spec.calls_per_function

    # Pass 1: sizes and call-slot positions, in index space.
    call_counts = [rng.randint(lo, hi) for _ in range(spec.function_count)]
    filler_counts = []
    for c in call_counts:
        if spec.noise_ratio > 0:
            filler_counts.append(round(spec.noise_ratio * (c + 1) / (1.0 - spec.noise_ratio)))
        else:
            filler_counts.append(0)
    sizes = [c + f + 1 for c, f in zip(call_counts, filler_counts)]
    entries = [0]
    for size in sizes[:-1]:
        entries.append(entries[-1] + size)
    total = entries[-1] + sizes[-1]

    callable_entries = [entries[k] for k in range(1 + spec.uncalled_prefix, spec.function_count)]
    call_slots: list[int] = []  # absolute instruction indices of call words
    for k in range(spec.function_count):
        body = sizes[k] - 1
        for slot in sorted(rng.sample(range(body), call_counts[k])):
            call_slots.append(entries[k] + slot)

    if spec.ensure_all_called and callable_entries:
        if len(call_slots) < len(callable_entries):
            raise InfeasibleSpecError(
                f"{len(call_slots)} calls cannot cover {len(callable_entries)} functions"
            )
    targets: list[int] = []
    must_cover = list(callable_entries) if spec.ensure_all_called else []
    rng.shuffle(must_cover)
    for slot in call_slots:
        if must_cover:
            targets.append(must_cover.pop())
        else:
            targets.append(rng.choice(callable_entries))

    # The fixed return word must never look like an in-range call, or an
    # impostor call candidate with a perfect score could emerge.
    ret_operand = spec.ret_opcode & call_spec.operand_mask
    ret_positions = [entries[k] + sizes[k] - 1 for k in range(spec.function_count)]
    for pos in ret_positions:
        if _resolves(spec, call_spec.operand_bits, ret_operand, pos, total):
            raise InfeasibleSpecError(
                "return word's call-field operand resolves to an instruction; "
                "choose different opcodes or address model"
            )

    # Pass 2: emit words.
    words = [0] * total
    slot_to_target = dict(zip(call_slots, targets))
    planted: list[Edge] = []
    ret_set = set(ret_positions)
    for index in range(total):
        if index in ret_set:
            words[index] = spec.ret_opcode
        elif index in slot_to_target:
            target = slot_to_target[index]
            words[index] = _encode_call(spec, call_spec, index, target)
            planted.append(
                Edge(
                    caller_index=index,
                    target_index=target,
                    caller_address=spec.pc_offset + index * spec.pc_inc_per_instr,
                    target_address=spec.pc_offset + target * spec.pc_inc_per_instr,
                )
            )
        else:
            words[index] = _draw_noise(spec, call_spec, ret_spec, rng, index, total)

    byte_width = spec.instruction_length // 8
    data = b"".join(w.to_bytes(byte_width, spec.endianness) for w in words)
    image = BinaryImage(data=data, path=f"synth:seed={spec.seed}")

    params = AnalysisParams(
        instruction_length=spec.instruction_length,
        ret_opcode_length=spec.ret_opcode_length,
        call_opcode_length=spec.call_opcode_length,
        file_offset=0,
        file_offset_end=len(data),
        pc_offset=spec.pc_offset,
        pc_inc_per_instr=spec.pc_inc_per_instr,
        endianness=spec.endianness,
        nr_candidates=5,
        call_candidate_range=(0, 20),
        ret_candidate_range=(0, 10),
        return_to_function_prologue_distance=1,
        is_relative_addressing=spec.addressing == "relative",
    )
    params = _widen_ranges(params, image, spec)
    return image, GroundTruth(
        function_entries=tuple(entries),
        planted_edges=tuple(planted),
        params=params,
    )


def _widen_ranges(params: AnalysisParams, image: BinaryImage, spec: SynthSpec) -> AnalysisParams:
    """Grow the candidate ranges so the planted opcodes always rank inside them."""
    stream = extract_instructions(
        image,
        CodeRegion(0, len(image)),
        spec.instruction_length,
        spec.endianness,
        spec.pc_offset,
        spec.pc_inc_per_instr,
    )
    updates = {}
    for attr, opcode_length, opcode in (
        ("call_candidate_range", spec.call_opcode_length, spec.call_opcode),
        ("ret_candidate_range", spec.ret_opcode_length, spec.ret_opcode),
    ):
        mask_spec = OpcodeMaskSpec(opcode_length, spec.instruction_length)
        everything = rank_candidates(stream, mask_spec, CandidateRange(0, len(stream) + 1))
        rank = next(
            (c.rank for c in everything if c.canonical_value == opcode), None
        )
        lo, hi = getattr(params, attr)
        if rank is not None and rank >= hi:
            updates[attr] = (lo, rank + 1)
    return params.with_overrides(**updates) if updates else params


def truth_to_dict(truth: GroundTruth) -> dict:
    return {
        "functionEntries": list(truth.function_entries),
        "plantedEdges": [
            {
                "callerIndex": e.caller_index,
                "targetIndex": e.target_index,
                "callerAddress": e.caller_address,
                "targetAddress": e.target_address,
            }
            for e in truth.planted_edges
        ],
        "params": truth.params.to_wire_dict(),
    }


def write_with_sidecar(path: str, image: BinaryImage, truth: GroundTruth) -> str:
    """Write the raw binary plus a ground-truth JSON sidecar next to it."""
    with open(path, "wb") as fh:
        fh.write(image.data)
    sidecar = path + ".truth.json"
    with open(sidecar, "w") as fh:
        json.dump(truth_to_dict(truth), fh, indent=2)
        fh.write("\n")
    return sidecar

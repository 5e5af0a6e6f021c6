"""Resolving call operands to edges and validating them against epilogues.

A potential edge is a call-opcode instruction whose operand resolves to a
valid instruction address, either as an absolute address or as a signed
offset from the call site.  A valid edge additionally has a return-opcode
instruction within the prologue-distance window strictly above its target,
marking a function epilogue right before the callee entry.  Register-addressed
calls cannot be resolved statically and are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .candidates import OpcodeMaskSpec, extract_operand, mask_opcode
from .stream import InstructionStream


@dataclass(frozen=True)
class Edge:
    """Call-site -> callee-entry relation, in both index and address space."""

    caller_index: int
    target_index: int
    caller_address: int
    target_address: int


def signed_operand(operand: int, bits: int) -> int:
    """Reinterpret an unsigned operand as a two's-complement signed integer."""
    if operand >= 1 << (bits - 1):
        return operand - (1 << bits)
    return operand


def potential_edges_absolute(
    stream: InstructionStream, call_opcode: int, spec: OpcodeMaskSpec
) -> list[Edge]:
    """Edges where the operand is itself the target instruction address."""
    edges = []
    for i, v in enumerate(stream.values):
        if mask_opcode(v, spec) != call_opcode:
            continue
        target = stream.index_of_address(extract_operand(v, spec))
        if target is not None:
            edges.append(
                Edge(i, target, stream.address_of(i), stream.address_of(target))
            )
    return edges


def potential_edges_relative(
    stream: InstructionStream, call_opcode: int, spec: OpcodeMaskSpec
) -> list[Edge]:
    """Edges where the operand is a signed address offset from the call site.

    The offset is applied in address units: it must be a multiple of the
    per-instruction address stride and land inside the stream.  Working in
    index space keeps the result independent of the base address.
    """
    bits = spec.operand_bits
    inc = stream.pc_inc_per_instr
    n = len(stream)
    edges = []
    for i, v in enumerate(stream.values):
        if mask_opcode(v, spec) != call_opcode:
            continue
        offset = signed_operand(extract_operand(v, spec), bits)
        if offset % inc != 0:
            continue
        target = i + offset // inc
        if 0 <= target < n:
            edges.append(
                Edge(i, target, stream.address_of(i), stream.address_of(target))
            )
    return edges


def filter_valid_edges(
    stream: InstructionStream,
    edges: list[Edge],
    ret_opcode: int,
    ret_spec: OpcodeMaskSpec,
    distance: int,
) -> list[Edge]:
    """Keep edges whose target has a return instruction in the window
    [target - distance, target - 1].

    Targets at index 0 have an empty window and are always dropped: the
    stream entry point has no epilogue above it.
    """
    if distance < 1:
        raise ValueError(f"prologue distance must be >= 1, got {distance}")
    kept = []
    for edge in edges:
        lo = max(edge.target_index - distance, 0)
        for j in range(lo, edge.target_index):
            if mask_opcode(stream.values[j], ret_spec) == ret_opcode:
                kept.append(edge)
                break
    return kept

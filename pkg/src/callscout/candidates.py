"""Opcode candidate enumeration by masked-frequency ranking.

An opcode is taken to occupy the most significant bits of an instruction; its
canonical form is the full-width value with all operand bits zeroed, so a
6-bit opcode on a 32-bit ISA prints as e.g. 0x0C000000 rather than 0b000011.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .stream import InstructionStream


@dataclass(frozen=True)
class OpcodeMaskSpec:
    """Bit split of an instruction into opcode (top bits) and operand (rest)."""

    opcode_length: int
    instruction_length: int

    def __post_init__(self):
        if not 1 <= self.opcode_length <= self.instruction_length:
            raise ValueError(
                f"opcode length {self.opcode_length} out of range for "
                f"{self.instruction_length}-bit instructions"
            )

    @property
    def operand_bits(self) -> int:
        return self.instruction_length - self.opcode_length

    @property
    def operand_mask(self) -> int:
        return (1 << self.operand_bits) - 1

    @property
    def opcode_mask(self) -> int:
        return ((1 << self.opcode_length) - 1) << self.operand_bits


@dataclass(frozen=True)
class OpcodeCandidate:
    """A canonical opcode value with its stream frequency and popularity rank."""

    canonical_value: int
    frequency: int
    rank: int


@dataclass(frozen=True)
class CandidateRange:
    """Half-open popularity-rank slice [start, end) to search."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.start >= self.end:
            raise ValueError(f"invalid candidate range [{self.start}, {self.end})")


def mask_opcode(value: int, spec: OpcodeMaskSpec) -> int:
    """Clear the operand bits, leaving the canonical opcode value."""
    return value & spec.opcode_mask


def extract_operand(value: int, spec: OpcodeMaskSpec) -> int:
    """Return the low operand bits of an instruction value."""
    if spec.operand_bits == 0:
        raise ValueError("operand-free opcode: opcode occupies the whole instruction")
    return value & spec.operand_mask


def rank_candidates(
    stream: InstructionStream, spec: OpcodeMaskSpec, rng: CandidateRange
) -> list[OpcodeCandidate]:
    """Rank distinct masked values by descending frequency and slice [start, end).

    Ties are broken by ascending canonical value, so rankings are
    deterministic.  Ranks are positions in the full ordering; a start beyond
    the number of distinct values yields an empty list.
    """
    if len(stream) == 0:
        raise ValueError("cannot rank candidates of an empty stream")
    counts = Counter(mask_opcode(v, spec) for v in stream.values)
    ordering = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [
        OpcodeCandidate(canonical_value=value, frequency=freq, rank=rank)
        for rank, (value, freq) in enumerate(ordering)
        if rng.start <= rank < rng.end
    ]

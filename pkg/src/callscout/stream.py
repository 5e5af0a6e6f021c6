"""Loading raw binaries and decoding them into fixed-width instruction streams.

No container format (ELF, PE, ...) is parsed: the caller supplies the byte
span holding code, the instruction width in bits, the endianness, and the
program-counter model (address of the first instruction plus the address
stride between consecutive instructions).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np

MAX_ADDRESS = 2**64 - 1


class StreamError(ValueError):
    """Invalid image, region, or decode parameters."""


@dataclass(frozen=True)
class BinaryImage:
    """Raw bytes of a binary file, uninterpreted."""

    data: bytes
    path: str = "<memory>"

    def __post_init__(self):
        if len(self.data) == 0:
            raise StreamError("empty image")

    def __len__(self) -> int:
        return len(self.data)


@dataclass(frozen=True)
class CodeRegion:
    """Half-open byte span [file_offset, file_offset_end) treated as code."""

    file_offset: int
    file_offset_end: int

    def __post_init__(self):
        if self.file_offset < 0 or self.file_offset >= self.file_offset_end:
            raise StreamError(
                f"invalid code region [{self.file_offset}, {self.file_offset_end})"
            )

    def size(self) -> int:
        return self.file_offset_end - self.file_offset


@dataclass(frozen=True)
class Instruction:
    """One decoded instruction with its stream position and assigned address."""

    value: int
    index: int
    address: int


@dataclass(frozen=True)
class InstructionStream:
    """Decoded instruction values plus the address model that produced them.

    ``values`` is an immutable tuple of endianness-normalized unsigned
    integers; instruction ``i`` lives at address
    ``pc_offset + i * pc_inc_per_instr``.  ``dropped_bytes`` records trailing
    region bytes that did not fill a whole instruction.
    """

    values: tuple[int, ...]
    instruction_length: int
    pc_offset: int
    pc_inc_per_instr: int
    endianness: str
    dropped_bytes: int = 0

    def __len__(self) -> int:
        return len(self.values)

    def address_of(self, index: int) -> int:
        return self.pc_offset + index * self.pc_inc_per_instr

    def instruction(self, index: int) -> Instruction:
        return Instruction(self.values[index], index, self.address_of(index))

    def instructions(self) -> Iterator[Instruction]:
        for i, v in enumerate(self.values):
            yield Instruction(v, i, self.address_of(i))

    def index_of_address(self, address: int) -> int | None:
        """Map an address back to an instruction index, or None if it does
        not land exactly on an instruction in this stream."""
        if address < self.pc_offset:
            return None
        delta = address - self.pc_offset
        if delta % self.pc_inc_per_instr != 0:
            return None
        index = delta // self.pc_inc_per_instr
        if index >= len(self.values):
            return None
        return index


def load_image(path: str) -> BinaryImage:
    """Read a binary file whole; raises StreamError on missing or empty files."""
    if not os.path.isfile(path):
        raise StreamError(f"no such file: {path}")
    with open(path, "rb") as fh:
        data = fh.read()
    if not data:
        raise StreamError("empty image")
    return BinaryImage(data=data, path=path)


def _decode_values(raw: bytes, byte_width: int, endianness: str) -> tuple[int, ...]:
    if byte_width <= 8:
        # Vectorized: byte matrix dotted with per-position place values.
        mat = np.frombuffer(raw, dtype=np.uint8).reshape(-1, byte_width).astype(np.uint64)
        powers = np.array(
            [1 << (8 * k) for k in range(byte_width)], dtype=np.uint64
        )
        if endianness == "big":
            powers = powers[::-1]
        return tuple(int(v) for v in (mat * powers).sum(axis=1, dtype=np.uint64))
    return tuple(
        int.from_bytes(raw[i : i + byte_width], endianness)
        for i in range(0, len(raw), byte_width)
    )


def extract_instructions(
    image: BinaryImage,
    region: CodeRegion,
    instruction_length: int,
    endianness: str,
    pc_offset: int,
    pc_inc_per_instr: int,
) -> InstructionStream:
    """Slice the code region out of the image and decode it.

    Consecutive (instruction_length/8)-byte groups are read as unsigned
    integers under the given endianness.  Trailing bytes that do not fill a
    whole instruction are dropped and counted in ``dropped_bytes``.
    """
    if instruction_length <= 0 or instruction_length % 8 != 0:
        raise StreamError(
            f"instructionLength must be a positive multiple of 8, got {instruction_length}"
        )
    if endianness not in ("big", "little"):
        raise StreamError(f"endianness must be 'big' or 'little', got {endianness!r}")
    if pc_inc_per_instr < 1:
        raise StreamError(f"pcIncPerInstr must be >= 1, got {pc_inc_per_instr}")
    if pc_offset < 0:
        raise StreamError(f"pcOffset must be >= 0, got {pc_offset}")
    if region.file_offset_end > len(image):
        raise StreamError(
            f"code region [{region.file_offset}, {region.file_offset_end}) exceeds "
            f"image size {len(image)}"
        )

    byte_width = instruction_length // 8
    span = image.data[region.file_offset : region.file_offset_end]
    count = len(span) // byte_width
    if count == 0:
        raise StreamError(
            f"code region of {len(span)} bytes is smaller than one "
            f"{byte_width}-byte instruction"
        )
    dropped = len(span) - count * byte_width
    if pc_offset + (count - 1) * pc_inc_per_instr > MAX_ADDRESS:
        raise StreamError("address space overflow: last instruction address exceeds 2^64-1")

    values = _decode_values(span[: count * byte_width], byte_width, endianness)
    return InstructionStream(
        values=values,
        instruction_length=instruction_length,
        pc_offset=pc_offset,
        pc_inc_per_instr=pc_inc_per_instr,
        endianness=endianness,
        dropped_bytes=dropped,
    )

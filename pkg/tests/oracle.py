"""Naive reference recount used to cross-check the analysis engines.

Deliberately shares no code with the package: words are decoded with
int.from_bytes, opcodes taken by shifting (not masking), and every count is
a plain nested loop.  Slow and obviously correct.
"""

from __future__ import annotations


def decode_words(
    data: bytes,
    instruction_length: int,
    endianness: str,
    file_offset: int = 0,
    file_offset_end: int | None = None,
) -> list[int]:
    byte_width = instruction_length // 8
    end = len(data) if file_offset_end is None else file_offset_end
    span = data[file_offset:end]
    usable = len(span) - len(span) % byte_width
    return [
        int.from_bytes(span[i : i + byte_width], endianness)
        for i in range(0, usable, byte_width)
    ]


def top_masked(
    words: list[int], instruction_length: int, opcode_length: int, start: int, end: int
) -> list[tuple[int, int]]:
    """(canonical value, frequency) for popularity ranks [start, end)."""
    shift = instruction_length - opcode_length
    freq: dict[int, int] = {}
    for w in words:
        key = (w >> shift) << shift
        freq[key] = freq.get(key, 0) + 1
    ordering = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    return ordering[start:end]


def count_pair(
    words: list[int],
    instruction_length: int,
    call_opcode_length: int,
    ret_opcode_length: int,
    call_opcode: int,
    ret_opcode: int,
    pc_offset: int,
    pc_inc_per_instr: int,
    distance: int,
    relative: bool,
) -> tuple[int, int, int]:
    """(call count, potential edges, valid edges) for one opcode pair."""
    call_shift = instruction_length - call_opcode_length
    ret_shift = instruction_length - ret_opcode_length
    n = len(words)
    callers = [i for i, w in enumerate(words) if (w >> call_shift) << call_shift == call_opcode]

    targets = []
    for i in callers:
        operand = words[i] - ((words[i] >> call_shift) << call_shift)
        if relative:
            if operand >= 1 << (call_shift - 1):
                operand -= 1 << call_shift
            if operand % pc_inc_per_instr != 0:
                continue
            t = i + operand // pc_inc_per_instr
        else:
            if operand < pc_offset:
                continue
            if (operand - pc_offset) % pc_inc_per_instr != 0:
                continue
            t = (operand - pc_offset) // pc_inc_per_instr
        if 0 <= t < n:
            targets.append(t)

    valid = 0
    for t in targets:
        for j in range(max(0, t - distance), t):
            if (words[j] >> ret_shift) << ret_shift == ret_opcode:
                valid += 1
                break
    return len(callers), len(targets), valid


def all_pairs(data: bytes, wire: dict) -> dict[tuple[int, int], tuple[int, int, int, float]]:
    """Recount every candidate pair from a wire-format parameter dict.

    Returns {(callOpcode, retOpcode): (callCount, potentialEdges, validEdges,
    score)} over the full candidate ranges.
    """
    il = wire["instructionLength"]
    words = decode_words(
        data,
        il,
        wire.get("endiannes", "big"),
        wire.get("fileOffset", 0),
        wire.get("fileOffsetEnd"),
    )
    call_range = wire.get("callCandidateRange", [0, 20])
    ret_range = wire.get("retCandidateRange", [0, 10])
    calls = top_masked(words, il, wire["callOpcodeLength"], call_range[0], call_range[1])
    rets = top_masked(words, il, wire["retOpcodeLength"], ret_range[0], ret_range[1])

    out = {}
    for call_value, _ in calls:
        for ret_value, _ in rets:
            c, p, v = count_pair(
                words,
                il,
                wire["callOpcodeLength"],
                wire["retOpcodeLength"],
                call_value,
                ret_value,
                wire.get("pcOffset", 0),
                wire.get("pcIncPerInstr", 1),
                wire.get("returnToFunctionPrologueDistance", 3),
                wire.get("isRelativeAddressing", False),
            )
            out[(call_value, ret_value)] = (c, p, v, (2 * v + p) / (3 * c))
    return out

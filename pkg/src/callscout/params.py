"""The analysis parameter record, its validation, and its wire format.

The JSON / CLI surface uses the camelCase field names of the public API
(``instructionLength``, ``callCandidateRange``, ...).  The historical
``endiannes`` spelling is the canonical wire name for the byte-order field;
``endianness`` is accepted as an alias on input.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Any

ENDIANNESS_WIRE = "endiannes"
ENDIANNESS_ALIAS = "endianness"

# wire name -> dataclass attribute
WIRE_TO_ATTR = {
    "instructionLength": "instruction_length",
    "retOpcodeLength": "ret_opcode_length",
    "callOpcodeLength": "call_opcode_length",
    "fileOffset": "file_offset",
    "fileOffsetEnd": "file_offset_end",
    "pcOffset": "pc_offset",
    "pcIncPerInstr": "pc_inc_per_instr",
    ENDIANNESS_WIRE: "endianness",
    "nrCandidates": "nr_candidates",
    "callCandidateRange": "call_candidate_range",
    "retCandidateRange": "ret_candidate_range",
    "returnToFunctionPrologueDistance": "return_to_function_prologue_distance",
    "unknownCodeEntry": "unknown_code_entry",
    "includeInstructions": "include_instructions",
    "isRelativeAddressing": "is_relative_addressing",
}
ATTR_TO_WIRE = {attr: wire for wire, attr in WIRE_TO_ATTR.items()}

REQUIRED_WIRE_FIELDS = ("instructionLength", "retOpcodeLength", "callOpcodeLength")

_HEX_FIELDS = {"pcOffset"}
_BOOL_FIELDS = {"unknownCodeEntry", "includeInstructions", "isRelativeAddressing"}
_RANGE_FIELDS = {"callCandidateRange", "retCandidateRange"}


class ParamError(ValueError):
    """One or more invalid analysis parameters, with field-level messages."""

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{f}: {m}" for f, m in errors))

    def as_details(self) -> list[dict[str, str]]:
        return [{"field": f, "message": m} for f, m in self.errors]


def parse_int(value: Any, field_name: str) -> int:
    """Accept plain ints and, for address-like fields, 0x-prefixed hex strings."""
    if isinstance(value, bool):
        raise ParamError([(field_name, "expected an integer")])
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.strip()
        try:
            if field_name in _HEX_FIELDS:
                return int(text, 0)
            return int(text, 10)
        except ValueError:
            pass
    raise ParamError([(field_name, f"expected an integer, got {value!r}")])


@dataclass(frozen=True)
class AnalysisParams:
    """Complete parameter record controlling one analysis run.

    Only the three opcode-geometry fields are required; everything else has a
    documented default.  ``file_offset_end=None`` means "end of file" and is
    resolved against the image before extraction.
    """

    instruction_length: int
    ret_opcode_length: int
    call_opcode_length: int
    file_offset: int = 0
    file_offset_end: int | None = None
    pc_offset: int = 0
    pc_inc_per_instr: int = 1
    endianness: str = "big"
    nr_candidates: int = 5
    call_candidate_range: tuple[int, int] = (0, 20)
    ret_candidate_range: tuple[int, int] = (0, 10)
    return_to_function_prologue_distance: int = 3
    unknown_code_entry: bool = False
    include_instructions: bool = False
    is_relative_addressing: bool = False

    def __post_init__(self):
        errors = self._collect_errors()
        if errors:
            raise ParamError(errors)

    def _collect_errors(self) -> list[tuple[str, str]]:
        errors = []

        def err(attr: str, message: str):
            errors.append((ATTR_TO_WIRE[attr], message))

        il = self.instruction_length
        if not isinstance(il, int) or il <= 0 or il % 8 != 0:
            err("instruction_length", "must be a positive multiple of 8")
        if not isinstance(self.call_opcode_length, int) or not (
            1 <= self.call_opcode_length
        ):
            err("call_opcode_length", "must be a positive integer")
        elif isinstance(il, int) and il > 0 and self.call_opcode_length >= il:
            err(
                "call_opcode_length",
                f"must be < instructionLength ({il}): a call needs operand bits",
            )
        if not isinstance(self.ret_opcode_length, int) or self.ret_opcode_length < 1:
            err("ret_opcode_length", "must be a positive integer")
        elif isinstance(il, int) and il > 0 and self.ret_opcode_length > il:
            err("ret_opcode_length", f"must be <= instructionLength ({il})")
        if self.file_offset < 0:
            err("file_offset", "must be >= 0")
        if self.file_offset_end is not None and self.file_offset_end <= self.file_offset:
            err("file_offset_end", "must be > fileOffset")
        if self.pc_offset < 0:
            err("pc_offset", "must be >= 0")
        if self.pc_inc_per_instr < 1:
            err("pc_inc_per_instr", "must be >= 1")
        if self.endianness not in ("big", "little"):
            err("endianness", "must be 'big' or 'little'")
        if self.nr_candidates < 1:
            err("nr_candidates", "must be >= 1")
        for attr in ("call_candidate_range", "ret_candidate_range"):
            rng = getattr(self, attr)
            if (
                not isinstance(rng, tuple)
                or len(rng) != 2
                or not all(isinstance(x, int) for x in rng)
            ):
                err(attr, "must be a pair of integers [start, end)")
            elif rng[0] < 0 or rng[0] >= rng[1]:
                err(attr, "must satisfy 0 <= start < end")
        if self.return_to_function_prologue_distance < 1:
            err("return_to_function_prologue_distance", "must be >= 1")
        return errors

    def with_overrides(self, **attrs) -> "AnalysisParams":
        return replace(self, **attrs)

    def resolve_region_end(self, image_size: int) -> "AnalysisParams":
        """Fill in file_offset_end with the image size when left unset."""
        if self.file_offset_end is not None:
            return self
        return replace(self, file_offset_end=image_size)

    def to_wire_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in fields(self):
            wire = ATTR_TO_WIRE[f.name]
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            out[wire] = value
        return out


def params_from_wire(data: dict[str, Any]) -> AnalysisParams:
    """Build AnalysisParams from a wire-format dict, with field-level errors.

    Unknown keys are rejected so that typos surface instead of silently
    falling back to defaults.
    """
    if not isinstance(data, dict):
        raise ParamError([("params", "expected a JSON object")])
    errors: list[tuple[str, str]] = []
    attrs: dict[str, Any] = {}
    seen = dict(data)
    if ENDIANNESS_ALIAS in seen:
        value = seen.pop(ENDIANNESS_ALIAS)
        seen.setdefault(ENDIANNESS_WIRE, value)

    for wire, raw in seen.items():
        if wire not in WIRE_TO_ATTR:
            errors.append((wire, "unknown parameter"))
            continue
        attr = WIRE_TO_ATTR[wire]
        try:
            if wire in _BOOL_FIELDS:
                if not isinstance(raw, bool):
                    raise ParamError([(wire, "expected true or false")])
                attrs[attr] = raw
            elif wire == ENDIANNESS_WIRE:
                attrs[attr] = raw
            elif wire in _RANGE_FIELDS:
                if not isinstance(raw, (list, tuple)) or len(raw) != 2:
                    raise ParamError([(wire, "expected a pair [start, end)")])
                attrs[attr] = (
                    parse_int(raw[0], wire),
                    parse_int(raw[1], wire),
                )
            elif wire == "fileOffsetEnd" and raw is None:
                attrs[attr] = None
            else:
                attrs[attr] = parse_int(raw, wire)
        except ParamError as exc:
            errors.extend(exc.errors)

    for wire in REQUIRED_WIRE_FIELDS:
        if WIRE_TO_ATTR[wire] not in attrs:
            errors.append((wire, "required parameter is missing"))
    if errors:
        raise ParamError(errors)
    return AnalysisParams(**attrs)

/** Client-side analysis parameter validation.
 *
 * This mirrors the service's validation pass exactly: same field names, same
 * messages, same error ordering.  The contract tests assert that the arrays
 * produced here deep-equal the `error.details` the service returns, so any
 * change on either side must be made on both.
 */

import type { FieldError } from "./types.js";

export const ENDIANNESS_WIRE = "endiannes";
export const ENDIANNESS_ALIAS = "endianness";

export const WIRE_FIELDS = [
  "instructionLength",
  "retOpcodeLength",
  "callOpcodeLength",
  "fileOffset",
  "fileOffsetEnd",
  "pcOffset",
  "pcIncPerInstr",
  ENDIANNESS_WIRE,
  "nrCandidates",
  "callCandidateRange",
  "retCandidateRange",
  "returnToFunctionPrologueDistance",
  "unknownCodeEntry",
  "includeInstructions",
  "isRelativeAddressing",
] as const;

export const REQUIRED_WIRE_FIELDS = [
  "instructionLength",
  "retOpcodeLength",
  "callOpcodeLength",
] as const;

const WIRE_FIELD_SET = new Set<string>(WIRE_FIELDS);
const HEX_FIELDS = new Set(["pcOffset"]);
const BOOL_FIELDS = new Set(["unknownCodeEntry", "includeInstructions", "isRelativeAddressing"]);
const RANGE_FIELDS = new Set(["callCandidateRange", "retCandidateRange"]);

export const DEFAULTS = {
  fileOffset: 0,
  fileOffsetEnd: null as number | null,
  pcOffset: 0,
  pcIncPerInstr: 1,
  endiannes: "big",
  nrCandidates: 5,
  callCandidateRange: [0, 20] as [number, number],
  retCandidateRange: [0, 10] as [number, number],
  returnToFunctionPrologueDistance: 3,
};

/** Render a JSON value the way the service quotes it in error messages. */
export function pyRepr(value: unknown): string {
  if (value === null) return "None";
  if (value === true) return "True";
  if (value === false) return "False";
  if (typeof value === "number") return String(value);
  if (typeof value === "string") return pyStrRepr(value);
  if (Array.isArray(value)) return "[" + value.map(pyRepr).join(", ") + "]";
  if (typeof value === "object") {
    const parts = Object.entries(value as Record<string, unknown>).map(
      ([k, v]) => pyStrRepr(k) + ": " + pyRepr(v),
    );
    return "{" + parts.join(", ") + "}";
  }
  return String(value);
}

function pyStrRepr(text: string): string {
  const quote = text.includes("'") && !text.includes('"') ? '"' : "'";
  let out = quote;
  for (const ch of text) {
    if (ch === "\\" || ch === quote) out += "\\" + ch;
    else if (ch === "\n") out += "\\n";
    else if (ch === "\r") out += "\\r";
    else if (ch === "\t") out += "\\t";
    else if (ch < " " || ch === "\x7f") {
      out += "\\x" + ch.charCodeAt(0).toString(16).padStart(2, "0");
    } else out += ch;
  }
  return out + quote;
}

// int(text, 10): optional sign, digits with single underscores between them
const BASE10 = /^[+-]?[0-9](?:_?[0-9])*$/;
// int(text, 0): prefixed literals, or decimal without leading zeros
const BASE0_HEX = /^[+-]?0[xX](?:_?[0-9a-fA-F])+$/;
const BASE0_OCT = /^[+-]?0[oO](?:_?[0-7])+$/;
const BASE0_BIN = /^[+-]?0[bB](?:_?[01])+$/;
const BASE0_DEC = /^[+-]?(?:[1-9](?:_?[0-9])*|0(?:_?0)*)$/;

function parseIntText(text: string, hex: boolean): number | null {
  const sign = text.startsWith("-") ? -1 : 1;
  const digits = (s: string) => s.replace(/^[+-]/, "").replace(/_/g, "");
  if (!hex) {
    if (!BASE10.test(text)) return null;
    return sign * parseInt(digits(text), 10);
  }
  if (BASE0_HEX.test(text)) return sign * parseInt(digits(text).slice(2), 16);
  if (BASE0_OCT.test(text)) return sign * parseInt(digits(text).slice(2), 8);
  if (BASE0_BIN.test(text)) return sign * parseInt(digits(text).slice(2), 2);
  if (BASE0_DEC.test(text)) return sign * parseInt(digits(text), 10);
  return null;
}

type IntResult = { ok: true; value: number } | { ok: false; error: FieldError };

/** Accept plain integers and, for address-like fields, 0x-prefixed strings. */
export function parseWireInt(value: unknown, fieldName: string): IntResult {
  if (typeof value === "boolean") {
    return { ok: false, error: { field: fieldName, message: "expected an integer" } };
  }
  if (typeof value === "number" && Number.isInteger(value)) {
    return { ok: true, value };
  }
  if (typeof value === "string") {
    const parsed = parseIntText(value.trim(), HEX_FIELDS.has(fieldName));
    if (parsed !== null) return { ok: true, value: parsed };
  }
  return {
    ok: false,
    error: { field: fieldName, message: `expected an integer, got ${pyRepr(value)}` },
  };
}

/** Validate a wire-format parameter object; empty result means acceptable. */
export function validateParams(data: unknown): FieldError[] {
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    return [{ field: "params", message: "expected a JSON object" }];
  }
  const errors: FieldError[] = [];
  const attrs = new Map<string, unknown>();
  const seen: Record<string, unknown> = { ...(data as Record<string, unknown>) };
  if (ENDIANNESS_ALIAS in seen) {
    const aliased = seen[ENDIANNESS_ALIAS];
    delete seen[ENDIANNESS_ALIAS];
    // canonical spelling wins when both are present
    if (!(ENDIANNESS_WIRE in seen)) seen[ENDIANNESS_WIRE] = aliased;
  }

  for (const [wire, raw] of Object.entries(seen)) {
    if (!WIRE_FIELD_SET.has(wire)) {
      errors.push({ field: wire, message: "unknown parameter" });
      continue;
    }
    if (BOOL_FIELDS.has(wire)) {
      if (typeof raw !== "boolean") {
        errors.push({ field: wire, message: "expected true or false" });
      } else {
        attrs.set(wire, raw);
      }
    } else if (wire === ENDIANNESS_WIRE) {
      attrs.set(wire, raw);
    } else if (RANGE_FIELDS.has(wire)) {
      if (!Array.isArray(raw) || raw.length !== 2) {
        errors.push({ field: wire, message: "expected a pair [start, end)" });
        continue;
      }
      // second element is never inspected when the first fails to parse
      const first = parseWireInt(raw[0], wire);
      if (!first.ok) {
        errors.push(first.error);
        continue;
      }
      const second = parseWireInt(raw[1], wire);
      if (!second.ok) {
        errors.push(second.error);
        continue;
      }
      attrs.set(wire, [first.value, second.value]);
    } else if (wire === "fileOffsetEnd" && raw === null) {
      attrs.set(wire, null);
    } else {
      const parsed = parseWireInt(raw, wire);
      if (parsed.ok) attrs.set(wire, parsed.value);
      else errors.push(parsed.error);
    }
  }

  for (const wire of REQUIRED_WIRE_FIELDS) {
    if (!attrs.has(wire)) {
      errors.push({ field: wire, message: "required parameter is missing" });
    }
  }
  if (errors.length > 0) return errors;

  const il = attrs.get("instructionLength") as number;
  const call = attrs.get("callOpcodeLength") as number;
  const ret = attrs.get("retOpcodeLength") as number;
  const fileOffset = (attrs.get("fileOffset") as number | undefined) ?? DEFAULTS.fileOffset;
  const fileOffsetEnd = attrs.has("fileOffsetEnd")
    ? (attrs.get("fileOffsetEnd") as number | null)
    : DEFAULTS.fileOffsetEnd;
  const pcOffset = (attrs.get("pcOffset") as number | undefined) ?? DEFAULTS.pcOffset;
  const pcInc = (attrs.get("pcIncPerInstr") as number | undefined) ?? DEFAULTS.pcIncPerInstr;
  const endianness = attrs.has(ENDIANNESS_WIRE) ? attrs.get(ENDIANNESS_WIRE) : DEFAULTS.endiannes;
  const nrCandidates = (attrs.get("nrCandidates") as number | undefined) ?? DEFAULTS.nrCandidates;
  const callRange =
    (attrs.get("callCandidateRange") as [number, number] | undefined) ?? DEFAULTS.callCandidateRange;
  const retRange =
    (attrs.get("retCandidateRange") as [number, number] | undefined) ?? DEFAULTS.retCandidateRange;
  const distance =
    (attrs.get("returnToFunctionPrologueDistance") as number | undefined) ??
    DEFAULTS.returnToFunctionPrologueDistance;

  if (il <= 0 || il % 8 !== 0) {
    errors.push({ field: "instructionLength", message: "must be a positive multiple of 8" });
  }
  if (call < 1) {
    errors.push({ field: "callOpcodeLength", message: "must be a positive integer" });
  } else if (il > 0 && call >= il) {
    errors.push({
      field: "callOpcodeLength",
      message: `must be < instructionLength (${il}): a call needs operand bits`,
    });
  }
  if (ret < 1) {
    errors.push({ field: "retOpcodeLength", message: "must be a positive integer" });
  } else if (il > 0 && ret > il) {
    errors.push({ field: "retOpcodeLength", message: `must be <= instructionLength (${il})` });
  }
  if (fileOffset < 0) {
    errors.push({ field: "fileOffset", message: "must be >= 0" });
  }
  if (fileOffsetEnd !== null && fileOffsetEnd <= fileOffset) {
    errors.push({ field: "fileOffsetEnd", message: "must be > fileOffset" });
  }
  if (pcOffset < 0) {
    errors.push({ field: "pcOffset", message: "must be >= 0" });
  }
  if (pcInc < 1) {
    errors.push({ field: "pcIncPerInstr", message: "must be >= 1" });
  }
  if (endianness !== "big" && endianness !== "little") {
    errors.push({ field: ENDIANNESS_WIRE, message: "must be 'big' or 'little'" });
  }
  if (nrCandidates < 1) {
    errors.push({ field: "nrCandidates", message: "must be >= 1" });
  }
  for (const [wire, rng] of [
    ["callCandidateRange", callRange],
    ["retCandidateRange", retRange],
  ] as const) {
    if (rng[0] < 0 || rng[0] >= rng[1]) {
      errors.push({ field: wire, message: "must satisfy 0 <= start < end" });
    }
  }
  if (distance < 1) {
    errors.push({ field: "returnToFunctionPrologueDistance", message: "must be >= 1" });
  }
  return errors;
}

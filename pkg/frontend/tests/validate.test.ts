/** Unit checks for the client-side validator's trickier corners. */

import { describe, expect, it } from "vitest";

import { parseWireInt, pyRepr, validateParams } from "../src/validate.js";

const BASE = { instructionLength: 32, retOpcodeLength: 32, callOpcodeLength: 6 };

describe("integer grammar", () => {
  it("accepts hex, octal, and binary strings for pcOffset only", () => {
    expect(parseWireInt("0x100000", "pcOffset")).toEqual({ ok: true, value: 1048576 });
    expect(parseWireInt("0o17", "pcOffset")).toEqual({ ok: true, value: 15 });
    expect(parseWireInt("0b101", "pcOffset")).toEqual({ ok: true, value: 5 });
    expect(parseWireInt("0x10", "fileOffset").ok).toBe(false);
  });

  it("allows leading zeros in plain decimal fields but not in pcOffset", () => {
    expect(parseWireInt("007", "fileOffset")).toEqual({ ok: true, value: 7 });
    expect(parseWireInt("017", "pcOffset").ok).toBe(false);
    expect(parseWireInt("0", "pcOffset")).toEqual({ ok: true, value: 0 });
    expect(parseWireInt("00", "pcOffset")).toEqual({ ok: true, value: 0 });
  });

  it("allows single underscores between digits", () => {
    expect(parseWireInt("1_000", "fileOffset")).toEqual({ ok: true, value: 1000 });
    expect(parseWireInt("0x_ff", "pcOffset")).toEqual({ ok: true, value: 255 });
    expect(parseWireInt("_1", "fileOffset").ok).toBe(false);
    expect(parseWireInt("1_", "fileOffset").ok).toBe(false);
    expect(parseWireInt("1__0", "fileOffset").ok).toBe(false);
  });

  it("accepts signs and surrounding whitespace", () => {
    expect(parseWireInt(" -5 ", "fileOffset")).toEqual({ ok: true, value: -5 });
    expect(parseWireInt("+12", "fileOffset")).toEqual({ ok: true, value: 12 });
  });
});

describe("value quoting", () => {
  it("renders JSON values the way the service does", () => {
    expect(pyRepr(null)).toBe("None");
    expect(pyRepr(true)).toBe("True");
    expect(pyRepr("abc")).toBe("'abc'");
    expect(pyRepr("it's")).toBe('"it\'s"');
    expect(pyRepr(2.5)).toBe("2.5");
    expect(pyRepr([1, "a"])).toBe("[1, 'a']");
    expect(pyRepr({ a: 1 })).toBe("{'a': 1}");
  });
});

describe("alias handling", () => {
  it("maps the long spelling onto the canonical field", () => {
    expect(validateParams({ ...BASE, endianness: "little" })).toEqual([]);
    expect(validateParams({ ...BASE, endianness: "weird" })).toEqual([
      { field: "endiannes", message: "must be 'big' or 'little'" },
    ]);
  });

  it("prefers the canonical spelling when both are present", () => {
    expect(validateParams({ ...BASE, endianness: "weird", endiannes: "big" })).toEqual([]);
    expect(validateParams({ ...BASE, endiannes: "weird", endianness: "big" })).toEqual([
      { field: "endiannes", message: "must be 'big' or 'little'" },
    ]);
  });
});

describe("error ordering", () => {
  it("reports a parse failure and the missing requirement for the same field", () => {
    expect(validateParams({ instructionLength: "x", retOpcodeLength: 32, callOpcodeLength: 6 })).toEqual([
      { field: "instructionLength", message: "expected an integer, got 'x'" },
      { field: "instructionLength", message: "required parameter is missing" },
    ]);
  });

  it("stops range parsing at the first bad element", () => {
    expect(validateParams({ ...BASE, callCandidateRange: ["x", "y"] })).toEqual([
      { field: "callCandidateRange", message: "expected an integer, got 'x'" },
    ]);
  });

  it("checks requirements in a fixed field order", () => {
    expect(validateParams({})).toEqual([
      { field: "instructionLength", message: "required parameter is missing" },
      { field: "retOpcodeLength", message: "required parameter is missing" },
      { field: "callOpcodeLength", message: "required parameter is missing" },
    ]);
  });

  it("rejects non-object input outright", () => {
    expect(validateParams([1, 2])).toEqual([{ field: "params", message: "expected a JSON object" }]);
    expect(validateParams(null)).toEqual([{ field: "params", message: "expected a JSON object" }]);
  });
});

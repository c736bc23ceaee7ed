import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { num, parseCsv, readTable, SchemaError, SCHEMAS } from "../src/csv";

function tmpCsv(name: string, text: string): string {
  const dir = mkdtempSync(join(tmpdir(), "figures-"));
  const path = join(dir, name);
  writeFileSync(path, text, "utf8");
  return path;
}

describe("parseCsv", () => {
  it("splits header and rows", () => {
    const t = parseCsv("a,b\n1,2\n3,4\n");
    expect(t.header).toEqual(["a", "b"]);
    expect(t.rows).toEqual([
      ["1", "2"],
      ["3", "4"],
    ]);
  });

  it("keeps empty trailing cells", () => {
    const t = parseCsv("a,b,c\n1,,\n");
    expect(t.rows[0]).toEqual(["1", "", ""]);
  });

  it("rejects empty input", () => {
    expect(() => parseCsv("")).toThrow(SchemaError);
  });
});

describe("readTable", () => {
  it("accepts a header-only file", () => {
    const path = tmpCsv("sweep.csv", SCHEMAS.sweep.join(",") + "\n");
    expect(readTable(path, "sweep").rows).toEqual([]);
  });

  it("rejects a wrong header", () => {
    const path = tmpCsv("bad.csv", "alpha,beta\n1,2\n");
    expect(() => readTable(path, "sweep")).toThrow(SchemaError);
  });

  it("rejects reordered columns", () => {
    const shuffled = [...SCHEMAS.radius].reverse().join(",");
    const path = tmpCsv("bad2.csv", shuffled + "\n");
    expect(() => readTable(path, "radius")).toThrow(SchemaError);
  });

  it("rejects ragged rows", () => {
    const path = tmpCsv(
      "ragged.csv",
      SCHEMAS.radius.join(",") + "\n1,2\n",
    );
    expect(() => readTable(path, "radius")).toThrow(SchemaError);
  });
});

describe("num", () => {
  it("parses round-trip floats exactly", () => {
    expect(num("0.20000000000000001")).toBe(0.2);
    expect(num("6.2174654209944089e-13")).toBe(6.2174654209944089e-13);
  });

  it("maps empty cells to null", () => {
    expect(num("")).toBeNull();
    expect(num(undefined)).toBeNull();
  });

  it("rejects non-numeric cells", () => {
    expect(() => num("blowup")).toThrow(SchemaError);
  });
});

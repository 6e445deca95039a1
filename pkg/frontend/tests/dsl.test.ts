import { describe, expect, it } from "vitest";

import { activeKind, fragmentAt, insertSuggestion, queryFromUrl, queryUrl } from "../src/dsl.js";

describe("insertSuggestion", () => {
  it("replaces the partial term at the cursor", () => {
    const text = "-c airp";
    const result = insertSuggestion(text, text.length, "airport_terminal");
    expect(result.text).toBe("-c airport_terminal");
    expect(result.cursor).toBe(result.text.length);
  });

  it("inserts mid-query without touching other terms", () => {
    const text = "-o car,per -t morning";
    const cursor = "-o car,per".length;
    const result = insertSuggestion(text, cursor, "person");
    expect(result.text).toBe("-o car,person -t morning");
  });

  it("appends after separators", () => {
    const text = "-o car,";
    const result = insertSuggestion(text, text.length, "person");
    expect(result.text).toBe("-o car,person");
  });

  it("never clobbers a keyword token", () => {
    const text = "-c";
    const result = insertSuggestion(text, 2, "--concepts ");
    expect(result.text).toBe("-c--concepts ");
  });
});

describe("fragmentAt", () => {
  it("extracts the term being typed", () => {
    expect(fragmentAt("-c airp", 7)).toBe("airp");
    expect(fragmentAt("-o car,pe", 9)).toBe("pe");
  });

  it("yields the dash prefix while typing a keyword", () => {
    expect(fragmentAt("--", 2)).toBe("--");
    expect(fragmentAt("-", 1)).toBe("-");
  });

  it("is empty right after a separator", () => {
    expect(fragmentAt("-o car,", 7)).toBe("");
  });
});

describe("activeKind", () => {
  it("maps the governing keyword to a suggestion kind", () => {
    expect(activeKind("-c airp", 7)).toBe("concept");
    expect(activeKind("--objects ca", 12)).toBe("object");
    expect(activeKind("-o car -t mor", 13)).toBe("timename");
    expect(activeKind("-l ho", 5)).toBe("location");
  });

  it("is undefined with no keyword yet", () => {
    expect(activeKind("air", 3)).toBeUndefined();
  });
});

describe("query URLs", () => {
  it("round-trips the query through the URL", () => {
    const url = queryUrl("http://localhost:8765/ui/", "-c airport_terminal -w monday");
    expect(queryFromUrl(url)).toBe("-c airport_terminal -w monday");
  });

  it("returns null when absent", () => {
    expect(queryFromUrl("http://localhost:8765/ui/")).toBeNull();
  });
});

import assert from "node:assert/strict";
import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { test } from "node:test";
import { CsvError, parseCsv } from "../src/csv.js";
import { render } from "../src/plots.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const testdata = path.join(here, "..", "..", "testdata");

function fixture(name: string): string {
  return fs.readFileSync(path.join(testdata, name), "utf8");
}

test("trajectory CSV renders as a trace", () => {
  const out = render({ kind: "trace", inputText: fixture("trajectory.csv") });
  assert.ok(out.svg.startsWith("<svg"));
  assert.ok(out.svg.includes("polyline"));
  assert.ok(out.svg.includes("hamiltonian"));
});

test("study CSV renders with slopes matching the reported fit to 1e-6", () => {
  const text = fixture("dn_study.csv");
  const out = render({ kind: "loglog_fit", inputText: text });
  const meta = parseCsv(text).meta;
  for (const order of [1, 2, 3]) {
    const reported = Number(meta.get(`lsq_slope_order${order}`));
    const fitted = out.slopes.get(`order${order}`);
    assert.ok(fitted, `missing fitted slope for order${order}`);
    assert.ok(
      Math.abs(fitted.slope - reported) < 1e-6,
      `order${order}: fitted ${fitted.slope} vs reported ${reported}`,
    );
    assert.ok(out.svg.includes(`order${order}: slope`));
  }
});

test("energy monitor CSV renders as a trace", () => {
  const out = render({ kind: "trace", inputText: fixture("energy_monitor.csv") });
  assert.ok(out.svg.includes("polyline"));
});

test("symbols CSV renders as a heatmap", () => {
  const out = render({
    kind: "heatmap",
    inputText: fixture("symbols.csv"),
    valueColumn: "q_flat",
  });
  assert.ok(out.svg.includes("<rect"));
  assert.ok(out.svg.includes("q_flat"));
});

test("missing column is named in the error", () => {
  assert.throws(
    () => render({ kind: "heatmap", inputText: fixture("symbols.csv"), valueColumn: "nope" }),
    /missing column 'nope'/,
  );
});

test("empty CSV is an explicit error for every kind", () => {
  for (const kind of ["trace", "loglog_fit", "heatmap"] as const) {
    assert.throws(() => render({ kind, inputText: "" }), CsvError);
  }
});

test("rendering does not alter numbers: slopes are pure functions of rows", () => {
  const text = fixture("dn_study.csv");
  const a = render({ kind: "loglog_fit", inputText: text });
  const b = render({ kind: "loglog_fit", inputText: text });
  for (const [name, fit] of a.slopes) {
    assert.equal(fit.slope, b.slopes.get(name)!.slope);
  }
});

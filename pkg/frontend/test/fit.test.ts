import assert from "node:assert/strict";
import { test } from "node:test";
import { leastSquares, logLogFit } from "../src/fit.js";

test("recovers an exact line", () => {
  const x = [0, 1, 2, 3];
  const y = x.map((v) => 2.5 * v - 1.25);
  const fit = leastSquares(x, y);
  assert.ok(Math.abs(fit.slope - 2.5) < 1e-12);
  assert.ok(Math.abs(fit.intercept + 1.25) < 1e-12);
  assert.ok(fit.stderr < 1e-12);
});

test("log-log fit recovers a power law", () => {
  const x = [0.1, 0.05, 0.025, 0.0125];
  const y = x.map((v) => 3.0 * v ** 2);
  const fit = logLogFit(x, y);
  assert.ok(Math.abs(fit.slope - 2.0) < 1e-12);
});

test("degenerate inputs are rejected", () => {
  assert.throws(() => leastSquares([1], [1]));
  assert.throws(() => leastSquares([2, 2, 2], [1, 2, 3]), /degenerate/);
});

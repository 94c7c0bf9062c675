/** Least-squares line fit used for the log-log slope annotations. */

export interface LineFit {
  slope: number;
  intercept: number;
  stderr: number;
}

export function leastSquares(x: number[], y: number[]): LineFit {
  const n = x.length;
  if (n < 2 || y.length !== n) {
    throw new Error(`need at least two matching points, got ${n}/${y.length}`);
  }
  const mx = x.reduce((a, b) => a + b, 0) / n;
  const my = y.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx === 0) throw new Error("degenerate fit: all abscissae equal");
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  let ss = 0;
  for (let i = 0; i < n; i++) {
    const r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
  }
  const stderr = n > 2 ? Math.sqrt(ss / (n - 2) / sxx) : 0;
  return { slope, intercept, stderr };
}

export function logLogFit(x: number[], y: number[]): LineFit {
  return leastSquares(
    x.map((v) => Math.log(v)),
    y.map((v) => Math.log(v)),
  );
}

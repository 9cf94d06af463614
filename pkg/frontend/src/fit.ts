/**
 * Log-space least squares, numerically identical to the Python side's
 * fit_scaling (same normal-equations slope), so guide-line exponents agree
 * across the two packages to far better than the 2-decimal contract.
 */

export interface FitResult {
  exponent: number;
  rSquared: number;
  intercept: number;
}

export function fitScaling(
  xs: number[],
  ys: number[],
  model: "powerlaw" | "exponential",
): FitResult {
  if (xs.length !== ys.length || xs.length < 4) {
    throw new Error("need at least 4 matched points");
  }
  if (ys.some((y) => y <= 0)) {
    throw new Error("log fit needs positive ys");
  }
  let X: number[];
  if (model === "powerlaw") {
    if (xs.some((x) => x <= 0)) throw new Error("power-law fit needs positive xs");
    X = xs.map(Math.log);
  } else {
    X = xs.slice();
  }
  const Y = ys.map(Math.log);
  const n = X.length;
  const mx = X.reduce((a, b) => a + b, 0) / n;
  const my = Y.reduce((a, b) => a + b, 0) / n;
  let sxy = 0;
  let sxx = 0;
  let syy = 0;
  for (let i = 0; i < n; i++) {
    sxy += (X[i] - mx) * (Y[i] - my);
    sxx += (X[i] - mx) * (X[i] - mx);
    syy += (Y[i] - my) * (Y[i] - my);
  }
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  let ssRes = 0;
  for (let i = 0; i < n; i++) {
    const r = Y[i] - (slope * X[i] + intercept);
    ssRes += r * r;
  }
  const rSquared = syy > 0 ? 1 - ssRes / syy : 1;
  return { exponent: slope, rSquared, intercept };
}

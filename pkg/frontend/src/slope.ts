/** Least-squares slope of y against x (the log-log order fit). */
export function leastSquaresSlope(x: number[], y: number[]): number {
  if (x.length !== y.length || x.length < 2) {
    throw new Error("need at least two matching points for a slope fit");
  }
  const n = x.length;
  const mx = x.reduce((a, b) => a + b, 0) / n;
  const my = y.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  if (den === 0) {
    throw new Error("degenerate abscissae in slope fit");
  }
  return num / den;
}

/** Fitted order of a (spacing, error) ladder: slope of ln e vs ln s. */
export function fittedOrder(spacings: number[], errors: number[]): number {
  return leastSquaresSlope(spacings.map(Math.log), errors.map(Math.log));
}

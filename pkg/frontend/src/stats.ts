/** Box-plot statistics with the 1.5 * IQR outlier convention. */

export interface BoxStats {
  q1: number;
  median: number;
  q3: number;
  /** whisker ends: furthest data inside [q1 - 1.5 IQR, q3 + 1.5 IQR] */
  lo: number;
  hi: number;
  outliers: number[];
}

/** Linear-interpolated quantile on a sorted copy of the data. */
export function quantile(values: number[], q: number): number {
  const sorted = [...values].sort((a, b) => a - b);
  const pos = (sorted.length - 1) * q;
  const base = Math.floor(pos);
  const rest = pos - base;
  if (base + 1 < sorted.length) {
    return sorted[base] + rest * (sorted[base + 1] - sorted[base]);
  }
  return sorted[base];
}

export function boxStats(values: number[]): BoxStats {
  if (values.length === 0) throw new Error("box stats need at least one value");
  const q1 = quantile(values, 0.25);
  const median = quantile(values, 0.5);
  const q3 = quantile(values, 0.75);
  const iqr = q3 - q1;
  const loFence = q1 - 1.5 * iqr;
  const hiFence = q3 + 1.5 * iqr;
  const inside = values.filter((v) => v >= loFence && v <= hiFence);
  const outliers = values.filter((v) => v < loFence || v > hiFence);
  return {
    q1,
    median,
    q3,
    lo: Math.min(...inside),
    hi: Math.max(...inside),
    outliers,
  };
}

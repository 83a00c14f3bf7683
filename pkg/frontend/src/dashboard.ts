/** View models for the results dashboard.
 *
 * Every number here comes straight out of an engine report; this module only
 * reshapes rows and samples into chartable structures.  In particular the
 * crossing marker is the engine's verdict verbatim — it is never derived
 * from the plotted curves on the client.
 */

import type {
  CvaReportDocument,
  FairValueDocument,
  FeatureReport,
  RunStatus,
  TranchingRow,
} from "./types";

// -- tranching stack ----------------------------------------------------

export interface StackBand {
  label: string;
  y0: number;
  y1: number;
}

export interface StackColumn {
  t: number;
  bands: StackBand[];
}

/** Stacked FLT / SLT / CLT areas per month, bottom-up in loss priority. */
export function tranchingStack(rows: TranchingRow[]): StackColumn[] {
  return rows.map((row) => {
    const bands: StackBand[] = [];
    let base = 0;
    for (const label of ["flt", "slt", "clt"] as const) {
      const height = row[label];
      bands.push({ label, y0: base, y1: base + height });
      base += height;
    }
    return { t: row.t, bands };
  });
}

// -- CVA chart ----------------------------------------------------------

export interface CvaSeries {
  label: string;
  values: number[];
}

export interface CvaChart {
  /** Settled (never-recovered) shortfall curves — what the verdict uses. */
  series: CvaSeries[];
  /** Raw per-month curves, for the detail toggle. */
  perMonth: CvaSeries[];
  /** Present exactly when the engine reports a crossing. */
  markers: { senior: string; junior: string }[];
  crossing: boolean;
  skipped: string[];
}

export function cvaChart(report: CvaReportDocument): CvaChart {
  const toSeries = (curves: Record<string, number[]>): CvaSeries[] =>
    Object.entries(curves).map(([label, values]) => ({ label, values }));
  return {
    series: toSeries(report.settled),
    perMonth: toSeries(report.curves),
    markers: report.crossing
      ? report.crossing_pairs.map((pair) => ({
          senior: pair[0] ?? "",
          junior: pair[1] ?? "",
        }))
      : [],
    crossing: report.crossing,
    skipped: [...report.skipped],
  };
}

/** The dashboard badge mirrors the run verdict; it is never computed here. */
export function crossingBadge(status: RunStatus): "pass" | "fail" | "unknown" {
  const verdict = status.verdicts?.["cva_non_crossing"];
  if (verdict === undefined) return "unknown";
  return verdict ? "pass" : "fail";
}

// -- fair-value distribution ---------------------------------------------

export interface HistogramBin {
  lo: number;
  hi: number;
  /** Probability mass the engine's CDF assigns to [lo, hi). */
  mass: number;
}

/** Bucket the engine's (value, quantile) CDF samples into `bins` bars. */
export function fairValueHistogram(fv: FairValueDocument, bins: number): HistogramBin[] {
  const samples = fv.cdf;
  if (samples.length === 0 || bins < 1) return [];
  const first = samples[0]!;
  const last = samples[samples.length - 1]!;
  const lo = first[0];
  const hi = last[0];
  const width = hi > lo ? (hi - lo) / bins : 1;
  const result: HistogramBin[] = Array.from({ length: bins }, (_, i) => ({
    lo: lo + i * width,
    hi: lo + (i + 1) * width,
    mass: 0,
  }));
  let previousQuantile = 0;
  for (const [value, quantile] of samples) {
    const mass = quantile - previousQuantile;
    previousQuantile = quantile;
    if (mass <= 0) continue;
    let index = Math.floor((value - lo) / width);
    if (index >= bins) index = bins - 1;
    if (index < 0) index = 0;
    result[index]!.mass += mass;
  }
  return result;
}

/** Step-function lookup: the quantile of the largest sampled value <= price. */
export function priceQuantile(fv: FairValueDocument, price: number): number {
  let quantile = 0;
  for (const [value, q] of fv.cdf) {
    if (value <= price) quantile = q;
    else break;
  }
  return quantile;
}

// -- exposure-performance histogram ---------------------------------------

export interface EpBar {
  exposure: string;
  counts: Record<string, number>;
}

export function epHistogram(report: FeatureReport): EpBar[] {
  return Object.entries(report.ep).map(([exposure, counts]) => ({
    exposure,
    counts: { ...counts },
  }));
}

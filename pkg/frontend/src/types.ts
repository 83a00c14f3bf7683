/** Shared types mirroring the engine's deal-file schema and JSON reports.
 *
 * Numbers that the engine treats as exact rationals travel as strings
 * ("19/20", "0.95"); the UI never parses them into floats — it only moves
 * them between form fields and the serialized document.
 */

export interface ExposureDocument {
  capital: number[];
  interest: number[];
}

export interface ClusterProfileDocument {
  hazards: Record<string, number>;
  recovery_fraction: number;
  recovery_lag: number;
  recovery_cost: number;
  default_correlation: number;
  rtl_probability?: number;
  rtl_lag?: number;
  spot_payload_fraction?: number;
  euribor_shift?: number;
}

export interface PortfolioDocument {
  exposures: ExposureDocument[];
  pooling_month: number;
  profile: ClusterProfileDocument;
}

export interface DesignDocument {
  hs: number[];
  vs: number[];
  h_weights: string[][];
  v_weights: string[][];
  cost_map: number[][];
  note_map: number[][];
  notes: string[];
}

export interface ScenariosDocument {
  count: number;
  master_seed: number;
  include_extreme: boolean;
}

export interface PricingDocument {
  c0: number;
  cpy: string[];
}

export interface DealDocument {
  peal_version: string;
  exposure_type: string;
  islamic: boolean;
  tp: number;
  portfolios: PortfolioDocument[];
  design: DesignDocument;
  frequencies: number[];
  scenarios: ScenariosDocument;
  alpha: string;
  eta: string;
  risk_weights: Record<string, string>;
  car: string;
  pricing?: PricingDocument;
  [key: string]: unknown;
}

/** PUT /deal response (200 or 400). */
export interface ValidationResult {
  valid: boolean;
  violations: string[];
}

export type RunState = "done" | "failed" | "pending";

export interface SimulateResponse {
  run_id: string;
  state: RunState;
}

export interface RunStatus {
  run_id: string;
  state: RunState;
  verdicts?: Record<string, boolean>;
  error?: string;
}

export interface TranchingRow {
  t: number;
  flt: number;
  slt: number;
  clt: number;
  mu: number;
  var: number;
  [column: string]: number;
}

export interface CvaReportDocument {
  /** Per-month expected shortfall, one curve per position label. */
  curves: Record<string, number[]>;
  /** Running sums of the per-month curves. */
  cumulative: Record<string, number[]>;
  /** Never-recovered shortfall; this is what the verdict is computed from. */
  settled: Record<string, number[]>;
  skipped: string[];
  crossing: boolean;
  crossing_pairs: string[][];
}

export interface FairValueDocument {
  mean: number;
  /** Sorted (value, quantile) samples of the empirical distribution. */
  cdf: [number, number][];
}

export interface IrrDocument {
  girr_annual: number;
  girr_converged: boolean;
  nirr_annual: number;
  nirr_converged: boolean;
}

export interface FeatureReport {
  ep: Record<string, Record<string, number>>;
  thickness: { costs: number[][]; notes: number[][] };
  regulatory_capital: number[][];
  cva: CvaReportDocument;
  fair_value: FairValueDocument[];
  /** Null for notes that carry no cash flows (zero-size tranches). */
  irr: (IrrDocument | null)[];
  note_prices: number[];
  g_check: { passed: boolean; violations: string[] };
  substantial_margin: {
    applicable: boolean;
    passed: boolean;
    sigma: number;
    sm: number;
    tflt: number;
  };
}

/** Editable deal draft with undo and server-side validation state.
 *
 * The draft is a plain mirror of the deal document.  Edits only rewrite the
 * document; whether the result is *valid* is always the server's call — the
 * UI keeps the last verdict it was given and marks anything edited since
 * then as unvalidated.
 */

import type { EngineClient } from "./api";
import type { DealDocument, ValidationResult } from "./types";

function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export type DraftValidity = "valid" | "invalid" | "unknown";

export class DesignDraft {
  private doc: DealDocument;
  private undoStack: DealDocument[] = [];

  /** Edited since the last server round trip. */
  dirty = false;
  /** Last verdict returned by PUT /deal; "unknown" while dirty. */
  validity: DraftValidity = "unknown";
  violations: string[] = [];

  constructor(doc: DealDocument) {
    this.doc = clone(doc);
  }

  /** Snapshot of the current document, suitable for PUT /deal or a file. */
  serialize(): DealDocument {
    return clone(this.doc);
  }

  get document(): DealDocument {
    return this.doc;
  }

  private edit(mutate: (doc: DealDocument) => void): void {
    this.undoStack.push(clone(this.doc));
    mutate(this.doc);
    this.dirty = true;
    this.validity = "unknown";
    this.violations = [];
  }

  get canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  undo(): boolean {
    const previous = this.undoStack.pop();
    if (previous === undefined) return false;
    this.doc = previous;
    this.dirty = true;
    this.validity = "unknown";
    this.violations = [];
    return true;
  }

  // -- design edits ---------------------------------------------------

  setHorizontalSlices(hs: number[]): void {
    this.edit((doc) => {
      doc.design.hs = [...hs];
    });
  }

  setVerticalSlices(vs: number[]): void {
    this.edit((doc) => {
      doc.design.vs = [...vs];
    });
  }

  /** Percentages are rational strings ("1/2", "0.95"); passed through verbatim. */
  setHorizontalWeights(layer: number, weights: string[]): void {
    this.edit((doc) => {
      doc.design.h_weights[layer] = [...weights];
    });
  }

  setVerticalWeights(component: number, weights: string[]): void {
    this.edit((doc) => {
      doc.design.v_weights[component] = [...weights];
    });
  }

  setCostMap(costMap: number[][]): void {
    this.edit((doc) => {
      doc.design.cost_map = costMap.map((group) => [...group]);
    });
  }

  setNoteMap(noteMap: number[][], notes?: string[]): void {
    this.edit((doc) => {
      doc.design.note_map = noteMap.map((group) => [...group]);
      if (notes !== undefined) doc.design.notes = [...notes];
    });
  }

  setFrequencies(frequencies: number[]): void {
    this.edit((doc) => {
      doc.frequencies = [...frequencies];
    });
  }

  setAlpha(alpha: string): void {
    this.edit((doc) => {
      doc.alpha = alpha;
    });
  }

  setScenarios(count: number, masterSeed?: number): void {
    this.edit((doc) => {
      doc.scenarios.count = count;
      if (masterSeed !== undefined) doc.scenarios.master_seed = masterSeed;
    });
  }

  // -- server round trip ----------------------------------------------

  /** PUT the draft; record the verdict and any inline violations. */
  async save(client: EngineClient): Promise<ValidationResult> {
    const result = await client.putDeal(this.serialize());
    this.validity = result.valid ? "valid" : "invalid";
    this.violations = [...result.violations];
    if (result.valid) this.dirty = false;
    return result;
  }

  /** Simulation is only offered once the server has accepted the draft. */
  get canSimulate(): boolean {
    return this.validity === "valid" && !this.dirty;
  }
}

// Inference input: a single-square shortcut or paint mode, where clicked
// squares accumulate weights that are normalized client-side before
// submission (the server revalidates the sum).

import { allSquares } from "./types.js";

export type InferenceMode = "single" | "paint";

export interface InferencePayload {
  single_square?: string;
  belief?: number[];
}

export class InferenceInput {
  mode: InferenceMode = "single";
  private weights = new Map<string, number>();

  reset(): void {
    this.weights.clear();
  }

  addWeight(square: string, amount = 1): void {
    this.weights.set(square, (this.weights.get(square) ?? 0) + amount);
  }

  clearSquare(square: string): void {
    this.weights.delete(square);
  }

  weightOf(square: string): number {
    return this.weights.get(square) ?? 0;
  }

  totalWeight(): number {
    let total = 0;
    for (const w of this.weights.values()) total += w;
    return total;
  }

  /** 64 floats summing to 1, or null when nothing has been painted. */
  normalized(): number[] | null {
    const total = this.totalWeight();
    if (total <= 0) return null;
    return allSquares().map((sq) => (this.weights.get(sq) ?? 0) / total);
  }

  /** The wire payload for the current mode, or null if incomplete. */
  payload(selectedSquare: string | null): InferencePayload | null {
    if (this.mode === "single") {
      return selectedSquare ? { single_square: selectedSquare } : null;
    }
    const belief = this.normalized();
    return belief ? { belief } : null;
  }
}

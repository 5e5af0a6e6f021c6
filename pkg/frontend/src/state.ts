/** Session state shared across views.
 *
 * Invariant: the graph view is reachable only after a successful analysis,
 * so lastResult is non-null whenever the UI shows a graph.
 */

import type { AnalysisResultWire } from "./types.js";

export interface HistoryEntry {
  params: Record<string, unknown>;
  topScore: number | null;
  when: string;
}

export interface SessionState {
  binaryId: string | null;
  binaryName: string | null;
  binarySize: number | null;
  lastResult: AnalysisResultWire | null;
  selectedRank: number;
  history: HistoryEntry[];
}

export function initialState(): SessionState {
  return {
    binaryId: null,
    binaryName: null,
    binarySize: null,
    lastResult: null,
    selectedRank: 0,
    history: [],
  };
}

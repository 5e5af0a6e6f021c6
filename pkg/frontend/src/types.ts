/** Wire shapes exchanged with the analysis service. */

export interface UploadReply {
  binaryId: string;
  sha256: string;
  size: number;
}

export interface PairWire {
  callOpcode: string;
  retOpcode: string;
  ocpScore: number;
  callCount: number;
  potentialEdges: number;
  validEdges: number;
}

export interface GraphNodeWire {
  label: string;
  entryAddress: string;
  entryIndex: number;
  endIndex: number;
  /** [address, word] pairs, present only when includeInstructions was set. */
  instructions?: [string, string][];
}

export interface GraphEdgeWire {
  from: number;
  to: number;
  multiplicity: number;
}

export interface GraphWire {
  nodes: GraphNodeWire[];
  edges: GraphEdgeWire[];
}

export interface CandidateWire extends PairWire {
  rank: number;
  graph: GraphWire;
}

export interface AnalysisResultWire {
  params: Record<string, unknown>;
  diagnostics: {
    instructionCount: number;
    droppedBytes: number;
    codeRegion: { fileOffset: number; fileOffsetEnd: number };
    scoreConstants: { validEdgeWeight: number; normalizationFactor: number };
    regionSearch?: { granularity: number; regionsScored: number };
  };
  candidates: CandidateWire[];
}

export interface SweepPointWire {
  value: number | string;
  pairs?: PairWire[];
  error?: string;
}

export interface SweepResultWire {
  parameter: string;
  points: SweepPointWire[];
}

export interface FieldError {
  field: string;
  message: string;
}

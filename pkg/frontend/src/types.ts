/** Wire types of the exploration API. */

export interface DatasetInfo {
  name: string;
  n_samples: number;
  classes: string[];
  feature_sets: string[];
  has_images: boolean;
}

export interface SessionInfo {
  session_id: string;
  dataset: string;
  n_samples: number;
}

export interface JobStatus {
  job_id: string;
  status: "pending" | "running" | "done" | "error";
  result?: unknown;
  error?: string;
}

export interface DetectResult {
  n_classifiers: number;
  n_models: number;
  feature_sets: string[];
  score_range: [number, number];
  max_entropy: number;
  type_counts: Record<string, number>;
}

export type Split = "train" | "test" | "both";
export type Mode = "single" | "juxtapose" | "superpose";

export interface CellPayload {
  cell: number;
  sample_id: number | null;
  class?: string;
  split?: "train" | "test";
  ood_norm?: number;
  confidence?: number;
  sample_type?: string;
}

export interface GridPayload {
  split: string;
  m: number;
  n: number;
  node_id: number;
  parent: number | null;
  n_samples: number;
  n_displayed: number;
  category_counts: Record<string, number>;
  representatives: number[];
  cells: CellPayload[];
}

export interface LayoutResponse {
  layout_id: string;
  mode: Mode;
  k: number;
  seed: number;
  grids: GridPayload[];
}

export interface ZoomResponse extends GridPayload {
  hierarchy: HierarchyDoc;
}

export interface HierarchyDoc {
  nodes: HierarchyNodeDoc[];
}

export interface HierarchyNodeDoc {
  node_id: number;
  parent: number | null;
  category_counts: Record<string, number>;
  grid: [number, number];
}

export interface ScoreRow {
  sample_id: number;
  class: string;
  split: "train" | "test";
  ood_score: number;
  ood_score_normalized: number;
  confidence: number;
  predicted_class: string;
  sample_type: string;
}

export interface SampleDetail {
  sample_id: number;
  class: string;
  split: "train" | "test";
  neighbors: number[];
  ood_score?: number;
  ood_score_normalized?: number;
  confidence?: number;
  predicted_class?: string;
  sample_type?: string;
}

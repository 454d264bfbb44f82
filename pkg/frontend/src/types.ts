/** Response shapes of the gateway API. */

export interface SearchHit {
  id: string;
  score: number;
}

export type FacetCounts = Record<string, Record<string, number>>;

export interface SearchResult {
  total: number;
  hits: SearchHit[];
  facets: FacetCounts;
}

export interface PrimitiveDoc {
  id: string;
  name: string;
  version: string;
  description: string;
  languages: string[];
  algorithm_types: string[];
  primitive_family: string;
  hyperparameters: unknown[];
  preconditions: string[];
  effects: string[];
  invalidates: string[];
  modalities: string[];
}

export interface DatasetDoc {
  id: string;
  name: string;
  modality: string;
  holds: string[];
  rows?: number;
  columns?: number;
}

export interface ProblemDoc {
  id: string;
  task_type: string;
  dataset_id: string;
  metric: string;
}

export interface PipelineStepDoc {
  primitive_id: string;
  primitive_version: string;
  bindings: Record<string, unknown>;
}

export interface PipelineDoc {
  id: string;
  dataset_id: string;
  problem_id: string;
  steps: PipelineStepDoc[];
}

export interface ValidationDoc {
  ok: boolean;
  step_index?: number | null;
  unmet?: string[];
  reason?: string;
}

export interface PlanDiagnostic {
  code: string;
  unmet: string[];
}

export interface PlanResponse {
  pipelines: PipelineDoc[];
  diagnostic?: PlanDiagnostic;
}

export interface VocabDoc {
  condition_flags: string[];
  algorithm_types: string[];
  primitive_families: string[];
  modalities: string[];
  task_types: string[];
  metrics: string[];
  hyperparameter_kinds: string[];
  value_types: string[];
  facet_fields: Record<string, string[]>;
}

export interface ApiErrorDoc {
  status: number;
  code: string;
  detail: string;
  violations?: { code: string; path: string; reason: string }[];
}

/** Interactive pipeline composer.
 *
 * The working step list is re-validated through the gateway after every
 * edit; per-step badges mirror the latest validate response and are never
 * computed locally. Suggestions come from POST /plan, exports from the
 * dockerfile/manifest endpoints.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  escapeHtml,
  renderCandidates,
  renderErrorBanner,
  renderSelect,
  renderSteps,
} from "./render.js";
import type {
  PipelineDoc,
  PlanDiagnostic,
  ValidationDoc,
} from "./types.js";

export interface WorkingStep {
  primitive_id: string;
  primitive_version: string;
  bindings: Record<string, unknown>;
}

export type StepBadge =
  | { kind: "ok" }
  | { kind: "invalid"; unmet: string[]; reason: string }
  | { kind: "after-failure" }
  | { kind: "unknown" };

export interface PaletteEntry {
  id: string;
  version: string;
  name: string;
  family: string;
}

export type ComposerAction =
  | { type: "choose-dataset"; id: string }
  | { type: "choose-problem"; id: string }
  | { type: "palette-query"; query: string }
  | { type: "add-step"; id: string }
  | { type: "remove-step"; index: number }
  | { type: "move-step"; index: number; delta: -1 | 1 }
  | { type: "suggest" }
  | { type: "use-candidate"; index: number };

export interface ComposerState {
  datasets: { id: string; label: string }[];
  problems: { id: string; label: string }[];
  datasetId: string | null;
  problemId: string | null;
  steps: WorkingStep[];
  validation: ValidationDoc | null;
  badges: StepBadge[];
  candidates: PipelineDoc[];
  diagnostic: PlanDiagnostic | null;
  palette: PaletteEntry[];
  paletteQuery: string;
  error: string | null;
}

/** Expand one validate response into per-step badges: steps before the
 * failing index replayed fine, the failing step carries its unmet flags,
 * everything after is blocked until the failure is fixed. */
export function stepBadges(stepCount: number,
                           validation: ValidationDoc | null): StepBadge[] {
  if (stepCount === 0) return [];
  if (!validation) return Array.from({ length: stepCount }, () => ({ kind: "unknown" }));
  if (validation.ok) return Array.from({ length: stepCount }, () => ({ kind: "ok" }));
  const failedAt = validation.step_index ?? 0;
  return Array.from({ length: stepCount }, (_, index) => {
    if (index < failedAt) return { kind: "ok" } as StepBadge;
    if (index === failedAt) {
      return {
        kind: "invalid",
        unmet: validation.unmet ?? [],
        reason: validation.reason ?? "invalid step",
      } as StepBadge;
    }
    return { kind: "after-failure" } as StepBadge;
  });
}

export interface Download {
  filename: string;
  content: string;
  contentType: string;
}

export class ComposerController {
  state: ComposerState = {
    datasets: [],
    problems: [],
    datasetId: null,
    problemId: null,
    steps: [],
    validation: null,
    badges: [],
    candidates: [],
    diagnostic: null,
    palette: [],
    paletteQuery: "",
    error: null,
  };

  private validateSeq = 0;
  private planSeq = 0;
  private paletteSeq = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly notify: () => void = () => {},
  ) {}

  async init(): Promise<void> {
    try {
      const [datasets, problems] = await Promise.all([
        this.api.search("datasets", "", {}, 1, 500),
        this.api.search("problems", "", {}, 1, 500),
      ]);
      this.state.datasets = datasets.hits.map((h) => ({ id: h.id, label: h.id }));
      this.state.problems = problems.hits.map((h) => ({ id: h.id, label: h.id }));
      this.state.error = null;
    } catch (error) {
      this.state.error = error instanceof Error ? error.message : String(error);
    }
    await this.refreshPalette();
    this.notify();
  }

  workingPipeline(): PipelineDoc {
    return {
      id: "ui.working.pipeline",
      dataset_id: this.state.datasetId ?? "",
      problem_id: this.state.problemId ?? "",
      steps: this.state.steps,
    };
  }

  async dispatch(action: ComposerAction): Promise<void> {
    switch (action.type) {
      case "choose-dataset":
        this.state.datasetId = action.id || null;
        this.state.candidates = [];
        this.state.diagnostic = null;
        return this.revalidate();
      case "choose-problem":
        this.state.problemId = action.id || null;
        this.state.candidates = [];
        this.state.diagnostic = null;
        return this.revalidate();
      case "palette-query":
        this.state.paletteQuery = action.query;
        return this.refreshPalette();
      case "add-step": {
        const entry = this.state.palette.find((p) => p.id === action.id);
        if (!entry) return;
        this.state.steps = [...this.state.steps, {
          primitive_id: entry.id,
          primitive_version: entry.version,
          bindings: {},
        }];
        return this.revalidate();
      }
      case "remove-step":
        this.state.steps = this.state.steps.filter((_, i) => i !== action.index);
        return this.revalidate();
      case "move-step": {
        const target = action.index + action.delta;
        if (target < 0 || target >= this.state.steps.length) return;
        const steps = [...this.state.steps];
        [steps[action.index], steps[target]] = [steps[target], steps[action.index]];
        this.state.steps = steps;
        return this.revalidate();
      }
      case "suggest":
        return this.suggest();
      case "use-candidate": {
        const candidate = this.state.candidates[action.index];
        if (!candidate) return;
        this.state.steps = candidate.steps.map((s) => ({ ...s }));
        return this.revalidate();
      }
    }
  }

  /** Fresh validation for the current working list; stale responses are
   * dropped so badges always describe the latest edit. */
  async revalidate(): Promise<void> {
    const seq = ++this.validateSeq;
    if (!this.state.steps.length || !this.state.datasetId) {
      this.state.validation = null;
      this.state.badges = stepBadges(this.state.steps.length, null);
      this.notify();
      return;
    }
    try {
      const validation = await this.api.validate(this.workingPipeline());
      if (seq !== this.validateSeq) return;
      this.state.validation = validation;
      this.state.badges = stepBadges(this.state.steps.length, validation);
      this.state.error = null;
    } catch (error) {
      if (seq !== this.validateSeq) return;
      this.state.validation = null;
      if (error instanceof ApiError && error.doc.code === "UNKNOWN_PRIMITIVE") {
        this.state.badges = this.state.steps.map(() => ({
          kind: "invalid", unmet: [], reason: error.doc.detail,
        }));
      } else {
        this.state.badges = stepBadges(this.state.steps.length, null);
      }
      this.state.error = error instanceof Error ? error.message : String(error);
    }
    this.notify();
  }

  async suggest(): Promise<void> {
    if (!this.state.datasetId || !this.state.problemId) return;
    const seq = ++this.planSeq;
    try {
      const response = await this.api.plan(this.state.datasetId,
                                           this.state.problemId);
      if (seq !== this.planSeq) return;
      this.state.candidates = response.pipelines;
      this.state.diagnostic = response.diagnostic ?? null;
      this.state.error = null;
    } catch (error) {
      if (seq !== this.planSeq) return;
      this.state.error = error instanceof Error ? error.message : String(error);
    }
    this.notify();
  }

  async refreshPalette(): Promise<void> {
    const seq = ++this.paletteSeq;
    try {
      const result = await this.api.search(
        "primitives", this.state.paletteQuery, {}, 1, 30);
      const entries = await Promise.all(result.hits.map(async (hit) => {
        try {
          const doc = await this.api.getPrimitive(hit.id);
          return {
            id: doc.id, version: doc.version,
            name: doc.name, family: doc.primitive_family,
          };
        } catch {
          return null;
        }
      }));
      if (seq !== this.paletteSeq) return;
      this.state.palette = entries.filter((e): e is PaletteEntry => e !== null);
      this.state.error = null;
    } catch (error) {
      if (seq !== this.paletteSeq) return;
      this.state.error = error instanceof Error ? error.message : String(error);
    }
    this.notify();
  }

  /** Everything the Export button saves: the pipeline document itself plus
   * the Dockerfile and pod manifest fetched from the gateway. */
  async exportArtifacts(): Promise<Download[]> {
    const pipeline = this.workingPipeline();
    const [dockerfile, manifest] = await Promise.all([
      this.api.dockerfile(pipeline),
      this.api.manifest(pipeline),
    ]);
    return [
      {
        filename: "pipeline.json",
        content: JSON.stringify(pipeline, null, 2) + "\n",
        contentType: "application/json",
      },
      { filename: "Dockerfile", content: dockerfile, contentType: "text/plain" },
      { filename: "pod.yaml", content: manifest, contentType: "text/plain" },
    ];
  }

  rendered(): string {
    const exportable = this.state.steps.length > 0 && this.state.datasetId
      && this.state.validation?.ok === true;
    const palette = this.state.palette.map((entry) =>
      `<li><span class="palette-name">${escapeHtml(entry.name)}</span>` +
      `<span class="chip chip-family">${escapeHtml(entry.family)}</span>` +
      `<button data-action="add-step" data-id="${escapeHtml(entry.id)}">add</button></li>`);
    return (
      renderErrorBanner(this.state.error) +
      `<div class="composer-layout">` +
      `<section class="composer-setup">` +
      `<label>dataset ${renderSelect("choose-dataset", this.state.datasets, this.state.datasetId, "choose a dataset…")}</label>` +
      `<label>problem ${renderSelect("choose-problem", this.state.problems, this.state.problemId, "choose a problem…")}</label>` +
      `<button data-action="suggest" ${this.state.datasetId && this.state.problemId ? "" : "disabled"}>Suggest</button>` +
      `<button data-action="export" ${exportable ? "" : "disabled"}>Export</button>` +
      `</section>` +
      renderCandidates(this.state.candidates, this.state.diagnostic) +
      `<section class="composer-steps"><h3>Pipeline</h3>` +
      renderSteps(this.state.steps, this.state.badges) +
      `</section>` +
      `<section class="composer-palette"><h3>Primitives</h3>` +
      `<input data-action="palette-query" data-focus-key="palette" type="search" ` +
      `placeholder="filter primitives…" value="${escapeHtml(this.state.paletteQuery)}">` +
      `<ul>${palette.join("")}</ul>` +
      `</section></div>`
    );
  }
}

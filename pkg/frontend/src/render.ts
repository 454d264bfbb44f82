/** Pure HTML renderers. No DOM access: every function maps state to a
 * string, so views are unit-testable without a browser. Interactive
 * elements carry data-action attributes consumed by the shell's single
 * delegated event listener. */

import type {
  FacetCounts,
  PipelineDoc,
  PlanDiagnostic,
  PrimitiveDoc,
  SearchResult,
} from "./types.js";
import type { StepBadge, WorkingStep } from "./composer.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const FACET_LABELS: Record<string, string> = {
  primitive_family: "Primitive family",
  algorithm_types: "Algorithm types",
  preconditions: "Preconditions",
  effects: "Effects",
  languages: "Languages",
  modalities: "Modalities",
};

export function facetLabel(field: string): string {
  return FACET_LABELS[field] ?? field;
}

export function renderErrorBanner(error: string | null): string {
  if (!error) return "";
  return `<div class="banner banner-error" role="alert">${escapeHtml(error)}</div>`;
}

/** Facet sidebar. Selected values stay visible with an explicit zero when
 * the current result set no longer carries them. */
export function renderFacetSidebar(
  fields: string[],
  facets: FacetCounts,
  selected: Record<string, string[]>,
  expanded: Record<string, boolean>,
): string {
  const groups = fields.map((field) => {
    const isOpen = expanded[field] !== false;
    const counts = facets[field] ?? {};
    const chosen = selected[field] ?? [];
    const values = [...new Set([...Object.keys(counts), ...chosen])].sort();
    const rows = values
      .map((value) => {
        const count = counts[value] ?? 0;
        const active = chosen.includes(value);
        return (
          `<li><button class="facet-value${active ? " selected" : ""}"` +
          ` data-action="toggle-filter" data-field="${escapeHtml(field)}"` +
          ` data-value="${escapeHtml(value)}">` +
          `<span class="facet-name">${escapeHtml(value)}</span>` +
          `<span class="facet-count" data-count="${count}">${count}</span>` +
          `</button></li>`
        );
      })
      .join("");
    return (
      `<section class="facet-group" data-field="${escapeHtml(field)}">` +
      `<h3><button data-action="toggle-group" data-field="${escapeHtml(field)}">` +
      `${isOpen ? "▾" : "▸"} ${escapeHtml(facetLabel(field))}</button></h3>` +
      (isOpen ? `<ul>${rows || '<li class="facet-empty">no values</li>'}</ul>` : "") +
      `</section>`
    );
  });
  return `<aside class="facets">${groups.join("")}</aside>`;
}

function chips(kind: string, values: string[]): string {
  if (!values.length) return "";
  const items = values
    .map((v) => `<span class="chip chip-${kind}">${escapeHtml(v)}</span>`)
    .join("");
  return `<div class="chips">${items}</div>`;
}

export function renderResultCards(
  result: SearchResult | null,
  documents: Map<string, PrimitiveDoc>,
): string {
  if (!result) return `<div class="results"><p class="empty">Loading…</p></div>`;
  if (result.total === 0) {
    return `<div class="results"><p class="empty">No primitives match the current query.</p></div>`;
  }
  const cards = result.hits.map((hit) => {
    const doc = documents.get(hit.id);
    if (!doc) {
      return `<article class="card" data-id="${escapeHtml(hit.id)}">` +
        `<h4>${escapeHtml(hit.id)}</h4><p class="empty">loading metadata…</p></article>`;
    }
    return (
      `<article class="card" data-id="${escapeHtml(doc.id)}">` +
      `<h4>${escapeHtml(doc.name)} <span class="version">${escapeHtml(doc.version)}</span></h4>` +
      `<p class="card-id">${escapeHtml(doc.id)}</p>` +
      `<p>${escapeHtml(doc.description)}</p>` +
      `<div class="card-row"><span class="label">family</span>` +
      `<span class="chip chip-family">${escapeHtml(doc.primitive_family)}</span></div>` +
      `<div class="card-row"><span class="label">algorithms</span>${chips("algo", doc.algorithm_types)}</div>` +
      `<div class="card-row"><span class="label">preconditions</span>${chips("pre", doc.preconditions) || "<em>none</em>"}</div>` +
      `<div class="card-row"><span class="label">effects</span>${chips("eff", doc.effects) || "<em>none</em>"}</div>` +
      `<footer>score ${hit.score}</footer>` +
      `</article>`
    );
  });
  return `<div class="results" data-total="${result.total}">` +
    `<p class="total">${result.total} result${result.total === 1 ? "" : "s"}</p>` +
    `${cards.join("")}</div>`;
}

export function renderPager(page: number, pageSize: number, total: number): string {
  const pages = Math.max(1, Math.ceil(total / pageSize));
  return (
    `<nav class="pager">` +
    `<button data-action="page-prev" ${page <= 1 ? "disabled" : ""}>prev</button>` +
    `<span>page ${page} / ${pages}</span>` +
    `<button data-action="page-next" ${page >= pages ? "disabled" : ""}>next</button>` +
    `</nav>`
  );
}

function badgeHtml(badge: StepBadge): string {
  switch (badge.kind) {
    case "ok":
      return `<span class="badge badge-ok" data-badge="ok">ok</span>`;
    case "invalid": {
      const flags = badge.unmet.map((f) =>
        `<span class="chip chip-unmet" data-unmet="${escapeHtml(f)}">${escapeHtml(f)}</span>`);
      const label = badge.unmet.length
        ? `unmet ${flags.join("")}`
        : escapeHtml(badge.reason);
      return `<span class="badge badge-invalid" data-badge="invalid">${label}</span>`;
    }
    case "after-failure":
      return `<span class="badge badge-blocked" data-badge="blocked">blocked by earlier step</span>`;
    default:
      return `<span class="badge badge-unknown" data-badge="unknown">…</span>`;
  }
}

export function renderSteps(steps: WorkingStep[], badges: StepBadge[]): string {
  if (!steps.length) {
    return `<ol class="steps"><li class="empty">no steps yet — add from the palette or suggest</li></ol>`;
  }
  const items = steps.map((step, index) => {
    const badge = badges[index] ?? { kind: "unknown" as const };
    return (
      `<li class="step" data-index="${index}">` +
      `<span class="step-name">${escapeHtml(step.primitive_id)}</span>` +
      `<span class="step-version">${escapeHtml(step.primitive_version)}</span>` +
      badgeHtml(badge) +
      `<span class="step-tools">` +
      `<button data-action="move-step-up" data-index="${index}" ${index === 0 ? "disabled" : ""}>↑</button>` +
      `<button data-action="move-step-down" data-index="${index}" ${index === steps.length - 1 ? "disabled" : ""}>↓</button>` +
      `<button data-action="remove-step" data-index="${index}">✕</button>` +
      `</span></li>`
    );
  });
  return `<ol class="steps">${items.join("")}</ol>`;
}

export function renderCandidates(candidates: PipelineDoc[],
                                 diagnostic: PlanDiagnostic | null): string {
  if (diagnostic) {
    const flags = diagnostic.unmet
      .map((f) => `<span class="chip chip-unmet" data-unmet="${escapeHtml(f)}">${escapeHtml(f)}</span>`)
      .join("");
    return `<div class="candidates"><p class="diagnostic" data-diagnostic="${escapeHtml(diagnostic.code)}">` +
      `No pipeline found. Blocking flags: ${flags || "<em>none</em>"}</p></div>`;
  }
  if (!candidates.length) return `<div class="candidates"></div>`;
  const rows = candidates.map((pipeline, index) => {
    const chain = pipeline.steps.map((s) => escapeHtml(s.primitive_id)).join(" → ");
    return `<li><code>${chain}</code>` +
      `<button data-action="use-candidate" data-index="${index}">use</button></li>`;
  });
  return `<div class="candidates"><h3>Suggestions</h3><ul>${rows.join("")}</ul></div>`;
}

export function renderSelect(action: string, items: { id: string; label: string }[],
                             chosen: string | null, placeholder: string): string {
  const options = [`<option value="">${escapeHtml(placeholder)}</option>`];
  for (const item of items) {
    const selectedAttr = item.id === chosen ? " selected" : "";
    options.push(`<option value="${escapeHtml(item.id)}"${selectedAttr}>` +
      `${escapeHtml(item.label)}</option>`);
  }
  return `<select data-action="${action}">${options.join("")}</select>`;
}

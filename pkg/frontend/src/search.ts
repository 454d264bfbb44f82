/** Faceted search view: state, transitions and rendering.
 *
 * All counts and rankings come from the gateway; this controller only
 * tracks selections, issues requests, and discards stale responses by
 * sequence number (at most one in-flight search wins).
 */

import { ApiClient } from "./api.js";
import {
  renderErrorBanner,
  renderFacetSidebar,
  renderPager,
  renderResultCards,
} from "./render.js";
import type { PrimitiveDoc, SearchResult } from "./types.js";

export type SearchAction =
  | { type: "set-query"; query: string }
  | { type: "toggle-filter"; field: string; value: string }
  | { type: "clear-filters" }
  | { type: "toggle-group"; field: string }
  | { type: "page-prev" }
  | { type: "page-next" };

export interface SearchState {
  query: string;
  filters: Record<string, string[]>;
  page: number;
  pageSize: number;
  expanded: Record<string, boolean>;
  facetFields: string[];
  result: SearchResult | null;
  error: string | null;
}

const DEFAULT_FACET_FIELDS = [
  "primitive_family",
  "algorithm_types",
  "preconditions",
  "effects",
  "languages",
  "modalities",
];

export class SearchController {
  state: SearchState = {
    query: "",
    filters: {},
    page: 1,
    pageSize: 12,
    expanded: {},
    facetFields: DEFAULT_FACET_FIELDS,
    result: null,
    error: null,
  };

  readonly documents = new Map<string, PrimitiveDoc>();
  private searchSeq = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly notify: () => void = () => {},
  ) {}

  async init(): Promise<void> {
    try {
      const vocab = await this.api.getVocab();
      const fields = vocab.facet_fields["primitive"];
      if (fields && fields.length) this.state.facetFields = fields;
    } catch {
      // vocabulary is a nicety; the default field list still works
    }
    await this.runSearch();
  }

  async dispatch(action: SearchAction): Promise<void> {
    switch (action.type) {
      case "set-query":
        this.state.query = action.query;
        this.state.page = 1;
        return this.runSearch();
      case "toggle-filter": {
        const current = new Set(this.state.filters[action.field] ?? []);
        if (current.has(action.value)) current.delete(action.value);
        else current.add(action.value);
        const filters = { ...this.state.filters };
        if (current.size) filters[action.field] = [...current].sort();
        else delete filters[action.field];
        this.state.filters = filters;
        this.state.page = 1;
        return this.runSearch();
      }
      case "clear-filters":
        this.state.filters = {};
        this.state.page = 1;
        return this.runSearch();
      case "toggle-group":
        this.state.expanded = {
          ...this.state.expanded,
          [action.field]: this.state.expanded[action.field] === false,
        };
        this.notify();
        return;
      case "page-prev":
        if (this.state.page > 1) {
          this.state.page -= 1;
          return this.runSearch();
        }
        return;
      case "page-next":
        this.state.page += 1;
        return this.runSearch();
    }
  }

  async runSearch(): Promise<void> {
    const seq = ++this.searchSeq;
    try {
      const result = await this.api.search(
        "primitives", this.state.query, this.state.filters,
        this.state.page, this.state.pageSize);
      if (seq !== this.searchSeq) return; // superseded by a newer edit
      await this.fetchMissingDocuments(result);
      if (seq !== this.searchSeq) return;
      this.state.result = result;
      this.state.error = null;
    } catch (error) {
      if (seq !== this.searchSeq) return;
      // keep the last results on screen; surface a non-blocking banner
      this.state.error = error instanceof Error ? error.message : String(error);
    }
    this.notify();
  }

  private async fetchMissingDocuments(result: SearchResult): Promise<void> {
    const missing = result.hits.filter((hit) => !this.documents.has(hit.id));
    const fetched = await Promise.all(
      missing.map(async (hit) => {
        try {
          return await this.api.getPrimitive(hit.id);
        } catch {
          return null;
        }
      }),
    );
    for (const doc of fetched) {
      if (doc) this.documents.set(doc.id, doc);
    }
  }

  rendered(): string {
    const { result } = this.state;
    const sidebar = renderFacetSidebar(
      this.state.facetFields,
      result ? result.facets : {},
      this.state.filters,
      this.state.expanded,
    );
    const hasFilters = Object.keys(this.state.filters).length > 0;
    const toolbar =
      `<div class="toolbar">` +
      (hasFilters
        ? `<button data-action="clear-filters">clear all filters</button>`
        : "") +
      `</div>`;
    return (
      renderErrorBanner(this.state.error) +
      `<div class="search-layout">` +
      sidebar +
      `<main>` +
      toolbar +
      renderResultCards(result, this.documents) +
      (result ? renderPager(this.state.page, this.state.pageSize, result.total) : "") +
      `</main></div>`
    );
  }
}

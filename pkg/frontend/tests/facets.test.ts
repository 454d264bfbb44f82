/** Facet sidebar fidelity: the counts the view renders must equal the
 * FacetCounts the API returned, across a script of interaction states. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { SearchController } from "../src/search.js";
import type { FacetCounts, SearchResult } from "../src/types.js";
import { fakeGateway } from "./fake-gateway.js";

function renderedCounts(html: string): FacetCounts {
  const counts: FacetCounts = {};
  const groupPattern = /<section class="facet-group" data-field="([^"]+)">([\s\S]*?)<\/section>/g;
  for (const group of html.matchAll(groupPattern)) {
    const [, field, body] = group;
    counts[field] = {};
    const valuePattern = /data-value="([^"]+)">.*?data-count="(\d+)"/g;
    for (const entry of body.matchAll(valuePattern)) {
      counts[field][entry[1]] = Number(entry[2]);
    }
  }
  return counts;
}

function lastApiFacets(log: { response: unknown }[]): FacetCounts {
  const last = log[log.length - 1].response as SearchResult;
  return last.facets;
}

describe("facet sidebar fidelity", () => {
  it("rendered counts equal the API FacetCounts across scripted interactions", async () => {
    const { fetchLike, searchLog } = fakeGateway();
    const controller = new SearchController(new ApiClient(fetchLike));
    await controller.init();

    const script = [
      () => controller.dispatch({ type: "set-query", query: "classifier" }),
      () => controller.dispatch({ type: "set-query", query: "" }),
      () => controller.dispatch({ type: "toggle-filter", field: "preconditions", value: "NO_MISSING_VALUES" }),
      () => controller.dispatch({ type: "toggle-filter", field: "languages", value: "python" }),
      () => controller.dispatch({ type: "toggle-filter", field: "preconditions", value: "NO_MISSING_VALUES" }),
      () => controller.dispatch({ type: "set-query", query: "tree" }),
      () => controller.dispatch({ type: "toggle-filter", field: "primitive_family", value: "CLASSIFICATION" }),
      () => controller.dispatch({ type: "clear-filters" }),
      () => controller.dispatch({ type: "toggle-filter", field: "modalities", value: "TEXT" }),
    ];

    let checkedStates = 0;
    const check = () => {
      const apiFacets = lastApiFacets(searchLog);
      const rendered = renderedCounts(controller.rendered());
      for (const field of Object.keys(apiFacets)) {
        // every count the API reported is rendered verbatim
        for (const [value, count] of Object.entries(apiFacets[field])) {
          expect(rendered[field][value]).toBe(count);
        }
        // and the view adds nothing beyond selected-but-empty zeros
        for (const [value, count] of Object.entries(rendered[field])) {
          if (!(value in apiFacets[field])) {
            expect(count).toBe(0);
            expect(controller.state.filters[field]).toContain(value);
          }
        }
      }
      checkedStates += 1;
    };

    check(); // initial load
    for (const step of script) {
      await step();
      check();
    }
    expect(checkedStates).toBe(10);
  });

  it("selecting a facet narrows the result list", async () => {
    const { fetchLike } = fakeGateway();
    const controller = new SearchController(new ApiClient(fetchLike));
    await controller.init();
    const before = controller.state.result!.total;
    await controller.dispatch({
      type: "toggle-filter", field: "preconditions", value: "NO_JAGGED_VALUES",
    });
    const after = controller.state.result!.total;
    expect(after).toBeLessThan(before);
    expect(controller.state.result!.hits.map((h) => h.id)).toEqual(["fix.nlp.sentiment"]);
  });

  it("clearing filters reproduces the empty-query response", async () => {
    const { fetchLike, searchLog } = fakeGateway();
    const controller = new SearchController(new ApiClient(fetchLike));
    await controller.init();
    const initial = searchLog[0].response as SearchResult;
    await controller.dispatch({
      type: "toggle-filter", field: "languages", value: "java",
    });
    await controller.dispatch({ type: "clear-filters" });
    expect(controller.state.result).toEqual(initial);
  });

  it("zero-hit query keeps facets rendered and shows the empty state", async () => {
    const { fetchLike } = fakeGateway();
    const controller = new SearchController(new ApiClient(fetchLike));
    await controller.init();
    await controller.dispatch({
      type: "toggle-filter", field: "languages", value: "java",
    });
    await controller.dispatch({ type: "set-query", query: "nosuchtokenanywhere" });
    expect(controller.state.result!.total).toBe(0);
    const html = controller.rendered();
    expect(html).toContain("No primitives match");
    const rendered = renderedCounts(html);
    expect(rendered["languages"]).toEqual({ java: 0 }); // selected value at zero
  });

  it("gateway errors keep the last results and show a banner", async () => {
    const { fetchLike } = fakeGateway();
    let failing = false;
    const flaky: typeof fetchLike = (url, init) => {
      if (failing) return Promise.reject(new Error("connection refused"));
      return fetchLike(url, init);
    };
    const controller = new SearchController(new ApiClient(flaky));
    await controller.init();
    const kept = controller.state.result;
    failing = true;
    await controller.dispatch({ type: "set-query", query: "classifier" });
    expect(controller.state.result).toBe(kept);
    expect(controller.rendered()).toContain("banner-error");
  });

  it("stale search responses are discarded by sequence number", async () => {
    const { fetchLike } = fakeGateway();
    const gate: { release?: () => void } = {};
    let delayNext = false;
    const delayed: typeof fetchLike = async (url, init) => {
      if (delayNext && String(url).startsWith("/primitives?")) {
        delayNext = false;
        await new Promise<void>((resolve) => { gate.release = resolve; });
      }
      return fetchLike(url, init);
    };
    const controller = new SearchController(new ApiClient(delayed));
    await controller.init();

    delayNext = true;
    const slow = controller.dispatch({ type: "set-query", query: "encoder" });
    const fast = controller.dispatch({ type: "set-query", query: "classifier" });
    await fast;
    gate.release!();
    await slow;
    // the older (slower) response must not overwrite the newer state
    expect(controller.state.result!.hits.map((h) => h.id)).toContain("fix.classify.tree");
    expect(controller.state.result!.hits.map((h) => h.id)).not.toContain("fix.transform.encoder");
  });
});

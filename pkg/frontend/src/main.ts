/** Browser shell: hash routing, event delegation and focus-preserving
 * re-render. All state and request logic lives in the controllers. */

import { ApiClient } from "./api.js";
import { ComposerController } from "./composer.js";
import { SearchController } from "./search.js";

const api = new ApiClient();

function currentRoute(): "search" | "composer" {
  return location.hash === "#/composer" ? "composer" : "search";
}

function download(filename: string, content: string, contentType: string): void {
  const blob = new Blob([content], { type: contentType });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

function start(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");

  const view = document.createElement("div");
  const nav = document.createElement("nav");
  nav.className = "topnav";
  nav.innerHTML =
    `<span class="brand">primcat</span>` +
    `<a href="#/search">Search</a><a href="#/composer">Composer</a>` +
    `<input id="global-search" data-focus-key="query" type="search" placeholder="search primitives…">`;
  root.append(nav, view);

  const render = () => {
    const active = document.activeElement as HTMLElement | null;
    const focusKey = active?.dataset?.focusKey;
    const caret = active instanceof HTMLInputElement ? active.selectionStart : null;

    const searchBox = document.getElementById("global-search") as HTMLInputElement;
    searchBox.style.display = currentRoute() === "search" ? "" : "none";
    view.innerHTML = currentRoute() === "search"
      ? search.rendered()
      : composer.rendered();

    if (focusKey && focusKey !== "query") {
      const again = view.querySelector<HTMLInputElement>(`[data-focus-key="${focusKey}"]`);
      if (again) {
        again.focus();
        if (caret !== null) again.setSelectionRange(caret, caret);
      }
    }
  };

  const search = new SearchController(api, render);
  const composer = new ComposerController(api, render);

  window.addEventListener("hashchange", render);

  const searchBox = nav.querySelector<HTMLInputElement>("#global-search");
  searchBox?.addEventListener("input", () => {
    void search.dispatch({ type: "set-query", query: searchBox.value });
  });

  view.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target || target.tagName === "SELECT" || target.tagName === "INPUT") return;
    const { action, field, value, index, id } = target.dataset;
    switch (action) {
      case "toggle-filter":
        void search.dispatch({ type: "toggle-filter", field: field!, value: value! });
        break;
      case "clear-filters":
        void search.dispatch({ type: "clear-filters" });
        break;
      case "toggle-group":
        void search.dispatch({ type: "toggle-group", field: field! });
        break;
      case "page-prev":
        void search.dispatch({ type: "page-prev" });
        break;
      case "page-next":
        void search.dispatch({ type: "page-next" });
        break;
      case "add-step":
        void composer.dispatch({ type: "add-step", id: id! });
        break;
      case "remove-step":
        void composer.dispatch({ type: "remove-step", index: Number(index) });
        break;
      case "move-step-up":
        void composer.dispatch({ type: "move-step", index: Number(index), delta: -1 });
        break;
      case "move-step-down":
        void composer.dispatch({ type: "move-step", index: Number(index), delta: 1 });
        break;
      case "suggest":
        void composer.dispatch({ type: "suggest" });
        break;
      case "use-candidate":
        void composer.dispatch({ type: "use-candidate", index: Number(index) });
        break;
      case "export":
        void composer.exportArtifacts().then((artifacts) => {
          for (const artifact of artifacts) {
            download(artifact.filename, artifact.content, artifact.contentType);
          }
        });
        break;
    }
  });

  view.addEventListener("change", (event) => {
    const target = event.target as HTMLSelectElement;
    if (target.dataset.action === "choose-dataset") {
      void composer.dispatch({ type: "choose-dataset", id: target.value });
    } else if (target.dataset.action === "choose-problem") {
      void composer.dispatch({ type: "choose-problem", id: target.value });
    }
  });

  view.addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.dataset.action === "palette-query") {
      void composer.dispatch({ type: "palette-query", query: target.value });
    }
  });

  render();
  void search.init();
  void composer.init();
}

start();

/** Application wiring: a search box, type filters, the network pane, and
 * cross-check links. Deliberately plain; all similarity math lives on the
 * server, and every view is addressable through the URL query string.
 */

import { fetchRelate } from "./api.js";
import { crosscheckUrls } from "./crosscheck.js";
import { renderNetwork } from "./render.js";
import {
  ALL_KINDS,
  ViewState,
  nodeToQuery,
  pushHistory,
  stateFromQuery,
  stateToQuery,
} from "./state.js";
import { Kind, NetworkPayload, payloadProblem } from "./types.js";

export interface AppOptions {
  baseUrl?: string;
  fetchImpl?: typeof fetch;
  win?: Window;
}

export interface App {
  state: ViewState;
  /** Resolve a query and render it; stale responses are dropped. */
  run(input: string, push?: boolean): Promise<void>;
  root: HTMLElement;
}

export function createApp(root: HTMLElement, options: AppOptions = {}): App {
  const win = options.win ?? window;
  const doc = root.ownerDocument;
  const baseUrl = options.baseUrl ?? "";
  const fetchImpl = options.fetchImpl ?? win.fetch.bind(win);

  const state = stateFromQuery(win.location.search);
  let sequence = 0;

  root.innerHTML = `
    <header class="bar">
      <form class="search" autocomplete="off">
        <input name="input" type="text" placeholder="terms, a paragraph, or [author:...]" />
        <button type="submit">relate</button>
      </form>
      <span class="filters"></span>
      <label class="k">k <input name="k" type="number" min="1" max="200" /></label>
      <span class="crosscheck"></span>
    </header>
    <div class="notice" hidden></div>
    <div class="error" hidden></div>
    <div class="pane"></div>
  `;

  const form = root.querySelector("form.search") as HTMLFormElement;
  const inputBox = root.querySelector("input[name=input]") as HTMLInputElement;
  const kBox = root.querySelector("input[name=k]") as HTMLInputElement;
  const filters = root.querySelector(".filters") as HTMLElement;
  const crosscheckBar = root.querySelector(".crosscheck") as HTMLElement;
  const notice = root.querySelector(".notice") as HTMLElement;
  const errorBox = root.querySelector(".error") as HTMLElement;
  const pane = root.querySelector(".pane") as HTMLElement;

  inputBox.value = state.input;
  kBox.value = String(state.k);

  for (const kind of ALL_KINDS) {
    const label = doc.createElement("label");
    const box = doc.createElement("input");
    box.type = "checkbox";
    box.value = kind;
    box.checked = state.types.length === 0 || state.types.includes(kind);
    box.addEventListener("change", () => {
      state.types = kindBoxes.filter((b) => b.checked).map((b) => b.value as Kind);
      if (state.types.length === ALL_KINDS.length) state.types = [];
      if (state.input) void run(state.input, true);
    });
    label.appendChild(box);
    label.appendChild(doc.createTextNode(kind));
    filters.appendChild(label);
  }
  const kindBoxes = Array.from(
    filters.querySelectorAll("input[type=checkbox]"),
  ) as HTMLInputElement[];

  function refreshCrosscheck(query: string): void {
    crosscheckBar.innerHTML = "";
    if (!query) return;
    const urls = crosscheckUrls(query);
    for (const [name, url] of [
      ["Wikipedia", urls.wikipedia],
      ["WorldCat", urls.worldcat],
      ["Scholar", urls.scholar],
    ] as const) {
      const a = doc.createElement("a");
      a.href = url;
      a.textContent = name;
      a.target = "_blank";
      a.rel = "noopener";
      crosscheckBar.appendChild(a);
    }
  }

  function showError(message: string): void {
    errorBox.textContent = message;
    errorBox.hidden = false;
  }

  function showUnresolved(tokens: string[]): void {
    if (tokens.length === 0) {
      notice.hidden = true;
      notice.textContent = "";
      return;
    }
    notice.textContent = `ignored (not in the index): ${tokens.join(", ")}`;
    notice.hidden = false;
  }

  function draw(payload: NetworkPayload): void {
    const problem = payloadProblem(payload);
    if (problem) {
      // keep the previous scene; just surface the problem
      showError(`bad response: ${problem}`);
      return;
    }
    errorBox.hidden = true;
    pane.innerHTML = "";
    pane.appendChild(
      renderNetwork(doc, payload, {
        onNodeClick: (node) => {
          state.selected = node.id;
          void run(nodeToQuery(node), true);
        },
      }),
    );
    showUnresolved(payload.query.unresolved);
  }

  async function run(input: string, push = false): Promise<void> {
    const seq = ++sequence;
    if (push && state.input && state.input !== input) pushHistory(state, state.input);
    state.input = input;
    inputBox.value = input;
    refreshCrosscheck(input);
    if (push) {
      win.history.pushState({ input }, "", stateToQuery(state));
    }
    const result = await fetchRelate(
      baseUrl,
      { input, types: state.types, k: state.k },
      fetchImpl,
    );
    if (seq !== sequence) return; // a newer request superseded this one
    if (!result.ok) {
      if (result.error.code === "EMPTY_QUERY") {
        showUnresolved(result.error.unresolved ?? []);
        showError("nothing in the index matches that query");
      } else {
        showError(`request failed: ${result.error.code}`);
      }
      return;
    }
    draw(result.payload);
  }

  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    if (inputBox.value.trim()) void run(inputBox.value.trim(), true);
  });
  kBox.addEventListener("change", () => {
    const k = Number(kBox.value);
    if (Number.isInteger(k) && k >= 1 && k <= 200) {
      state.k = k;
      if (state.input) void run(state.input, true);
    }
  });
  win.addEventListener("popstate", () => {
    const restored = stateFromQuery(win.location.search);
    state.input = restored.input;
    state.types = restored.types;
    state.k = restored.k;
    inputBox.value = state.input;
    kBox.value = String(state.k);
    if (state.input) void run(state.input, false);
  });

  const app: App = { state, run, root };
  if (state.input) void run(state.input, false);
  else refreshCrosscheck("");
  return app;
}

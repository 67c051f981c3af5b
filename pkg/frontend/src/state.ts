/** View state and its URL encoding.
 *
 * Every reachable view is addressable as ?input=...&types=...&k=..., so a
 * reload (or a shared link) reproduces the same network. History entries
 * never repeat consecutively.
 */

import type { Kind, NetworkNode } from "./types.js";

export const ALL_KINDS: Kind[] = ["term", "author", "journal", "dewey"];
export const DEFAULT_K = 20;

export interface ViewState {
  input: string;
  types: Kind[]; // empty means all kinds
  k: number;
  history: string[]; // previous inputs, most recent last
  selected: string | null; // node id
}

export function initialState(): ViewState {
  return { input: "", types: [], k: DEFAULT_K, history: [], selected: null };
}

/** Encode the queryable part of the state (input/types/k) for the URL bar. */
export function stateToQuery(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("input", state.input);
  if (state.types.length > 0 && state.types.length < ALL_KINDS.length) {
    params.set("types", state.types.join(","));
  }
  if (state.k !== DEFAULT_K) params.set("k", String(state.k));
  return "?" + params.toString();
}

/** Decode ?input=...&types=...&k=... (tolerates junk; falls back to defaults). */
export function stateFromQuery(search: string): ViewState {
  const params = new URLSearchParams(search);
  const state = initialState();
  state.input = params.get("input") ?? "";
  const types = (params.get("types") ?? "")
    .split(",")
    .map((t) => t.trim())
    .filter((t): t is Kind => (ALL_KINDS as string[]).includes(t));
  state.types = types;
  const k = Number(params.get("k"));
  if (Number.isInteger(k) && k >= 1 && k <= 200) state.k = k;
  return state;
}

/** Push the current input onto the history stack, skipping consecutive repeats. */
export function pushHistory(state: ViewState, input: string): void {
  if (input && state.history[state.history.length - 1] !== input) {
    state.history.push(input);
  }
}

export function popHistory(state: ViewState): string | null {
  return state.history.pop() ?? null;
}

/** The query a click on this node should issue: bare text for terms,
 * bracket-tagged lookup for the other kinds, matching the server's
 * query syntax. */
export function nodeToQuery(node: Pick<NetworkNode, "kind" | "label">): string {
  return node.kind === "term" ? node.label : `[${node.kind}:${node.label}]`;
}

/** UI style: node colors by entity kind.
 *
 * Query nodes are red, authors yellow, journals green. Terms and Dewey
 * classes have no prescribed colors; the blue and purple here are this UI's
 * own choices, kept distinct from the other three.
 */

import type { Kind } from "./types.js";

export const QUERY_COLOR = "#d62728"; // red
export const KIND_COLORS: Record<Kind, string> = {
  term: "#1f77b4", // blue (UI choice)
  author: "#f2c94c", // yellow
  journal: "#2ca02c", // green
  dewey: "#9467bd", // purple (UI choice)
};

export function nodeColor(kind: Kind, isQuery: boolean): string {
  return isQuery ? QUERY_COLOR : KIND_COLORS[kind];
}

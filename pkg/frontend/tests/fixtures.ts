/** Shared payload builders for UI tests. */

import type { Kind, NetworkNode, NetworkPayload } from "../src/types.js";

export function node(
  i: number,
  kind: Kind,
  label: string,
  isQuery = false,
  x?: number,
  y?: number,
): NetworkNode {
  return {
    id: `${kind}:${label}`,
    kind,
    label,
    x: x ?? Math.cos(i),
    y: y ?? Math.sin(i),
    similarity: 1 - i * 0.02,
    specificity: 5 - i * 0.1,
    is_query: isQuery,
  };
}

/** One red query term plus 20 related entities, the shape the service
 * returns for a default query: a few authors, journals, a Dewey class,
 * and topical terms. */
export function figureStylePayload(): NetworkPayload {
  const nodes: NetworkNode[] = [node(0, "term", "prekindergarten", true)];
  const spec: Array<[Kind, string]> = [
    ["term", "child care"],
    ["term", "family income"],
    ["author", "meyer b"],
    ["term", "parenting skills"],
    ["journal", "0885-2006"],
    ["author", "van grondelle r"],
    ["term", "school readiness"],
    ["term", "disadvantaged children"],
    ["journal", "0306-4573"],
    ["term", "child health"],
    ["author", "garcia m"],
    ["term", "enrollment"],
    ["dewey", "362"],
    ["term", "immigrant families"],
    ["term", "subsidies"],
    ["author", "de vries a"],
    ["term", "households"],
    ["term", "programs"],
    ["journal", "0885-6125"],
    ["term", "demand"],
  ];
  spec.forEach(([kind, label], i) => nodes.push(node(i + 1, kind, label)));
  const edges = nodes.slice(1).map((_, i) => ({ source: 0, target: i + 1, weight: 0.5 }));
  return {
    query: {
      raw: "prekindergarten",
      resolved: [{ kind: "term", key: "prekindergarten" }],
      unresolved: [],
    },
    nodes,
    edges,
    meta: { dims: 600, k: 20, candidates: 500, elapsed_ms: 2.5 },
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

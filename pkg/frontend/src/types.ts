/** Wire types for the context-network service (see GET /relate). */

export type Kind = "term" | "author" | "journal" | "dewey";

export interface EntityRef {
  kind: Kind;
  key: string;
}

export interface NetworkNode {
  id: string;
  kind: Kind;
  label: string;
  x: number;
  y: number;
  similarity: number;
  specificity: number;
  is_query: boolean;
}

export interface NetworkEdge {
  source: number;
  target: number;
  weight: number;
}

export interface NetworkPayload {
  query: {
    raw: string;
    resolved: EntityRef[];
    unresolved: string[];
  };
  nodes: NetworkNode[];
  edges: NetworkEdge[];
  meta: {
    dims: number;
    k: number;
    candidates: number;
    elapsed_ms: number;
  };
}

const KINDS: readonly string[] = ["term", "author", "journal", "dewey"];

/** Structural check of a /relate response; returns a reason string or null if valid. */
export function payloadProblem(value: unknown): string | null {
  const p = value as NetworkPayload;
  if (typeof p !== "object" || p === null) return "payload is not an object";
  if (typeof p.query?.raw !== "string") return "missing query.raw";
  if (!Array.isArray(p.query.resolved) || !Array.isArray(p.query.unresolved))
    return "missing query.resolved/unresolved";
  if (!Array.isArray(p.nodes)) return "missing nodes";
  if (!Array.isArray(p.edges)) return "missing edges";
  for (const n of p.nodes) {
    if (!KINDS.includes(n.kind)) return `bad node kind ${String(n.kind)}`;
    if (typeof n.label !== "string") return "node without label";
    if (!Number.isFinite(n.x) || !Number.isFinite(n.y)) return "non-finite node position";
    if (typeof n.is_query !== "boolean") return "node without is_query";
  }
  for (const e of p.edges) {
    if (
      !Number.isInteger(e.source) ||
      !Number.isInteger(e.target) ||
      e.source < 0 ||
      e.target < 0 ||
      e.source >= p.nodes.length ||
      e.target >= p.nodes.length
    )
      return "edge endpoint out of range";
  }
  return null;
}

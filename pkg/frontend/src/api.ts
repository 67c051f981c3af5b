/** Thin client for the context-network service. */

import type { Kind, NetworkPayload } from "./types.js";

export interface RelateParams {
  input: string;
  types: Kind[];
  k: number;
}

export interface RelateError {
  status: number;
  code: string;
  message?: string;
  unresolved?: string[];
}

export type RelateResult =
  | { ok: true; payload: NetworkPayload }
  | { ok: false; error: RelateError };

export function relateUrl(base: string, params: RelateParams): string {
  const qs = new URLSearchParams();
  qs.set("input", params.input);
  if (params.types.length > 0 && params.types.length < 4) {
    qs.set("types", params.types.join(","));
  }
  qs.set("k", String(params.k));
  return `${base}/relate?${qs.toString()}`;
}

export async function fetchRelate(
  base: string,
  params: RelateParams,
  fetchImpl: typeof fetch = fetch,
): Promise<RelateResult> {
  let response: Response;
  try {
    response = await fetchImpl(relateUrl(base, params));
  } catch (err) {
    return { ok: false, error: { status: 0, code: "NETWORK", message: String(err) } };
  }
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    return { ok: false, error: { status: response.status, code: "BAD_JSON" } };
  }
  if (!response.ok) {
    const e = body as Partial<RelateError>;
    return {
      ok: false,
      error: {
        status: response.status,
        code: e?.code ?? "HTTP_ERROR",
        message: e?.message,
        unresolved: e?.unresolved,
      },
    };
  }
  return { ok: true, payload: body as NetworkPayload };
}

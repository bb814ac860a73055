/**
 * Thin fetch wrapper over the platform API.
 *
 * Every UI state change goes through exactly one of the functions below;
 * there are no other endpoints and no client-side shortcuts.
 */

import type {
  Batch,
  BatchKind,
  DemoTranslation,
  Direction,
  LeaderboardRow,
  Profile,
  SessionProfile,
  TranslationsCreated,
  VerificationCreated,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  reason: string;

  constructor(status: number, reason: string) {
    super(`api ${status}: ${reason}`);
    this.status = status;
    this.reason = reason;
  }
}

// Same-origin by default; tests and dev servers point this elsewhere.
let baseUrl = "";
let authToken: string | null = null;

export function configureApi(opts: { baseUrl?: string; token?: string | null }): void {
  if (opts.baseUrl !== undefined) baseUrl = opts.baseUrl.replace(/\/+$/, "");
  if (opts.token !== undefined) authToken = opts.token;
}

async function request<T>(
  method: string,
  path: string,
  body?: unknown,
  opts: { auth?: boolean } = {},
): Promise<T> {
  const headers: Record<string, string> = {};
  if (body !== undefined) headers["Content-Type"] = "application/json";
  if (opts.auth) {
    if (!authToken) throw new ApiError(401, "no_session");
    headers["Authorization"] = `Bearer ${authToken}`;
  }
  const res = await fetch(baseUrl + path, {
    method,
    headers,
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  if (res.status === 204) return undefined as T;
  let data: any = null;
  try {
    data = await res.json();
  } catch {
    // non-JSON body, reason stays generic
  }
  if (!res.ok) {
    throw new ApiError(res.status, data && typeof data.reason === "string" ? data.reason : "unexpected");
  }
  return data as T;
}

export function register(handle: string): Promise<SessionProfile> {
  return request("POST", "/api/contributors", { handle });
}

export function fetchBatch(kind: BatchKind): Promise<Batch> {
  return request("GET", `/api/batch?kind=${kind}`, undefined, { auth: true });
}

export function submitTranslations(itemId: string, texts: string[]): Promise<TranslationsCreated> {
  return request("POST", "/api/translations", { item_id: itemId, texts }, { auth: true });
}

export function submitSkip(itemId: string): Promise<void> {
  return request("POST", "/api/skips", { item_id: itemId }, { auth: true });
}

export function submitVerification(
  itemId: string,
  rating: number,
  alternative?: string,
): Promise<VerificationCreated> {
  const body: Record<string, unknown> = { item_id: itemId, rating };
  if (alternative !== undefined) body.alternative = alternative;
  return request("POST", "/api/verifications", body, { auth: true });
}

export function fetchLeaderboard(limit = 10): Promise<LeaderboardRow[]> {
  return request("GET", `/api/leaderboard?limit=${limit}`);
}

export function fetchProfile(contributorId: string): Promise<Profile> {
  return request("GET", `/api/profile/${contributorId}`, undefined, { auth: true });
}

export function demoTranslate(text: string, direction: Direction): Promise<DemoTranslation> {
  return request("POST", "/api/translate", { text, direction });
}

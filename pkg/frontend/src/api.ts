/** Typed client for the curation service. Configuration is just the service
 * base URL and a bearer session token. */

import { assertBlinded, type RatingPayload } from "./rating.js";
import type { ReviewBody } from "./review.js";
import type { QueueEntry, RatingSession, ReviewItem } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** Stale optimistic version: the UI should reload the item and re-apply. */
export class VersionConflictError extends ApiError {}

export interface ClientConfig {
  baseUrl: string;
  token: string;
  fetchImpl?: FetchLike;
}

export class CurationClient {
  private baseUrl: string;
  private token: string;
  private fetchImpl: FetchLike;

  constructor(config: ClientConfig) {
    this.baseUrl = config.baseUrl.replace(/\/+$/, "");
    this.token = config.token;
    this.fetchImpl = config.fetchImpl ?? fetch.bind(globalThis);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
      ...(body !== undefined ? { body: JSON.stringify(body) } : {}),
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const parsed = (await response.json()) as { detail?: string };
        if (parsed.detail) detail = parsed.detail;
      } catch {
        // non-JSON error body: keep the status text
      }
      if (response.status === 409 && detail.includes("version")) {
        throw new VersionConflictError(response.status, detail);
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  queue(language?: string): Promise<{ items: QueueEntry[] }> {
    const suffix = language ? `?lang=${encodeURIComponent(language)}` : "";
    return this.request("GET", `/queue${suffix}`);
  }

  item(itemId: string): Promise<ReviewItem> {
    return this.request("GET", `/items/${encodeURIComponent(itemId)}`);
  }

  submitReview(itemId: string, body: ReviewBody): Promise<ReviewItem> {
    return this.request("POST", `/items/${encodeURIComponent(itemId)}/review`, body);
  }

  adjudicate(
    itemId: string,
    body: { version: number; outcome: "admit" | "exclude"; correction_id?: string; note?: string },
  ): Promise<ReviewItem> {
    return this.request("POST", `/items/${encodeURIComponent(itemId)}/adjudicate`, body);
  }

  ratingSession(): Promise<RatingSession> {
    return this.request("GET", "/rating/session");
  }

  submitRating(
    itemId: string,
    payload: RatingPayload,
  ): Promise<{ stored: boolean; progress: { completed: number; total: number } }> {
    assertBlinded(payload);
    return this.request("POST", `/rating/${encodeURIComponent(itemId)}`, payload);
  }
}

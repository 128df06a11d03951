/**
 * Blinded A/B rating session logic: Likert validation, progress, resume
 * position, and the payload blinding guard.
 */

import {
  RATING_DIMENSIONS,
  type RatingItem,
  type RatingSession,
  type SideScores,
} from "./types.js";

/** Keys that must never leave the client in rating mode. */
const FORBIDDEN_PAYLOAD_KEYS = ["condition", "model", "provenance", "placement"];

export function isValidScore(value: number): boolean {
  return Number.isInteger(value) && value >= 1 && value <= 4;
}

export function validateSideScores(scores: Partial<SideScores>): string[] {
  const problems: string[] = [];
  for (const dim of RATING_DIMENSIONS) {
    const value = scores[dim];
    if (value === undefined) {
      problems.push(`${dim}: missing`);
    } else if (!isValidScore(value)) {
      problems.push(`${dim}: ${value} outside 1..4`);
    }
  }
  return problems;
}

export interface RatingPayload {
  left: SideScores;
  right: SideScores;
  comment?: string;
}

/**
 * Structural blinding guard: refuses to build a payload carrying any
 * provenance-like key anywhere in the object tree.
 */
export function assertBlinded(payload: unknown): void {
  const blob = JSON.stringify(payload);
  for (const key of FORBIDDEN_PAYLOAD_KEYS) {
    if (blob.includes(`"${key}"`)) {
      throw new Error(`rating payload leaks provenance key "${key}"`);
    }
  }
}

/** Build and guard the POST /rating/{item} body. */
export function buildRatingPayload(
  left: Partial<SideScores>,
  right: Partial<SideScores>,
  comment = "",
): RatingPayload {
  const problems = [
    ...validateSideScores(left).map((p) => `left ${p}`),
    ...validateSideScores(right).map((p) => `right ${p}`),
  ];
  if (problems.length > 0) {
    throw new Error(`incomplete rating: ${problems.join("; ")}`);
  }
  const payload: RatingPayload = {
    left: left as SideScores,
    right: right as SideScores,
  };
  if (comment) payload.comment = comment;
  assertBlinded(payload);
  return payload;
}

/** Index of the first incomplete item; session length when all done. */
export function resumeIndex(session: RatingSession): number {
  const index = session.items.findIndex((item) => !item.completed);
  return index === -1 ? session.items.length : index;
}

export function sessionDone(session: RatingSession): boolean {
  return session.items.length > 0 && session.items.every((i) => i.completed);
}

export function markCompleted(session: RatingSession, itemId: string): RatingSession {
  const items: RatingItem[] = session.items.map((item) =>
    item.item_id === itemId ? { ...item, completed: true } : item,
  );
  return {
    ...session,
    items,
    progress: {
      completed: items.filter((i) => i.completed).length,
      total: items.length,
    },
  };
}

export interface PendingSubmission {
  itemId: string;
  payload: RatingPayload;
}

export type SubmitFn = (itemId: string, payload: RatingPayload) => Promise<unknown>;

/**
 * Offline submission queue: failed POSTs are held client-side and retried
 * in order on the next flush. Payloads are guarded on enqueue, so nothing
 * unblinded can sit in the queue either.
 */
export class OfflineQueue {
  private pending: PendingSubmission[] = [];

  enqueue(itemId: string, payload: RatingPayload): void {
    assertBlinded(payload);
    this.pending.push({ itemId, payload });
  }

  get size(): number {
    return this.pending.length;
  }

  /** Retry queued submissions in order; stops at the first failure and
   * returns the item ids that went through. */
  async flush(submit: SubmitFn): Promise<string[]> {
    const delivered: string[] = [];
    while (this.pending.length > 0) {
      const next = this.pending[0];
      try {
        await submit(next.itemId, next.payload);
      } catch {
        break; // still offline: keep the rest queued
      }
      this.pending.shift();
      delivered.push(next.itemId);
    }
    return delivered;
  }
}

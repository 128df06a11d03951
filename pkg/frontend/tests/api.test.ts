import { describe, expect, it } from "vitest";

import { ApiError, CurationClient, VersionConflictError } from "../src/api.js";

interface Captured {
  url: string;
  method?: string;
  headers: Record<string, string>;
  body?: string;
}

function fakeService(status: number, reply: unknown) {
  const captured: Captured[] = [];
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    captured.push({
      url,
      method: init?.method,
      headers: (init?.headers ?? {}) as Record<string, string>,
      body: typeof init?.body === "string" ? init.body : undefined,
    });
    return new Response(JSON.stringify(reply), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { captured, fetchImpl };
}

function client(fetchImpl: typeof fetch) {
  return new CurationClient({
    baseUrl: "http://svc.example/",
    token: "tok-1",
    fetchImpl,
  });
}

describe("CurationClient", () => {
  it("sends bearer auth and joins URLs", async () => {
    const { captured, fetchImpl } = fakeService(200, { items: [] });
    await client(fetchImpl).queue("fa");
    expect(captured[0].url).toBe("http://svc.example/queue?lang=fa");
    expect(captured[0].headers.Authorization).toBe("Bearer tok-1");
  });

  it("rating submissions carry no provenance keys on the wire", async () => {
    const { captured, fetchImpl } = fakeService(200, {
      stored: true,
      progress: { completed: 1, total: 20 },
    });
    const scores = { overall: 3, grounding: 3, cultural_nuance: 2, nongeneric: 4 };
    await client(fetchImpl).submitRating("fa-001", { left: scores, right: scores });
    const body = captured[0].body!;
    for (const forbidden of ["condition", "model", "provenance", "placement"]) {
      expect(body).not.toContain(`"${forbidden}"`);
    }
    expect(captured[0].url).toBe("http://svc.example/rating/fa-001");
  });

  it("maps stale-version 409s onto VersionConflictError", async () => {
    const { fetchImpl } = fakeService(409, {
      detail: "item 'x' is at version 2, caller expected 0",
    });
    await expect(
      client(fetchImpl).submitReview("x", {
        version: 0,
        correction: { severity: "Low", spans: [], rationale: "r", rubric: {} },
      }),
    ).rejects.toBeInstanceOf(VersionConflictError);
  });

  it("surfaces other failures as ApiError with the service detail", async () => {
    const { fetchImpl } = fakeService(403, { detail: "not an expert session" });
    const failure = client(fetchImpl).item("x");
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await expect(failure).rejects.toThrow(/not an expert session/);
  });
});

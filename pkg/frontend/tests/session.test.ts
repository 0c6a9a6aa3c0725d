import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { FormSession } from "../src/session.js";
import type { RecommendRequest, Suggestion, TemplateInfo } from "../src/types.js";

const TEMPLATE: TemplateInfo = {
  templateId: "experiment",
  fields: [
    { fieldLabel: "sex", fieldType: null },
    { fieldLabel: "tissue", fieldType: null },
    { fieldLabel: "disease", fieldType: null },
  ],
};

interface Deferred {
  request: RecommendRequest;
  resolve(suggestions: Suggestion[]): void;
  reject(err: Error): void;
}

/** Fake service whose responses resolve only when the test says so. */
function makeFakeApi() {
  const pending: Deferred[] = [];
  const fetchLike = async (_url: string, init?: RequestInit): Promise<Response> => {
    const request = JSON.parse(String(init?.body)) as RecommendRequest;
    return new Promise<Response>((resolve, reject) => {
      pending.push({
        request,
        resolve: (suggestions) =>
          resolve(new Response(JSON.stringify({ recommendations: suggestions }))),
        reject,
      });
    });
  };
  return { api: new ApiClient("http://fake", fetchLike), pending };
}

const sugg = (label: string, score: number, rank: number): Suggestion => ({
  valueLabel: label,
  valueType: null,
  score,
  rank,
});

describe("FormSession payloads", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("sends the populated pairs minus the focused field", () => {
    const { api } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.setValue("disease", "meningitis");
    session.focusField("tissue");
    const request = session.buildRequest();
    expect(request).toEqual({
      targetField: { fieldLabel: "tissue", fieldType: null },
      context: [
        { fieldLabel: "disease", fieldType: null, valueLabel: "meningitis", valueType: null },
      ],
    });
  });

  it("never includes the focused field even when it has a value", () => {
    const { api } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.setValue("tissue", "liver");
    session.setValue("disease", "cirrhosis");
    session.focusField("tissue");
    const request = session.buildRequest()!;
    expect(request.context.map((p) => p.fieldLabel)).toEqual(["disease"]);
  });

  it("editing a context field changes the next request payload", async () => {
    const { api, pending } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.setValue("disease", "meningitis");
    session.focusField("tissue");
    await vi.advanceTimersByTimeAsync(150);
    expect(pending).toHaveLength(1);
    expect(pending[0]!.request.context[0]!.valueLabel).toBe("meningitis");

    session.setValue("disease", "cirrhosis");
    await vi.advanceTimersByTimeAsync(150);
    expect(pending).toHaveLength(2);
    expect(pending[1]!.request.context[0]!.valueLabel).toBe("cirrhosis");
  });

  it("clearing a context field removes it from the next payload", async () => {
    const { api, pending } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.setValue("disease", "meningitis");
    session.setValue("sex", "male");
    session.focusField("tissue");
    await vi.advanceTimersByTimeAsync(150);
    expect(pending[0]!.request.context).toHaveLength(2);

    session.clearField("disease");
    await vi.advanceTimersByTimeAsync(150);
    expect(pending).toHaveLength(2);
    expect(pending[1]!.request.context.map((p) => p.fieldLabel)).toEqual(["sex"]);

    // Clearing via an empty edit behaves the same way.
    session.setValue("sex", "");
    await vi.advanceTimersByTimeAsync(150);
    expect(pending[2]!.request.context).toEqual([]);
  });

  it("debounces bursts of edits into one request", async () => {
    const { api, pending } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.focusField("tissue");
    session.setValue("disease", "m");
    await vi.advanceTimersByTimeAsync(100);
    session.setValue("disease", "me");
    await vi.advanceTimersByTimeAsync(100);
    session.setValue("disease", "meningitis");
    await vi.advanceTimersByTimeAsync(150);
    expect(pending).toHaveLength(1);
    expect(pending[0]!.request.context[0]!.valueLabel).toBe("meningitis");
  });
});

describe("FormSession latest-wins", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("drops a delayed response from a superseded request", async () => {
    const { api, pending } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.setValue("disease", "meningitis");

    session.focusField("tissue");
    await vi.advanceTimersByTimeAsync(150);
    session.focusField("sex");
    await vi.advanceTimersByTimeAsync(150);
    expect(pending).toHaveLength(2);

    // The newer request answers first...
    pending[1]!.resolve([sugg("male", 0.9, 1)]);
    await vi.advanceTimersByTimeAsync(0);
    expect(session.snapshot().suggestions?.map((s) => s.valueLabel)).toEqual(["male"]);

    // ...then the stale one arrives and must not be rendered.
    pending[0]!.resolve([sugg("brain", 1.0, 1)]);
    await vi.advanceTimersByTimeAsync(0);
    expect(session.snapshot().suggestions?.map((s) => s.valueLabel)).toEqual(["male"]);
    expect(session.snapshot().focused).toBe("sex");
  });

  it("ignores responses that land after blur", async () => {
    const { api, pending } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.focusField("tissue");
    await vi.advanceTimersByTimeAsync(150);
    session.blur();
    pending[0]!.resolve([sugg("brain", 1.0, 1)]);
    await vi.advanceTimersByTimeAsync(0);
    expect(session.snapshot().suggestions).toBeNull();
  });

  it("renders suggestions exactly as returned, without re-ranking", async () => {
    const { api, pending } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.focusField("tissue");
    await vi.advanceTimersByTimeAsync(150);
    const fromService = [sugg("zebra", 0.2, 1), sugg("alpha", 0.9, 2)];
    pending[0]!.resolve(fromService);
    await vi.advanceTimersByTimeAsync(0);
    expect(session.snapshot().suggestions).toEqual(fromService);
  });

  it("failure shows a banner but keeps the form editable", async () => {
    const { api, pending } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.focusField("tissue");
    await vi.advanceTimersByTimeAsync(150);
    pending[0]!.reject(new Error("connection refused"));
    await vi.advanceTimersByTimeAsync(0);
    const snap = session.snapshot();
    expect(snap.error).toContain("connection refused");
    session.setValue("sex", "male"); // still editable
    expect(session.snapshot().entries.get("sex")?.valueLabel).toBe("male");
  });

  it("selecting a suggestion fills the focused field and keeps its annotation", async () => {
    const { api, pending } = makeFakeApi();
    const session = new FormSession(TEMPLATE, api);
    session.focusField("tissue");
    await vi.advanceTimersByTimeAsync(150);
    pending[0]!.resolve([{ valueLabel: "pancreas", valueType: "urn:t:9", score: 1, rank: 1 }]);
    await vi.advanceTimersByTimeAsync(0);
    session.selectSuggestion(session.snapshot().suggestions![0]!);
    const entry = session.snapshot().entries.get("tissue");
    expect(entry).toEqual({ valueLabel: "pancreas", valueType: "urn:t:9" });
  });
});

import { describe, expect, it } from "vitest";

import {
  codePointIndex,
  normalizeNfc,
  selectionToSpan,
  sliceByCodePoints,
  spanMatchesArticle,
  utf16Index,
} from "../src/spans.js";

/** Independent mirror of the service-side slicing rule: Python slices by
 * code points over the NFC string. */
function serviceSlice(article: string, start: number, end: number): string {
  return Array.from(article.normalize("NFC")).slice(start, end).join("");
}

const FARSI = "دولت افزایش قیمت نان را به تحریم نسبت داد";

describe("selectionToSpan", () => {
  it("round-trips a Farsi selection to a service-side slice", () => {
    const article = normalizeNfc(FARSI);
    const word = "تحریم";
    const startUtf16 = article.indexOf(word);
    const span = selectionToSpan(article, startUtf16, startUtf16 + word.length);
    expect(span.text).toBe(word);
    // the service slices by code points; the span must land on the same text
    expect(serviceSlice(article, span.start, span.end)).toBe(word);
    expect(spanMatchesArticle(article, span)).toBe(true);
  });

  it("handles astral characters (UTF-16 surrogate pairs)", () => {
    const article = "news 😀 item with emoji";
    const word = "item";
    const startUtf16 = article.indexOf(word);
    const span = selectionToSpan(article, startUtf16, startUtf16 + word.length);
    // UTF-16 index 7 but code-point index 6: the conversion must differ
    expect(span.start).toBe(startUtf16 - 1);
    expect(serviceSlice(article, span.start, span.end)).toBe(word);
  });

  it("rejects empty and out-of-range selections", () => {
    expect(() => selectionToSpan("abc", 1, 1)).toThrow();
    expect(() => selectionToSpan("abc", 2, 1)).toThrow();
    expect(() => selectionToSpan("abc", 0, 99)).toThrow();
  });

  it("rejects non-NFC input (offsets must index the normalized text)", () => {
    const decomposed = "café aperto";
    expect(() => selectionToSpan(decomposed, 0, 4)).toThrow(/NFC/);
    const nfc = normalizeNfc(decomposed);
    const span = selectionToSpan(nfc, 0, 4);
    expect(span.text).toBe("café");
    expect(serviceSlice(nfc, span.start, span.end)).toBe("café");
  });
});

describe("code point conversions", () => {
  it("are inverse of each other across astral text", () => {
    const text = "a😀b😀c";
    for (let points = 0; points <= 5; points++) {
      expect(codePointIndex(text, utf16Index(text, points))).toBe(points);
    }
  });

  it("sliceByCodePoints equals the service rule on mixed text", () => {
    const text = "پیام 😀 دوم";
    for (let start = 0; start < 5; start++) {
      for (let end = start + 1; end <= 8; end++) {
        expect(sliceByCodePoints(text, start, end)).toBe(
          serviceSlice(text, start, end),
        );
      }
    }
  });
});

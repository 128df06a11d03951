/**
 * Span selection math.
 *
 * The service indexes spans by Unicode code points into the NFC-normalized
 * article text. JavaScript string indices count UTF-16 code units, so
 * selections are converted before they go on the wire; for astral
 * characters the two differ. Offsets are computed on the NFC string in
 * logical order, never on rendered glyph positions (bidirectional text
 * makes visual positions unreliable).
 */

import type { SpanSelection } from "./types.js";

export function normalizeNfc(text: string): string {
  return text.normalize("NFC");
}

/** Count code points in the UTF-16 prefix [0, utf16Index). */
export function codePointIndex(text: string, utf16Index: number): number {
  let points = 0;
  let unit = 0;
  while (unit < utf16Index && unit < text.length) {
    const code = text.codePointAt(unit)!;
    unit += code > 0xffff ? 2 : 1;
    points += 1;
  }
  return points;
}

/** Inverse of codePointIndex: UTF-16 unit index of the nth code point. */
export function utf16Index(text: string, codePoints: number): number {
  let points = 0;
  let unit = 0;
  while (points < codePoints && unit < text.length) {
    const code = text.codePointAt(unit)!;
    unit += code > 0xffff ? 2 : 1;
    points += 1;
  }
  return unit;
}

/** Slice by code-point offsets, mirroring the service-side slicing rule. */
export function sliceByCodePoints(text: string, start: number, end: number): string {
  return text.slice(utf16Index(text, start), utf16Index(text, end));
}

/**
 * Turn a UTF-16 selection range over the NFC article into a service span.
 * Throws on empty or out-of-range selections.
 */
export function selectionToSpan(
  article: string,
  selStartUtf16: number,
  selEndUtf16: number,
): SpanSelection {
  const nfc = normalizeNfc(article);
  if (nfc !== article) {
    throw new Error("selection must be computed on the NFC-normalized text");
  }
  if (selStartUtf16 < 0 || selEndUtf16 > nfc.length || selStartUtf16 >= selEndUtf16) {
    throw new Error(`invalid selection range [${selStartUtf16}, ${selEndUtf16})`);
  }
  const start = codePointIndex(nfc, selStartUtf16);
  const end = codePointIndex(nfc, selEndUtf16);
  const text = sliceByCodePoints(nfc, start, end);
  return { start, end, text };
}

/** Validate that a span still slices to its surface text (service rule). */
export function spanMatchesArticle(article: string, span: SpanSelection): boolean {
  return sliceByCodePoints(normalizeNfc(article), span.start, span.end) === span.text;
}

/**
 * Correction editor state: severity pick, span list, rationale rewrite,
 * rubric checklist, and the versioned submit body.
 */

import { spanMatchesArticle } from "./spans.js";
import type { RubricFlags, SpanSelection } from "./types.js";

export const RUBRIC_FLAGS: (keyof RubricFlags)[] = [
  "grounded_in_text",
  "locally_salient_framing",
  "non_generic",
];

export const NONE_LABEL = "None";

export interface CorrectionDraft {
  severity: string | null;
  spans: SpanSelection[];
  rationale: string;
  rubric: Partial<RubricFlags>;
}

export function emptyDraft(): CorrectionDraft {
  return { severity: null, spans: [], rationale: "", rubric: {} };
}

export function addSpan(draft: CorrectionDraft, span: SpanSelection): CorrectionDraft {
  const duplicate = draft.spans.some(
    (s) => s.start === span.start && s.end === span.end,
  );
  if (duplicate) return draft;
  const spans = [...draft.spans, span].sort((a, b) => a.start - b.start);
  return { ...draft, spans };
}

export function removeSpan(draft: CorrectionDraft, index: number): CorrectionDraft {
  return { ...draft, spans: draft.spans.filter((_, i) => i !== index) };
}

/**
 * Client-side validation mirroring the service rules; returns a list of
 * problems (empty when submittable).
 */
export function validateDraft(
  draft: CorrectionDraft,
  article: string,
  vocabulary: string[],
): string[] {
  const problems: string[] = [];
  const allowed = new Set([...vocabulary, NONE_LABEL]);
  if (!draft.severity) {
    problems.push("severity not chosen");
  } else if (!allowed.has(draft.severity)) {
    problems.push(`severity "${draft.severity}" not in the vocabulary`);
  }
  for (const flag of RUBRIC_FLAGS) {
    if (draft.rubric[flag] === undefined) {
      problems.push(`rubric flag "${flag}" unanswered`);
    }
  }
  if (draft.severity === NONE_LABEL) {
    if (draft.spans.length > 0) problems.push("a None correction carries no spans");
    if (draft.rationale.trim() !== "")
      problems.push("a None correction carries an empty rationale");
  } else if (draft.severity) {
    if (draft.spans.length === 0) problems.push("select at least one span");
    if (draft.rationale.trim() === "") problems.push("write a rationale");
  }
  for (const span of draft.spans) {
    if (!spanMatchesArticle(article, span)) {
      problems.push(`span [${span.start}, ${span.end}) no longer matches the text`);
    }
  }
  return problems;
}

export interface ReviewBody {
  version: number;
  correction: {
    severity: string;
    spans: SpanSelection[];
    rationale: string;
    rubric: Partial<RubricFlags>;
  };
}

/** Build the POST /items/{id}/review body; throws if the draft is invalid. */
export function buildReviewBody(
  draft: CorrectionDraft,
  article: string,
  vocabulary: string[],
  version: number,
): ReviewBody {
  const problems = validateDraft(draft, article, vocabulary);
  if (problems.length > 0) {
    throw new Error(`correction not submittable: ${problems.join("; ")}`);
  }
  return {
    version,
    correction: {
      severity: draft.severity!,
      spans: draft.spans,
      rationale: draft.rationale,
      rubric: draft.rubric,
    },
  };
}

/** API types mirrored from the curation service. */

export interface QueueEntry {
  item_id: string;
  language: string;
  status: string;
  version: number;
}

export interface SpanSelection {
  start: number;
  end: number;
  text: string;
}

export interface RubricFlags {
  grounded_in_text: boolean;
  locally_salient_framing: boolean;
  non_generic: boolean;
}

export interface ExpertCorrection {
  correction_id: string;
  expert_id: string;
  severity: string;
  spans: SpanSelection[];
  rationale: string;
  rubric: Record<string, boolean>;
}

export interface ReviewItem {
  item_id: string;
  article_id: string;
  language: string;
  article_text: string;
  model_assessment: {
    severity?: string;
    spans?: string[];
    rationale?: string;
  };
  status: string;
  reviews: ExpertCorrection[];
  version: number;
}

export interface SideScores {
  overall: number;
  grounding: number;
  cultural_nuance: number;
  nongeneric: number;
}

/** Rating-mode item: two anonymized rationales, no provenance by design. */
export interface RatingItem {
  item_id: string;
  language: string;
  item_text: string;
  left_rationale: string;
  right_rationale: string;
  completed: boolean;
}

export interface RatingSession {
  evaluator_id: string;
  items: RatingItem[];
  progress: { completed: number; total: number };
}

export const RATING_DIMENSIONS = [
  "overall",
  "grounding",
  "cultural_nuance",
  "nongeneric",
] as const;

export type RatingDimension = (typeof RATING_DIMENSIONS)[number];

/** Languages rendered right-to-left. */
export const RTL_LANGUAGES = new Set(["fa", "ar", "he", "ur"]);

export function textDirection(language: string): "rtl" | "ltr" {
  return RTL_LANGUAGES.has(language) ? "rtl" : "ltr";
}

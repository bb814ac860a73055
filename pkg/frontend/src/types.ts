/** Shapes returned by the platform HTTP API. */

export type BatchKind = "translate" | "verify";

export interface TranslateItem {
  item_id: string;
  state: string;
  segment_id: string;
  text: string;
  lang: string;
  target_lang: string;
}

export interface VerifyItem {
  item_id: string;
  state: string;
  candidate_id: string;
  candidate_text: string;
  source_text: string;
  source_lang: string;
  target_lang: string;
}

export interface Batch<Item = TranslateItem | VerifyItem> {
  id: string;
  kind: BatchKind;
  items: Item[];
  issued_at: string;
}

export interface Profile {
  id: string;
  handle: string;
  points: number;
  badges: string[];
  translations_submitted: number;
  verifications_submitted: number;
  skips: number;
}

/** Registration response: the profile plus the bearer token. */
export interface SessionProfile extends Profile {
  token: string;
}

export interface LeaderboardRow {
  handle: string;
  points: number;
  badges: string[];
}

export interface CandidateOut {
  id: string;
  text: string;
  status: string;
}

export interface TranslationsCreated {
  item_id: string;
  candidates: CandidateOut[];
}

export interface VerificationCreated {
  id: string;
  candidate: string;
  rating: number;
  alternative: string | null;
  candidate_status: string;
}

export type Direction = "en-om" | "om-en";

export interface DemoTranslation {
  translation: string;
  source: string;
}

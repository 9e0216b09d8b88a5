// Wire types mirroring the session service responses.

export interface ItemCard {
  id: string;
  label: string;
  features: number[];
}

export interface QueryPair {
  x: ItemCard;
  y: ItemCard;
}

export interface Progress {
  vs_size: number;
  vs_mass: number;
}

export type Choice = "x" | "y" | "unsure";

export interface HistoryEntry {
  x: string;
  y: string;
  answer: "x" | "y" | "?";
}

export interface SessionResponse {
  session_id?: string;
  status: "pending" | "done";
  query?: QueryPair;
  result?: ItemCard | null;
  progress: Progress;
  history?: HistoryEntry[];
}

export interface DatasetSummary {
  id: string;
  n: number;
  dim: number;
  metric: string;
}

export interface StatsPayload {
  analysed: number;
  abusive: number;
  sent: number;
  suppressed: number;
  failed: number;
  approved_library_size: number;
  current_theta: number;
  last_response_at: string | null;
  operator_alert: boolean;
  abusive_rate: number;
}

export interface ThresholdHistoryItem {
  value: number;
  at: string;
  operator: string;
}

export interface ThresholdResponse {
  theta: number;
  history: ThresholdHistoryItem[];
}

export interface RevisionItem {
  editor: string;
  old_text: string;
  at: string;
}

export type EntryState = 'submitted' | 'approved' | 'rejected';

export interface CurationEntry {
  id: string;
  text: string;
  credit_handle: string | null;
  state: EntryState;
  history: RevisionItem[];
  submitted_at: string | null;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}

/** Error carrying the server's machine-readable code, verbatim. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

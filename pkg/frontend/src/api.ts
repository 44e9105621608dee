import {
  ApiError,
  ApiErrorBody,
  CurationEntry,
  FetchLike,
  StatsPayload,
  ThresholdResponse,
} from './types.js';

/**
 * Thin client for the operator API. Every number the console renders
 * comes out of these calls; the console itself computes nothing from
 * counters.
 */
export class OperatorApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private token: string | null;

  constructor(baseUrl: string, options: { fetchImpl?: FetchLike; token?: string | null } = {}) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchImpl = options.fetchImpl ?? ((url, init) => fetch(url, init));
    this.token = options.token ?? null;
  }

  setToken(token: string | null): void {
    this.token = token;
  }

  private headers(): Record<string, string> {
    const headers: Record<string, string> = { 'Content-Type': 'application/json' };
    if (this.token) {
      headers['Authorization'] = `Bearer ${this.token}`;
    }
    return headers;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      ...init,
      headers: { ...this.headers(), ...(init?.headers ?? {}) },
    });
    const body = (await response.json()) as T | ApiErrorBody;
    if (!response.ok) {
      const errorBody = body as ApiErrorBody;
      const code = errorBody?.error?.code ?? `http_${response.status}`;
      const message = errorBody?.error?.message ?? `HTTP ${response.status}`;
      throw new ApiError(response.status, code, message);
    }
    return body as T;
  }

  getStats(): Promise<StatsPayload> {
    return this.request<StatsPayload>('/stats');
  }

  setThreshold(theta: number, operator: string): Promise<ThresholdResponse> {
    return this.request<ThresholdResponse>('/config/threshold', {
      method: 'PUT',
      body: JSON.stringify({ theta, operator }),
    });
  }

  async listEntries(state?: string): Promise<CurationEntry[]> {
    const query = state ? `?state=${encodeURIComponent(state)}` : '';
    const body = await this.request<{ entries: CurationEntry[] }>(`/curation${query}`);
    return body.entries;
  }

  submitEntry(text: string, creditHandle?: string): Promise<CurationEntry> {
    return this.request<CurationEntry>('/curation', {
      method: 'POST',
      body: JSON.stringify({ text, credit_handle: creditHandle ?? null }),
    });
  }

  review(
    entryId: string,
    action: 'approve' | 'edit_and_approve' | 'reject',
    operator: string,
    newText?: string,
  ): Promise<CurationEntry> {
    return this.request<CurationEntry>(`/curation/${encodeURIComponent(entryId)}/review`, {
      method: 'POST',
      body: JSON.stringify({ action, operator, new_text: newText ?? null }),
    });
  }
}

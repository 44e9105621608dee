import { OperatorApiClient } from './api.js';
import { ApiError, CurationEntry } from './types.js';

export const MAX_TWEET_LENGTH = 280;

/**
 * Pending-review queue. All state transitions happen server-side; the
 * local list only changes on a successful refresh (no optimistic UI).
 * Terminal entries therefore drop from the pending list within one
 * poll of being reviewed.
 */
export class CurationQueue {
  pending: CurationEntry[] = [];
  emptyState = false;
  lastErrorCode: string | null = null;
  lastErrorMessage: string | null = null;
  /** inline validation message for the edit box, keyed by entry id */
  editErrors: Map<string, string> = new Map();

  private readonly api: OperatorApiClient;
  private readonly operator: string;
  private inFlight = false;

  constructor(api: OperatorApiClient, operator: string) {
    this.api = api;
    this.operator = operator;
  }

  async refresh(): Promise<void> {
    if (this.inFlight) {
      return;
    }
    this.inFlight = true;
    try {
      this.pending = await this.api.listEntries('submitted');
      this.emptyState = this.pending.length === 0;
      this.lastErrorCode = null;
      this.lastErrorMessage = null;
    } catch (error) {
      this.captureError(error);
    } finally {
      this.inFlight = false;
    }
  }

  async approve(entryId: string): Promise<boolean> {
    return this.act(entryId, () => this.api.review(entryId, 'approve', this.operator));
  }

  async reject(entryId: string): Promise<boolean> {
    return this.act(entryId, () => this.api.review(entryId, 'reject', this.operator));
  }

  /** Client-side length check mirrors the server limit; an over-long
   * edit never leaves the browser. */
  async editAndApprove(entryId: string, newText: string): Promise<boolean> {
    const trimmed = newText.trim();
    if (trimmed.length === 0) {
      this.editErrors.set(entryId, 'text is empty');
      return false;
    }
    if (trimmed.length > MAX_TWEET_LENGTH) {
      this.editErrors.set(
        entryId,
        `${trimmed.length} characters exceeds the ${MAX_TWEET_LENGTH} limit`,
      );
      return false;
    }
    this.editErrors.delete(entryId);
    return this.act(entryId, () =>
      this.api.review(entryId, 'edit_and_approve', this.operator, trimmed),
    );
  }

  private async act(entryId: string, call: () => Promise<CurationEntry>): Promise<boolean> {
    try {
      await call();
      this.lastErrorCode = null;
      this.lastErrorMessage = null;
      await this.refresh(); // server ack first, then the list updates
      return true;
    } catch (error) {
      this.captureError(error);
      return false;
    }
  }

  private captureError(error: unknown): void {
    if (error instanceof ApiError) {
      this.lastErrorCode = error.code;
      this.lastErrorMessage = error.message;
    } else {
      this.lastErrorCode = 'network';
      this.lastErrorMessage = String(error);
    }
  }
}

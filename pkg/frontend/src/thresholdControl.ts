import { OperatorApiClient } from './api.js';
import { ApiError, ThresholdHistoryItem } from './types.js';

export type ThresholdPhase = 'idle' | 'confirming' | 'submitting';

/**
 * Two-step threshold change: `begin` validates the value client-side
 * (mirroring the server's [0, 1] invariant) and opens a confirmation
 * showing old and new values; only `confirm` sends the request.
 * Server-side 4xx codes are surfaced verbatim in `lastErrorCode`.
 */
export class ThresholdControl {
  phase: ThresholdPhase = 'idle';
  currentTheta: number | null = null;
  pendingTheta: number | null = null;
  history: ThresholdHistoryItem[] = [];
  lastErrorCode: string | null = null;
  lastErrorMessage: string | null = null;
  toast: string | null = null;

  private readonly api: OperatorApiClient;
  private readonly operator: string;

  constructor(api: OperatorApiClient, operator: string) {
    this.api = api;
    this.operator = operator;
  }

  syncCurrent(theta: number): void {
    this.currentTheta = theta;
  }

  /** Step one: validate and stage; no request leaves the client here. */
  begin(newTheta: number): boolean {
    this.toast = null;
    if (!Number.isFinite(newTheta) || newTheta < 0 || newTheta > 1) {
      this.lastErrorCode = 'theta_range_client';
      this.lastErrorMessage = `threshold must be within [0, 1], got ${newTheta}`;
      return false;
    }
    this.lastErrorCode = null;
    this.lastErrorMessage = null;
    this.pendingTheta = newTheta;
    this.phase = 'confirming';
    return true;
  }

  cancel(): void {
    this.pendingTheta = null;
    this.phase = 'idle';
  }

  /** Step two: the operator confirmed old -> new; send it. */
  async confirm(): Promise<boolean> {
    if (this.phase !== 'confirming' || this.pendingTheta === null) {
      return false;
    }
    this.phase = 'submitting';
    try {
      const response = await this.api.setThreshold(this.pendingTheta, this.operator);
      this.currentTheta = response.theta;
      this.history = response.history;
      this.toast = `threshold set to ${response.theta}`;
      this.lastErrorCode = null;
      this.lastErrorMessage = null;
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        this.lastErrorCode = error.code;
        this.lastErrorMessage = error.message;
      } else {
        this.lastErrorCode = 'network';
        this.lastErrorMessage = String(error);
      }
      return false;
    } finally {
      this.pendingTheta = null;
      this.phase = 'idle';
    }
  }
}

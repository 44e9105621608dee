import { OperatorApiClient } from './api.js';
import { StatsPayload } from './types.js';

export interface TrendPoint {
  at: string;
  abusiveRate: number;
}

/**
 * Polls /stats and keeps the latest snapshot plus an abusive-rate trend
 * series. Counters are rendered straight from one payload; when the API
 * is unreachable the previous values are retained and a stale banner is
 * raised with the last success instant.
 */
export class StatsPanel {
  snapshot: StatsPayload | null = null;
  lastSuccessAt: Date | null = null;
  stale = false;
  trend: TrendPoint[] = [];

  private readonly api: OperatorApiClient;
  private readonly intervalMs: number;
  private readonly maxTrendPoints: number;
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;

  constructor(api: OperatorApiClient, options: { intervalMs?: number; maxTrendPoints?: number } = {}) {
    this.api = api;
    this.intervalMs = options.intervalMs ?? 5000;
    this.maxTrendPoints = options.maxTrendPoints ?? 500;
  }

  /** One poll cycle; at most one request in flight at a time. */
  async poll(now: Date = new Date()): Promise<void> {
    if (this.inFlight) {
      return;
    }
    this.inFlight = true;
    try {
      const payload = await this.api.getStats();
      this.snapshot = payload;
      this.lastSuccessAt = now;
      this.stale = false;
      this.trend.push({ at: now.toISOString(), abusiveRate: payload.abusive_rate });
      if (this.trend.length > this.maxTrendPoints) {
        this.trend.shift();
      }
    } catch {
      this.stale = true; // keep the last snapshot on screen
    } finally {
      this.inFlight = false;
    }
  }

  start(): void {
    if (this.timer === null) {
      void this.poll();
      this.timer = setInterval(() => void this.poll(), this.intervalMs);
    }
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}

import { beforeEach, describe, expect, it } from 'vitest';

import { OperatorApiClient } from '../src/api.js';
import { CurationQueue } from '../src/curationQueue.js';
import { StatsPanel } from '../src/statsPanel.js';
import { ThresholdControl } from '../src/thresholdControl.js';
import { MockOperatorApi } from './mockApi.js';

let server: MockOperatorApi;
let api: OperatorApiClient;

beforeEach(() => {
  server = new MockOperatorApi();
  api = new OperatorApiClient('http://operator.test', { fetchImpl: server.fetch });
});

describe('stats view', () => {
  it('renders zeros straight from a zero payload', async () => {
    const panel = new StatsPanel(api);
    await panel.poll();
    expect(panel.snapshot).not.toBeNull();
    expect(panel.snapshot!.analysed).toBe(0);
    expect(panel.snapshot!.abusive).toBe(0);
    expect(panel.snapshot!.sent).toBe(0);
    expect(panel.stale).toBe(false);
  });

  it('passes fixture-run counters through untouched', async () => {
    server.stats = {
      ...server.stats,
      analysed: 1000,
      abusive: 100,
      sent: 50,
      suppressed: 50,
      abusive_rate: 0.1,
    };
    const panel = new StatsPanel(api);
    await panel.poll();
    expect(panel.snapshot!.analysed).toBe(1000);
    expect(panel.snapshot!.abusive).toBe(100);
    expect(panel.snapshot!.sent).toBe(50);
    expect(panel.snapshot!.suppressed).toBe(50);
    // the trend series uses the server's rate, not client arithmetic
    expect(panel.trend.at(-1)!.abusiveRate).toBe(0.1);
  });

  it('keeps last values and raises the stale banner on network drop', async () => {
    const panel = new StatsPanel(api);
    const before = new Date('2019-04-01T10:00:00Z');
    server.stats = { ...server.stats, analysed: 42 };
    await panel.poll(before);
    server.offline = true;
    await panel.poll(new Date('2019-04-01T10:05:00Z'));
    expect(panel.stale).toBe(true);
    expect(panel.snapshot!.analysed).toBe(42); // retained
    expect(panel.lastSuccessAt).toEqual(before);
    server.offline = false;
    await panel.poll(new Date('2019-04-01T10:10:00Z'));
    expect(panel.stale).toBe(false);
  });
});

describe('threshold control', () => {
  it('round-trips a change into server history', async () => {
    const control = new ThresholdControl(api, 'kit');
    control.syncCurrent(0.8);
    expect(control.begin(0.9)).toBe(true);
    expect(control.phase).toBe('confirming');
    expect(control.pendingTheta).toBe(0.9);
    expect(await control.confirm()).toBe(true);
    expect(control.currentTheta).toBe(0.9);
    expect(control.history.map((h) => h.value)).toEqual([0.8, 0.9]);
    expect(control.history.at(-1)!.operator).toBe('kit');
    expect(server.history.at(-1)!.value).toBe(0.9);
    expect(control.toast).toContain('0.9');
  });

  it('cancel sends no request', () => {
    const control = new ThresholdControl(api, 'kit');
    control.begin(0.7);
    control.cancel();
    expect(control.phase).toBe('idle');
    expect(server.requestLog.filter((r) => r.path === '/config/threshold')).toHaveLength(0);
  });

  it('blocks out-of-range values client-side before any request', () => {
    const control = new ThresholdControl(api, 'kit');
    expect(control.begin(1.2)).toBe(false);
    expect(control.lastErrorCode).toBe('theta_range_client');
    expect(control.phase).toBe('idle');
    expect(server.requestLog).toHaveLength(0);
  });

  it('surfaces the server error code verbatim', async () => {
    const control = new ThresholdControl(api, 'kit');
    // bypass the client guard to prove the server path is surfaced
    control.begin(0.5);
    control.pendingTheta = 1.7;
    await control.confirm();
    expect(control.lastErrorCode).toBe('theta_range');
  });
});

describe('curation queue', () => {
  it('approved entries leave the pending list within one poll', async () => {
    const kept = server.submit('first supportive message');
    const approved = server.submit('second supportive message');
    const queue = new CurationQueue(api, 'kit');
    await queue.refresh();
    expect(queue.pending.map((e) => e.id)).toEqual([kept.id, approved.id]);

    expect(await queue.approve(approved.id)).toBe(true);
    expect(queue.pending.map((e) => e.id)).toEqual([kept.id]);
    expect(server.entries.get(approved.id)!.state).toBe('approved');
  });

  it('rejects drop from the queue too', async () => {
    const entry = server.submit('to be rejected');
    const queue = new CurationQueue(api, 'kit');
    await queue.refresh();
    await queue.reject(entry.id);
    expect(queue.pending).toHaveLength(0);
    expect(server.entries.get(entry.id)!.state).toBe('rejected');
  });

  it('edit beyond 280 chars is an inline error and never leaves the client', async () => {
    const entry = server.submit('short text');
    const queue = new CurationQueue(api, 'kit');
    await queue.refresh();
    const before = server.requestLog.length;
    expect(await queue.editAndApprove(entry.id, 'y'.repeat(281))).toBe(false);
    expect(queue.editErrors.get(entry.id)).toContain('281');
    expect(server.requestLog.length).toBe(before); // nothing sent
  });

  it('edit within the limit round-trips with history', async () => {
    const entry = server.submit('orignal words');
    const queue = new CurationQueue(api, 'kit');
    await queue.refresh();
    expect(await queue.editAndApprove(entry.id, 'original words')).toBe(true);
    const stored = server.entries.get(entry.id)!;
    expect(stored.text).toBe('original words');
    expect(stored.history[0]!.old_text).toBe('orignal words');
  });

  it('acting on an already-reviewed entry surfaces terminal_state', async () => {
    const entry = server.submit('done deal');
    const queue = new CurationQueue(api, 'kit');
    await queue.refresh();
    await queue.approve(entry.id);
    const ok = await queue.approve(entry.id);
    expect(ok).toBe(false);
    expect(queue.lastErrorCode).toBe('terminal_state');
  });

  it('empty queue shows the explicit empty state', async () => {
    const queue = new CurationQueue(api, 'kit');
    await queue.refresh();
    expect(queue.emptyState).toBe(true);
    expect(queue.pending).toHaveLength(0);
  });
});

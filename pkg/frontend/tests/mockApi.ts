import { CurationEntry, FetchLike, StatsPayload, ThresholdHistoryItem } from '../src/types.js';

/**
 * In-memory operator API honouring the same contracts as the server:
 * threshold history is append-only, review states are terminal, stats
 * are whatever the test puts in. Used as the fetch implementation for
 * contract tests.
 */
export class MockOperatorApi {
  stats: StatsPayload = {
    analysed: 0,
    abusive: 0,
    sent: 0,
    suppressed: 0,
    failed: 0,
    approved_library_size: 0,
    current_theta: 0.8,
    last_response_at: null,
    operator_alert: false,
    abusive_rate: 0,
  };
  history: ThresholdHistoryItem[] = [
    { value: 0.8, at: '2019-04-01T00:00:00+00:00', operator: 'startup' },
  ];
  entries: Map<string, CurationEntry> = new Map();
  requestLog: { method: string; path: string }[] = [];
  offline = false;

  private counter = 0;

  submit(text: string, creditHandle: string | null = null): CurationEntry {
    this.counter += 1;
    const entry: CurationEntry = {
      id: `p${String(this.counter).padStart(6, '0')}`,
      text,
      credit_handle: creditHandle,
      state: 'submitted',
      history: [],
      submitted_at: new Date().toISOString(),
    };
    this.entries.set(entry.id, entry);
    return entry;
  }

  readonly fetch: FetchLike = async (url, init) => {
    const method = (init?.method ?? 'GET').toUpperCase();
    const path = url.replace(/^https?:\/\/[^/]+/, '');
    this.requestLog.push({ method, path });
    if (this.offline) {
      throw new TypeError('fetch failed');
    }
    const body = init?.body ? JSON.parse(String(init.body)) : null;

    if (method === 'GET' && path === '/stats') {
      return json(200, this.stats);
    }

    if (method === 'PUT' && path === '/config/threshold') {
      const theta = Number(body.theta);
      if (!(theta >= 0 && theta <= 1)) {
        return json(422, { error: { code: 'theta_range', message: `theta ${theta} outside [0, 1]` } });
      }
      this.history.push({ value: theta, at: new Date().toISOString(), operator: body.operator });
      this.stats.current_theta = theta;
      return json(200, { theta, history: this.history });
    }

    if (method === 'GET' && path.startsWith('/curation')) {
      const state = new URL(`http://x${path}`).searchParams.get('state');
      const entries = [...this.entries.values()].filter((e) => !state || e.state === state);
      return json(200, { entries });
    }

    if (method === 'POST' && path === '/curation') {
      const text: string = body.text ?? '';
      if (text.trim().length === 0) {
        return json(422, { error: { code: 'empty_text', message: 'empty' } });
      }
      if (text.trim().length > 280) {
        return json(422, { error: { code: 'length_exceeded', message: 'too long' } });
      }
      return json(201, this.submit(text.trim(), body.credit_handle ?? null));
    }

    const review = path.match(/^\/curation\/([^/]+)\/review$/);
    if (method === 'POST' && review) {
      const entry = this.entries.get(review[1] as string);
      if (!entry) {
        return json(404, { error: { code: 'not_found', message: 'no such entry' } });
      }
      if (entry.state !== 'submitted') {
        return json(409, { error: { code: 'terminal_state', message: `already ${entry.state}` } });
      }
      const action: string = body.action;
      if (action === 'edit_and_approve') {
        const newText: string = body.new_text ?? '';
        if (newText.trim().length > 280) {
          return json(422, { error: { code: 'length_exceeded', message: 'too long' } });
        }
        entry.history.push({ editor: body.operator, old_text: entry.text, at: new Date().toISOString() });
        entry.text = newText.trim();
        entry.state = 'approved';
      } else if (action === 'approve' || action === 'reject') {
        entry.history.push({ editor: body.operator, old_text: entry.text, at: new Date().toISOString() });
        entry.state = action === 'approve' ? 'approved' : 'rejected';
      } else {
        return json(422, { error: { code: 'unknown_action', message: action } });
      }
      if (entry.state === 'approved') {
        this.stats.approved_library_size += 1;
      }
      return json(200, entry);
    }

    return json(404, { error: { code: 'no_route', message: path } });
  };
}

function json(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

import { OperatorApiClient } from './api.js';
import { CurationQueue } from './curationQueue.js';
import { StatsPanel } from './statsPanel.js';
import { ThresholdControl } from './thresholdControl.js';
import { CurationEntry } from './types.js';

const apiBase = (window as unknown as { CONSOLE_API_BASE?: string }).CONSOLE_API_BASE ?? '';
const api = new OperatorApiClient(apiBase);
const operator = () =>
  (document.getElementById('operator-name') as HTMLInputElement).value || 'console';

const stats = new StatsPanel(api, { intervalMs: 5000 });
let threshold: ThresholdControl;
let queue: CurationQueue;

function text(id: string, value: string): void {
  const node = document.getElementById(id);
  if (node) {
    node.textContent = value;
  }
}

function renderStats(): void {
  const s = stats.snapshot;
  if (s) {
    text('tile-analysed', String(s.analysed));
    text('tile-abusive', String(s.abusive));
    text('tile-sent', String(s.sent));
    text('tile-suppressed', String(s.suppressed));
    text('tile-theta', s.current_theta.toFixed(2));
    text('tile-library', String(s.approved_library_size));
    text('tile-rate', `${(s.abusive_rate * 100).toFixed(2)}%`);
    threshold.syncCurrent(s.current_theta);
  }
  const banner = document.getElementById('stale-banner');
  if (banner) {
    banner.hidden = !stats.stale;
    if (stats.stale) {
      banner.textContent = `API unreachable — showing data from ${
        stats.lastSuccessAt ? stats.lastSuccessAt.toISOString() : 'never'
      }`;
    }
  }
  renderTrend();
}

function renderTrend(): void {
  const svg = document.getElementById('trend');
  if (!svg || stats.trend.length < 2) {
    return;
  }
  const points = stats.trend.slice(-120);
  const max = Math.max(...points.map((p) => p.abusiveRate), 0.0001);
  const path = points
    .map((p, i) => {
      const x = (i / (points.length - 1)) * 300;
      const y = 80 - (p.abusiveRate / max) * 75;
      return `${i === 0 ? 'M' : 'L'}${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(' ');
  svg.innerHTML = `<path d="${path}" fill="none" stroke="#4466cc" stroke-width="2"/>`;
}

function entryRow(entry: CurationEntry): HTMLElement {
  const row = document.createElement('li');
  row.className = 'entry';
  const body = document.createElement('p');
  body.textContent = entry.text;
  const credit = entry.credit_handle ? ` (credit: @${entry.credit_handle})` : '';
  const meta = document.createElement('small');
  meta.textContent = `${entry.id}${credit}`;
  const editBox = document.createElement('textarea');
  editBox.value = entry.text;
  const error = document.createElement('span');
  error.className = 'inline-error';

  const approve = document.createElement('button');
  approve.textContent = 'approve';
  approve.onclick = () => void queue.approve(entry.id).then(renderQueue);
  const edit = document.createElement('button');
  edit.textContent = 'edit + approve';
  edit.onclick = () =>
    void queue.editAndApprove(entry.id, editBox.value).then(() => {
      error.textContent = queue.editErrors.get(entry.id) ?? '';
      renderQueue();
    });
  const reject = document.createElement('button');
  reject.textContent = 'reject';
  reject.onclick = () => void queue.reject(entry.id).then(renderQueue);

  row.append(meta, body, editBox, error, approve, edit, reject);
  return row;
}

function renderQueue(): void {
  const list = document.getElementById('queue');
  const empty = document.getElementById('queue-empty');
  if (!list || !empty) {
    return;
  }
  list.replaceChildren(...queue.pending.map(entryRow));
  empty.hidden = !queue.emptyState;
  text('queue-error', queue.lastErrorCode ? `error: ${queue.lastErrorCode}` : '');
}

function wireThresholdForm(): void {
  const input = document.getElementById('theta-input') as HTMLInputElement;
  const dialog = document.getElementById('theta-confirm') as HTMLElement;
  const propose = document.getElementById('theta-propose') as HTMLButtonElement;
  const confirm = document.getElementById('theta-confirm-yes') as HTMLButtonElement;
  const cancel = document.getElementById('theta-confirm-no') as HTMLButtonElement;

  propose.onclick = () => {
    const ok = threshold.begin(Number(input.value));
    text('theta-error', ok ? '' : threshold.lastErrorMessage ?? '');
    dialog.hidden = !ok;
    if (ok) {
      text(
        'theta-confirm-text',
        `Change threshold from ${threshold.currentTheta ?? '?'} to ${threshold.pendingTheta}?`,
      );
    }
  };
  cancel.onclick = () => {
    threshold.cancel();
    dialog.hidden = true;
  };
  confirm.onclick = () =>
    void threshold.confirm().then(() => {
      dialog.hidden = true;
      text('theta-error', threshold.lastErrorCode ? `error: ${threshold.lastErrorCode}` : '');
      text('theta-toast', threshold.toast ?? '');
      text(
        'theta-history',
        threshold.history.map((h) => `${h.value} (${h.operator} @ ${h.at})`).join('\n'),
      );
    });
}

export function boot(): void {
  threshold = new ThresholdControl(api, operator());
  queue = new CurationQueue(api, operator());
  wireThresholdForm();
  stats.start();
  setInterval(renderStats, 1000);
  setInterval(() => void queue.refresh().then(renderQueue), 5000);
  void queue.refresh().then(renderQueue);
}

if (typeof document !== 'undefined' && document.getElementById('console-root')) {
  boot();
}

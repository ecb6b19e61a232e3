// Ordered event channel: SSE when the browser provides EventSource, polling
// otherwise (and in tests). Gap detection hands control to store.resync().

import { EditorStore } from './store.js';
import type { BusEvent } from './types.js';

export class EventChannel {
  private source: EventSource | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;
  private stopped = false;

  constructor(
    private store: EditorStore,
    private base = '',
    private pollMs = 1000,
  ) {}

  start(): void {
    const pid = this.store.state.projectId;
    if (!pid) return;
    this.stopped = false;
    if (typeof EventSource !== 'undefined') {
      const since = this.store.state.lastEventSeq;
      this.source = new EventSource(
        `${this.base}/projects/${pid}/events?since_seq=${since}`,
      );
      this.source.onmessage = (message) => {
        const event = JSON.parse(message.data) as BusEvent;
        void this.store.applyEvent(event);
      };
      this.source.onopen = () => this.store.patch({ connected: true });
      this.source.onerror = () => this.store.patch({ connected: false });
    } else {
      this.timer = setInterval(() => void this.poll(), this.pollMs);
    }
  }

  async poll(): Promise<void> {
    const pid = this.store.state.projectId;
    if (!pid || this.stopped) return;
    const batch = await this.store.api.eventsSince(pid, this.store.state.lastEventSeq);
    this.store.patch({ connected: true });
    if (batch.gap) {
      await this.store.applyEvent({ seq: this.store.state.lastEventSeq, type: 'gap', payload: {} });
      this.store.state.lastEventSeq = batch.seq;
      return;
    }
    for (const event of batch.events) {
      await this.store.applyEvent(event);
    }
  }

  stop(): void {
    this.stopped = true;
    this.source?.close();
    this.source = null;
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
  }
}

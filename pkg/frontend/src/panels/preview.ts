// Preview panel: renders engine-evaluated frames onto a canvas. Scrubbed
// positions always come from GET /frame (the client never recomputes
// animation math for authoritative display); dragging a text clip commits a
// new normalized position.

import { clear, el } from '../dom.js';
import { EditorStore } from '../store.js';
import type { FrameDoc, RenderStateDoc } from '../types.js';

const VIEW_W = 480;
const VIEW_H = 270;

export class PreviewPanel {
  root: HTMLElement;
  canvas: HTMLCanvasElement;
  time = 0;
  lastFrame: FrameDoc | null = null;
  private playing: ReturnType<typeof setInterval> | null = null;
  private scrub: HTMLInputElement;
  private timeLabel: HTMLElement;

  constructor(private store: EditorStore) {
    this.canvas = el('canvas', { class: 'preview-canvas' }) as HTMLCanvasElement;
    this.canvas.width = VIEW_W;
    this.canvas.height = VIEW_H;
    this.scrub = el('input', {
      class: 'scrub',
      type: 'range',
      min: '0',
      max: '10',
      step: '0.1',
      value: '0',
    }) as HTMLInputElement;
    this.timeLabel = el('span', { class: 'time-label' }, ['0.0s']);
    this.scrub.addEventListener('input', () => {
      void this.seek(Number(this.scrub.value));
    });
    this.root = el('section', { class: 'panel preview-panel' });
    this.wireDrag();
    this.build();
  }

  private build(): void {
    clear(this.root);
    this.root.append(
      el('h2', {}, ['Preview']),
      this.canvas,
      el('div', { class: 'transport' }, [
        el('button', { class: 'play', onclick: () => this.play() }, ['Play']),
        el('button', { class: 'pause', onclick: () => this.pause() }, ['Pause']),
        this.scrub,
        this.timeLabel,
      ]),
    );
  }

  async seek(t: number): Promise<void> {
    const pid = this.store.state.projectId;
    if (!pid) return;
    this.time = t;
    this.timeLabel.textContent = `${t.toFixed(1)}s`;
    this.lastFrame = await this.store.api.getFrame(pid, t);
    this.draw();
  }

  play(): void {
    const project = this.store.state.project;
    if (!project || this.playing) return;
    const step = 1 / project.fps;
    this.playing = setInterval(() => {
      void this.seek(this.time + step);
    }, 1000 / project.fps);
  }

  pause(): void {
    if (this.playing) clearInterval(this.playing);
    this.playing = null;
  }

  draw(): void {
    const context = this.canvas.getContext('2d');
    if (!context || !this.lastFrame) return;
    context.clearRect(0, 0, VIEW_W, VIEW_H);
    context.fillStyle = '#111';
    context.fillRect(0, 0, VIEW_W, VIEW_H);
    for (const state of this.lastFrame.states) {
      this.drawState(context, state);
    }
  }

  private drawState(context: CanvasRenderingContext2D, state: RenderStateDoc): void {
    const project = this.store.state.project;
    const clip = project?.clips[state.clip_id];
    if (!clip) return;
    context.save();
    context.globalAlpha = state.opacity;
    if (clip.payload.kind === 'text' && state.effective_style) {
      const style = state.effective_style;
      const x = (style.position[0] + state.position_offset[0]) * VIEW_W;
      const y = (style.position[1] + state.position_offset[1]) * VIEW_H;
      context.translate(x, y);
      context.rotate((state.rotation * Math.PI) / 180);
      context.scale(state.scale, state.scale);
      const [r, g, b, a] = style.color;
      context.fillStyle = `rgba(${r * 255},${g * 255},${b * 255},${a})`;
      context.font = `${style.font_size * (VIEW_H / 1080)}px ${style.font_family}`;
      context.textAlign = style.alignment as CanvasTextAlign;
      const text = clip.payload.content;
      const visible = text.slice(0, Math.round(state.reveal_fraction * text.length));
      context.fillText(visible, 0, 0);
    } else {
      // media/element clips render as rectangles (images only by uri label)
      const x = (0.5 + state.position_offset[0]) * VIEW_W;
      const y = (0.5 + state.position_offset[1]) * VIEW_H;
      context.translate(x, y);
      context.scale(state.scale, state.scale);
      context.fillStyle = '#3a6ea5';
      context.fillRect(-60, -34, 120, 68);
    }
    context.restore();
  }

  private wireDrag(): void {
    let dragClip: string | null = null;
    this.canvas.addEventListener('mousedown', () => {
      const selection = this.store.state.selection;
      if (selection.kind === 'clip' && selection.id) dragClip = selection.id;
    });
    this.canvas.addEventListener('mouseup', (event) => {
      if (!dragClip) return;
      const pid = this.store.state.projectId;
      const rect = this.canvas.getBoundingClientRect();
      const nx = Math.min(1, Math.max(0, ((event as MouseEvent).clientX - rect.left) / VIEW_W));
      const ny = Math.min(1, Math.max(0, ((event as MouseEvent).clientY - rect.top) / VIEW_H));
      const clipId = dragClip;
      dragClip = null;
      if (!pid) return;
      void this.store.api
        .updateClip(pid, clipId, {
          style: { position: [Math.round(nx * 1000) / 1000, Math.round(ny * 1000) / 1000] },
        })
        .then(() => this.store.resync())
        .then(() => this.seek(this.time));
    });
  }
}

// Timeline panel: one lane per track, clips placed by start/duration, drag to
// move (overlap rejections snap back with a toast), drag-out as a reference
// source, right-click menus for clip and animation creation.

import { ApiFault } from '../api.js';
import { clear, el } from '../dom.js';
import { REFERENCE_MIME, dragPayload } from '../reference.js';
import { EditorStore } from '../store.js';
import type { ClipDoc, TrackDoc } from '../types.js';

const PX_PER_SECOND = 60;

export class TimelinePanel {
  root: HTMLElement;

  constructor(private store: EditorStore) {
    this.root = el('section', { class: 'panel timeline-panel' });
    store.subscribe(() => this.render());
  }

  private clipLabel(clip: ClipDoc): string {
    if (clip.payload.kind === 'text') return clip.payload.content || '(empty)';
    if (clip.payload.kind === 'media') return clip.payload.asset_ref;
    return clip.payload.element_kind;
  }

  private async moveClip(clip: ClipDoc, newStart: number): Promise<void> {
    const pid = this.store.state.projectId;
    if (!pid) return;
    try {
      await this.store.api.updateClip(pid, clip.id, { start: Math.max(0, newStart) });
      await this.store.resync();
    } catch (error) {
      if (error instanceof ApiFault) {
        this.store.toast(error.code); // snap back: state unchanged, re-render
        this.render();
      }
    }
  }

  private async resizeClip(clip: ClipDoc, newDuration: number): Promise<void> {
    const pid = this.store.state.projectId;
    if (!pid) return;
    try {
      await this.store.api.updateClip(pid, clip.id, {
        start: clip.start,
        duration: Math.max(0.001, newDuration),
      });
      await this.store.resync();
    } catch (error) {
      if (error instanceof ApiFault) {
        this.store.toast(error.code);
        this.render();
      }
    }
  }

  private clipDiv(clip: ClipDoc): HTMLElement {
    const animations = Object.values(this.store.state.project!.animations).filter(
      (a) => a.clip_id === clip.id,
    );
    const node = el(
      'div',
      {
        class: 'clip' + (this.store.state.selection.id === clip.id ? ' selected' : ''),
        'data-clip': clip.id,
        draggable: 'true',
        onclick: () => this.store.select('clip', clip.id),
      },
      [el('span', { class: 'clip-label' }, [this.clipLabel(clip)])],
    );
    node.style.left = `${clip.start * PX_PER_SECOND}px`;
    node.style.width = `${clip.duration * PX_PER_SECOND}px`;
    for (const animation of animations) {
      node.append(
        el(
          'span',
          {
            class: 'anim-badge',
            'data-animation': animation.id,
            title: animation.preset,
            onclick: (event: Event) => {
              event.stopPropagation();
              this.store.select('animation', animation.id);
            },
          },
          [animation.preset],
        ),
      );
    }
    node.addEventListener('dragstart', (event) => {
      const dt = (event as DragEvent).dataTransfer;
      if (dt) {
        dt.setData(REFERENCE_MIME, dragPayload('clip', clip.id));
        dt.setData('text/plain', clip.id);
      }
    });
    // pointer-based move: mousedown then mouseup with a horizontal delta
    let downX: number | null = null;
    node.addEventListener('mousedown', (event) => {
      downX = (event as MouseEvent).clientX;
    });
    node.addEventListener('mouseup', (event) => {
      if (downX === null) return;
      const delta = ((event as MouseEvent).clientX - downX) / PX_PER_SECOND;
      downX = null;
      if (Math.abs(delta) > 0.01) {
        void this.moveClip(clip, Math.round((clip.start + delta) * 1000) / 1000);
      }
    });
    const handle = el('span', { class: 'resize-handle' });
    handle.addEventListener('mousedown', (event) => event.stopPropagation());
    handle.addEventListener('mouseup', (event) => {
      event.stopPropagation();
      const lane = node.parentElement;
      if (!lane) return;
      const laneLeft = lane.getBoundingClientRect().left;
      const edge = ((event as MouseEvent).clientX - laneLeft) / PX_PER_SECOND;
      const duration = Math.round((edge - clip.start) * 1000) / 1000;
      if (duration > 0) void this.resizeClip(clip, duration);
    });
    node.append(handle);
    node.addEventListener('contextmenu', (event) => {
      event.preventDefault();
      this.openAnimationMenu(node, clip);
    });
    return node;
  }

  private openAnimationMenu(anchor: HTMLElement, clip: ClipDoc): void {
    anchor.querySelector('.context-menu')?.remove();
    const menu = el('div', { class: 'context-menu' });
    for (const preset of this.store.presetNames()) {
      menu.append(
        el(
          'button',
          {
            class: 'menu-item',
            'data-preset': preset,
            onclick: () => {
              const pid = this.store.state.projectId;
              if (!pid) return;
              void this.store.api
                .attachAnimation(pid, clip.id, preset)
                .then(() => this.store.resync())
                .catch((error) => {
                  if (error instanceof ApiFault) this.store.toast(error.code);
                });
              menu.remove();
            },
          },
          [preset],
        ),
      );
    }
    anchor.append(menu);
  }

  private laneDiv(track: TrackDoc): HTMLElement {
    const project = this.store.state.project!;
    const lane = el('div', { class: 'lane', 'data-track': track.id }, [
      el('span', { class: 'lane-name', onclick: () => this.store.select('track', track.id) }, [
        `${track.name} (${track.kind})`,
      ]),
    ]);
    const body = el('div', { class: 'lane-body' });
    const clips = Object.values(project.clips)
      .filter((c) => c.track_id === track.id)
      .sort((a, b) => a.start - b.start);
    for (const clip of clips) body.append(this.clipDiv(clip));
    body.addEventListener('contextmenu', (event) => {
      if (event.target !== body) return;
      event.preventDefault();
      this.openCreateMenu(body, track, (event as MouseEvent).offsetX / PX_PER_SECOND);
    });
    body.addEventListener('dragover', (event) => event.preventDefault());
    body.addEventListener('drop', (event) => {
      event.preventDefault();
      const raw = (event as DragEvent).dataTransfer?.getData(REFERENCE_MIME);
      if (!raw) return;
      const parsed = JSON.parse(raw) as { kind: string; id: string };
      if (parsed.kind !== 'asset') return;
      const pid = this.store.state.projectId;
      if (!pid) return;
      const at = (event as DragEvent).offsetX / PX_PER_SECOND;
      void this.store.api
        .createClip(pid, track.id, Math.max(0, Math.round(at * 1000) / 1000), 2, {
          kind: 'media',
          asset_ref: parsed.id,
        })
        .then(() => this.store.resync())
        .catch((error) => {
          if (error instanceof ApiFault) this.store.toast(error.code);
        });
    });
    lane.append(body);
    return lane;
  }

  private openCreateMenu(body: HTMLElement, track: TrackDoc, at: number): void {
    body.querySelector('.context-menu')?.remove();
    const payload =
      track.kind === 'text'
        ? { kind: 'text', content: 'New text' }
        : track.kind === 'element'
          ? { kind: 'element', element_kind: 'rectangle' }
          : null;
    if (!payload) return;
    const menu = el('div', { class: 'context-menu' }, [
      el(
        'button',
        {
          class: 'menu-item create-clip',
          onclick: () => {
            const pid = this.store.state.projectId;
            if (!pid) return;
            void this.store.api
              .createClip(pid, track.id, Math.round(at * 1000) / 1000, 2, payload)
              .then(() => this.store.resync())
              .catch((error) => {
                if (error instanceof ApiFault) this.store.toast(error.code);
              });
            menu.remove();
          },
        },
        ['Add clip here'],
      ),
    ]);
    body.append(menu);
  }

  render(): void {
    clear(this.root);
    this.root.append(el('h2', {}, ['Timeline']));
    const project = this.store.state.project;
    if (!project) return;
    const tracks = Object.values(project.tracks).sort(
      (a, b) => a.order_index - b.order_index,
    );
    const lanes = el('div', { class: 'lanes' });
    for (const track of tracks) lanes.append(this.laneDiv(track));
    this.root.append(lanes);
    const addTrack = el('div', { class: 'track-actions' });
    for (const kind of ['text', 'video', 'image', 'audio', 'element']) {
      addTrack.append(
        el(
          'button',
          {
            class: `add-track add-track-${kind}`,
            onclick: () => {
              const pid = this.store.state.projectId;
              if (!pid) return;
              void this.store.api.createTrack(pid, kind).then(() => this.store.resync());
            },
          },
          [`+ ${kind}`],
        ),
      );
    }
    this.root.append(addTrack);
  }
}

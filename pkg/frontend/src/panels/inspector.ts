// Inspector panel: a parameter form generated from the selected object's
// reflected schema (served as the update_* tool descriptor). Numeric ranges
// become slider bounds; enums become selects; out-of-range typed values are
// rejected client-side before any request is made.

import { ApiFault } from '../api.js';
import { clear, el } from '../dom.js';
import { EditorStore } from '../store.js';
import type { ParamSchema } from '../types.js';

export class InspectorPanel {
  root: HTMLElement;

  constructor(private store: EditorStore) {
    this.root = el('section', { class: 'panel inspector-panel' });
    store.subscribe(() => this.render());
  }

  private currentValue(name: string): unknown {
    const { selection, project } = this.store.state;
    if (!project || !selection.id) return undefined;
    if (selection.kind === 'clip') {
      const clip = project.clips[selection.id];
      if (!clip) return undefined;
      if (name === 'start') return clip.start;
      if (name === 'duration') return clip.duration;
      const payload = clip.payload as Record<string, any>;
      if (name in payload) return payload[name];
      if (payload.style && name in payload.style) return payload.style[name];
    } else if (selection.kind === 'animation') {
      const animation = project.animations[selection.id];
      if (!animation) return undefined;
      if (name === 'phase') return animation.phase;
      return animation.params[name];
    } else if (selection.kind === 'track') {
      const track = project.tracks[selection.id] as Record<string, any> | undefined;
      return track?.[name];
    } else if (selection.kind === 'asset') {
      const asset = project.assets[selection.id] as Record<string, any> | undefined;
      return asset?.[name];
    }
    return undefined;
  }

  private async commit(name: string, value: unknown): Promise<void> {
    const { selection, projectId } = this.store.state;
    if (!projectId || !selection.id) return;
    try {
      if (selection.kind === 'clip') {
        if (['start', 'duration', 'content'].includes(name)) {
          await this.store.api.updateClip(projectId, selection.id, { [name]: value });
        } else {
          await this.store.api.updateClip(projectId, selection.id, {
            style: { [name]: value },
          });
        }
      } else if (selection.kind === 'animation') {
        if (name === 'phase') {
          await this.store.api.updateAnimation(projectId, selection.id, {}, value as string);
        } else {
          await this.store.api.updateAnimation(projectId, selection.id, { [name]: value });
        }
      }
      await this.store.resync();
    } catch (error) {
      if (error instanceof ApiFault) this.store.toast(error.code);
    }
  }

  private numberRow(name: string, schema: ParamSchema): HTMLElement {
    const value = this.currentValue(name);
    const slider = el('input', {
      class: `slider slider-${name}`,
      type: 'range',
    }) as HTMLInputElement;
    const number = el('input', {
      class: `number number-${name}`,
      type: 'number',
    }) as HTMLInputElement;
    if (schema.minimum !== undefined) {
      slider.min = String(schema.minimum);
      number.min = String(schema.minimum);
    }
    if (schema.maximum !== undefined) {
      slider.max = String(schema.maximum);
      number.max = String(schema.maximum);
    }
    slider.step = 'any';
    number.step = 'any';
    if (typeof value === 'number') {
      slider.value = String(value);
      number.value = String(value);
    }
    slider.addEventListener('change', () => void this.commit(name, Number(slider.value)));
    number.addEventListener('change', () => {
      const parsed = Number(number.value);
      const low = schema.minimum ?? -Infinity;
      const high = schema.maximum ?? Infinity;
      if (Number.isNaN(parsed) || parsed < low || parsed > high) {
        number.classList.add('invalid'); // rejected client-side; nothing sent
        return;
      }
      number.classList.remove('invalid');
      void this.commit(name, parsed);
    });
    return el('div', { class: `field field-${name}` }, [
      el('label', {}, [name + (schema.unit ? ` (${schema.unit})` : '')]),
      slider,
      number,
    ]);
  }

  private enumRow(name: string, schema: ParamSchema): HTMLElement {
    const select = el('select', { class: `select select-${name}` }) as HTMLSelectElement;
    for (const option of schema.enum ?? []) {
      select.append(el('option', { value: option }, [option]));
    }
    const value = this.currentValue(name);
    if (typeof value === 'string') select.value = value;
    select.addEventListener('change', () => void this.commit(name, select.value));
    return el('div', { class: `field field-${name}` }, [
      el('label', {}, [name]),
      select,
    ]);
  }

  private textRow(name: string): HTMLElement {
    const input = el('input', {
      class: `text text-${name}`,
      type: 'text',
    }) as HTMLInputElement;
    const value = this.currentValue(name);
    if (typeof value === 'string') input.value = value;
    input.addEventListener('change', () => void this.commit(name, input.value));
    return el('div', { class: `field field-${name}` }, [
      el('label', {}, [name]),
      input,
    ]);
  }

  render(): void {
    clear(this.root);
    this.root.append(el('h2', {}, ['Inspector']));
    const selection = this.store.state.selection;
    const descriptor = this.store.updateDescriptorFor(selection);
    if (!descriptor) {
      this.root.append(el('p', { class: 'empty' }, ['Select a clip or animation']));
      return;
    }
    this.root.append(
      el('p', { class: 'inspector-target' }, [`${selection.kind}: ${selection.id ?? ''}`]),
    );
    const form = el('div', { class: 'inspector-form', 'data-tool': descriptor.name });
    for (const [name, schema] of Object.entries(descriptor.parameters.properties)) {
      if (name === 'id' || name === 'track_id' || name === 'clip_id') continue;
      if (schema.enum) form.append(this.enumRow(name, schema));
      else if (schema.type === 'number' || schema.type === 'integer') {
        form.append(this.numberRow(name, schema));
      } else if (schema.type === 'string') form.append(this.textRow(name));
      // color/point arrays are edited via the script toolbar and preview drag
    }
    this.root.append(form);
    if (selection.kind === 'animation' && selection.id) {
      const animId = selection.id;
      this.root.append(
        el(
          'button',
          {
            class: 'detach',
            onclick: () => {
              const pid = this.store.state.projectId;
              if (!pid) return;
              void this.store.api.detachAnimation(pid, animId).then(() => {
                this.store.select('none', null);
                return this.store.resync();
              });
            },
          },
          ['Remove animation'],
        ),
      );
    }
  }
}

// Script panel: editable lines sorted by appearance time, a style toolbar
// for batch edits, red-dot animation markers and red-dashed revision
// underlines whose hover menus accept or dismiss the suggestion.

import { ApiFault } from '../api.js';
import { clear, el } from '../dom.js';
import { EditorStore } from '../store.js';
import type { ScriptLineDoc, SuggestionDoc } from '../types.js';

export class ScriptPanel {
  root: HTMLElement;
  private rangeStart = 0;
  private rangeEnd = 0;

  constructor(private store: EditorStore) {
    this.root = el('section', { class: 'panel script-panel' });
    store.subscribe(() => this.render());
  }

  private async accept(suggestion: SuggestionDoc): Promise<void> {
    const { projectId, revision } = this.store.state;
    if (!projectId) return;
    try {
      await this.store.api.acceptSuggestion(projectId, suggestion.id, revision);
      this.store.state.suggestions.delete(suggestion.id);
      await this.store.resync();
    } catch (error) {
      if (error instanceof ApiFault) this.store.toast(error.code);
    }
  }

  private async dismiss(suggestion: SuggestionDoc): Promise<void> {
    const pid = this.store.state.projectId;
    if (!pid) return;
    await this.store.api.dismissSuggestion(pid, suggestion.id);
    this.store.state.suggestions.delete(suggestion.id);
    await this.store.resync();
  }

  private suggestionMenu(suggestion: SuggestionDoc): HTMLElement {
    const label =
      suggestion.kind === 'animation_recommendation'
        ? `Animate: ${suggestion.action.preset}`
        : `Replace with: "${suggestion.action.replacement}"`;
    return el('div', { class: 'suggestion-menu' }, [
      el('p', { class: 'suggestion-reason' }, [suggestion.reason]),
      el('p', { class: 'suggestion-action' }, [label]),
      el(
        'button',
        { class: 'accept', onclick: () => void this.accept(suggestion) },
        ['Accept'],
      ),
      el(
        'button',
        { class: 'dismiss', onclick: () => void this.dismiss(suggestion) },
        ['Dismiss'],
      ),
    ]);
  }

  private lineRow(line: ScriptLineDoc, index: number): HTMLElement {
    const pending = this.store.pendingForClip(line.clip_id);
    const textSuggestions = pending.filter((s) => s.kind === 'text_revision');
    const animSuggestions = pending.filter((s) => s.kind === 'animation_recommendation');

    const input = el('input', {
      class: 'line-text' + (textSuggestions.length ? ' has-revision' : ''),
      type: 'text',
      value: line.text,
      'data-clip': line.clip_id,
    }) as HTMLInputElement;
    input.value = line.text;
    input.addEventListener('change', () => {
      const pid = this.store.state.projectId;
      if (!pid) return;
      void this.store.api
        .editLineText(pid, line.clip_id, input.value)
        .then(() => this.store.resync());
    });
    input.addEventListener('focus', () => {
      this.rangeStart = index;
      this.rangeEnd = index;
      this.store.select('clip', line.clip_id);
    });

    const row = el('div', { class: 'script-line', 'data-clip': line.clip_id }, [
      el('span', { class: 'line-number' }, [String(index + 1)]),
      input,
    ]);
    for (const suggestion of textSuggestions) {
      row.append(
        el('span', { class: 'revision-underline', 'data-suggestion': suggestion.id }, [
          this.suggestionMenu(suggestion),
        ]),
      );
    }
    if (animSuggestions.length > 0) {
      const dot = el('span', { class: 'red-dot', 'data-suggestion': animSuggestions[0].id }, [
        this.suggestionMenu(animSuggestions[0]),
      ]);
      row.append(dot);
    }
    return row;
  }

  private toolbar(): HTMLElement {
    const sizeInput = el('input', {
      class: 'style-size',
      type: 'number',
      min: '1',
      max: '512',
      value: '48',
    }) as HTMLInputElement;
    const colorInput = el('input', { class: 'style-color', type: 'color', value: '#ffffff' });
    const apply = async (delta: Record<string, unknown>) => {
      const pid = this.store.state.projectId;
      if (!pid) return;
      try {
        await this.store.api.styleBatch(pid, this.rangeStart, this.rangeEnd, delta);
        await this.store.resync();
      } catch (error) {
        if (error instanceof ApiFault) this.store.toast(error.code);
      }
    };
    return el('div', { class: 'script-toolbar' }, [
      sizeInput,
      el(
        'button',
        { class: 'apply-size', onclick: () => void apply({ font_size: Number(sizeInput.value) }) },
        ['Size'],
      ),
      colorInput,
      el(
        'button',
        {
          class: 'apply-color',
          onclick: () => {
            const hex = (colorInput as HTMLInputElement).value;
            const rgba = [
              parseInt(hex.slice(1, 3), 16) / 255,
              parseInt(hex.slice(3, 5), 16) / 255,
              parseInt(hex.slice(5, 7), 16) / 255,
              1,
            ];
            void apply({ color: rgba });
          },
        },
        ['Color'],
      ),
      el(
        'button',
        { class: 'add-line', onclick: () => void this.addLine() },
        ['+ Line'],
      ),
    ]);
  }

  /** Batch range via shift-click on line numbers. */
  extendRangeTo(index: number): void {
    this.rangeEnd = Math.max(this.rangeStart, index);
  }

  private async addLine(): Promise<void> {
    const pid = this.store.state.projectId;
    if (!pid) return;
    try {
      await this.store.api.addLine(pid, 'New line');
      await this.store.resync();
    } catch (error) {
      if (error instanceof ApiFault) this.store.toast(error.code);
    }
  }

  render(): void {
    clear(this.root);
    this.root.append(el('h2', {}, ['Script']));
    this.root.append(this.toolbar());
    const script = this.store.state.script;
    if (!script) return;
    const list = el('div', { class: 'script-lines' });
    script.lines.forEach((line, index) => list.append(this.lineRow(line, index)));
    this.root.append(list);
  }
}

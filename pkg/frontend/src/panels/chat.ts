// Chat panel: message box with "@" autocompletion and drag-and-drop
// references, plan-step cards with Approve/Modify/Reject, the auto-skip
// toggle, UI prompts (selector / parameter form / upload), and
// context-aware instruction chips.

import { ApiFault } from '../api.js';
import { clear, el } from '../dom.js';
import { REFERENCE_MIME, makeToken, readDragPayload } from '../reference.js';
import { EditorStore } from '../store.js';
import type { ChatTurn, PlanStepDoc, UIPromptDoc } from '../types.js';

export class ChatPanel {
  root: HTMLElement;
  input: HTMLTextAreaElement;
  private autoSkip = false;
  private chips: string[] = [];

  constructor(private store: EditorStore) {
    this.root = el('section', { class: 'panel chat-panel' });
    this.input = el('textarea', {
      class: 'chat-input',
      placeholder: 'Describe an edit… use @ to reference elements',
    }) as HTMLTextAreaElement;
    this.wireInput();
    store.subscribe(() => this.render());
  }

  private wireInput(): void {
    this.input.addEventListener('dragover', (event) => event.preventDefault());
    this.input.addEventListener('drop', (event) => {
      event.preventDefault();
      const raw = (event as DragEvent).dataTransfer?.getData(REFERENCE_MIME);
      if (!raw) return;
      const parsed = readDragPayload(raw);
      if (!parsed) return;
      this.insertAtCursor(makeToken(parsed.kind, parsed.id));
    });
    this.input.addEventListener('keydown', (event) => {
      const key = (event as KeyboardEvent).key;
      if (key === '@') {
        // open the autocomplete on the next tick, once '@' is in the value
        setTimeout(() => this.openAutocomplete(), 0);
      } else if (key === 'Enter' && !(event as KeyboardEvent).shiftKey) {
        event.preventDefault();
        void this.send();
      }
    });
  }

  insertAtCursor(text: string): void {
    const at = this.input.selectionStart ?? this.input.value.length;
    this.input.value =
      this.input.value.slice(0, at) + text + this.input.value.slice(at);
  }

  private openAutocomplete(): void {
    this.root.querySelector('.mention-menu')?.remove();
    const targets = this.store.referenceTargets();
    if (!targets.length) return;
    const menu = el('div', { class: 'mention-menu' });
    for (const target of targets.slice(0, 12)) {
      menu.append(
        el(
          'button',
          {
            class: 'mention-item',
            'data-id': target.id,
            onclick: () => {
              // replace the trailing "@" with the chosen token
              this.input.value = this.input.value.replace(
                /@$/,
                makeToken(target.kind, target.id),
              );
              menu.remove();
            },
          },
          [`${target.kind}: ${target.label}`],
        ),
      );
    }
    this.root.append(menu);
  }

  async ensureSession(): Promise<string | null> {
    const pid = this.store.state.projectId;
    if (!pid) return null;
    let session = this.store.state.session;
    if (!session || (session.state !== 'idle' && session.state !== 'done')) {
      if (session && session.state !== 'done') {
        return session.id; // busy session keeps its id
      }
    }
    if (!session) {
      session = await this.store.api.createSession(pid, this.autoSkip);
      this.store.patch({ session });
    }
    return session.id;
  }

  private applyTurn(turn: ChatTurn): void {
    this.store.patch({ session: turn.session });
    void this.store.resync();
  }

  async send(): Promise<void> {
    const text = this.input.value.trim();
    if (!text) return;
    const sessionId = await this.ensureSession();
    if (!sessionId) return;
    try {
      const turn = await this.store.api.sendMessage(sessionId, text);
      this.input.value = '';
      this.applyTurn(turn);
    } catch (error) {
      if (error instanceof ApiFault) this.store.toast(error.code);
    }
  }

  async loadChips(): Promise<void> {
    const pid = this.store.state.projectId;
    if (!pid) return;
    this.chips = await this.store.api.instructionSuggestions(pid);
    this.render();
  }

  private stepCard(step: PlanStepDoc, isCurrent: boolean): HTMLElement {
    const card = el(
      'div',
      { class: `step-card status-${step.status}`, 'data-step': step.id },
      [
        el('p', { class: 'step-tool' }, [`${step.tool} (${step.kind})`]),
        el('p', { class: 'step-rationale' }, [step.rationale]),
        el('pre', { class: 'step-args' }, [JSON.stringify(step.args)]),
        el('span', { class: 'step-status' }, [step.status]),
      ],
    );
    if (step.error) card.append(el('p', { class: 'step-error' }, [step.error]));
    const session = this.store.state.session;
    if (isCurrent && session?.state === 'awaiting_approval') {
      card.append(
        el(
          'button',
          { class: 'approve', onclick: () => void this.turnAction('approve') },
          ['Approve'],
        ),
        el(
          'button',
          { class: 'modify', onclick: () => this.openModify(card, step) },
          ['Modify'],
        ),
        el(
          'button',
          { class: 'reject', onclick: () => void this.turnAction('reject') },
          ['Reject'],
        ),
      );
    }
    return card;
  }

  private openModify(card: HTMLElement, step: PlanStepDoc): void {
    card.querySelector('.modify-editor')?.remove();
    const editor = el('textarea', { class: 'modify-editor' }) as HTMLTextAreaElement;
    editor.value = JSON.stringify(step.args);
    card.append(
      editor,
      el(
        'button',
        {
          class: 'modify-commit',
          onclick: () => {
            try {
              const args = JSON.parse(editor.value);
              void this.turnAction('modify', args);
            } catch {
              this.store.toast('invalid JSON');
            }
          },
        },
        ['Run modified'],
      ),
    );
  }

  async turnAction(
    action: 'approve' | 'reject' | 'modify',
    args?: Record<string, unknown>,
  ): Promise<void> {
    const session = this.store.state.session;
    if (!session) return;
    try {
      let turn: ChatTurn;
      if (action === 'approve') turn = await this.store.api.approveStep(session.id);
      else if (action === 'reject') turn = await this.store.api.rejectStep(session.id);
      else turn = await this.store.api.modifyStep(session.id, args ?? {});
      this.applyTurn(turn);
    } catch (error) {
      if (error instanceof ApiFault) this.store.toast(error.code);
    }
  }

  private promptWidget(prompt: UIPromptDoc): HTMLElement {
    const box = el('div', { class: `ui-prompt prompt-${prompt.kind}` }, [
      el('p', { class: 'prompt-question' }, [prompt.question]),
    ]);
    if (prompt.kind === 'selector') {
      for (const option of prompt.payload.options as { id: string; label: string }[]) {
        box.append(
          el(
            'button',
            {
              class: 'prompt-option',
              'data-option': option.id,
              onclick: () => void this.answer({ option_id: option.id }),
            },
            [option.label],
          ),
        );
      }
    } else if (prompt.kind === 'parameter_form') {
      const fields = prompt.payload.fields as {
        name: string;
        kind: string;
        default: unknown;
        range?: (number | string)[];
      }[];
      const inputs = new Map<string, HTMLInputElement>();
      for (const field of fields) {
        const input = el('input', {
          class: `prompt-field field-${field.name}`,
          type: field.kind === 'enum' ? 'text' : 'number',
          value: String(field.default),
        }) as HTMLInputElement;
        if (field.range && typeof field.range[0] === 'number') {
          input.min = String(field.range[0]);
          input.max = String(field.range[1]);
        }
        inputs.set(field.name, input);
        box.append(el('label', {}, [field.name, input]));
      }
      box.append(
        el(
          'button',
          {
            class: 'prompt-submit',
            onclick: () => {
              const values: Record<string, unknown> = {};
              for (const [name, input] of inputs) {
                if (input.value === '') continue;
                values[name] = input.type === 'number' ? Number(input.value) : input.value;
              }
              void this.answer({ values });
            },
          },
          ['Submit'],
        ),
      );
    } else {
      const file = el('input', { class: 'prompt-upload', type: 'file' }) as HTMLInputElement;
      box.append(
        file,
        el(
          'button',
          {
            class: 'prompt-upload-commit',
            onclick: () => {
              const pid = this.store.state.projectId;
              const chosen = file.files?.[0];
              if (!pid || !chosen) return;
              void this.store.api.uploadAsset(pid, chosen).then((asset) => {
                void this.answer({ asset_id: asset.id });
              });
            },
          },
          ['Upload & continue'],
        ),
      );
    }
    return box;
  }

  async answer(answer: Record<string, unknown>): Promise<void> {
    const session = this.store.state.session;
    if (!session) return;
    try {
      const turn = await this.store.api.answerPrompt(session.id, answer);
      this.applyTurn(turn);
    } catch (error) {
      if (error instanceof ApiFault) this.store.toast(error.code);
    }
  }

  render(): void {
    const draft = this.input.value;
    clear(this.root);
    this.root.append(el('h2', {}, ['Chat']));

    const session = this.store.state.session;
    const log = el('div', { class: 'chat-log' });
    if (session) {
      for (const message of session.messages) {
        log.append(
          el('p', { class: `chat-message role-${message.role}` }, [
            `${message.role}: ${message.text}`,
          ]),
        );
      }
      session.steps.forEach((step, index) => {
        log.append(this.stepCard(step, index === session.steps.length - 1));
      });
      if (session.pending_prompt) log.append(this.promptWidget(session.pending_prompt));
      log.append(el('p', { class: `session-state state-${session.state}` }, [session.state]));
    }
    this.root.append(log);

    const chipRow = el('div', { class: 'chips' });
    for (const chip of this.chips) {
      chipRow.append(
        el(
          'button',
          {
            class: 'chip',
            onclick: () => {
              this.input.value = chip;
            },
          },
          [chip],
        ),
      );
    }
    this.root.append(chipRow);

    const toggle = el('input', { class: 'auto-skip', type: 'checkbox' }) as HTMLInputElement;
    toggle.checked = this.autoSkip;
    toggle.addEventListener('change', () => {
      this.autoSkip = toggle.checked;
      this.store.patch({ session: null }); // next message starts a fresh session
    });
    this.root.append(el('label', { class: 'auto-skip-label' }, ['auto-skip', toggle]));

    this.input.value = draft;
    this.root.append(this.input);
    this.root.append(
      el('button', { class: 'send', onclick: () => void this.send() }, ['Send']),
    );
  }
}

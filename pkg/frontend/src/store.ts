// Client state: one store, one reducer path. The engine owns the truth; the
// store mirrors it at a revision and refetches on revision events. Animation
// values for scrubbed display always come from the engine's /frame endpoint.

import { ApiClient } from './api.js';
import type {
  BusEvent,
  ProjectDoc,
  ScriptDoc,
  SessionDoc,
  SuggestionDoc,
  ToolDescriptorDoc,
} from './types.js';

export interface Selection {
  kind: 'clip' | 'animation' | 'track' | 'asset' | 'none';
  id: string | null;
}

export interface ClientState {
  projectId: string | null;
  project: ProjectDoc | null;
  revision: number;
  script: ScriptDoc | null;
  suggestions: Map<string, SuggestionDoc>;
  session: SessionDoc | null;
  selection: Selection;
  tools: ToolDescriptorDoc[];
  lastEventSeq: number;
  connected: boolean;
  toast: string | null;
}

export type Listener = (state: ClientState) => void;

export class EditorStore {
  state: ClientState = {
    projectId: null,
    project: null,
    revision: 0,
    script: null,
    suggestions: new Map(),
    session: null,
    selection: { kind: 'none', id: null },
    tools: [],
    lastEventSeq: 0,
    connected: false,
    toast: null,
  };

  private listeners = new Set<Listener>();

  constructor(public api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  patch(partial: Partial<ClientState>): void {
    this.state = { ...this.state, ...partial };
    this.notify();
  }

  toast(message: string): void {
    this.patch({ toast: message });
  }

  async openProject(projectId: string): Promise<void> {
    this.state.projectId = projectId;
    this.state.tools = await this.api.getTools(projectId);
    await this.resync();
  }

  /** Full refetch; used on open and whenever the event channel reports a gap.
   *  The revision never moves backwards. */
  async resync(): Promise<void> {
    const pid = this.state.projectId;
    if (!pid) return;
    const [envelope, script, suggestions] = await Promise.all([
      this.api.getProject(pid),
      this.api.getScript(pid),
      this.api.getSuggestions(pid),
    ]);
    const project = envelope.project;
    if (project.revision < this.state.revision) return; // stale read; keep newer state
    const map = new Map<string, SuggestionDoc>();
    for (const suggestion of suggestions) map.set(suggestion.id, suggestion);
    this.patch({
      project,
      revision: project.revision,
      script,
      suggestions: map,
    });
  }

  /** Apply one ordered bus event. Revision bumps trigger a refetch of the
   *  project and script mirrors; suggestion and chat payloads apply inline. */
  async applyEvent(event: BusEvent): Promise<void> {
    if (event.seq <= this.state.lastEventSeq && event.type !== 'gap') return;
    if (event.type !== 'gap') this.state.lastEventSeq = event.seq;
    switch (event.type) {
      case 'gap':
        await this.resync();
        break;
      case 'revision': {
        const incoming = event.payload.revision as number;
        if (incoming > this.state.revision) await this.resync();
        break;
      }
      case 'suggestion': {
        const doc = event.payload.suggestion as SuggestionDoc;
        if (doc.status === 'pending') {
          this.state.suggestions.set(doc.id, doc);
        } else {
          this.state.suggestions.delete(doc.id);
        }
        this.patch({ suggestions: new Map(this.state.suggestions) });
        break;
      }
      case 'chat': {
        if (this.state.session && event.payload.session_id === this.state.session.id) {
          const session = await this.api.getSession(this.state.session.id);
          this.patch({ session });
        }
        break;
      }
    }
  }

  pendingForClip(clipId: string): SuggestionDoc[] {
    return [...this.state.suggestions.values()]
      .filter((s) => s.status === 'pending' && s.target.clip_id === clipId)
      .sort((a, b) => (a.id < b.id ? -1 : 1));
  }

  select(kind: Selection['kind'], id: string | null): void {
    this.patch({ selection: { kind, id } });
  }

  /** Live objects usable as reference tokens, for autocomplete and drops. */
  referenceTargets(): { kind: string; id: string; label: string }[] {
    const project = this.state.project;
    if (!project) return [];
    const out: { kind: string; id: string; label: string }[] = [];
    for (const clip of Object.values(project.clips)) {
      const label =
        clip.payload.kind === 'text' ? `"${clip.payload.content}"` : clip.payload.kind;
      out.push({ kind: 'clip', id: clip.id, label });
    }
    for (const track of Object.values(project.tracks)) {
      out.push({ kind: 'track', id: track.id, label: track.name });
    }
    for (const asset of Object.values(project.assets)) {
      out.push({ kind: 'asset', id: asset.id, label: asset.name });
    }
    for (const animation of Object.values(project.animations)) {
      out.push({ kind: 'anim', id: animation.id, label: animation.preset });
    }
    out.sort((a, b) => (a.id < b.id ? -1 : 1));
    return out;
  }

  /** Parameter schema for the inspector: the update_* descriptor of the
   *  selected object's class, so slider bounds equal the reflected ranges. */
  updateDescriptorFor(selection: Selection): ToolDescriptorDoc | null {
    const project = this.state.project;
    if (!project || !selection.id) return null;
    let cls: string | null = null;
    if (selection.kind === 'clip') {
      const clip = project.clips[selection.id];
      if (!clip) return null;
      cls = { text: 'text_clip', media: 'media_clip', element: 'element_clip' }[
        clip.payload.kind
      ];
    } else if (selection.kind === 'animation') {
      const animation = project.animations[selection.id];
      if (!animation) return null;
      cls = animation.preset;
    } else if (selection.kind === 'track') {
      cls = 'track';
    } else if (selection.kind === 'asset') {
      cls = 'asset';
    }
    if (!cls) return null;
    return this.state.tools.find((t) => t.name === `update_${cls}`) ?? null;
  }

  /** Preset catalog derived from the tool registry (create_* descriptors of
   *  animation classes). */
  presetNames(): string[] {
    const presets: string[] = [];
    for (const tool of this.state.tools) {
      if (!tool.name.startsWith('create_') || tool.name.endsWith('_batch')) continue;
      const properties = tool.parameters.properties;
      if ('clip_id' in properties && 'phase' in properties) {
        presets.push(tool.name.slice('create_'.length));
      }
    }
    return presets.sort();
  }
}

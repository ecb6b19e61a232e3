// In-memory double of the editing service, implementing the documented API
// semantics the client depends on. Chat turns follow a scripted provider,
// mirroring the backend's mock-gateway behavior.

import descriptors from './tool_descriptors.json';
import type {
  AnimationDoc,
  AssetDoc,
  BusEvent,
  ChatEventDoc,
  ClipDoc,
  ProjectDoc,
  ScriptDoc,
  SessionDoc,
  SuggestionDoc,
  ToolDescriptorDoc,
  TrackDoc,
} from '../src/types.js';

export type ProviderTurn =
  | { type: 'tool_call'; tool: string; args: Record<string, unknown>; rationale?: string }
  | { type: 'assistant'; text: string }
  | {
      type: 'clarify';
      question: string;
      candidates?: string[];
      needed: 'selection' | 'parameters' | 'upload';
    };

let counter = 0;
function newId(kind: string): string {
  counter += 1;
  return `${kind}_${String(counter).padStart(8, '0')}`;
}

export class FakeServer {
  project: ProjectDoc;
  suggestions = new Map<string, SuggestionDoc>();
  sessions = new Map<string, SessionDoc>();
  chatScript: ProviderTurn[] = [];
  bus: BusEvent[] = [];
  calls: { method: string; path: string }[] = [];
  instructionChips = ['Create a draft timeline from your script'];

  constructor() {
    this.project = {
      id: newId('proj'),
      canvas: { width_px: 1920, height_px: 1080 },
      fps: 30,
      assets: {},
      tracks: {},
      clips: {},
      animations: {},
      revision: 0,
      operation_log: [],
    };
  }

  // -- builders used by tests -------------------------------------------

  addTrack(kind: TrackDoc['kind'] = 'text', name = 'Main'): TrackDoc {
    const track: TrackDoc = {
      id: newId('track'),
      kind,
      name,
      order_index: Object.keys(this.project.tracks).length,
      script_visible: true,
    };
    this.project.tracks[track.id] = track;
    return track;
  }

  addTextClip(trackId: string, start: number, duration: number, content: string): ClipDoc {
    const clip: ClipDoc = {
      id: newId('clip'),
      track_id: trackId,
      start,
      duration,
      payload: {
        kind: 'text',
        content,
        style: {
          font_family: 'sans-serif',
          font_size: 48,
          color: [1, 1, 1, 1],
          position: [0.5, 0.5],
          alignment: 'center',
        },
      },
    };
    this.project.clips[clip.id] = clip;
    return clip;
  }

  addSuggestion(doc: Omit<SuggestionDoc, 'id' | 'status'>): SuggestionDoc {
    const suggestion: SuggestionDoc = { ...doc, id: newId('sugg'), status: 'pending' };
    this.suggestions.set(suggestion.id, suggestion);
    return suggestion;
  }

  private commit(): void {
    this.project.revision += 1;
    this.publish('revision', { revision: this.project.revision });
  }

  publish(type: BusEvent['type'], payload: unknown): void {
    this.bus.push({ seq: this.bus.length + 1, type, payload });
  }

  // -- script projection -------------------------------------------------

  private scriptDoc(): ScriptDoc {
    const lines = Object.values(this.project.clips)
      .filter((c) => c.payload.kind === 'text')
      .sort((a, b) =>
        a.start !== b.start
          ? a.start - b.start
          : this.project.tracks[a.track_id].order_index -
            this.project.tracks[b.track_id].order_index,
      )
      .map((c) => ({
        clip_id: c.id,
        text: (c.payload as { content: string }).content,
        style: (c.payload as any).style,
        markers: [...this.suggestions.values()]
          .filter((s) => s.status === 'pending' && s.target.clip_id === c.id)
          .map((s) => s.id),
      }));
    return {
      revision: this.project.revision,
      selected_tracks: Object.keys(this.project.tracks),
      lines,
    };
  }

  // -- mini dispatcher for chat tool calls --------------------------------

  private execute(tool: string, args: Record<string, any>): unknown {
    if (tool.startsWith('query_')) {
      if (tool === 'query_text_clip') {
        return Object.values(this.project.clips).filter((c) => c.payload.kind === 'text');
      }
      if (tool === 'query_track') return Object.values(this.project.tracks);
      return [];
    }
    if (tool === 'update_text_clip') {
      const clip = this.project.clips[args.id as string];
      if (!clip) throw { status: 404, code: 'unknown_clip', message: 'no clip' };
      if (args.content !== undefined) (clip.payload as any).content = args.content;
      if (args.start !== undefined) clip.start = args.start;
      if (args.duration !== undefined) clip.duration = args.duration;
      this.commit();
      return clip;
    }
    if (tool.startsWith('create_')) {
      const preset = tool.slice('create_'.length);
      const animation: AnimationDoc = {
        id: newId('anim'),
        clip_id: args.clip_id as string,
        preset,
        params: { duration: 0.5, delay: 0, speed: 1, direction: 'none', easing: 'linear', ...args },
        phase: (args.phase as AnimationDoc['phase']) ?? 'enter',
      };
      delete (animation.params as any).clip_id;
      delete (animation.params as any).phase;
      this.project.animations[animation.id] = animation;
      this.commit();
      return animation;
    }
    throw { status: 404, code: 'unknown_tool', message: `no binding for ${tool}` };
  }

  // -- chat loop (mirrors the orchestrator contract) -----------------------

  private emit(session: SessionDoc, type: ChatEventDoc['type'], payload: unknown): ChatEventDoc {
    const event: ChatEventDoc = {
      type,
      payload,
      seq: session.events.length + 1,
    } as ChatEventDoc;
    session.events.push(event);
    this.publish('chat', { session_id: session.id, ...event });
    return event;
  }

  private runLoop(session: SessionDoc): void {
    while (session.state === 'planning') {
      const turn = this.chatScript.shift();
      if (!turn) {
        session.state = 'failed';
        this.emit(session, 'failed', { reason: 'mock script exhausted' });
        return;
      }
      if (turn.type === 'assistant') {
        session.messages.push({ role: 'assistant', text: turn.text });
        session.state = 'done';
        this.emit(session, 'assistant_text', { text: turn.text });
        this.emit(session, 'completed', {});
        return;
      }
      if (turn.type === 'clarify') {
        const options = (turn.candidates ?? []).map((id) => ({
          id,
          label: this.project.clips[id]
            ? `clip "${(this.project.clips[id].payload as any).content}"`
            : id,
        }));
        session.pending_prompt = {
          id: newId('prompt'),
          kind:
            turn.needed === 'selection'
              ? 'selector'
              : turn.needed === 'parameters'
                ? 'parameter_form'
                : 'upload_button',
          question: turn.question,
          payload:
            turn.needed === 'selection'
              ? { options }
              : turn.needed === 'parameters'
                ? { target: turn.candidates?.[0], class: 'fade_in', fields: [] }
                : { accepted_kinds: ['image', 'audio', 'video'] },
          bound_step: null,
        };
        session.state = 'awaiting_prompt_answer';
        this.emit(session, 'prompt', session.pending_prompt);
        return;
      }
      const step = {
        id: newId('step'),
        tool: turn.tool,
        args: turn.args,
        rationale: turn.rationale ?? `Planned call to ${turn.tool}`,
        kind: turn.tool.startsWith('query_') ? ('query' as const) : ('edit' as const),
        status: 'proposed' as const,
        result: null,
        error: null,
      };
      session.steps.push(step);
      this.emit(session, 'plan_proposed', step);
      if (step.kind === 'query' || session.auto_skip) {
        this.executeStep(session, step);
      } else {
        session.state = 'awaiting_approval';
        this.emit(session, 'awaiting_approval', { step_id: step.id });
        return;
      }
    }
  }

  private executeStep(session: SessionDoc, step: SessionDoc['steps'][number]): void {
    session.state = 'executing';
    try {
      const result = this.execute(step.tool, step.args as Record<string, any>);
      step.status = 'executed';
      step.result = result;
      this.emit(session, 'step_result', { step_id: step.id, outcome: 'ok', result });
      session.state = 'planning';
    } catch (error: any) {
      step.status = 'failed';
      step.error = `${error.code}: ${error.message}`;
      this.emit(session, 'step_result', {
        step_id: step.id,
        outcome: 'error',
        error,
      });
      session.consecutive_failures += 1;
      session.state = session.consecutive_failures >= 3 ? 'failed' : 'planning';
      if (session.state === 'failed') this.emit(session, 'failed', { reason: 'three failures' });
    }
  }

  private chatTurn(session: SessionDoc, before: number): unknown {
    return { session, events: session.events.slice(before) };
  }

  // -- fetch --------------------------------------------------------------

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? 'GET';
    const path = url.replace(/^https?:\/\/[^/]+/, '');
    this.calls.push({ method, path });
    const body =
      init?.body && !(init.body instanceof FormData)
        ? JSON.parse(init.body as string)
        : undefined;
    try {
      const result = this.route(method, path, body, init?.body);
      if (result === undefined) {
        return new Response(null, { status: 204 });
      }
      return new Response(JSON.stringify(result), {
        status: 200,
        headers: { 'Content-Type': 'application/json' },
      });
    } catch (error: any) {
      if (error && typeof error.status === 'number') {
        return new Response(
          JSON.stringify({ code: error.code, message: error.message, detail: {} }),
          { status: error.status },
        );
      }
      throw error;
    }
  };

  private route(method: string, path: string, body: any, rawBody: unknown): unknown {
    const pid = this.project.id;
    let match: RegExpMatchArray | null;

    if (method === 'GET' && path === '/projects') {
      return [{ id: pid, revision: this.project.revision }];
    }
    if (method === 'GET' && path === `/projects/${pid}`) {
      return { schema_version: 'tae-1', project: this.project };
    }
    if (method === 'GET' && path === `/projects/${pid}/tools`) {
      return (descriptors as any[]).map((d) => ({
        name: d.name,
        description: d.description,
        parameters: d.parameter_schema,
      })) as ToolDescriptorDoc[];
    }
    if (method === 'GET' && path === `/projects/${pid}/script`) return this.scriptDoc();
    if (method === 'GET' && path.startsWith(`/projects/${pid}/events/log`)) {
      const since = Number(new URLSearchParams(path.split('?')[1] ?? '').get('since_seq') ?? 0);
      return { events: this.bus.filter((e) => e.seq > since), gap: false, seq: this.bus.length };
    }
    if (method === 'GET' && path.startsWith(`/projects/${pid}/frame`)) {
      const t = Number(new URLSearchParams(path.split('?')[1] ?? '').get('t') ?? 0);
      const states = Object.values(this.project.clips)
        .filter((c) => c.start <= t && t < c.start + c.duration)
        .map((c) => ({
          clip_id: c.id,
          opacity: 0.5,
          position_offset: [0, 0],
          scale: 1,
          rotation: 0,
          reveal_fraction: 1,
          effective_style: (c.payload as any).style,
        }));
      return { t, states };
    }
    if (method === 'GET' && path === `/projects/${pid}/suggestions`) {
      return [...this.suggestions.values()].filter((s) => s.status === 'pending');
    }
    if (method === 'GET' && path === `/projects/${pid}/instruction-suggestions`) {
      return this.instructionChips;
    }
    if (method === 'GET' && path === `/projects/${pid}/assets`) {
      return Object.values(this.project.assets);
    }

    if (method === 'POST' && path === `/projects/${pid}/tracks`) {
      const track = this.addTrack(body.kind, body.name || body.kind);
      this.commit();
      return track;
    }
    if (method === 'POST' && path === `/projects/${pid}/clips`) {
      for (const other of Object.values(this.project.clips)) {
        if (
          other.track_id === body.track_id &&
          other.start < body.start + body.duration &&
          body.start < other.start + other.duration
        ) {
          throw { status: 409, code: 'overlap', message: `overlaps ${other.id}` };
        }
      }
      if (body.payload.kind === 'text') {
        const clip = this.addTextClip(body.track_id, body.start, body.duration, body.payload.content);
        this.commit();
        return clip;
      }
      const clip: ClipDoc = {
        id: newId('clip'),
        track_id: body.track_id,
        start: body.start,
        duration: body.duration,
        payload:
          body.payload.kind === 'media'
            ? { kind: 'media', asset_ref: body.payload.asset_ref, trim_in: 0 }
            : { kind: 'element', element_kind: body.payload.element_kind, params: {} },
      };
      this.project.clips[clip.id] = clip;
      this.commit();
      return clip;
    }
    if ((match = path.match(/^\/projects\/[^/]+\/clips\/([^/]+)$/)) && method === 'PATCH') {
      const clip = this.project.clips[match[1]];
      if (!clip) throw { status: 404, code: 'unknown_clip', message: 'no clip' };
      const next = {
        start: body.start ?? clip.start,
        duration: body.duration ?? clip.duration,
      };
      for (const other of Object.values(this.project.clips)) {
        if (other.id === clip.id || other.track_id !== clip.track_id) continue;
        if (other.start < next.start + next.duration && next.start < other.start + other.duration) {
          throw { status: 409, code: 'overlap', message: `overlaps ${other.id}` };
        }
      }
      clip.start = next.start;
      clip.duration = next.duration;
      if (body.content !== undefined) (clip.payload as any).content = body.content;
      if (body.style) Object.assign((clip.payload as any).style ?? {}, body.style);
      this.commit();
      return clip;
    }
    if ((match = path.match(/^\/projects\/[^/]+\/clips\/([^/]+)\/animations$/)) && method === 'POST') {
      return this.execute(`create_${body.preset}`, { clip_id: match[1], ...body.params });
    }
    if ((match = path.match(/^\/projects\/[^/]+\/animations\/([^/]+)$/)) && method === 'PATCH') {
      const animation = this.project.animations[match[1]];
      if (!animation) throw { status: 404, code: 'unknown_animation', message: 'no animation' };
      Object.assign(animation.params, body.params ?? {});
      if (body.phase) animation.phase = body.phase;
      this.commit();
      return animation;
    }
    if ((match = path.match(/^\/projects\/[^/]+\/animations\/([^/]+)$/)) && method === 'DELETE') {
      delete this.project.animations[match[1]];
      this.commit();
      return undefined;
    }

    if ((match = path.match(/^\/projects\/[^/]+\/script\/lines\/([^/]+)\/text$/)) && method === 'PUT') {
      const clip = this.project.clips[match[1]];
      if (!clip) throw { status: 404, code: 'unknown_clip', message: 'no clip' };
      (clip.payload as any).content = body.text;
      this.commit();
      return this.scriptDoc();
    }
    if (method === 'POST' && path === `/projects/${pid}/script/lines`) {
      const tracks = Object.values(this.project.tracks).filter((t) => t.kind === 'text');
      const clips = Object.values(this.project.clips);
      const end = Math.max(0, ...clips.map((c) => c.start + c.duration));
      const clip = this.addTextClip(tracks[0].id, end, 2, body.text);
      this.commit();
      return { clip, strategy: 'sequential_same_track', script: this.scriptDoc() };
    }
    if (method === 'POST' && path === `/projects/${pid}/script/style-batch`) {
      const lines = this.scriptDoc().lines.slice(body.start_index, body.end_index + 1);
      if (!lines.length) throw { status: 422, code: 'empty_range', message: 'empty' };
      for (const line of lines) {
        Object.assign((this.project.clips[line.clip_id].payload as any).style, body.delta);
      }
      this.commit();
      return { updated: lines.length, script: this.scriptDoc() };
    }

    if (method === 'POST' && path === `/projects/${pid}/suggestions/refresh`) {
      return [...this.suggestions.values()].filter(
        (s) => s.status === 'pending' && s.target.clip_id === body.clip_id,
      );
    }
    if ((match = path.match(/^\/projects\/[^/]+\/suggestions\/([^/]+)\/accept$/)) && method === 'POST') {
      const suggestion = this.suggestions.get(match[1]);
      if (!suggestion) throw { status: 404, code: 'unknown_suggestion', message: 'gone' };
      if (body.revision !== this.project.revision) {
        throw { status: 409, code: 'stale_suggestion', message: 'project moved on' };
      }
      if (suggestion.kind === 'text_revision') {
        this.execute('update_text_clip', {
          id: suggestion.target.clip_id,
          content: suggestion.action.replacement,
        });
      } else {
        this.execute(`create_${suggestion.action.preset}`, {
          clip_id: suggestion.target.clip_id,
          ...suggestion.action.params,
        });
      }
      suggestion.status = 'accepted';
      this.publish('suggestion', { suggestion, project_revision: this.project.revision });
      return suggestion;
    }
    if ((match = path.match(/^\/projects\/[^/]+\/suggestions\/([^/]+)\/dismiss$/)) && method === 'POST') {
      const suggestion = this.suggestions.get(match[1]);
      if (!suggestion) throw { status: 404, code: 'unknown_suggestion', message: 'gone' };
      suggestion.status = 'dismissed';
      return suggestion;
    }

    if (method === 'POST' && path.startsWith(`/projects/${pid}/assets`)) {
      const form = rawBody as FormData;
      const file = form.get('file') as File;
      const kind = file.type.startsWith('video')
        ? 'video'
        : file.type.startsWith('audio')
          ? 'audio'
          : 'image';
      const asset: AssetDoc = {
        id: newId('asset'),
        kind,
        name: file.name,
        uri: `assets/${file.name}`,
        ...(kind === 'image' ? {} : { media_duration: 10 }),
      };
      this.project.assets[asset.id] = asset;
      this.commit();
      return asset;
    }

    if (method === 'POST' && path === `/projects/${pid}/chat/sessions`) {
      const session: SessionDoc = {
        id: newId('sess'),
        project_id: pid,
        auto_skip: Boolean(body?.auto_skip),
        state: 'idle',
        messages: [],
        steps: [],
        pending_prompt: null,
        notes: [],
        events: [],
        consecutive_failures: 0,
      };
      this.sessions.set(session.id, session);
      return session;
    }
    if ((match = path.match(/^\/chat\/sessions\/([^/]+)$/)) && method === 'GET') {
      const session = this.sessions.get(match[1]);
      if (!session) throw { status: 404, code: 'unknown_session', message: 'no session' };
      return session;
    }
    if ((match = path.match(/^\/chat\/sessions\/([^/]+)\/(messages|approve|reject|modify|prompt\/answer)$/))) {
      const session = this.sessions.get(match[1]);
      if (!session) throw { status: 404, code: 'unknown_session', message: 'no session' };
      const before = session.events.length;
      const action = match[2];
      if (action === 'messages') {
        if (session.state !== 'idle' && session.state !== 'done') {
          throw { status: 409, code: 'session_busy', message: 'busy' };
        }
        session.messages.push({ role: 'user', text: body.text });
        session.state = 'planning';
        this.runLoop(session);
      } else if (action === 'approve' || action === 'modify') {
        if (session.state !== 'awaiting_approval') {
          throw { status: 409, code: 'wrong_state', message: 'not awaiting approval' };
        }
        const step = session.steps[session.steps.length - 1];
        if (action === 'modify') {
          step.args = body.args;
          step.status = 'modified';
        } else {
          step.status = 'approved';
        }
        this.executeStep(session, step);
        this.runLoop(session);
      } else if (action === 'reject') {
        if (session.state !== 'awaiting_approval') {
          throw { status: 409, code: 'wrong_state', message: 'not awaiting approval' };
        }
        session.steps[session.steps.length - 1].status = 'rejected';
        session.state = 'planning';
        this.runLoop(session);
      } else {
        if (session.state !== 'awaiting_prompt_answer' || !session.pending_prompt) {
          throw { status: 409, code: 'wrong_state', message: 'no prompt' };
        }
        const prompt = session.pending_prompt;
        if (prompt.kind === 'selector') {
          const allowed = (prompt.payload.options as { id: string }[]).map((o) => o.id);
          if (!allowed.includes(body.answer.option_id)) {
            throw { status: 422, code: 'invalid_answer', message: 'not an option' };
          }
        }
        session.pending_prompt = null;
        session.state = 'planning';
        this.runLoop(session);
      }
      return this.chatTurn(session, before);
    }

    throw { status: 404, code: 'unknown_route', message: `${method} ${path}` };
  }
}

// Thin typed client over the documented HTTP surface. Every mutating UI
// action funnels through exactly one of these calls.

import type {
  AssetDoc,
  ChatTurn,
  ClipDoc,
  FrameDoc,
  ProjectEnvelope,
  ScriptDoc,
  SessionDoc,
  SuggestionDoc,
  ToolDescriptorDoc,
  TrackDoc,
  AnimationDoc,
  BusEvent,
  StyleDoc,
} from './types.js';

export class ApiFault extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = '',
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      if (body instanceof FormData) {
        init.body = body;
      } else {
        (init.headers as Record<string, string>)['Content-Type'] = 'application/json';
        init.body = JSON.stringify(body);
      }
    }
    const response = await this.fetchImpl(this.base + path, init);
    if (response.status === 204) return undefined as T;
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiFault(
        response.status,
        payload.code ?? 'internal',
        payload.message ?? response.statusText,
        payload.detail ?? {},
      );
    }
    return payload as T;
  }

  // projects
  createProject(seed?: number): Promise<ProjectEnvelope> {
    return this.request('POST', '/projects', seed === undefined ? {} : { seed });
  }
  getProject(pid: string): Promise<ProjectEnvelope> {
    return this.request('GET', `/projects/${pid}`);
  }
  listProjects(): Promise<{ id: string; revision: number }[]> {
    return this.request('GET', '/projects');
  }
  getTools(pid: string): Promise<ToolDescriptorDoc[]> {
    return this.request('GET', `/projects/${pid}/tools`);
  }

  // timeline
  createTrack(pid: string, kind: string, name = ''): Promise<TrackDoc> {
    return this.request('POST', `/projects/${pid}/tracks`, { kind, name });
  }
  createClip(
    pid: string,
    trackId: string,
    start: number,
    duration: number,
    payload: Record<string, unknown>,
  ): Promise<ClipDoc> {
    return this.request('POST', `/projects/${pid}/clips`, {
      track_id: trackId,
      start,
      duration,
      payload,
    });
  }
  updateClip(pid: string, clipId: string, changes: Record<string, unknown>): Promise<ClipDoc> {
    return this.request('PATCH', `/projects/${pid}/clips/${clipId}`, changes);
  }
  deleteClip(pid: string, clipId: string): Promise<void> {
    return this.request('DELETE', `/projects/${pid}/clips/${clipId}`);
  }
  attachAnimation(
    pid: string,
    clipId: string,
    preset: string,
    params: Record<string, unknown> = {},
    phase?: string,
  ): Promise<AnimationDoc> {
    return this.request('POST', `/projects/${pid}/clips/${clipId}/animations`, {
      preset,
      params,
      phase: phase ?? null,
    });
  }
  updateAnimation(
    pid: string,
    animId: string,
    params: Record<string, unknown>,
    phase?: string,
  ): Promise<AnimationDoc> {
    return this.request('PATCH', `/projects/${pid}/animations/${animId}`, {
      params,
      phase: phase ?? null,
    });
  }
  detachAnimation(pid: string, animId: string): Promise<void> {
    return this.request('DELETE', `/projects/${pid}/animations/${animId}`);
  }
  getFrame(pid: string, t: number): Promise<FrameDoc> {
    return this.request('GET', `/projects/${pid}/frame?t=${encodeURIComponent(t)}`);
  }

  // script
  getScript(pid: string): Promise<ScriptDoc> {
    return this.request('GET', `/projects/${pid}/script`);
  }
  setScriptTracks(pid: string, trackIds: string[]): Promise<ScriptDoc> {
    return this.request('PUT', `/projects/${pid}/script/tracks`, { track_ids: trackIds });
  }
  editLineText(pid: string, clipId: string, text: string): Promise<ScriptDoc> {
    return this.request('PUT', `/projects/${pid}/script/lines/${clipId}/text`, { text });
  }
  splitLine(pid: string, clipId: string, charOffset: number): Promise<unknown> {
    return this.request('POST', `/projects/${pid}/script/lines/${clipId}/split`, {
      char_offset: charOffset,
    });
  }
  mergeLines(pid: string, first: string, second: string): Promise<unknown> {
    return this.request('POST', `/projects/${pid}/script/merge`, { first, second });
  }
  addLine(
    pid: string,
    text: string,
    anchorClipId?: string,
    position: 'before' | 'after' | 'end' = 'end',
  ): Promise<{ clip: ClipDoc; strategy: string; script: ScriptDoc }> {
    return this.request('POST', `/projects/${pid}/script/lines`, {
      text,
      anchor_clip_id: anchorClipId ?? null,
      position,
    });
  }
  styleBatch(
    pid: string,
    startIndex: number,
    endIndex: number,
    delta: Partial<StyleDoc>,
  ): Promise<{ updated: number; script: ScriptDoc }> {
    return this.request('POST', `/projects/${pid}/script/style-batch`, {
      start_index: startIndex,
      end_index: endIndex,
      delta,
    });
  }

  // suggestions
  getSuggestions(pid: string): Promise<SuggestionDoc[]> {
    return this.request('GET', `/projects/${pid}/suggestions`);
  }
  refreshSuggestions(pid: string, clipId: string): Promise<SuggestionDoc[]> {
    return this.request('POST', `/projects/${pid}/suggestions/refresh`, { clip_id: clipId });
  }
  acceptSuggestion(pid: string, suggestionId: string, revision: number): Promise<SuggestionDoc> {
    return this.request('POST', `/projects/${pid}/suggestions/${suggestionId}/accept`, {
      revision,
    });
  }
  dismissSuggestion(pid: string, suggestionId: string): Promise<SuggestionDoc> {
    return this.request('POST', `/projects/${pid}/suggestions/${suggestionId}/dismiss`);
  }
  instructionSuggestions(pid: string): Promise<string[]> {
    return this.request('GET', `/projects/${pid}/instruction-suggestions`);
  }

  // assets
  listAssets(pid: string): Promise<AssetDoc[]> {
    return this.request('GET', `/projects/${pid}/assets`);
  }
  uploadAsset(pid: string, file: File, mediaDuration?: number): Promise<AssetDoc> {
    const form = new FormData();
    form.append('file', file);
    const query = mediaDuration === undefined ? '' : `?media_duration=${mediaDuration}`;
    return this.request('POST', `/projects/${pid}/assets${query}`, form);
  }

  // chat
  createSession(pid: string, autoSkip: boolean): Promise<SessionDoc> {
    return this.request('POST', `/projects/${pid}/chat/sessions`, { auto_skip: autoSkip });
  }
  getSession(sessionId: string): Promise<SessionDoc> {
    return this.request('GET', `/chat/sessions/${sessionId}`);
  }
  sendMessage(sessionId: string, text: string): Promise<ChatTurn> {
    return this.request('POST', `/chat/sessions/${sessionId}/messages`, { text });
  }
  approveStep(sessionId: string): Promise<ChatTurn> {
    return this.request('POST', `/chat/sessions/${sessionId}/approve`);
  }
  modifyStep(sessionId: string, args: Record<string, unknown>): Promise<ChatTurn> {
    return this.request('POST', `/chat/sessions/${sessionId}/modify`, { args });
  }
  rejectStep(sessionId: string): Promise<ChatTurn> {
    return this.request('POST', `/chat/sessions/${sessionId}/reject`);
  }
  answerPrompt(sessionId: string, answer: Record<string, unknown>): Promise<ChatTurn> {
    return this.request('POST', `/chat/sessions/${sessionId}/prompt/answer`, { answer });
  }

  // events (polling variant; the SSE stream is consumed via EventSource)
  eventsSince(pid: string, sinceSeq: number): Promise<{ events: BusEvent[]; gap: boolean; seq: number }> {
    return this.request('GET', `/projects/${pid}/events/log?since_seq=${sinceSeq}`);
  }
}

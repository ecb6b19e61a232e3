// Wire types for the editing service API (schema "tae-1").

export interface StyleDoc {
  font_family: string;
  font_size: number;
  color: [number, number, number, number];
  position: [number, number];
  alignment: 'left' | 'center' | 'right';
}

export interface TextPayloadDoc {
  kind: 'text';
  content: string;
  style: StyleDoc;
}

export interface MediaPayloadDoc {
  kind: 'media';
  asset_ref: string;
  trim_in: number;
}

export interface ElementPayloadDoc {
  kind: 'element';
  element_kind: string;
  params: Record<string, unknown>;
}

export type PayloadDoc = TextPayloadDoc | MediaPayloadDoc | ElementPayloadDoc;

export interface ClipDoc {
  id: string;
  track_id: string;
  start: number;
  duration: number;
  payload: PayloadDoc;
}

export interface TrackDoc {
  id: string;
  kind: 'text' | 'video' | 'image' | 'audio' | 'element';
  name: string;
  order_index: number;
  script_visible: boolean;
}

export interface AssetDoc {
  id: string;
  kind: 'image' | 'audio' | 'video';
  name: string;
  uri: string;
  media_duration?: number;
}

export interface AnimationDoc {
  id: string;
  clip_id: string;
  preset: string;
  params: Record<string, unknown>;
  phase: 'enter' | 'emphasis' | 'exit';
}

export interface ProjectDoc {
  id: string;
  canvas: { width_px: number; height_px: number };
  fps: number;
  assets: Record<string, AssetDoc>;
  tracks: Record<string, TrackDoc>;
  clips: Record<string, ClipDoc>;
  animations: Record<string, AnimationDoc>;
  revision: number;
  operation_log: unknown[];
}

export interface ProjectEnvelope {
  schema_version: string;
  project: ProjectDoc;
}

export interface ScriptLineDoc {
  clip_id: string;
  text: string;
  style: StyleDoc;
  markers: string[];
}

export interface ScriptDoc {
  revision: number;
  selected_tracks: string[];
  lines: ScriptLineDoc[];
}

export interface SuggestionDoc {
  id: string;
  kind: 'text_revision' | 'animation_recommendation';
  target: { clip_id: string; char_range?: [number, number] };
  action: Record<string, any>;
  reason: string;
  status: 'pending' | 'accepted' | 'dismissed';
}

export interface RenderStateDoc {
  clip_id: string;
  opacity: number;
  position_offset: [number, number];
  scale: number;
  rotation: number;
  reveal_fraction: number;
  effective_style?: StyleDoc;
}

export interface FrameDoc {
  t: number;
  states: RenderStateDoc[];
}

export interface PlanStepDoc {
  id: string;
  tool: string;
  args: Record<string, unknown>;
  rationale: string;
  kind: 'edit' | 'query';
  status: 'proposed' | 'approved' | 'modified' | 'rejected' | 'executed' | 'failed';
  result: unknown;
  error: string | null;
}

export interface UIPromptDoc {
  id: string;
  kind: 'selector' | 'parameter_form' | 'upload_button';
  question: string;
  payload: any;
  bound_step: string | null;
}

export interface ChatEventDoc {
  type:
    | 'plan_proposed'
    | 'awaiting_approval'
    | 'prompt'
    | 'step_result'
    | 'assistant_text'
    | 'completed'
    | 'failed';
  payload: any;
  seq: number;
}

export interface SessionDoc {
  id: string;
  project_id: string;
  auto_skip: boolean;
  state: string;
  messages: { role: string; text: string }[];
  steps: PlanStepDoc[];
  pending_prompt: UIPromptDoc | null;
  notes: string[];
  events: ChatEventDoc[];
  consecutive_failures: number;
}

export interface ChatTurn {
  session: SessionDoc;
  events: ChatEventDoc[];
}

export interface ToolDescriptorDoc {
  name: string;
  description: string;
  parameters: {
    type: 'object';
    properties: Record<string, ParamSchema>;
    required?: string[];
  };
}

export interface ParamSchema {
  type: string;
  minimum?: number;
  maximum?: number;
  enum?: string[];
  minItems?: number;
  maxItems?: number;
  items?: ParamSchema;
  description?: string;
  unit?: string;
}

export interface BusEvent {
  seq: number;
  type: 'revision' | 'suggestion' | 'chat' | 'gap';
  payload: any;
}

export interface ApiError {
  code: string;
  message: string;
  detail: Record<string, unknown>;
}

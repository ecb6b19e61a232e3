// Inline "@{kind:id}" reference tokens, produced by typing or drag-and-drop.

export const REFERENCE_MIME = 'application/x-tae-ref';

const TOKEN_RE = /@\{(proj|asset|track|clip|anim|sugg|sess|step|prompt):([^{}\s]+)\}/g;

export function makeToken(kind: string, id: string): string {
  return `@{${kind}:${id}}`;
}

export interface ParsedToken {
  raw: string;
  kind: string;
  id: string;
}

export function parseTokens(text: string): ParsedToken[] {
  const tokens: ParsedToken[] = [];
  for (const match of text.matchAll(TOKEN_RE)) {
    tokens.push({ raw: match[0], kind: match[1], id: match[2] });
  }
  return tokens;
}

export function dragPayload(kind: string, id: string): string {
  return JSON.stringify({ kind, id });
}

export function readDragPayload(data: string): { kind: string; id: string } | null {
  try {
    const parsed = JSON.parse(data);
    if (typeof parsed.kind === 'string' && typeof parsed.id === 'string') return parsed;
  } catch {
    // not ours
  }
  return null;
}

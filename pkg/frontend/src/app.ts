// Bootstrap: wire the store, the event channel, and the six panels.

import { ApiClient } from './api.js';
import { el } from './dom.js';
import { EventChannel } from './events.js';
import { ChatPanel } from './panels/chat.js';
import { InspectorPanel } from './panels/inspector.js';
import { PreviewPanel } from './panels/preview.js';
import { ResourcePanel } from './panels/resource.js';
import { ScriptPanel } from './panels/script.js';
import { TimelinePanel } from './panels/timeline.js';
import { EditorStore } from './store.js';

export interface App {
  store: EditorStore;
  channel: EventChannel;
  panels: {
    script: ScriptPanel;
    timeline: TimelinePanel;
    chat: ChatPanel;
    inspector: InspectorPanel;
    preview: PreviewPanel;
    resource: ResourcePanel;
  };
  root: HTMLElement;
}

export function buildApp(api: ApiClient, base = ''): App {
  const store = new EditorStore(api);
  const channel = new EventChannel(store, base);
  const panels = {
    script: new ScriptPanel(store),
    timeline: new TimelinePanel(store),
    chat: new ChatPanel(store),
    inspector: new InspectorPanel(store),
    preview: new PreviewPanel(store),
    resource: new ResourcePanel(store),
  };
  const toast = el('div', { class: 'toast', role: 'status' });
  store.subscribe((state) => {
    toast.textContent = state.toast ?? '';
    toast.classList.toggle('visible', state.toast !== null);
  });
  const root = el('main', { class: 'editor-grid' }, [
    panels.resource.root,
    panels.script.root,
    panels.preview.root,
    panels.timeline.root,
    panels.inspector.root,
    panels.chat.root,
    toast,
  ]);
  return { store, channel, panels, root };
}

export async function start(base = ''): Promise<App> {
  const api = new ApiClient(base);
  const app = buildApp(api, base);
  document.body.append(app.root);

  const projects = await api.listProjects();
  const projectId = projects.length
    ? projects[0].id
    : (await api.createProject()).project.id;
  await app.store.openProject(projectId);
  app.channel.start();
  await app.panels.chat.loadChips();
  await app.panels.preview.seek(0);
  return app;
}

declare global {
  interface Window {
    taeApp?: Promise<App>;
  }
}

if (typeof document !== 'undefined' && document.getElementById('tae-root') !== null) {
  window.taeApp = start();
}

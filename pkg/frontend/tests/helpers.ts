import { ApiClient } from '../src/api.js';
import { buildApp, type App } from '../src/app.js';
import { FakeServer } from './fakeServer.js';

export interface Stage {
  server: FakeServer;
  app: App;
}

export async function mount(prepare?: (server: FakeServer) => void): Promise<Stage> {
  const server = new FakeServer();
  prepare?.(server);
  const api = new ApiClient('', server.fetch);
  const app = buildApp(api);
  document.body.innerHTML = '';
  document.body.append(app.root);
  await app.store.openProject(server.project.id);
  return { server, app };
}

export function click(node: Element | null): void {
  if (!node) throw new Error('click target missing');
  (node as HTMLElement).dispatchEvent(new MouseEvent('click', { bubbles: true }));
}

export async function settle(): Promise<void> {
  // let queued promises (store refetches) finish
  for (let i = 0; i < 8; i += 1) {
    await Promise.resolve();
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function fakeDataTransfer(): DataTransfer {
  const data = new Map<string, string>();
  return {
    setData: (type: string, value: string) => void data.set(type, value),
    getData: (type: string) => data.get(type) ?? '',
    dropEffect: 'copy',
    effectAllowed: 'all',
    files: [] as unknown as FileList,
    items: [] as unknown as DataTransferItemList,
    types: [...data.keys()],
    clearData: () => void data.clear(),
    setDragImage: () => undefined,
  } as unknown as DataTransfer;
}

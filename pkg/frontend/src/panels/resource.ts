// Resource panel: asset list with an upload button; every item is a drag
// source for the timeline (creates a media clip) and the chat input
// (creates a reference token).

import { clear, el } from '../dom.js';
import { REFERENCE_MIME, dragPayload } from '../reference.js';
import { EditorStore } from '../store.js';

export class ResourcePanel {
  root: HTMLElement;

  constructor(private store: EditorStore) {
    this.root = el('section', { class: 'panel resource-panel' });
    store.subscribe(() => this.render());
  }

  render(): void {
    clear(this.root);
    this.root.append(el('h2', {}, ['Resources']));
    const fileInput = el('input', {
      class: 'upload-input',
      type: 'file',
    }) as HTMLInputElement;
    fileInput.addEventListener('change', () => {
      const pid = this.store.state.projectId;
      const file = fileInput.files?.[0];
      if (!pid || !file) return;
      void this.store.api.uploadAsset(pid, file).then(() => this.store.resync());
    });
    this.root.append(
      el('label', { class: 'upload-button' }, ['Upload', fileInput]),
    );
    const project = this.store.state.project;
    if (!project) return;
    const list = el('ul', { class: 'asset-list' });
    const assets = Object.values(project.assets).sort((a, b) => (a.id < b.id ? -1 : 1));
    for (const asset of assets) {
      const item = el(
        'li',
        {
          class: `asset asset-${asset.kind}`,
          'data-asset': asset.id,
          draggable: 'true',
          onclick: () => this.store.select('asset', asset.id),
        },
        [`${asset.name} (${asset.kind})`],
      );
      item.addEventListener('dragstart', (event) => {
        const dt = (event as DragEvent).dataTransfer;
        if (dt) {
          dt.setData(REFERENCE_MIME, dragPayload('asset', asset.id));
          dt.setData('text/plain', asset.id);
        }
      });
      list.append(item);
    }
    this.root.append(list);
  }
}

import { describe, expect, it } from 'vitest';

import { click, mount, settle } from './helpers.js';

describe('script panel', () => {
  it('accepting a red-dot recommendation attaches the proposed animation, visible in the timeline', async () => {
    let clipId = '';
    const { server, app } = await mount((s) => {
      const track = s.addTrack();
      clipId = s.addTextClip(track.id, 0, 2, 'HURRY, last chance!').id;
      s.addSuggestion({
        kind: 'animation_recommendation',
        target: { clip_id: clipId },
        action: { preset: 'bounce', params: { speed: 2.0 }, phase: null },
        reason: "Tone 'urgent' maps to bounce",
      });
    });
    await settle();

    const dot = app.panels.script.root.querySelector('.red-dot')!;
    expect(dot).not.toBeNull();
    const menu = dot.querySelector('.suggestion-menu')!;
    expect(menu.querySelector('.suggestion-reason')!.textContent).toContain('urgent');

    click(menu.querySelector('button.accept'));
    await settle();

    // exactly the proposed animation is attached...
    const animations = Object.values(server.project.animations);
    expect(animations).toHaveLength(1);
    expect(animations[0].preset).toBe('bounce');
    expect(animations[0].params.speed).toBe(2.0);
    expect(animations[0].clip_id).toBe(clipId);
    // ...and the timeline shows it
    const badge = app.panels.timeline.root.querySelector(
      `[data-clip="${clipId}"] .anim-badge`,
    );
    expect(badge).not.toBeNull();
    expect(badge!.textContent).toBe('bounce');
    // marker cleared after the next sync
    expect(app.panels.script.root.querySelector('.red-dot')).toBeNull();
  });

  it('accepting a text revision replaces the line; dismissing leaves it alone', async () => {
    let clipId = '';
    const { server, app } = await mount((s) => {
      const track = s.addTrack();
      clipId = s.addTextClip(track.id, 0, 2, 'teh opener').id;
      s.addSuggestion({
        kind: 'text_revision',
        target: { clip_id: clipId, char_range: [0, 3] },
        action: { replacement: 'the opener' },
        reason: 'typo',
      });
      s.addSuggestion({
        kind: 'text_revision',
        target: { clip_id: clipId, char_range: [4, 10] },
        action: { replacement: 'teh intro' },
        reason: 'synonym',
      });
    });
    await settle();

    const underlines = app.panels.script.root.querySelectorAll('.revision-underline');
    expect(underlines).toHaveLength(2);
    const input = app.panels.script.root.querySelector(
      `input[data-clip="${clipId}"]`,
    ) as HTMLInputElement;
    expect(input.classList.contains('has-revision')).toBe(true);

    // dismiss the second, accept the first
    click(underlines[1].querySelector('button.dismiss'));
    await settle();
    expect((server.project.clips[clipId].payload as any).content).toBe('teh opener');

    const remaining = app.panels.script.root.querySelector('.revision-underline')!;
    click(remaining.querySelector('button.accept'));
    await settle();
    expect((server.project.clips[clipId].payload as any).content).toBe('the opener');
    const refreshed = app.panels.script.root.querySelector(
      `input[data-clip="${clipId}"]`,
    ) as HTMLInputElement;
    expect(refreshed.value).toBe('the opener');
  });

  it('style toolbar batch edit issues one style-batch call over the selection', async () => {
    const { server, app } = await mount((s) => {
      const track = s.addTrack();
      s.addTextClip(track.id, 0, 1, 'one');
      s.addTextClip(track.id, 2, 1, 'two');
      s.addTextClip(track.id, 4, 1, 'three');
    });
    await settle();

    const inputs = app.panels.script.root.querySelectorAll('input.line-text');
    (inputs[0] as HTMLInputElement).dispatchEvent(new FocusEvent('focus'));
    app.panels.script.extendRangeTo(2);

    const size = app.panels.script.root.querySelector('.style-size') as HTMLInputElement;
    size.value = '72';
    const before = server.calls.filter((c) => c.path.endsWith('/style-batch')).length;
    click(app.panels.script.root.querySelector('button.apply-size'));
    await settle();

    const batchCalls = server.calls.filter((c) => c.path.endsWith('/style-batch'));
    expect(batchCalls.length).toBe(before + 1); // one call for the whole range
    for (const clip of Object.values(server.project.clips)) {
      expect((clip.payload as any).style.font_size).toBe(72);
    }
  });

  it('line edits commit through the text endpoint and re-project', async () => {
    let clipId = '';
    const { server, app } = await mount((s) => {
      const track = s.addTrack();
      clipId = s.addTextClip(track.id, 0, 2, 'before').id;
    });
    await settle();
    const input = app.panels.script.root.querySelector(
      `input[data-clip="${clipId}"]`,
    ) as HTMLInputElement;
    input.value = 'after';
    input.dispatchEvent(new Event('change'));
    await settle();
    expect((server.project.clips[clipId].payload as any).content).toBe('after');
    const calls = server.calls.filter((c) =>
      c.path.endsWith(`/script/lines/${clipId}/text`),
    );
    expect(calls).toHaveLength(1);
  });
});

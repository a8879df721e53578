/**
 * Ranked table plus transient what-if exploration.
 *
 * Sliders send deltas to /api/whatif and the table re-renders from the
 * response; nothing touches the stored profile unless the evaluator
 * explicitly saves the slider values. Reset re-renders the baseline
 * ranking exactly as the service first sent it.
 */

import {
  ApiClient,
  Catalog,
  Profile,
  RankingEntry,
  ServiceError,
  WhatIfDelta,
  WhatIfReport,
} from './api.js';
import { SessionStore } from './state.js';
import { clear, el, hide, show } from './dom.js';

export interface DashboardDeps {
  api: ApiClient;
  store: SessionStore;
  catalog: Catalog;
}

export class RankingDashboard {
  /** Last in-flight load or what-if call; tests await this. */
  settled: Promise<void> = Promise.resolve();

  private baseline: RankingEntry[] = [];
  private profile!: Profile;
  private tableBody!: HTMLTableSectionElement;
  private errorLine!: HTMLParagraphElement;
  private sliders = new Map<string, HTMLInputElement>();

  constructor(
    private readonly container: HTMLElement,
    private readonly deps: DashboardDeps,
  ) {}

  mount(profile: Profile): void {
    this.profile = profile;
    this.render();
    this.settled = this.load();
  }

  private render(): void {
    clear(this.container);
    this.sliders.clear();

    this.errorLine = el('p', { class: 'dash-error' });
    this.errorLine.hidden = true;
    this.tableBody = el('tbody');

    const controls = el('div', { class: 'whatif-controls' });
    controls.append(el('h4', { text: 'What-if importance' }));
    for (const category of this.deps.catalog.categories) {
      const slider = el('input', {
        type: 'range',
        min: '0',
        max: '5',
        step: '1',
        'data-slider-for': category.id,
      });
      slider.value = String(this.profile.category_importance[category.id] ?? 0);
      slider.addEventListener('input', () => {
        this.moveSlider(category.id, Number(slider.value));
      });
      this.sliders.set(category.id, slider);
      controls.append(el('label', { class: 'whatif-slider' }, [
        el('span', { text: `${category.id} ${category.name}` }),
        slider,
      ]));
    }

    const resetButton = el('button', { class: 'whatif-reset', text: 'Reset' });
    resetButton.addEventListener('click', () => this.reset());
    const applyButton = el('button', {
      class: 'whatif-apply',
      text: 'Save these importances to the profile',
    });
    applyButton.addEventListener('click', () => {
      this.settled = this.applyToProfile();
    });
    controls.append(
      resetButton,
      applyButton,
      el('p', {
        class: 'whatif-note',
        text: 'Sliders explore transient deltas; nothing persists unless '
          + 'you save them to the profile.',
      }),
    );

    this.container.append(
      this.errorLine,
      el('table', { class: 'ranking-table' }, [
        el('thead', {}, [el('tr', {}, [
          el('th', { text: 'Rank' }),
          el('th', { text: 'Article' }),
          el('th', { text: 'Rating' }),
        ])]),
        this.tableBody,
      ]),
      controls,
    );
  }

  private async load(): Promise<void> {
    try {
      const ranking = await this.deps.api.getRankings(this.profile.profile_id);
      this.baseline = ranking.ranking;
      this.deps.store.update({ lastRanking: ranking, pendingDeltas: {} });
      this.renderBaseline();
      hide(this.errorLine);
    } catch (error) {
      show(this.errorLine, error instanceof ServiceError
        ? error.message : String(error));
    }
  }

  private renderBaseline(): void {
    clear(this.tableBody);
    for (const entry of this.baseline) {
      this.tableBody.append(el('tr', { 'data-article': entry.article_id }, [
        el('td', { text: String(entry.rank) }),
        el('td', { text: entry.article_id }),
        el('td', { text: entry.display['article_rating'] ?? '' }),
      ]));
    }
  }

  private renderPerturbed(report: WhatIfReport): void {
    const flagged = new Set<string>();
    for (const pair of report.rank_reversals) {
      for (const articleId of pair) {
        flagged.add(articleId);
      }
    }
    clear(this.tableBody);
    for (const entry of report.perturbed) {
      const row = el('tr', { 'data-article': entry.article_id }, [
        el('td', { text: String(entry.rank) }),
        el('td', { text: entry.article_id }),
        el('td', { text: entry.display['article_rating'] ?? '' }),
      ]);
      if (flagged.has(entry.article_id)) {
        row.classList.add('reversal');
      }
      this.tableBody.append(row);
    }
  }

  private moveSlider(categoryId: string, value: number): void {
    const deltas = { ...this.deps.store.get().pendingDeltas };
    if (value === (this.profile.category_importance[categoryId] ?? 0)) {
      delete deltas[categoryId];
    } else {
      deltas[categoryId] = value;
    }
    this.deps.store.update({ pendingDeltas: deltas });
    this.settled = this.applyDeltas();
  }

  private async applyDeltas(): Promise<void> {
    const pending = this.deps.store.get().pendingDeltas;
    const deltas: WhatIfDelta[] = Object.entries(pending).map(
      ([target, newImportance]) => ({ target, new_importance: newImportance }));
    if (deltas.length === 0) {
      this.renderBaseline();
      hide(this.errorLine);
      return;
    }
    try {
      const report = await this.deps.api.whatIf({
        profile_id: this.profile.profile_id,
        revision: this.profile.revision,
        deltas,
      });
      this.renderPerturbed(report);
      hide(this.errorLine);
    } catch (error) {
      show(this.errorLine, error instanceof ServiceError
        ? error.message : String(error));
    }
  }

  reset(): void {
    for (const [categoryId, slider] of this.sliders) {
      slider.value = String(this.profile.category_importance[categoryId] ?? 0);
    }
    this.deps.store.update({ pendingDeltas: {} });
    this.renderBaseline();
    hide(this.errorLine);
  }

  private async applyToProfile(): Promise<void> {
    const category: Record<string, number> = {};
    for (const [categoryId, slider] of this.sliders) {
      category[categoryId] = Number(slider.value);
    }
    try {
      const updated = await this.deps.api.patchImportance(
        this.profile.profile_id,
        { revision: this.profile.revision, category });
      this.profile = updated;
      this.deps.store.update({ profile: updated, pendingDeltas: {} });
      await this.load();
    } catch (error) {
      show(this.errorLine, error instanceof ServiceError
        ? error.message : String(error));
    }
  }
}

/**
 * Importance editor for one profile.
 *
 * Every selector edit re-posts the staged importances to /api/weights and
 * writes the returned display strings into the weight column, so the
 * numbers on screen are always the service's own normalization. Save
 * commits the staged values as one new profile revision.
 */

import { ApiClient, Catalog, Labels, Profile, ServiceError } from './api.js';
import { SessionStore } from './state.js';
import { clear, el, hide, show } from './dom.js';

export interface EditorDeps {
  api: ApiClient;
  store: SessionStore;
  catalog: Catalog;
  labels: Labels;
}

export class ProfileEditor {
  /** Last in-flight refresh or save; tests await this. */
  settled: Promise<void> = Promise.resolve();

  private staged: {
    category: Record<string, number>;
    criterion: Record<string, number>;
  } = { category: {}, criterion: {} };

  private weightCells = new Map<string, HTMLTableCellElement>();
  private errorLine!: HTMLParagraphElement;
  private saveButton!: HTMLButtonElement;
  private statusNote!: HTMLSpanElement;
  private profile!: Profile;

  constructor(
    private readonly container: HTMLElement,
    private readonly deps: EditorDeps,
  ) {}

  mount(profile: Profile): void {
    this.profile = profile;
    this.staged = {
      category: { ...profile.category_importance },
      criterion: { ...profile.criterion_importance },
    };
    this.render();
    this.settled = this.refreshWeights();
  }

  private render(): void {
    clear(this.container);
    this.weightCells.clear();

    this.errorLine = el('p', { class: 'editor-error', text: '' });
    this.errorLine.hidden = true;

    const body = el('tbody');
    for (const category of this.deps.catalog.categories) {
      body.append(this.importanceRow(
        category.id, `${category.id} ${category.name}`, 'category-row'));
      for (const criterion of category.criteria) {
        body.append(this.importanceRow(
          criterion.id, `${criterion.id} ${criterion.text}`, 'criterion-row'));
      }
    }

    const table = el('table', { class: 'importance-table' }, [
      el('thead', {}, [el('tr', {}, [
        el('th', { text: 'Category / criterion' }),
        el('th', { text: 'Importance' }),
        el('th', { text: 'Weight' }),
      ])]),
      body,
    ]);

    this.saveButton = el('button', { class: 'save-profile', text: 'Save' });
    this.saveButton.addEventListener('click', () => {
      this.settled = this.save();
    });
    this.statusNote = el('span', {
      class: 'editor-status',
      text: `r${this.profile.revision}`,
    });

    this.container.append(
      this.errorLine,
      table,
      el('div', { class: 'editor-actions' }, [this.saveButton, this.statusNote]),
    );
  }

  private importanceRow(id: string, label: string, rowClass: string): HTMLTableRowElement {
    const select = el('select', { 'data-importance-for': id });
    for (let value = 0; value <= 5; value += 1) {
      const name = this.deps.labels.importance[String(value)] ?? '';
      select.append(el('option', { value: String(value), text: `${value} ${name}` }));
    }
    const current = id.includes('.')
      ? this.staged.criterion[id]
      : this.staged.category[id];
    select.value = String(current ?? 0);
    select.addEventListener('change', () => {
      this.setImportance(id, Number(select.value));
    });

    const weightCell = el('td', { class: 'weight', 'data-weight-for': id });
    this.weightCells.set(id, weightCell);

    return el('tr', { class: rowClass }, [
      el('td', { text: label }),
      el('td', {}, [select]),
      weightCell,
    ]);
  }

  private setImportance(id: string, value: number): void {
    if (id.includes('.')) {
      this.staged.criterion[id] = value;
    } else {
      this.staged.category[id] = value;
    }
    this.deps.store.update({ profileDirty: true });
    this.statusNote.textContent = `unsaved edits on r${this.profile.revision}`;
    this.settled = this.refreshWeights();
  }

  private async refreshWeights(): Promise<void> {
    try {
      const preview = await this.deps.api.previewWeights(
        this.staged.category, this.staged.criterion);
      for (const [id, cell] of this.weightCells) {
        const text = id.includes('.')
          ? preview.display.criterion[id]
          : preview.display.category[id];
        cell.textContent = text ?? '';
      }
      hide(this.errorLine);
      this.saveButton.disabled = false;
    } catch (error) {
      if (error instanceof ServiceError) {
        show(this.errorLine, error.message);
        if (error.code === 'all_zero_importance') {
          this.saveButton.disabled = true;
          for (const cell of this.weightCells.values()) {
            cell.textContent = '';
          }
        }
      } else {
        show(this.errorLine, String(error));
      }
    }
  }

  private async save(): Promise<void> {
    try {
      const updated = await this.deps.api.patchImportance(this.profile.profile_id, {
        revision: this.profile.revision,
        category: this.staged.category,
        criterion: this.staged.criterion,
      });
      this.profile = updated;
      this.deps.store.update({ profile: updated, profileDirty: false });
      this.statusNote.textContent = `saved at r${updated.revision}`;
      hide(this.errorLine);
    } catch (error) {
      if (error instanceof ServiceError && error.status === 409) {
        show(this.errorLine, 'profile changed elsewhere; reload before saving');
      } else if (error instanceof ServiceError) {
        show(this.errorLine, error.message);
      } else {
        show(this.errorLine, String(error));
      }
    }
  }
}

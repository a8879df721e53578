/**
 * Guided scoring flow: one step per effective criterion.
 *
 * Each answer is committed to the service right away, and the live panel
 * re-reads /api/assessments/{id}/rating?partial=true afterwards, so the
 * category scores on screen are the service's recomputation, never a
 * local one. The final answer completes the assessment and the same
 * rating payload provides the provisional article rating.
 */

import {
  ApiClient,
  Assessment,
  Catalog,
  Labels,
  Profile,
  Rating,
  ScoreValue,
  ServiceError,
} from './api.js';
import { SessionStore } from './state.js';
import { clear, el, hide, show } from './dom.js';

export interface WizardDeps {
  api: ApiClient;
  store: SessionStore;
  catalog: Catalog;
  labels: Labels;
}

interface WizardStep {
  categoryId: string;
  categoryName: string;
  criterionId: string;
  criterionText: string;
}

const NA_NOTE = 'NA removes this criterion from its category; the remaining '
  + 'criterion weights are renormalized so the category still sums to 100%.';

export class ScoringWizard {
  /** Last in-flight commit; tests await this. */
  settled: Promise<void> = Promise.resolve();

  private steps: WizardStep[] = [];
  private index = 0;
  private profile!: Profile;
  private errorLine!: HTMLParagraphElement;
  private stepBox!: HTMLDivElement;
  private livePanel!: HTMLUListElement;

  constructor(
    private readonly container: HTMLElement,
    private readonly deps: WizardDeps,
  ) {}

  mount(profile: Profile, assessment: Assessment): void {
    this.profile = profile;
    this.deps.store.update({ assessment });
    this.steps = this.effectiveSteps();
    this.index = 0;
    this.render();
  }

  /** Criteria with positive importance inside categories with positive importance. */
  private effectiveSteps(): WizardStep[] {
    const steps: WizardStep[] = [];
    for (const category of this.deps.catalog.categories) {
      if (!(this.profile.category_importance[category.id] > 0)) {
        continue;
      }
      for (const criterion of category.criteria) {
        if (!(this.profile.criterion_importance[criterion.id] > 0)) {
          continue;
        }
        steps.push({
          categoryId: category.id,
          categoryName: category.name,
          criterionId: criterion.id,
          criterionText: criterion.text,
        });
      }
    }
    return steps;
  }

  private render(): void {
    clear(this.container);

    this.errorLine = el('p', { class: 'wizard-error' });
    this.errorLine.hidden = true;
    this.stepBox = el('div', { class: 'wizard-step' });
    this.livePanel = el('ul', { class: 'live-scores' });

    this.container.append(
      this.errorLine,
      this.stepBox,
      el('aside', { class: 'live-panel' }, [
        el('h4', { text: 'Live category scores' }),
        this.livePanel,
      ]),
    );

    this.renderLivePanel(null);
    this.renderStep();
  }

  private renderStep(): void {
    clear(this.stepBox);
    const step = this.steps[this.index];
    if (!step) {
      this.stepBox.append(el('p', { text: 'No effective criteria to score.' }));
      return;
    }

    const previous = this.deps.store.get().assessment?.scores[step.criterionId];
    const choices = el('div', { class: 'wizard-choices' });
    for (let value = 1; value <= 5; value += 1) {
      choices.append(this.choice(String(value),
        `${value} ${this.deps.labels.score[String(value)] ?? ''}`,
        previous === value));
    }
    choices.append(this.choice('NA', 'NA (not applicable)', previous === 'NA'));

    const nextButton = el('button', {
      class: 'wizard-next',
      text: this.index === this.steps.length - 1 ? 'Finish' : 'Next',
    });
    nextButton.addEventListener('click', () => {
      const picked = this.stepBox.querySelector<HTMLInputElement>(
        'input[name="score"]:checked');
      if (!picked) {
        show(this.errorLine, 'choose a score first');
        return;
      }
      const value: ScoreValue = picked.value === 'NA' ? 'NA' : Number(picked.value);
      this.settled = this.commitStep(value);
    });

    const backButton = el('button', { class: 'wizard-back', text: 'Back' });
    backButton.disabled = this.index === 0;
    backButton.addEventListener('click', () => {
      if (this.index > 0) {
        this.index -= 1;
        this.renderStep();
      }
    });

    this.stepBox.append(
      el('p', {
        class: 'wizard-progress',
        text: `criterion ${this.index + 1} of ${this.steps.length}`,
      }),
      el('h3', { class: 'wizard-category', text: `${step.categoryId} ${step.categoryName}` }),
      el('p', { class: 'wizard-criterion', text: `${step.criterionId} ${step.criterionText}` }),
      choices,
      el('p', { class: 'na-note', text: NA_NOTE }),
      el('div', { class: 'wizard-nav' }, [backButton, nextButton]),
    );
  }

  private choice(value: string, label: string, checked: boolean): HTMLLabelElement {
    const input = el('input', { type: 'radio', name: 'score', value });
    input.checked = checked;
    return el('label', { class: 'wizard-choice' }, [input, label]);
  }

  private async commitStep(value: ScoreValue): Promise<void> {
    const step = this.steps[this.index];
    const assessment = this.deps.store.get().assessment;
    if (!step || !assessment) {
      return;
    }
    try {
      const updated = await this.deps.api.patchScores(
        assessment.assessment_id, assessment.revision,
        { [step.criterionId]: value });
      this.deps.store.update({ assessment: updated });
      const rating = await this.deps.api.getRating(updated.assessment_id, true);
      this.renderLivePanel(rating);
      hide(this.errorLine);
      if (this.index === this.steps.length - 1) {
        this.renderCompletion(rating);
      } else {
        this.index += 1;
        this.renderStep();
      }
    } catch (error) {
      if (error instanceof ServiceError) {
        show(this.errorLine, error.message);
      } else {
        show(this.errorLine, String(error));
      }
    }
  }

  private renderLivePanel(rating: Rating | null): void {
    clear(this.livePanel);
    const seen = new Set<string>();
    for (const step of this.steps) {
      if (seen.has(step.categoryId)) {
        continue;
      }
      seen.add(step.categoryId);
      const text = rating?.display[step.categoryId] ?? 'pending';
      this.livePanel.append(el('li', {
        'data-live-for': step.categoryId,
        text: `${step.categoryId} ${step.categoryName}: ${text}`,
      }));
    }
  }

  private renderCompletion(rating: Rating): void {
    clear(this.stepBox);
    const scores = el('ul', { class: 'final-scores' });
    const seen = new Set<string>();
    for (const step of this.steps) {
      if (seen.has(step.categoryId)) {
        continue;
      }
      seen.add(step.categoryId);
      scores.append(el('li', {
        'data-final-for': step.categoryId,
        text: `${step.categoryId} ${step.categoryName}: `
          + `${rating.display[step.categoryId] ?? 'not scored'}`,
      }));
    }
    this.stepBox.append(
      el('h3', { text: 'Assessment complete' }),
      scores,
      el('p', {
        class: 'final-rating',
        text: `Article rating: ${rating.display['article_rating'] ?? 'pending'}`,
      }),
    );
  }
}

/**
 * Workbench shell: profile picker, three tabs, shared session state.
 * All math happens on the service; this file only wires components.
 */

import { ApiClient, Article, Catalog, Labels, Profile } from './api.js';
import { SessionStore } from './state.js';
import { ProfileEditor } from './profileEditor.js';
import { RankingDashboard } from './rankingDashboard.js';
import { ScoringWizard } from './scoringWizard.js';
import { clear, el, show } from './dom.js';

interface Panels {
  editor: HTMLDivElement;
  wizard: HTMLDivElement;
  dashboard: HTMLDivElement;
}

export async function boot(container: HTMLElement, apiBase = ''): Promise<void> {
  const api = new ApiClient(apiBase);
  const store = new SessionStore();
  clear(container);

  const errorLine = el('p', { class: 'app-error' });
  errorLine.hidden = true;
  container.append(errorLine);

  let labels: Labels;
  let profiles: Profile[];
  try {
    labels = await api.getLabels();
    profiles = (await api.listProfiles()).profiles;
  } catch (error) {
    show(errorLine, `service unreachable: ${String(error)}`);
    return;
  }

  if (profiles.length === 0) {
    container.append(el('p', {
      text: 'No profiles yet. Create one first, for example with: '
        + 'rubric profile create my-profile --name "My profile"',
    }));
    return;
  }

  const profile = profiles[0];
  store.update({ profile });
  const catalog: Catalog = await api.getCatalog(
    profile.catalog_id, profile.catalog_version);

  const panels: Panels = {
    editor: el('div', { class: 'panel panel-editor' }),
    wizard: el('div', { class: 'panel panel-wizard' }),
    dashboard: el('div', { class: 'panel panel-dashboard' }),
  };

  const tabs = el('nav', { class: 'tabs' });
  const names: Array<[keyof Panels, string]> = [
    ['editor', 'Profile'],
    ['wizard', 'Score'],
    ['dashboard', 'Rankings'],
  ];
  for (const [key, title] of names) {
    const button = el('button', { class: 'tab', text: title });
    button.addEventListener('click', () => {
      for (const panel of Object.values(panels)) {
        panel.hidden = true;
      }
      panels[key].hidden = false;
      if (key === 'dashboard') {
        dashboard.mount(store.get().profile ?? profile);
      }
    });
    tabs.append(button);
  }

  container.append(tabs, panels.editor, panels.wizard, panels.dashboard);
  panels.wizard.hidden = true;
  panels.dashboard.hidden = true;

  const editor = new ProfileEditor(panels.editor, { api, store, catalog, labels });
  editor.mount(profile);

  const dashboard = new RankingDashboard(panels.dashboard, { api, store, catalog });

  await mountWizardControls(panels.wizard, api, store, catalog, labels);
}

async function mountWizardControls(
  panel: HTMLElement,
  api: ApiClient,
  store: SessionStore,
  catalog: Catalog,
  labels: Labels,
): Promise<void> {
  const picker = el('div', { class: 'article-picker' });
  const stage = el('div', { class: 'wizard-stage' });
  panel.append(picker, stage);

  const articles: Article[] = (await api.listArticles()).articles;
  const select = el('select', { class: 'article-select' });
  for (const article of articles) {
    select.append(el('option', { value: article.article_id, text: article.title }));
  }

  const startButton = el('button', { text: 'Start scoring' });
  startButton.addEventListener('click', async () => {
    const profile = store.get().profile;
    const articleId = select.value;
    if (!profile || !articleId) {
      return;
    }
    const assessment = await api.createAssessment(articleId, profile.profile_id);
    store.update({
      article: articles.find((a) => a.article_id === articleId) ?? null,
    });
    const wizard = new ScoringWizard(stage, { api, store, catalog, labels });
    wizard.mount(profile, assessment);
  });

  if (articles.length === 0) {
    picker.append(el('p', {
      text: 'No articles yet. Add one first, for example with: '
        + 'rubric article add a1 --title "First article"',
    }));
  } else {
    picker.append(select, startButton);
  }
}

import type { Assessment, Catalog, Profile } from '../src/api.js';

/** Two categories, four criteria; enough shape for every component. */
export const CATALOG: Catalog = {
  catalog_id: 'builtin',
  version: '1',
  categories: [
    {
      id: '1',
      name: 'Clarity',
      criteria: [
        { id: '1.1', text: 'To what extent is the writing plain and direct?' },
        { id: '1.2', text: 'To what extent are terms defined before use?' },
      ],
    },
    {
      id: '2',
      name: 'Succinctness',
      criteria: [
        { id: '2.1', text: 'To what extent does the article avoid repetition?' },
        { id: '2.2', text: 'To what extent is every section necessary?' },
      ],
    },
  ],
};

/** Effective criteria under the golden profile below. */
export const EFFECTIVE = ['1.1', '2.1', '2.2'];

export function goldenProfile(): Profile {
  return {
    profile_id: 'teaching-101',
    name: 'golden',
    catalog_id: 'builtin',
    catalog_version: '1',
    category_importance: { '1': 4, '2': 2 },
    criterion_importance: { '1.1': 5, '1.2': 0, '2.1': 4, '2.2': 5 },
    created_at: '2026-01-01T00:00:00Z',
    updated_at: '2026-01-01T00:00:00Z',
    revision: 2,
  };
}

export function freshProfile(): Profile {
  return {
    profile_id: 'teaching-101',
    name: 'golden',
    catalog_id: 'builtin',
    catalog_version: '1',
    category_importance: { '1': 0, '2': 0 },
    criterion_importance: { '1.1': 0, '1.2': 0, '2.1': 0, '2.2': 0 },
    created_at: '2026-01-01T00:00:00Z',
    updated_at: '2026-01-01T00:00:00Z',
    revision: 1,
  };
}

export function draftAssessment(profile: Profile): Assessment {
  return {
    assessment_id: `a1@${profile.profile_id}`,
    article_id: 'a1',
    profile_id: profile.profile_id,
    profile_revision: profile.revision,
    scores: {},
    status: 'draft',
    updated_at: '2026-01-01T00:00:00Z',
    revision: 1,
  };
}

/**
 * Typed client for the rating service.
 *
 * Every number the workbench displays comes out of one of these calls.
 * The client never post-processes values beyond JSON parsing: display
 * strings are rendered exactly as the service sent them.
 */

export interface CatalogCriterion {
  id: string;
  text: string;
}

export interface CatalogCategory {
  id: string;
  name: string;
  criteria: CatalogCriterion[];
}

export interface Catalog {
  catalog_id: string;
  version: string;
  categories: CatalogCategory[];
}

export interface Profile {
  profile_id: string;
  name: string;
  catalog_id: string;
  catalog_version: string;
  category_importance: Record<string, number>;
  criterion_importance: Record<string, number>;
  created_at: string;
  updated_at: string;
  revision: number;
}

export interface Article {
  article_id: string;
  title: string;
  authors?: string | null;
  year?: number | null;
  source?: string | null;
  notes?: string | null;
}

export type ScoreValue = number | 'NA';

export interface Assessment {
  assessment_id: string;
  article_id: string;
  profile_id: string;
  profile_revision: number;
  scores: Record<string, ScoreValue>;
  status: 'draft' | 'complete';
  updated_at: string;
  revision: number;
}

export interface WeightPreview {
  category_weights: Record<string, number>;
  criterion_weights: Record<string, Record<string, number>>;
  display: {
    category: Record<string, string>;
    criterion: Record<string, string>;
  };
}

/** Rating payload; category ids map to fractions, display holds the strings. */
export interface Rating {
  assessment_id: string;
  article_id: string;
  profile_id: string;
  profile_revision: number;
  status: 'draft' | 'complete';
  article_rating: number | null;
  category_scores: Record<string, number>;
  category_weights?: Record<string, number>;
  criterion_weights?: Record<string, Record<string, number>>;
  display: Record<string, string>;
}

export interface RankingEntry {
  article_id: string;
  article_rating: number;
  rank: number;
  category_scores: Record<string, number>;
  display: Record<string, string>;
}

export interface Ranking {
  profile_id: string;
  revision: number;
  ranking: RankingEntry[];
}

export interface WhatIfDelta {
  target: string;
  new_importance: number;
}

export interface WhatIfReport {
  profile_id: string;
  revision: number;
  baseline: RankingEntry[];
  perturbed: RankingEntry[];
  rating_deltas: Record<string, number>;
  rank_reversals: string[][];
}

export interface Labels {
  importance: Record<string, string>;
  score: Record<string, string>;
}

/** Domain error from the service, carrying its machine-readable code. */
export class ServiceError extends Error {
  constructor(
    message: string,
    public readonly code: string,
    public readonly status: number,
    public readonly step?: string,
  ) {
    super(message);
    this.name = 'ServiceError';
  }
}

interface ErrorEnvelope {
  error?: { code?: string; message?: string; step?: string };
}

export class ApiClient {
  constructor(private readonly base = '') {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const response = await fetch(this.base + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      payload = null;
    }
    if (!response.ok) {
      const envelope = (payload ?? {}) as ErrorEnvelope;
      const detail = envelope.error ?? {};
      throw new ServiceError(
        detail.message ?? `request failed with status ${response.status}`,
        detail.code ?? 'http_error',
        response.status,
        detail.step,
      );
    }
    return payload as T;
  }

  getCatalog(catalogId: string, version?: string): Promise<Catalog> {
    const query = version ? `?version=${encodeURIComponent(version)}` : '';
    return this.request('GET', `/api/catalogs/${encodeURIComponent(catalogId)}${query}`);
  }

  getLabels(): Promise<Labels> {
    return this.request('GET', '/api/labels');
  }

  listProfiles(): Promise<{ profiles: Profile[] }> {
    return this.request('GET', '/api/profiles');
  }

  getProfile(profileId: string, revision?: number): Promise<Profile> {
    const query = revision === undefined ? '' : `?revision=${revision}`;
    return this.request('GET', `/api/profiles/${encodeURIComponent(profileId)}${query}`);
  }

  createProfile(body: {
    profile_id: string;
    name: string;
    catalog_id?: string;
    catalog_version?: string;
    category_importance?: Record<string, number>;
    criterion_importance?: Record<string, number>;
  }): Promise<Profile> {
    return this.request('POST', '/api/profiles', body);
  }

  patchImportance(profileId: string, body: {
    revision: number;
    category?: Record<string, number>;
    criterion?: Record<string, number>;
  }): Promise<Profile> {
    return this.request('PATCH', `/api/profiles/${encodeURIComponent(profileId)}/importance`, body);
  }

  previewWeights(
    categoryImportance: Record<string, number>,
    criterionImportance: Record<string, number>,
  ): Promise<WeightPreview> {
    return this.request('POST', '/api/weights', {
      category_importance: categoryImportance,
      criterion_importance: criterionImportance,
    });
  }

  listArticles(): Promise<{ articles: Article[] }> {
    return this.request('GET', '/api/articles');
  }

  createArticle(body: Article): Promise<Article> {
    return this.request('POST', '/api/articles', body);
  }

  deleteArticle(articleId: string): Promise<void> {
    return this.request('DELETE', `/api/articles/${encodeURIComponent(articleId)}`);
  }

  listAssessments(profileId?: string): Promise<{ assessments: Assessment[] }> {
    const query = profileId ? `?profile=${encodeURIComponent(profileId)}` : '';
    return this.request('GET', `/api/assessments${query}`);
  }

  createAssessment(articleId: string, profileId: string): Promise<Assessment> {
    return this.request('POST', '/api/assessments', {
      article_id: articleId,
      profile_id: profileId,
    });
  }

  patchScores(
    assessmentId: string,
    revision: number,
    scores: Record<string, ScoreValue | null>,
  ): Promise<Assessment> {
    return this.request('PATCH',
      `/api/assessments/${encodeURIComponent(assessmentId)}/scores`,
      { revision, scores });
  }

  getRating(assessmentId: string, partial = false): Promise<Rating> {
    const query = partial ? '?partial=true' : '';
    return this.request('GET',
      `/api/assessments/${encodeURIComponent(assessmentId)}/rating${query}`);
  }

  getRankings(profileId: string): Promise<Ranking> {
    return this.request('GET', `/api/rankings?profile=${encodeURIComponent(profileId)}`);
  }

  whatIf(body: {
    profile_id: string;
    revision?: number;
    deltas?: WhatIfDelta[];
    scan?: boolean;
  }): Promise<WhatIfReport> {
    return this.request('POST', '/api/whatif', body);
  }
}

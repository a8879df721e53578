import type { Article, Assessment, Profile, Ranking } from './api.js';

/**
 * Everything the workbench keeps between interactions. The service owns
 * all math; this is view state plus the last payloads it sent us.
 */
export interface SessionState {
  profile: Profile | null;
  /** True while edits in the profile editor have not been saved. */
  profileDirty: boolean;
  article: Article | null;
  assessment: Assessment | null;
  lastRanking: Ranking | null;
  /** Transient what-if targets, category id to slider importance. */
  pendingDeltas: Record<string, number>;
}

export type Listener = (state: SessionState) => void;

export class SessionStore {
  private state: SessionState = {
    profile: null,
    profileDirty: false,
    article: null,
    assessment: null,
    lastRanking: null,
    pendingDeltas: {},
  };

  private listeners = new Set<Listener>();

  get(): SessionState {
    return this.state;
  }

  update(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }
}

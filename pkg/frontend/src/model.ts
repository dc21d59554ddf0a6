import {
  AlphaDto,
  CandidateDto,
  SessionDto,
  TermStateDto,
  TermStatus,
} from './types.js'

// The console model is a projection of service responses plus local
// navigation state (note draft, skip order). Judgments, statuses, and
// agreement values always come from the service verbatim.

export type Phase = 'loading' | 'review' | 'discussion' | 'done'

export interface CurrentTerm {
  term: string
  candidate: CandidateDto
}

export interface ConsoleModel {
  phase: Phase
  sessionId: string | null
  rater: string | null
  session: SessionDto | null
  current: CurrentTerm | null
  noteDraft: string
  skipped: string[]
  alpha: AlphaDto | null
  error: string | null
}

export function initialModel(): ConsoleModel {
  return {
    phase: 'loading',
    sessionId: null,
    rater: null,
    session: null,
    current: null,
    noteDraft: '',
    skipped: [],
    alpha: null,
    error: null,
  }
}

export function termState(model: ConsoleModel, term: string): TermStateDto | null {
  return model.session?.terms.find((t) => t.term === term) ?? null
}

export function statusCounts(model: ConsoleModel): Record<TermStatus, number> {
  const counts: Record<TermStatus, number> = {
    pending: 0,
    agreed: 0,
    needs_discussion: 0,
    resolved: 0,
  }
  for (const term of model.session?.terms ?? []) counts[term.status] += 1
  return counts
}

export function disagreements(model: ConsoleModel): TermStateDto[] {
  return (model.session?.terms ?? []).filter((t) => t.status === 'needs_discussion')
}

/** Terms this rater still has to rate (unresolved, unrated by them). */
export function unratedTerms(model: ConsoleModel): string[] {
  const rater = model.rater
  if (!rater || !model.session) return []
  return model.session.terms
    .filter((t) => t.status !== 'resolved' && !(rater in t.ratings))
    .map((t) => t.term)
}

/** The next term to show: service order, skipped terms pushed to the back. */
export function pickNext(model: ConsoleModel): string | null {
  const queue = unratedTerms(model)
  const fresh = queue.filter((t) => !model.skipped.includes(t))
  if (fresh.length > 0) return fresh[0] ?? null
  const recycled = model.skipped.filter((t) => queue.includes(t))
  return recycled[0] ?? null
}

export function candidateFor(model: ConsoleModel, term: string): CandidateDto | null {
  return model.session?.candidates.find((c) => c.term === term) ?? null
}

// -- pure transitions --------------------------------------------------------

export function withSession(model: ConsoleModel, session: SessionDto): ConsoleModel {
  return { ...model, session, sessionId: session.id }
}

export function withAlpha(model: ConsoleModel, alpha: AlphaDto): ConsoleModel {
  return { ...model, alpha }
}

export function withCurrent(model: ConsoleModel, current: CurrentTerm | null): ConsoleModel {
  return { ...model, current, phase: current === null ? 'done' : 'review' }
}

export function withError(model: ConsoleModel, error: string): ConsoleModel {
  // Never drop the note draft on an error: the rater keeps their text.
  return { ...model, error }
}

export function clearError(model: ConsoleModel): ConsoleModel {
  return { ...model, error: null }
}

export function withNoteDraft(model: ConsoleModel, noteDraft: string): ConsoleModel {
  return { ...model, noteDraft }
}

export function afterSubmit(model: ConsoleModel): ConsoleModel {
  return { ...model, noteDraft: '', error: null }
}

export function withSkip(model: ConsoleModel, term: string): ConsoleModel {
  const skipped = model.skipped.includes(term)
    ? model.skipped
    : [...model.skipped, term]
  return { ...model, skipped }
}

export function enterDiscussion(model: ConsoleModel): ConsoleModel {
  return { ...model, phase: 'discussion', error: null }
}

export function enterReview(model: ConsoleModel): ConsoleModel {
  return { ...model, phase: model.current ? 'review' : 'done', error: null }
}

// -- a minimal observable store ----------------------------------------------

export type Listener = (model: ConsoleModel) => void

export class Store {
  private listeners: Listener[] = []

  constructor(private model: ConsoleModel = initialModel()) {}

  get(): ConsoleModel {
    return this.model
  }

  set(next: ConsoleModel): void {
    this.model = next
    for (const listener of this.listeners) listener(next)
  }

  apply(transition: (model: ConsoleModel) => ConsoleModel): void {
    this.set(transition(this.model))
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener)
    listener(this.model)
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener)
    }
  }
}

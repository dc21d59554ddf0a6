import { ApiClient } from './api.js'
import {
  Store,
  afterSubmit,
  candidateFor,
  clearError,
  enterDiscussion,
  enterReview,
  pickNext,
  withAlpha,
  withCurrent,
  withError,
  withNoteDraft,
  withSession,
  withSkip,
} from './model.js'
import { ApiError } from './types.js'

/**
 * Orchestrates the review loop and the discussion view against the service.
 *
 * The controller never computes statuses or agreement itself: after every
 * mutation it refetches the session and alpha so the view renders exactly
 * what the service reports.
 */
export class ConsoleController {
  constructor(
    readonly api: ApiClient,
    readonly store: Store = new Store(),
  ) {}

  private async refresh(sessionId: string): Promise<void> {
    const session = await this.api.session(sessionId)
    this.store.apply((m) => withSession(m, session))
    const alpha = await this.api.alpha(sessionId)
    this.store.apply((m) => withAlpha(m, alpha))
  }

  private async advance(): Promise<void> {
    const model = this.store.get()
    if (!model.sessionId || !model.rater) return
    const next = await this.api.nextTerm(model.sessionId, model.rater)
    if (next.term === null) {
      this.store.apply((m) => withCurrent(m, null))
      return
    }
    // Respect local skips: the service returns the first unrated term, the
    // queue order here pushes skipped terms to the back until only they
    // remain.
    const preferred = pickNext(this.store.get()) ?? next.term
    const candidate =
      preferred === next.term
        ? next.candidate
        : candidateFor(this.store.get(), preferred)
    if (candidate == null) {
      this.store.apply((m) => withCurrent(m, { term: next.term!, candidate: next.candidate! }))
      return
    }
    this.store.apply((m) => withCurrent(m, { term: preferred, candidate }))
  }

  async start(sessionId: string, rater: string): Promise<void> {
    this.store.apply((m) => ({ ...m, sessionId, rater }))
    await this.refresh(sessionId)
    await this.advance()
  }

  setNote(note: string): void {
    this.store.apply((m) => withNoteDraft(m, note))
  }

  /** Submit the current term's rating; on a service error the note and the
   * current term stay put so nothing typed is lost. */
  async rate(ambiguous: boolean): Promise<void> {
    const model = this.store.get()
    if (!model.sessionId || !model.rater || !model.current) return
    const note = model.noteDraft.trim() === '' ? null : model.noteDraft
    try {
      await this.api.submitRating(
        model.sessionId,
        model.rater,
        model.current.term,
        ambiguous,
        note,
      )
    } catch (error) {
      if (error instanceof ApiError) {
        this.store.apply((m) => withError(m, `${error.status}: ${error.message}`))
        return
      }
      throw error
    }
    this.store.apply(afterSubmit)
    await this.refresh(model.sessionId)
    await this.advance()
  }

  /** Move the current term to the back of the personal queue, unrated. */
  async skip(): Promise<void> {
    const model = this.store.get()
    if (!model.current) return
    this.store.apply((m) => withSkip(m, model.current!.term))
    await this.advance()
  }

  showDiscussion(): void {
    this.store.apply(enterDiscussion)
  }

  showReview(): void {
    this.store.apply(enterReview)
  }

  dismissError(): void {
    this.store.apply(clearError)
  }

  /** Record a consensus decision for a disputed term. On a 409 the view is
   * refreshed so stale state is replaced by the service's. */
  async resolveTerm(term: string, decision: boolean, note: string | null): Promise<void> {
    const model = this.store.get()
    if (!model.sessionId) return
    try {
      await this.api.submitResolution(model.sessionId, term, decision, note)
    } catch (error) {
      if (error instanceof ApiError) {
        this.store.apply((m) => withError(m, `${error.status}: ${error.message}`))
        await this.refresh(model.sessionId)
        return
      }
      throw error
    }
    await this.refresh(model.sessionId)
  }
}

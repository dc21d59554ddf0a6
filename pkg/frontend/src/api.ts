import {
  AlphaDto,
  ApiError,
  CandidateDto,
  ConcordanceLineDto,
  NextTermDto,
  RatingResultDto,
  SessionDto,
} from './types.js'

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

/** Thin typed client over the annotation service. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init)
    const body = await response.json().catch(() => null)
    if (!response.ok) {
      const message =
        body && typeof body.error === 'string' ? body.error : response.statusText
      const field = body && typeof body.field === 'string' ? body.field : null
      throw new ApiError(response.status, message, field)
    }
    return body as T
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(payload),
    })
  }

  candidates(): Promise<CandidateDto[]> {
    return this.request('/candidates')
  }

  concordance(term: string, corpus: string, window = 5): Promise<{
    term: string
    corpus: string
    lines: ConcordanceLineDto[]
  }> {
    const query = new URLSearchParams({ term, corpus, window: String(window) })
    return this.request(`/concordance?${query}`)
  }

  createSession(raters: string[], candidates?: CandidateDto[], id?: string): Promise<SessionDto> {
    return this.post('/sessions', { raters, candidates, id })
  }

  session(id: string): Promise<SessionDto> {
    return this.request(`/sessions/${id}`)
  }

  nextTerm(id: string, rater: string): Promise<NextTermDto> {
    return this.request(`/sessions/${id}/next?rater=${encodeURIComponent(rater)}`)
  }

  submitRating(
    id: string,
    rater: string,
    term: string,
    ambiguous: boolean,
    note: string | null,
  ): Promise<RatingResultDto> {
    return this.post(`/sessions/${id}/ratings`, { rater, term, ambiguous, note })
  }

  submitResolution(
    id: string,
    term: string,
    decision: boolean,
    note: string | null,
  ): Promise<RatingResultDto> {
    return this.post(`/sessions/${id}/resolutions`, { term, decision, note })
  }

  alpha(id: string): Promise<AlphaDto> {
    return this.request(`/sessions/${id}/alpha`)
  }
}

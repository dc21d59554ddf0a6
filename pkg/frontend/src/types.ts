// Wire types for the lexaudit annotation service (JSON over HTTP).

export interface ConcordanceLineDto {
  corpus: string
  utterance_id: string
  left: string
  keyword: string
  right: string
}

export interface CandidateDto {
  term: string
  gender: string
  sources: string[]
  corpora: Record<string, number>
  examples: ConcordanceLineDto[]
}

export interface RatingDto {
  ambiguous: boolean
  note: string | null
}

export type TermStatus = 'pending' | 'agreed' | 'needs_discussion' | 'resolved'

export interface TermStateDto {
  term: string
  status: TermStatus
  decision: boolean | null
  ratings: Record<string, RatingDto>
  resolution_note: string | null
}

export interface SessionDto {
  id: string
  raters: string[]
  terms: TermStateDto[]
  candidates: CandidateDto[]
}

export interface NextTermDto {
  term: string | null
  candidate: CandidateDto | null
}

export interface AlphaDto {
  alpha: number | null
  per_term: Record<string, number>
}

export interface RatingResultDto {
  term: string
  status: TermStatus
}

/** Machine-readable service error: {error, field} with an HTTP status. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly field: string | null = null,
  ) {
    super(message)
  }
}

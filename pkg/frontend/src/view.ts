import { ConsoleController } from './controller.js'
import { ConsoleModel, disagreements, statusCounts, termState } from './model.js'
import { CandidateDto, ConcordanceLineDto } from './types.js'

// Plain-DOM view. Rendering is a pure function of the model; all state
// lives in the store and the service.

type Child = Node | string

function el(tag: string, attrs: Record<string, string> = {}, ...children: Child[]): HTMLElement {
  const node = document.createElement(tag)
  for (const [key, value] of Object.entries(attrs)) {
    if (key === 'class') node.className = value
    else node.setAttribute(key, value)
  }
  for (const child of children) {
    node.append(typeof child === 'string' ? document.createTextNode(child) : child)
  }
  return node
}

function alphaText(value: number | null | undefined): string {
  return value === null || value === undefined ? 'n/a' : String(value)
}

function concordanceList(lines: ConcordanceLineDto[]): HTMLElement {
  const list = el('ul', { class: 'concordance', 'data-testid': 'concordance' })
  for (const line of lines) {
    list.append(
      el(
        'li',
        {},
        el('span', { class: 'badge' }, line.corpus),
        ' ',
        el('span', { class: 'ctx' }, line.left),
        ' ',
        el('mark', {}, line.keyword),
        ' ',
        el('span', { class: 'ctx' }, line.right),
      ),
    )
  }
  return list
}

function candidateCard(candidate: CandidateDto): HTMLElement {
  const frequencies = Object.entries(candidate.corpora)
    .map(([corpus, count]) => `${corpus}: ${count}`)
    .join(', ')
  return el(
    'section',
    { class: 'candidate', 'data-testid': 'candidate' },
    el('h2', { 'data-testid': 'term' }, candidate.term),
    el('p', {},
      el('span', { class: `gender ${candidate.gender}`, 'data-testid': 'gender' },
        candidate.gender),
      ` · found in ${frequencies}`),
    concordanceList(candidate.examples),
  )
}

function reviewView(model: ConsoleModel, controller: ConsoleController): HTMLElement {
  const root = el('div', { class: 'review' })
  if (!model.current) return root
  root.append(candidateCard(model.current.candidate))

  const note = el('textarea', {
    'data-testid': 'note',
    placeholder: 'optional note (kept if submitting fails)',
    rows: '2',
  }) as HTMLTextAreaElement
  note.value = model.noteDraft
  note.addEventListener('input', () => controller.setNote(note.value))

  const buttons = el(
    'p',
    { class: 'keys' },
    button('ambiguous [a]', 'rate-ambiguous', () => void controller.rate(true)),
    ' ',
    button('not ambiguous [n]', 'rate-not', () => void controller.rate(false)),
    ' ',
    button('skip [s]', 'skip', () => void controller.skip()),
  )
  root.append(note, buttons)
  return root
}

function button(label: string, testid: string, onClick: () => void): HTMLElement {
  const node = el('button', { 'data-testid': testid }, label)
  node.addEventListener('click', onClick)
  return node
}

function discussionView(model: ConsoleModel, controller: ConsoleController): HTMLElement {
  const root = el('div', { class: 'discussion', 'data-testid': 'discussion' })
  const disputed = disagreements(model)
  if (disputed.length === 0) {
    root.append(el('p', { 'data-testid': 'no-disagreements' }, 'none'))
    return root
  }
  for (const term of disputed) {
    const card = el('section', { class: 'dispute', 'data-testid': `dispute-${term.term}` })
    card.append(el('h3', {}, term.term))
    const table = el('table', { class: 'ratings' })
    for (const [rater, rating] of Object.entries(term.ratings)) {
      table.append(
        el('tr', {},
          el('td', {}, rater),
          el('td', {}, rating.ambiguous ? 'ambiguous' : 'not ambiguous'),
          el('td', {}, rating.note ?? '')),
      )
    }
    card.append(table)
    const candidate = model.session?.candidates.find((c) => c.term === term.term)
    if (candidate) card.append(concordanceList(candidate.examples))
    const note = el('input', {
      type: 'text',
      'data-testid': `resolve-note-${term.term}`,
      placeholder: 'resolution note',
    }) as HTMLInputElement
    card.append(
      note,
      button('resolve ambiguous', `resolve-true-${term.term}`, () =>
        void controller.resolveTerm(term.term, true, note.value || null)),
      button('resolve not', `resolve-false-${term.term}`, () =>
        void controller.resolveTerm(term.term, false, note.value || null)),
    )
    root.append(card)
  }
  return root
}

function doneView(model: ConsoleModel): HTMLElement {
  return el(
    'div',
    { class: 'done', 'data-testid': 'done' },
    el('h2', {}, 'queue complete'),
    el('p', {}, 'session alpha: ',
      el('span', { 'data-testid': 'alpha' }, alphaText(model.alpha?.alpha))),
  )
}

export function render(
  container: HTMLElement,
  model: ConsoleModel,
  controller: ConsoleController,
): void {
  container.replaceChildren()
  const counts = statusCounts(model)
  const header = el(
    'header',
    {},
    el('strong', {}, `session ${model.sessionId ?? '…'}`),
    ` rater ${model.rater ?? '…'} · `,
    el('span', { 'data-testid': 'progress' },
      `pending ${counts.pending} · agreed ${counts.agreed} · ` +
      `discussion ${counts.needs_discussion} · resolved ${counts.resolved}`),
    ' · alpha ',
    el('span', { 'data-testid': 'alpha' }, alphaText(model.alpha?.alpha)),
    ' ',
    button(model.phase === 'discussion' ? 'review [d]' : 'discussion [d]', 'toggle-view',
      () => (model.phase === 'discussion'
        ? controller.showReview()
        : controller.showDiscussion())),
  )
  container.append(header)

  if (model.error) {
    const banner = el('div', { class: 'error', 'data-testid': 'error' }, model.error, ' ')
    banner.append(button('dismiss', 'dismiss-error', () => controller.dismissError()))
    container.append(banner)
  }

  if (model.phase === 'discussion') container.append(discussionView(model, controller))
  else if (model.phase === 'done') container.append(doneView(model))
  else if (model.phase === 'review') container.append(reviewView(model, controller))
  else container.append(el('p', {}, 'loading…'))

  if (model.current && model.phase === 'review') {
    const state = termState(model, model.current.term)
    if (state) {
      const perTerm = model.alpha?.per_term[model.current.term]
      container.append(
        el('footer', { 'data-testid': 'term-status' },
          `status: ${state.status}`,
          perTerm === undefined ? '' : ` · term alpha ${perTerm}`),
      )
    }
  }
}

/** Keyboard-first bindings: a = ambiguous, n = not, s = skip, d = discussion. */
export function bindKeys(target: EventTarget, controller: ConsoleController): void {
  target.addEventListener('keydown', (event) => {
    const key = (event as KeyboardEvent).key
    const active = document.activeElement
    if (active && (active.tagName === 'TEXTAREA' || active.tagName === 'INPUT')) {
      if (key === 'Escape') (active as HTMLElement).blur()
      return
    }
    const model = controller.store.get()
    if (key === 'd') {
      if (model.phase === 'discussion') controller.showReview()
      else controller.showDiscussion()
      return
    }
    if (model.phase !== 'review') return
    if (key === 'a') void controller.rate(true)
    else if (key === 'n') void controller.rate(false)
    else if (key === 's') void controller.skip()
  })
}

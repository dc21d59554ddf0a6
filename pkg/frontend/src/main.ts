import { ApiClient } from './api.js'
import { ConsoleController } from './controller.js'
import { bindKeys, render } from './view.js'

// Entry point. Query parameters:
//   ?api=http://127.0.0.1:8765   service base URL (default: same origin)
//   ?session=s1                  session to join; omitted = create one
//   ?raters=r1,r2,r3             raters for a newly created session
//   ?rater=r1                    who is reviewing at this keyboard

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search)
  const base = params.get('api') ?? ''
  const api = new ApiClient(base)
  const controller = new ConsoleController(api)

  const container = document.getElementById('app')
  if (!container) throw new Error('missing #app container')
  controller.store.subscribe((model) => render(container, model, controller))
  bindKeys(window, controller)

  const rater = params.get('rater') ?? 'r1'
  let sessionId = params.get('session')
  if (!sessionId) {
    const raters = (params.get('raters') ?? 'r1,r2,r3').split(',')
    const session = await api.createSession(raters)
    sessionId = session.id
    const url = new URL(window.location.href)
    url.searchParams.set('session', sessionId)
    window.history.replaceState(null, '', url)
  }
  await controller.start(sessionId, rater)
}

void boot()

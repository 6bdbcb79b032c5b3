import type { Verdict } from './state.js'
import type { WalkFrame, WalkOutcome } from './walk.js'

/** Stepper pane for the fault walk: judge each predecessor result cell. */
export class TraceView {
  private container: HTMLElement
  onVerdict: ((result: string, verdict: Verdict) => void) | null = null

  constructor(container: HTMLElement) {
    this.container = container
  }

  render(frame: WalkFrame, outcome: WalkOutcome): void {
    this.container.replaceChildren()
    const heading = document.createElement('h3')
    heading.textContent = `inspecting ${frame.module}`
    this.container.appendChild(heading)

    if (outcome.kind === 'inside') {
      const verdict = document.createElement('p')
      verdict.className = 'trace-verdict'
      verdict.textContent = `the error is inside ${outcome.module}`
      this.container.appendChild(verdict)
      return
    }

    const list = document.createElement('ul')
    list.className = 'trace-preds'
    for (const pred of frame.predecessors) {
      const li = document.createElement('li')
      li.dataset.result = pred.result
      const label = document.createElement('span')
      label.textContent = `${pred.result} (from ${pred.module})`
      li.appendChild(label)
      const marked = frame.marks.get(pred.result)
      if (marked !== undefined) {
        const state = document.createElement('em')
        state.textContent = marked
        li.appendChild(state)
      } else {
        for (const verdict of ['correct', 'incorrect'] as Verdict[]) {
          const button = document.createElement('button')
          button.type = 'button'
          button.textContent = verdict
          button.dataset.verdict = verdict
          button.addEventListener('click', () => {
            if (this.onVerdict !== null) this.onVerdict(pred.result, verdict)
          })
          li.appendChild(button)
        }
      }
      list.appendChild(li)
    }
    this.container.appendChild(list)
  }

  clear(): void {
    this.container.replaceChildren()
  }

  verdictText(): string | null {
    const el = this.container.querySelector('.trace-verdict')
    return el === null ? null : el.textContent
  }
}

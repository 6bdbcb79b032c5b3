import type { CurationPayload } from './api.js'

/**
 * Sink checklist.  Active sinks get an Exclude button, excluded ones a
 * Restore button; the list always mirrors the last curation payload the
 * server confirmed.  Buttons only request, they never guess the result.
 */
export class SinksView {
  private container: HTMLElement
  onExclude: ((cell: string) => void) | null = null
  onRestore: ((cell: string) => void) | null = null

  constructor(container: HTMLElement) {
    this.container = container
  }

  render(curation: CurationPayload): void {
    this.container.replaceChildren()
    const active = document.createElement('ul')
    active.className = 'sinks-active'
    for (const cell of curation.active) {
      const li = document.createElement('li')
      li.dataset.cell = cell
      const label = document.createElement('span')
      label.textContent = cell
      li.appendChild(label)
      const button = document.createElement('button')
      button.type = 'button'
      button.textContent = 'Exclude'
      button.addEventListener('click', () => {
        if (this.onExclude !== null) this.onExclude(cell)
      })
      li.appendChild(button)
      active.appendChild(li)
    }
    this.container.appendChild(active)

    const excluded = document.createElement('ul')
    excluded.className = 'sinks-excluded'
    for (const cell of curation.excluded) {
      const li = document.createElement('li')
      li.dataset.cell = cell
      const label = document.createElement('span')
      label.textContent = `${cell} (excluded)`
      li.appendChild(label)
      const button = document.createElement('button')
      button.type = 'button'
      button.textContent = 'Restore'
      button.addEventListener('click', () => {
        if (this.onRestore !== null) this.onRestore(cell)
      })
      li.appendChild(button)
      excluded.appendChild(li)
    }
    this.container.appendChild(excluded)

    if (curation.history.length > 0) {
      const history = document.createElement('p')
      history.className = 'sinks-history'
      history.textContent = `exclusion order: ${curation.history.join(', ')}`
      this.container.appendChild(history)
    }
  }

  activeCells(): string[] {
    return Array.from(this.container.querySelectorAll('.sinks-active li')).map(
      (li) => (li as HTMLElement).dataset.cell ?? '',
    )
  }

  excludedCells(): string[] {
    return Array.from(this.container.querySelectorAll('.sinks-excluded li')).map(
      (li) => (li as HTMLElement).dataset.cell ?? '',
    )
  }
}

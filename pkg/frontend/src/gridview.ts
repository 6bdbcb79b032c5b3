import type { GridPayload } from './api.js'

/** Column number (1-based) to letters: 1 -> A, 27 -> AA. */
export function columnName(col: number): string {
  let n = col
  let name = ''
  while (n > 0) {
    n -= 1
    name = String.fromCharCode(65 + (n % 26)) + name
    n = Math.floor(n / 26)
  }
  return name
}

/**
 * Sheet pane.  Renders the bounding extent as a table but only a window
 * of rows at a time, so sheets with tens of thousands of cells stay
 * cheap: scrolling swaps the window, it never builds the full table.
 *
 * The highlighted set is whatever the controller passes in, verbatim
 * from an API payload.  The view does not derive cell sets itself.
 */
export class GridView {
  private container: HTMLElement
  private data: GridPayload | null = null
  private firstRow = 1
  private windowRows: number
  private highlighted = new Set<string>()
  private labels = new Map<string, string>()
  onCellClick: ((cell: string) => void) | null = null

  constructor(container: HTMLElement, windowRows = 40) {
    this.container = container
    this.windowRows = windowRows
  }

  setData(data: GridPayload): void {
    this.data = data
    this.firstRow = 1
    this.highlighted.clear()
    this.labels.clear()
    this.render()
  }

  /** Replace the highlighted set; cells and labels come from the server payload. */
  highlight(cells: string[], labels?: Map<string, string>): void {
    this.highlighted = new Set(cells)
    this.labels = labels ?? new Map()
    this.render()
  }

  clearHighlight(): void {
    this.highlight([])
  }

  highlightedCells(): string[] {
    return Array.from(this.highlighted).sort()
  }

  /** Scroll the window so `row` is the first visible row. */
  scrollTo(row: number): void {
    if (this.data === null) return
    const maxFirst = Math.max(1, this.data.extent[0] - this.windowRows + 1)
    this.firstRow = Math.min(Math.max(1, row), maxFirst)
    this.render()
  }

  visibleRowCount(): number {
    return this.container.querySelectorAll('tbody tr').length
  }

  render(): void {
    this.container.replaceChildren()
    if (this.data === null) return
    const [rows, cols] = this.data.extent
    const table = document.createElement('table')
    table.className = 'grid'

    const head = document.createElement('thead')
    const headRow = document.createElement('tr')
    headRow.appendChild(document.createElement('th'))
    for (let c = 1; c <= cols; c++) {
      const th = document.createElement('th')
      th.textContent = columnName(c)
      headRow.appendChild(th)
    }
    head.appendChild(headRow)
    table.appendChild(head)

    const body = document.createElement('tbody')
    const last = Math.min(rows, this.firstRow + this.windowRows - 1)
    for (let r = this.firstRow; r <= last; r++) {
      const tr = document.createElement('tr')
      const th = document.createElement('th')
      th.textContent = String(r)
      tr.appendChild(th)
      for (let c = 1; c <= cols; c++) {
        const addr = columnName(c) + String(r)
        const td = document.createElement('td')
        td.dataset.cell = addr
        const content = this.data.cells[addr]
        if (content !== undefined) {
          td.textContent = content.text
          td.classList.add(`kind-${content.kind}`)
        }
        if (this.highlighted.has(addr)) {
          td.classList.add('hl')
          const label = this.labels.get(addr)
          if (label !== undefined) td.dataset.label = label
        }
        td.addEventListener('click', () => {
          if (this.onCellClick !== null) this.onCellClick(addr)
        })
        tr.appendChild(td)
      }
      body.appendChild(tr)
    }
    table.appendChild(body)
    this.container.appendChild(table)
  }

  cellElement(addr: string): HTMLElement | null {
    return this.container.querySelector(`td[data-cell="${addr}"]`)
  }
}

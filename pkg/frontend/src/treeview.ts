import type { ClassesPayload, ModulesPayload } from './api.js'
import type { Selection } from './state.js'

/**
 * Tree pane: classes expand to units expand to cells, or modules expand
 * to cells.  Every node carries the cell list it was served with, so a
 * click hands the controller a ready-made selection and nothing has to
 * be recomputed.
 */
export class TreeView {
  private container: HTMLElement
  onSelect: ((selection: Selection) => void) | null = null
  private selectedId: string | null = null

  constructor(container: HTMLElement) {
    this.container = container
  }

  showClasses(payload: ClassesPayload): void {
    const root = document.createElement('ul')
    root.className = 'tree'
    for (const cls of payload.classes) {
      const cells = cls.units.flatMap((u) => u.cells)
      const node = this.node('class', cls.id, `${cls.id} (${cls.units.length} units)`, cells)
      const children = document.createElement('ul')
      for (const unit of cls.units) {
        const unitNode = this.node('unit', unit.id, `${unit.id} @ ${unit.anchor}`, unit.cells)
        const leaves = document.createElement('ul')
        for (const cell of unit.cells) {
          const leaf = document.createElement('li')
          leaf.textContent = cell
          leaf.className = 'tree-cell'
          leaves.appendChild(leaf)
        }
        unitNode.appendChild(leaves)
        children.appendChild(unitNode)
      }
      node.appendChild(children)
      root.appendChild(node)
    }
    this.container.replaceChildren(root)
    this.markSelected()
  }

  showModules(payload: ModulesPayload): void {
    const root = document.createElement('ul')
    root.className = 'tree'
    for (const mod of payload.modules) {
      const label = mod.promoted
        ? `${mod.id} (${mod.size} cells, promoted)`
        : `${mod.id} (${mod.size} cells)`
      const node = this.node('module', mod.id, label, mod.cells)
      const leaves = document.createElement('ul')
      for (const cell of mod.cells) {
        const leaf = document.createElement('li')
        leaf.textContent = cell === mod.result ? `${cell} (result)` : cell
        leaf.className = 'tree-cell'
        leaves.appendChild(leaf)
      }
      node.appendChild(leaves)
      root.appendChild(node)
    }
    this.container.replaceChildren(root)
    this.markSelected()
  }

  private node(
    kind: Selection['kind'],
    id: string,
    label: string,
    cells: string[],
  ): HTMLElement {
    const li = document.createElement('li')
    li.dataset.id = id
    li.dataset.kind = kind
    const caption = document.createElement('span')
    caption.className = 'tree-label'
    caption.textContent = label
    caption.addEventListener('click', (event) => {
      event.stopPropagation()
      this.selectedId = id
      this.markSelected()
      if (this.onSelect !== null) this.onSelect({ kind, id, cells })
    })
    li.appendChild(caption)
    return li
  }

  /** Highlight a node selected from another pane without firing onSelect. */
  setSelected(id: string | null): void {
    this.selectedId = id
    this.markSelected()
  }

  selected(): string | null {
    return this.selectedId
  }

  private markSelected(): void {
    for (const el of this.container.querySelectorAll('li.selected')) {
      el.classList.remove('selected')
    }
    if (this.selectedId === null) return
    for (const el of this.container.querySelectorAll('li')) {
      if ((el as HTMLElement).dataset.id === this.selectedId) {
        el.classList.add('selected')
        break
      }
    }
  }

  nodeElement(id: string): HTMLElement | null {
    for (const el of this.container.querySelectorAll('li')) {
      if ((el as HTMLElement).dataset.id === id) return el as HTMLElement
    }
    return null
  }
}

import type { SrgPayload, SrgVertex } from './api.js'
import type { Selection } from './state.js'

const SVG_NS = 'http://www.w3.org/2000/svg'
const COL_W = 170
const ROW_H = 64
const BOX_W = 130
const BOX_H = 36
const MARGIN = 20

interface Placed {
  vertex: SrgVertex
  x: number
  y: number
}

/**
 * Longest-path layering: a vertex sits one column right of its furthest
 * predecessor.  The graph arrives acyclic from the service, but the
 * sweep is capped anyway so bad data cannot hang the page.
 */
export function layerize(payload: SrgPayload): Map<string, number> {
  const layer = new Map<string, number>()
  for (const v of payload.vertices) layer.set(v.id, 0)
  for (let sweep = 0; sweep < payload.vertices.length + 1; sweep++) {
    let changed = false
    for (const e of payload.edges) {
      const src = layer.get(e.from)
      const dst = layer.get(e.to)
      if (src === undefined || dst === undefined) continue
      if (src + 1 > dst) {
        layer.set(e.to, src + 1)
        changed = true
      }
    }
    if (!changed) break
  }
  return layer
}

/**
 * SRG pane.  Consumes the JSON form of the graph and lays it out
 * client-side as a left-to-right SVG; double-clicking a module asks the
 * controller for the fish-eye view of it.
 */
export class SrgView {
  private container: HTMLElement
  private placed = new Map<string, Placed>()
  private selectedId: string | null = null
  onSelect: ((selection: Selection) => void) | null = null
  onExpand: ((moduleId: string) => void) | null = null

  constructor(container: HTMLElement) {
    this.container = container
  }

  render(payload: SrgPayload): void {
    const layers = layerize(payload)
    const byLayer = new Map<number, SrgVertex[]>()
    for (const v of payload.vertices) {
      const l = layers.get(v.id) ?? 0
      const bucket = byLayer.get(l)
      if (bucket === undefined) byLayer.set(l, [v])
      else bucket.push(v)
    }
    this.placed.clear()
    let maxRows = 0
    for (const [l, bucket] of byLayer) {
      maxRows = Math.max(maxRows, bucket.length)
      bucket.forEach((v, i) => {
        this.placed.set(v.id, {
          vertex: v,
          x: MARGIN + l * COL_W,
          y: MARGIN + i * ROW_H,
        })
      })
    }
    const width = MARGIN * 2 + (Math.max(...byLayer.keys(), 0) + 1) * COL_W
    const height = MARGIN * 2 + Math.max(maxRows, 1) * ROW_H

    const svg = document.createElementNS(SVG_NS, 'svg')
    svg.setAttribute('viewBox', `0 0 ${width} ${height}`)
    svg.setAttribute('width', String(width))
    svg.setAttribute('height', String(height))

    const defs = document.createElementNS(SVG_NS, 'defs')
    const marker = document.createElementNS(SVG_NS, 'marker')
    marker.setAttribute('id', 'arrow')
    marker.setAttribute('markerWidth', '8')
    marker.setAttribute('markerHeight', '8')
    marker.setAttribute('refX', '7')
    marker.setAttribute('refY', '3')
    marker.setAttribute('orient', 'auto')
    const tip = document.createElementNS(SVG_NS, 'path')
    tip.setAttribute('d', 'M0,0 L7,3 L0,6 z')
    marker.appendChild(tip)
    defs.appendChild(marker)
    svg.appendChild(defs)

    for (const e of payload.edges) {
      const from = this.placed.get(e.from)
      const to = this.placed.get(e.to)
      if (from === undefined || to === undefined) continue
      const line = document.createElementNS(SVG_NS, 'line')
      line.setAttribute('x1', String(from.x + BOX_W))
      line.setAttribute('y1', String(from.y + BOX_H / 2))
      line.setAttribute('x2', String(to.x))
      line.setAttribute('y2', String(to.y + BOX_H / 2))
      line.setAttribute('marker-end', 'url(#arrow)')
      line.setAttribute('class', 'srg-edge')
      line.setAttribute('data-from', e.from)
      line.setAttribute('data-to', e.to)
      const title = document.createElementNS(SVG_NS, 'title')
      title.textContent = `${e.witness[0]} feeds ${e.witness[1]}`
      line.appendChild(title)
      svg.appendChild(line)
    }

    for (const { vertex, x, y } of this.placed.values()) {
      const group = document.createElementNS(SVG_NS, 'g')
      group.setAttribute('class', this.vertexClass(vertex))
      group.setAttribute('data-id', vertex.id)
      group.setAttribute('transform', `translate(${x},${y})`)
      const box = document.createElementNS(SVG_NS, 'rect')
      box.setAttribute('width', String(BOX_W))
      box.setAttribute('height', String(BOX_H))
      box.setAttribute('rx', '4')
      group.appendChild(box)
      const label = document.createElementNS(SVG_NS, 'text')
      label.setAttribute('x', String(BOX_W / 2))
      label.setAttribute('y', String(BOX_H / 2 + 4))
      label.setAttribute('text-anchor', 'middle')
      label.textContent =
        vertex.kind === 'cell' ? vertex.id : `${vertex.id} (${vertex.cells.length})`
      group.appendChild(label)
      group.addEventListener('click', () => {
        this.selectedId = vertex.id
        this.refreshSelection(svg)
        if (this.onSelect !== null && vertex.kind !== 'cell') {
          this.onSelect({
            kind: vertex.kind,
            id: vertex.id,
            cells: vertex.cells.slice(),
          })
        }
      })
      group.addEventListener('dblclick', () => {
        if (vertex.kind === 'module' && this.onExpand !== null) {
          this.onExpand(vertex.id)
        }
      })
      svg.appendChild(group)
    }

    this.container.replaceChildren(svg)
    this.refreshSelection(svg)
  }

  private vertexClass(v: SrgVertex): string {
    const parts = ['srg-vertex', `srg-${v.kind}`]
    for (const flag of v.flags) parts.push(`flag-${flag}`)
    return parts.join(' ')
  }

  private refreshSelection(svg: SVGElement): void {
    for (const g of svg.querySelectorAll('g.srg-vertex')) {
      const id = (g as SVGGElement).getAttribute('data-id')
      g.classList.toggle('selected', id === this.selectedId)
    }
  }

  /** Select from another pane without firing onSelect. */
  setSelected(id: string | null): void {
    this.selectedId = id
    const svg = this.container.querySelector('svg')
    if (svg !== null) this.refreshSelection(svg)
  }

  vertexElement(id: string): Element | null {
    return this.container.querySelector(`g[data-id="${id}"]`)
  }

  vertexIds(): string[] {
    return Array.from(this.container.querySelectorAll('g.srg-vertex')).map(
      (g) => g.getAttribute('data-id') ?? '',
    )
  }
}

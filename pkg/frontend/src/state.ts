import type { Level } from './api.js'

export interface FormParams {
  dh: number
  dv: number
  dman: number | null
  eqStart: Level
  eqRest: Level
}

export const DEFAULT_PARAMS: FormParams = {
  dh: 1,
  dv: 0,
  dman: null,
  eqStart: 'copy',
  eqRest: 'copy',
}

export type SelectionKind = 'area' | 'class' | 'unit' | 'module'

/**
 * Selected abstraction plus its cell set, copied verbatim from the API
 * payload that served it.  Panes highlight these cells and nothing else.
 */
export interface Selection {
  kind: SelectionKind
  id: string
  cells: string[]
}

export type Verdict = 'correct' | 'incorrect'

export interface TraceMark {
  module: string
  result: string
  verdict: Verdict
}

export interface TraceEntry {
  module: string
  marks: TraceMark[]
}

type Listener = () => void

export class ViewState {
  session: string | null = null
  params: FormParams = { ...DEFAULT_PARAMS }
  selection: Selection | null = null
  fisheye: string[] = []
  trail: TraceEntry[] = []
  notice: string | null = null

  private listeners: Listener[] = []

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn)
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn)
    }
  }

  private emit(): void {
    for (const fn of this.listeners) fn()
  }

  openSession(id: string): void {
    this.session = id
    this.selection = null
    this.fisheye = []
    this.trail = []
    this.notice = null
    this.emit()
  }

  setParams(params: FormParams): void {
    this.params = { ...params }
    this.emit()
  }

  select(selection: Selection | null): void {
    this.selection = selection
    this.emit()
  }

  pushFisheye(moduleId: string): void {
    this.fisheye.push(moduleId)
    this.emit()
  }

  popFisheye(): string | undefined {
    const top = this.fisheye.pop()
    this.emit()
    return top
  }

  get fisheyeTop(): string | undefined {
    return this.fisheye[this.fisheye.length - 1]
  }

  setNotice(text: string | null): void {
    this.notice = text
    this.emit()
  }

  setTrail(entries: TraceEntry[]): void {
    this.trail = entries
    this.emit()
  }
}

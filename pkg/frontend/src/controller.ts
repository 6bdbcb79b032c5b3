import {
  ApiClient,
  ApiError,
  type ClassesPayload,
  type CurationPayload,
  type InputSummary,
  type ModulesPayload,
  type Report,
  type SrgPayload,
} from './api.js'
import { validateParams } from './params.js'
import type { FormParams } from './state.js'
import { ViewState } from './state.js'
import { GridView } from './gridview.js'
import { TreeView } from './treeview.js'
import { SrgView } from './srgview.js'
import { SinksView } from './sinksview.js'
import { TraceView } from './traceview.js'
import { TraceWalk, type WalkOutcome } from './walk.js'

export interface Panes {
  grid: GridView
  tree: TreeView
  srg: SrgView
  sinks: SinksView
  trace: TraceView
}

export type SaveFile = (name: string, text: string, mime: string) => void

function browserSave(name: string, text: string, mime: string): void {
  const blob = new Blob([text], { type: mime })
  const url = URL.createObjectURL(blob)
  const link = document.createElement('a')
  link.href = url
  link.download = name
  link.click()
  URL.revokeObjectURL(url)
}

/**
 * Wires the panes to the service.  The controller owns no analysis
 * logic: every cell set it pushes into a pane is lifted verbatim from
 * the most recent API payload, and curation changes render only after
 * the server confirms them.
 */
export class AuditController {
  readonly state = new ViewState()
  readonly api: ApiClient
  private panes: Panes
  private saveFile: SaveFile
  private sessionInput: InputSummary | null = null
  private lastClasses: Report<ClassesPayload> | null = null
  private lastModules: Report<ModulesPayload> | null = null
  private lastCuration: CurationPayload | null = null
  private lastSrg: Report<SrgPayload> | null = null
  private mode: 'classes' | 'modules' = 'classes'
  private walk: TraceWalk | null = null

  constructor(api: ApiClient, panes: Panes, saveFile: SaveFile = browserSave) {
    this.api = api
    this.panes = panes
    this.saveFile = saveFile
    this.panes.tree.onSelect = (sel) => this.applySelection(sel.kind, sel.id)
    this.panes.srg.onSelect = (sel) => this.applySelection(sel.kind, sel.id)
    this.panes.srg.onExpand = (moduleId) => {
      void this.expandFisheye(moduleId)
    }
    this.panes.grid.onCellClick = (cell) => this.cellClicked(cell)
    this.panes.sinks.onExclude = (cell) => {
      void this.excludeSink(cell)
    }
    this.panes.sinks.onRestore = (cell) => {
      void this.restoreSink(cell)
    }
    this.panes.trace.onVerdict = (result, verdict) => {
      void this.markVerdict(result, verdict)
    }
  }

  private get session(): string {
    if (this.state.session === null) throw new Error('no open session')
    return this.state.session
  }

  get input(): InputSummary | null {
    return this.sessionInput
  }

  viewMode(): 'classes' | 'modules' {
    return this.mode
  }

  curation(): CurationPayload | null {
    return this.lastCuration
  }

  modulesReport(): Report<ModulesPayload> | null {
    return this.lastModules
  }

  classesReport(): Report<ClassesPayload> | null {
    return this.lastClasses
  }

  srgReport(): Report<SrgPayload> | null {
    return this.lastSrg
  }

  private surface(error: unknown): null {
    if (error instanceof ApiError) {
      this.state.setNotice(`${error.code}: ${error.message}`)
      return null
    }
    throw error
  }

  /** Upload a workbook and show its grid. */
  async open(csv: string, name?: string): Promise<void> {
    const info = await this.api.createSession(csv, name)
    this.sessionInput = info.input
    this.lastClasses = null
    this.lastModules = null
    this.lastCuration = null
    this.lastSrg = null
    this.walk = null
    this.panes.trace.clear()
    this.state.openSession(info.session)
    const grid = await this.api.grid(info.session)
    this.panes.grid.setData(grid.payload)
  }

  /** Validated parameter change; re-runs the class view when it is open. */
  async applyParams(params: FormParams): Promise<void> {
    const problems = validateParams(params)
    if (problems.length > 0) {
      throw new Error(`invalid parameters: ${problems.join('; ')}`)
    }
    this.state.setParams(params)
    if (this.mode === 'classes' && this.lastClasses !== null) {
      await this.showClasses()
    }
  }

  async showClasses(): Promise<void> {
    const p = this.state.params
    this.lastClasses = await this.api.classes(this.session, {
      dh: p.dh,
      dv: p.dv,
      dman: p.dman,
      eqStart: p.eqStart,
      eqRest: p.eqRest,
    })
    this.mode = 'classes'
    this.panes.tree.showClasses(this.lastClasses.payload)
    await this.refreshSrg()
  }

  async showModules(): Promise<void> {
    this.mode = 'modules'
    await this.reloadModules()
  }

  private async reloadModules(): Promise<void> {
    this.lastModules = await this.api.modules(this.session)
    this.lastCuration = this.lastModules.payload.curation
    this.panes.tree.showModules(this.lastModules.payload)
    this.panes.sinks.render(this.lastCuration)
    await this.refreshSrg()
  }

  private async refreshSrg(): Promise<void> {
    const srgMode = this.mode === 'classes' ? 'units' : 'modules'
    const fisheye = srgMode === 'modules' ? this.state.fisheyeTop : undefined
    this.lastSrg = await this.api.srg(this.session, srgMode, fisheye)
    this.panes.srg.render(this.lastSrg.payload)
  }

  /**
   * Ask the server to exclude a sink, then re-render from its answer.
   * A 409 means the checklist went stale (say, a double click); that
   * turns into a refresh prompt instead of a state change.
   */
  async excludeSink(cell: string): Promise<boolean> {
    let report: Report<CurationPayload>
    try {
      report = await this.api.excludeSink(this.session, cell)
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.state.setNotice(
          `${cell} is no longer an active sink; refresh the sink list and retry`,
        )
        return false
      }
      this.surface(error)
      return false
    }
    this.state.setNotice(null)
    this.lastCuration = report.payload
    this.panes.sinks.render(report.payload)
    await this.reloadModules()
    return true
  }

  async restoreSink(cell: string): Promise<boolean> {
    let report: Report<CurationPayload>
    try {
      report = await this.api.restoreSink(this.session, cell)
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.state.setNotice(
          `${cell} is not excluded on the server; refresh the sink list and retry`,
        )
        return false
      }
      this.surface(error)
      return false
    }
    this.state.setNotice(null)
    this.lastCuration = report.payload
    this.panes.sinks.render(report.payload)
    await this.reloadModules()
    return true
  }

  /** Refresh prompt action: re-pull curation and modules from the server. */
  async refresh(): Promise<void> {
    const sinks = await this.api.sinks(this.session)
    this.lastCuration = sinks.payload
    this.panes.sinks.render(sinks.payload)
    await this.reloadModules()
    this.state.setNotice(null)
  }

  /** Tree or SRG selection: highlight the served cell set everywhere. */
  applySelection(kind: 'area' | 'class' | 'unit' | 'module', id: string): void {
    if (kind === 'class' || kind === 'unit') {
      if (this.lastClasses === null) return
      const rows = this.lastClasses.payload.highlight.filter((r) =>
        kind === 'class' ? r.class === id : r.unit === id,
      )
      const cells = rows.map((r) => r.cell)
      const labels = new Map(rows.map((r) => [r.cell, r.unit]))
      this.state.select({ kind, id, cells })
      this.panes.grid.highlight(cells, labels)
      this.panes.tree.setSelected(id)
      this.panes.srg.setSelected(kind === 'unit' ? id : null)
      return
    }
    if (kind === 'module') {
      if (this.lastModules === null) return
      const mod = this.lastModules.payload.modules.find((m) => m.id === id)
      if (mod === undefined) return
      const labels = new Map(mod.cells.map((c) => [c, mod.id]))
      this.state.select({ kind, id, cells: mod.cells.slice() })
      this.panes.grid.highlight(mod.cells.slice(), labels)
      this.panes.tree.setSelected(id)
      this.panes.srg.setSelected(id)
    }
  }

  /** Grid click: select the owning unit or module, from the served map. */
  cellClicked(cell: string): void {
    if (this.mode === 'classes' && this.lastClasses !== null) {
      const row = this.lastClasses.payload.highlight.find((r) => r.cell === cell)
      if (row !== undefined) {
        this.applySelection('unit', row.unit)
        return
      }
    }
    if (this.mode === 'modules' && this.lastModules !== null) {
      const row = this.lastModules.payload.highlight.find((r) => r.cell === cell)
      if (row !== undefined) {
        this.applySelection('module', row.module)
        return
      }
    }
    this.clearSelection()
  }

  clearSelection(): void {
    this.state.select(null)
    this.panes.grid.clearHighlight()
    this.panes.tree.setSelected(null)
    this.panes.srg.setSelected(null)
  }

  async expandFisheye(moduleId: string): Promise<boolean> {
    this.state.pushFisheye(moduleId)
    try {
      this.mode = 'modules'
      await this.refreshSrg()
    } catch (error) {
      this.state.popFisheye()
      this.surface(error)
      return false
    }
    return true
  }

  async collapseFisheye(): Promise<void> {
    if (this.state.fisheye.length === 0) return
    this.state.popFisheye()
    await this.refreshSrg()
  }

  /** Begin the fault walk at a module; an immediate inside-verdict opens the fish-eye. */
  async startTrace(moduleId: string): Promise<WalkOutcome | null> {
    const walk = new TraceWalk(async (m) => {
      const report = await this.api.trace(this.session, m)
      return report.payload
    })
    let outcome: WalkOutcome
    try {
      await walk.start(moduleId)
      outcome = walk.outcome()
    } catch (error) {
      return this.surface(error)
    }
    this.walk = walk
    this.state.setTrail(walk.trail())
    this.panes.trace.render(walk.current(), outcome)
    if (this.lastModules !== null) {
      this.applySelection('module', walk.current().module)
    }
    if (outcome.kind === 'inside') {
      await this.expandFisheye(outcome.module)
    }
    return outcome
  }

  async markVerdict(result: string, verdict: 'correct' | 'incorrect'): Promise<WalkOutcome | null> {
    if (this.walk === null) throw new Error('no walk in progress')
    let outcome: WalkOutcome
    try {
      outcome = await this.walk.mark(result, verdict)
    } catch (error) {
      return this.surface(error)
    }
    this.state.setTrail(this.walk.trail())
    this.panes.trace.render(this.walk.current(), outcome)
    if (this.lastModules !== null) {
      this.applySelection('module', this.walk.current().module)
    }
    if (outcome.kind === 'inside') {
      await this.expandFisheye(outcome.module)
    }
    return outcome
  }

  walkOutcome(): WalkOutcome | null {
    return this.walk === null ? null : this.walk.outcome()
  }

  /** Curation history plus the verdict trail, as one JSON document. */
  auditLog(): Record<string, unknown> {
    const outcome = this.walkOutcome()
    return {
      input: this.sessionInput,
      parameters: this.state.params,
      curation: this.lastCuration,
      trail: this.state.trail,
      verdict: outcome !== null && outcome.kind === 'inside' ? outcome.module : null,
    }
  }

  saveAuditLog(): void {
    this.saveFile(
      'audit-log.json',
      JSON.stringify(this.auditLog(), null, 2) + '\n',
      'application/json',
    )
  }

  /** Fetch the DOT form of the current SRG and hand it over as a download. */
  async exportDot(): Promise<string> {
    const srgMode = this.mode === 'classes' ? 'units' : 'modules'
    const fisheye = srgMode === 'modules' ? this.state.fisheyeTop : undefined
    const text = await this.api.srgDot(this.session, srgMode, fisheye)
    this.saveFile('srg.dot', text, 'text/vnd.graphviz')
    return text
  }
}

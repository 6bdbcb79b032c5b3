/**
 * Typed client for the gridaudit HTTP service.
 *
 * Every analysis endpoint answers with the same report envelope; the
 * payload type varies per command.  The UI treats these payloads as the
 * single source of truth: cell sets are displayed exactly as served,
 * never recomputed on the client.
 */

export type Level = 'copy' | 'logical' | 'structural'

export interface InputSummary {
  name: string | null
  digest: string
  extent: [number, number]
  cells: number
  formulas: number
}

export interface Diagnostic {
  kind: string
  cells?: string[]
  [extra: string]: unknown
}

/** Common envelope around every analysis report. */
export interface Report<P> {
  schema: number
  command: string
  input: InputSummary
  parameters: Record<string, unknown>
  payload: P
  diagnostics: Diagnostic[]
  timings: Record<string, number>
}

export interface SessionInfo {
  session: string
  input: InputSummary
}

export interface GridCell {
  kind: string
  text: string
}

export interface GridPayload {
  name: string | null
  extent: [number, number]
  cells: Record<string, GridCell>
}

export interface AreaInfo {
  key: string
  cells: string[]
}

export interface AreasPayload {
  level: Level
  areas: AreaInfo[]
}

export interface UnitInfo {
  id: string
  anchor: string
  cells: string[]
}

export interface OutlierInfo {
  axis: string
  stride: number
  breaks: string[]
  holes: string[]
}

export interface ClassInfo {
  id: string
  singleton: boolean
  shape: number[][]
  shape_signature: string
  start_key: string
  rest_keys: { offset: number[]; key: string }[]
  units: UnitInfo[]
  outliers: OutlierInfo | null
}

/** Row of the cell -> class/unit ownership map, one row per cell. */
export interface HighlightRow {
  cell: string
  class: string
  unit: string
}

export interface ClassesPayload {
  classes: ClassInfo[]
  highlight: HighlightRow[]
}

export interface CurationPayload {
  active: string[]
  excluded: string[]
  history: string[]
}

export interface ModuleInfo {
  id: string
  result: string
  cells: string[]
  size: number
  promoted: boolean
}

export interface ModuleHighlightRow {
  cell: string
  module: string
}

export interface ModulesPayload {
  curation: CurationPayload
  modules: ModuleInfo[]
  boundary_violations: {
    edge: [string, string]
    src_module: string
    dst_module: string
  }[]
  highlight: ModuleHighlightRow[]
}

export interface SrgVertex {
  id: string
  kind: 'unit' | 'module' | 'cell'
  cells: string[]
  result: string | null
  flags: string[]
}

export interface SrgEdge {
  from: string
  to: string
  witness: [string, string]
}

export interface SrgPayload {
  mode: string
  fisheye: string | null
  vertices: SrgVertex[]
  edges: SrgEdge[]
  curated_out: string[]
}

export interface TracePayload {
  module: string
  predecessors: { module: string; result: string }[]
  buried: boolean
}

export interface DiffPayload {
  fine: Level
  coarse: Level
  entries: {
    coarse_key: string
    coarse_cells: string[]
    fine_areas: AreaInfo[]
    flagged: boolean
  }[]
  hot_spots: { coarse_key: string; cells: string[] }[]
}

/** Query parameters for the class analysis; omitted fields use server defaults. */
export interface ClassQuery {
  dh?: number
  dv?: number
  dman?: number | null
  eqStart?: Level
  eqRest?: Level
}

export class ApiError extends Error {
  readonly status: number
  readonly code: string
  readonly details: Record<string, unknown>

  constructor(
    status: number,
    code: string,
    message: string,
    details: Record<string, unknown> = {},
  ) {
    super(message)
    this.name = 'ApiError'
    this.status = status
    this.code = code
    this.details = details
  }
}

async function raiseFor(res: Response): Promise<never> {
  let code = 'HttpError'
  let message = `${res.status} ${res.statusText}`
  let details: Record<string, unknown> = {}
  try {
    const body = await res.json()
    if (body && typeof body.error === 'object' && body.error !== null) {
      const { code: c, message: m, ...rest } = body.error
      if (typeof c === 'string') code = c
      if (typeof m === 'string') message = m
      details = rest
    }
  } catch {
    // non-JSON error body, keep the status line
  }
  throw new ApiError(res.status, code, message, details)
}

export class ApiClient {
  constructor(readonly base: string) {}

  private async get<T>(path: string): Promise<T> {
    const res = await fetch(this.base + path)
    if (!res.ok) await raiseFor(res)
    return (await res.json()) as T
  }

  private async getText(path: string): Promise<string> {
    const res = await fetch(this.base + path)
    if (!res.ok) await raiseFor(res)
    return await res.text()
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await fetch(this.base + path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    })
    if (!res.ok) await raiseFor(res)
    return (await res.json()) as T
  }

  /** Upload a workbook as CSV text and open a session for it. */
  async createSession(csv: string, name?: string): Promise<SessionInfo> {
    if (name !== undefined) {
      return this.post<SessionInfo>('/sessions', { csv, name })
    }
    const res = await fetch(`${this.base}/sessions`, {
      method: 'POST',
      headers: { 'content-type': 'text/csv' },
      body: csv,
    })
    if (!res.ok) await raiseFor(res)
    return (await res.json()) as SessionInfo
  }

  grid(session: string): Promise<Report<GridPayload>> {
    return this.get(`/sessions/${session}/grid`)
  }

  areas(session: string, level: Level): Promise<Report<AreasPayload>> {
    return this.get(`/sessions/${session}/areas?level=${level}`)
  }

  classes(session: string, query: ClassQuery = {}): Promise<Report<ClassesPayload>> {
    const params = new URLSearchParams()
    if (query.dh !== undefined) params.set('dh', String(query.dh))
    if (query.dv !== undefined) params.set('dv', String(query.dv))
    if (query.dman !== undefined && query.dman !== null) {
      params.set('dman', String(query.dman))
    }
    if (query.eqStart !== undefined) params.set('eqStart', query.eqStart)
    if (query.eqRest !== undefined) params.set('eqRest', query.eqRest)
    const suffix = params.size > 0 ? `?${params}` : ''
    return this.get(`/sessions/${session}/classes${suffix}`)
  }

  sinks(session: string): Promise<Report<CurationPayload>> {
    return this.get(`/sessions/${session}/sinks`)
  }

  excludeSink(session: string, cell: string): Promise<Report<CurationPayload>> {
    return this.post(`/sessions/${session}/sinks/exclude`, { cell })
  }

  restoreSink(session: string, cell: string): Promise<Report<CurationPayload>> {
    return this.post(`/sessions/${session}/sinks/restore`, { cell })
  }

  modules(session: string): Promise<Report<ModulesPayload>> {
    return this.get(`/sessions/${session}/modules`)
  }

  srg(
    session: string,
    mode: 'units' | 'modules',
    fisheye?: string,
  ): Promise<Report<SrgPayload>> {
    const params = new URLSearchParams({ mode })
    if (fisheye !== undefined) params.set('fisheye', fisheye)
    return this.get(`/sessions/${session}/srg?${params}`)
  }

  srgDot(session: string, mode: 'units' | 'modules', fisheye?: string): Promise<string> {
    const params = new URLSearchParams({ mode, format: 'dot' })
    if (fisheye !== undefined) params.set('fisheye', fisheye)
    return this.getText(`/sessions/${session}/srg?${params}`)
  }

  trace(session: string, module: string): Promise<Report<TracePayload>> {
    const params = new URLSearchParams({ module })
    return this.get(`/sessions/${session}/trace?${params}`)
  }

  diff(session: string, fine: Level, coarse: Level): Promise<Report<DiffPayload>> {
    return this.get(`/sessions/${session}/diff?fine=${fine}&coarse=${coarse}`)
  }
}

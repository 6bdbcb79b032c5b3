import { inject } from 'vitest'
import { ApiClient, type SrgPayload } from '../src/api.js'
import { AuditController, type Panes, type SaveFile } from '../src/controller.js'
import { GridView } from '../src/gridview.js'
import { SinksView } from '../src/sinksview.js'
import { SrgView } from '../src/srgview.js'
import { TraceView } from '../src/traceview.js'
import { TreeView } from '../src/treeview.js'

// Small sheets with known-by-heart analysis results.  S1 has a pair of
// copy-equal row formulas plus a summary; S2 is a three-module chain
// with two sinks; S3 is a two-column table under a header row.
export const S1 = '1,2,=A1+B1\n3,4,=A2+B2\n,,=C1+C2\n'
export const S2 = '1,,\n2,,\n=A1+A2,=A3*2,=A3+1\n'
export const S3 = 'inputs,double,next\n1,=A2*2,=B2+1\n2,=A3*2,=B3+1\n'

export function apiBase(): string {
  return inject('apiBase')
}

/** Client that counts calls per endpoint so tests can pin round-trips. */
export class CountingApi extends ApiClient {
  calls: Record<string, number> = {}

  private bump(name: string): void {
    this.calls[name] = (this.calls[name] ?? 0) + 1
  }

  reset(): void {
    this.calls = {}
  }

  count(name: string): number {
    return this.calls[name] ?? 0
  }

  createSession(...args: Parameters<ApiClient['createSession']>) {
    this.bump('createSession')
    return super.createSession(...args)
  }

  grid(...args: Parameters<ApiClient['grid']>) {
    this.bump('grid')
    return super.grid(...args)
  }

  classes(...args: Parameters<ApiClient['classes']>) {
    this.bump('classes')
    return super.classes(...args)
  }

  sinks(...args: Parameters<ApiClient['sinks']>) {
    this.bump('sinks')
    return super.sinks(...args)
  }

  excludeSink(...args: Parameters<ApiClient['excludeSink']>) {
    this.bump('excludeSink')
    return super.excludeSink(...args)
  }

  restoreSink(...args: Parameters<ApiClient['restoreSink']>) {
    this.bump('restoreSink')
    return super.restoreSink(...args)
  }

  modules(...args: Parameters<ApiClient['modules']>) {
    this.bump('modules')
    return super.modules(...args)
  }

  srg(...args: Parameters<ApiClient['srg']>) {
    this.bump('srg')
    return super.srg(...args)
  }

  srgDot(...args: Parameters<ApiClient['srgDot']>) {
    this.bump('srgDot')
    return super.srgDot(...args)
  }

  trace(...args: Parameters<ApiClient['trace']>) {
    this.bump('trace')
    return super.trace(...args)
  }
}

export interface SavedFile {
  name: string
  text: string
  mime: string
}

export interface Harness {
  controller: AuditController
  panes: Panes
  api: CountingApi
  saved: SavedFile[]
}

export function makePanes(): Panes {
  return {
    grid: new GridView(document.createElement('div')),
    tree: new TreeView(document.createElement('div')),
    srg: new SrgView(document.createElement('div')),
    sinks: new SinksView(document.createElement('div')),
    trace: new TraceView(document.createElement('div')),
  }
}

export function makeHarness(): Harness {
  const api = new CountingApi(apiBase())
  const panes = makePanes()
  const saved: SavedFile[] = []
  const save: SaveFile = (name, text, mime) => {
    saved.push({ name, text, mime })
  }
  const controller = new AuditController(api, panes, save)
  return { controller, panes, api, saved }
}

/** Module-mode SRG of S2, in the exact shape the service emits. */
export const S2_SRG: SrgPayload = {
  mode: 'modules',
  fisheye: null,
  vertices: [
    {
      id: 'A3-module',
      kind: 'module',
      cells: ['A1', 'A2', 'A3'],
      result: 'A3',
      flags: ['interior'],
    },
    { id: 'B3-module', kind: 'module', cells: ['B3'], result: 'B3', flags: ['sink'] },
    { id: 'C3-module', kind: 'module', cells: ['C3'], result: 'C3', flags: ['sink'] },
  ],
  edges: [
    { from: 'A3-module', to: 'B3-module', witness: ['A3', 'B3'] },
    { from: 'A3-module', to: 'C3-module', witness: ['A3', 'C3'] },
  ],
  curated_out: [],
}

import type { TracePayload } from './api.js'
import type { TraceEntry, Verdict } from './state.js'

export interface WalkFrame {
  module: string
  predecessors: { module: string; result: string }[]
  buried: boolean
  marks: Map<string, Verdict>
}

export type WalkOutcome =
  | { kind: 'pending'; module: string }
  | { kind: 'inside'; module: string }

/**
 * Fault localization stepper.  At each module the auditor judges the
 * predecessor result cells one by one: an incorrect result moves the
 * walk into the module that produced it, and once every predecessor
 * checks out (or there are none) the fault must sit inside the current
 * module.  All predecessor lists come from the trace endpoint.
 */
export class TraceWalk {
  private frames: WalkFrame[] = []
  private fetchTrace: (module: string) => Promise<TracePayload>

  constructor(fetchTrace: (module: string) => Promise<TracePayload>) {
    this.fetchTrace = fetchTrace
  }

  async start(module: string): Promise<WalkFrame> {
    this.frames = []
    return this.push(module)
  }

  private async push(module: string): Promise<WalkFrame> {
    const trace = await this.fetchTrace(module)
    const frame: WalkFrame = {
      module: trace.module,
      predecessors: trace.predecessors,
      buried: trace.buried,
      marks: new Map(),
    }
    this.frames.push(frame)
    return frame
  }

  current(): WalkFrame {
    const frame = this.frames[this.frames.length - 1]
    if (frame === undefined) throw new Error('walk not started')
    return frame
  }

  depth(): number {
    return this.frames.length
  }

  outcome(): WalkOutcome {
    const frame = this.current()
    if (frame.buried) return { kind: 'inside', module: frame.module }
    const allCorrect = frame.predecessors.every(
      (p) => frame.marks.get(p.result) === 'correct',
    )
    if (allCorrect) return { kind: 'inside', module: frame.module }
    return { kind: 'pending', module: frame.module }
  }

  /** Judge one predecessor result cell of the current frame. */
  async mark(result: string, verdict: Verdict): Promise<WalkOutcome> {
    const frame = this.current()
    const pred = frame.predecessors.find((p) => p.result === result)
    if (pred === undefined) {
      throw new Error(`${result} is not a predecessor result of ${frame.module}`)
    }
    frame.marks.set(result, verdict)
    if (verdict === 'incorrect') {
      await this.push(pred.module)
    }
    return this.outcome()
  }

  /** The walk so far, in visiting order, for the audit log. */
  trail(): TraceEntry[] {
    return this.frames.map((frame) => ({
      module: frame.module,
      marks: frame.predecessors
        .filter((p) => frame.marks.has(p.result))
        .map((p) => ({
          module: p.module,
          result: p.result,
          verdict: frame.marks.get(p.result) as Verdict,
        })),
    }))
  }
}

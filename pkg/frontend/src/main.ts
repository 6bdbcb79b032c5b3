import { ApiClient } from './api.js'
import { AuditController } from './controller.js'
import { GridView } from './gridview.js'
import { ParamForm } from './params.js'
import { SinksView } from './sinksview.js'
import { SrgView } from './srgview.js'
import { TraceView } from './traceview.js'
import { TreeView } from './treeview.js'

function mustFind(id: string): HTMLElement {
  const el = document.getElementById(id)
  if (!el) {
    throw new Error(`missing element #${id}`)
  }
  return el
}

window.onload = () => {
  const baseInput = mustFind('api-base') as HTMLInputElement
  const csvInput = mustFind('csv-input') as HTMLTextAreaElement
  const notice = mustFind('notice')

  const panes = {
    grid: new GridView(mustFind('grid-pane')),
    tree: new TreeView(mustFind('tree-pane')),
    srg: new SrgView(mustFind('srg-pane')),
    sinks: new SinksView(mustFind('sinks-pane')),
    trace: new TraceView(mustFind('trace-pane')),
  }

  let controller: AuditController | null = null

  const form = new ParamForm(mustFind('param-pane'), (params) => {
    if (controller !== null) {
      controller.applyParams(params).catch(showError)
    }
  })

  function showError(error: unknown) {
    notice.textContent = error instanceof Error ? error.message : String(error)
  }

  function attach(c: AuditController) {
    c.state.subscribe(() => {
      notice.textContent = c.state.notice ?? ''
    })
  }

  mustFind('open-btn').addEventListener('click', () => {
    const api = new ApiClient(baseInput.value.replace(/\/$/, ''))
    controller = new AuditController(api, panes)
    attach(controller)
    controller
      .open(csvInput.value)
      .then(() => controller!.applyParams(form.read()))
      .catch(showError)
  })

  mustFind('classes-btn').addEventListener('click', () => {
    controller?.showClasses().catch(showError)
  })
  mustFind('modules-btn').addEventListener('click', () => {
    controller?.showModules().catch(showError)
  })
  mustFind('refresh-btn').addEventListener('click', () => {
    controller?.refresh().catch(showError)
  })
  mustFind('trace-btn').addEventListener('click', () => {
    const c = controller
    if (c === null) return
    const sel = c.state.selection
    if (sel === null || sel.kind !== 'module') {
      notice.textContent = 'select a module first, then start the walk'
      return
    }
    c.startTrace(sel.id).catch(showError)
  })
  mustFind('dot-btn').addEventListener('click', () => {
    controller?.exportDot().catch(showError)
  })
  mustFind('log-btn').addEventListener('click', () => {
    controller?.saveAuditLog()
  })
}

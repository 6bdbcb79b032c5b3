import type { Level } from './api.js'
import type { FormParams } from './state.js'
import { DEFAULT_PARAMS } from './state.js'

const LEVELS: Level[] = ['copy', 'logical', 'structural']

/**
 * Client-side mirror of the server's parameter rules, so a bad form
 * never leaves the browser.  The server still enforces the same rules.
 */
export function validateParams(p: FormParams): string[] {
  const errors: string[] = []
  if (!Number.isInteger(p.dh) || p.dh < 0) {
    errors.push('d_h must be a non-negative integer')
  }
  if (!Number.isInteger(p.dv) || p.dv < 0) {
    errors.push('d_v must be a non-negative integer')
  }
  if (errors.length > 0) return errors
  if (p.dman === null) {
    if (p.dh + p.dv < 1) {
      errors.push('at least one of d_h and d_v must be positive')
    }
  } else {
    if (!Number.isInteger(p.dman) || p.dman < 1) {
      errors.push('d_man must be a positive integer')
    } else if (p.dman > p.dh + p.dv) {
      errors.push('d_man must not exceed d_h + d_v')
    }
  }
  if (!LEVELS.includes(p.eqStart)) errors.push(`unknown level ${p.eqStart}`)
  if (!LEVELS.includes(p.eqRest)) errors.push(`unknown level ${p.eqRest}`)
  return errors
}

/**
 * The five-parameter form.  Apply validates locally and only calls the
 * handler when the values are acceptable; invalid input renders inline
 * errors and sends nothing.
 */
export class ParamForm {
  private container: HTMLElement
  private onApply: (params: FormParams) => void
  private inputs: { dh: HTMLInputElement; dv: HTMLInputElement; dman: HTMLInputElement }
  private selects: { eqStart: HTMLSelectElement; eqRest: HTMLSelectElement }
  private errorBox: HTMLElement

  constructor(container: HTMLElement, onApply: (params: FormParams) => void) {
    this.container = container
    this.onApply = onApply
    this.inputs = {
      dh: this.numberInput('dh', String(DEFAULT_PARAMS.dh)),
      dv: this.numberInput('dv', String(DEFAULT_PARAMS.dv)),
      dman: this.numberInput('dman', ''),
    }
    this.selects = {
      eqStart: this.levelSelect('eqStart'),
      eqRest: this.levelSelect('eqRest'),
    }
    this.errorBox = document.createElement('ul')
    this.errorBox.className = 'param-errors'
    this.build()
  }

  private numberInput(name: string, value: string): HTMLInputElement {
    const input = document.createElement('input')
    input.type = 'text'
    input.name = name
    input.value = value
    return input
  }

  private levelSelect(name: string): HTMLSelectElement {
    const select = document.createElement('select')
    select.name = name
    for (const level of LEVELS) {
      const option = document.createElement('option')
      option.value = level
      option.textContent = level
      select.appendChild(option)
    }
    return select
  }

  private row(label: string, field: HTMLElement): HTMLElement {
    const row = document.createElement('label')
    row.className = 'param-row'
    const caption = document.createElement('span')
    caption.textContent = label
    row.appendChild(caption)
    row.appendChild(field)
    return row
  }

  private build(): void {
    this.container.appendChild(this.row('d_h', this.inputs.dh))
    this.container.appendChild(this.row('d_v', this.inputs.dv))
    this.container.appendChild(this.row('d_man (blank = d_h + d_v)', this.inputs.dman))
    this.container.appendChild(this.row('start level', this.selects.eqStart))
    this.container.appendChild(this.row('rest level', this.selects.eqRest))
    const apply = document.createElement('button')
    apply.type = 'button'
    apply.textContent = 'Apply'
    apply.className = 'param-apply'
    apply.addEventListener('click', () => this.apply())
    this.container.appendChild(apply)
    this.container.appendChild(this.errorBox)
  }

  /** Current form values; non-numeric text becomes NaN and fails validation. */
  read(): FormParams {
    const num = (input: HTMLInputElement) => {
      const text = input.value.trim()
      return text === '' ? NaN : Number(text)
    }
    const dmanText = this.inputs.dman.value.trim()
    return {
      dh: num(this.inputs.dh),
      dv: num(this.inputs.dv),
      dman: dmanText === '' ? null : Number(dmanText),
      eqStart: this.selects.eqStart.value as Level,
      eqRest: this.selects.eqRest.value as Level,
    }
  }

  set(params: FormParams): void {
    this.inputs.dh.value = String(params.dh)
    this.inputs.dv.value = String(params.dv)
    this.inputs.dman.value = params.dman === null ? '' : String(params.dman)
    this.selects.eqStart.value = params.eqStart
    this.selects.eqRest.value = params.eqRest
  }

  errors(): string[] {
    return Array.from(this.errorBox.children).map((li) => li.textContent ?? '')
  }

  apply(): void {
    const params = this.read()
    const problems = validateParams(params)
    this.errorBox.replaceChildren()
    if (problems.length > 0) {
      for (const text of problems) {
        const item = document.createElement('li')
        item.textContent = text
        this.errorBox.appendChild(item)
      }
      return
    }
    this.onApply(params)
  }
}

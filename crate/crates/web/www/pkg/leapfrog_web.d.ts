/* tslint:disable */
/* eslint-disable */

/**
 * Outcome grid (`grid[s-1][t-1]`), equilibria and axiom report.
 */
export function analyze(doc: string): string;

/**
 * Both deviation rows at `(s, t)`, plus the Nash verdict.
 */
export function deviation_table(doc: string, s: number, t: number): string;

/**
 * Runs a seeded campaign on one thread and returns its machine-format report.
 */
export function falsify(conjecture: string, seed: number, trials: number, m_lo: number, m_hi: number, n_lo: number, n_hi: number, party_mode: string, attraction_mode: string): string;

/**
 * The built-in counterexample as a canonical instance document.
 */
export function paper_example(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly analyze: (a: number, b: number) => [number, number];
    readonly deviation_table: (a: number, b: number, c: number, d: number) => [number, number];
    readonly falsify: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number, l: number) => [number, number];
    readonly paper_example: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;

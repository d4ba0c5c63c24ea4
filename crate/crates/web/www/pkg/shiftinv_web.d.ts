/* tslint:disable */
/* eslint-disable */

/**
 * Predicted and measured rates for each gap, plus the rate-vs-gap chart.
 */
export function gap_sweep(gaps: string, lambda_l: number, lambda_n: number, theta: number, max_outer: number): string;

/**
 * Balancing shift, gap rate, and the three extreme multipliers.
 */
export function predict(lambda_l: number, lambda_l1: number, lambda_n: number, theta: number): string;

/**
 * Runs the Richardson solver with the balancing shift on `diag(spectrum)` and
 * returns the eigenvalue-error chart together with predicted and measured
 * rates.
 */
export function run_richardson(spectrum: string, ell: number, theta: number, max_outer: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly gap_sweep: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly predict: (a: number, b: number, c: number, d: number) => [number, number];
    readonly run_richardson: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
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

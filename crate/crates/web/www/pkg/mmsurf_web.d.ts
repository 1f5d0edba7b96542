/* tslint:disable */
/* eslint-disable */

/**
 * One Makeenko–Migdal comparison on the four-lune figure-eight.
 */
export class MmSummary {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    exact: boolean;
    lhs_stderr: number;
    lhs: number;
    passed: boolean;
    rhs_stderr: number;
    rhs: number;
    sigma: number;
}

export function densityCurve(n: number, t: number, points: number): Float64Array;

export function figureEightMm(n: number, areas: Float64Array, steps: number, seed: bigint): MmSummary;

/**
 * Brownian value `e^{−s/2}` for comparison in the Wilson-loop plot.
 */
export function planarWilson(s: number): number;

export function wilsonVsArea(total: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_mmsummary_exact: (a: number) => number;
    readonly __wbg_get_mmsummary_lhs: (a: number) => number;
    readonly __wbg_get_mmsummary_lhs_stderr: (a: number) => number;
    readonly __wbg_get_mmsummary_passed: (a: number) => number;
    readonly __wbg_get_mmsummary_rhs: (a: number) => number;
    readonly __wbg_get_mmsummary_rhs_stderr: (a: number) => number;
    readonly __wbg_get_mmsummary_sigma: (a: number) => number;
    readonly __wbg_mmsummary_free: (a: number, b: number) => void;
    readonly __wbg_set_mmsummary_exact: (a: number, b: number) => void;
    readonly __wbg_set_mmsummary_lhs: (a: number, b: number) => void;
    readonly __wbg_set_mmsummary_lhs_stderr: (a: number, b: number) => void;
    readonly __wbg_set_mmsummary_passed: (a: number, b: number) => void;
    readonly __wbg_set_mmsummary_rhs: (a: number, b: number) => void;
    readonly __wbg_set_mmsummary_rhs_stderr: (a: number, b: number) => void;
    readonly __wbg_set_mmsummary_sigma: (a: number, b: number) => void;
    readonly densityCurve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly figureEightMm: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
    readonly planarWilson: (a: number) => number;
    readonly wilsonVsArea: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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

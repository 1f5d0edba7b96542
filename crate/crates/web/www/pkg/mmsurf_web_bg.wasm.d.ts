/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_mmsummary_exact: (a: number) => number;
export const __wbg_get_mmsummary_lhs: (a: number) => number;
export const __wbg_get_mmsummary_lhs_stderr: (a: number) => number;
export const __wbg_get_mmsummary_passed: (a: number) => number;
export const __wbg_get_mmsummary_rhs: (a: number) => number;
export const __wbg_get_mmsummary_rhs_stderr: (a: number) => number;
export const __wbg_get_mmsummary_sigma: (a: number) => number;
export const __wbg_mmsummary_free: (a: number, b: number) => void;
export const __wbg_set_mmsummary_exact: (a: number, b: number) => void;
export const __wbg_set_mmsummary_lhs: (a: number, b: number) => void;
export const __wbg_set_mmsummary_lhs_stderr: (a: number, b: number) => void;
export const __wbg_set_mmsummary_passed: (a: number, b: number) => void;
export const __wbg_set_mmsummary_rhs: (a: number, b: number) => void;
export const __wbg_set_mmsummary_rhs_stderr: (a: number, b: number) => void;
export const __wbg_set_mmsummary_sigma: (a: number, b: number) => void;
export const densityCurve: (a: number, b: number, c: number) => [number, number, number, number];
export const figureEightMm: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
export const planarWilson: (a: number) => number;
export const wilsonVsArea: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;

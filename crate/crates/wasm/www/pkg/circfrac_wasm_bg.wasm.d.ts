/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curve_free: (a: number, b: number) => void;
export const __wbg_envelope_free: (a: number, b: number) => void;
export const curve_values: (a: number) => [number, number];
export const curve_ys: (a: number) => [number, number];
export const debyeCurve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number];
export const envelope: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number];
export const envelope_density: (a: number) => [number, number];
export const envelope_histogram: (a: number) => [number, number];
export const samplePaths: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;

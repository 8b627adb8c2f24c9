/* tslint:disable */
/* eslint-disable */

/**
 * A tabulated curve; `values` holds `y² f` for Kratky curves.
 */
export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    values(): Float64Array;
    ys(): Float64Array;
}

/**
 * Density `M_β` on `xs` next to a normalized histogram of `draws` samples
 * over `bins` equal bins of `[0, x_max]`.
 */
export class Envelope {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    density(): Float64Array;
    histogram(): Float64Array;
}

/**
 * Debye function (`linear`, `loglog`) or Kratky curve (`kratky`).
 */
export function debyeCurve(process: string, hurst: number, beta: number | null | undefined, y_min: number, y_max: number, points: number, transform: string): Curve;

export function envelope(beta: number, x_max: number, points: number, bins: number, draws: number, seed: bigint): Envelope;

/**
 * Row-major paths on `grid` equally spaced times of the unit circle.
 */
export function samplePaths(process: string, hurst: number, beta: number | null | undefined, grid: number, paths: number, seed: bigint): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly __wbg_envelope_free: (a: number, b: number) => void;
    readonly curve_values: (a: number) => [number, number];
    readonly curve_ys: (a: number) => [number, number];
    readonly debyeCurve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number];
    readonly envelope: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number];
    readonly envelope_density: (a: number) => [number, number];
    readonly envelope_histogram: (a: number) => [number, number];
    readonly samplePaths: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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

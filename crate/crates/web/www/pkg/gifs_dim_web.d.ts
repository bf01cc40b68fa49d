/* tslint:disable */
/* eslint-disable */

export class DimensionSummary {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly flags: string;
    box_dimension: number;
    box_stderr: number;
    det_lower: number;
    det_upper: number;
    k: number;
    lower: number;
    upper: number;
}

export class Sweep {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    remainder_slope: number;
    s0: number;
    s1: number;
    /**
     * Flat `(eps, s_lower, s_upper, K_min, K_closed_form)` rows, `eps = 0` first.
     */
    readonly rows: Float64Array;
}

/**
 * Chaos-game sample as flat `(x, y, vertex)` triples; only the first two
 * coordinates are kept and one-dimensional systems get `y = 0`.
 */
export function attractor_points(spec: string, points: number, seed: number): Float64Array;

/**
 * Pressure brackets together with a box-counting estimate from `points`
 * chaos-game samples.
 */
export function dimension_summary(spec: string, points: number, seed: number): DimensionSummary;

export function preset(name: string): string;

export function preset_names(): string[];

/**
 * Dimension brackets of the rotation-block family over `eps_start * 2^-j`
 * and the first-order expansion fitted to them.
 */
export function rotation_block_sweep(r: number, eps_start: number, levels: number): Sweep;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_dimensionsummary_free: (a: number, b: number) => void;
    readonly __wbg_get_dimensionsummary_box_dimension: (a: number) => number;
    readonly __wbg_get_dimensionsummary_box_stderr: (a: number) => number;
    readonly __wbg_get_dimensionsummary_det_lower: (a: number) => number;
    readonly __wbg_get_dimensionsummary_det_upper: (a: number) => number;
    readonly __wbg_get_dimensionsummary_k: (a: number) => number;
    readonly __wbg_get_dimensionsummary_lower: (a: number) => number;
    readonly __wbg_get_dimensionsummary_upper: (a: number) => number;
    readonly __wbg_get_sweep_remainder_slope: (a: number) => number;
    readonly __wbg_get_sweep_s0: (a: number) => number;
    readonly __wbg_get_sweep_s1: (a: number) => number;
    readonly __wbg_set_dimensionsummary_box_dimension: (a: number, b: number) => void;
    readonly __wbg_set_dimensionsummary_box_stderr: (a: number, b: number) => void;
    readonly __wbg_set_dimensionsummary_det_lower: (a: number, b: number) => void;
    readonly __wbg_set_dimensionsummary_det_upper: (a: number, b: number) => void;
    readonly __wbg_set_dimensionsummary_k: (a: number, b: number) => void;
    readonly __wbg_set_dimensionsummary_lower: (a: number, b: number) => void;
    readonly __wbg_set_dimensionsummary_upper: (a: number, b: number) => void;
    readonly __wbg_set_sweep_remainder_slope: (a: number, b: number) => void;
    readonly __wbg_set_sweep_s0: (a: number, b: number) => void;
    readonly __wbg_set_sweep_s1: (a: number, b: number) => void;
    readonly __wbg_sweep_free: (a: number, b: number) => void;
    readonly attractor_points: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly dimension_summary: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly dimensionsummary_flags: (a: number) => [number, number];
    readonly preset: (a: number, b: number) => [number, number, number, number];
    readonly preset_names: () => [number, number];
    readonly rotation_block_sweep: (a: number, b: number, c: number) => [number, number, number];
    readonly sweep_rows: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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

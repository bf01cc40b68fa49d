/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_dimensionsummary_free: (a: number, b: number) => void;
export const __wbg_get_dimensionsummary_box_dimension: (a: number) => number;
export const __wbg_get_dimensionsummary_box_stderr: (a: number) => number;
export const __wbg_get_dimensionsummary_det_lower: (a: number) => number;
export const __wbg_get_dimensionsummary_det_upper: (a: number) => number;
export const __wbg_get_dimensionsummary_k: (a: number) => number;
export const __wbg_get_dimensionsummary_lower: (a: number) => number;
export const __wbg_get_dimensionsummary_upper: (a: number) => number;
export const __wbg_get_sweep_remainder_slope: (a: number) => number;
export const __wbg_get_sweep_s0: (a: number) => number;
export const __wbg_get_sweep_s1: (a: number) => number;
export const __wbg_set_dimensionsummary_box_dimension: (a: number, b: number) => void;
export const __wbg_set_dimensionsummary_box_stderr: (a: number, b: number) => void;
export const __wbg_set_dimensionsummary_det_lower: (a: number, b: number) => void;
export const __wbg_set_dimensionsummary_det_upper: (a: number, b: number) => void;
export const __wbg_set_dimensionsummary_k: (a: number, b: number) => void;
export const __wbg_set_dimensionsummary_lower: (a: number, b: number) => void;
export const __wbg_set_dimensionsummary_upper: (a: number, b: number) => void;
export const __wbg_set_sweep_remainder_slope: (a: number, b: number) => void;
export const __wbg_set_sweep_s0: (a: number, b: number) => void;
export const __wbg_set_sweep_s1: (a: number, b: number) => void;
export const __wbg_sweep_free: (a: number, b: number) => void;
export const attractor_points: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const dimension_summary: (a: number, b: number, c: number, d: number) => [number, number, number];
export const dimensionsummary_flags: (a: number) => [number, number];
export const preset: (a: number, b: number) => [number, number, number, number];
export const preset_names: () => [number, number];
export const rotation_block_sweep: (a: number, b: number, c: number) => [number, number, number];
export const sweep_rows: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;

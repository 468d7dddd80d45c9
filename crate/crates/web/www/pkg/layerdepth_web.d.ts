/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    bins(edges: Float64Array): Uint8Array;
    depth(): Uint8Array;
    static fromSvg(text: string): Demo;
    image(): Uint8Array;
    /**
     * Random layered scene of `size`×`size` pixels.
     */
    constructor(seed: number, size: number, layers: number);
    split(t: number, front: boolean): Uint8Array;
    /**
     * JSON with the traced SVG and its fidelity numbers.
     */
    vectorize(trace_epsilon: number, curve_fit: boolean): string;
    readonly height: number;
    readonly layers: number;
    readonly width: number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_bins: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_depth: (a: number) => [number, number];
    readonly demo_fromSvg: (a: number, b: number) => [number, number, number];
    readonly demo_height: (a: number) => number;
    readonly demo_image: (a: number) => [number, number];
    readonly demo_layers: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: number) => [number, number, number];
    readonly demo_split: (a: number, b: number, c: number) => [number, number];
    readonly demo_vectorize: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_width: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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

/* tslint:disable */
/* eslint-disable */

/**
 * Cramér–Rao floors `1/(k F)` for the quantum bound and each receiver on
 * `steps` points of `ρ ∈ [rho_lo, rho_hi]`.
 */
export function estimation_floors(energy: number, n_th: number, n_e: number, probes: number, rho_lo: number, rho_hi: number, steps: number): string;

/**
 * Stein, photon-threshold and heterodyne exponents (nats per probe) on
 * `steps` points of `ρ ∈ [0, rho_max]`.
 */
export function exponent_curves(energy: number, n_th: number, n_e: number, physical: boolean, rho_max: number, steps: number): string;

/**
 * Couplings and channel matrices of one segment; `detuning` is `Ω − Ω_B`.
 */
export function segment_parameters(g_re: number, g_im: number, gamma: number, detuning: number, eta: number, n_th: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly estimation_floors: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly exponent_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly segment_parameters: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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

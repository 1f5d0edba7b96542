/* @ts-self-types="./mmsurf_web.d.ts" */

/**
 * One Makeenko–Migdal comparison on the four-lune figure-eight.
 */
export class MmSummary {
    static __wrap(ptr) {
        const obj = Object.create(MmSummary.prototype);
        obj.__wbg_ptr = ptr;
        MmSummaryFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        MmSummaryFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_mmsummary_free(ptr, 0);
    }
    /**
     * @returns {boolean}
     */
    get exact() {
        const ret = wasm.__wbg_get_mmsummary_exact(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * @returns {number}
     */
    get lhs_stderr() {
        const ret = wasm.__wbg_get_mmsummary_lhs_stderr(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get lhs() {
        const ret = wasm.__wbg_get_mmsummary_lhs(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {boolean}
     */
    get passed() {
        const ret = wasm.__wbg_get_mmsummary_passed(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * @returns {number}
     */
    get rhs_stderr() {
        const ret = wasm.__wbg_get_mmsummary_rhs_stderr(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get rhs() {
        const ret = wasm.__wbg_get_mmsummary_rhs(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get sigma() {
        const ret = wasm.__wbg_get_mmsummary_sigma(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {boolean} arg0
     */
    set exact(arg0) {
        wasm.__wbg_set_mmsummary_exact(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set lhs_stderr(arg0) {
        wasm.__wbg_set_mmsummary_lhs_stderr(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set lhs(arg0) {
        wasm.__wbg_set_mmsummary_lhs(this.__wbg_ptr, arg0);
    }
    /**
     * @param {boolean} arg0
     */
    set passed(arg0) {
        wasm.__wbg_set_mmsummary_passed(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set rhs_stderr(arg0) {
        wasm.__wbg_set_mmsummary_rhs_stderr(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set rhs(arg0) {
        wasm.__wbg_set_mmsummary_rhs(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set sigma(arg0) {
        wasm.__wbg_set_mmsummary_sigma(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) MmSummary.prototype[Symbol.dispose] = MmSummary.prototype.free;

/**
 * @param {number} n
 * @param {number} t
 * @param {number} points
 * @returns {Float64Array}
 */
export function densityCurve(n, t, points) {
    const ret = wasm.densityCurve(n, t, points);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * @param {number} n
 * @param {Float64Array} areas
 * @param {number} steps
 * @param {bigint} seed
 * @returns {MmSummary}
 */
export function figureEightMm(n, areas, steps, seed) {
    const ptr0 = passArrayF64ToWasm0(areas, wasm.__wbindgen_malloc);
    const len0 = WASM_VECTOR_LEN;
    const ret = wasm.figureEightMm(n, ptr0, len0, steps, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return MmSummary.__wrap(ret[0]);
}

/**
 * Brownian value `e^{−s/2}` for comparison in the Wilson-loop plot.
 * @param {number} s
 * @returns {number}
 */
export function planarWilson(s) {
    const ret = wasm.planarWilson(s);
    return ret;
}

/**
 * @param {number} total
 * @param {number} points
 * @returns {Float64Array}
 */
export function wilsonVsArea(total, points) {
    const ret = wasm.wilsonVsArea(total, points);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_generic_0000000000000001: function(arg0, arg1) {
            // Cast intrinsic for `Ref(String) -> Externref`.
            const ret = getStringFromWasm0(arg0, arg1);
            return ret;
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./mmsurf_web_bg.js": import0,
    };
}

const MmSummaryFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_mmsummary_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function passArrayF64ToWasm0(arg, malloc) {
    const ptr = malloc(arg.length * 8, 8) >>> 0;
    getFloat64ArrayMemory0().set(arg, ptr / 8);
    WASM_VECTOR_LEN = arg.length;
    return ptr;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let WASM_VECTOR_LEN = 0;

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('mmsurf_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };

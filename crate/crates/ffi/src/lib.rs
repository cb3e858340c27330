//! C ABI for `vqc-core`.
//!
//! Objects cross the boundary as opaque handles created by `vqc_*_new`
//! style constructors and released with the matching `*_free`. Every
//! fallible call returns a [`VqcStatus`]; on failure the message is kept
//! per thread and can be read with [`vqc_last_error`]. Strings returned
//! by the library must be released with [`vqc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vqc_core::circuit::{init_circuit, EntanglerSpec};
use vqc_core::harness::{run_experiment, ExperimentConfig};
use vqc_core::observables::{
    exact_ground_energy, heisenberg_hamiltonian, hubbard_hamiltonian, HeisenbergParams, HubbardParams, SpinOrdering,
};
use vqc_core::optimizers::make_budget;
use vqc_core::rng::{stream, StreamKind};
use vqc_core::{Circuit, EntanglerKind, Error, Observable, Optimizer};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VqcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Numeric = 4,
    Capability = 5,
    Budget = 6,
    Io = 7,
    Panic = 8,
}

/// Optimizer family used to draw an initial circuit.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VqcGateFamily {
    Rotosolve = 0,
    Fraxis = 1,
    Fqs = 2,
}

/// Opaque Hamiltonian or projector.
pub struct VqcObservable {
    obs: Observable,
    n_qubits: usize,
}

/// Opaque layered circuit.
pub struct VqcCircuit {
    circuit: Circuit,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> VqcStatus {
    match err {
        Error::Config(_) | Error::Json(_) => VqcStatus::Config,
        Error::Numeric(_) | Error::UndefinedMetric(_) => VqcStatus::Numeric,
        Error::Capability(_) => VqcStatus::Capability,
        Error::BudgetExhausted { .. } => VqcStatus::Budget,
        Error::Io(_) | Error::Csv(_) => VqcStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F>(f: F) -> VqcStatus
where
    F: FnOnce() -> Result<(), (VqcStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VqcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("panic: {msg}"));
            VqcStatus::Panic
        }
    }
}

fn core_err(e: Error) -> (VqcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(name: &str) -> (VqcStatus, String) {
    (VqcStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (VqcStatus, String)> {
    if p.is_null() {
        return Err(null_err(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (VqcStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn into_c_string(s: String) -> Result<*mut c_char, (VqcStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (VqcStatus::Numeric, "output contains a NUL byte".to_string()))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vqc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn vqc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluation budget `3 * iters * layers * n_qubits`.
#[no_mangle]
pub extern "C" fn vqc_make_budget(n_qubits: usize, n_layers: usize, rotosolve_iters: usize) -> u64 {
    make_budget(n_qubits, n_layers, rotosolve_iters)
}

/// Open-chain Heisenberg Hamiltonian on `n_sites` spins.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vqc_heisenberg_new(
    n_sites: usize,
    coupling: f64,
    field: f64,
    out: *mut *mut VqcObservable,
) -> VqcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let obs = heisenberg_hamiltonian(&HeisenbergParams {
            n_sites,
            coupling,
            field,
        })
        .map_err(core_err)?;
        *out = Box::into_raw(Box::new(VqcObservable { obs, n_qubits: n_sites }));
        Ok(())
    })
}

/// 1D Fermi-Hubbard chain mapped to `2 * n_sites` qubits. `interleaved`
/// selects the up/down interleaved qubit order instead of spin blocks.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vqc_hubbard_new(
    n_sites: usize,
    hopping: f64,
    interaction: f64,
    interleaved: bool,
    out: *mut *mut VqcObservable,
) -> VqcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let params = HubbardParams {
            n_sites,
            hopping,
            interaction,
            ordering: if interleaved {
                SpinOrdering::Interleaved
            } else {
                SpinOrdering::SpinBlocked
            },
        };
        let obs = hubbard_hamiltonian(&params).map_err(core_err)?;
        *out = Box::into_raw(Box::new(VqcObservable {
            obs,
            n_qubits: params.n_qubits(),
        }));
        Ok(())
    })
}

/// Number of qubits the observable acts on.
///
/// # Safety
/// `obs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vqc_observable_num_qubits(obs: *const VqcObservable) -> usize {
    obs.as_ref().map_or(0, |o| o.n_qubits)
}

/// # Safety
/// `obs` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vqc_observable_free(obs: *mut VqcObservable) {
    if !obs.is_null() {
        drop(Box::from_raw(obs));
    }
}

/// Exact ground energy by dense diagonalization.
///
/// # Safety
/// `obs` must be a live handle and `energy` writable.
#[no_mangle]
pub unsafe extern "C" fn vqc_ground_energy(obs: *const VqcObservable, energy: *mut f64) -> VqcStatus {
    guard(|| {
        let o = obs.as_ref().ok_or_else(|| null_err("obs"))?;
        if energy.is_null() {
            return Err(null_err("energy"));
        }
        *energy = exact_ground_energy(&o.obs, o.n_qubits).map_err(core_err)?.energy;
        Ok(())
    })
}

/// Random brick-entangled (CZ) circuit with the given gate family, drawn
/// from the initialization stream of `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vqc_circuit_init(
    n_qubits: usize,
    n_layers: usize,
    family: VqcGateFamily,
    seed: u64,
    out: *mut *mut VqcCircuit,
) -> VqcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let mode = match family {
            VqcGateFamily::Rotosolve => Optimizer::Rotosolve,
            VqcGateFamily::Fraxis => Optimizer::Fraxis,
            VqcGateFamily::Fqs => Optimizer::Fqs,
        };
        let mut rng = stream(seed, StreamKind::Init);
        let entangler = EntanglerSpec::brick(n_qubits, EntanglerKind::Cz);
        let circuit = init_circuit(n_qubits, n_layers, mode, entangler, false, &mut rng).map_err(core_err)?;
        *out = Box::into_raw(Box::new(VqcCircuit { circuit }));
        Ok(())
    })
}

/// Parses a circuit from its JSON checkpoint form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vqc_circuit_from_json(json: *const c_char, out: *mut *mut VqcCircuit) -> VqcStatus {
    guard(|| {
        let s = read_str(json, "json")?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let circuit = Circuit::from_json(s).map_err(core_err)?;
        *out = Box::into_raw(Box::new(VqcCircuit { circuit }));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vqc_circuit_free(c: *mut VqcCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of single-qubit gates (`n_qubits * n_layers`).
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vqc_circuit_num_gates(c: *const VqcCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.circuit.n_gates())
}

/// Noiseless expectation of `obs` in the circuit's output state.
///
/// # Safety
/// Both handles must be live and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn vqc_circuit_evaluate(
    c: *const VqcCircuit,
    obs: *const VqcObservable,
    value: *mut f64,
) -> VqcStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null_err("circuit"))?;
        let o = obs.as_ref().ok_or_else(|| null_err("obs"))?;
        if value.is_null() {
            return Err(null_err("value"));
        }
        let state = c.circuit.prepare_state().map_err(core_err)?;
        *value = state.exact_expectation(&o.obs).map_err(core_err)?;
        Ok(())
    })
}

/// Serializes the circuit. Free the result with [`vqc_string_free`].
///
/// # Safety
/// `c` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vqc_circuit_to_json(c: *const VqcCircuit, out: *mut *mut c_char) -> VqcStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null_err("circuit"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = into_c_string(c.circuit.to_json())?;
        Ok(())
    })
}

/// Runs an experiment described by a JSON config (same schema as the CLI)
/// and returns the per-strategy summaries as a JSON array. Nothing is
/// written to disk. `jobs == 0` uses the default thread count.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vqc_run_experiment_json(
    config_json: *const c_char,
    jobs: usize,
    out: *mut *mut c_char,
) -> VqcStatus {
    guard(|| {
        let s = read_str(config_json, "config_json")?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let cfg = ExperimentConfig::from_json(s).map_err(core_err)?;
        let jobs = (jobs > 0).then_some(jobs);
        let results = run_experiment(&cfg, jobs).map_err(core_err)?;
        let summaries: Vec<_> = results.iter().map(|r| &r.summary).collect();
        let json = serde_json::to_string(&summaries).map_err(|e| core_err(e.into()))?;
        *out = into_c_string(json)?;
        Ok(())
    })
}

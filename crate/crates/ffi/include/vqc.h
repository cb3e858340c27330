#ifndef VQC_H
#define VQC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum VqcStatus {
  VQC_STATUS_OK = 0,
  VQC_STATUS_NULL_POINTER = 1,
  VQC_STATUS_INVALID_UTF8 = 2,
  VQC_STATUS_CONFIG = 3,
  VQC_STATUS_NUMERIC = 4,
  VQC_STATUS_CAPABILITY = 5,
  VQC_STATUS_BUDGET = 6,
  VQC_STATUS_IO = 7,
  VQC_STATUS_PANIC = 8,
} VqcStatus;

/**
 * Optimizer family used to draw an initial circuit.
 */
typedef enum VqcGateFamily {
  VQC_GATE_FAMILY_ROTOSOLVE = 0,
  VQC_GATE_FAMILY_FRAXIS = 1,
  VQC_GATE_FAMILY_FQS = 2,
} VqcGateFamily;

/**
 * Opaque layered circuit.
 */
typedef struct VqcCircuit VqcCircuit;

/**
 * Opaque Hamiltonian or projector.
 */
typedef struct VqcObservable VqcObservable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *vqc_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void vqc_string_free(char *s);

/**
 * Evaluation budget `3 * iters * layers * n_qubits`.
 */
uint64_t vqc_make_budget(size_t n_qubits, size_t n_layers, size_t rotosolve_iters);

/**
 * Open-chain Heisenberg Hamiltonian on `n_sites` spins.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum VqcStatus vqc_heisenberg_new(size_t n_sites,
                                  double coupling,
                                  double field,
                                  struct VqcObservable **out);

/**
 * 1D Fermi-Hubbard chain mapped to `2 * n_sites` qubits. `interleaved`
 * selects the up/down interleaved qubit order instead of spin blocks.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum VqcStatus vqc_hubbard_new(size_t n_sites,
                               double hopping,
                               double interaction,
                               bool interleaved,
                               struct VqcObservable **out);

/**
 * Number of qubits the observable acts on.
 *
 * # Safety
 * `obs` must be null or a live handle.
 */
size_t vqc_observable_num_qubits(const struct VqcObservable *obs);

/**
 * # Safety
 * `obs` must be null or a handle not yet freed.
 */
void vqc_observable_free(struct VqcObservable *obs);

/**
 * Exact ground energy by dense diagonalization.
 *
 * # Safety
 * `obs` must be a live handle and `energy` writable.
 */
enum VqcStatus vqc_ground_energy(const struct VqcObservable *obs, double *energy);

/**
 * Random brick-entangled (CZ) circuit with the given gate family, drawn
 * from the initialization stream of `seed`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum VqcStatus vqc_circuit_init(size_t n_qubits,
                                size_t n_layers,
                                enum VqcGateFamily family,
                                uint64_t seed,
                                struct VqcCircuit **out);

/**
 * Parses a circuit from its JSON checkpoint form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum VqcStatus vqc_circuit_from_json(const char *json, struct VqcCircuit **out);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void vqc_circuit_free(struct VqcCircuit *c);

/**
 * Number of single-qubit gates (`n_qubits * n_layers`).
 *
 * # Safety
 * `c` must be null or a live handle.
 */
size_t vqc_circuit_num_gates(const struct VqcCircuit *c);

/**
 * Noiseless expectation of `obs` in the circuit's output state.
 *
 * # Safety
 * Both handles must be live and `value` writable.
 */
enum VqcStatus vqc_circuit_evaluate(const struct VqcCircuit *c,
                                    const struct VqcObservable *obs,
                                    double *value);

/**
 * Serializes the circuit. Free the result with [`vqc_string_free`].
 *
 * # Safety
 * `c` must be live and `out` writable.
 */
enum VqcStatus vqc_circuit_to_json(const struct VqcCircuit *c, char **out);

/**
 * Runs an experiment described by a JSON config (same schema as the CLI)
 * and returns the per-strategy summaries as a JSON array. Nothing is
 * written to disk. `jobs == 0` uses the default thread count.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` writable.
 */
enum VqcStatus vqc_run_experiment_json(const char *config_json, size_t jobs, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VQC_H */

#ifndef MQI_H
#define MQI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  MQI_AVERAGE_DETUNING = 0,
  MQI_AVERAGE_PULSE = 1,
} MqiAverage;

typedef enum {
  MQI_GATE_SWAP = 0,
  MQI_GATE_ENTANGLE = 1,
} MqiGate;

typedef enum {
  MQI_STATUS_OK = 0,
  MQI_STATUS_INVALID_ARGUMENT = 1,
  MQI_STATUS_NULL_POINTER = 2,
  MQI_STATUS_NO_CROSSING = 3,
  MQI_STATUS_INCOMPLETE_SCATTERING = 4,
  MQI_STATUS_INTEGRATOR_INSTABILITY = 5,
  MQI_STATUS_DEGENERATE_SCATTERING = 6,
  MQI_STATUS_DEGENERATE_PROTOCOL = 7,
  MQI_STATUS_IO = 8,
  MQI_STATUS_PANIC = 9,
} MqiStatus;

/**
 * Opaque coupling parameters.
 */
typedef struct MqiParams MqiParams;

/**
 * Opaque Gaussian photon spectrum.
 */
typedef struct MqiSpectrum MqiSpectrum;

typedef struct {
  double t_re;
  double t_im;
  double r_re;
  double r_im;
  double excited_re;
  double excited_im;
} MqiAmplitudes;

typedef struct {
  double f_bar;
  double eta_bar;
} MqiMetrics;

typedef struct {
  double concurrence;
  double bell_fidelity;
  double success_prob;
} MqiEntanglement;

typedef struct {
  double p_transmit;
  double p_reflect;
  double p_loss;
  double residual_excitation;
  double abs_t;
  double abs_r;
  bool narrowband;
} MqiDynamics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *mqi_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * NUL-terminated) and returns the full message length in bytes, excluding
 * the terminator. Pass a null `buf` to query the length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes of writes.
 */
size_t mqi_last_error_message(char *buf, size_t len);

/**
 * Creates parameters from explicit rates (units of your choice, all ≥ 0).
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
MqiStatus mqi_params_new(double gamma, double gamma_f, double gamma_b, MqiParams **out);

/**
 * Creates symmetric parameters with γ = 1 and Γ_f = Γ_b = `beta`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
MqiStatus mqi_params_from_beta(double beta, MqiParams **out);

/**
 * # Safety
 * `p` must be null or a handle from `mqi_params_*` not yet freed.
 */
void mqi_params_free(MqiParams *p);

/**
 * Gaussian spectrum; `n_points = 1` gives a monochromatic photon at
 * `center` and ignores `sigma` and `span`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
MqiStatus mqi_spectrum_new(double center,
                           double sigma,
                           size_t n_points,
                           double span,
                           MqiSpectrum **out);

/**
 * # Safety
 * `s` must be null or a handle from `mqi_spectrum_new` not yet freed.
 */
void mqi_spectrum_free(MqiSpectrum *s);

/**
 * Stationary transmission, reflection and excited-state amplitudes.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for one write.
 */
MqiStatus mqi_amplitudes(const MqiParams *p, double delta, MqiAmplitudes *out);

/**
 * Detunings of equal reflection and transmission, positive first.
 *
 * # Safety
 * `p` must be a live handle; `plus` and `minus` valid for one write each.
 */
MqiStatus mqi_equal_split(const MqiParams *p, double *plus, double *minus);

/**
 * Average fidelity and efficiency of the SWAP or √SWAP gate.
 *
 * # Safety
 * `p` and `s` must be live handles and `out` valid for one write.
 */
MqiStatus mqi_gate_metrics(MqiGate kind,
                           const MqiParams *p,
                           const MqiSpectrum *s,
                           MqiAverage avg,
                           MqiMetrics *out);

/**
 * Average fidelity and efficiency of the photon memory.
 *
 * # Safety
 * `p` and `s` must be live handles and `out` valid for one write.
 */
MqiStatus mqi_memory_metrics(const MqiParams *p,
                             const MqiSpectrum *s,
                             MqiAverage avg,
                             MqiMetrics *out);

/**
 * Two-node entanglement distribution; the spectrum must be centered at
 * node A's coupling.
 *
 * # Safety
 * `a`, `b` and `s` must be live handles and `out` valid for one write.
 */
MqiStatus mqi_remote_entanglement(const MqiParams *a,
                                  const MqiParams *b,
                                  const MqiSpectrum *s,
                                  MqiEntanglement *out);

/**
 * Wave-packet simulation at the default grid, step and duration.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for one write.
 */
MqiStatus mqi_simulate(const MqiParams *p, double delta, double sigma_k, MqiDynamics *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MQI_H */

#ifndef URLLC_SIM_H
#define URLLC_SIM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum UrllcStatus {
  URLLC_STATUS_OK = 0,
  URLLC_STATUS_NULL_POINTER = 1,
  URLLC_STATUS_INVALID_UTF8 = 2,
  /**
   * Unknown key, unparsable value or failed validation.
   */
  URLLC_STATUS_CONFIG = 3,
  /**
   * No rate in the bracket meets the target.
   */
  URLLC_STATUS_INFEASIBLE = 4,
  URLLC_STATUS_INSUFFICIENT_SAMPLES = 5,
  /**
   * A KPI with no defined value, e.g. on an empty ledger.
   */
  URLLC_STATUS_KPI = 6,
  URLLC_STATUS_IO = 7,
  URLLC_STATUS_PANIC = 8,
} UrllcStatus;

/**
 * Completed simulation run. Created by [`urllc_run`].
 */
typedef struct UrllcRun UrllcRun;

/**
 * Scenario description. Created by [`urllc_scenario_new`] or
 * [`urllc_scenario_parse`].
 */
typedef struct UrllcScenario UrllcScenario;

/**
 * Packet outcomes of a run.
 */
typedef struct UrllcCounts {
  uint64_t generated;
  uint64_t decoded;
  uint64_t dropped;
  uint64_t in_flight;
} UrllcCounts;

/**
 * Answer of a capacity query.
 */
typedef struct UrllcCapacity {
  /**
   * Largest passing per-UE arrival rate, packets/s.
   */
  double lambda_star;
  /**
   * Offered load at that rate, bit/s.
   */
  double omega_star_bps;
  /**
   * False when the target still held at the top of the bracket.
   */
  bool converged;
  /**
   * Some probe passed above a failing one even after a re-run.
   */
  bool noisy;
  uint32_t probes;
} UrllcCapacity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none failed.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *urllc_last_error(void);

/**
 * Offered load in bit/s of `cells * ues_per_cell` UEs, each sending
 * `payload_bytes` packets at `rate_pps`.
 */
double urllc_offered_load(uint32_t cells,
                          uint32_t ues_per_cell,
                          uint32_t payload_bytes,
                          double rate_pps);

/**
 * Scenario with every key at its default.
 *
 * # Safety
 * `out` must be null or point to writable storage for a handle.
 */
enum UrllcStatus urllc_scenario_new(struct UrllcScenario **out);

/**
 * Scenario from `key = value` text; unspecified keys keep their defaults.
 *
 * # Safety
 * `text` must be null or a nul-terminated string; `out` as for
 * [`urllc_scenario_new`].
 */
enum UrllcStatus urllc_scenario_parse(const char *src, struct UrllcScenario **out);

/**
 * Sets one key. The scenario is left unchanged when the value is rejected.
 *
 * # Safety
 * `scenario` must be null or a live handle; `key` and `value` null or
 * nul-terminated strings.
 */
enum UrllcStatus urllc_scenario_set(struct UrllcScenario *scenario,
                                    const char *key,
                                    const char *value);

/**
 * Copies the scenario hash, nul-terminated, into `buf` of `len` bytes.
 * Fails with `Io` when the buffer is too small.
 *
 * # Safety
 * `scenario` must be null or a live handle; `buf` must hold `len` bytes.
 */
enum UrllcStatus urllc_scenario_hash(const struct UrllcScenario *scenario, char *buf, size_t len);

/**
 * # Safety
 * `scenario` must be null or a handle not yet freed.
 */
void urllc_scenario_free(struct UrllcScenario *scenario);

/**
 * Simulates the scenario to its horizon or packet target.
 *
 * # Safety
 * `scenario` must be null or a live handle; `out` writable.
 */
enum UrllcStatus urllc_run(const struct UrllcScenario *scenario, struct UrllcRun **out);

/**
 * # Safety
 * `run` must be null or a live handle; `out` writable.
 */
enum UrllcStatus urllc_run_counts(const struct UrllcRun *run, struct UrllcCounts *out);

/**
 * Latency met by all but a `rho` fraction of packets, seconds. Lost
 * packets count as infinitely late, so the value may be `inf`.
 *
 * # Safety
 * `run` must be null or a live handle; `out` writable.
 */
enum UrllcStatus urllc_run_outage_latency(const struct UrllcRun *run, double rho, double *out);

/**
 * Decoded bits per second over the measurement window.
 *
 * # Safety
 * `run` must be null or a live handle; `out` writable.
 */
enum UrllcStatus urllc_run_throughput(const struct UrllcRun *run, double *out);

/**
 * Writes the packet ledger as CSV to `path`.
 *
 * # Safety
 * `run` must be null or a live handle; `path` null or nul-terminated.
 */
enum UrllcStatus urllc_run_write_ledger(const struct UrllcRun *run, const char *path);

/**
 * # Safety
 * `run` must be null or a handle not yet freed.
 */
void urllc_run_free(struct UrllcRun *run);

/**
 * Largest offered load whose outage latency at `rho` stays within
 * `phi_s` seconds. A zero `min_packets` keeps the default sample count.
 *
 * # Safety
 * `scenario` must be null or a live handle; `out` writable.
 */
enum UrllcStatus urllc_capacity(const struct UrllcScenario *scenario,
                                double phi_s,
                                double rho,
                                double lambda_lo,
                                double lambda_hi,
                                uint64_t min_packets,
                                struct UrllcCapacity *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* URLLC_SIM_H */

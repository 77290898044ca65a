#pragma once

// Discrete-event simulation of Alice -> Bob (FCFS M/M/1) and the
// Bernoulli-thinned Alice -> Eve copy stream on its own FCFS M/M/1 server.
// Both queues evolve by the Lindley recursion
//   departure_i = max(arrival_i, departure_{i-1}) + service_i
// and the receivers' ages follow the unit-slope sawtooth that resets to the
// delivered packet's system time.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "aoi/core.hpp"

namespace aoi {

struct SimConfig {
  SystemParams params;
  std::uint64_t num_arrivals = 1'000'000;
  double warmup_fraction = 0.1;
  std::uint64_t seed = 0;
  int num_replications = 10;
  // Test hook: Eve's service time for a captured packet is Bob's draw for
  // the same packet instead of an independent one.
  bool mirror_bob_service = false;

  /// Throws DomainError on out-of-range fields.
  void validate() const;
};

/// One age reset at a receiver.
struct AgeSample {
  double delivery_time;
  double age_after_reset;   // delivery_time - generation_time
  double age_before_reset;
};

struct AgeOrigin {
  double time = 0.0;
  double age = 0.0;
};

/// Piecewise-linear age process: starts at `origin` (if any) and jumps down
/// at each sample, growing with unit slope in between.
struct AgeTrace {
  std::optional<AgeOrigin> origin;
  std::vector<AgeSample> samples;

  /// Age at time t, or nullopt before the trace is defined.
  std::optional<double> age_at(double t) const;

  /// Records delivery of a packet generated at `generation_time`. Packets
  /// no fresher than the current state leave the age untouched; returns
  /// whether the age was reset.
  bool deliver(double delivery_time, double generation_time);
};

/// Exact area under the age process over [horizon_start, horizon_end].
/// Throws EmptyTrace if the age is undefined at horizon_start, DomainError
/// if the horizon is empty.
double age_integral(const AgeTrace& trace, double horizon_start, double horizon_end);

struct ReplicationResult {
  double delta_b_hat = 0.0;
  std::optional<double> delta_e_hat;
  double horizon_start = 0.0;
  double horizon_end = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t captured = 0;
  std::uint64_t bob_deliveries = 0;  // inside the post-warmup window
  std::uint64_t eve_deliveries = 0;
  double mean_system_time_b = 0.0;   // over post-warmup departures
};

struct SimResult {
  double delta_b_hat = 0.0;
  std::optional<double> delta_e_hat;  // absent without an eavesdropper
  double ci_halfwidth_b = 0.0;        // 95% normal approximation; NaN for one replication
  double ci_halfwidth_e = 0.0;
  double eavesdropped_fraction = 0.0;
  double sim_horizon = 0.0;           // mean post-warmup window length
  double mean_system_time_b = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t captured = 0;
  std::uint64_t bob_deliveries = 0;
  std::uint64_t eve_deliveries = 0;
  std::vector<ReplicationResult> replications;
};

/// Full age traces of one replication.
struct ReplicationTraces {
  AgeTrace bob;
  AgeTrace eve;
  double horizon_end = 0.0;
};

/// Simulates replication `index`; its random streams depend only on
/// (config.seed, index). Throws DegenerateRun when a receiver that should
/// see traffic has fewer than two deliveries after warmup.
ReplicationResult run_replication(const SimConfig& config, int index);

ReplicationTraces replication_traces(const SimConfig& config, int index);

/// Runs all replications (concurrently) and merges them by index.
SimResult run(const SimConfig& config);

enum class EventKind { arrival, bob_departure, eve_departure };

std::string_view to_string(EventKind kind);

struct TraceEvent {
  double event_time;
  EventKind kind;
  std::uint64_t packet_id;
  double generation_time;
};

/// Time-ordered event log of replication `index`.
std::vector<TraceEvent> event_trace(const SimConfig& config, int index = 0);

/// CSV with header event_time,event_kind,packet_id,generation_time.
void write_event_trace_csv(std::ostream& out, std::span<const TraceEvent> events);

}  // namespace aoi

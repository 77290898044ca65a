#include "aoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "aoi/errors.hpp"
#include "aoi/format.hpp"

namespace aoi {
namespace {

constexpr double kZ95 = 1.959963984540054;

enum class Stream : std::uint32_t { arrivals = 1, bob_service = 2, eve = 3 };

std::mt19937_64 make_stream(std::uint64_t seed, int replication, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

struct Packet {
  std::uint64_t id;
  double generation_time;
  double bob_departure;
  std::optional<double> eve_departure;
};

// Drives the two Lindley recursions and hands each packet to `visit` in
// arrival order.
template <typename Visitor>
void simulate_packets(const SimConfig& config, int replication, Visitor&& visit) {
  const SystemParams& p = config.params;
  auto arrivals_rng = make_stream(config.seed, replication, Stream::arrivals);
  auto bob_rng = make_stream(config.seed, replication, Stream::bob_service);
  auto eve_rng = make_stream(config.seed, replication, Stream::eve);

  std::exponential_distribution<double> interarrival(p.lambda());
  std::exponential_distribution<double> service(p.mu());
  std::bernoulli_distribution capture(p.beta());

  double t = 0.0;
  double bob_last = 0.0;
  double eve_last = 0.0;
  for (std::uint64_t i = 0; i < config.num_arrivals; ++i) {
    t += interarrival(arrivals_rng);
    const double bob_service = service(bob_rng);
    bob_last = std::max(t, bob_last) + bob_service;

    Packet packet{i, t, bob_last, std::nullopt};
    if (p.beta() > 0.0 && capture(eve_rng)) {
      const double eve_service = config.mirror_bob_service ? bob_service : service(eve_rng);
      eve_last = std::max(t, eve_last) + eve_service;
      packet.eve_departure = eve_last;
    }
    visit(packet);
  }
}

std::uint64_t count_in_window(const AgeTrace& trace, double start, double end) {
  const auto lo = std::lower_bound(trace.samples.begin(), trace.samples.end(), start,
                                   [](const AgeSample& s, double t) { return s.delivery_time < t; });
  const auto hi = std::upper_bound(trace.samples.begin(), trace.samples.end(), end,
                                   [](double t, const AgeSample& s) { return t < s.delivery_time; });
  return hi > lo ? static_cast<std::uint64_t>(hi - lo) : 0;
}

double ci_halfwidth(const std::vector<double>& xs) {
  if (xs.size() < 2) return std::nan("");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return kZ95 * sd / std::sqrt(static_cast<double>(xs.size()));
}

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

void SimConfig::validate() const {
  if (num_arrivals < 1) {
    throw DomainError("num_arrivals must be at least 1");
  }
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 0.5)) {
    throw DomainError("warmup fraction must lie in [0, 0.5), got " + format_double(warmup_fraction));
  }
  if (num_replications < 1) {
    throw DomainError("num_replications must be at least 1");
  }
}

std::optional<double> AgeTrace::age_at(double t) const {
  const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                   [](double x, const AgeSample& s) { return x < s.delivery_time; });
  if (it != samples.begin()) {
    const AgeSample& s = *std::prev(it);
    return s.age_after_reset + (t - s.delivery_time);
  }
  if (origin && t >= origin->time) {
    return origin->age + (t - origin->time);
  }
  return std::nullopt;
}

bool AgeTrace::deliver(double delivery_time, double generation_time) {
  const double fresh = delivery_time - generation_time;
  const std::optional<double> current = age_at(delivery_time);
  if (current && !(fresh < *current)) {
    return false;
  }
  if (!samples.empty() && samples.back().delivery_time == delivery_time) {
    samples.back().age_after_reset = fresh;
    return true;
  }
  samples.push_back({delivery_time, fresh, current.value_or(fresh)});
  return true;
}

double age_integral(const AgeTrace& trace, double horizon_start, double horizon_end) {
  if (!(horizon_start < horizon_end)) {
    throw DomainError("age integral needs horizon_start < horizon_end");
  }
  if (!trace.age_at(horizon_start)) {
    throw EmptyTrace("age process is undefined at the start of the horizon");
  }

  // Reset points: the origin followed by every delivery.
  auto it = std::upper_bound(trace.samples.begin(), trace.samples.end(), horizon_start,
                             [](double x, const AgeSample& s) { return x < s.delivery_time; });
  double seg_time;
  double seg_age;
  if (it == trace.samples.begin()) {
    seg_time = trace.origin->time;
    seg_age = trace.origin->age;
  } else {
    seg_time = std::prev(it)->delivery_time;
    seg_age = std::prev(it)->age_after_reset;
  }

  double area = 0.0;
  double cursor = horizon_start;
  while (cursor < horizon_end) {
    const double next = it == trace.samples.end() ? horizon_end : std::min(it->delivery_time, horizon_end);
    const double len = next - cursor;
    area += len * (seg_age + (cursor - seg_time)) + 0.5 * len * len;
    cursor = next;
    if (it == trace.samples.end()) break;
    seg_time = it->delivery_time;
    seg_age = it->age_after_reset;
    ++it;
  }
  return area;
}

ReplicationTraces replication_traces(const SimConfig& config, int index) {
  config.validate();
  ReplicationTraces out;
  out.bob.origin = AgeOrigin{};
  out.eve.origin = AgeOrigin{};
  out.bob.samples.reserve(config.num_arrivals);
  simulate_packets(config, index, [&](const Packet& p) {
    out.bob.deliver(p.bob_departure, p.generation_time);
    if (p.eve_departure) {
      out.eve.deliver(*p.eve_departure, p.generation_time);
    }
    out.horizon_end = p.bob_departure;
  });
  return out;
}

ReplicationResult run_replication(const SimConfig& config, int index) {
  config.validate();
  ReplicationResult r;
  AgeTrace bob{AgeOrigin{}, {}};
  AgeTrace eve{AgeOrigin{}, {}};
  bob.samples.reserve(config.num_arrivals);
  std::vector<std::pair<double, double>> system_times;  // (departure, system time)
  system_times.reserve(config.num_arrivals);

  simulate_packets(config, index, [&](const Packet& p) {
    ++r.arrivals;
    bob.deliver(p.bob_departure, p.generation_time);
    system_times.emplace_back(p.bob_departure, p.bob_departure - p.generation_time);
    if (p.eve_departure) {
      ++r.captured;
      eve.deliver(*p.eve_departure, p.generation_time);
    }
  });

  // The horizon closes at Bob's last departure; Eve's later deliveries fall outside.
  r.horizon_end = bob.samples.back().delivery_time;
  r.horizon_start = config.warmup_fraction * r.horizon_end;
  const double window = r.horizon_end - r.horizon_start;

  r.bob_deliveries = count_in_window(bob, r.horizon_start, r.horizon_end);
  if (r.bob_deliveries < 2) {
    throw DegenerateRun("replication " + std::to_string(index) + ": fewer than two deliveries at Bob after warmup");
  }
  r.delta_b_hat = age_integral(bob, r.horizon_start, r.horizon_end) / window;

  double st_sum = 0.0;
  std::uint64_t st_n = 0;
  for (const auto& [departure, st] : system_times) {
    if (departure >= r.horizon_start) {
      st_sum += st;
      ++st_n;
    }
  }
  r.mean_system_time_b = st_sum / static_cast<double>(st_n);

  if (config.params.beta() > 0.0) {
    r.eve_deliveries = count_in_window(eve, r.horizon_start, r.horizon_end);
    if (r.eve_deliveries < 2) {
      throw DegenerateRun("replication " + std::to_string(index) + ": fewer than two deliveries at Eve after warmup");
    }
    r.delta_e_hat = age_integral(eve, r.horizon_start, r.horizon_end) / window;
  }
  return r;
}

SimResult run(const SimConfig& config) {
  config.validate();
  const int reps = config.num_replications;
  std::vector<std::optional<ReplicationResult>> slots(reps);
  std::vector<std::exception_ptr> errors(reps);

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(reps)));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < reps; i += workers) {
          try {
            slots[i] = run_replication(config, i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SimResult result;
  std::vector<double> b_hats;
  std::vector<double> e_hats;
  std::vector<double> windows;
  std::vector<double> system_times;
  for (auto& slot : slots) {
    ReplicationResult& r = *slot;
    b_hats.push_back(r.delta_b_hat);
    if (r.delta_e_hat) e_hats.push_back(*r.delta_e_hat);
    windows.push_back(r.horizon_end - r.horizon_start);
    system_times.push_back(r.mean_system_time_b);
    result.arrivals += r.arrivals;
    result.captured += r.captured;
    result.bob_deliveries += r.bob_deliveries;
    result.eve_deliveries += r.eve_deliveries;
    result.replications.push_back(std::move(r));
  }

  result.delta_b_hat = mean_of(b_hats);
  result.ci_halfwidth_b = ci_halfwidth(b_hats);
  if (!e_hats.empty()) {
    result.delta_e_hat = mean_of(e_hats);
    result.ci_halfwidth_e = ci_halfwidth(e_hats);
  } else {
    result.ci_halfwidth_e = std::nan("");
  }
  result.eavesdropped_fraction =
      static_cast<double>(result.captured) / static_cast<double>(result.arrivals);
  result.sim_horizon = mean_of(windows);
  result.mean_system_time_b = mean_of(system_times);
  return result;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::arrival: return "arrival";
    case EventKind::bob_departure: return "bob_departure";
    case EventKind::eve_departure: return "eve_departure";
  }
  return "unknown";
}

std::vector<TraceEvent> event_trace(const SimConfig& config, int index) {
  config.validate();
  std::vector<TraceEvent> events;
  simulate_packets(config, index, [&](const Packet& p) {
    events.push_back({p.generation_time, EventKind::arrival, p.id, p.generation_time});
    events.push_back({p.bob_departure, EventKind::bob_departure, p.id, p.generation_time});
    if (p.eve_departure) {
      events.push_back({*p.eve_departure, EventKind::eve_departure, p.id, p.generation_time});
    }
  });
  std::stable_sort(events.begin(), events.end(), [](const TraceEvent& x, const TraceEvent& y) {
    if (x.event_time != y.event_time) return x.event_time < y.event_time;
    if (x.kind != y.kind) return x.kind < y.kind;
    return x.packet_id < y.packet_id;
  });
  return events;
}

void write_event_trace_csv(std::ostream& out, std::span<const TraceEvent> events) {
  out << "event_time,event_kind,packet_id,generation_time\n";
  for (const TraceEvent& e : events) {
    out << format_double(e.event_time) << ',' << to_string(e.kind) << ',' << e.packet_id << ','
        << format_double(e.generation_time) << '\n';
  }
}

}  // namespace aoi

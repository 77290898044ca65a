#include "aoi/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>

#include "CLI11.hpp"
#include "aoi/core.hpp"
#include "aoi/errors.hpp"
#include "aoi/experiments.hpp"
#include "aoi/format.hpp"
#include "aoi/optimizer.hpp"
#include "aoi/simulator.hpp"

namespace aoi::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric flags bypass CLI11's conversions so parsing never depends on the
// C locale.
CLI::Option* add_number(CLI::App* app, const std::string& name, double& target, const std::string& desc) {
  return app->add_option_function<std::string>(
      name,
      [&target, name](const std::string& s) {
        try {
          target = parse_double(s);
        } catch (const std::invalid_argument&) {
          throw CLI::ConversionError(s, name);
        }
      },
      desc);
}

template <typename Int>
CLI::Option* add_integer(CLI::App* app, const std::string& name, Int& target, const std::string& desc) {
  return app->add_option_function<std::string>(
      name,
      [&target, name](const std::string& s) {
        Int value{};
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
          throw CLI::ConversionError(s, name);
        }
        target = value;
      },
      desc);
}

CLI::Option* add_number_list(CLI::App* app, const std::string& name, std::vector<double>& target,
                             const std::string& desc) {
  return app
      ->add_option_function<std::vector<std::string>>(
          name,
          [&target, name](const std::vector<std::string>& items) {
            target.clear();
            for (const auto& s : items) {
              try {
                target.push_back(parse_double(s));
              } catch (const std::invalid_argument&) {
                throw CLI::ConversionError(s, name);
              }
            }
          },
          desc)
      ->delimiter(',');
}

struct Settings {
  double rho = kNaN;
  double mu = 1.0;
  double beta = 0.0;
  double a = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t arrivals = 1'000'000;
  int replications = 10;
  double warmup = 0.1;
  std::string format = "human";
  std::string out_path;
  std::string trace_path;

  std::string figure = "fig1";
  double rho_min = 0.01, rho_max = 0.99, rho_step = 0.005;
  double beta_min = 0.05, beta_max = 1.0, beta_step = 0.05;
  double a_min = 1e-4, a_max = 1e2, a_step = kNaN;
  int a_points = 50;
  std::vector<double> beta_list;
  std::vector<double> a_list;
};

Table single_row(const std::string& name, std::vector<std::pair<std::string, Cell>> fields) {
  Table t;
  t.name = name;
  t.rows.emplace_back();
  for (auto& [k, v] : fields) {
    t.columns.push_back(k);
    t.rows.back().push_back(std::move(v));
  }
  return t;
}

void write_human(const Table& table, std::ostream& out) {
  std::size_t width = 0;
  for (const auto& c : table.columns) width = std::max(width, c.size());
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << table.columns[i] << std::string(width - table.columns[i].size(), ' ') << " = ";
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_double(v);
            } else if constexpr (std::is_same_v<T, bool>) {
              out << (v ? "true" : "false");
            } else {
              out << v;
            }
          },
          row[i]);
      out << '\n';
    }
  }
}

void write_table(const Table& table, const std::string& format, std::ostream& out) {
  if (format == "json") {
    write_jsonl(table, out);
  } else if (format == "csv") {
    write_csv(table, out);
  } else {
    write_human(table, out);
  }
}

// Writes to --out when given, otherwise to the command's stdout.
void emit(const Settings& s, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (s.out_path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(s.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + s.out_path);
  body(file);
}

void require_rho(const Settings& s) {
  if (std::isnan(s.rho)) throw CLI::RequiredError("--rho");
}

int do_analyze(const Settings& s, std::ostream& out) {
  require_rho(s);
  const SystemParams params = SystemParams::from_load(s.rho, s.mu, s.beta);
  const TradeoffWeight w(s.a);
  const AoiPair pair = aoi_pair(params);
  const auto [u1, u2] = utilities(params);
  const double f = params.beta() > 0.0 ? bergson_objective(params, w) : kNaN;
  const Table t = single_row("analyze", {{"rho", params.rho()},
                                         {"mu", params.mu()},
                                         {"beta", params.beta()},
                                         {"a", w.a()},
                                         {"lambda", params.lambda()},
                                         {"delta_b", pair.delta_b},
                                         {"delta_e", pair.delta_e},
                                         {"u1", u1},
                                         {"u2", u2},
                                         {"objective", f}});
  emit(s, out, [&](std::ostream& o) { write_table(t, s.format, o); });
  return kOk;
}

int do_optimize(const Settings& s, std::ostream& out) {
  const OptimResult r = maximize_objective(s.beta, TradeoffWeight(s.a), s.mu);
  const Table t = single_row("optimize", {{"beta", s.beta},
                                          {"a", s.a},
                                          {"mu", s.mu},
                                          {"rho_star", r.rho_star},
                                          {"objective_at_star", r.objective_at_star},
                                          {"objective_kind", std::string(s.beta > 0.0 ? "welfare" : "aoi")},
                                          {"iterations", static_cast<std::int64_t>(r.iterations)},
                                          {"converged", r.converged},
                                          {"bracket_lo", r.bracket.first},
                                          {"bracket_hi", r.bracket.second}});
  emit(s, out, [&](std::ostream& o) { write_table(t, s.format, o); });
  if (!r.converged) throw NonConvergence("optimizer did not converge");
  return kOk;
}

int do_asymptote(const Settings& s, std::ostream& out) {
  const TradeoffWeight w(s.a);
  const AsymptoteResult r = asymptotic_root(w);
  const Table t = single_row("asymptote", {{"a", w.a()}, {"rho_tilde", r.rho_tilde}, {"residual", r.residual}});
  emit(s, out, [&](std::ostream& o) { write_table(t, s.format, o); });
  return kOk;
}

int do_simulate(const Settings& s, std::ostream& out) {
  require_rho(s);
  SimConfig config{SystemParams::from_load(s.rho, s.mu, s.beta), s.arrivals, s.warmup, s.seed, s.replications};
  config.validate();
  if (!s.trace_path.empty()) {
    std::ofstream trace(s.trace_path, std::ios::binary);
    if (!trace) throw std::runtime_error("cannot open " + s.trace_path);
    write_event_trace_csv(trace, event_trace(config, 0));
  }
  const SimResult r = run(config);
  const AoiPair theory = aoi_pair(config.params);
  const Table t = single_row(
      "simulate", {{"rho", config.params.rho()},
                   {"mu", config.params.mu()},
                   {"beta", config.params.beta()},
                   {"seed", static_cast<std::int64_t>(s.seed)},
                   {"arrivals", static_cast<std::int64_t>(s.arrivals)},
                   {"replications", static_cast<std::int64_t>(s.replications)},
                   {"warmup", s.warmup},
                   {"delta_b_hat", r.delta_b_hat},
                   {"ci_halfwidth_b", r.ci_halfwidth_b},
                   {"delta_b_theory", theory.delta_b},
                   {"delta_e_hat", r.delta_e_hat.value_or(kNaN)},
                   {"ci_halfwidth_e", r.ci_halfwidth_e},
                   {"delta_e_theory", theory.delta_e},
                   {"eavesdropped_fraction", r.eavesdropped_fraction},
                   {"sim_horizon", r.sim_horizon},
                   {"mean_system_time_b", r.mean_system_time_b},
                   {"captured", static_cast<std::int64_t>(r.captured)},
                   {"bob_deliveries", static_cast<std::int64_t>(r.bob_deliveries)},
                   {"eve_deliveries", static_cast<std::int64_t>(r.eve_deliveries)}});
  emit(s, out, [&](std::ostream& o) { write_table(t, s.format, o); });
  return kOk;
}

SweepGrid sweep_grid(const Settings& s) {
  SweepGrid grid;
  grid.output_kind = parse_output_kind(s.figure);
  grid.mu = s.mu;
  grid.rho_values = linear_grid(s.rho_min, s.rho_max, s.rho_step);
  grid.beta_values = s.beta_list.empty() ? linear_grid(s.beta_min, s.beta_max, s.beta_step) : s.beta_list;
  if (grid.output_kind == OutputKind::objective_curve) {
    grid.a_values = {s.a};
  } else if (!s.a_list.empty()) {
    grid.a_values = s.a_list;
  } else if (!std::isnan(s.a_step)) {
    grid.a_values = linear_grid(s.a_min, s.a_max, s.a_step);
  } else {
    grid.a_values = log_grid(s.a_min, s.a_max, s.a_points);
  }
  return grid;
}

int do_sweep(const Settings& s, std::ostream& out) {
  const SweepGrid grid = sweep_grid(s);
  const std::vector<Table> tables = run_sweep(grid);
  const std::string ext = s.format == "json" ? "jsonl" : "csv";
  auto write = [&](const Table& t, std::ostream& o) {
    if (s.format == "json") {
      write_jsonl(t, o);
    } else {
      write_csv(t, o);
    }
  };

  if (s.out_path.empty()) {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (i) out << (s.format == "json" ? "" : "\r\n");
      write(tables[i], out);
    }
  } else {
    std::filesystem::create_directories(s.out_path);
    for (const Table& t : tables) {
      const auto path = std::filesystem::path(s.out_path) / (t.name + "_" + grid.hash() + "." + ext);
      std::ofstream file(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open " + path.string());
      write(t, file);
      out << path.string() << '\n';
    }
  }

  for (const Table& t : tables) {
    const std::size_t status = t.column_index("status");
    for (const auto& row : t.rows) {
      if (std::get<std::string>(row[status]) != "ok") {
        throw NonConvergence("sweep contains failed cells");
      }
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Age of Information under eavesdropping: analysis, optimization and simulation", "aoi-eve"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    add_number(sub, "--mu", s.mu, "Service rate (default 1)");
    sub->add_option("--format", s.format, "Output format")
        ->check(CLI::IsMember({"human", "json", "csv"}))
        ->capture_default_str();
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Closed-form AoI at Bob and Eve, utilities and objective");
  add_number(analyze, "--rho", s.rho, "Offered load in (0,1)");
  add_number(analyze, "--beta", s.beta, "Capture probability in [0,1] (default 0)");
  add_number(analyze, "--a", s.a, "Trade-off weight a > 0 (default 1)");
  analyze->add_option("--out", s.out_path, "Write the report to this file");
  common(analyze);

  CLI::App* optimize = app.add_subcommand("optimize", "Load maximizing the welfare objective");
  add_number(optimize, "--beta", s.beta, "Capture probability in [0,1] (default 0)");
  add_number(optimize, "--a", s.a, "Trade-off weight a > 0 (default 1)");
  optimize->add_option("--out", s.out_path, "Write the report to this file");
  common(optimize);

  CLI::App* asymptote = app.add_subcommand("asymptote", "Optimal load in the limit beta -> 0+");
  add_number(asymptote, "--a", s.a, "Trade-off weight a > 0 (default 1)");
  asymptote->add_option("--out", s.out_path, "Write the report to this file");
  common(asymptote);

  CLI::App* simulate = app.add_subcommand("simulate", "Discrete-event estimate of Bob's and Eve's average AoI");
  add_number(simulate, "--rho", s.rho, "Offered load in (0,1)");
  add_number(simulate, "--beta", s.beta, "Capture probability in [0,1] (default 0)");
  add_integer(simulate, "--seed", s.seed, "RNG seed (default 0)");
  add_integer(simulate, "--arrivals", s.arrivals, "Arrivals per replication (default 1000000)");
  add_integer(simulate, "--replications", s.replications, "Independent replications (default 10)");
  add_number(simulate, "--warmup", s.warmup, "Warmup fraction of the horizon in [0,0.5) (default 0.1)");
  simulate->add_option("--out", s.out_path, "Write the report to this file");
  simulate->add_option("--trace", s.trace_path, "Write the event trace of replication 0 as CSV");
  common(simulate);

  CLI::App* sweep = app.add_subcommand("sweep", "Figure data tables (fig1..fig4, asymptote)");
  sweep->add_option("--figure", s.figure, "Table to produce")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "asymptote"}))
      ->capture_default_str();
  add_number(sweep, "--a", s.a, "Trade-off weight for fig1 (default 1)");
  add_number(sweep, "--grid-rho-min", s.rho_min, "Load grid start (default 0.01)");
  add_number(sweep, "--grid-rho-max", s.rho_max, "Load grid end (default 0.99)");
  add_number(sweep, "--grid-rho-step", s.rho_step, "Load grid step (default 0.005)");
  add_number(sweep, "--grid-beta-min", s.beta_min, "Capture grid start (default 0.05)");
  add_number(sweep, "--grid-beta-max", s.beta_max, "Capture grid end (default 1)");
  add_number(sweep, "--grid-beta-step", s.beta_step, "Capture grid step (default 0.05)");
  add_number(sweep, "--grid-a-min", s.a_min, "Weight grid start (default 1e-4)");
  add_number(sweep, "--grid-a-max", s.a_max, "Weight grid end (default 100)");
  add_number(sweep, "--grid-a-step", s.a_step, "Linear weight grid step (default: log spacing)");
  add_integer(sweep, "--grid-a-points", s.a_points, "Log-spaced weight grid size (default 50)");
  add_number_list(sweep, "--beta-list", s.beta_list, "Explicit comma-separated capture values");
  add_number_list(sweep, "--a-list", s.a_list, "Explicit comma-separated weight values");
  sweep->add_option("--out", s.out_path, "Directory for <figure>_<grid-hash> files");
  common(sweep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (analyze->parsed()) return do_analyze(s, out);
    if (optimize->parsed()) return do_optimize(s, out);
    if (asymptote->parsed()) return do_asymptote(s, out);
    if (simulate->parsed()) return do_simulate(s, out);
    if (sweep->parsed()) return do_sweep(s, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const DegenerateRun& e) {
    err << "degenerate simulation: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace aoi::cli

// swaporder: evaluate, search, allocate, estimate and simulate entanglement
// swapping orders on repeater paths described by JSON documents.
//
// Exit codes: 0 ok, 1 other error, 2 schema/usage, 3 invalid order,
// 4 budget exceeded, 5 infeasible budget.

#include "swaporder/allocation.hpp"
#include "swaporder/document.hpp"
#include "swaporder/errors.hpp"
#include "swaporder/estimator.hpp"
#include "swaporder/montecarlo.hpp"
#include "swaporder/order_search.hpp"
#include "swaporder/swap_engine.hpp"

#include <CLI11.hpp>

#if __has_include(<json.hpp>)
#include <json.hpp>
#else
#include <nlohmann/json.hpp>
#endif

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace swaporder;
using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kOtherError = 1,
  kSchemaError = 2,
  kOrderError = 3,
  kBudgetError = 4,
  kInfeasible = 5,
};

struct CommonOptions {
  std::string document;
  std::string mode = "exact";
  double epsilon = 1e-5;
  int precision = 2;
  unsigned jobs = 1;
  bool json_output = false;
  std::string dump;
};

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fixed(double value, int precision) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::fixed << std::setprecision(precision) << value;
  return out.str();
}

// Shortest text that reads back to the same double.
std::string full(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

void add_common(CLI::App& cmd, CommonOptions& opts) {
  cmd.add_option("document", opts.document, "JSON path document")->required();
  cmd.add_option("--mode", opts.mode, "exact | tail | normal | hybrid")
      ->check(CLI::IsMember({"exact", "tail", "normal", "hybrid"}))
      ->capture_default_str();
  cmd.add_option("--epsilon", opts.epsilon, "tail truncation mass for tail/hybrid modes")
      ->capture_default_str();
  cmd.add_option("--precision", opts.precision, "decimals in human-readable output")
      ->capture_default_str();
  cmd.add_option("--jobs", opts.jobs, "worker threads for brute force and simulation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_flag("--json", opts.json_output, "machine-readable JSON output");
  cmd.add_option("--dump", opts.dump, "write the parsed document back as JSON ('-' = stdout)");
}

PathDocument load(const CommonOptions& opts) {
  PathDocument doc = load_document(opts.document);
  if (!opts.dump.empty()) {
    const std::string text = dump_document(doc);
    if (opts.dump == "-") {
      std::cout << text;
    } else {
      std::ofstream out(opts.dump);
      if (!out) {
        throw Error("cannot write " + opts.dump);
      }
      out << text;
    }
  }
  return doc;
}

json order_json(const SwapOrder& order) { return order.sequence; }

json distribution_json(const Distribution& dist) {
  if (const auto* pmf = std::get_if<Pmf>(&dist)) {
    return {{"kind", "pmf"},
            {"support", pmf->support()},
            {"mean", pmf->mean()},
            {"variance", pmf->variance()},
            {"p_zero", (*pmf)[0]}};
  }
  const auto& normal = std::get<NormalParams>(dist);
  return {{"kind", "normal"}, {"mean", normal.mean}, {"variance", normal.variance}};
}

std::string distribution_summary(const Distribution& dist, int precision) {
  if (const auto* pmf = std::get_if<Pmf>(&dist)) {
    return "pmf support " + std::to_string(pmf->support()) + ", P(0) " +
           fixed((*pmf)[0], precision + 2) + ", mean " + fixed(pmf->mean(), precision) +
           ", variance " + fixed(pmf->variance(), precision);
  }
  const auto& normal = std::get<NormalParams>(dist);
  return "normal mean " + fixed(normal.mean, precision) + ", variance " +
         fixed(normal.variance, precision);
}

int cmd_eval(const CommonOptions& opts, const std::string& order_text) {
  const PathDocument doc = load(opts);
  const PathSpec& path = doc.logical();
  const SwapOrder order = SwapOrder::parse(order_text);
  const EvalMode mode = EvalMode::parse(opts.mode, opts.epsilon);
  const Stopwatch clock;
  const EntResult result = ent(path, order, mode);
  const double ms = clock.elapsed_ms();
  if (opts.json_output) {
    std::cout << json{{"score", result.score},
                      {"order", order_json(order)},
                      {"mode", mode.name()},
                      {"timing_ms", ms},
                      {"distribution", distribution_json(result.dist)}}
                     .dump()
              << "\n";
    return kOk;
  }
  std::cout << order.to_string() << " " << fixed(result.score, opts.precision) << "\n";
  std::cout << "mode " << mode.name() << ", width " << subpath_capacity(path, 0, path.link_count())
            << ", " << distribution_summary(result.dist, opts.precision) << "\n";
  return kOk;
}

int cmd_search(const CommonOptions& opts, const std::string& strategy, bool all,
               std::uint64_t tree_cap) {
  const PathDocument doc = load(opts);
  const PathSpec& path = doc.logical();
  const EvalMode mode = EvalMode::parse(opts.mode, opts.epsilon);
  const SearchOptions search{tree_cap, opts.jobs};
  const Stopwatch clock;

  if (all) {
    if (strategy != "brute") {
      throw CLI::ValidationError("--all", "only valid with --strategy brute");
    }
    const auto scored = score_all_trees(path, mode, search);
    std::cout << "order,score\n";
    for (const auto& item : scored) {
      std::cout << csv_quote(item.order.to_string()) << "," << full(item.score) << "\n";
    }
    return kOk;
  }

  ScoredOrder best;
  if (strategy == "brute") {
    best = brute_force(path, mode, search);
  } else if (strategy == "greedy") {
    best = greedy_swap(path, mode);
  } else if (strategy == "vora") {
    best = vora_swap(path, mode);
  } else {
    SwapOrder order = strategy == "balanced" ? balanced_tree(path)
                      : strategy == "l2r"    ? left_to_right(path)
                                             : right_to_left(path);
    const double score = ent(path, order, mode).score;
    best = {std::move(order), score};
  }
  const double ms = clock.elapsed_ms();
  if (opts.json_output) {
    std::cout << json{{"score", best.score},
                      {"order", order_json(best.order)},
                      {"mode", mode.name()},
                      {"strategy", strategy},
                      {"timing_ms", ms}}
                     .dump()
              << "\n";
    return kOk;
  }
  std::cout << best.order.to_string() << " " << fixed(best.score, opts.precision) << "\n";
  return kOk;
}

std::string allocation_string(const Allocation& allocation) {
  std::string out = "[";
  for (std::size_t i = 0; i < allocation.per_link.size(); ++i) {
    out += (i > 0 ? "," : "") + std::to_string(allocation.per_link[i]);
  }
  return out + "]";
}

int cmd_allocate(const CommonOptions& opts, bool csv, std::uint64_t cap) {
  const PathDocument doc = load(opts);
  if (!doc.allocation) {
    throw SchemaError("allocate: the document needs an 'allocation' section with a budget");
  }
  const EvalMode mode = EvalMode::parse(opts.mode, opts.epsilon);
  const MemoryBudget budget{doc.allocation->budget};
  AllocationOptions options;
  options.allocation_cap = cap;
  options.search.jobs = opts.jobs;
  const Stopwatch clock;

  AllocationResult result;
  std::string unit = "entanglements/slot";
  if (doc.is_logical()) {
    const PathSpec& path = doc.logical();
    std::vector<double> link_probs;
    for (const auto& link : path.links()) {
      link_probs.push_back(link.success);
    }
    result = optimize_allocation(budget, CapacityModel{doc.allocation->kappa}, link_probs,
                                 path.swap_probs(), mode, options);
  } else {
    const PhysicalPath& physical = doc.physical();
    unit = "entanglements/s";
    result = optimize_allocation_with(
        budget,
        [&](const Allocation& allocation) {
          auto links = physical.links;
          for (std::size_t i = 0; i < links.size(); ++i) {
            links[i].memory_pairs = allocation.per_link[i];
            // measured rates were taken for the document's memory count; scale linearly
            if (links[i].attempt_rate_per_s) {
              *links[i].attempt_rate_per_s *= static_cast<double>(allocation.per_link[i]) /
                                              static_cast<double>(physical.links[i].memory_pairs);
            }
          }
          const auto estimate = estimate_path_throughput(links, physical.swap_probs,
                                                         physical.hardware, physical.timing, mode);
          return ScoredOrder{estimate.order, estimate.ent_per_s};
        },
        options);
  }
  const double ms = clock.elapsed_ms();

  if (csv) {
    std::cout << "allocation,order,score\n";
    for (const auto& item : result.evaluated) {
      std::cout << csv_quote(allocation_string(item.allocation)) << ","
                << csv_quote(item.best.order.to_string()) << "," << full(item.best.score) << "\n";
    }
    return kOk;
  }
  if (opts.json_output) {
    std::cout << json{{"score", result.best.best.score},
                      {"order", order_json(result.best.best.order)},
                      {"allocation", result.best.allocation.per_link},
                      {"heuristic", result.heuristic},
                      {"unit", unit},
                      {"mode", mode.name()},
                      {"timing_ms", ms}}
                     .dump()
              << "\n";
    return kOk;
  }
  std::cout << "allocation " << allocation_string(result.best.allocation) << " order "
            << result.best.best.order.to_string() << " score "
            << fixed(result.best.best.score, opts.precision) << " " << unit << "\n";
  std::cout << result.evaluated.size() << " allocations evaluated"
            << (result.heuristic ? " (coordinate ascent; heuristic)" : " (exhaustive)") << "\n";
  return kOk;
}

int cmd_estimate(const CommonOptions& opts, std::vector<double> coherence_ms) {
  const PathDocument doc = load(opts);
  const PhysicalPath& physical = doc.physical();
  const EvalMode mode = EvalMode::parse(opts.mode, opts.epsilon);
  if (coherence_ms.empty()) {
    coherence_ms.push_back(physical.timing.coherence_time_s * 1e3);
  }
  double total_km = 0.0;
  for (const auto& link : physical.links) {
    total_km += link.length_km;
  }
  const double tau_rtt = round_trip_time(total_km, physical.hardware.light_speed_km_per_s);

  std::cout << "coherence_s,slot_s,tau_rtt_s,score,ent_per_s,order,status\n";
  for (double ms : coherence_ms) {
    TimingParams timing = physical.timing;
    timing.coherence_time_s = ms * 1e-3;
    std::cout << full(timing.coherence_time_s) << ",";
    try {
      const auto estimate =
          estimate_path_throughput(physical.links, physical.swap_probs, physical.hardware,
                                   timing, mode);
      std::cout << full(estimate.slot_s) << "," << full(tau_rtt) << "," << full(estimate.score)
                << "," << full(estimate.ent_per_s) << "," << csv_quote(estimate.order.to_string())
                << "," << (estimate.warnings.empty() ? "ok" : "small_capacity") << "\n";
    } catch (const SlotNonpositive&) {
      std::cout << "," << full(tau_rtt) << ",,,,slot_nonpositive\n";
    }
  }
  return kOk;
}

int cmd_simulate(const CommonOptions& opts, const std::string& order_text, bool asap,
                 std::uint64_t trials, std::uint64_t seed, bool check) {
  const PathDocument doc = load(opts);
  const PathSpec& path = doc.logical();
  if (asap == !order_text.empty()) {
    throw CLI::ValidationError("simulate", "give exactly one of --order or --asap");
  }
  const SimulationOptions sim{opts.jobs};
  const Stopwatch clock;
  SwapOrder order;
  SlotOutcome outcome;
  if (asap) {
    outcome = simulate_asap(path, trials, seed, sim);
  } else {
    order = SwapOrder::parse(order_text);
    outcome = simulate_order(path, order, trials, seed, sim);
  }
  const double ms = clock.elapsed_ms();
  const double se = outcome.standard_error();

  json report{{"mean", outcome.mean},
              {"variance", outcome.variance},
              {"standard_error", se},
              {"trials", outcome.trials},
              {"seed", outcome.seed},
              {"policy", asap ? "asap" : order.to_string()},
              {"timing_ms", ms}};
  std::string check_line;
  if (check) {
    if (asap) {
      throw CLI::ValidationError("--check", "needs a static --order");
    }
    const EvalMode mode = EvalMode::parse(opts.mode, opts.epsilon);
    const double analytic = ent(path, order, mode).score;
    const double z = se > 0.0 ? (outcome.mean - analytic) / se
                              : (outcome.mean == analytic ? 0.0 : INFINITY);
    report["analytic"] = analytic;
    report["mode"] = mode.name();
    report["z"] = z;
    check_line = "analytic " + fixed(analytic, opts.precision + 2) + " (" + mode.name() +
                 "), z " + fixed(z, 2);
  }
  if (opts.json_output) {
    std::cout << report.dump() << "\n";
    return kOk;
  }
  std::cout << (asap ? std::string("asap") : order.to_string()) << " mean "
            << fixed(outcome.mean, opts.precision + 2) << " +- " << fixed(se, opts.precision + 2)
            << " (SE), trials " << outcome.trials << ", seed " << outcome.seed << "\n";
  if (check) {
    std::cout << check_line << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement swapping order evaluation and search for repeater paths"};
  app.require_subcommand(1);

  CommonOptions eval_opts, search_opts, alloc_opts, estimate_opts, sim_opts;

  auto* eval = app.add_subcommand("eval", "Expected end-to-end entanglements of one order");
  add_common(*eval, eval_opts);
  std::string eval_order;
  eval->add_option("--order", eval_order, "comma-separated interior node ids, e.g. 3,2,1")
      ->required();

  auto* search = app.add_subcommand("search", "Pick a swapping order");
  add_common(*search, search_opts);
  std::string strategy = "vora";
  bool all = false;
  std::uint64_t tree_cap = 1'000'000;
  search->add_option("--strategy", strategy, "brute | greedy | vora | balanced | l2r | r2l")
      ->check(CLI::IsMember({"brute", "greedy", "vora", "balanced", "l2r", "r2l"}))
      ->capture_default_str();
  search->add_flag("--all", all, "with brute: CSV of every tree's canonical order and score");
  search->add_option("--tree-cap", tree_cap, "maximum trees for brute force")
      ->capture_default_str();

  auto* allocate = app.add_subcommand("allocate", "Optimize per-link memory allocation");
  add_common(*allocate, alloc_opts);
  bool alloc_csv = false;
  std::uint64_t alloc_cap = 100'000;
  allocate->add_flag("--csv", alloc_csv, "CSV of every evaluated allocation");
  allocate->add_option("--cap", alloc_cap, "maximal allocations before coordinate ascent")
      ->capture_default_str();

  auto* estimate = app.add_subcommand("estimate", "Throughput in entanglements/s (physical form)");
  add_common(*estimate, estimate_opts);
  std::vector<double> coherence_ms;
  estimate->add_option("--coherence-ms", coherence_ms, "coherence-time sweep in ms")
      ->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo of the slot model");
  add_common(*simulate, sim_opts);
  std::string sim_order;
  bool asap = false;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  bool check = false;
  simulate->add_option("--order", sim_order, "static order, e.g. 3,2,1");
  simulate->add_flag("--asap", asap, "random interleaving per trial");
  simulate->add_option("--trials", trials)->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", seed)->capture_default_str();
  simulate->add_flag("--check", check, "compare against the analytic score (uses --mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSchemaError;
  }

  try {
    if (*eval) return cmd_eval(eval_opts, eval_order);
    if (*search) return cmd_search(search_opts, strategy, all, tree_cap);
    if (*allocate) return cmd_allocate(alloc_opts, alloc_csv, alloc_cap);
    if (*estimate) return cmd_estimate(estimate_opts, coherence_ms);
    if (*simulate) return cmd_simulate(sim_opts, sim_order, asap, trials, seed, check);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchemaError;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchemaError;
  } catch (const InvalidOrder& e) {
    std::cerr << "invalid order: " << e.what() << "\n";
    return kOrderError;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudgetError;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOtherError;
  }
  return kOk;
}

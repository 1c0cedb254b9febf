#include "swaporder/allocation.hpp"
#include "swaporder/document.hpp"
#include "swaporder/errors.hpp"
#include "swaporder/estimator.hpp"
#include "swaporder/montecarlo.hpp"
#include "swaporder/order_search.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace swaporder;

namespace {

std::vector<double> to_list(const Pmf& pmf) { return {pmf.probs().begin(), pmf.probs().end()}; }

// Pmf crosses the boundary as a plain list of probabilities.
py::object distribution_to_py(const Distribution& dist) {
  if (const auto* pmf = std::get_if<Pmf>(&dist)) return py::cast(to_list(*pmf));
  return py::cast(std::get<NormalParams>(dist));
}

SwapOrder order_from(const std::vector<int>& sequence) { return SwapOrder{sequence}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entanglement swapping order evaluation and search";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidMoments>(m, "InvalidMoments", error.ptr());
  py::register_exception<DegenerateTheta>(m, "DegenerateTheta", error.ptr());
  py::register_exception<InvalidOrder>(m, "InvalidOrder", error.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error.ptr());
  py::register_exception<Infeasible>(m, "Infeasible", error.ptr());
  py::register_exception<SlotNonpositive>(m, "SlotNonpositive", error.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", error.ptr());

  // distributions
  py::class_<NormalParams>(m, "NormalParams")
      .def(py::init<double, double>(), py::arg("mean"), py::arg("variance"))
      .def_readwrite("mean", &NormalParams::mean)
      .def_readwrite("variance", &NormalParams::variance)
      .def("__repr__", [](const NormalParams& n) {
        return "NormalParams(mean=" + std::to_string(n.mean) + ", variance=" + std::to_string(n.variance) + ")";
      });

  m.def("binomial_pmf", [](std::int64_t trials, double success) { return to_list(binomial_pmf({trials, success})); },
        py::arg("trials"), py::arg("success"));
  m.def("approx_tail", [](const std::vector<double>& pmf, double epsilon) { return to_list(approx_tail(Pmf(pmf), epsilon)); },
        py::arg("pmf"), py::arg("epsilon"));
  m.def("hoeffding_support", &hoeffding_support, py::arg("trials"), py::arg("success"), py::arg("epsilon"));
  m.def("b2n", [](std::int64_t trials, double success) { return b2n({trials, success}); },
        py::arg("trials"), py::arg("success"));
  m.def("n2b", [](double mean, double variance) {
        const auto b = n2b({mean, variance});
        return py::make_tuple(b.trials, b.success);
      }, py::arg("mean"), py::arg("variance"));
  m.def("min_normal_moments", &min_normal_moments, py::arg("a"), py::arg("b"), py::arg("rho") = 0.0);
  m.def("satisfies_three_sigma", [](std::int64_t trials, double success) { return satisfies_three_sigma({trials, success}); },
        py::arg("trials"), py::arg("success"));

  // swap engine
  py::class_<LinkSpec>(m, "LinkSpec")
      .def(py::init<std::int64_t, double>(), py::arg("capacity"), py::arg("success"))
      .def_readwrite("capacity", &LinkSpec::capacity)
      .def_readwrite("success", &LinkSpec::success)
      .def("__eq__", [](const LinkSpec& a, const LinkSpec& b) { return a == b; });

  py::class_<PathSpec>(m, "PathSpec")
      .def(py::init<std::vector<LinkSpec>, std::vector<double>>(), py::arg("links"), py::arg("swap_probs"))
      .def_static("uniform", [](const std::vector<std::int64_t>& caps, double p, double q) {
            std::vector<LinkSpec> links;
            for (auto c : caps) links.push_back({c, p});
            return PathSpec(links, std::vector<double>(caps.empty() ? 0 : caps.size() - 1, q));
          }, py::arg("capacities"), py::arg("success"), py::arg("swap_prob"))
      .def_property_readonly("links", &PathSpec::links)
      .def_property_readonly("swap_probs", &PathSpec::swap_probs)
      .def_property_readonly("link_count", &PathSpec::link_count)
      .def("mirrored", &PathSpec::mirrored)
      .def("__eq__", [](const PathSpec& a, const PathSpec& b) { return a == b; });

  py::class_<EvalMode>(m, "EvalMode")
      .def_static("exact", &EvalMode::exact)
      .def_static("tail", &EvalMode::tail, py::arg("epsilon") = 1e-5)
      .def_static("normal", &EvalMode::normal)
      .def_static("hybrid", &EvalMode::hybrid, py::arg("epsilon") = 1e-5)
      .def_static("parse", &EvalMode::parse, py::arg("name"), py::arg("epsilon") = 1e-5)
      .def_property_readonly("name", &EvalMode::name)
      .def_readonly("epsilon", &EvalMode::epsilon);

  m.def("swap_exact", [](const std::vector<double>& left, const std::vector<double>& right, double q) {
        const auto r = swap_exact(Pmf(left), Pmf(right), q);
        return py::make_tuple(r.score, to_list(r.out));
      }, py::arg("left"), py::arg("right"), py::arg("q"));
  m.def("ent", [](const PathSpec& path, const std::vector<int>& order, const EvalMode& mode) {
        return ent(path, order_from(order), mode).score;
      }, py::arg("path"), py::arg("order"), py::arg("mode") = EvalMode::exact());
  m.def("ent_distribution", [](const PathSpec& path, const std::vector<int>& order, const EvalMode& mode) {
        const auto r = ent(path, order_from(order), mode);
        return py::make_tuple(r.score, distribution_to_py(r.dist));
      }, py::arg("path"), py::arg("order"), py::arg("mode") = EvalMode::exact());

  // order search
  auto scored = [](const ScoredOrder& s) { return py::make_tuple(s.order.sequence, s.score); };
  m.def("catalan", &catalan, py::arg("k"));
  m.def("enumerate_trees", [](int link_count) {
        std::vector<std::vector<int>> out;
        for_each_tree(link_count, [&](const SwapTree& t) { out.push_back(t.canonical_order.sequence); });
        return out;
      }, py::arg("link_count"));
  m.def("canonical_order", [](const std::vector<int>& order, int link_count) {
        return canonical_order(order_from(order), link_count).sequence;
      }, py::arg("order"), py::arg("link_count"));
  m.def("brute_force", [scored](const PathSpec& path, const EvalMode& mode, std::uint64_t tree_cap, unsigned jobs) {
        ScoredOrder best;
        {
          py::gil_scoped_release release;
          best = brute_force(path, mode, {tree_cap, jobs});
        }
        return scored(best);
      }, py::arg("path"), py::arg("mode") = EvalMode::exact(), py::arg("tree_cap") = 1'000'000,
      py::arg("jobs") = 1);
  m.def("greedy_swap", [scored](const PathSpec& p, const EvalMode& mode) { return scored(greedy_swap(p, mode)); },
        py::arg("path"), py::arg("mode") = EvalMode::exact());
  m.def("vora_swap", [scored](const PathSpec& p, const EvalMode& mode) { return scored(vora_swap(p, mode)); },
        py::arg("path"), py::arg("mode") = EvalMode::exact());
  m.def("balanced_tree", [](const PathSpec& p) { return balanced_tree(p).sequence; }, py::arg("path"));
  m.def("left_to_right", [](const PathSpec& p) { return left_to_right(p).sequence; }, py::arg("path"));
  m.def("right_to_left", [](const PathSpec& p) { return right_to_left(p).sequence; }, py::arg("path"));

  // allocation
  m.def("enumerate_allocations", [](const std::vector<std::int64_t>& budget) {
        std::vector<std::vector<std::int64_t>> out;
        for (const auto& a : enumerate_allocations({budget})) out.push_back(a.per_link);
        return out;
      }, py::arg("budget"));
  m.def("optimize_allocation",
        [scored](const std::vector<std::int64_t>& budget, const std::vector<double>& kappa,
                 const std::vector<double>& link_probs, const std::vector<double>& swap_probs,
                 const EvalMode& mode) {
          const auto r = optimize_allocation({budget}, CapacityModel{kappa}, link_probs, swap_probs, mode);
          return py::make_tuple(r.best.allocation.per_link, scored(r.best.best));
        },
        py::arg("budget"), py::arg("kappa"), py::arg("link_probs"), py::arg("swap_probs"),
        py::arg("mode") = EvalMode::exact());

  // estimator
  py::class_<PhysicalLink>(m, "PhysicalLink")
      .def(py::init([](double length_km, std::int64_t memory_pairs, std::optional<double> attempt_rate,
                       std::optional<double> success_per_attempt) {
             return PhysicalLink{length_km, memory_pairs, attempt_rate, success_per_attempt};
           }),
           py::arg("length_km"), py::arg("memory_pairs") = 1, py::arg("attempt_rate") = py::none(),
           py::arg("success_per_attempt") = py::none())
      .def_readwrite("length_km", &PhysicalLink::length_km)
      .def_readwrite("memory_pairs", &PhysicalLink::memory_pairs);

  py::class_<HardwareProfile>(m, "HardwareProfile")
      .def(py::init<>())
      .def_readwrite("attenuation_db_per_km", &HardwareProfile::attenuation_db_per_km)
      .def_readwrite("light_speed_km_per_s", &HardwareProfile::light_speed_km_per_s)
      .def_readwrite("detector_efficiency", &HardwareProfile::detector_efficiency)
      .def_readwrite("memory_efficiency", &HardwareProfile::memory_efficiency)
      .def_readwrite("attempt_latency_factor", &HardwareProfile::attempt_latency_factor)
      .def_readwrite("protocol_prefactor", &HardwareProfile::protocol_prefactor);

  py::class_<TimingParams>(m, "TimingParams")
      .def(py::init<double, double, double>(), py::arg("coherence_time_s") = 0.02,
           py::arg("herald_delay_s") = 0.0, py::arg("app_delay_s") = 0.0)
      .def_readwrite("coherence_time_s", &TimingParams::coherence_time_s)
      .def_readwrite("herald_delay_s", &TimingParams::herald_delay_s)
      .def_readwrite("app_delay_s", &TimingParams::app_delay_s);

  py::class_<ThroughputEstimate>(m, "ThroughputEstimate")
      .def_readonly("ent_per_s", &ThroughputEstimate::ent_per_s)
      .def_readonly("slot_s", &ThroughputEstimate::slot_s)
      .def_readonly("score", &ThroughputEstimate::score)
      .def_readonly("path", &ThroughputEstimate::path)
      .def_property_readonly("order", [](const ThroughputEstimate& e) { return e.order.sequence; })
      .def_readonly("warnings", &ThroughputEstimate::warnings);

  m.def("expected_wait_both", &expected_wait_both, py::arg("rate1"), py::arg("rate2"));
  m.def("round_trip_time", &round_trip_time, py::arg("total_length_km"), py::arg("light_speed_km_per_s") = 2e5);
  m.def("estimate_path_throughput", &estimate_path_throughput, py::arg("links"), py::arg("swap_probs"),
        py::arg("hardware") = HardwareProfile{}, py::arg("timing") = TimingParams{},
        py::arg("mode") = EvalMode::exact());

  // montecarlo
  py::class_<SlotOutcome>(m, "SlotOutcome")
      .def_readonly("mean", &SlotOutcome::mean)
      .def_readonly("variance", &SlotOutcome::variance)
      .def_readonly("trials", &SlotOutcome::trials)
      .def_readonly("seed", &SlotOutcome::seed)
      .def_property_readonly("standard_error", &SlotOutcome::standard_error);

  m.def("simulate_order", [](const PathSpec& path, const std::vector<int>& order, std::uint64_t trials,
                             std::uint64_t seed, unsigned jobs) {
        py::gil_scoped_release release;
        return simulate_order(path, order_from(order), trials, seed, {jobs});
      }, py::arg("path"), py::arg("order"), py::arg("trials") = 100'000, py::arg("seed") = 1, py::arg("jobs") = 1);
  m.def("simulate_asap", [](const PathSpec& path, std::uint64_t trials, std::uint64_t seed, unsigned jobs) {
        py::gil_scoped_release release;
        return simulate_asap(path, trials, seed, {jobs});
      }, py::arg("path"), py::arg("trials") = 100'000, py::arg("seed") = 1, py::arg("jobs") = 1);

  // documents
  m.def("load_logical_path", [](const std::string& text) { return parse_document(text).logical(); },
        py::arg("text"));
}

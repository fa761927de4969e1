// Python bindings for the simulator core: enough surface to drive
// experiments (params, arrivals, graphs, solving, simulation runs, bounds)
// from Python without re-wrapping every C++ detail.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kexsim/arrivals.hpp"
#include "kexsim/batched.hpp"
#include "kexsim/bounds.hpp"
#include "kexsim/config.hpp"
#include "kexsim/graph.hpp"
#include "kexsim/instance_io.hpp"
#include "kexsim/sim.hpp"
#include "kexsim/solver.hpp"
#include "kexsim/tradeoff.hpp"

namespace py = pybind11;
using namespace kexsim;

namespace {

Objective objective_by_name(const std::string& name) {
  if (name == "maxcard") return Objective::max_cardinality();
  if (name == "sens") return Objective::sens();
  if (name == "time") return Objective::time();
  throw std::invalid_argument("unknown objective: " + name);
}

}  // namespace

PYBIND11_MODULE(_kexsim, m) {
  m.doc() = "kidney-exchange simulator, exact matcher, and loss bounds";

  py::enum_<BloodType>(m, "BloodType")
      .value("O", BloodType::O)
      .value("A", BloodType::A)
      .value("B", BloodType::B)
      .value("AB", BloodType::AB);

  py::enum_<PairClass>(m, "PairClass")
      .value("Overdemanded", PairClass::Overdemanded)
      .value("Underdemanded", PairClass::Underdemanded)
      .value("SelfDemanded", PairClass::SelfDemanded)
      .value("Reciprocal", PairClass::Reciprocal);

  py::enum_<Policy>(m, "Policy")
      .value("MaxCardinality", Policy::MaxCardinality)
      .value("Sens", Policy::Sens)
      .value("Time", Policy::Time)
      .value("Batched", Policy::Batched);

  m.def("abo_compatible", &abo_compatible, py::arg("patient"),
        py::arg("donor"));
  m.def("classify_pair", &classify_pair, py::arg("patient"), py::arg("donor"));

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_static("us_2017", &ModelParams::us_2017)
      .def_readwrite("n", &ModelParams::n)
      .def_readwrite("mu_blood", &ModelParams::mu_blood)
      .def_readwrite("mu_H", &ModelParams::mu_H)
      .def_readwrite("mu_C", &ModelParams::mu_C)
      .def_readwrite("gamma_H", &ModelParams::gamma_H)
      .def_readwrite("gamma_L", &ModelParams::gamma_L)
      .def_readwrite("sigma", &ModelParams::sigma)
      .def_readwrite("rho_C", &ModelParams::rho_C)
      .def_readwrite("rho_NC", &ModelParams::rho_NC)
      .def_readwrite("eta_C", &ModelParams::eta_C)
      .def_readwrite("k_max", &ModelParams::k_max)
      .def("gamma_bar", &ModelParams::gamma_bar);

  py::class_<ParamCheck>(m, "ParamCheck")
      .def_readonly("name", &ParamCheck::name)
      .def_readonly("passed", &ParamCheck::passed)
      .def_readonly("detail", &ParamCheck::detail);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("gamma_bar", &ValidationReport::gamma_bar)
      .def_readonly("checks", &ValidationReport::checks)
      .def("all_passed", &ValidationReport::all_passed);

  m.def("validate_params", &validate_params, py::arg("params"));

  py::class_<PairRecord>(m, "PairRecord")
      .def(py::init<>())
      .def_readwrite("id", &PairRecord::id)
      .def_readwrite("patient_blood", &PairRecord::patient_blood)
      .def_readwrite("donor_blood", &PairRecord::donor_blood)
      .def_readwrite("sensitization", &PairRecord::sensitization)
      .def_readwrite("highly_sensitized", &PairRecord::highly_sensitized)
      .def_readwrite("critical", &PairRecord::critical)
      .def_readwrite("arrival_time", &PairRecord::arrival_time)
      .def("blood_class", &PairRecord::blood_class);

  py::class_<CompatGraph>(m, "CompatGraph")
      .def_readonly("ids", &CompatGraph::ids)
      .def_readonly("records", &CompatGraph::records)
      .def("vertex_count", &CompatGraph::vertex_count)
      .def("edge_count", &CompatGraph::edge_count)
      .def("edge_list", &CompatGraph::edge_list);

  m.def(
      "generate_arrivals",
      [](const ModelParams& p, int t, std::uint64_t seed) {
        PairId next_id = 0;
        return generate_arrivals(p, t, seed, &next_id);
      },
      py::arg("params"), py::arg("t"), py::arg("seed"));

  m.def(
      "build_graph",
      [](const std::vector<PairRecord>& records, std::uint64_t seed,
         bool dense) {
        PoolState pool;
        pool.add_arrivals(records);
        return build_graph(pool, CrossmatchOracle(seed, dense));
      },
      py::arg("records"), py::arg("seed"), py::arg("dense") = false);

  m.def("graph_from_edges", &graph_from_edges, py::arg("records"),
        py::arg("edges"));

  py::class_<Cycle>(m, "Cycle")
      .def_readonly("verts", &Cycle::verts)
      .def("__len__", [](const Cycle& c) { return c.size(); });

  py::class_<Matching>(m, "Matching")
      .def_readonly("cycles", &Matching::cycles)
      .def("matched_ids", &Matching::matched_ids)
      .def("vertex_disjoint", &Matching::vertex_disjoint);

  py::class_<MatchedCounts>(m, "MatchedCounts")
      .def_readonly("total", &MatchedCounts::total)
      .def_readonly("sensitized", &MatchedCounts::sensitized)
      .def_readonly("critical", &MatchedCounts::critical);

  m.def("enumerate_cycles", &enumerate_cycles, py::arg("graph"),
        py::arg("k_max") = 3);
  m.def(
      "solve",
      [](const CompatGraph& g, const std::string& objective, int k_max) {
        return solve(g, objective_by_name(objective), k_max);
      },
      py::arg("graph"), py::arg("objective") = "maxcard", py::arg("k_max") = 3);
  m.def("solve_batched", &solve_batched, py::arg("graph"), py::arg("k_max") = 3);
  m.def("matched_counts", &matched_counts, py::arg("matching"),
        py::arg("graph"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("params", &SimConfig::params)
      .def_readwrite("policy", &SimConfig::policy)
      .def_readwrite("tau", &SimConfig::tau)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("dense", &SimConfig::dense)
      .def_readwrite("warm_pool", &SimConfig::warm_pool);

  py::class_<StepReport>(m, "StepReport")
      .def_readonly("t", &StepReport::t)
      .def_readonly("arrivals", &StepReport::arrivals)
      .def_readonly("matched_total", &StepReport::matched_total)
      .def_readonly("matched_sensitized", &StepReport::matched_sensitized)
      .def_readonly("matched_critical", &StepReport::matched_critical)
      .def_readonly("perished_critical", &StepReport::perished_critical)
      .def_readonly("perished_noncritical", &StepReport::perished_noncritical)
      .def_readonly("became_critical", &StepReport::became_critical)
      .def_readonly("expected_loss", &StepReport::expected_loss)
      .def_readonly("realized_loss", &StepReport::realized_loss)
      .def_readonly("pool_size", &StepReport::pool_size);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("algorithm", &RunReport::algorithm)
      .def_readonly("horizon", &RunReport::horizon)
      .def_readonly("seed", &RunReport::seed)
      .def_readonly("steps", &RunReport::steps)
      .def("cumulative_expected_loss", &RunReport::cumulative_expected_loss)
      .def("cumulative_realized_loss", &RunReport::cumulative_realized_loss)
      .def("total_matched", &RunReport::total_matched)
      .def("total_arrivals", &RunReport::total_arrivals);

  m.def("run", &run, py::arg("config"));

  py::class_<TradeoffEstimate>(m, "TradeoffEstimate")
      .def_readonly("replications", &TradeoffEstimate::replications)
      .def_readonly("used", &TradeoffEstimate::used)
      .def_readonly("excluded", &TradeoffEstimate::excluded)
      .def_readonly("mean", &TradeoffEstimate::mean)
      .def_readonly("std_error", &TradeoffEstimate::std_error)
      .def_readonly("ci_lo", &TradeoffEstimate::ci_lo)
      .def_readonly("ci_hi", &TradeoffEstimate::ci_hi)
      .def_readonly("ratio_of_means", &TradeoffEstimate::ratio_of_means)
      .def_readonly("mean_loss_sens", &TradeoffEstimate::mean_loss_sens)
      .def_readonly("mean_loss_time", &TradeoffEstimate::mean_loss_time)
      .def_readonly("mean_diff", &TradeoffEstimate::mean_diff)
      .def_readonly("se_diff", &TradeoffEstimate::se_diff);

  m.def("estimate_tradeoff", &estimate_tradeoff, py::arg("params"),
        py::arg("tau"), py::arg("reps"), py::arg("seed"),
        py::arg("dense") = false, py::arg("threads") = 1,
        py::arg("arm_sens") = Policy::Sens, py::arg("arm_time") = Policy::Time);

  py::class_<BoundInputs>(m, "BoundInputs")
      .def(py::init<>())
      .def_static("us_preset", &BoundInputs::us_preset, py::arg("n") = 1.0)
      .def_static("from_params", &BoundInputs::from_params)
      .def_readwrite("n", &BoundInputs::n)
      .def_readwrite("mu_O", &BoundInputs::mu_O)
      .def_readwrite("mu_AB", &BoundInputs::mu_AB)
      .def_readwrite("mu_H", &BoundInputs::mu_H)
      .def_readwrite("mu_C", &BoundInputs::mu_C)
      .def_readwrite("rho_C", &BoundInputs::rho_C)
      .def_readwrite("rho_NC", &BoundInputs::rho_NC)
      .def_readwrite("eta_C", &BoundInputs::eta_C)
      .def("muH_OAB", &BoundInputs::muH_OAB)
      .def("muC_OAB", &BoundInputs::muC_OAB);

  py::class_<TradeoffBound>(m, "TradeoffBound")
      .def_readonly("numerator", &TradeoffBound::numerator)
      .def_readonly("denominator", &TradeoffBound::denominator)
      .def_readonly("ratio", &TradeoffBound::ratio);

  m.def("loss_sens_bound", &loss_sens_bound, py::arg("inputs"), py::arg("tau"));
  m.def("loss_time_bound", &loss_time_bound, py::arg("inputs"), py::arg("tau"));
  m.def("tradeoff_bound", &tradeoff_bound, py::arg("inputs"), py::arg("tau"));

  m.def("load_instance_file", &load_instance_file, py::arg("path"));
  m.def(
      "load_instance",
      [](const std::string& text) {
        std::istringstream in(text);
        return load_instance(in);
      },
      py::arg("text"));
  m.def(
      "save_instance",
      [](const CompatGraph& g) {
        std::ostringstream out;
        save_instance(out, g);
        return out.str();
      },
      py::arg("graph"));
}

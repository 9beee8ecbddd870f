#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "splitaztec/asymptotic_lab.hpp"
#include "splitaztec/cli_io.hpp"
#include "splitaztec/errors.hpp"
#include "splitaztec/exact_oracle.hpp"
#include "splitaztec/kernel_engine.hpp"
#include "splitaztec/lattice.hpp"
#include "splitaztec/sampler.hpp"
#include "splitaztec/saddle_phase.hpp"
#include "splitaztec/transfer_algebra.hpp"

namespace py = pybind11;
using namespace splitaztec;

namespace {

py::list block_to_list(const KernelBlock& b) {
  py::list out;
  for (int j = 0; j < 2; ++j) {
    py::list row;
    for (int i = 0; i < 2; ++i) row.append(b.at(j, i));
    out.append(row);
  }
  return out;
}

PointSet to_points(const std::vector<std::pair<int, int>>& pts) {
  PointSet s;
  for (auto [c, r] : pts) s.push_back({c, r});
  std::sort(s.begin(), s.end());
  return s;
}

KernelFormula formula(const std::string& f) {
  if (f == "theorem") return KernelFormula::Theorem;
  if (f == "lemma") return KernelFormula::Lemma;
  if (f == "two_periodic") return KernelFormula::TwoPeriodic;
  throw ValidationError("formula must be theorem, lemma or two_periodic");
}

}  // namespace

PYBIND11_MODULE(_splitaztec, m) {
  m.doc() = "split two-periodic Aztec diamond";
  m.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<BranchCutError>(m, "BranchCutError", PyExc_ValueError);

  m.def("transfer_matrix", [](double eps, cd z) { return block_to_list(transfer_matrix(eps, z)); });
  m.def("eigenvalues", [](double eps, cd z) {
    const auto e = eigen_pair(eps, z);
    return std::make_pair(e.r1, e.r2);
  });
  m.def("coupling", [](double alpha, double beta, cd z) { return coupling(alpha, beta, z); });

  m.def("covering_count", [](int order) { return enumerate_coverings(order).size(); });
  m.def("partition_function", [](int order, double alpha, double beta) {
    return enumerate_coverings(order).partition_function(alpha, beta);
  });
  m.def(
      "exact_probability",
      [](int N, double alpha, double beta, const std::vector<std::pair<int, int>>& pts) {
        return exact_point_probability(enumerate_coverings(2 * N), alpha, beta, to_points(pts));
      },
      py::arg("N"), py::arg("alpha"), py::arg("beta"), py::arg("points"));

  m.def(
      "kernel_block",
      [](int N, double alpha, double beta, int colp, int xip, int col, int xi, const std::string& f) {
        return block_to_list(column_block(formula(f), N, alpha, beta, colp, xip, col, xi));
      },
      py::arg("N"), py::arg("alpha"), py::arg("beta"), py::arg("colp"), py::arg("xip"), py::arg("col"), py::arg("xi"),
      py::arg("formula") = "theorem");
  m.def(
      "point_probability",
      [](int N, double alpha, double beta, const std::vector<std::pair<int, int>>& pts) {
        return point_probability(N, alpha, beta, to_points(pts));
      },
      py::arg("N"), py::arg("alpha"), py::arg("beta"), py::arg("points"));
  m.def("oracle_report", [](int N, double alpha, double beta) {
    const OracleReport r = oracle_vs_kernel_report(N, alpha, beta);
    return py::dict(py::arg("max_diff") = r.max_diff, py::arg("max_imag") = r.max_imag,
                    py::arg("passed") = r.passed(), py::arg("json") = r.json());
  });

  m.def(
      "sample_tiling",
      [](int N, double alpha, double beta, std::uint64_t seed) {
        const DimerCovering c = sample_tiling(N, alpha, beta, seed);
        std::vector<int> dirs(c.dir.begin(), c.dir.end());
        return dirs;
      },
      py::arg("N"), py::arg("alpha"), py::arg("beta"), py::arg("seed"),
      "direction code per black vertex: 0 SW, 1 NW, 2 SE, 3 NE");
  m.def(
      "tiling_text",
      [](int N, double alpha, double beta, std::uint64_t seed) {
        std::ostringstream os;
        write_tiling(os, WeightedAztecGraph(N, alpha, beta), sample_tiling(N, alpha, beta, seed));
        return os.str();
      },
      py::arg("N"), py::arg("alpha"), py::arg("beta"), py::arg("seed"));
  m.def(
      "chi_square",
      [](int N, double alpha, double beta, std::size_t samples, std::uint64_t seed) {
        const ChiSquareResult r = chi_square_vs_enumeration(N, alpha, beta, samples, seed);
        return py::dict(py::arg("statistic") = r.statistic, py::arg("dof") = r.dof, py::arg("critical") = r.critical,
                        py::arg("passed") = r.pass);
      },
      py::arg("N"), py::arg("alpha"), py::arg("beta"), py::arg("samples"), py::arg("seed"));

  m.def(
      "classify",
      [](double x, double y, double alpha, double beta) {
        const RegionQuery q{x, y, alpha, beta};
        const SaddleReport s = find_saddles(q);
        std::vector<cd> roots(s.roots.begin(), s.roots.begin() + s.root_count);
        return py::dict(py::arg("region") = std::string(region_name(s.region)), py::arg("roots") = roots,
                        py::arg("named") = s.named, py::arg("strong_coupling") = strong_coupling(q));
      },
      py::arg("x"), py::arg("y"), py::arg("alpha"), py::arg("beta"));
  m.def(
      "phase_json",
      [](double alpha, double beta, int resolution) {
        return phase_json(boundary_scan(alpha, beta, resolution), "{}");
      },
      py::arg("alpha"), py::arg("beta"), py::arg("resolution") = 64);

  m.def(
      "decay_profile",
      [](const std::string& term, double x, double y, double alpha, double beta, const std::vector<int>& Ns) {
        DecayTerm t = term == "I22" ? DecayTerm::I22 : term == "I21" ? DecayTerm::I21 : DecayTerm::Remainder;
        if (term != "I22" && term != "I21" && term != "remainder") throw ValidationError("unknown term " + term);
        const DecayFit f = decay_profile(t, RegionQuery{x, y, alpha, beta}, {}, Ns);
        return py::dict(py::arg("model") = std::string(decay_model_name(f.model)), py::arg("exponent") = f.exponent,
                        py::arg("r2") = f.quality, py::arg("log10_magnitudes") = f.log10_magnitudes);
      },
      py::arg("term"), py::arg("x"), py::arg("y"), py::arg("alpha"), py::arg("beta"), py::arg("N_values"));

  m.def(
      "run",
      [](const std::map<std::string, std::string>& settings) {
        RunConfig c;
        for (const auto& [k, v] : settings) apply_setting(c, k, v);
        const RunResult r = run(c);
        return py::dict(py::arg("exit_code") = r.exit_code, py::arg("files") = r.files, py::arg("report") = r.report);
      },
      py::arg("settings"), "batch run; keys as in the config file, values as strings");
}

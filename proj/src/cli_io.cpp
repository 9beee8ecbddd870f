#include "splitaztec/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "splitaztec/asymptotic_lab.hpp"
#include "splitaztec/errors.hpp"
#include "splitaztec/exact_oracle.hpp"
#include "splitaztec/kernel_engine.hpp"
#include "splitaztec/lattice.hpp"
#include "splitaztec/sampler.hpp"
#include "splitaztec/saddle_phase.hpp"
#include "splitaztec/transfer_algebra.hpp"

namespace splitaztec {

namespace {

constexpr int kMaxSampleN = 400;
constexpr int kMaxKernelN = 4;
constexpr std::size_t kVerifySamples = 20000;
constexpr int kVerifyIdentityPoints = 200;
constexpr double kIdentityTolerance = 1e-10;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  const auto slash = v.find('/');
  if (slash != std::string::npos)
    return parse_double(key, v.substr(0, slash)) / parse_double(key, v.substr(slash + 1));
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError(fmt::format("{}: not a number: '{}'", key, v));
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ValidationError(fmt::format("{}: not an integer: '{}'", key, v));
  return out;
}

int parse_small_int(const std::string& key, const std::string& v) {
  const long long x = parse_int(key, v);
  if (x < -1000000 || x > 1000000) throw ValidationError(fmt::format("{}: out of range: {}", key, v));
  return static_cast<int>(x);
}

DecayTerm parse_term(const std::string& s) {
  if (s == "I22") return DecayTerm::I22;
  if (s == "I21") return DecayTerm::I21;
  if (s == "remainder") return DecayTerm::Remainder;
  throw ValidationError(fmt::format("term must be I22, I21 or remainder, got '{}'", s));
}

void write_file(const std::string& path, const std::string& body, std::vector<std::string>& files) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError(fmt::format("cannot open '{}' for writing", path));
  f << body;
  if (!f) throw NumericalError(fmt::format("write to '{}' failed", path));
  files.push_back(path);
}

std::string hex64(std::uint64_t h) { return fmt::format("{:016x}", h); }

Contours contours_for(const RunConfig& c) {
  Contours ct;
  ct.gamma1.node_count = c.nodes;
  ct.gamma01.node_count = c.nodes;
  return ct;
}

RunResult run_sample(const RunConfig& c) {
  RunResult r;
  std::cerr << fmt::format("sampling order {} diamond, seed {}\n", 2 * c.N, c.seed);
  const DimerCovering cov = sample_tiling(c.N, c.alpha, c.beta, c.seed);
  const WeightedAztecGraph g(c.N, c.alpha, c.beta);
  const std::string meta = metadata_json(c);
  std::ostringstream tiling;
  tiling << "# " << meta << "\n";
  write_tiling(tiling, g, cov);
  write_file(c.out + ".tiling", tiling.str(), r.files);
  write_file(c.out + ".svg", render_tiling_svg(g, cov, meta), r.files);
  r.report = fmt::format("sample: order {} with {} dimers\n", 2 * c.N, cov.dir.size());
  return r;
}

RunResult run_kernel(const RunConfig& c) {
  RunResult r;
  KernelOptions opt;
  KernelTable K(c.N, c.alpha, c.beta, KernelFormula::Theorem, contours_for(c), opt);
  std::ostringstream os;
  os << "# " << metadata_json(c) << "\n";
  os << "N,alpha,beta,mp,xip,jp,m,xi,i,re,im,quad_nodes,residual\n";
  const int cols = 4 * c.N - 1;
  std::size_t rows = 0;
  for (int colp = 1; colp <= cols; ++colp) {
    std::cerr << fmt::format("kernel column {}/{}\n", colp, cols);
    for (int xip = -c.N; xip <= -1; ++xip)
      for (int col = 1; col <= cols; ++col)
        for (int xi = -c.N; xi <= -1; ++xi) {
          const KernelBlock b = K.block(colp, xip, col, xi);
          const QuadratureInfo& q = K.last_info();
          for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i) {
              const cd v = b.at(j, i);
              os << fmt::format("{},{},{},{},{},{},{},{},{},{:.17g},{:.17g},{},{:.3e}\n", c.N, c.alpha, c.beta, colp,
                                xip, j, col, xi, i, v.real(), v.imag(), q.nodes, q.change);
              ++rows;
            }
        }
  }
  write_file(c.out + ".csv", os.str(), r.files);
  r.report = fmt::format("kernel: {} entries\n", rows);
  return r;
}

RunResult run_phase(const RunConfig& c) {
  RunResult r;
  const PhaseGrid g = boundary_scan(c.alpha, c.beta, c.grid);
  const std::string meta = metadata_json(c);
  write_file(c.out + ".json", phase_json(g, meta), r.files);
  write_file(c.out + ".svg", phase_svg(g, meta), r.files);
  int counts[4] = {0, 0, 0, 0};
  for (const auto& col : g.regions)
    for (Region x : col) ++counts[static_cast<int>(x)];
  r.report = fmt::format("phase: frozen={} rough={} smooth={} degenerate={} boundary_segments={} strong_segments={}\n",
                         counts[0], counts[1], counts[2], counts[3], g.boundaries.size(), g.strong_boundaries.size());
  return r;
}

RunResult run_asymptotics(const RunConfig& c) {
  RunResult r;
  const DecayTerm term = parse_term(c.term);
  const RegionQuery q{c.x, c.y, c.alpha, c.beta};
  AsymptoticOptions opt;
  opt.tolerance = std::min(c.tolerance, 1e-6);
  const DecayFit fit = decay_profile(term, q, {}, c.n_list, contours_for(c), opt);
  const std::string meta = metadata_json(c);
  write_file(c.out + ".csv", "# " + meta + "\n" + decay_csv(term, q, fit), r.files);
  nlohmann::json j;
  j["meta"] = nlohmann::json::parse(meta);
  j["region"] = region_name(find_saddles(q).region);
  j["strong_coupling"] = strong_coupling(q);
  j["fit"] = nlohmann::json::parse(decay_json(term, q, fit));
  write_file(c.out + ".fit.json", j.dump(1) + "\n", r.files);
  r.report = fmt::format("asymptotics: {} at ({}, {}) model={} exponent={:.4f} r2={:.4f}\n", c.term, c.x, c.y,
                         decay_model_name(fit.model), fit.exponent, fit.quality);
  return r;
}

struct Check {
  std::string name;
  double value;
  double limit;
  bool pass() const { return value < limit; }
};

double identity_defect(double alpha, double beta, std::mt19937_64& rng, int points) {
  std::uniform_real_distribution<double> rad(0.3, 3.0), ang(0.1, 3.04159);
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const cd z = std::polar(rad(rng), (k % 2 ? 1.0 : -1.0) * ang(rng));
    for (double eps : {alpha, beta}) {
      const Mat2cd phi = transfer_matrix(eps, z);
      const auto e = eigen_data(eps, z);
      worst = std::max(worst, std::abs(phi.det() - 1.0));
      worst = std::max(worst, std::abs(e.r1 * e.r2 - 1.0));
      worst = std::max(worst, max_abs_diff(e.F1 * e.F1, e.F1));
      worst = std::max(worst, max_abs(e.F1 * e.F2));
      worst = std::max(worst, max_abs_diff(e.r1 * e.F1 + e.r2 * e.F2, phi) / std::max(1.0, max_abs(phi)));
    }
    worst = std::max(worst, std::abs(coupling(alpha, alpha, z) - 0.5));
    const Mat2cd Fa = projector(alpha, 1, z), Fb = projector(beta, 1, z);
    const cd g = coupling(alpha, beta, z);
    const cd s = 2.0 / (1.0 + 2.0 * g);
    worst = std::max(worst, max_abs_diff(s * (Fa * Fb * Fa), Fa));
    worst = std::max(worst, max_abs_diff(s * (Fb * Fa), Fb + s * (Fb * Fa * projector(beta, 2, z))));
  }
  return worst;
}

RunResult run_verify(const RunConfig& c) {
  RunResult r;
  std::vector<Check> checks;
  const OracleReport rep = oracle_vs_kernel_report(c.N, c.alpha, c.beta, contours_for(c));
  checks.push_back({"kernel_vs_enumeration", std::max(rep.max_diff, rep.max_imag), c.tolerance});
  std::mt19937_64 rng(c.seed);
  checks.push_back({"matrix_identities", identity_defect(c.alpha, c.beta, rng, kVerifyIdentityPoints),
                    kIdentityTolerance});
  const ChiSquareResult chi = chi_square_vs_enumeration(c.N, c.alpha, c.beta, kVerifySamples, c.seed);
  checks.push_back({"sampler_chi_square", chi.statistic, chi.critical});

  std::ostringstream os;
  nlohmann::json j;
  j["meta"] = nlohmann::json::parse(metadata_json(c));
  j["oracle"] = nlohmann::json::parse(rep.json());
  j["chi_square"] = {{"statistic", chi.statistic}, {"dof", chi.dof}, {"critical", chi.critical},
                     {"samples", chi.samples}, {"pooled_bins", chi.pooled_bins}};
  bool ok = true;
  for (const Check& k : checks) {
    os << fmt::format("{} {} value={:.3e} limit={:.3e}\n", k.pass() ? "PASS" : "FAIL", k.name, k.value, k.limit);
    j["checks"].push_back({{"name", k.name}, {"value", k.value}, {"limit", k.limit}, {"pass", k.pass()}});
    ok = ok && k.pass();
  }
  os << rep.text();
  write_file(c.out + ".verify.json", j.dump(1) + "\n", r.files);
  r.report = os.str();
  r.exit_code = ok ? kExitOk : kExitNumerical;
  return r;
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Sample: return "sample";
    case Command::Kernel: return "kernel";
    case Command::Phase: return "phase";
    case Command::Asymptotics: return "asymptotics";
    case Command::Verify: return "verify";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  for (Command c : {Command::Sample, Command::Kernel, Command::Phase, Command::Asymptotics, Command::Verify})
    if (s == command_name(c)) return c;
  throw ValidationError(fmt::format("unknown command '{}'", s));
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError(fmt::format("cannot read config '{}'", path));
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(fmt::format("{}:{}: expected key = value", path, lineno));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ValidationError(fmt::format("{}:{}: empty key", path, lineno));
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "command") c.command = parse_command(value);
  else if (key == "N") c.N = parse_small_int(key, value);
  else if (key == "alpha") c.alpha = parse_double(key, value);
  else if (key == "beta") c.beta = parse_double(key, value);
  else if (key == "seed") {
    const long long s = parse_int(key, value);
    if (s < 0) throw ValidationError("seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "nodes") c.nodes = parse_small_int(key, value);
  else if (key == "grid") c.grid = parse_small_int(key, value);
  else if (key == "out") c.out = value;
  else if (key == "tolerance") c.tolerance = parse_double(key, value);
  else if (key == "x") c.x = parse_double(key, value);
  else if (key == "y") c.y = parse_double(key, value);
  else if (key == "term") {
    parse_term(value);
    c.term = value;
  }
  else if (key == "n_list" || key == "nlist") {
    c.n_list.clear();
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) c.n_list.push_back(parse_small_int(key, trim(tok)));
  } else
    throw ValidationError(fmt::format("unknown setting '{}'", key));
}

void validate(const RunConfig& c) {
  auto param = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) throw ValidationError(fmt::format("{} must lie in (0,1], got {}", name, v));
  };
  param(c.alpha, "alpha");
  param(c.beta, "beta");
  if (!(c.tolerance > 0.0 && c.tolerance < 1.0)) throw ValidationError("tolerance must lie in (0,1)");
  if (c.nodes != 0 && (c.nodes < 8 || c.nodes > 65536))
    throw ValidationError("nodes must be 0 (adaptive) or in [8, 65536]");
  if (c.out.empty()) throw ValidationError("out must not be empty");
  switch (c.command) {
    case Command::Sample:
      if (c.N < 1 || c.N > kMaxSampleN) throw ValidationError(fmt::format("sample needs 1 <= N <= {}", kMaxSampleN));
      break;
    case Command::Kernel:
      if (c.N < 2 || c.N > kMaxKernelN || c.N % 2)
        throw ValidationError(fmt::format("kernel needs even N in [2, {}]", kMaxKernelN));
      break;
    case Command::Phase:
      if (c.grid < 16 || c.grid > 1024) throw ValidationError("grid must lie in [16, 1024]");
      break;
    case Command::Asymptotics: {
      parse_term(c.term);
      if (!(c.x > 0.0 && c.x < 1.0) || c.x == 0.5) throw ValidationError("x must lie in (0,1) and differ from 1/2");
      if (!(c.y > -1.0 && c.y < 0.0)) throw ValidationError("y must lie in (-1,0)");
      if (c.n_list.size() < 4) throw ValidationError("n_list needs at least 4 values");
      for (std::size_t i = 0; i < c.n_list.size(); ++i) {
        if (c.n_list[i] < 2 || c.n_list[i] % 2) throw ValidationError("n_list values must be even and positive");
        if (i && c.n_list[i] <= c.n_list[i - 1]) throw ValidationError("n_list must be increasing");
      }
      break;
    }
    case Command::Verify:
      if (c.N != 2) throw ValidationError("verify runs the enumeration oracle at N = 2");
      break;
  }
}

std::string canonical_config(const RunConfig& c) {
  std::string nl;
  for (std::size_t i = 0; i < c.n_list.size(); ++i) nl += (i ? "," : "") + std::to_string(c.n_list[i]);
  return fmt::format(
      "command={}\nN={}\nalpha={:.17g}\nbeta={:.17g}\nseed={}\nnodes={}\ngrid={}\ntolerance={:.17g}\nx={:.17g}\n"
      "y={:.17g}\nterm={}\nn_list={}\n",
      command_name(c.command), c.N, c.alpha, c.beta, c.seed, c.nodes, c.grid, c.tolerance, c.x, c.y, c.term, nl);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string metadata_json(const RunConfig& c) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = command_name(c.command);
  j["config_hash"] = hex64(fnv1a64(canonical_config(c)));
  j["N"] = c.N;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["seed"] = c.seed;
  const KernelOptions ko;
  const Contours ct = contours_for(c);
  j["tolerances"] = {{"assertion", c.tolerance},
                     {"kernel_quadrature", ko.tolerance},
                     {"asymptotic_quadrature", std::min(c.tolerance, 1e-6)},
                     {"identity", kIdentityTolerance}};
  j["contours"] = {{"gamma1", {{"center", ct.gamma1.center.real()}, {"radius", ct.gamma1.radius}, {"nodes", c.nodes}}},
                   {"gamma01", {{"center", ct.gamma01.center.real()}, {"radius", ct.gamma01.radius}, {"nodes", c.nodes}}}};
  return j.dump();
}

RunResult run(const RunConfig& c) {
  validate(c);
  switch (c.command) {
    case Command::Sample: return run_sample(c);
    case Command::Kernel: return run_kernel(c);
    case Command::Phase: return run_phase(c);
    case Command::Asymptotics: return run_asymptotics(c);
    case Command::Verify: return run_verify(c);
  }
  throw ValidationError("unknown command");
}

namespace {

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run_and_report(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const RunResult r = run(c);
    out << r.report;
    for (const auto& f : r.files) out << "wrote " << f << "\n";
    if (r.exit_code != kExitOk) err << "error: kind=assertion message=" << command_name(c.command) << " checks failed\n";
    return r.exit_code;
  } catch (const ValidationError& e) {
    err << "error: kind=validation message=" << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const GeometryError& e) {
    err << "error: kind=validation message=" << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: kind=numerical message=" << one_line(e.what()) << "\n";
    return kExitNumerical;
  }
}

}  // namespace splitaztec

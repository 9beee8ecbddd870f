#include "splitaztec/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "splitaztec/errors.hpp"

namespace splitaztec {

namespace {

int point_bit(int n, Site s) { return s.col * (n + 1) + (-s.row - 1); }

std::array<std::uint64_t, 2> point_mask(int n, const PointSet& pts) {
  std::array<std::uint64_t, 2> m{0, 0};
  for (const Site s : pts) {
    if (s.col < 0 || s.col > 2 * n || s.row < -n - 1 || s.row > -1)
      throw ValidationError(fmt::format("point ({},{}) is off the paths graph", s.col, s.row));
    const int b = point_bit(n, s);
    m[b / 64] |= std::uint64_t{1} << (b % 64);
  }
  return m;
}

Rational rpow(const Rational& x, int k) {
  Rational r = 1, b = k < 0 ? Rational(1) / x : x;
  for (int i = 0; i < std::abs(k); ++i) r *= b;
  return r;
}

}  // namespace

EnumerationTable::EnumerationTable(int order) : n_(order) {
  if (order < 1 || order > kMaxEnumerationOrder)
    throw ValidationError(fmt::format("enumeration order must be in [1, {}]", kMaxEnumerationOrder));
  // the graph only supplies geometry and exponents; any valid parameters do
  const int n = order;
  const int N = (n + 1) / 2;
  const int nb = (n + 1) * n;
  words_ = (2 * nb + 63) / 64;
  std::vector<Vertex> blacks(nb);
  for (int i = 0; i < nb; ++i) blacks[i] = {2 * (i / n), 2 * (i % n) + 1};
  auto is_white = [&](Vertex w) { return w.x >= 1 && w.x <= 2 * n - 1 && w.y >= 0 && w.y <= 2 * n; };
  auto white_index = [&](Vertex w) { return ((w.x - 1) / 2) * (n + 1) + w.y / 2; };

  std::vector<char> used(n * (n + 1), 0);
  std::vector<std::uint8_t> dir(nb, 0);
  int ea = 0, eb = 0;

  auto emit = [&] {
    for (int w = 0; w < words_; ++w) packed_.push_back(0);
    std::uint64_t* p = &packed_[packed_.size() - words_];
    for (int i = 0; i < nb; ++i) p[(2 * i) / 64] |= std::uint64_t{dir[i]} << ((2 * i) % 64);
    exps_.push_back({ea, eb});
  };

  auto rec = [&](auto&& self, int i) -> void {
    if (i == nb) {
      emit();
      return;
    }
    const Vertex b = blacks[i];
    for (int d = 0; d < 4; ++d) {
      const Vertex w{b.x + kDirections[d].x, b.y + kDirections[d].y};
      if (!is_white(w)) continue;
      const int wi = white_index(w);
      if (used[wi]) continue;
      used[wi] = 1;
      dir[i] = static_cast<std::uint8_t>(d);
      // exponents for odd n are never used for split weights; keep them zero
      const auto [a, e] = (n % 2 == 0) ? edge_weight_exponents(N, b, w) : std::pair<int, int>{0, 0};
      ea += a;
      eb += e;
      bool ok = true;
      if ((i + 1) % n == 0 && b.x >= 2) {
        // whites in column b.x - 1 can no longer be reached
        for (int k = 0; k <= n && ok; ++k) ok = used[white_index({b.x - 1, 2 * k})];
      }
      if (ok) self(self, i + 1);
      ea -= a;
      eb -= e;
      used[wi] = 0;
    }
  };
  rec(rec, 0);
  const std::size_t expect = std::size_t{1} << (n * (n + 1) / 2);
  if (exps_.size() != expect) throw NumericalError("enumeration produced the wrong number of coverings");
}

DimerCovering EnumerationTable::covering(std::size_t i) const {
  const int nb = (n_ + 1) * n_;
  DimerCovering c{n_, std::vector<std::uint8_t>(nb)};
  const std::uint64_t* p = &packed_[i * words_];
  for (int b = 0; b < nb; ++b) c.dir[b] = static_cast<std::uint8_t>((p[(2 * b) / 64] >> ((2 * b) % 64)) & 3u);
  return c;
}

double EnumerationTable::partition_function(double alpha, double beta) const {
  std::map<std::pair<int, int>, std::int64_t> groups;
  for (const auto& e : exps_) ++groups[e];
  double z = 0.0;
  for (const auto& [e, cnt] : groups) z += static_cast<double>(cnt) * std::pow(alpha, 2 * e.first) * std::pow(beta, 2 * e.second);
  return z;
}

Rational EnumerationTable::partition_function(const Rational& alpha, const Rational& beta) const {
  std::map<std::pair<int, int>, std::int64_t> groups;
  for (const auto& e : exps_) ++groups[e];
  Rational z = 0;
  for (const auto& [e, cnt] : groups) z += Rational(cnt) * rpow(alpha, 2 * e.first) * rpow(beta, 2 * e.second);
  return z;
}

const std::vector<std::array<std::uint64_t, 2>>& EnumerationTable::masks(PointKind kind) const {
  auto& cache = kind == PointKind::TopOfRun ? top_masks_ : kernel_masks_;
  if (!cache.empty()) return cache;
  if (n_ % 2) throw ValidationError("point images need an even order");
  const WeightedAztecGraph g(n_ / 2, 1.0, 1.0);
  cache.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const PathConfiguration p = covering_to_paths(g, covering(i));
    cache.push_back(point_mask(n_, kind == PointKind::TopOfRun ? paths_to_points(p) : paths_to_kernel_points(p)));
  }
  return cache;
}

std::map<std::pair<int, int>, std::int64_t> EnumerationTable::containing(const PointSet& pts, PointKind kind) const {
  const auto want = point_mask(n_, pts);
  const auto& ms = masks(kind);
  std::map<std::pair<int, int>, std::int64_t> groups;
  for (std::size_t i = 0; i < size(); ++i)
    if ((ms[i][0] & want[0]) == want[0] && (ms[i][1] & want[1]) == want[1]) ++groups[exps_[i]];
  return groups;
}

EnumerationTable enumerate_coverings(int order) { return EnumerationTable(order); }

double exact_point_probability(const EnumerationTable& t, double alpha, double beta, const PointSet& pts,
                               PointKind kind) {
  double num = 0.0;
  for (const auto& [e, cnt] : t.containing(pts, kind))
    num += static_cast<double>(cnt) * std::pow(alpha, 2 * e.first) * std::pow(beta, 2 * e.second);
  return num / t.partition_function(alpha, beta);
}

Rational exact_point_probability(const EnumerationTable& t, const Rational& alpha, const Rational& beta,
                                 const PointSet& pts, PointKind kind) {
  Rational num = 0;
  for (const auto& [e, cnt] : t.containing(pts, kind))
    num += Rational(cnt) * rpow(alpha, 2 * e.first) * rpow(beta, 2 * e.second);
  return num / t.partition_function(alpha, beta);
}

double dp_point_probability(int N, double alpha, double beta, const PointSet& pts) {
  const WeightedAztecGraph g(N, alpha, beta);
  const int n = 2 * N, bottom = -n - 1;
  using State = std::vector<int>;  // rows, descending
  auto required = [&](int c, const State& s) {
    for (const Site p : pts)
      if (p.col == c && !std::binary_search(s.begin(), s.end(), p.row, std::greater<int>())) return false;
    return true;
  };
  auto run = [&](bool with_events) {
    std::map<State, double> cur;
    State start;
    for (int k = -1; k >= -n; --k) start.push_back(k);
    cur[start] = 1.0;
    if (with_events && !required(0, start)) return 0.0;
    for (int c = 0; c < 2 * n; ++c) {
      std::map<State, double> next;
      for (const auto& [s, w] : cur) {
        if (c % 2 == 0) {
          // each path moves right or diagonally down into column c+1
          const int r = static_cast<int>(s.size());
          for (int mask = 0; mask < (1 << r); ++mask) {
            State t(r);
            double v = w;
            bool ok = true;
            for (int i = 0; i < r; ++i) {
              const bool d = (mask >> i) & 1;
              t[i] = s[i] - d;
              if (d) v *= diagonal_step_weight(g, {c, s[i]});
              if (i > 0 && t[i] >= t[i - 1]) ok = false;
            }
            if (ok) next[t] += v;
          }
        } else {
          // enter column c+1, drop vertically, lowest path runs to the bottom
          const int ce = c + 1;
          const int r = static_cast<int>(s.size());
          if (r == 0) {
            next[{}] += w;
            continue;
          }
          double wlow = w;
          for (int k = s[r - 1]; k > bottom; --k) wlow *= vertical_step_weight(g, {ce, k});
          State t(r - 1);
          auto rec = [&](auto&& self, int i, double v) -> void {
            if (i == r - 1) {
              next[t] += v;
              return;
            }
            double acc = v;
            for (int x = s[i]; x > s[i + 1]; --x) {
              t[i] = x;
              self(self, i + 1, acc);
              acc *= vertical_step_weight(g, {ce, x});
            }
          };
          rec(rec, 0, wlow);
        }
      }
      cur.clear();
      for (auto& [s, w] : next)
        if (!with_events || required(c + 1, s)) cur.emplace(s, w);
    }
    double total = 0.0;
    for (const auto& [s, w] : cur) total += w;
    return total;
  };
  return run(true) / run(false);
}

namespace {

double rational_probability(const EnumerationTable& t, const Rational& a, const Rational& b, const Rational& z,
                            const PointSet& pts) {
  Rational num = 0;
  for (const auto& [e, cnt] : t.containing(pts, PointKind::Kernel))
    num += Rational(cnt) * rpow(a, 2 * e.first) * rpow(b, 2 * e.second);
  return static_cast<double>(num / z);
}

}  // namespace

OracleReport oracle_vs_kernel_report(int N, double alpha, double beta, const Contours& contours) {
  if (N != 2) throw ValidationError("oracle report is available for N = 2 only");
  const EnumerationTable t(2 * N);
  const Rational a(alpha), b(beta);
  const Rational z = t.partition_function(a, b);
  KernelTable K(N, alpha, beta, KernelFormula::Theorem, contours);
  OracleReport r;
  r.N = N;
  r.alpha = alpha;
  r.beta = beta;
  std::vector<Site> sites;
  for (int c = 1; c <= 4 * N - 1; ++c)
    for (int p = -2 * N; p <= -1; ++p) sites.push_back({c, p});
  auto compare = [&](PointSet pts) {
    OracleComparison c;
    std::sort(pts.begin(), pts.end());
    c.points = pts;
    c.oracle = rational_probability(t, a, b, z, pts);
    double im = 0.0;
    c.kernel = K.probability(pts, &im);
    c.diff = std::abs(c.kernel - c.oracle);
    r.max_diff = std::max(r.max_diff, c.diff);
    r.max_imag = std::max(r.max_imag, im);
    return c;
  };
  for (std::size_t i = 0; i < sites.size(); ++i) r.singles.push_back(compare({sites[i]}));
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j) r.pairs.push_back(compare({sites[i], sites[j]}));
  return r;
}

std::string OracleReport::text(std::size_t worst) const {
  std::ostringstream os;
  os << fmt::format("N={} alpha={} beta={} singles={} pairs={} max_diff={:.3e} max_imag={:.3e}\n", N, alpha, beta,
                    singles.size(), pairs.size(), max_diff, max_imag);
  std::vector<const OracleComparison*> all;
  for (const auto& c : singles) all.push_back(&c);
  for (const auto& c : pairs) all.push_back(&c);
  std::sort(all.begin(), all.end(), [](auto* x, auto* y) { return x->diff > y->diff; });
  for (std::size_t i = 0; i < std::min(worst, all.size()); ++i) {
    std::string pts;
    for (const Site s : all[i]->points) pts += fmt::format("({},{})", s.col, s.row);
    os << fmt::format("  {} oracle={:.15f} kernel={:.15f} diff={:.3e}\n", pts, all[i]->oracle, all[i]->kernel,
                      all[i]->diff);
  }
  return os.str();
}

std::string OracleReport::json() const {
  nlohmann::json j;
  j["N"] = N;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["max_diff"] = max_diff;
  j["max_imag"] = max_imag;
  auto rows = [](const std::vector<OracleComparison>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : v) {
      nlohmann::json pts = nlohmann::json::array();
      for (const Site s : c.points) pts.push_back({s.col, s.row});
      a.push_back({{"points", pts}, {"oracle", c.oracle}, {"kernel", c.kernel}, {"diff", c.diff}});
    }
    return a;
  };
  j["singles"] = rows(singles);
  j["pairs"] = rows(pairs);
  return j.dump();
}

}  // namespace splitaztec

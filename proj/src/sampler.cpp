#include "splitaztec/sampler.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "splitaztec/errors.hpp"
#include "splitaztec/exact_oracle.hpp"

namespace splitaztec {

namespace {

enum CellEdge { E12 = 0, E23 = 1, E34 = 2, E41 = 3 };

// cell edges as (black, direction code) relative to the cell centre c
struct CellEdgeGeom {
  int bx, by;  // black = c + (bx, by)
  int dir;
};
constexpr CellEdgeGeom kCell[4] = {
    {1, 0, kDirNorthWest},   // (E, N)
    {-1, 0, kDirNorthEast},  // (W, N)
    {-1, 0, kDirSouthEast},  // (W, S)
    {1, 0, kDirSouthWest},   // (E, S)
};

int opposite(int e) { return (e + 2) % 4; }

struct Level {
  int k;
  std::vector<double> w;  // 4 * black index + dir
  int bindex(Vertex b) const { return (b.x / 2) * k + (b.y - 1) / 2; }
  double& at(Vertex b, int dir) { return w[4 * bindex(b) + dir]; }
  double at(Vertex b, int dir) const { return w[4 * bindex(b) + dir]; }
};

// cell containing the edge (B, W) and the edge's position in it
std::pair<Vertex, int> locate(Vertex B, Vertex W) {
  const Vertex c{W.x, B.y};
  const bool east = B.x - W.x == 1, north = W.y - B.y == 1;
  int e;
  if (east)
    e = north ? E12 : E41;
  else
    e = north ? E23 : E34;
  return {c, e};
}

double cell_weight(const Level& L, Vertex c, int e) {
  return L.at({c.x + kCell[e].bx, c.y + kCell[e].by}, kCell[e].dir);
}

}  // namespace

DominoShuffler::DominoShuffler(int N, double alpha, double beta) : graph_(N, alpha, beta) {
  const int n = graph_.size_n();
  probs_.resize(n + 1);
  Level cur{n, std::vector<double>(4 * (n + 1) * n, 0.0)};
  for (const Edge& e : graph_.edges()) {
    const Vertex d{e.white.x - e.black.x, e.white.y - e.black.y};
    for (int k = 0; k < 4; ++k)
      if (kDirections[k] == d) cur.at(e.black, k) = e.weight;
  }
  for (int k = n; k >= 1; --k) {
    auto& p = probs_[k];
    p.assign(k * k, 0.0);
    std::vector<double> delta(k * k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const Vertex c{2 * a + 1, 2 * b + 1};
        const double w12 = cell_weight(cur, c, E12), w23 = cell_weight(cur, c, E23);
        const double w34 = cell_weight(cur, c, E34), w41 = cell_weight(cur, c, E41);
        const double d = w12 * w34 + w23 * w41;
        if (!(d > 0.0) || !std::isfinite(d)) throw NumericalError("shuffling weights degenerated");
        delta[a * k + b] = d;
        p[a * k + b] = w12 * w34 / d;
      }
    if (k == 1) break;
    Level next{k - 1, std::vector<double>(4 * k * (k - 1), 0.0)};
    double big = 0.0;
    for (int j = 0; j < k; ++j)
      for (int kk = 0; kk < k - 1; ++kk) {
        const Vertex b{2 * j, 2 * kk + 1};
        for (int dir = 0; dir < 4; ++dir) {
          const Vertex w{b.x + kDirections[dir].x, b.y + kDirections[dir].y};
          if (w.x < 1 || w.x > 2 * (k - 1) - 1) continue;
          const auto [c, e] = locate({w.x + 1, w.y + 1}, {b.x + 1, b.y + 1});
          const int ci = ((c.x - 1) / 2) * k + (c.y - 1) / 2;
          const double v = cell_weight(cur, c, opposite(e)) / delta[ci];
          next.at(b, dir) = v;
          big = std::max(big, v);
        }
      }
    // a global rescale leaves the measure unchanged
    for (double& v : next.w) v /= big;
    cur = std::move(next);
  }
}

DimerCovering DominoShuffler::sample(std::mt19937_64& rng) const {
  const int n = graph_.size_n();
  DimerCovering m{0, {}};
  std::vector<std::uint8_t> marks;
  for (int k = 1; k <= n; ++k) {
    marks.assign(k * k, 0);
    for (std::size_t bi = 0; bi < m.dir.size(); ++bi) {
      const Vertex b{2 * static_cast<int>(bi / m.n), 2 * static_cast<int>(bi % m.n) + 1};
      const Vertex d = kDirections[m.dir[bi]];
      const Vertex w{b.x + d.x, b.y + d.y};
      const auto [c, e] = locate({w.x + 1, w.y + 1}, {b.x + 1, b.y + 1});
      marks[((c.x - 1) / 2) * k + (c.y - 1) / 2] |= static_cast<std::uint8_t>(1u << e);
    }
    DimerCovering next{k, std::vector<std::uint8_t>((k + 1) * k, 255)};
    auto place = [&](Vertex c, int e) {
      const Vertex b{c.x + kCell[e].bx, c.y + kCell[e].by};
      next.dir[(b.x / 2) * k + (b.y - 1) / 2] = static_cast<std::uint8_t>(kCell[e].dir);
    };
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const Vertex c{2 * a + 1, 2 * b + 1};
        const std::uint8_t mk = marks[a * k + b];
        switch (mk) {
          case 0:
            if (uniform01(rng) < probs_[k][a * k + b]) {
              place(c, E12);
              place(c, E34);
            } else {
              place(c, E23);
              place(c, E41);
            }
            break;
          case 1 << E12:
          case 1 << E23:
          case 1 << E34:
          case 1 << E41:
            place(c, opposite(std::countr_zero(static_cast<unsigned>(mk))));
            break;
          case (1 << E12) | (1 << E34):
          case (1 << E23) | (1 << E41):
            break;
          default:
            throw NumericalError("shuffling produced an invalid cell");
        }
      }
    m = std::move(next);
  }
  validate_matching(graph_, m);
  return m;
}

DimerCovering sample_tiling(int N, double alpha, double beta, std::uint64_t seed) {
  DominoShuffler s(N, alpha, beta);
  std::mt19937_64 rng(seed);
  return s.sample(rng);
}

std::map<Site, double> empirical_point_marginals(int N, double alpha, double beta, std::size_t sample_count,
                                                 std::uint64_t seed) {
  if (sample_count < 1000) throw ValidationError("sample_count must be at least 1000");
  DominoShuffler s(N, alpha, beta);
  std::mt19937_64 rng(seed);
  std::map<Site, double> freq;
  for (int c = 1; c <= 4 * N - 1; ++c)
    for (int r = -2 * N; r <= -1; ++r) freq[{c, r}] = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const PointSet pts = paths_to_kernel_points(covering_to_paths(s.graph(), s.sample(rng)));
    for (const Site p : pts) {
      auto it = freq.find(p);
      if (it != freq.end()) it->second += 1.0;
    }
  }
  for (auto& [p, f] : freq) f /= static_cast<double>(sample_count);
  return freq;
}

namespace {

std::uint64_t covering_key(const DimerCovering& c) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < c.dir.size(); ++i) k |= std::uint64_t{c.dir[i]} << (2 * i);
  return k;
}

}  // namespace

ChiSquareResult chi_square_vs_enumeration(int N, double alpha, double beta, std::size_t samples, std::uint64_t seed,
                                          double quantile) {
  if (N > 2) throw ValidationError("chi-square test needs N <= 2");
  const EnumerationTable t(2 * N);
  const double z = t.partition_function(alpha, beta);
  std::unordered_map<std::uint64_t, std::size_t> index;
  std::vector<double> prob(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    index[covering_key(t.covering(i))] = i;
    const auto [a, b] = t.exponents(i);
    prob[i] = std::pow(alpha, 2 * a) * std::pow(beta, 2 * b) / z;
  }
  std::vector<std::size_t> counts(t.size(), 0);
  DominoShuffler s(N, alpha, beta);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto it = index.find(covering_key(s.sample(rng)));
    if (it == index.end()) throw NumericalError("sampler produced an unknown covering");
    ++counts[it->second];
  }
  ChiSquareResult r;
  r.samples = samples;
  double pooled_e = 0.0, pooled_o = 0.0;
  int bins = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = prob[i] * static_cast<double>(samples);
    if (e < 5.0) {
      pooled_e += e;
      pooled_o += static_cast<double>(counts[i]);
      ++r.pooled_bins;
      continue;
    }
    const double o = static_cast<double>(counts[i]);
    r.statistic += (o - e) * (o - e) / e;
    ++bins;
  }
  if (pooled_e > 0.0) {
    r.statistic += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
    ++bins;
  }
  r.dof = bins - 1;
  r.critical = boost::math::quantile(boost::math::chi_squared(r.dof), quantile);
  r.pass = r.statistic < r.critical;
  return r;
}

}  // namespace splitaztec

#pragma once

// Reference computations written directly from the model definitions, kept apart from the library.

#include <algorithm>
#include <array>
#include <complex>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using V = std::pair<int, int>;
using M2 = std::array<std::array<cd, 2>, 2>;

inline int mod4(int v) { return ((v % 4) + 4) % 4; }

// weight case table with alpha, beta powers as (a, b): weight = alpha^(2a) beta^(2b)
inline std::pair<int, int> weight_case(int N, V b, V w) {
  const int dx = w.first - b.first, dy = w.second - b.second;
  if (std::abs(dx) != 1 || std::abs(dy) != 1) std::abort();
  if (mod4(w.first) == 1 && dy == -1) {
    const int s = mod4(w.second) == 0 ? 1 : (mod4(w.second) == 2 ? -1 : 0);
    return w.first < 2 * N ? std::make_pair(s, 0) : std::make_pair(0, s);
  }
  return {0, 0};
}

inline double weight(int N, double alpha, double beta, V b, V w) {
  const auto [a, e] = weight_case(N, b, w);
  double r = 1.0;
  for (int i = 0; i < std::abs(a); ++i) r *= a > 0 ? alpha * alpha : 1.0 / (alpha * alpha);
  for (int i = 0; i < std::abs(e); ++i) r *= e > 0 ? beta * beta : 1.0 / (beta * beta);
  return r;
}

struct Diamond {
  int n;
  std::vector<V> whites, blacks;
  explicit Diamond(int n_) : n(n_) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k <= n; ++k) whites.push_back({2 * j + 1, 2 * k});
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k < n; ++k) blacks.push_back({2 * j, 2 * k + 1});
  }
  std::vector<std::pair<V, V>> edges() const {
    std::set<V> ws(whites.begin(), whites.end());
    std::vector<std::pair<V, V>> out;
    for (V b : blacks)
      for (int dx : {-1, 1})
        for (int dy : {-1, 1}) {
          const V w{b.first + dx, b.second + dy};
          if (ws.count(w)) out.push_back({b, w});
        }
    return out;
  }
};

// every perfect matching, black -> white, by backtracking over blacks in order
inline std::vector<std::map<V, V>> all_matchings(int n) {
  const Diamond d(n);
  std::map<V, std::vector<V>> nbr;
  for (auto [b, w] : d.edges()) nbr[b].push_back(w);
  std::vector<std::map<V, V>> out;
  std::map<V, V> cur;
  std::set<V> used;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d.blacks.size()) {
      out.push_back(cur);
      return;
    }
    const V b = d.blacks[i];
    for (V w : nbr[b]) {
      if (used.count(w)) continue;
      used.insert(w);
      cur[b] = w;
      rec(i + 1);
      cur.erase(b);
      used.erase(w);
    }
  };
  rec(0);
  return out;
}

inline M2 mul(const M2& x, const M2& y) {
  M2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r[i][j] += x[i][k] * y[k][j];
  return r;
}

// (1 e^2/z; e^-2 1), times z/(z-1) for the second factor
inline M2 factor(int kind, double eps, cd z) {
  const double e2 = kind <= 2 ? eps * eps : 1.0;
  M2 m{{{cd(1.0), e2 / z}, {1.0 / e2, cd(1.0)}}};
  if (kind == 2 || kind == 4)
    for (auto& row : m)
      for (auto& v : row) v *= z / (z - 1.0);
  return m;
}

inline M2 phi(double eps, cd z) { return mul(mul(factor(1, eps, z), factor(2, eps, z)), mul(factor(3, eps, z), factor(4, eps, z))); }

// eigenvalues from the characteristic polynomial, larger modulus first
inline std::pair<cd, cd> eigenvalues(const M2& m) {
  const cd t = m[0][0] + m[1][1], det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const cd s = std::sqrt(t * t - 4.0 * det);
  cd a = (t + s) / 2.0, b = (t - s) / 2.0;
  if (std::abs(b) > std::abs(a)) std::swap(a, b);
  return {a, b};
}

}  // namespace oracle

#include "splitaztec/lattice.hpp"

namespace oracle {

// kernel-point law of the order-2N diamond from the backtracking enumeration
struct PointLaw {
  std::vector<std::pair<double, splitaztec::PointSet>> items;  // weight, kernel points
  double Z = 0.0;

  PointLaw(int N, double alpha, double beta) {
    const splitaztec::WeightedAztecGraph g(N, alpha, beta);
    for (const auto& m : all_matchings(2 * N)) {
      std::vector<std::pair<splitaztec::Vertex, splitaztec::Vertex>> d;
      double w = 1.0;
      for (auto [b, wv] : m) {
        d.push_back({{b.first, b.second}, {wv.first, wv.second}});
        w *= weight(N, alpha, beta, b, wv);
      }
      const auto c = splitaztec::covering_from_dimers(g, d);
      items.push_back({w, splitaztec::paths_to_kernel_points(splitaztec::covering_to_paths(g, c))});
      Z += w;
    }
  }

  double probability(const splitaztec::PointSet& pts) const {
    double s = 0.0;
    for (const auto& [w, img] : items)
      if (std::includes(img.begin(), img.end(), pts.begin(), pts.end())) s += w;
    return s / Z;
  }
};

}  // namespace oracle

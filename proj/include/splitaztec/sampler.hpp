#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "splitaztec/lattice.hpp"

namespace splitaztec {

// Domino shuffling with per-cell creation probabilities obtained by repeatedly
// reducing the order-n edge weights (urban renewal on every odd-odd cell).
class DominoShuffler {
 public:
  DominoShuffler(int N, double alpha, double beta);

  DimerCovering sample(std::mt19937_64& rng) const;
  const WeightedAztecGraph& graph() const { return graph_; }
  // creation probability of the pair {(E,N), (W,S)} in cell (2a+1, 2b+1) of the order-k diamond
  double creation_probability(int k, int a, int b) const { return probs_[k][a * k + b]; }

 private:
  WeightedAztecGraph graph_;
  std::vector<std::vector<double>> probs_;
};

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

DimerCovering sample_tiling(int N, double alpha, double beta, std::uint64_t seed);

// occupation frequency of every kernel-addressable point
std::map<Site, double> empirical_point_marginals(int N, double alpha, double beta, std::size_t sample_count,
                                                 std::uint64_t seed);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double critical = 0.0;
  std::size_t samples = 0;
  int pooled_bins = 0;  // outcomes with expected count below 5, merged into one bin
  bool pass = false;
};

// order-2N sample histogram against the enumerated law (N <= 2)
ChiSquareResult chi_square_vs_enumeration(int N, double alpha, double beta, std::size_t samples, std::uint64_t seed,
                                          double quantile = 0.999);

}  // namespace splitaztec

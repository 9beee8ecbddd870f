#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "splitaztec/kernel_engine.hpp"
#include "splitaztec/lattice.hpp"

namespace splitaztec {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxEnumerationOrder = 6;

enum class PointKind { TopOfRun, Kernel };

// all coverings of the order-n diamond; direction codes packed two bits per black
class EnumerationTable {
 public:
  explicit EnumerationTable(int order);

  int order() const { return n_; }
  std::size_t size() const { return exps_.size(); }
  DimerCovering covering(std::size_t i) const;
  // weight = alpha^(2a) beta^(2b)
  std::pair<int, int> exponents(std::size_t i) const { return exps_[i]; }

  double partition_function(double alpha, double beta) const;
  Rational partition_function(const Rational& alpha, const Rational& beta) const;

  // sum over coverings whose point image contains pts, grouped by exponent pair
  std::map<std::pair<int, int>, std::int64_t> containing(const PointSet& pts, PointKind kind) const;

 private:
  int n_, words_;
  std::vector<std::uint64_t> packed_;
  std::vector<std::pair<int, int>> exps_;
  mutable std::vector<std::array<std::uint64_t, 2>> top_masks_, kernel_masks_;

  const std::vector<std::array<std::uint64_t, 2>>& masks(PointKind kind) const;
};

EnumerationTable enumerate_coverings(int order);

double exact_point_probability(const EnumerationTable& t, double alpha, double beta, const PointSet& pts,
                               PointKind kind = PointKind::Kernel);
Rational exact_point_probability(const EnumerationTable& t, const Rational& alpha, const Rational& beta,
                                 const PointSet& pts, PointKind kind = PointKind::Kernel);

// column transfer over kernel points; exact in floating point for any even n
double dp_point_probability(int N, double alpha, double beta, const PointSet& pts);

struct OracleComparison {
  PointSet points;
  double oracle = 0.0, kernel = 0.0, diff = 0.0;
};

struct OracleReport {
  int N = 2;
  double alpha = 0.0, beta = 0.0;
  std::vector<OracleComparison> singles, pairs;
  double max_diff = 0.0;
  double max_imag = 0.0;
  bool passed(double tol = 1e-8) const { return max_diff < tol && max_imag < tol; }
  std::string text(std::size_t worst = 5) const;
  std::string json() const;
};

OracleReport oracle_vs_kernel_report(int N, double alpha, double beta, const Contours& contours = {});

}  // namespace splitaztec

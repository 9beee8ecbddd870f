#pragma once

#include <map>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "splitaztec/lattice.hpp"
#include "splitaztec/transfer_algebra.hpp"

namespace splitaztec {

struct ContourSpec {
  cd center{0.0, 0.0};
  double radius = 1.0;
  int node_count = 0;  // 0: adaptive
};

struct Contours {
  ContourSpec gamma1{{1.0, 0.0}, 0.5, 0};
  ContourSpec gamma01{{0.0, 0.0}, 2.0, 0};
};

inline constexpr double kContourClearance = 0.1;

// default circles, checked against the cuts of r, F and g for (alpha, beta)
Contours make_contours(int N, double alpha, double beta);
// throws GeometryError when gamma1 does not enclose 1 but not 0, meets a cut,
// or when gamma01 does not enclose 0 and gamma1 with clearance
void check_contours(const Contours& c, double alpha, double beta);
// additionally requires gamma01 to stay off the cuts of r_eps
void check_correction_contours(const Contours& c, double eps);

// (4m + shift, 2 xi + sub) for the second argument, (4m - shift, 2 xi + sub) for the first
struct KernelCoordinate {
  int m = 1;
  int xi = -1;
  int sub = 0;
  int shift = 0;
};

using KernelBlock = Mat2cd;  // at(j, i)

enum class KernelFormula { Theorem, Lemma, TwoPeriodic };

struct KernelOptions {
  int digits = 0;  // 0: automatic (double, raised when rounding dominates), -1: double, otherwise mpfr digits
  int max_digits = 256;
  double tolerance = 1e-11;
  int min_nodes = 64;
  int max_nodes = 8192;
};

struct QuadratureInfo {
  int nodes = 0;
  double change = 0.0;  // difference between the last two node counts
  double scale = 0.0;   // magnitude of the largest summand
  int digits = 0;       // working precision used, 0 for double
  bool noise_limited = false;
};

// with a fixed precision, a stalled node doubling is accepted when the change is below this (relative)
inline constexpr double kNoiseAcceptance = 1e-8;

// block over columns: first argument column colp in [1, 4N-1] and row pair xip,
// second argument column col and row pair xi
KernelBlock column_block(KernelFormula f, int N, double alpha, double beta, int colp, int xip, int col, int xi,
                         const Contours& contours = {}, const KernelOptions& opt = {}, QuadratureInfo* info = nullptr);

KernelBlock kernel_block(int N, double alpha, double beta, int mprime, int xiprime, int m, int xi,
                         const Contours& contours = {}, const KernelOptions& opt = {});
KernelBlock intermediate_kernel_block(int N, double alpha, double beta, int mprime, int xiprime, int m, int xi,
                                      const Contours& contours = {}, const KernelOptions& opt = {});
KernelBlock two_periodic_block(int N, double eps, int mprime, int xiprime, int m, int xi,
                               const Contours& contours = {}, const KernelOptions& opt = {});
cd extended_kernel_entry(int N, double alpha, double beta, const KernelCoordinate& first,
                         const KernelCoordinate& second, const Contours& contours = {},
                         const KernelOptions& opt = {});

// kernel-addressable points are (column, row) with column in [1, 4N-1], row in [-2N, -1]
bool kernel_addressable(int N, Site s);

class KernelTable {
 public:
  KernelTable(int N, double alpha, double beta, KernelFormula f = KernelFormula::Theorem, Contours contours = {},
              KernelOptions opt = {});

  KernelBlock block(int colp, int xip, int col, int xi);
  cd entry(Site a, Site b);
  Eigen::MatrixXcd matrix(const PointSet& pts);
  // determinant; the imaginary part is returned through imag_residue
  double probability(const PointSet& pts, double* imag_residue = nullptr);
  const QuadratureInfo& last_info() const { return info_; }
  int half_n() const { return N_; }

 private:
  int N_;
  double alpha_, beta_;
  KernelFormula f_;
  Contours contours_;
  KernelOptions opt_;
  QuadratureInfo info_;
  std::map<std::tuple<int, int, int, int>, KernelBlock> cache_;
};

double point_probability(int N, double alpha, double beta, const PointSet& pts, const Contours& contours = {},
                         double* imag_residue = nullptr);

}  // namespace splitaztec

#pragma once

#include <array>
#include <string>
#include <vector>

#include "splitaztec/transfer_algebra.hpp"

namespace splitaztec {

enum class Region { Frozen, Rough, Smooth, Degenerate };

const char* region_name(Region r);

struct RegionQuery {
  double x = 0.25, y = -0.5;
  double alpha = 0.5, beta = 0.5;
};

// side parameter: alpha left of the interface, beta right of it
double side_parameter(const RegionQuery& q);

struct SaddleReport {
  double eps = 0.0;
  std::array<cd, 4> roots{};   // z1*, z2*, z3*, z4* when named, otherwise in root-finder order
  std::array<int, 4> sheet{};  // 1 or 2
  std::array<double, 4> residual{};
  int root_count = 4;  // 2 when the (z+1)^2 factor is spurious (eps = 1)
  bool named = false;  // roots follow the z1*..z4* convention
  Region region = Region::Degenerate;
  double min_pairwise_gap = 0.0;
};

// coefficients in increasing degree; zeros are the saddles of psi_1 and psi_2 together
std::vector<double> saddle_polynomial(const RegionQuery& q);
std::vector<double> saddle_polynomial(double eps, double x, double y);

SaddleReport find_saddles(const RegionQuery& q);
SaddleReport find_saddles(double eps, double x, double y);

bool strong_coupling(const RegionQuery& q);
// z1* inside the cut of g, for Smooth points (a second description of the same region)
bool saddle_in_coupling_cut(const RegionQuery& q);

struct PhaseGrid {
  double alpha = 0.5, beta = 0.5;
  int resolution = 64;
  std::vector<double> xs, ys;
  std::vector<std::vector<Region>> regions;      // [ix][iy]
  std::vector<std::vector<bool>> strong;         // [ix][iy]
  std::vector<std::array<double, 4>> boundaries; // x0 y0 x1 y1 segments
  std::vector<std::array<double, 4>> strong_boundaries;
  std::vector<std::array<double, 2>> interface_flags;  // crossings of x = 1/2, not refined
};

// cell-centred grid in (0,1) x (-1,0), marching squares with bisection refinement
PhaseGrid boundary_scan(double alpha, double beta, int resolution, double refine_tol = 1e-6);

std::string phase_json(const PhaseGrid& g, const std::string& meta_json);
std::string phase_svg(const PhaseGrid& g, const std::string& meta_json, int pixels = 512);

}  // namespace splitaztec

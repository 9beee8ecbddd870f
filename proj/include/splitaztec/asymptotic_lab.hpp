#pragma once

#include <string>
#include <vector>

#include "splitaztec/kernel_engine.hpp"
#include "splitaztec/saddle_phase.hpp"

namespace splitaztec {

// m = round(xN) + x1, m' = round(xN) + x2, xi = round(yN) + y1, xi' = round(yN) + y2
struct LocalCoordinate {
  double x = 0.25, y = -0.5;
  int x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  int N = 8;
};

struct ResolvedCoordinate {
  int N = 0;
  int mprime = 0, xiprime = 0, m = 0, xi = 0;
};

// throws ValidationError for offsets above sqrt(N), coordinates outside the kernel range,
// or points on different sides of the interface
ResolvedCoordinate resolve(const LocalCoordinate& c);

struct AsymptoticOptions {
  int digits = 0;  // 0: chosen from the cancellation between summands and result; -1: double only
  int max_digits = 240;
  double tolerance = 1e-9;  // relative to the block
  int min_nodes = 64;
  int max_nodes = 4096;
};

struct IntegralInfo {
  int nodes = 0;
  int digits = 0;  // 0 for double precision
  double change = 0.0;
  double log10_scale = 0.0;      // largest summand
  double log10_magnitude = 0.0;  // largest entry of the result
  double log10_first = 0.0;      // first entry, kept when it underflows a double
};

// I^eps_{l,k}; l is fixed by the side (2 for the alpha side, 1 for the beta side) and must match
KernelBlock correction_integral(int l, int k, const LocalCoordinate& c, double alpha, double beta,
                                const Contours& contours = {}, const AsymptoticOptions& opt = {},
                                IntegralInfo* info = nullptr);
KernelBlock correction_integral(int l, int k, int N, double alpha, double beta, int mprime, int xiprime, int m, int xi,
                                const Contours& contours = {}, const AsymptoticOptions& opt = {},
                                IntegralInfo* info = nullptr);

// the single integral over |z| = 1 left by pushing gamma1 to infinity (alpha side, k = 1)
KernelBlock single_term_remainder(const LocalCoordinate& c, double alpha, double beta,
                                  const AsymptoticOptions& opt = {}, IntegralInfo* info = nullptr);

// max |r_{eps,2}| over the unit circle, sampled at half-integer nodes
double unit_circle_r2_max(double eps, int nodes = 1024);

enum class DecayTerm { I22, I21, Remainder };
enum class DecayModel { PowerLaw, Exponential };

const char* decay_term_name(DecayTerm t);
const char* decay_model_name(DecayModel m);

struct DecayFit {
  std::vector<int> N_values;
  std::vector<double> magnitudes;  // |first entry|
  std::vector<double> log10_magnitudes;
  DecayModel model = DecayModel::PowerLaw;
  double exponent = 0.0;  // power-law slope or exponential rate
  double quality = 0.0;   // R^2 of the chosen model
  double power_slope = 0.0, power_r2 = 0.0;
  double exp_rate = 0.0, exp_r2 = 0.0;
  std::vector<std::string> warnings;
};

// least squares of log|v| against log N and against N
DecayFit fit_decay(const std::vector<int>& N_values, const std::vector<double>& log_magnitudes);

struct LocalOffsets {
  int x1 = 0, x2 = 0, y1 = 0, y2 = 0;
};

// on the beta side I22 and I21 stand for I_{1,2} and I_{1,1}
DecayFit decay_profile(DecayTerm term, const RegionQuery& q, const LocalOffsets& offsets,
                       const std::vector<int>& N_list, const Contours& contours = {},
                       const AsymptoticOptions& opt = {});

std::string decay_csv(DecayTerm term, const RegionQuery& q, const DecayFit& fit);
std::string decay_json(DecayTerm term, const RegionQuery& q, const DecayFit& fit);

}  // namespace splitaztec

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "splitaztec/asymptotic_lab.hpp"

using namespace splitaztec;

TEST_CASE("equal parameters leave no correction") {
  for (int k : {1, 2}) {
    CHECK(max_abs(correction_integral(2, k, 4, 0.4, 0.4, 1, -2, 1, -3)) < 1e-12);
    CHECK(max_abs(correction_integral(1, k, 4, 0.6, 0.6, 3, -1, 3, -4)) < 1e-12);
  }
}

TEST_CASE("kernel splits into two-periodic part and corrections") {
  for (auto [a, b] : {std::pair{0.5, 1.0 / 3.0}, std::pair{0.2, 0.6}})
    for (int side = 0; side < 2; ++side)
      for (int N : {4, 8}) {
        const int mp = side ? N - 1 : 1, m = side ? N / 2 + 1 : N / 2 - 1, xip = -2, xi = -N + 1;
        const int l = side ? 1 : 2;
        const KernelBlock K = kernel_block(N, a, b, mp, xip, m, xi);
        const KernelBlock T = two_periodic_block(N, side ? b : a, mp, xip, m, xi);
        const KernelBlock I1 = correction_integral(l, 1, N, a, b, mp, xip, m, xi);
        const KernelBlock I2 = correction_integral(l, 2, N, a, b, mp, xip, m, xi);
        double d = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(K.at(i, j) - T.at(i, j) - I1.at(i, j) - I2.at(i, j)));
        CHECK(d < 1e-8);
      }
}

TEST_CASE("side and offset validation") {
  CHECK_THROWS_AS(correction_integral(1, 2, 4, 0.5, 0.3, 1, -2, 1, -3), ValidationError);
  CHECK_THROWS_AS(correction_integral(2, 2, 4, 0.5, 0.3, 1, -2, 3, -3), ValidationError);
  CHECK_THROWS_AS(correction_integral(2, 3, 4, 0.5, 0.3, 1, -2, 1, -3), ValidationError);
  LocalCoordinate c{0.25, -0.25, 0, 0, 0, 0, 16};
  const ResolvedCoordinate r = resolve(c);
  CHECK(r.m == 4);
  CHECK(r.xi == -4);
  c.x1 = 5;
  CHECK_THROWS_AS(resolve(c), ValidationError);
  c.x1 = 0;
  c.x = 0.5;
  CHECK_THROWS_AS(resolve(c), ValidationError);
  c.x = 0.48;
  c.x1 = 1;
  CHECK_THROWS_AS(resolve(c), ValidationError);
}

TEST_CASE("decay of the corrections") {
  const RegionQuery rough{0.25, -0.25, 0.5, 1.0 / 3.0};
  const DecayFit f = decay_profile(DecayTerm::I22, rough, {}, {8, 16, 24, 32});
  CHECK(f.magnitudes.back() < f.magnitudes.front());
  const DecayFit g = decay_profile(DecayTerm::I21, rough, {}, {8, 16, 24, 32});
  CHECK(g.model == DecayModel::Exponential);
  CHECK(g.exponent < 0.0);
  CHECK(g.quality > 0.99);
  const DecayFit r = decay_profile(DecayTerm::Remainder, rough, {}, {8, 16, 24, 32});
  CHECK(r.model == DecayModel::Exponential);
  CHECK(r.exponent < -0.5);
  CHECK(unit_circle_r2_max(0.5) < 1.0);
  CHECK(unit_circle_r2_max(0.5) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(unit_circle_r2_max(0.9) < 1.0);
}

TEST_CASE("fit on synthetic data") {
  std::vector<int> n{10, 20, 40, 80};
  std::vector<double> pw, ex;
  for (int v : n) {
    pw.push_back(std::log(3.0) - 1.5 * std::log(static_cast<double>(v)));
    ex.push_back(-0.2 * v + 1.0);
  }
  const DecayFit a = fit_decay(n, pw);
  CHECK(a.model == DecayModel::PowerLaw);
  CHECK(a.exponent == doctest::Approx(-1.5));
  CHECK(a.quality == doctest::Approx(1.0));
  const DecayFit b = fit_decay(n, ex);
  CHECK(b.model == DecayModel::Exponential);
  CHECK(b.exponent == doctest::Approx(-0.2));
  CHECK_THROWS_AS(fit_decay({1, 2, 3}, {0, 0, 0}), ValidationError);
}

TEST_CASE("csv and json") {
  const RegionQuery q{0.25, -0.25, 0.5, 1.0 / 3.0};
  const DecayFit f = fit_decay({8, 16, 24, 32}, {-1.0, -2.0, -3.0, -4.0});
  const std::string csv = decay_csv(DecayTerm::I22, q, f);
  CHECK(csv.find("term,x,y,alpha,beta,N,magnitude") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 5);
  const std::string js = decay_json(DecayTerm::I22, q, f);
  CHECK(js.find("\"exponent\"") != std::string::npos);
  CHECK(js.find("exponential") != std::string::npos);
}

TEST_CASE("outer circle must pass between the cuts") {
  CHECK_THROWS_AS(correction_integral(1, 2, 4, 0.2, 0.9, 3, -1, 3, -4), GeometryError);
}

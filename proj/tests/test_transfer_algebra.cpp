#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "splitaztec/transfer_algebra.hpp"

using namespace splitaztec;

namespace {

double diff(const Mat2cd& m, const oracle::M2& o) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(m.at(i, j) - o[i][j]));
  return d;
}

// random points away from the real axis, hence off every cut
cd random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.2, 4.0), t(0.15, 2.99);
  const double s = rng() & 1 ? 1.0 : -1.0;
  return std::polar(r(rng), s * t(rng));
}

}  // namespace

TEST_CASE("elementary factors") {
  const Mat2cd three = elementary_factor(FactorKind::Three, 1.0, cd(2.0));
  CHECK(max_abs_diff(three, Mat2cd(1.0, 0.5, 1.0, 1.0)) < 1e-15);
  const cd z(0.7, -1.3);
  CHECK(max_abs_diff(elementary_factor(FactorKind::Eps1, 1.0, z), elementary_factor(FactorKind::Three, 1.0, z)) <
        1e-15);
  const Mat2cd e2 = elementary_factor(FactorKind::Eps2, 0.5, cd(2.0));
  CHECK(max_abs_diff(e2, Mat2cd(2.0, 0.25, 8.0, 2.0)) < 1e-14);
  CHECK_THROWS_AS(elementary_factor(FactorKind::Four, 0.5, cd(1.0)), SingularInputError);
  CHECK_THROWS_AS(elementary_factor(FactorKind::Three, 0.5, cd(0.0)), SingularInputError);
}

TEST_CASE("transfer matrix against the explicit product") {
  CHECK(diff(transfer_matrix(0.5, cd(4.0)), oracle::phi(0.5, 4.0)) < 1e-13);
  CHECK(std::abs(transfer_matrix(0.5, cd(2.0, 3.0)).det() - 1.0) < 1e-13);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const cd z = random_point(rng);
    const double eps = 0.2 + 0.8 * (i % 7) / 6.0;
    const Mat2cd m = transfer_matrix(eps, z);
    CHECK(diff(m, oracle::phi(eps, z)) < 1e-12 * std::max(1.0, max_abs(m)));
    const auto e = eigen_pair(eps, z);
    CHECK(std::abs(m.trace() - e.r1 - e.r2) < 1e-12 * std::abs(m.trace()) + 1e-13);
  }
}

TEST_CASE("eigenvalues") {
  const auto [big, small] = oracle::eigenvalues(oracle::phi(0.5, 4.0));
  const auto e = eigen_pair(0.5, cd(4.0));
  CHECK(std::abs(e.r1 - big) < 1e-12 * std::abs(big));
  CHECK(std::abs(e.r2 - small) < 1e-12);
  CHECK(e.r1.real() > 1.0);
  CHECK(std::abs(e.r1.imag()) < 1e-14);
  const auto m = eigen_pair(0.5, cd(-1.0));
  CHECK(std::abs(m.r1 * m.r2 - 1.0) < 1e-12);
  for (double x : {0.1, 0.5, 2.0, 9.0}) {
    const auto p = eigen_pair(0.3, cd(x));
    CHECK(p.r1.real() > 1.0);
    CHECK(std::abs(p.r1.imag()) < 1e-12);
  }
  CHECK_THROWS_AS(eigen_pair(0.5, cd(-0.1)), BranchCutError);
  CHECK_THROWS_AS(eigen_pair(0.5, cd(-5.0)), BranchCutError);
}

TEST_CASE("pole of order two at one") {
  auto r1 = [](cd z) { return eigen_pair(0.5, z).r1; };
  CHECK(estimate_pole_order(r1, cd(1.0), cd(1.0, 0.5)) == doctest::Approx(2.0).epsilon(0.05));
  // (z-1)^2 r1 settles to a nonzero constant
  const cd a = std::pow(cd(1e-4, 1e-4), 2) * r1(cd(1.0 + 1e-4, 1e-4));
  const cd b = std::pow(cd(1e-5, 1e-5), 2) * r1(cd(1.0 + 1e-5, 1e-5));
  CHECK(std::abs(a) > 1e-3);
  CHECK(std::abs(a - b) < 1e-2 * std::abs(b));
}

TEST_CASE("projectors") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const cd z = random_point(rng);
    const auto d = eigen_data(0.4, z);
    CHECK(max_abs(d.F1 * d.F2) < 1e-12);
    CHECK(max_abs_diff(d.F1 * d.F1, d.F1) < 1e-12);
  }
  const auto d = eigen_data(0.3, cd(2.0));
  CHECK(max_abs_diff(d.F1 + d.F2, Mat2cd::identity()) < 1e-15);
  const cd z(-5.0, 2.0);
  const auto q = eigen_data(0.5, z);
  CHECK(diff(q.r1 * q.F1 + q.r2 * q.F2, oracle::phi(0.5, z)) < 1e-12);
}

TEST_CASE("coupling function") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const cd z = random_point(rng);
    CHECK(std::abs(coupling(0.4, 0.4, z) - 0.5) < 1e-15);
    CHECK(std::abs(coupling(0.5, 0.2, z) - coupling(0.2, 0.5, z)) < 1e-13);
  }
  // scalar evaluation at z = 1
  const double a = 0.5, b = 1.0 / 3.0;
  const double num = 2.0 * (1.0 + a * a * b * b) + 2.0 * (a * a + b * b);
  const double den = 4.0 * a * b * std::sqrt((1.0 + a * a) * (1.0 + 1.0 / (a * a)) * (1.0 + b * b) * (1.0 + 1.0 / (b * b)));
  CHECK(std::abs(coupling(a, b, cd(1.0)) - num / den) < 1e-12);
  CHECK(std::abs(expansion_c00(a, b, cd(1.0))) > 0.1);
  CHECK(std::abs(expansion_c00(0.3, 0.3, cd(0.0, 2.0)) - 1.0) < 1e-15);
  CHECK_THROWS_AS(coupling(0.5, 0.2, cd(-0.1)), BranchCutError);
}

TEST_CASE("integer powers") {
  const Mat2cd m = transfer_matrix(0.5, cd(2.0, 1.0));
  CHECK(max_abs_diff(int_matrix_power(m, 0), Mat2cd::identity()) == 0.0);
  const Mat2cd u = transfer_matrix(0.5, cd(-1.0, 0.2));
  const double cond = max_abs(int_matrix_power(u, 7)) * max_abs(int_matrix_power(u, -7));
  CHECK(max_abs_diff(int_matrix_power(u, 7) * int_matrix_power(u, -7), Mat2cd::identity()) < 1e-14 * cond);
  const oracle::M2 o = oracle::phi(0.5, cd(2.0, 1.0));
  CHECK(diff(int_matrix_power(m, 3), oracle::mul(oracle::mul(o, o), o)) < 1e-11 * max_abs(int_matrix_power(m, 3)));
  CHECK_THROWS_AS(int_matrix_power(Mat2cd(2.0, 0.0, 0.0, 1.0), -1), ValidationError);
}

TEST_CASE("product trace and eigen") {
  const cd z(3.0);
  const oracle::M2 pa = oracle::mul(oracle::phi(0.5, z), oracle::phi(0.5, z));
  const oracle::M2 pb = oracle::mul(oracle::phi(1.0 / 3.0, z), oracle::phi(1.0 / 3.0, z));
  const oracle::M2 p = oracle::mul(pa, pb);
  const cd t = product_trace(0.5, 1.0 / 3.0, 4, z);
  CHECK(std::abs(t - (p[0][0] + p[1][1])) < 1e-10 * std::abs(t));

  const cd w(0.4, 0.9);
  const auto e = eigen_pair(0.6, w);
  CHECK(std::abs(product_trace(0.6, 0.6, 6, w) - (std::pow(e.r1, 6) + std::pow(e.r2, 6))) < 1e-10 * std::abs(std::pow(e.r1, 6)));

  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const cd u = random_point(rng);
    const auto pe = product_eigen(0.5, 1.0 / 3.0, 4, u);
    CHECK(std::abs(pe.r1N * pe.r2N - 1.0) < 1e-10);
  }
  for (int N : {2, 4, 8}) {
    auto r1N = [N](cd u) { return product_eigen(0.5, 1.0 / 3.0, N, u).r1N; };
    CHECK(estimate_pole_order(r1N, cd(1.0), cd(1.0, 1.0)) == doctest::Approx(2.0 * N).epsilon(0.05));
    auto tN = [N](cd u) { return product_trace(0.5, 1.0 / 3.0, N, u); };
    CHECK(estimate_pole_order(tN, cd(1.0), cd(1.0, 1.0)) == doctest::Approx(2.0 * N).epsilon(0.05));
  }
  double worst = 0.0;
  for (double h = 1e-1; h > 1e-5; h /= 3.0) worst = std::max(worst, max_abs(product_eigen(0.5, 1.0 / 3.0, 4, cd(1.0 + h, h)).F1N));
  CHECK(worst < 10.0);
  CHECK_THROWS_AS(product_trace(0.5, 0.5, 3, z), ValidationError);
}

TEST_CASE("leading coefficient of the small product eigenvalue") {
  const double a = 0.5, b = 1.0 / 3.0;
  for (cd w : {cd(2.0), cd(-1.0, 0.5)}) {
    const auto ea = eigen_pair(a, w), eb = eigen_pair(b, w);
    std::vector<double> rel;
    for (int N : {4, 8, 16}) {
      const auto pe = product_eigen(a, b, N, w);
      const cd lead = expansion_c00(a, b, w) * std::pow(ea.r2, N / 2) * std::pow(eb.r2, N / 2);
      rel.push_back(std::abs(pe.r2N - lead) / std::abs(lead));
    }
    CHECK(rel[2] <= rel[0] + 1e-12);
    CHECK(rel[2] < 1e-3);
  }
}

TEST_CASE("deformed family") {
  const cd z(2.0, 1.0);
  CHECK(max_abs_diff(deformed_transfer(0.5, 1.0, z), transfer_matrix(0.5, z)) < 1e-13);
  const double a = 0.9;
  const cd det = deformed_transfer(0.5, a, cd(3.0)).det();
  const double u = 1.0 - 1.0 / (a * a * 3.0), v = 1.0 - a * a / 3.0;
  CHECK(std::abs(det - u * u / (v * v)) < 1e-12);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const cd w = random_point(rng);
    const auto e = deformed_eigen(0.5, a, w);
    const cd tr = deformed_transfer(0.5, a, w).trace();
    CHECK(std::abs(tr - e.r1 - e.r2) < 1e-10 * std::max(1.0, std::abs(tr)));
  }
}

TEST_CASE("deformed expansion coefficients against numerical limits") {
  for (double a : {0.7, 0.8, 0.9}) {
    const double eps = 0.5, al = 0.5, be = 1.0 / 3.0, a2 = a * a;
    const auto c = deformed_expansion_coefficients(eps, al, be, a);
    const cd dir(0.3, 1.0);
    auto lim = [&](std::function<cd(cd)> f, double p) {
      cd v;
      richardson_limit([&](double h) { return f(p + h * dir); }, 1e-2, 6, &v);
      return v;
    };
    auto rel = [](cd v, double ref) { return std::abs(v - ref) / std::abs(ref); };
    CHECK(rel(lim([&](cd w) { return (w - a2) * (w - a2) * deformed_eigen(eps, a, w).r1; }, a2), c.c_plus) < 1e-5);
    CHECK(rel(lim([&](cd w) { return deformed_eigen(eps, a, w).r2; }, a2), c.d_plus) < 1e-5);
    CHECK(rel(lim([&](cd w) { return deformed_eigen(eps, a, w).r1; }, 1.0 / a2), c.c_minus) < 1e-5);
    CHECK(rel(lim([&](cd w) { return deformed_eigen(eps, a, w).r2 / ((w - 1.0 / a2) * (w - 1.0 / a2)); }, 1.0 / a2),
              c.d_minus) < 1e-5);
    CHECK(rel(lim([&](cd w) { return (deformed_coupling(al, be, a, w) - 0.5) / (w - a2); }, a2), c.b_plus) < 1e-5);
    CHECK(rel(lim([&](cd w) { return (deformed_coupling(al, be, a, w) - 0.5) / (w - 1.0 / a2); }, 1.0 / a2),
              c.b_minus) < 1e-5);
  }
}

TEST_CASE("saddle functions") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(0.05, 0.95), uy(-0.95, -0.05);
  for (int i = 0; i < 100; ++i) {
    const cd z = random_point(rng);
    const double x = ux(rng), y = uy(rng);
    const int k = 1 + (i & 1);
    const double h = 1e-5;
    const cd fd = (saddle_value(0.5, k, z + h, x, y).value - saddle_value(0.5, k, z - h, x, y).value) / (2.0 * h);
    const cd d = saddle_value(0.5, k, z, x, y).derivative;
    CHECK(std::abs(fd - d) < 1e-6 * std::max(1.0, std::abs(d)));
    CHECK(std::abs(saddle_derivative(0.5, 1, z, x, y) - saddle_derivative(0.5, 2, z, 1.0 - x, y)) < 1e-12);
    const cd d2 = (saddle_derivative(0.5, k, z + h, x, y) - saddle_derivative(0.5, k, z - h, x, y)) / (2.0 * h);
    CHECK(std::abs(d2 - saddle_second_derivative(0.5, k, z, x, y)) < 1e-5 * std::max(1.0, std::abs(d2)));
    // real parts agree under the symmetry (logs can differ by 2 pi i)
    CHECK(std::abs(saddle_value(0.5, 1, z, x, y).value.real() - saddle_value(0.5, 2, z, 1.0 - x, y).value.real()) < 1e-12);
  }
  // Re psi - y log|z| stays bounded along a ray
  const double x = 0.3, y = -0.4;
  const cd dir = std::polar(1.0, 0.7);
  std::vector<double> v;
  for (double r = 10.0; r <= 1e6; r *= 10.0) v.push_back(saddle_value(0.5, 1, r * dir, x, y).value.real() - y * std::log(r));
  CHECK(std::abs(v[4] - v[3]) < std::abs(v[2] - v[1]));
  CHECK(*std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()) < 1.0);
}

TEST_CASE("local coordinate phase") {
  CHECK(varphi_value(0.5, 1, cd(2.0), 0.0, 0.0) == cd(0.0));
  const cd z(1.5, 0.7);
  CHECK(std::abs(varphi_value(0.5, 1, z, 1.0, 0.0) + varphi_value(0.5, 2, z, 1.0, 0.0)) < 1e-13);
  const auto [big, small] = oracle::eigenvalues(oracle::phi(0.5, 2.0));
  CHECK(std::abs(varphi_value(0.5, 1, cd(2.0), 1.0, 1.0) - (std::log(2.0) - std::log(big))) < 1e-12);
}

#pragma once

// Closed-form 2x2 transfer matrices of the split two-periodic weighting, their
// eigen-data and the related scalar functions.  Everything is templated on the
// complex scalar so the same code runs in double and in multiprecision.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "splitaztec/errors.hpp"

namespace splitaztec {

using cd = std::complex<double>;

inline double to_double(double x) { return x; }
template <class R>
double to_double(const R& x) {
  return static_cast<double>(x);
}
template <class C>
cd to_cd(const C& z) {
  using std::imag;
  using std::real;
  return {to_double(real(z)), to_double(imag(z))};
}

template <class C>
struct Mat2 {
  C a, b, c, d;  // [[a b] [c d]]

  Mat2() : a(0.0), b(0.0), c(0.0), d(0.0) {}
  Mat2(const C& a_, const C& b_, const C& c_, const C& d_) : a(a_), b(b_), c(c_), d(d_) {}

  static Mat2 identity() { return Mat2(C(1.0), C(0.0), C(0.0), C(1.0)); }

  C det() const { return a * d - b * c; }
  C trace() const { return a + d; }

  const C& at(int r, int k) const { return r == 0 ? (k == 0 ? a : b) : (k == 0 ? c : d); }
  C& at(int r, int k) { return r == 0 ? (k == 0 ? a : b) : (k == 0 ? c : d); }

  // inverse through the adjugate, exact when det = 1
  Mat2 adjugate() const { return Mat2(d, -b, -c, a); }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                x.c * y.b + x.d * y.d);
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return Mat2(x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d);
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return Mat2(x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d);
  }
  friend Mat2 operator*(const C& s, const Mat2& x) { return Mat2(s * x.a, s * x.b, s * x.c, s * x.d); }
  friend Mat2 operator*(const Mat2& x, const C& s) { return s * x; }
  Mat2& operator+=(const Mat2& y) {
    a += y.a;
    b += y.b;
    c += y.c;
    d += y.d;
    return *this;
  }
};

using Mat2cd = Mat2<cd>;

template <class C>
Mat2cd to_cd(const Mat2<C>& m) {
  return Mat2cd(to_cd(m.a), to_cd(m.b), to_cd(m.c), to_cd(m.d));
}

inline double max_abs_diff(const Mat2cd& x, const Mat2cd& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}
inline double max_abs(const Mat2cd& x) {
  return std::max({std::abs(x.a), std::abs(x.b), std::abs(x.c), std::abs(x.d)});
}

template <class C>
C ipow(C base, long k) {
  if (k < 0) {
    base = C(1.0) / base;
    k = -k;
  }
  C r(1.0);
  while (k) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// branch conventions

inline constexpr double kCutTolerance = 1e-12;

// (-inf, -eps^-2] U [-eps^2, 0]
inline bool on_branch_cut(double eps, cd z, double tol = kCutTolerance) {
  if (std::abs(z.imag()) > tol) return false;
  const double x = z.real(), lo = eps * eps, hi = 1.0 / (eps * eps);
  return (x <= tol && x >= -lo - tol) || x <= -hi + tol;
}

// cuts of g_{alpha,beta}: [-max^-2, -min^-2] U [-max^2, -min^2] with min/max over alpha, beta
inline bool on_coupling_cut(double alpha, double beta, cd z, double tol = kCutTolerance) {
  if (alpha == beta || std::abs(z.imag()) > tol) return false;
  const double s = std::min(alpha, beta), l = std::max(alpha, beta);
  const double x = z.real();
  return (x >= -l * l - tol && x <= -s * s + tol) || (x >= -1.0 / (s * s) - tol && x <= -1.0 / (l * l) + tol);
}

namespace detail {

template <class C>
void require_off_cut(double eps, const C& z, const char* what) {
  if (on_branch_cut(eps, to_cd(z))) throw BranchCutError(std::string(what) + ": z on branch cut");
}
template <class C>
void require_away(const C& z, double p, const char* what) {
  if (std::abs(to_cd(z) - cd(p)) < 1e-14)
    throw SingularInputError(std::string(what) + ": singular at z = " + std::to_string(p));
}

}  // namespace detail

// sqrt(z) sqrt(z + eps^2) sqrt(z + eps^-2); cut exactly on the cut set, positive for z > 0
template <class C>
C branch_root(double eps, const C& z) {
  using std::sqrt;
  return sqrt(z) * sqrt(z + C(eps * eps)) * sqrt(z + C(1.0 / (eps * eps)));
}

// ---------------------------------------------------------------------------
// factor matrices and Phi

enum class FactorKind { Eps1, Eps2, Three, Four };

template <class C>
Mat2<C> elementary_factor(FactorKind kind, double eps, const C& z) {
  detail::require_away(z, 0.0, "elementary_factor");
  const C inv = C(1.0) / z;
  Mat2<C> m = (kind == FactorKind::Eps1 || kind == FactorKind::Eps2)
                  ? Mat2<C>(C(1.0), C(eps * eps) * inv, C(1.0 / (eps * eps)), C(1.0))
                  : Mat2<C>(C(1.0), inv, C(1.0), C(1.0));
  if (kind == FactorKind::Eps2 || kind == FactorKind::Four) {
    detail::require_away(z, 1.0, "elementary_factor");
    m = (z / (z - C(1.0))) * m;
  }
  return m;
}

template <class C>
Mat2<C> transfer_matrix(double eps, const C& z) {
  return elementary_factor(FactorKind::Eps1, eps, z) * elementary_factor(FactorKind::Eps2, eps, z) *
         elementary_factor(FactorKind::Three, eps, z) * elementary_factor(FactorKind::Four, eps, z);
}

// T_k(eps) and S_l(eps) of the extended kernel
template <class C>
Mat2<C> left_extension(int k, double eps, const C& z) {
  if (k == 0) return Mat2<C>::identity();
  Mat2<C> m = elementary_factor(FactorKind::Four, eps, z);
  if (k >= 2) m = elementary_factor(FactorKind::Three, eps, z) * m;
  if (k >= 3) m = elementary_factor(FactorKind::Eps2, eps, z) * m;
  return m;
}
template <class C>
Mat2<C> right_extension(int l, double eps, const C& z) {
  if (l == 0) return Mat2<C>::identity();
  Mat2<C> m = elementary_factor(FactorKind::Eps1, eps, z);
  if (l >= 2) m = m * elementary_factor(FactorKind::Eps2, eps, z);
  if (l >= 3) m = m * elementary_factor(FactorKind::Three, eps, z);
  return m;
}

template <class C>
Mat2<C> matrix_power_unchecked(Mat2<C> m, long k) {
  if (k < 0) {
    m = m.adjugate();
    k = -k;
  }
  Mat2<C> r = Mat2<C>::identity();
  while (k) {
    if (k & 1) r = r * m;
    m = m * m;
    k >>= 1;
  }
  return r;
}

template <class C>
Mat2<C> int_matrix_power(const Mat2<C>& m, long k) {
  if (k < 0 && std::abs(to_cd(m.det()) - 1.0) > 1e-9)
    throw ValidationError("int_matrix_power: negative power of a non-unimodular matrix");
  return matrix_power_unchecked(m, k);
}

// ---------------------------------------------------------------------------
// eigenvalues and projectors of Phi_eps

template <class C>
struct EigenPair {
  C r1, r2;
};

template <class C>
struct EigenData {
  C r1, r2;
  Mat2<C> F1, F2;
};

namespace detail {

template <class C>
EigenPair<C> eigen_from_root(double eps, const C& z, const C& q) {
  using std::abs;
  const double c = eps * eps + 1.0 / (eps * eps);
  const C zp1 = z + C(1.0);
  const C A = zp1 * zp1 + C(2.0 * c) * z;
  const C B = C(2.0 * (eps + 1.0 / eps)) * q;
  const C den = (z - C(1.0)) * (z - C(1.0));
  const C plus = A + B, minus = A - B;
  EigenPair<C> e;
  if (abs(plus) >= abs(minus)) {
    e.r1 = plus / den;
    e.r2 = C(1.0) / e.r1;
  } else {
    e.r2 = minus / den;
    e.r1 = C(1.0) / e.r2;
  }
  return e;
}

template <class C>
Mat2<C> projector_from_root(double eps, const C& z, const C& q) {
  const C s2 = C(-2.0 * eps) * q;
  const C t = z * C(eps * eps - 1.0) / s2;
  const C zp1 = z + C(1.0);
  return Mat2<C>(C(0.5) - t, C(-eps * eps) * zp1 / s2, -z * zp1 / s2, C(0.5) + t);
}

}  // namespace detail

template <class C>
EigenPair<C> eigen_pair(double eps, const C& z) {
  detail::require_off_cut(eps, z, "eigen_pair");
  detail::require_away(z, 1.0, "eigen_pair");
  return detail::eigen_from_root(eps, z, branch_root(eps, z));
}

template <class C>
Mat2<C> projector(double eps, int k, const C& z) {
  detail::require_off_cut(eps, z, "projector");
  const Mat2<C> F1 = detail::projector_from_root(eps, z, branch_root(eps, z));
  return k == 1 ? F1 : Mat2<C>::identity() - F1;
}

template <class C>
EigenData<C> eigen_data(double eps, const C& z) {
  detail::require_off_cut(eps, z, "eigen_data");
  detail::require_away(z, 1.0, "eigen_data");
  const C q = branch_root(eps, z);
  const EigenPair<C> e = detail::eigen_from_root(eps, z, q);
  EigenData<C> d;
  d.r1 = e.r1;
  d.r2 = e.r2;
  d.F1 = detail::projector_from_root(eps, z, q);
  d.F2 = Mat2<C>::identity() - d.F1;
  return d;
}

// ---------------------------------------------------------------------------
// coupling function g and the products phi_N

template <class C>
C coupling(double alpha, double beta, const C& z) {
  using std::sqrt;
  if (alpha == beta) return C(0.5);
  if (on_coupling_cut(alpha, beta, to_cd(z))) throw BranchCutError("coupling: z on branch cut");
  const double a2 = alpha * alpha, b2 = beta * beta;
  const C num = C(2.0 * (1.0 + a2 * b2)) * z + C(a2 + b2) * (z * z + C(1.0));
  const C den = C(4.0 * alpha * beta) * sqrt(z + C(a2)) * sqrt(z + C(1.0 / a2)) * sqrt(z + C(b2)) *
                sqrt(z + C(1.0 / b2));
  return num / den;
}

template <class C>
C expansion_c00(double alpha, double beta, const C& w) {
  const C g = coupling(alpha, beta, w);
  const C d = C(1.0) + C(2.0) * g;
  if (std::abs(to_cd(d)) < 1e-14) throw SingularInputError("expansion_c00: 1 + 2g vanishes");
  return C(2.0) / d;
}

inline void require_even(int N, const char* what) {
  if (N < 2 || N % 2 != 0) throw ValidationError(std::string(what) + ": N must be even and positive");
}

template <class C>
C product_trace(double alpha, double beta, int N, const C& z) {
  require_even(N, "product_trace");
  const auto ea = eigen_pair(alpha, z);
  const auto eb = eigen_pair(beta, z);
  const C g = coupling(alpha, beta, z);
  const long h = N / 2;
  const C a1 = ipow(ea.r1, h), a2 = ipow(ea.r2, h), b1 = ipow(eb.r1, h), b2 = ipow(eb.r2, h);
  return (C(0.5) + g) * (a1 * b1 + a2 * b2) + (C(0.5) - g) * (a2 * b1 + a1 * b2);
}

template <class C>
Mat2<C> product_matrix(double alpha, double beta, int N, const C& z) {
  require_even(N, "product_matrix");
  return matrix_power_unchecked(transfer_matrix(alpha, z), N / 2) *
         matrix_power_unchecked(transfer_matrix(beta, z), N / 2);
}

inline constexpr double kDegenerateTolerance = 1e-9;

template <class C>
struct ProductEigen {
  C r1N, r2N;
  Mat2<C> F1N, F2N;
};

template <class C>
ProductEigen<C> product_eigen(double alpha, double beta, int N, const C& z) {
  using std::abs;
  using std::sqrt;
  const C t = product_trace(alpha, beta, N, z);
  const C disc = t * t - C(4.0);
  if (std::abs(to_cd(disc)) < kDegenerateTolerance)
    throw DegenerateSpectrumError("product_eigen: t_N^2 - 4 vanishes");
  const C s = sqrt(disc);
  C big = (t + s) / C(2.0), small = (t - s) / C(2.0);
  if (abs(small) > abs(big)) std::swap(big, small);
  small = C(1.0) / big;
  ProductEigen<C> p;
  p.r1N = big;
  p.r2N = small;
  const Mat2<C> phi = product_matrix(alpha, beta, N, z);
  p.F1N = (C(1.0) / (big - small)) * (phi - small * Mat2<C>::identity());
  p.F2N = Mat2<C>::identity() - p.F1N;
  return p;
}

// ---------------------------------------------------------------------------
// a-deformed family

template <class C>
Mat2<C> deformed_transfer(double eps, double a, const C& z) {
  detail::require_away(z, 0.0, "deformed_transfer");
  detail::require_away(z, a * a, "deformed_transfer");
  const C inv = C(1.0) / z;
  const double e2 = eps * eps;
  auto M = [](const C& p, const C& q) { return Mat2<C>(C(1.0), p, q, C(1.0)); };
  const C pre = C(1.0) / ((C(1.0) - C(a * a) * inv) * (C(1.0) - C(a * a) * inv));
  return pre * (M(C(e2 / a) * inv, C(1.0 / (e2 * a))) * M(C(e2 * a) * inv, C(a / e2)) *
                M(C(1.0 / a) * inv, C(1.0 / a)) * M(C(a) * inv, C(a)));
}

template <class C>
C deformed_determinant(double a, const C& w) {
  const C u = C(1.0) - C(1.0 / (a * a)) / w, v = C(1.0) - C(a * a) / w;
  return (u * u) / (v * v);
}

inline std::pair<double, double> deformed_root_offsets(double eps, double a) {
  const double s = a + 1.0 / a, d = a - 1.0 / a;
  const double x = 0.25 * (s * s * (eps * eps + 1.0 / (eps * eps)) - 2.0 * d * d);
  const double r = std::sqrt(std::max(0.0, x * x - 4.0));
  return {(x + r) / 2.0, (x - r) / 2.0};
}

template <class C>
EigenPair<C> deformed_eigen(double eps, double a, const C& w) {
  using std::abs;
  using std::sqrt;
  detail::require_away(w, a * a, "deformed_eigen");
  const auto [rp, rm] = deformed_root_offsets(eps, a);
  const C q = sqrt(w) * sqrt(w + C(rp)) * sqrt(w + C(rm));
  const double s = a + 1.0 / a;
  const C A = (w + C(1.0)) * (w + C(1.0)) + C(0.5 * s * s * (eps * eps + 1.0 / (eps * eps))) * w;
  const C B = C(s * (eps + 1.0 / eps)) * q;
  const C den = (w - C(a * a)) * (w - C(a * a));
  const C det = deformed_determinant(a, w);
  EigenPair<C> e;
  if (abs(A + B) >= abs(A - B)) {
    e.r1 = (A + B) / den;
    e.r2 = det / e.r1;
  } else {
    e.r2 = (A - B) / den;
    e.r1 = det / e.r2;
  }
  return e;
}

template <class C>
C deformed_coupling(double alpha, double beta, double a, const C& w) {
  using std::sqrt;
  const double a2 = a * a, a4 = a2 * a2;
  const double al2 = alpha * alpha, be2 = beta * beta;
  const C num = C(2.0 * a2 * (al2 + be2)) * (w * w + C(1.0)) +
                C((al2 - 1.0) * (be2 - 1.0) * (a4 + 1.0) + 2.0 * a2 * (al2 + 1.0) * (be2 + 1.0)) * w;
  // (a^2+1)^2 (e^4+1) w - 2 e^2 ((a^4+1) w - 2 a^2 (w^2+w+1)) = 4 a^2 e^2 (w + s1)(w + s2)
  auto root = [&](double e) {
    const double e2 = e * e;
    const double lin = ((a2 + 1.0) * (a2 + 1.0) * (e2 * e2 + 1.0) - 2.0 * e2 * (a4 + 1.0) + 4.0 * a2 * e2) /
                       (4.0 * a2 * e2);
    const double r = std::sqrt(std::max(0.0, lin * lin - 4.0));
    const double s1 = (lin + r) / 2.0, s2 = (lin - r) / 2.0;
    return C(2.0 * a * e) * sqrt(w + C(s1)) * sqrt(w + C(s2));
  };
  return num / (C(2.0) * root(alpha) * root(beta));
}

template <class C>
C deformed_product_trace(double alpha, double beta, double a, int N, const C& w) {
  require_even(N, "deformed_product_trace");
  const auto ea = deformed_eigen(alpha, a, w);
  const auto eb = deformed_eigen(beta, a, w);
  const C g = deformed_coupling(alpha, beta, a, w);
  const long h = N / 2;
  const C a1 = ipow(ea.r1, h), a2 = ipow(ea.r2, h), b1 = ipow(eb.r1, h), b2 = ipow(eb.r2, h);
  return (C(0.5) + g) * (a1 * b1 + a2 * b2) + (C(0.5) - g) * (a1 * b2 + a2 * b1);
}

template <class C>
EigenPair<C> deformed_product_eigen(double alpha, double beta, double a, int N, const C& w) {
  using std::abs;
  using std::sqrt;
  const C t = deformed_product_trace(alpha, beta, a, N, w);
  const C det = ipow(deformed_determinant(a, w), N);
  const C s = sqrt(t * t - C(4.0) * det);
  C big = (t + s) / C(2.0), small = (t - s) / C(2.0);
  if (abs(small) > abs(big)) std::swap(big, small);
  return {big, det / big};
}

template <class C>
Mat2<C> deformed_product_matrix(double alpha, double beta, double a, int N, const C& w) {
  require_even(N, "deformed_product_matrix");
  return matrix_power_unchecked(deformed_transfer(alpha, a, w), N / 2) *
         matrix_power_unchecked(deformed_transfer(beta, a, w), N / 2);
}

struct DeformedCoefficients {
  double c_plus, c_minus, d_plus, d_minus, b_plus, b_minus;
};

DeformedCoefficients deformed_expansion_coefficients(double eps, double alpha, double beta, double a);

// ---------------------------------------------------------------------------
// saddle functions

template <class C>
struct SaddleFunctionValue {
  C value;
  C derivative;
};

// r_k'/r_k
template <class C>
C log_eigen_derivative(double eps, int k, const C& z) {
  const C q = branch_root(eps, z);
  const C t = C(eps + 1.0 / eps) * (z + C(1.0)) / ((z - C(1.0)) * q);
  return k == 1 ? -t : t;
}

template <class C>
SaddleFunctionValue<C> saddle_value(double eps, int k, const C& z, double x, double y) {
  using std::log;
  detail::require_off_cut(eps, z, "saddle_value");
  detail::require_away(z, 1.0, "saddle_value");
  const auto e = eigen_pair(eps, z);
  const C rk = k == 1 ? e.r1 : e.r2;
  SaddleFunctionValue<C> s;
  s.value = C(y + 1.0) * log(z) - log(z - C(1.0)) + C(0.5 - x) * log(rk);
  s.derivative = C(y + 1.0) / z - C(1.0) / (z - C(1.0)) + C(0.5 - x) * log_eigen_derivative(eps, k, z);
  return s;
}

template <class C>
C saddle_derivative(double eps, int k, const C& z, double x, double y) {
  return C(y + 1.0) / z - C(1.0) / (z - C(1.0)) + C(0.5 - x) * log_eigen_derivative(eps, k, z);
}

template <class C>
C saddle_second_derivative(double eps, int k, const C& z, double x, double y) {
  const C q = branch_root(eps, z);
  const C t = C(eps + 1.0 / eps) * (z + C(1.0)) / ((z - C(1.0)) * q);
  const C dlogq = C(0.5) * (C(1.0) / z + C(1.0) / (z + C(eps * eps)) + C(1.0) / (z + C(1.0 / (eps * eps))));
  const C dt = t * (C(1.0) / (z + C(1.0)) - C(1.0) / (z - C(1.0)) - dlogq);
  const C base = C(-(y + 1.0)) / (z * z) + C(1.0) / ((z - C(1.0)) * (z - C(1.0)));
  return base + C(0.5 - x) * (k == 1 ? -dt : dt);
}

template <class C>
C varphi_value(double eps, int k, const C& z, double x1, double y1) {
  using std::log;
  if (x1 == 0.0 && y1 == 0.0) return C(0.0);
  const auto e = eigen_pair(eps, z);
  return C(y1) * log(z) - C(x1) * log(k == 1 ? e.r1 : e.r2);
}

// ---------------------------------------------------------------------------
// limits and pole orders by Richardson extrapolation on h, h/2, h/4, ...

// polynomial extrapolation of f(h_j) to h = 0 with h_j = h0 / 2^j
double richardson_limit(const std::function<cd(double)>& f, double h0, int levels, cd* value = nullptr);

// order p of a pole (p > 0) or zero (p < 0) of f at z0, approached along direction dir
double estimate_pole_order(const std::function<cd(cd)>& f, cd z0, cd dir, double h0 = 1e-2, int levels = 6);

}  // namespace splitaztec

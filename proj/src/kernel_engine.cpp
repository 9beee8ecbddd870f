#include "splitaztec/kernel_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <type_traits>

#include <fmt/format.h>

#include "splitaztec/errors.hpp"
#include "splitaztec/mp.hpp"

namespace splitaztec {

namespace {

bool circle_meets_interval(const ContourSpec& s, double lo, double hi) {
  // intersections of the circle with the real axis
  const double c = s.center.real(), h = std::abs(s.center.imag());
  if (h > s.radius) return false;
  const double d = std::sqrt(s.radius * s.radius - h * h);
  for (double x : {c - d, c + d})
    if (x >= lo - kContourClearance && x <= hi + kContourClearance) return true;
  return false;
}

bool encloses(const ContourSpec& s, cd p, double margin) { return std::abs(p - s.center) < s.radius - margin; }

void check_eps_cuts(const ContourSpec& s, double eps, const char* name) {
  if (circle_meets_interval(s, -eps * eps, 0.0) || circle_meets_interval(s, -1e300, -1.0 / (eps * eps)))
    throw GeometryError(fmt::format("{} meets a branch cut of r_{}", name, eps));
}

}  // namespace

void check_contours(const Contours& c, double alpha, double beta) {
  if (c.gamma1.radius <= 0.0 || c.gamma01.radius <= 0.0) throw GeometryError("contour radius must be positive");
  if (!encloses(c.gamma1, 1.0, kContourClearance) || std::abs(c.gamma1.center) <= c.gamma1.radius + kContourClearance)
    throw GeometryError("gamma1 must surround 1 and not 0");
  check_eps_cuts(c.gamma1, alpha, "gamma1");
  check_eps_cuts(c.gamma1, beta, "gamma1");
  const double s = std::min(alpha, beta), l = std::max(alpha, beta);
  if (alpha != beta && (circle_meets_interval(c.gamma1, -l * l, -s * s) ||
                        circle_meets_interval(c.gamma1, -1.0 / (s * s), -1.0 / (l * l))))
    throw GeometryError("gamma1 meets a branch cut of g");
  if (!encloses(c.gamma01, 0.0, kContourClearance) ||
      std::abs(c.gamma1.center - c.gamma01.center) + c.gamma1.radius > c.gamma01.radius - kContourClearance)
    throw GeometryError("gamma01 must surround 0 and gamma1");
}

void check_correction_contours(const Contours& c, double eps) { check_eps_cuts(c.gamma01, eps, "gamma01"); }

Contours make_contours(int N, double alpha, double beta) {
  require_even(N, "make_contours");
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
    throw ValidationError("alpha and beta must lie in (0,1]");
  Contours c;
  check_contours(c, alpha, beta);
  return c;
}

bool kernel_addressable(int N, Site s) { return s.col >= 1 && s.col <= 4 * N - 1 && s.row >= -2 * N && s.row <= -1; }

namespace {

struct BlockSpec {
  KernelFormula f;
  int N;
  double alpha, beta;
  int colp, xip, col, xi;
};

template <class C>
C unit_root(double frac) {
  if constexpr (std::is_same_v<C, cd>) {
    return std::polar(1.0, 2.0 * std::numbers::pi * frac);
  } else {
    const mp::Real th = 2 * acos(mp::Real(-1)) * mp::Real(frac);
    return C(cos(th), sin(th));
  }
}

template <class C>
C to_scalar(cd z) {
  if constexpr (std::is_same_v<C, cd>)
    return z;
  else
    return C(z.real(), z.imag());
}

template <class C>
Mat2<C> w_part(const BlockSpec& s, const C& w) {
  const int half = s.N / 2;
  const int mp = (s.colp + 3) / 4, k = 4 * mp - s.colp;
  const double epsp = mp <= half ? s.alpha : s.beta;
  Mat2<C> A;
  switch (s.f) {
    case KernelFormula::Theorem: {
      const auto ea = eigen_data(s.alpha, w);
      const auto eb = eigen_data(s.beta, w);
      const C c00 = expansion_c00(s.alpha, s.beta, w);
      if (mp <= half)
        A = ipow(ea.r1, half - mp) * ea.F1 + (ipow(ea.r2, half - mp) * c00) * (ea.F2 * eb.F1 * ea.F1);
      else
        A = (ipow(eb.r1, half - mp) * c00) * (eb.F1 * ea.F1);
      break;
    }
    case KernelFormula::Lemma: {
      const auto pe = product_eigen(s.alpha, s.beta, s.N, w);
      const Mat2<C> pa = transfer_matrix(s.alpha, w);
      const Mat2<C> right = pe.F1N * matrix_power_unchecked(pa, half);
      if (mp <= half)
        A = matrix_power_unchecked(pa, -mp) * right;
      else
        A = matrix_power_unchecked(transfer_matrix(s.beta, w), half - mp) * matrix_power_unchecked(pa, -half) * right;
      break;
    }
    case KernelFormula::TwoPeriodic: {
      const auto e = eigen_data(s.alpha, w);
      A = ipow(e.r1, half - mp) * e.F1;
      break;
    }
  }
  const C pre = ipow(w, s.xip + s.N) / ipow(w - C(1.0), s.N);
  return pre * (left_extension(k, epsp, w) * A);
}

template <class C>
Mat2<C> z_part(const BlockSpec& s, const C& z) {
  const int half = s.N / 2;
  const int m = s.col / 4, l = s.col % 4;
  const double eps = m <= half ? s.alpha : s.beta;
  const double eps_s = m < half ? s.alpha : s.beta;
  const C pre = ipow(z - C(1.0), s.N) / ipow(z, s.xi + s.N);
  return pre * (matrix_power_unchecked(transfer_matrix(eps, z), m - half) * right_extension(l, eps_s, z));
}

template <class C>
Mat2<C> single_part(const BlockSpec& s, const C& z) {
  const int half = s.N / 2;
  const int mp = (s.colp + 3) / 4, k = 4 * mp - s.colp;
  const int m = s.col / 4, l = s.col % 4;
  const double epsp = mp <= half ? s.alpha : s.beta;
  const double eps = m <= half ? s.alpha : s.beta;
  const double eps_s = m < half ? s.alpha : s.beta;
  const Mat2<C> M = left_extension(k, epsp, z) * matrix_power_unchecked(transfer_matrix(epsp, z), half - mp) *
                    matrix_power_unchecked(transfer_matrix(eps, z), m - half) * right_extension(l, eps_s, z);
  return ipow(z, s.xip - s.xi) * M;
}

template <class C>
Mat2<C> evaluate(const BlockSpec& s, const Contours& ct, int M, double wphase, double* scale) {
  const C c1 = to_scalar<C>(ct.gamma1.center), c01 = to_scalar<C>(ct.gamma01.center);
  const C r1(ct.gamma1.radius), r01(ct.gamma01.radius);
  const C invM = C(1.0) / C(static_cast<double>(M));
  std::vector<C> zs(M);
  std::vector<Mat2<C>> Bz(M);
  double bmax = 0.0;
  for (int j = 0; j < M; ++j) {
    const C u = r01 * unit_root<C>(static_cast<double>(j) / M);
    zs[j] = c01 + u;
    Bz[j] = ((u / zs[j]) * invM) * z_part(s, zs[j]);
    bmax = std::max(bmax, max_abs(to_cd(Bz[j])));
  }
  Mat2<C> total;
  double amax = 0.0;
  for (int j = 0; j < M; ++j) {
    const C u = r1 * unit_root<C>((static_cast<double>(j) + wphase) / M);
    const C w = c1 + u;
    const Mat2<C> Aw = (u * invM) * w_part(s, w);
    amax = std::max(amax, max_abs(to_cd(Aw)));
    Mat2<C> bs;
    for (int i = 0; i < M; ++i) bs += (C(1.0) / (zs[i] - w)) * Bz[i];
    total += Aw * bs;
  }
  if (s.col > s.colp) {
    for (int j = 0; j < M; ++j) {
      const C u = r01 * unit_root<C>(static_cast<double>(j) / M);
      total = total - ((u / zs[j]) * invM) * single_part(s, zs[j]);
    }
  }
  const double gap = ct.gamma01.radius - std::abs(ct.gamma1.center - ct.gamma01.center) - ct.gamma1.radius;
  *scale = static_cast<double>(M) * amax * bmax / std::max(gap, 1e-3);
  return total;
}

// returns false when the node doubling stalls or the rounding floor exceeds the tolerance
template <class C>
bool adaptive(const BlockSpec& s, const Contours& ct, const KernelOptions& o, int digits, Mat2cd* out,
              QuadratureInfo* q) {
  const double unit = digits > 0 ? std::pow(10.0, -static_cast<double>(digits)) : 2.2e-16;
  auto run = [&](int M, double* scale) {
    try {
      return to_cd(evaluate<C>(s, ct, M, 0.0, scale));
    } catch (const DegenerateSpectrumError&) {
      if (s.f != KernelFormula::Lemma) throw;
      return to_cd(evaluate<C>(s, ct, M, 0.5, scale));
    }
  };
  *q = QuadratureInfo{};
  q->digits = digits;
  const int fixed = std::max(ct.gamma1.node_count, ct.gamma01.node_count);
  if (fixed > 0) {
    *out = run(fixed, &q->scale);
    q->nodes = fixed;
    return true;
  }
  int M = o.min_nodes;
  Mat2cd prev = run(M, &q->scale);
  double last_change = 1e300;
  while (true) {
    M *= 2;
    *out = run(M, &q->scale);
    q->nodes = M;
    q->change = max_abs_diff(*out, prev);
    const double size = std::max(1.0, max_abs(*out));
    const double floor = 64.0 * unit * q->scale;
    if (q->change <= o.tolerance * size) return floor <= o.tolerance * size;
    if (q->change <= floor) return false;
    // rounding inside the integrand can exceed the summand-based floor
    if (q->change > 0.5 * last_change && M >= 4 * o.min_nodes) {
      q->noise_limited = true;
      return false;
    }
    last_change = q->change;
    if (M >= o.max_nodes) return false;
    prev = *out;
  }
}

void check_block_args(int N, double alpha, double beta, int colp, int xip, int col, int xi) {
  require_even(N, "kernel");
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
    throw ValidationError("alpha and beta must lie in (0,1]");
  if (colp < 1 || colp > 4 * N - 1 || col < 1 || col > 4 * N - 1)
    throw ValidationError("kernel column outside [1, 4N-1]");
  if (xip < -N || xip > -1 || xi < -N || xi > -1) throw ValidationError("kernel row outside [-N, -1]");
}

}  // namespace

KernelBlock column_block(KernelFormula f, int N, double alpha, double beta, int colp, int xip, int col, int xi,
                         const Contours& contours, const KernelOptions& opt, QuadratureInfo* info) {
  check_block_args(N, alpha, beta, colp, xip, col, xi);
  if (f == KernelFormula::TwoPeriodic && alpha != beta)
    throw ValidationError("two-periodic kernel takes a single parameter");
  check_contours(contours, alpha, beta);
  const BlockSpec s{f, N, alpha, beta, colp, xip, col, xi};
  auto attempt = [&](int digits, Mat2cd* out, QuadratureInfo* q) {
    if (digits <= 0) return adaptive<cd>(s, contours, opt, 0, out, q);
    mp::PrecisionScope scope(static_cast<unsigned>(digits));
    return adaptive<mp::Complex>(s, contours, opt, digits, out, q);
  };
  Mat2cd out;
  QuadratureInfo q;
  if (opt.digits != 0) {
    const bool ok = attempt(opt.digits, &out, &q);
    if (info) *info = q;
    if (!ok && !(q.noise_limited && q.change <= kNoiseAcceptance * std::max(1.0, max_abs(out))))
      throw NumericalError(fmt::format("kernel quadrature did not converge: change {:.3e} at {} nodes", q.change, q.nodes));
    return out;
  }
  // the products in the intermediate form cancel heavily, so it starts in multiprecision
  int digits = f == KernelFormula::Lemma ? 30 + 4 * N : 0;
  while (!attempt(digits, &out, &q)) {
    if (q.nodes >= opt.max_nodes && !q.noise_limited && q.change > 64.0 * std::pow(10.0, -std::max(digits, 16)) * q.scale)
      throw NumericalError(fmt::format("kernel quadrature did not converge: change {:.3e} at {} nodes", q.change, q.nodes));
    digits = digits == 0 ? 32 : 2 * digits;
    if (digits > opt.max_digits)
      throw NumericalError(fmt::format("kernel quadrature needs more than {} digits", opt.max_digits));
  }
  if (info) *info = q;
  return out;
}

namespace {

void check_base(int N, int mprime, int m) {
  if (mprime <= 0 || mprime >= N || m <= 0 || m >= N) throw ValidationError("kernel needs 0 < m, m' < N");
}

}  // namespace

KernelBlock kernel_block(int N, double alpha, double beta, int mprime, int xiprime, int m, int xi,
                         const Contours& contours, const KernelOptions& opt) {
  check_base(N, mprime, m);
  return column_block(KernelFormula::Theorem, N, alpha, beta, 4 * mprime, xiprime, 4 * m, xi, contours, opt);
}

KernelBlock intermediate_kernel_block(int N, double alpha, double beta, int mprime, int xiprime, int m, int xi,
                                      const Contours& contours, const KernelOptions& opt) {
  check_base(N, mprime, m);
  return column_block(KernelFormula::Lemma, N, alpha, beta, 4 * mprime, xiprime, 4 * m, xi, contours, opt);
}

KernelBlock two_periodic_block(int N, double eps, int mprime, int xiprime, int m, int xi, const Contours& contours,
                               const KernelOptions& opt) {
  check_base(N, mprime, m);
  return column_block(KernelFormula::TwoPeriodic, N, eps, eps, 4 * mprime, xiprime, 4 * m, xi, contours, opt);
}

cd extended_kernel_entry(int N, double alpha, double beta, const KernelCoordinate& first,
                         const KernelCoordinate& second, const Contours& contours, const KernelOptions& opt) {
  if (first.shift < 0 || first.shift > 3 || second.shift < 0 || second.shift > 3 || first.sub < 0 ||
      first.sub > 1 || second.sub < 0 || second.sub > 1)
    throw ValidationError("bad kernel coordinate");
  const KernelBlock b = column_block(KernelFormula::Theorem, N, alpha, beta, 4 * first.m - first.shift, first.xi,
                                     4 * second.m + second.shift, second.xi, contours, opt);
  return b.at(first.sub, second.sub);
}

KernelTable::KernelTable(int N, double alpha, double beta, KernelFormula f, Contours contours, KernelOptions opt)
    : N_(N), alpha_(alpha), beta_(beta), f_(f), contours_(contours), opt_(opt) {
  require_even(N, "KernelTable");
  check_contours(contours_, alpha, beta);
}

KernelBlock KernelTable::block(int colp, int xip, int col, int xi) {
  const auto key = std::make_tuple(colp, xip, col, xi);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const KernelBlock b = column_block(f_, N_, alpha_, beta_, colp, xip, col, xi, contours_, opt_, &info_);
  cache_.emplace(key, b);
  return b;
}

namespace {

int floor_half(int p) { return p >= 0 ? p / 2 : -((1 - p) / 2); }

}  // namespace

cd KernelTable::entry(Site a, Site b) {
  if (!kernel_addressable(N_, a) || !kernel_addressable(N_, b))
    throw ValidationError(fmt::format("point ({},{}) or ({},{}) is not kernel addressable", a.col, a.row, b.col, b.row));
  const int xip = floor_half(a.row), xi = floor_half(b.row);
  return block(a.col, xip, b.col, xi).at(a.row - 2 * xip, b.row - 2 * xi);
}

Eigen::MatrixXcd KernelTable::matrix(const PointSet& pts) {
  const Eigen::Index k = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd K(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) K(a, b) = entry(pts[a], pts[b]);
  return K;
}

double KernelTable::probability(const PointSet& pts, double* imag_residue) {
  if (pts.empty()) {
    if (imag_residue) *imag_residue = 0.0;
    return 1.0;
  }
  const cd d = matrix(pts).determinant();
  if (imag_residue) *imag_residue = std::abs(d.imag());
  return d.real();
}

double point_probability(int N, double alpha, double beta, const PointSet& pts, const Contours& contours,
                         double* imag_residue) {
  KernelTable t(N, alpha, beta, KernelFormula::Theorem, contours);
  double im = 0.0;
  const double p = t.probability(pts, &im);
  if (imag_residue) *imag_residue = im;
  if (im > 1e-8) throw NumericalError(fmt::format("determinant has imaginary part {:.3e}", im));
  return p;
}

}  // namespace splitaztec

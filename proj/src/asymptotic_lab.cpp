#include "splitaztec/asymptotic_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <type_traits>

#include <fmt/format.h>
#include <json.hpp>

#include "splitaztec/errors.hpp"
#include "splitaztec/mp.hpp"

namespace splitaztec {

ResolvedCoordinate resolve(const LocalCoordinate& c) {
  require_even(c.N, "local coordinate");
  if (c.N < 2) throw ValidationError("N must be positive");
  if (!(c.x > 0.0 && c.x < 1.0) || !(c.y > -1.0 && c.y < 0.0) || c.x == 0.5)
    throw ValidationError("(x,y) must lie in (0,1) x (-1,0) off x = 1/2");
  const double lim = std::sqrt(static_cast<double>(c.N));
  for (int o : {c.x1, c.x2, c.y1, c.y2})
    if (std::abs(o) > lim) throw ValidationError("local offsets must not exceed sqrt(N)");
  const int mb = static_cast<int>(std::lround(c.x * c.N)), xb = static_cast<int>(std::lround(c.y * c.N));
  ResolvedCoordinate r{c.N, mb + c.x2, xb + c.y2, mb + c.x1, xb + c.y1};
  const int half = c.N / 2;
  const bool left = r.m < half && r.mprime < half, right = r.m > half && r.mprime > half;
  if (r.m <= 0 || r.mprime <= 0 || r.m >= c.N || r.mprime >= c.N || !(left || right))
    throw ValidationError(fmt::format("columns m={} m'={} are not on one side of the interface at N={}", r.m,
                                      r.mprime, c.N));
  if (r.xi < -c.N || r.xi > -1 || r.xiprime < -c.N || r.xiprime > -1)
    throw ValidationError(fmt::format("rows xi={} xi'={} outside [-N,-1]", r.xi, r.xiprime));
  return r;
}

const char* decay_term_name(DecayTerm t) {
  switch (t) {
    case DecayTerm::I22:
      return "I22";
    case DecayTerm::I21:
      return "I21";
    default:
      return "remainder";
  }
}

const char* decay_model_name(DecayModel m) { return m == DecayModel::PowerLaw ? "power_law" : "exponential"; }

namespace {

using MpBlock = Mat2<mp::Complex>;

struct Spec {
  int l, k, N;
  double alpha, beta;
  int mprime, xiprime, m, xi;
  bool remainder = false;
  double eps() const { return m < N / 2 ? alpha : beta; }
  double eps_bar() const { return m < N / 2 ? beta : alpha; }
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
C scalar(cd z) {
  if constexpr (std::is_same_v<C, cd>)
    return z;
  else
    return C(z.real(), z.imag());
}

template <class C>
double log10_abs(const C& z) {
  using std::abs;
  using std::log10;
  const auto a = abs(z);
  if (a == 0) return -1e300;
  return static_cast<double>(log10(a));
}

template <class C>
double log10_max(const Mat2<C>& m) {
  double r = -1e300;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r = std::max(r, log10_abs(m.at(i, j)));
  return r;
}

// F_{eps,l} F_{eps_bar,1} F_{eps,lbar} times 2/(1+2g)
template <class C>
Mat2<C> coupling_matrix(const Spec& s, const EigenData<C>& e, const C& w) {
  const auto eb = eigen_data(s.eps_bar(), w);
  const Mat2<C>& Fl = s.l == 1 ? e.F1 : e.F2;
  const Mat2<C>& Flb = s.l == 1 ? e.F2 : e.F1;
  return expansion_c00(s.alpha, s.beta, w) * (Fl * eb.F1 * Flb);
}

template <class C>
Mat2<C> w_part(const Spec& s, const C& w) {
  const auto e = eigen_data(s.eps(), w);
  const C rl = s.l == 1 ? e.r1 : e.r2;
  const C pre = ipow(w, s.xiprime + s.N) / ipow(w - C(1.0), s.N) * ipow(rl, s.N / 2 - s.mprime);
  return pre * coupling_matrix(s, e, w);
}

template <class C>
Mat2<C> z_part(const Spec& s, const C& z) {
  const auto e = eigen_data(s.eps(), z);
  const C rk = s.k == 1 ? e.r1 : e.r2;
  const C pre = ipow(z - C(1.0), s.N) / ipow(z, s.xi + s.N) * ipow(rk, s.m - s.N / 2);
  return pre * (s.k == 1 ? e.F1 : e.F2);
}

template <class C>
Mat2<C> remainder_part(const Spec& s, const C& z) {
  const auto e = eigen_data(s.alpha, z);
  return (ipow(z, s.xiprime - s.xi) * ipow(e.r2, s.N - (s.m + s.mprime))) * coupling_matrix(s, e, z);
}

struct Pass {
  MpBlock value;
  double log10_scale = 0.0;
};

template <class C>
Pass run_pass(const Spec& s, const Contours& ct, int M) {
  const C invM = C(1.0) / C(static_cast<double>(M));
  Mat2<C> total;
  double lscale = -1e300;
  if (s.remainder) {
    for (int j = 0; j < M; ++j) {
      const C z = unit_root<C>((j + 0.5) / M);
      const Mat2<C> t = invM * remainder_part(s, z);
      lscale = std::max(lscale, log10_max(t));
      total += t;
    }
  } else {
    const C c1 = scalar<C>(ct.gamma1.center), c01 = scalar<C>(ct.gamma01.center);
    const C r1(ct.gamma1.radius), r01(ct.gamma01.radius);
    std::vector<C> zs(M);
    std::vector<Mat2<C>> Bz(M);
    double lb = -1e300;
    for (int j = 0; j < M; ++j) {
      const C u = r01 * unit_root<C>(static_cast<double>(j) / M);
      zs[j] = c01 + u;
      Bz[j] = ((u / zs[j]) * invM) * z_part(s, zs[j]);
      lb = std::max(lb, log10_max(Bz[j]));
    }
    double la = -1e300;
    for (int j = 0; j < M; ++j) {
      const C u = r1 * unit_root<C>((j + 0.5) / M);
      const C w = c1 + u;
      const Mat2<C> Aw = (u * invM) * w_part(s, w);
      la = std::max(la, log10_max(Aw));
      Mat2<C> bs;
      for (int i = 0; i < M; ++i) bs += (C(1.0) / (zs[i] - w)) * Bz[i];
      total += Aw * bs;
    }
    const double gap = ct.gamma01.radius - std::abs(ct.gamma1.center - ct.gamma01.center) - ct.gamma1.radius;
    lscale = la + lb + std::log10(static_cast<double>(M) / std::max(gap, 1e-3));
  }
  Pass p;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if constexpr (std::is_same_v<C, cd>)
        p.value.at(i, j) = mp::Complex(total.at(i, j).real(), total.at(i, j).imag());
      else
        p.value.at(i, j) = total.at(i, j);
    }
  p.log10_scale = lscale;
  return p;
}

Pass run_at(const Spec& s, const Contours& ct, int M, int digits) {
  if (digits <= 0) return run_pass<cd>(s, ct, M);
  mp::PrecisionScope scope(static_cast<unsigned>(digits));
  return run_pass<mp::Complex>(s, ct, M);
}

constexpr int kVanishingDigits = 70;

KernelBlock integrate(const Spec& s, const Contours& ct, const AsymptoticOptions& o, IntegralInfo* info) {
  // with alpha = beta the products F_{eps,2} F_{eps,1} vanish and only rounding is left
  const bool trivial = s.alpha == s.beta;
  int digits = o.digits;
  if (trivial || digits < 0)
    digits = 0;
  else if (digits == 0)
    digits = 40;
  const bool adapt_digits = o.digits == 0 && !trivial;
  const double ltol = std::log10(o.tolerance);
  int M = o.min_nodes;
  mp::PrecisionScope outer(static_cast<unsigned>(std::max(digits, 20)));
  Pass prev = run_at(s, ct, M, digits);
  for (int escalations = 0;;) {
    M *= 2;
    Pass cur = run_at(s, ct, M, digits);
    const double eff_digits = digits > 0 ? digits : 15.6;
    const double noise = cur.log10_scale - eff_digits + 2.0 + std::log10(static_cast<double>(M));
    const double lmag = log10_max(cur.value);
    const double lchange = log10_max(cur.value - prev.value);
    // the trivial case converges to rounding, so its change is measured absolutely
    if (lchange <= std::max(trivial ? ltol : lmag + ltol, noise)) {
      // still at the rounding floor 60 digits below the largest summand: zero to that floor
      const bool vanishing = cur.log10_scale - noise >= kVanishingDigits - 10;
      if (adapt_digits && noise > lmag + ltol && !vanishing) {
        const int need = static_cast<int>(std::ceil(cur.log10_scale - lmag - ltol)) + 10;
        if (need > o.max_digits || ++escalations > 4)
          throw NumericalError(fmt::format("correction integral needs {} digits (limit {})", need, o.max_digits));
        // a second miss usually means the value is zero, so go straight past the vanishing floor
        digits = std::max(need, escalations > 1 ? kVanishingDigits : digits + 10);
        prev = run_at(s, ct, M / 2, digits);
        M /= 2;
        continue;
      }
      if (info) {
        info->nodes = M;
        info->digits = digits;
        info->change = std::pow(10.0, lchange);
        info->log10_scale = cur.log10_scale;
        info->log10_magnitude = lmag;
        info->log10_first = log10_abs(cur.value.at(0, 0));
      }
      Mat2cd r;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.at(i, j) = to_cd(cur.value.at(i, j));
      return r;
    }
    if (M >= o.max_nodes)
      throw NumericalError(fmt::format("correction integral did not converge: log10 change {:.2f} vs {:.2f} at {} nodes",
                                       lchange, lmag, M));
    prev = std::move(cur);
  }
}

void check_params(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
    throw ValidationError("alpha and beta must lie in (0,1]");
}

}  // namespace

KernelBlock correction_integral(int l, int k, int N, double alpha, double beta, int mprime, int xiprime, int m, int xi,
                                const Contours& contours, const AsymptoticOptions& opt, IntegralInfo* info) {
  require_even(N, "correction_integral");
  check_params(alpha, beta);
  if (k != 1 && k != 2) throw ValidationError("k must be 1 or 2");
  const int half = N / 2;
  const bool left = m < half && mprime < half && m > 0 && mprime > 0;
  const bool right = m > half && mprime > half && m < N && mprime < N;
  if (!left && !right) throw ValidationError("correction integrals need m, m' on one side of the interface");
  if (l != (left ? 2 : 1)) throw ValidationError(fmt::format("l must be {} on this side", left ? 2 : 1));
  if (xi < -N || xi > -1 || xiprime < -N || xiprime > -1) throw ValidationError("kernel row outside [-N, -1]");
  check_contours(contours, alpha, beta);
  check_correction_contours(contours, left ? alpha : beta);
  return integrate(Spec{l, k, N, alpha, beta, mprime, xiprime, m, xi}, contours, opt, info);
}

KernelBlock correction_integral(int l, int k, const LocalCoordinate& c, double alpha, double beta,
                                const Contours& contours, const AsymptoticOptions& opt, IntegralInfo* info) {
  const ResolvedCoordinate r = resolve(c);
  return correction_integral(l, k, r.N, alpha, beta, r.mprime, r.xiprime, r.m, r.xi, contours, opt, info);
}

KernelBlock single_term_remainder(const LocalCoordinate& c, double alpha, double beta, const AsymptoticOptions& opt,
                                  IntegralInfo* info) {
  check_params(alpha, beta);
  const ResolvedCoordinate r = resolve(c);
  if (!(c.x < 0.5) || r.m >= r.N / 2) throw ValidationError("the remainder is defined on the alpha side");
  const double lo = std::min(alpha, beta), hi = std::max(alpha, beta);
  if (alpha != beta && (hi * hi > 1.0 - kContourClearance || lo * lo * (1.0 + kContourClearance) > 1.0))
    throw GeometryError("unit circle too close to the cuts of g");
  Spec s{2, 1, r.N, alpha, beta, r.mprime, r.xiprime, r.m, r.xi, true};
  return integrate(s, Contours{}, opt, info);
}

double unit_circle_r2_max(double eps, int nodes) {
  double best = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const cd z = std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / nodes);
    best = std::max(best, std::abs(eigen_pair(eps, z).r2));
  }
  return best;
}

namespace {

void linear_fit(const std::vector<double>& t, const std::vector<double>& v, double* slope, double* r2) {
  const double n = static_cast<double>(t.size());
  double mt = 0, mv = 0;
  for (std::size_t i = 0; i < t.size(); ++i) mt += t[i] / n, mv += v[i] / n;
  double stt = 0, stv = 0, svv = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    stv += (t[i] - mt) * (v[i] - mv);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  *slope = stv / stt;
  *r2 = svv > 0 ? stv * stv / (stt * svv) : 1.0;
}

}  // namespace

DecayFit fit_decay(const std::vector<int>& N_values, const std::vector<double>& log_magnitudes) {
  if (N_values.size() != log_magnitudes.size() || N_values.size() < 4)
    throw ValidationError("a decay fit needs at least 4 points");
  DecayFit f;
  f.N_values = N_values;
  std::vector<double> ln, n, lv;
  for (std::size_t i = 0; i < N_values.size(); ++i) {
    n.push_back(N_values[i]);
    ln.push_back(std::log(static_cast<double>(N_values[i])));
    lv.push_back(log_magnitudes[i]);
    f.log10_magnitudes.push_back(log_magnitudes[i] / std::numbers::ln10);
    f.magnitudes.push_back(std::exp(log_magnitudes[i]));
  }
  linear_fit(ln, lv, &f.power_slope, &f.power_r2);
  linear_fit(n, lv, &f.exp_rate, &f.exp_r2);
  if (f.power_r2 >= f.exp_r2) {
    f.model = DecayModel::PowerLaw;
    f.exponent = f.power_slope;
    f.quality = f.power_r2;
  } else {
    f.model = DecayModel::Exponential;
    f.exponent = f.exp_rate;
    f.quality = f.exp_r2;
  }
  return f;
}

DecayFit decay_profile(DecayTerm term, const RegionQuery& q, const LocalOffsets& off, const std::vector<int>& N_list,
                       const Contours& contours, const AsymptoticOptions& opt) {
  if (N_list.size() < 4) throw ValidationError("N_list needs at least 4 entries");
  for (std::size_t i = 0; i < N_list.size(); ++i)
    if (N_list[i] % 2 != 0 || (i > 0 && N_list[i] <= N_list[i - 1]))
      throw ValidationError("N_list must be even and increasing");
  std::vector<int> ns;
  std::vector<double> logs;
  std::vector<std::string> warnings;
  const int l = q.x < 0.5 ? 2 : 1;
  for (int N : N_list) {
    const LocalCoordinate c{q.x, q.y, off.x1, off.x2, off.y1, off.y2, N};
    IntegralInfo info;
    if (term == DecayTerm::Remainder)
      single_term_remainder(c, q.alpha, q.beta, opt, &info);
    else
      correction_integral(l, term == DecayTerm::I22 ? 2 : 1, c, q.alpha, q.beta, contours, opt, &info);
    if (info.log10_first < -280.0) {
      warnings.push_back(fmt::format("magnitude below 1e-280 at N={}; list truncated", N));
      break;
    }
    ns.push_back(N);
    logs.push_back(info.log10_first * std::numbers::ln10);
  }
  DecayFit f = fit_decay(ns, logs);
  f.warnings = warnings;
  return f;
}

std::string decay_csv(DecayTerm term, const RegionQuery& q, const DecayFit& fit) {
  std::ostringstream os;
  os << "term,x,y,alpha,beta,N,magnitude\n";
  for (std::size_t i = 0; i < fit.N_values.size(); ++i)
    os << fmt::format("{},{},{},{},{},{},{:.17g}\n", decay_term_name(term), q.x, q.y, q.alpha, q.beta,
                      fit.N_values[i], fit.magnitudes[i]);
  return os.str();
}

std::string decay_json(DecayTerm term, const RegionQuery& q, const DecayFit& fit) {
  nlohmann::json j;
  j["term"] = decay_term_name(term);
  j["x"] = q.x;
  j["y"] = q.y;
  j["alpha"] = q.alpha;
  j["beta"] = q.beta;
  j["N"] = fit.N_values;
  j["log10_magnitude"] = fit.log10_magnitudes;
  j["model"] = decay_model_name(fit.model);
  j["exponent"] = fit.exponent;
  j["r2"] = fit.quality;
  j["power_law"] = {{"slope", fit.power_slope}, {"r2", fit.power_r2}};
  j["exponential"] = {{"rate", fit.exp_rate}, {"r2", fit.exp_r2}};
  j["warnings"] = fit.warnings;
  return j.dump(1);
}

}  // namespace splitaztec

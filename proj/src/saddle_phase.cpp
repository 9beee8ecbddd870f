#include "splitaztec/saddle_phase.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <json.hpp>

#include "splitaztec/errors.hpp"

namespace splitaztec {

const char* region_name(Region r) {
  switch (r) {
    case Region::Frozen:
      return "frozen";
    case Region::Rough:
      return "rough";
    case Region::Smooth:
      return "smooth";
    default:
      return "degenerate";
  }
}

namespace {

void check_query(double eps, double x, double y) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("saddle parameter must lie in (0,1]");
  if (!(x > 0.0 && x < 1.0) || !(y > -1.0 && y < 0.0)) throw ValidationError("(x,y) must lie in (0,1) x (-1,0)");
  if (x == 0.5) throw ValidationError("x = 1/2 is the interface");
}

cd horner(const std::vector<double>& c, cd z) {
  cd v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

std::vector<cd> poly_roots(const std::vector<double>& c) {
  const int deg = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  const Eigen::VectorXcd ev = comp.eigenvalues();
  std::vector<cd> r(ev.data(), ev.data() + deg);
  const auto dc = derivative(c);
  for (cd& z : r) {
    for (int it = 0; it < 6; ++it) {
      const cd d = horner(dc, z);
      if (std::abs(d) == 0.0) break;
      const cd step = horner(c, z) / d;
      const cd nz = z - step;
      if (std::abs(horner(c, nz)) >= std::abs(horner(c, z))) break;
      z = nz;
    }
  }
  return r;
}

// psi' on a sheet; real points on a cut are taken from the upper side
cd psi_prime(double eps, int k, cd z, double x, double y) {
  if (z.imag() == 0.0) z = cd(z.real(), 0.0);
  return saddle_derivative(eps, k, z, x, y);
}

bool is_real(cd z) { return z.imag() == 0.0; }

}  // namespace

double side_parameter(const RegionQuery& q) { return q.x < 0.5 ? q.alpha : q.beta; }

std::vector<double> saddle_polynomial(double eps, double x, double y) {
  check_query(eps, x, y);
  const double c = eps * eps + 1.0 / (eps * eps);
  const double s = (0.5 - x) * (0.5 - x) * (c + 2.0);
  const double a0 = (y + 1.0) * (y + 1.0), a1 = -2.0 * y * (y + 1.0), a2 = y * y;
  // (a0 + a1 z + a2 z^2)(1 + c z + z^2) - s z (z + 1)^2
  std::vector<double> p{a0, a1 + c * a0, a2 + c * a1 + a0, c * a2 + a1, a2};
  p[1] -= s;
  p[2] -= 2.0 * s;
  p[3] -= s;
  return p;
}

std::vector<double> saddle_polynomial(const RegionQuery& q) { return saddle_polynomial(side_parameter(q), q.x, q.y); }

SaddleReport find_saddles(double eps, double x, double y) {
  check_query(eps, x, y);
  SaddleReport rep;
  rep.eps = eps;
  std::vector<cd> roots;
  if (eps == 1.0) {
    // the factor (z+1)^2 does not give saddles here
    const double b = -2.0 * y * (y + 1.0) - 4.0 * (0.5 - x) * (0.5 - x);
    roots = poly_roots({(y + 1.0) * (y + 1.0), b, y * y});
    rep.root_count = 2;
  } else {
    roots = poly_roots(saddle_polynomial(eps, x, y));
  }
  const int nr = static_cast<int>(roots.size());
  const double scale = 1.0 + std::abs(y);
  for (cd& z : roots)
    if (std::abs(z.imag()) < 1e-10 * (1.0 + std::abs(z))) z = cd(z.real(), 0.0);

  // spurious roots at 0, 1 and the branch points
  for (const cd z : roots)
    for (double p : {0.0, 1.0, -eps * eps, -1.0 / (eps * eps)})
      if (std::abs(z - p) < 1e-9) throw NumericalError("saddle polynomial has a root at an excluded point");

  std::array<bool, 4> paired{};
  bool coalesced = false;
  rep.min_pairwise_gap = 1e300;
  for (int i = 0; i < nr; ++i)
    for (int j = i + 1; j < nr; ++j) rep.min_pairwise_gap = std::min(rep.min_pairwise_gap, std::abs(roots[i] - roots[j]));

  for (int i = 0; i < nr; ++i) {
    const double r1 = std::abs(psi_prime(eps, 1, roots[i], x, y));
    const double r2 = std::abs(psi_prime(eps, 2, roots[i], x, y));
    rep.roots[i] = roots[i];
    rep.sheet[i] = r1 <= r2 ? 1 : 2;
    rep.residual[i] = std::min(r1, r2);
  }
  for (int i = 0; i < nr; ++i)
    for (int j = i + 1; j < nr; ++j) {
      const double gap = std::abs(roots[i] - roots[j]);
      if (gap > 1e-6 * (1.0 + std::abs(roots[i]))) continue;
      // a double root of the polynomial may be one simple saddle on each sheet
      cd zd = 0.5 * (roots[i] + roots[j]);
      if (eps != 1.0) {
        const auto p = saddle_polynomial(eps, x, y);
        const auto dp = derivative(p), ddp = derivative(dp);
        for (int it = 0; it < 20; ++it) {
          const cd d = horner(ddp, zd);
          if (std::abs(d) == 0.0) break;
          zd -= horner(dp, zd) / d;
        }
      }
      if (std::abs(zd.imag()) < 1e-10) zd = cd(zd.real(), 0.0);
      const double r1 = std::abs(psi_prime(eps, 1, zd, x, y)), r2 = std::abs(psi_prime(eps, 2, zd, x, y));
      if (r1 < 1e-8 * scale && r2 < 1e-8 * scale && !paired[i] && !paired[j]) {
        rep.roots[i] = rep.roots[j] = zd;
        rep.sheet[i] = 1;
        rep.sheet[j] = 2;
        rep.residual[i] = r1;
        rep.residual[j] = r2;
        paired[i] = paired[j] = true;
      } else {
        coalesced = true;
      }
    }

  int n_complex = 0, n_pos = 0, n_neg_off = 0;
  for (int i = 0; i < nr; ++i) {
    const cd z = rep.roots[i];
    if (!is_real(z))
      ++n_complex;
    else if (z.real() > 0.0)
      ++n_pos;
    else if (!on_branch_cut(eps, z, 1e-9))
      ++n_neg_off;
  }
  if (coalesced)
    rep.region = Region::Degenerate;
  else if (n_complex > 0)
    rep.region = Region::Rough;
  else if (n_pos >= 2)
    rep.region = Region::Frozen;
  else if (nr == 4 && n_neg_off == 4)
    rep.region = Region::Smooth;
  else
    rep.region = Region::Degenerate;

  // z1* .. z4*
  if (nr == 4 && (rep.region == Region::Rough || rep.region == Region::Smooth)) {
    const int primary = x < 0.5 ? 1 : 2, other = 3 - primary;
    std::vector<int> prim, oth;
    for (int i = 0; i < 4; ++i) (rep.sheet[i] == primary ? prim : oth).push_back(i);
    if (prim.size() == 1 && oth.size() == 3) {
      int z2 = -1, maxima = 0;
      std::vector<int> rest;
      for (int i : oth) {
        if (is_real(rep.roots[i]) && saddle_second_derivative(eps, other, rep.roots[i], x, y).real() < 0.0) {
          z2 = i;
          ++maxima;
        } else {
          rest.push_back(i);
        }
      }
      if (maxima == 1 && rest.size() == 2) {
        int a = rest[0], b = rest[1];
        if (rep.region == Region::Rough ? rep.roots[a].imag() < rep.roots[b].imag()
                                        : rep.roots[a].real() > rep.roots[b].real())
          std::swap(a, b);
        const std::array<int, 4> order{prim[0], z2, a, b};
        SaddleReport named = rep;
        for (int i = 0; i < 4; ++i) {
          named.roots[i] = rep.roots[order[i]];
          named.sheet[i] = rep.sheet[order[i]];
          named.residual[i] = rep.residual[order[i]];
        }
        named.named = true;
        rep = named;
      }
    }
  }
  return rep;
}

SaddleReport find_saddles(const RegionQuery& q) { return find_saddles(side_parameter(q), q.x, q.y); }

bool strong_coupling(const RegionQuery& q) {
  check_query(side_parameter(q), q.x, q.y);
  if (q.x < 0.5) {
    if (!(q.alpha < q.beta)) return false;
    const double b2 = q.beta * q.beta;
    return saddle_derivative(q.alpha, 1, cd(-b2), q.x, q.y).real() > 0.0 ||
           saddle_derivative(q.alpha, 1, cd(-1.0 / b2), q.x, q.y).real() < 0.0;
  }
  // mirror image on the beta side
  if (!(q.beta < q.alpha)) return false;
  const double a2 = q.alpha * q.alpha;
  return saddle_derivative(q.beta, 2, cd(-a2), q.x, q.y).real() > 0.0 ||
         saddle_derivative(q.beta, 2, cd(-1.0 / a2), q.x, q.y).real() < 0.0;
}

bool saddle_in_coupling_cut(const RegionQuery& q) {
  const SaddleReport r = find_saddles(q);
  if (r.region != Region::Smooth || !r.named || q.alpha == q.beta) return false;
  return on_coupling_cut(q.alpha, q.beta, r.roots[0], 0.0);
}

namespace {

struct Classifier {
  double alpha, beta;
  Region region(double x, double y) const { return find_saddles(RegionQuery{x, y, alpha, beta}).region; }
  bool strong(double x, double y) const { return strong_coupling(RegionQuery{x, y, alpha, beta}); }
};

template <class F>
std::array<double, 2> bisect(const F& label, std::array<double, 2> a, std::array<double, 2> b, double tol) {
  const auto la = label(a[0], a[1]);
  while (std::hypot(b[0] - a[0], b[1] - a[1]) > tol) {
    const std::array<double, 2> m{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    if (label(m[0], m[1]) == la)
      a = m;
    else
      b = m;
  }
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
}

template <class L, class F>
void march(const PhaseGrid& g, const L& grid_label, const F& label, double tol,
           std::vector<std::array<double, 4>>& segments, std::vector<std::array<double, 2>>* interface) {
  const int R = g.resolution;
  // crossing on the edge from (i,j) to (i+di, j+dj), if any
  std::map<std::tuple<int, int, int>, std::array<double, 2>> cache;
  auto crossing = [&](int i, int j, int horizontal) -> const std::array<double, 2>* {
    const int i2 = i + horizontal, j2 = j + 1 - horizontal;
    if (grid_label(i, j) == grid_label(i2, j2)) return nullptr;
    const auto key = std::make_tuple(i, j, horizontal);
    auto it = cache.find(key);
    if (it == cache.end()) {
      const std::array<double, 2> a{g.xs[i], g.ys[j]}, b{g.xs[i2], g.ys[j2]};
      std::array<double, 2> p;
      if ((a[0] - 0.5) * (b[0] - 0.5) < 0.0) {
        p = {0.5, 0.5 * (a[1] + b[1])};
        if (interface) interface->push_back(p);
      } else {
        p = bisect(label, a, b, tol);
      }
      it = cache.emplace(key, p).first;
    }
    return &it->second;
  };
  for (int i = 0; i + 1 < R; ++i)
    for (int j = 0; j + 1 < R; ++j) {
      std::vector<std::array<double, 2>> pts;
      for (const auto* p : {crossing(i, j, 1), crossing(i + 1, j, 0), crossing(i, j + 1, 1), crossing(i, j, 0)})
        if (p) pts.push_back(*p);
      if (pts.size() == 2 || pts.size() == 4) {
        for (std::size_t k = 0; k + 1 < pts.size(); k += 2)
          segments.push_back({pts[k][0], pts[k][1], pts[k + 1][0], pts[k + 1][1]});
      } else if (pts.size() == 3) {
        double cx = 0, cy = 0;
        for (const auto& p : pts) cx += p[0] / 3.0, cy += p[1] / 3.0;
        for (const auto& p : pts) segments.push_back({p[0], p[1], cx, cy});
      }
    }
}

}  // namespace

PhaseGrid boundary_scan(double alpha, double beta, int resolution, double refine_tol) {
  if (resolution < 16) throw ValidationError("grid resolution must be at least 16");
  PhaseGrid g;
  g.alpha = alpha;
  g.beta = beta;
  g.resolution = resolution;
  const Classifier cl{alpha, beta};
  for (int i = 0; i < resolution; ++i) g.xs.push_back((i + 0.5) / resolution);
  for (int j = 0; j < resolution; ++j) g.ys.push_back(-1.0 + (j + 0.5) / resolution);
  g.regions.assign(resolution, std::vector<Region>(resolution));
  g.strong.assign(resolution, std::vector<bool>(resolution));
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      // x = 1/2 never lies on a cell centre
      g.regions[i][j] = cl.region(g.xs[i], g.ys[j]);
      g.strong[i][j] = cl.strong(g.xs[i], g.ys[j]);
    }
  march(
      g, [&](int i, int j) { return g.regions[i][j]; },
      [&](double x, double y) { return cl.region(x, y); }, refine_tol, g.boundaries, &g.interface_flags);
  march(
      g, [&](int i, int j) { return static_cast<bool>(g.strong[i][j]); },
      [&](double x, double y) { return cl.strong(x, y); }, refine_tol, g.strong_boundaries, nullptr);
  return g;
}

std::string phase_json(const PhaseGrid& g, const std::string& meta_json) {
  nlohmann::json j;
  j["meta"] = nlohmann::json::parse(meta_json);
  j["alpha"] = g.alpha;
  j["beta"] = g.beta;
  j["resolution"] = g.resolution;
  j["xs"] = g.xs;
  j["ys"] = g.ys;
  nlohmann::json regions = nlohmann::json::array(), strong = nlohmann::json::array();
  for (std::size_t i = 0; i < g.regions.size(); ++i) {
    nlohmann::json col = nlohmann::json::array(), scol = nlohmann::json::array();
    for (std::size_t k = 0; k < g.regions[i].size(); ++k) {
      col.push_back(region_name(g.regions[i][k]));
      scol.push_back(static_cast<bool>(g.strong[i][k]));
    }
    regions.push_back(col);
    strong.push_back(scol);
  }
  j["regions"] = regions;
  j["strong_coupling"] = strong;
  auto segs = [](const std::vector<std::array<double, 4>>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : v) a.push_back({{s[0], s[1]}, {s[2], s[3]}});
    return a;
  };
  j["boundaries"] = segs(g.boundaries);
  j["strong_coupling_boundaries"] = segs(g.strong_boundaries);
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& p : g.interface_flags) flags.push_back({p[0], p[1]});
  j["interface_crossings"] = flags;
  return j.dump(1);
}

std::string phase_svg(const PhaseGrid& g, const std::string& meta_json, int pixels) {
  std::ostringstream os;
  const double P = pixels, cell = P / g.resolution;
  os << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">)", P)
     << "\n<metadata>" << meta_json << "</metadata>\n";
  auto color = [](Region r) {
    switch (r) {
      case Region::Frozen:
        return "#e0e0e0";
      case Region::Rough:
        return "#9ecae1";
      case Region::Smooth:
        return "#fdae6b";
      default:
        return "#000000";
    }
  };
  // y = 0 at the top, as in the tiling pictures
  for (int i = 0; i < g.resolution; ++i)
    for (int j = 0; j < g.resolution; ++j) {
      const double px = i * cell, py = P - (j + 1) * cell;
      os << fmt::format(R"(<rect x="{:.3f}" y="{:.3f}" width="{:.3f}" height="{:.3f}" fill="{}"/>)", px, py, cell,
                        cell, color(g.regions[i][j]));
      if (g.strong[i][j])
        os << fmt::format(R"(<rect x="{:.3f}" y="{:.3f}" width="{:.3f}" height="{:.3f}" fill="#d62728" opacity="0.35"/>)",
                          px, py, cell, cell);
      os << "\n";
    }
  auto line = [&](const std::array<double, 4>& s, const char* stroke) {
    os << fmt::format(R"(<line x1="{:.3f}" y1="{:.3f}" x2="{:.3f}" y2="{:.3f}" stroke="{}" stroke-width="1"/>)",
                      s[0] * P, -s[1] * P, s[2] * P, -s[3] * P, stroke)
       << "\n";
  };
  for (const auto& s : g.boundaries) line(s, "#000000");
  for (const auto& s : g.strong_boundaries) line(s, "#d62728");
  os << fmt::format(R"(<line x1="{0}" y1="0" x2="{0}" y2="{1}" stroke="#d62728" stroke-dasharray="4 3"/>)", P / 2, P)
     << "\n</svg>\n";
  return os.str();
}

}  // namespace splitaztec

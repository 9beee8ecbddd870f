#include "splitaztec/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "splitaztec/errors.hpp"

namespace splitaztec {

namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

void check_params(int N, double alpha, double beta) {
  if (N < 1) throw ValidationError("N must be at least 1");
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
    throw ValidationError("alpha and beta must lie in (0,1]");
}

}  // namespace

std::pair<int, int> edge_weight_exponents(int N, Vertex b, Vertex w) {
  if (mod(w.x, 4) == 1 && w.y - b.y == -1) {
    const int s = mod(w.y, 4) == 0 ? 1 : -1;
    if (w.x < 2 * N) return {s, 0};
    if (w.x > 2 * N) return {0, s};
    throw GeometryError("edge on the interface column");
  }
  return {0, 0};
}

double edge_weight(int N, double alpha, double beta, Vertex b, Vertex w) {
  const auto [a, e] = edge_weight_exponents(N, b, w);
  return std::pow(alpha, 2 * a) * std::pow(beta, 2 * e);
}

WeightedAztecGraph::WeightedAztecGraph(int N, double alpha, double beta)
    : N_(N), n_(2 * N), alpha_(alpha), beta_(beta) {
  check_params(N, alpha, beta);
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k <= n_; ++k) whites_.push_back({2 * j + 1, 2 * k});
  for (int j = 0; j <= n_; ++j)
    for (int k = 0; k < n_; ++k) blacks_.push_back({2 * j, 2 * k + 1});
  edge_lookup_.assign(4 * blacks_.size(), -1);
  for (std::size_t bi = 0; bi < blacks_.size(); ++bi) {
    const Vertex b = blacks_[bi];
    for (int d = 0; d < 4; ++d) {
      const Vertex w{b.x + kDirections[d].x, b.y + kDirections[d].y};
      if (!is_white(w)) continue;
      Edge e{b, w};
      std::tie(e.alpha_exp, e.beta_exp) = edge_weight_exponents(N, b, w);
      e.weight = std::pow(alpha, 2 * e.alpha_exp) * std::pow(beta, 2 * e.beta_exp);
      edge_lookup_[4 * bi + d] = static_cast<int>(edges_.size());
      edges_.push_back(e);
    }
  }
  if (edges_.size() != static_cast<std::size_t>(4 * n_ * n_)) throw GeometryError("unexpected edge count");
}

bool WeightedAztecGraph::is_black(Vertex v) const {
  return v.x >= 0 && v.x <= 2 * n_ && v.x % 2 == 0 && v.y >= 1 && v.y <= 2 * n_ - 1 && v.y % 2 == 1;
}

bool WeightedAztecGraph::is_white(Vertex v) const {
  return v.x >= 1 && v.x <= 2 * n_ - 1 && v.x % 2 == 1 && v.y >= 0 && v.y <= 2 * n_ && v.y % 2 == 0;
}

bool WeightedAztecGraph::has_edge(int black_idx, int dir) const { return edge_lookup_[4 * black_idx + dir] >= 0; }

int WeightedAztecGraph::edge_id(Vertex b, Vertex w) const {
  if (!is_black(b)) return -1;
  const Vertex d{w.x - b.x, w.y - b.y};
  for (int k = 0; k < 4; ++k)
    if (kDirections[k] == d) return edge_lookup_[4 * black_index(b) + k];
  return -1;
}

WeightedAztecGraph build_aztec_graph(int N, double alpha, double beta) { return WeightedAztecGraph(N, alpha, beta); }

std::vector<std::pair<Vertex, Vertex>> DimerCovering::dimers() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(dir.size());
  for (std::size_t i = 0; i < dir.size(); ++i) {
    const Vertex b{2 * static_cast<int>(i / n), 2 * static_cast<int>(i % n) + 1};
    const Vertex d = kDirections[dir[i]];
    out.push_back({b, {b.x + d.x, b.y + d.y}});
  }
  return out;
}

bool is_perfect_matching(const WeightedAztecGraph& g, const DimerCovering& c) {
  if (c.n != g.size_n() || c.dir.size() != g.black_vertices().size()) return false;
  std::vector<char> used(g.white_vertices().size(), 0);
  for (int bi = 0; bi < g.num_blacks(); ++bi) {
    if (c.dir[bi] > 3 || !g.has_edge(bi, c.dir[bi])) return false;
    const int wi = g.white_index(g.edge(bi, c.dir[bi]).white);
    if (used[wi]++) return false;
  }
  return true;
}

void validate_matching(const WeightedAztecGraph& g, const DimerCovering& c) {
  if (!is_perfect_matching(g, c)) throw ValidationError("not a perfect matching");
}

DimerCovering covering_from_dimers(const WeightedAztecGraph& g,
                                   const std::vector<std::pair<Vertex, Vertex>>& dimers) {
  DimerCovering c{g.size_n(), std::vector<std::uint8_t>(g.num_blacks(), 255)};
  for (auto [a, b] : dimers) {
    if (g.is_white(a)) std::swap(a, b);
    const int id = g.edge_id(a, b);
    if (id < 0) throw ValidationError(fmt::format("({},{})-({},{}) is not an edge", a.x, a.y, b.x, b.y));
    const Vertex d{b.x - a.x, b.y - a.y};
    const int bi = g.black_index(a);
    if (c.dir[bi] != 255) throw ValidationError("black vertex covered twice");
    c.dir[bi] = static_cast<std::uint8_t>(std::find(kDirections.begin(), kDirections.end(), d) - kDirections.begin());
  }
  validate_matching(g, c);
  return c;
}

std::pair<int, int> covering_weight_exponents(const WeightedAztecGraph& g, const DimerCovering& c) {
  validate_matching(g, c);
  int a = 0, b = 0;
  for (int bi = 0; bi < g.num_blacks(); ++bi) {
    const Edge& e = g.edge(bi, c.dir[bi]);
    a += e.alpha_exp;
    b += e.beta_exp;
  }
  return {a, b};
}

double covering_weight(const WeightedAztecGraph& g, const DimerCovering& c) {
  validate_matching(g, c);
  double w = 1.0;
  for (int bi = 0; bi < g.num_blacks(); ++bi) w *= g.edge(bi, c.dir[bi]).weight;
  return w;
}

PathConfiguration covering_to_paths(const WeightedAztecGraph& g, const DimerCovering& c) {
  validate_matching(g, c);
  const int n = g.size_n();
  PathConfiguration p{n, {}};
  for (int s = 1; s <= n; ++s) {
    std::vector<Site> path;
    Vertex v{0, 2 * (n - s) + 1};
    while (true) {
      const int k = (v.y + 1) / 2 - n - 1;
      path.push_back({v.x, k});
      if (v.y < 0) break;
      const int d = c.dir[g.black_index(v)];
      if (d == kDirNorthWest) break;
      if (d == kDirSouthWest) {
        v = {v.x, v.y - 2};
      } else if (d == kDirNorthEast) {
        path.push_back({v.x + 1, k});
        v = {v.x + 2, v.y};
      } else {
        path.push_back({v.x + 1, k - 1});
        v = {v.x + 2, v.y - 2};
      }
    }
    p.paths.push_back(std::move(path));
  }
  validate_paths(p);
  return p;
}

void validate_paths(const PathConfiguration& p) {
  const int n = p.n;
  if (static_cast<int>(p.paths.size()) != n) throw ValidationError("wrong number of paths");
  std::set<Site> seen;
  for (int s = 1; s <= n; ++s) {
    const auto& path = p.paths[s - 1];
    if (path.empty() || path.front() != Site{0, -s}) throw ValidationError("path has wrong start");
    const Site last = path.back();
    if (last.row != -n - 1 || last.col % 2 != 0 || last.col < 2 || last.col > 2 * n)
      throw ValidationError("path has wrong end");
    for (std::size_t i = 0; i < path.size(); ++i) {
      const Site v = path[i];
      if (v.col < 0 || v.col > 2 * n || v.row < -n - 1 || v.row > -1) throw ValidationError("path leaves the graph");
      if (!seen.insert(v).second) throw ValidationError("paths intersect");
      if (i + 1 == path.size()) break;
      const Site u = path[i + 1];
      const bool horiz = u.col == v.col + 1 && u.row == v.row;
      const bool vert = u.col == v.col && u.row == v.row - 1 && v.col % 2 == 0 && v.col > 0;
      const bool diag = u.col == v.col + 1 && u.row == v.row - 1 && v.col % 2 == 0;
      if (!(horiz || vert || diag)) throw ValidationError("invalid path step");
      if (v.row == -n - 1 && v.col % 2 == 0) throw ValidationError("path continues past the bottom row");
    }
  }
}

DimerCovering paths_to_covering(const WeightedAztecGraph& g, const PathConfiguration& p) {
  validate_paths(p);
  const int n = g.size_n();
  DimerCovering c{n, std::vector<std::uint8_t>(g.num_blacks(), kDirNorthWest)};
  for (const auto& path : p.paths) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const Site v = path[i];
      if (v.col % 2 != 0) continue;
      const Site u = path[i + 1];
      const int bi = g.black_index({v.col, 2 * (v.row + n + 1) - 1});
      if (u.col == v.col)
        c.dir[bi] = kDirSouthWest;
      else if (u.row == v.row)
        c.dir[bi] = kDirNorthEast;
      else
        c.dir[bi] = kDirSouthEast;
    }
  }
  validate_matching(g, c);
  return c;
}

double vertical_step_weight(const WeightedAztecGraph& g, Site from) {
  const int y = 2 * (from.row + g.size_n() + 1) - 1;
  return edge_weight(g.half_n(), g.alpha(), g.beta(), {from.col, y}, {from.col - 1, y - 1});
}

double diagonal_step_weight(const WeightedAztecGraph& g, Site from) {
  const int y = 2 * (from.row + g.size_n() + 1) - 1;
  return edge_weight(g.half_n(), g.alpha(), g.beta(), {from.col, y}, {from.col + 1, y - 1});
}

double path_configuration_weight(const WeightedAztecGraph& g, const PathConfiguration& p) {
  validate_paths(p);
  double w = 1.0;
  for (const auto& path : p.paths)
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const Site v = path[i], u = path[i + 1];
      if (u.col == v.col)
        w *= vertical_step_weight(g, v);
      else if (u.row != v.row)
        w *= diagonal_step_weight(g, v);
    }
  return w;
}

PointSet paths_to_points(const PathConfiguration& p) {
  PointSet out;
  for (const auto& path : p.paths) {
    const std::set<Site> on(path.begin(), path.end());
    for (const Site v : path)
      if (!on.count({v.col, v.row + 1})) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PointSet paths_to_kernel_points(const PathConfiguration& p) {
  PointSet out;
  for (const auto& path : p.paths) {
    const std::set<Site> on(path.begin(), path.end());
    for (const Site v : path)
      if (v.row >= -p.n && !on.count({v.col, v.row - 1})) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void write_tiling(std::ostream& os, const WeightedAztecGraph& g, const DimerCovering& c) {
  validate_matching(g, c);
  os << fmt::format("{} {} {}\n", g.size_n(), g.alpha(), g.beta());
  for (const auto& [b, w] : c.dimers()) os << fmt::format("{} {} {} {}\n", b.x, b.y, w.x, w.y);
}

std::pair<WeightedAztecGraph, DimerCovering> read_tiling(std::istream& is) {
  int n = 0;
  double alpha = 0, beta = 0;
  std::string skip;
  while (is >> std::ws && is.peek() == '#') std::getline(is, skip);
  if (!(is >> n >> alpha >> beta) || n < 2 || n % 2) throw ValidationError("bad tiling header");
  WeightedAztecGraph g(n / 2, alpha, beta);
  std::vector<std::pair<Vertex, Vertex>> dimers;
  Vertex b, w;
  while (is >> b.x >> b.y >> w.x >> w.y) dimers.push_back({b, w});
  if (!is.eof()) throw ValidationError("bad tiling line");
  DimerCovering c = covering_from_dimers(g, dimers);
  return {std::move(g), std::move(c)};
}

int dimer_color_class(Vertex b, Vertex w) {
  const Vertex d{w.x - b.x, w.y - b.y};
  const int orient = static_cast<int>(std::find(kDirections.begin(), kDirections.end(), d) - kDirections.begin());
  const int parity = ((w.x - 1) / 2 + w.y / 2) % 2;
  return 2 * orient + parity;
}

std::string render_tiling_svg(const WeightedAztecGraph& g, const DimerCovering& c, const std::string& metadata_json,
                              double unit) {
  validate_matching(g, c);
  static const char* kGray[8] = {"#111111", "#333333", "#555555", "#777777",
                                 "#999999", "#bbbbbb", "#d4d4d4", "#eeeeee"};
  const int n = g.size_n();
  const double size = (2.0 * n + 2.0) * unit;
  std::ostringstream os;
  os << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">)",
                    size)
     << "\n";
  os << "<metadata>" << metadata_json << "</metadata>\n";
  os << R"(<g stroke="#000000" stroke-width="0.5">)" << "\n";
  // flip y so the picture matches the lattice orientation
  auto X = [&](double x) { return (x + 1.0) * unit; };
  auto Y = [&](double y) { return size - (y + 1.0) * unit; };
  for (const auto& [b, w] : c.dimers()) {
    const int sx = w.x - b.x, sy = w.y - b.y;
    const Vertex p[4] = {{b.x - sx, b.y}, {b.x, b.y - sy}, {w.x + sx, w.y}, {w.x, w.y + sy}};
    os << fmt::format(R"(<polygon fill="{}" points="{},{} {},{} {},{} {},{}"/>)", kGray[dimer_color_class(b, w)],
                      X(p[0].x), Y(p[0].y), X(p[1].x), Y(p[1].y), X(p[2].x), Y(p[2].y), X(p[3].x), Y(p[3].y))
       << "\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace splitaztec

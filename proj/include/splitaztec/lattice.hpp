#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace splitaztec {

struct Vertex {
  int x = 0, y = 0;
  auto operator<=>(const Vertex&) const = default;
};

// vertex of the paths graph: column and (negative) row
struct Site {
  int col = 0, row = 0;
  auto operator<=>(const Site&) const = default;
};

// w - b for the four edge directions, in lexicographic order of the white vertex
inline constexpr std::array<Vertex, 4> kDirections{{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};
inline constexpr int kDirSouthWest = 0;  // vertical DR edge
inline constexpr int kDirNorthWest = 1;  // no DR edge
inline constexpr int kDirSouthEast = 2;  // diagonal DR edge
inline constexpr int kDirNorthEast = 3;  // horizontal DR edge

struct Edge {
  Vertex black, white;
  int alpha_exp = 0, beta_exp = 0;  // weight = alpha^(2 alpha_exp) beta^(2 beta_exp)
  double weight = 1.0;
};

// edge weight exponents (a, b): wt = alpha^(2a) beta^(2b)
std::pair<int, int> edge_weight_exponents(int N, Vertex b, Vertex w);
double edge_weight(int N, double alpha, double beta, Vertex b, Vertex w);

class WeightedAztecGraph {
 public:
  WeightedAztecGraph(int N, double alpha, double beta);

  int size_n() const { return n_; }
  int half_n() const { return N_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  const std::vector<Vertex>& white_vertices() const { return whites_; }
  const std::vector<Vertex>& black_vertices() const { return blacks_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int num_blacks() const { return static_cast<int>(blacks_.size()); }
  // blacks (2j, 2k+1) are indexed j*n + k, which is lexicographic order
  int black_index(Vertex b) const { return (b.x / 2) * n_ + (b.y - 1) / 2; }
  Vertex black(int idx) const { return {2 * (idx / n_), 2 * (idx % n_) + 1}; }
  int white_index(Vertex w) const { return ((w.x - 1) / 2) * (n_ + 1) + w.y / 2; }
  bool is_black(Vertex v) const;
  bool is_white(Vertex v) const;
  bool has_edge(int black_idx, int dir) const;
  // -1 when the edge is absent
  int edge_id(Vertex b, Vertex w) const;
  const Edge& edge(int black_idx, int dir) const { return edges_[edge_lookup_[4 * black_idx + dir]]; }

 private:
  int N_, n_;
  double alpha_, beta_;
  std::vector<Vertex> whites_, blacks_;
  std::vector<Edge> edges_;
  std::vector<int> edge_lookup_;
};

WeightedAztecGraph build_aztec_graph(int N, double alpha, double beta);

// one direction code per black vertex, indexed by black_index
struct DimerCovering {
  int n = 0;
  std::vector<std::uint8_t> dir;

  std::vector<std::pair<Vertex, Vertex>> dimers() const;
  bool operator==(const DimerCovering&) const = default;
};

struct PathConfiguration {
  int n = 0;
  std::vector<std::vector<Site>> paths;
};

using PointSet = std::vector<Site>;  // sorted

// throws ValidationError unless every vertex is covered exactly once
void validate_matching(const WeightedAztecGraph& g, const DimerCovering& c);
bool is_perfect_matching(const WeightedAztecGraph& g, const DimerCovering& c);

DimerCovering covering_from_dimers(const WeightedAztecGraph& g, const std::vector<std::pair<Vertex, Vertex>>& dimers);

double covering_weight(const WeightedAztecGraph& g, const DimerCovering& c);
std::pair<int, int> covering_weight_exponents(const WeightedAztecGraph& g, const DimerCovering& c);

PathConfiguration covering_to_paths(const WeightedAztecGraph& g, const DimerCovering& c);
DimerCovering paths_to_covering(const WeightedAztecGraph& g, const PathConfiguration& p);
void validate_paths(const PathConfiguration& p);
double path_configuration_weight(const WeightedAztecGraph& g, const PathConfiguration& p);

// step weights of the paths graph
double vertical_step_weight(const WeightedAztecGraph& g, Site from);
double diagonal_step_weight(const WeightedAztecGraph& g, Site from);

// (j,k) visited with (j,k+1) not on the same path
PointSet paths_to_points(const PathConfiguration& p);
// (j,k) visited with (j,k-1) not on the same path, rows -n..-1; these are the
// points addressed by the correlation kernel at column j and row k
PointSet paths_to_kernel_points(const PathConfiguration& p);

// text format: "n alpha beta" then "bx by wx wy" per dimer; leading "#" lines are skipped on read
void write_tiling(std::ostream& os, const WeightedAztecGraph& g, const DimerCovering& c);
std::pair<WeightedAztecGraph, DimerCovering> read_tiling(std::istream& is);

// 8 gray classes: orientation (4) times parity of the white vertex
int dimer_color_class(Vertex b, Vertex w);
std::string render_tiling_svg(const WeightedAztecGraph& g, const DimerCovering& c, const std::string& metadata_json,
                              double unit = 10.0);

}  // namespace splitaztec

#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treetrace/graph_of_groups.hpp"

namespace treetrace {

/// A coset g*G_v of a vertex group. kind is 0 for A (amalgam) or H (hnn) and
/// 1 for B. rep is the shortlex-minimal element of the coset.
struct TreeVertex {
  int kind = 0;
  NormalForm rep;

  bool operator==(const TreeVertex&) const = default;
  std::strong_ordering operator<=>(const TreeVertex& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    return rep <=> o.rep;
  }
};

/// A coset g*U of the edge group; rep is shortlex-minimal.
struct TreeEdge {
  NormalForm rep;

  bool operator==(const TreeEdge&) const = default;
  std::strong_ordering operator<=>(const TreeEdge& o) const { return rep <=> o.rep; }
};

/// Image of the Julg-Valette map: an edge, or the extra point * (no edge).
/// Also used as the basis index of the Omega side.
struct JVImage {
  std::optional<TreeEdge> edge;

  static JVImage star() { return {}; }
  bool is_star() const { return !edge.has_value(); }

  bool operator==(const JVImage&) const = default;
  std::strong_ordering operator<=>(const JVImage& o) const {
    if (is_star() || o.is_star()) return o.is_star() <=> is_star();  // star sorts first
    return *edge <=> *o.edge;
  }
};

using OmegaIndex = JVImage;

struct GeodesicPath {
  std::vector<TreeVertex> vertices;
  std::vector<TreeEdge> edges;  // edges[i] joins vertices[i] and vertices[i+1]

  std::size_t length() const { return edges.size(); }
};

/// Vertices within a radius of the basepoint, in breadth-first order.
struct Ball {
  int radius = 0;
  std::vector<TreeVertex> vertices;
  std::map<TreeVertex, int> depth;
  std::vector<TreeEdge> edges;  // edges with both endpoints in the ball
};

/// Vertices where the Julg-Valette map fails to be g-equivariant.
struct DefectSet {
  std::vector<TreeVertex> vertices;
  GeodesicPath geodesic;  // from v0 to g^-1 v0
  bool contained = true;  // vertices is a subset of geodesic.vertices
  /// Geodesic vertices where the map is nonetheless equivariant.
  std::size_t equivariant_on_geodesic = 0;
};

inline constexpr std::size_t kDefaultTreeBudget = 200000;

/// The Bass-Serre tree of a one-edge graph of groups, built lazily.
///
/// Vertices of an amalgam are the cosets gA and gB joined by the edge gU.
/// Vertices of an HNN extension are the cosets gH; the edge gU joins gH and
/// g t^-1 H. The basepoint v0 is the identity coset of A (or H), optionally
/// translated by a group element.
///
/// Queries memoize canonical representatives, so an instance must not be
/// shared between threads without external locking.
class BassSerreTree {
 public:
  explicit BassSerreTree(std::shared_ptr<const GraphOfGroups> spec,
                         std::optional<NormalForm> basepoint_translator = std::nullopt,
                         std::size_t budget = kDefaultTreeBudget);

  const GraphOfGroups& spec() const { return *spec_; }
  const std::shared_ptr<const GraphOfGroups>& spec_ptr() const { return spec_; }

  TreeVertex base_vertex() const { return base_; }
  TreeVertex vertex(int kind, const NormalForm& g) const;
  TreeEdge edge(const NormalForm& g) const;

  TreeVertex act(const NormalForm& g, const TreeVertex& v) const;
  TreeEdge act(const NormalForm& g, const TreeEdge& e) const;
  /// The star is fixed by every group element.
  JVImage act(const NormalForm& g, const JVImage& x) const;

  std::pair<TreeVertex, TreeVertex> endpoints(const TreeEdge& e) const;
  std::vector<std::pair<TreeEdge, TreeVertex>> neighbors(const TreeVertex& v) const;

  GeodesicPath geodesic(const TreeVertex& from, const TreeVertex& to) const;
  int distance(const TreeVertex& from, const TreeVertex& to) const;
  int depth(const TreeVertex& v) const { return distance(base_, v); }

  /// Last edge of the geodesic from v0 to v; star for v0.
  JVImage julg_valette(const TreeVertex& v) const;
  /// Inverse of julg_valette: star goes to v0, an edge to its endpoint
  /// farther from v0.
  TreeVertex julg_valette_inverse(const JVImage& x) const;

  /// Throws RadiusTooSmall when radius < distance(v0, g^-1 v0).
  DefectSet defect_set(const NormalForm& g, int radius) const;
  /// Defective vertices among the geodesic from v0 to g^-1 v0 only. Relies on
  /// the containment that defect_set checks, so no ball is built.
  std::vector<TreeVertex> geodesic_defect(const NormalForm& g) const;

  /// Throws BudgetExceeded when the ball would exceed the vertex budget.
  const Ball& ball(int radius) const;

  std::string vertex_label(const TreeVertex& v) const;
  std::string edge_label(const TreeEdge& e) const;
  std::string export_text(int radius) const;
  std::string export_dot(int radius) const;

 private:
  struct RootStep {
    TreeVertex parent;
    TreeEdge edge;
  };
  // Parent towards the identity vertex, which is the root of the lazy tree.
  std::optional<RootStep> root_parent(const TreeVertex& v) const;
  std::vector<TreeVertex> root_path(const TreeVertex& v) const;
  NormalForm canonical(const NormalForm& g, const std::vector<NormalForm>& subgroup,
                       std::unordered_map<NormalForm, NormalForm, NormalFormHash>& cache) const;

  std::shared_ptr<const GraphOfGroups> spec_;
  std::optional<NormalForm> translator_;
  std::optional<NormalForm> translator_inv_;
  std::size_t budget_;
  TreeVertex root_;
  TreeVertex base_;

  mutable std::vector<std::unordered_map<NormalForm, NormalForm, NormalFormHash>> vertex_cache_;
  mutable std::unordered_map<NormalForm, NormalForm, NormalFormHash> edge_cache_;
  mutable std::map<TreeVertex, std::optional<RootStep>> parent_cache_;
  mutable std::map<int, Ball> balls_;
};

}  // namespace treetrace

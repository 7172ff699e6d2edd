#include "treetrace/bass_serre_tree.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "treetrace/errors.hpp"

namespace treetrace {

BassSerreTree::BassSerreTree(std::shared_ptr<const GraphOfGroups> spec,
                             std::optional<NormalForm> basepoint_translator, std::size_t budget)
    : spec_(std::move(spec)), budget_(budget) {
  vertex_cache_.resize(spec_->kind() == SpecKind::Amalgam ? 2 : 1);
  root_ = TreeVertex{0, spec_->identity()};
  base_ = root_;
  if (basepoint_translator && !basepoint_translator->is_identity()) {
    spec_->check_form(*basepoint_translator);
    translator_ = basepoint_translator;
    translator_inv_ = spec_->invert(*basepoint_translator);
    base_ = vertex(0, *translator_);
  }
}

NormalForm BassSerreTree::canonical(
    const NormalForm& g, const std::vector<NormalForm>& subgroup,
    std::unordered_map<NormalForm, NormalForm, NormalFormHash>& cache) const {
  if (auto it = cache.find(g); it != cache.end()) return it->second;
  NormalForm best = g;
  for (const auto& x : subgroup) {
    NormalForm candidate = spec_->multiply(g, x);
    if (candidate < best) best = std::move(candidate);
  }
  cache.emplace(g, best);
  return best;
}

TreeVertex BassSerreTree::vertex(int kind, const NormalForm& g) const {
  spec_->check_form(g);
  return TreeVertex{kind, canonical(g, spec_->vertex_group(kind), vertex_cache_.at(kind))};
}

TreeEdge BassSerreTree::edge(const NormalForm& g) const {
  spec_->check_form(g);
  return TreeEdge{canonical(g, spec_->edge_group(), edge_cache_)};
}

TreeVertex BassSerreTree::act(const NormalForm& g, const TreeVertex& v) const {
  return vertex(v.kind, spec_->multiply(g, v.rep));
}

TreeEdge BassSerreTree::act(const NormalForm& g, const TreeEdge& e) const {
  return edge(spec_->multiply(g, e.rep));
}

JVImage BassSerreTree::act(const NormalForm& g, const JVImage& x) const {
  if (x.is_star()) return x;
  return JVImage{act(g, *x.edge)};
}

std::pair<TreeVertex, TreeVertex> BassSerreTree::endpoints(const TreeEdge& e) const {
  if (spec_->kind() == SpecKind::Amalgam) return {vertex(0, e.rep), vertex(1, e.rep)};
  return {vertex(0, e.rep), vertex(0, spec_->multiply(e.rep, spec_->letter(RawLetter::t(-1))))};
}

std::vector<std::pair<TreeEdge, TreeVertex>> BassSerreTree::neighbors(const TreeVertex& v) const {
  std::vector<std::pair<TreeEdge, TreeVertex>> out;
  const auto& g = *spec_;
  if (g.kind() == SpecKind::Amalgam) {
    const int other = 1 - v.kind;
    for (Element x : g.left_transversal(v.kind).reps) {
      NormalForm gx = g.multiply(v.rep, g.vertex_group(v.kind)[x]);
      out.emplace_back(edge(gx), vertex(other, gx));
    }
    return out;
  }
  const auto& h = g.vertex_group(0);
  const NormalForm t = g.letter(RawLetter::t(1));
  const NormalForm t_inv = g.letter(RawLetter::t(-1));
  for (Element x : g.left_transversal(0).reps) {
    NormalForm gx = g.multiply(v.rep, h[x]);
    out.emplace_back(edge(gx), vertex(0, g.multiply(gx, t_inv)));
  }
  for (Element x : g.left_transversal(1).reps) {
    NormalForm gxt = g.multiply(g.multiply(v.rep, h[x]), t);
    out.emplace_back(edge(gxt), vertex(0, gxt));
  }
  return out;
}

std::optional<BassSerreTree::RootStep> BassSerreTree::root_parent(const TreeVertex& v) const {
  if (auto it = parent_cache_.find(v); it != parent_cache_.end()) return it->second;
  std::optional<RootStep> step;
  const auto& g = *spec_;
  if (v != root_) {
    if (g.kind() == SpecKind::Amalgam) {
      // v = gX with g not ending in X; its parent is gY across the edge gU.
      step = RootStep{vertex(1 - v.kind, v.rep), edge(v.rep)};
    } else {
      // v = P t^e r H = P t^e H. Dropping r leaves P t^e; dropping t^e leaves P.
      NormalForm with_stable = v.rep;
      with_stable.letters.back().rep = 0;
      NormalForm prefix = v.rep;
      const int e = prefix.letters.back().tag;
      prefix.letters.pop_back();
      step = RootStep{vertex(0, prefix), edge(e > 0 ? with_stable : prefix)};
    }
  }
  parent_cache_.emplace(v, step);
  return step;
}

std::vector<TreeVertex> BassSerreTree::root_path(const TreeVertex& v) const {
  std::vector<TreeVertex> path{v};
  while (auto step = root_parent(path.back())) path.push_back(step->parent);
  return path;
}

GeodesicPath BassSerreTree::geodesic(const TreeVertex& from, const TreeVertex& to) const {
  std::vector<TreeVertex> up = root_path(from);
  std::vector<TreeVertex> down = root_path(to);
  // Strip the shared part above the lowest common ancestor.
  while (up.size() >= 2 && down.size() >= 2 && up[up.size() - 2] == down[down.size() - 2]) {
    up.pop_back();
    down.pop_back();
  }
  GeodesicPath path;
  path.vertices = up;
  for (std::size_t i = 0; i + 1 < up.size(); ++i) path.edges.push_back(root_parent(up[i])->edge);
  for (std::size_t i = down.size() - 1; i-- > 0;) {
    path.vertices.push_back(down[i]);
    path.edges.push_back(root_parent(down[i])->edge);
  }
  return path;
}

int BassSerreTree::distance(const TreeVertex& from, const TreeVertex& to) const {
  return static_cast<int>(geodesic(from, to).length());
}

JVImage BassSerreTree::julg_valette(const TreeVertex& v) const {
  if (!translator_) {
    auto step = root_parent(v);
    return step ? JVImage{step->edge} : JVImage::star();
  }
  TreeVertex pulled = act(*translator_inv_, v);
  auto step = root_parent(pulled);
  return step ? JVImage{act(*translator_, step->edge)} : JVImage::star();
}

TreeVertex BassSerreTree::julg_valette_inverse(const JVImage& x) const {
  if (x.is_star()) return base_;
  auto [a, b] = endpoints(*x.edge);
  return depth(a) > depth(b) ? a : b;
}

const Ball& BassSerreTree::ball(int radius) const {
  if (auto it = balls_.find(radius); it != balls_.end()) return it->second;
  if (radius < 0) throw RadiusTooSmall("ball radius must be non-negative");
  Ball b;
  b.radius = radius;
  b.vertices.push_back(base_);
  b.depth.emplace(base_, 0);
  for (std::size_t head = 0; head < b.vertices.size(); ++head) {
    const TreeVertex v = b.vertices[head];
    const int d = b.depth.at(v);
    if (d == radius) continue;
    for (auto& [e, w] : neighbors(v)) {
      if (b.depth.count(w)) continue;
      b.depth.emplace(w, d + 1);
      b.vertices.push_back(w);
      b.edges.push_back(e);
      if (b.vertices.size() > budget_)
        throw BudgetExceeded("ball of radius " + std::to_string(radius) + " exceeds budget",
                             b.vertices.size());
    }
  }
  return balls_.emplace(radius, std::move(b)).first->second;
}

DefectSet BassSerreTree::defect_set(const NormalForm& g, int radius) const {
  const NormalForm g_inv = spec_->invert(g);
  DefectSet out;
  out.geodesic = geodesic(base_, act(g_inv, base_));
  if (radius < static_cast<int>(out.geodesic.length()))
    throw RadiusTooSmall("radius " + std::to_string(radius) + " below distance " +
                         std::to_string(out.geodesic.length()) + " to g^-1 v0");
  std::set<TreeVertex> on_geodesic(out.geodesic.vertices.begin(), out.geodesic.vertices.end());
  for (const auto& v : ball(radius).vertices) {
    if (julg_valette(act(g, v)) != act(g, julg_valette(v))) {
      out.vertices.push_back(v);
      if (!on_geodesic.count(v)) out.contained = false;
    }
  }
  out.equivariant_on_geodesic = on_geodesic.size();
  for (const auto& v : out.vertices)
    if (on_geodesic.count(v)) --out.equivariant_on_geodesic;
  std::sort(out.vertices.begin(), out.vertices.end());
  return out;
}

std::vector<TreeVertex> BassSerreTree::geodesic_defect(const NormalForm& g) const {
  std::vector<TreeVertex> out;
  for (const auto& v : geodesic(base_, act(spec_->invert(g), base_)).vertices)
    if (julg_valette(act(g, v)) != act(g, julg_valette(v))) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::string BassSerreTree::vertex_label(const TreeVertex& v) const {
  static const char* kinds[2][2] = {{"A", "B"}, {"H", "H"}};
  const char* k = kinds[spec_->kind() == SpecKind::Amalgam ? 0 : 1][v.kind];
  return "(" + spec_->to_string(v.rep) + ")" + k;
}

std::string BassSerreTree::edge_label(const TreeEdge& e) const {
  return "(" + spec_->to_string(e.rep) + ")U";
}

std::string BassSerreTree::export_text(int radius) const {
  const Ball& b = ball(radius);
  std::ostringstream out;
  out << "# ball radius " << radius << ": " << b.vertices.size() << " vertices, " << b.edges.size()
      << " edges\n";
  for (const auto& v : b.vertices) out << "v " << b.depth.at(v) << ' ' << vertex_label(v) << '\n';
  for (const auto& e : b.edges) {
    auto [x, y] = endpoints(e);
    out << "e " << edge_label(e) << ' ' << vertex_label(x) << ' ' << vertex_label(y) << '\n';
  }
  return out.str();
}

std::string BassSerreTree::export_dot(int radius) const {
  const Ball& b = ball(radius);
  std::ostringstream out;
  out << "graph bass_serre_ball {\n";
  std::map<TreeVertex, std::size_t> id;
  for (const auto& v : b.vertices) {
    std::size_t n = id.size();
    id.emplace(v, n);
    out << "  v" << n << " [label=\"" << vertex_label(v) << "\"];\n";
  }
  for (const auto& e : b.edges) {
    auto [x, y] = endpoints(e);
    out << "  v" << id.at(x) << " -- v" << id.at(y) << " [label=\"" << edge_label(e) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace treetrace

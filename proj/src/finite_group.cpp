#include "treetrace/finite_group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "treetrace/errors.hpp"

namespace treetrace {

namespace {

std::string perm_label(const Permutation& p) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
  out << ']';
  return out.str();
}

}  // namespace

FiniteGroup FiniteGroup::from_table(const std::vector<std::vector<int>>& table,
                                    std::vector<std::string> labels) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw GroupAxiomError("NoIdentity: empty table");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(table[a].size()) != n)
      throw GroupAxiomError("table row " + std::to_string(a) + " has wrong length");
    for (int b = 0; b < n; ++b)
      if (table[a][b] < 0 || table[a][b] >= n)
        throw GroupAxiomError("table entry (" + std::to_string(a) + "," + std::to_string(b) +
                              ") out of range");
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw GroupAxiomError("label count does not match table size");

  int e = -1;
  for (int c = 0; c < n && e < 0; ++c) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = table[c][a] == a && table[a][c] == a;
    if (ok) e = c;
  }
  if (e < 0) throw GroupAxiomError("NoIdentity");

  for (int a = 0; a < n; ++a) {
    bool found = false;
    for (int b = 0; b < n && !found; ++b) found = table[a][b] == e && table[b][a] == e;
    if (!found) throw GroupAxiomError("NoInverse(" + std::to_string(a) + ")");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw GroupAxiomError("NotAssociative(" + std::to_string(a) + "," + std::to_string(b) +
                                "," + std::to_string(c) + ")");

  // Swap e and 0 so that the identity has index 0.
  std::vector<int> relabel(n);
  std::iota(relabel.begin(), relabel.end(), 0);
  std::swap(relabel[0], relabel[e]);

  FiniteGroup g;
  g.order_ = n;
  g.table_.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.table_[relabel[a] * n + relabel[b]] = relabel[table[a][b]];
  g.labels_.resize(n);
  for (int a = 0; a < n; ++a)
    g.labels_[relabel[a]] = labels.empty() ? std::to_string(a) : labels[a];
  g.build_inverses();
  return g;
}

FiniteGroup FiniteGroup::from_permutations(const std::vector<Permutation>& generators) {
  std::size_t degree = generators.empty() ? 0 : generators.front().size();
  for (const auto& p : generators) {
    if (p.size() != degree) throw GroupAxiomError("generators have different degrees");
    std::vector<bool> seen(degree, false);
    for (int x : p) {
      if (x < 0 || static_cast<std::size_t>(x) >= degree || seen[x])
        throw GroupAxiomError("not a permutation: " + perm_label(p));
      seen[x] = true;
    }
  }
  auto compose = [](const Permutation& p, const Permutation& q) {
    Permutation r(q.size());
    for (std::size_t x = 0; x < q.size(); ++x) r[x] = p[q[x]];
    return r;
  };

  Permutation id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::vector<Permutation> elements{id};
  std::map<Permutation, int> index{{id, 0}};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& s : generators) {
      Permutation next = compose(elements[head], s);
      if (index.emplace(next, static_cast<int>(elements.size())).second)
        elements.push_back(std::move(next));
    }
  }

  FiniteGroup g;
  g.order_ = static_cast<int>(elements.size());
  g.table_.resize(static_cast<std::size_t>(g.order_) * g.order_);
  for (int a = 0; a < g.order_; ++a)
    for (int b = 0; b < g.order_; ++b)
      g.table_[a * g.order_ + b] = index.at(compose(elements[a], elements[b]));
  g.labels_.reserve(elements.size());
  for (const auto& p : elements) g.labels_.push_back(perm_label(p));
  g.permutations_ = std::move(elements);
  g.build_inverses();
  return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  return from_table(table);
}

FiniteGroup FiniteGroup::symmetric(int degree) {
  std::vector<Permutation> gens;
  if (degree >= 2) {
    Permutation transposition(degree);
    std::iota(transposition.begin(), transposition.end(), 0);
    std::swap(transposition[0], transposition[1]);
    Permutation cycle(degree);
    for (int x = 0; x < degree; ++x) cycle[x] = (x + 1) % degree;
    gens = {transposition, cycle};
  } else {
    gens = {Permutation(std::max(degree, 0), 0)};
  }
  return from_permutations(gens);
}

void FiniteGroup::build_inverses() {
  inverses_.assign(order_, 0);
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      if (mul(a, b) == 0) {
        inverses_[a] = b;
        break;
      }
}

int FiniteGroup::element_order(Element a) const {
  int k = 1;
  for (Element x = a; x != 0; x = mul(x, a)) ++k;
  return k;
}

std::optional<Element> FiniteGroup::find_label(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Element>(it - labels_.begin());
}

std::optional<Element> FiniteGroup::find_permutation(const Permutation& p) const {
  auto it = std::find(permutations_.begin(), permutations_.end(), p);
  if (it == permutations_.end()) return std::nullopt;
  return static_cast<Element>(it - permutations_.begin());
}

FiniteGroup check_group_axioms(const std::vector<std::vector<int>>& table) {
  return FiniteGroup::from_table(table);
}

bool Subgroup::contains(Element a) const {
  return std::binary_search(members.begin(), members.end(), a);
}

Subgroup subgroup_generated(const GroupPtr& group, std::span<const Element> generators) {
  for (Element g : generators)
    if (g < 0 || g >= group->order())
      throw IndexOutOfRange("generator " + std::to_string(g) + " out of range");
  std::vector<bool> in(group->order(), false);
  std::vector<Element> members{0};
  in[0] = true;
  for (std::size_t head = 0; head < members.size(); ++head)
    for (Element s : generators) {
      Element next = group->mul(members[head], s);
      if (!in[next]) {
        in[next] = true;
        members.push_back(next);
      }
    }
  std::sort(members.begin(), members.end());
  return Subgroup{group, std::move(members)};
}

Subgroup make_subgroup(const GroupPtr& group, std::vector<Element> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (Element a : members)
    if (a < 0 || a >= group->order())
      throw IndexOutOfRange("subgroup element " + std::to_string(a) + " out of range");
  Subgroup s{group, members};
  if (!s.contains(0)) throw ValidationError("subgroup does not contain the identity");
  for (Element a : members) {
    if (!s.contains(group->inv(a)))
      throw ValidationError("subgroup not closed under inverse of " + group->label(a));
    for (Element b : members)
      if (!s.contains(group->mul(a, b)))
        throw ValidationError("subgroup not closed: " + group->label(a) + "*" + group->label(b));
  }
  return s;
}

std::vector<Subgroup> all_subgroups(const GroupPtr& group) {
  std::set<std::vector<Element>> found{{0}};
  std::deque<std::vector<Element>> work{{0}};
  while (!work.empty()) {
    std::vector<Element> members = std::move(work.front());
    work.pop_front();
    Subgroup s{group, members};
    for (Element g = 0; g < group->order(); ++g) {
      if (s.contains(g)) continue;
      std::vector<Element> gens = members;
      gens.push_back(g);
      Subgroup bigger = subgroup_generated(group, gens);
      if (found.insert(bigger.members).second) work.push_back(bigger.members);
    }
  }
  std::vector<Subgroup> out;
  for (const auto& m : found) out.push_back(Subgroup{group, m});
  std::stable_sort(out.begin(), out.end(),
                   [](const Subgroup& a, const Subgroup& b) { return a.order() < b.order(); });
  return out;
}

GroupPtr subgroup_as_group(const Subgroup& sub) {
  const FiniteGroup& g = *sub.parent;
  const int k = sub.order();
  auto pos = [&](Element x) {
    return static_cast<int>(std::lower_bound(sub.members.begin(), sub.members.end(), x) - sub.members.begin());
  };
  std::vector<std::vector<int>> table(k, std::vector<int>(k));
  std::vector<std::string> labels;
  for (int i = 0; i < k; ++i) {
    labels.push_back(g.label(sub.members[i]));
    for (int j = 0; j < k; ++j) table[i][j] = pos(g.mul(sub.members[i], sub.members[j]));
  }
  return make_group(FiniteGroup::from_table(table, labels));
}

std::pair<Element, Element> Transversal::decompose(Element a) const {
  const FiniteGroup& g = *subgroup.parent;
  Element rep = rep_of(a);
  Element u = side == CosetSide::Right ? g.mul(a, g.inv(rep)) : g.mul(g.inv(rep), a);
  return {u, rep};
}

Transversal build_transversal(const Subgroup& subgroup, CosetSide side) {
  const FiniteGroup& g = *subgroup.parent;
  Transversal t;
  t.subgroup = subgroup;
  t.side = side;
  t.coset_of.assign(g.order(), -1);
  // Scanning in index order makes each rep the minimal element of its coset.
  for (Element a = 0; a < g.order(); ++a) {
    if (t.coset_of[a] >= 0) continue;
    int c = static_cast<int>(t.reps.size());
    t.reps.push_back(a);
    for (Element u : subgroup.members) {
      Element member = side == CosetSide::Right ? g.mul(u, a) : g.mul(a, u);
      t.coset_of[member] = c;
    }
  }
  return t;
}

GroupHom make_hom(GroupPtr source, GroupPtr target, std::vector<Element> images) {
  if (static_cast<int>(images.size()) != source->order())
    throw ValidationError("homomorphism image list has wrong length");
  for (Element x : images)
    if (x < 0 || x >= target->order())
      throw IndexOutOfRange("homomorphism image " + std::to_string(x) + " out of range");
  if (images[0] != 0) throw ValidationError("homomorphism does not map identity to identity");
  for (Element a = 0; a < source->order(); ++a)
    for (Element b = 0; b < source->order(); ++b)
      if (images[source->mul(a, b)] != target->mul(images[a], images[b]))
        throw ValidationError("not a homomorphism: witness (" + source->label(a) + ", " +
                              source->label(b) + ")");
  return GroupHom{std::move(source), std::move(target), std::move(images)};
}

GroupHom identity_hom(const GroupPtr& group) {
  std::vector<Element> images(group->order());
  std::iota(images.begin(), images.end(), 0);
  return GroupHom{group, group, std::move(images)};
}

GroupHom hom_from_generators(GroupPtr source, GroupPtr target,
                             std::span<const std::pair<Element, Element>> images) {
  const FiniteGroup& s = *source;
  const FiniteGroup& t = *target;
  for (const auto& [x, y] : images)
    if (x < 0 || x >= s.order() || y < 0 || y >= t.order())
      throw IndexOutOfRange("generator image out of range");
  std::vector<Element> map(s.order(), -1);
  map[0] = 0;
  std::vector<Element> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Element x = queue[head];
    for (const auto& [g, img] : images) {
      const Element next = s.mul(x, g);
      const Element value = t.mul(map[x], img);
      if (map[next] < 0) {
        map[next] = value;
        queue.push_back(next);
      } else if (map[next] != value) {
        throw ValidationError("generator images do not define a homomorphism: conflict at " +
                              s.label(next));
      }
    }
  }
  if (static_cast<int>(queue.size()) != s.order())
    throw ValidationError("generators do not generate the source group");
  return make_hom(std::move(source), std::move(target), std::move(map));
}

InjectivityResult is_injective_on(const GroupHom& hom, const Subgroup& sub) {
  if (sub.parent != hom.source && !(*sub.parent == *hom.source))
    throw SubgroupNotInSource("subgroup does not live in the homomorphism's source");
  std::map<Element, Element> first_preimage;
  for (Element a : sub.members) {
    auto [it, fresh] = first_preimage.emplace(hom(a), a);
    if (!fresh) return InjectivityResult{false, std::make_pair(it->second, a)};
  }
  return InjectivityResult{};
}

}  // namespace treetrace

#include "treetrace/graph_of_groups.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <sstream>

#include "treetrace/errors.hpp"

namespace treetrace {

namespace {

std::uint64_t next_spec_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max()
                                                         : a + b;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  return a > std::numeric_limits<std::size_t>::max() / b ? std::numeric_limits<std::size_t>::max()
                                                         : a * b;
}

Subgroup image_subgroup(const GroupHom& hom) {
  std::vector<Element> members(hom.images.begin(), hom.images.end());
  return make_subgroup(hom.target, std::move(members));
}

}  // namespace

std::strong_ordering NormalForm::operator<=>(const NormalForm& other) const {
  if (auto c = letters.size() <=> other.letters.size(); c != 0) return c;
  if (auto c = letters <=> other.letters; c != 0) return c;
  if (auto c = head <=> other.head; c != 0) return c;
  if (auto c = kind <=> other.kind; c != 0) return c;
  return spec_id <=> other.spec_id;
}

std::size_t NormalFormHash::operator()(const NormalForm& x) const noexcept {
  std::size_t h = std::hash<std::uint64_t>{}(x.spec_id) ^ (static_cast<std::size_t>(x.head) << 1);
  for (const auto& l : x.letters) {
    std::size_t v = static_cast<std::size_t>(l.rep) * 4 + static_cast<std::size_t>(l.tag + 1);
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

GraphOfGroups GraphOfGroups::amalgam(AmalgamSpec spec) {
  const auto& s = spec;
  if (!s.A || !s.B || !s.U || !s.H) throw ValidationError("amalgam spec is missing a group");
  auto same = [](const GroupPtr& a, const GroupPtr& b) { return a == b || *a == *b; };
  if (!same(s.embed_A.source, s.U) || !same(s.embed_A.target, s.A) ||
      !same(s.embed_B.source, s.U) || !same(s.embed_B.target, s.B))
    throw ValidationError("embeddings must map U into A and B");
  if (!same(s.alpha_A.source, s.A) || !same(s.alpha_A.target, s.H) ||
      !same(s.alpha_B.source, s.B) || !same(s.alpha_B.target, s.H))
    throw ValidationError("alpha maps must map A and B into H");

  auto whole = [](const GroupPtr& g) {
    Subgroup all{g, {}};
    for (int i = 0; i < g->order(); ++i) all.members.push_back(i);
    return all;
  };
  Subgroup all_u = whole(s.U);
  if (auto r = is_injective_on(s.embed_A, all_u); !r)
    throw ValidationError("embedding of U into A not injective, witness (" +
                          std::to_string(r.witness->first) + "," +
                          std::to_string(r.witness->second) + ")");
  if (auto r = is_injective_on(s.embed_B, all_u); !r)
    throw ValidationError("embedding of U into B not injective, witness (" +
                          std::to_string(r.witness->first) + "," +
                          std::to_string(r.witness->second) + ")");
  for (Element u = 0; u < s.U->order(); ++u)
    if (s.alpha_A(s.embed_A(u)) != s.alpha_B(s.embed_B(u)))
      throw ValidationError("alpha_A and alpha_B disagree on U element " + s.U->label(u));

  if (auto r = is_injective_on(s.alpha_A, whole(s.A)); !r)
    throw ValidationError("alpha not injective on vertex group A, witness (" +
                          s.A->label(r.witness->first) + ", " + s.A->label(r.witness->second) + ")");
  if (auto r = is_injective_on(s.alpha_B, whole(s.B)); !r)
    throw ValidationError("alpha not injective on vertex group B, witness (" +
                          s.B->label(r.witness->first) + ", " + s.B->label(r.witness->second) + ")");

  GraphOfGroups g;
  g.kind_ = SpecKind::Amalgam;
  g.id_ = next_spec_id();
  g.amalgam_ = std::move(spec);
  g.finish();
  return g;
}

GraphOfGroups GraphOfGroups::hnn(HNNSpec spec) {
  if (!spec.H) throw ValidationError("hnn spec is missing H");
  const FiniteGroup& h = *spec.H;
  if (spec.U.parent != spec.H && !(*spec.U.parent == h))
    throw ValidationError("U is not a subgroup of H");
  if (spec.conjugator < 0 || spec.conjugator >= h.order())
    throw ValidationError("conjugator out of range");
  if (spec.phi.empty()) {
    spec.phi.assign(h.order(), -1);
    for (Element u : spec.U.members) spec.phi[u] = h.conjugate(spec.conjugator, u);
  }
  if (static_cast<int>(spec.phi.size()) != h.order())
    throw ValidationError("phi must list one image per element of H");
  for (Element x = 0; x < h.order(); ++x) {
    if (spec.U.contains(x)) {
      Element expected = h.conjugate(spec.conjugator, x);
      if (spec.phi[x] != expected)
        throw ValidationError("phi is not conjugation by the conjugator: phi(" + h.label(x) +
                              ") = " +
                              (spec.phi[x] >= 0 && spec.phi[x] < h.order() ? h.label(spec.phi[x])
                                                                            : std::string("?")) +
                              " but g*u*g^-1 = " + h.label(expected));
    } else if (spec.phi[x] != -1) {
      throw ValidationError("phi defined outside U at " + h.label(x));
    }
  }
  GraphOfGroups g;
  g.kind_ = SpecKind::HNN;
  g.id_ = next_spec_id();
  g.hnn_ = std::move(spec);
  g.finish();
  return g;
}

GraphOfGroups GraphOfGroups::double_of(const GroupPtr& H, const Subgroup& U) {
  GroupPtr u_group = subgroup_as_group(U);
  // members is sorted and starts with 0, so index i of u_group is U.members[i].
  AmalgamSpec spec;
  spec.A = H;
  spec.B = H;
  spec.U = u_group;
  spec.H = H;
  spec.embed_A = make_hom(u_group, H, U.members);
  spec.embed_B = make_hom(u_group, H, U.members);
  spec.alpha_A = identity_hom(H);
  spec.alpha_B = identity_hom(H);
  return amalgam(std::move(spec));
}

GraphOfGroups GraphOfGroups::conjugation_hnn(const GroupPtr& H, const Subgroup& U, Element g) {
  HNNSpec spec;
  spec.H = H;
  spec.U = U;
  spec.conjugator = g;
  return hnn(std::move(spec));
}

void GraphOfGroups::finish() {
  right_.clear();
  left_.clear();
  vertex_groups_.clear();
  edge_group_.clear();
  if (kind_ == SpecKind::Amalgam) {
    const auto& s = amalgam_;
    Subgroup in_a = image_subgroup(s.embed_A);
    Subgroup in_b = image_subgroup(s.embed_B);
    right_ = {build_transversal(in_a, CosetSide::Right), build_transversal(in_b, CosetSide::Right)};
    left_ = {build_transversal(in_a, CosetSide::Left), build_transversal(in_b, CosetSide::Left)};
    unembed_.assign(2, {});
    unembed_[0].assign(s.A->order(), -1);
    unembed_[1].assign(s.B->order(), -1);
    for (Element u = 0; u < s.U->order(); ++u) {
      unembed_[0][s.embed_A(u)] = u;
      unembed_[1][s.embed_B(u)] = u;
    }
    vertex_groups_.resize(2);
    for (Element a = 0; a < s.A->order(); ++a) vertex_groups_[0].push_back(letter(RawLetter::a(a)));
    for (Element b = 0; b < s.B->order(); ++b) vertex_groups_[1].push_back(letter(RawLetter::b(b)));
    for (Element u = 0; u < s.U->order(); ++u) {
      NormalForm x = identity();
      x.head = u;
      edge_group_.push_back(std::move(x));
    }
  } else {
    const auto& s = hnn_;
    std::vector<Element> image;
    for (Element u : s.U.members) image.push_back(s.phi[u]);
    Subgroup phi_u = make_subgroup(s.H, image);
    right_ = {build_transversal(s.U, CosetSide::Right), build_transversal(phi_u, CosetSide::Right)};
    left_ = {build_transversal(s.U, CosetSide::Left), build_transversal(phi_u, CosetSide::Left)};
    phi_inv_.assign(s.H->order(), -1);
    for (Element u : s.U.members) phi_inv_[s.phi[u]] = u;
    vertex_groups_.resize(1);
    for (Element h = 0; h < s.H->order(); ++h) vertex_groups_[0].push_back(letter(RawLetter::h(h)));
    for (Element u : s.U.members) edge_group_.push_back(letter(RawLetter::h(u)));
  }
}

NormalForm GraphOfGroups::identity() const {
  NormalForm x;
  x.spec_id = id_;
  x.kind = kind_;
  return x;
}

const Transversal& GraphOfGroups::right_transversal(int tag) const { return right_.at(tag); }
const Transversal& GraphOfGroups::left_transversal(int tag) const { return left_.at(tag); }

// Pushes the carried subgroup element leftwards through letters[0, upto)
// and finally into the head.
void GraphOfGroups::absorb(NormalForm& x, Element carried, std::size_t upto) const {
  if (kind_ == SpecKind::Amalgam) {
    const auto& s = amalgam_;
    for (std::size_t i = upto; i-- > 0 && carried != 0;) {
      auto& l = x.letters[i];
      const FiniteGroup& side = l.tag == 0 ? *s.A : *s.B;
      Element embedded = l.tag == 0 ? s.embed_A(carried) : s.embed_B(carried);
      auto [u, rep] = right_[l.tag].decompose(side.mul(l.rep, embedded));
      l.rep = rep;
      carried = unembed_[l.tag][u];
    }
    x.head = s.U->mul(x.head, carried);
  } else {
    const FiniteGroup& h = *hnn_.H;
    for (std::size_t i = upto; i-- > 0 && carried != 0;) {
      auto& l = x.letters[i];
      int which = l.tag > 0 ? 0 : 1;
      auto [u, rep] = right_[which].decompose(h.mul(l.rep, carried));
      l.rep = rep;
      // t u = phi(u) t and t^-1 v = phi^-1(v) t^-1.
      carried = l.tag > 0 ? hnn_.phi[u] : phi_inv_[u];
    }
    x.head = h.mul(x.head, carried);
  }
}

void GraphOfGroups::push_raw(NormalForm& x, const RawLetter& l) const {
  using K = RawLetter::Kind;
  if (kind_ == SpecKind::Amalgam) {
    if (l.kind != K::A && l.kind != K::B)
      throw InvalidLetter("amalgam words take letters from A or B only");
    const int side = l.kind == K::A ? 0 : 1;
    const FiniteGroup& group = side == 0 ? *amalgam_.A : *amalgam_.B;
    if (l.element < 0 || l.element >= group.order())
      throw InvalidLetter("element " + std::to_string(l.element) + " out of range");
    Element y = l.element;
    if (!x.letters.empty() && x.letters.back().tag == side) {
      y = group.mul(x.letters.back().rep, y);
      x.letters.pop_back();
    }
    auto [u, rep] = right_[side].decompose(y);
    std::size_t upto = x.letters.size();
    if (rep != 0) x.letters.push_back({side, rep});
    absorb(x, unembed_[side][u], upto);
    return;
  }

  const FiniteGroup& h = *hnn_.H;
  if (l.kind == K::Stable) {
    if (l.exponent != 1 && l.exponent != -1) throw InvalidLetter("stable letter exponent must be +-1");
    if (!x.letters.empty() && x.letters.back().rep == 0 && x.letters.back().tag == -l.exponent) {
      x.letters.pop_back();
    } else {
      x.letters.push_back({l.exponent, 0});
    }
    return;
  }
  if (l.kind != K::H) throw InvalidLetter("hnn words take letters from H or the stable letter");
  if (l.element < 0 || l.element >= h.order())
    throw InvalidLetter("element " + std::to_string(l.element) + " out of range");
  if (x.letters.empty()) {
    x.head = h.mul(x.head, l.element);
    return;
  }
  auto& last = x.letters.back();
  int which = last.tag > 0 ? 0 : 1;
  auto [u, rep] = right_[which].decompose(h.mul(last.rep, l.element));
  last.rep = rep;
  Element carried = last.tag > 0 ? hnn_.phi[u] : phi_inv_[u];
  absorb(x, carried, x.letters.size() - 1);
}

NormalForm GraphOfGroups::normalize(std::span<const RawLetter> word) const {
  NormalForm x = identity();
  for (const auto& l : word) push_raw(x, l);
  return x;
}

std::vector<RawLetter> GraphOfGroups::raw_letters(const NormalForm& x) const {
  std::vector<RawLetter> out;
  if (kind_ == SpecKind::Amalgam) {
    if (x.head != 0) out.push_back(RawLetter::a(amalgam_.embed_A(x.head)));
    for (const auto& l : x.letters)
      out.push_back(l.tag == 0 ? RawLetter::a(l.rep) : RawLetter::b(l.rep));
  } else {
    if (x.head != 0) out.push_back(RawLetter::h(x.head));
    for (const auto& l : x.letters) {
      out.push_back(RawLetter::t(l.tag));
      if (l.rep != 0) out.push_back(RawLetter::h(l.rep));
    }
  }
  return out;
}

void GraphOfGroups::check_form(const NormalForm& x) const {
  if (x.spec_id != id_ || x.kind != kind_)
    throw SpecMismatch("normal form belongs to a different graph of groups");
}

NormalForm GraphOfGroups::multiply(const NormalForm& x, const NormalForm& y) const {
  check_form(x);
  check_form(y);
  NormalForm out = x;
  for (const auto& l : raw_letters(y)) push_raw(out, l);
  return out;
}

NormalForm GraphOfGroups::invert(const NormalForm& x) const {
  check_form(x);
  auto raw = raw_letters(x);
  std::reverse(raw.begin(), raw.end());
  for (auto& l : raw) {
    switch (l.kind) {
      case RawLetter::Kind::A: l.element = amalgam_.A->inv(l.element); break;
      case RawLetter::Kind::B: l.element = amalgam_.B->inv(l.element); break;
      case RawLetter::Kind::H: l.element = hnn_.H->inv(l.element); break;
      case RawLetter::Kind::Stable: l.exponent = -l.exponent; break;
    }
  }
  return normalize(raw);
}

Element GraphOfGroups::alpha(const NormalForm& x) const {
  check_form(x);
  if (kind_ == SpecKind::Amalgam) {
    const auto& s = amalgam_;
    Element out = s.alpha_A(s.embed_A(x.head));
    for (const auto& l : x.letters)
      out = s.H->mul(out, l.tag == 0 ? s.alpha_A(l.rep) : s.alpha_B(l.rep));
    return out;
  }
  const FiniteGroup& h = *hnn_.H;
  Element g = hnn_.conjugator;
  Element out = x.head;
  for (const auto& l : x.letters) out = h.mul(h.mul(out, l.tag > 0 ? g : h.inv(g)), l.rep);
  return out;
}

std::size_t GraphOfGroups::ball_size(int max_length) const {
  if (max_length < 0) return 0;
  if (kind_ == SpecKind::Amalgam) {
    const std::size_t n[2] = {right_[0].reps.size() - 1, right_[1].reps.size() - 1};
    std::size_t total = 1;
    // ending[s] = number of alternating words of the current length ending on side s.
    std::size_t ending[2] = {n[0], n[1]};
    for (int k = 1; k <= max_length; ++k) {
      total = saturating_add(total, saturating_add(ending[0], ending[1]));
      std::size_t next[2] = {saturating_mul(ending[1], n[0]), saturating_mul(ending[0], n[1])};
      ending[0] = next[0];
      ending[1] = next[1];
    }
    return saturating_mul(total, static_cast<std::size_t>(amalgam_.U->order()));
  }
  // States: (exponent sign, rep is identity).
  const std::size_t reps[2] = {right_[0].reps.size(), right_[1].reps.size()};
  // cnt[e][z]: words whose last letter has exponent e (0 = +, 1 = -) and
  // identity rep (z = 1) or not (z = 0).
  std::size_t cnt[2][2] = {{reps[0] - 1, 1}, {reps[1] - 1, 1}};
  std::size_t total = 1;
  for (int k = 1; k <= max_length; ++k) {
    std::size_t level = 0;
    for (auto& row : cnt)
      for (std::size_t c : row) level = saturating_add(level, c);
    total = saturating_add(total, level);
    std::size_t next[2][2] = {};
    for (int e = 0; e < 2; ++e) {
      // Followers allowed after (e, z): any exponent, except -e after an identity rep.
      for (int f = 0; f < 2; ++f) {
        std::size_t from = cnt[e][0];
        if (f == e) from = saturating_add(from, cnt[e][1]);
        next[f][0] = saturating_add(next[f][0], saturating_mul(from, reps[f] - 1));
        next[f][1] = saturating_add(next[f][1], from);
      }
    }
    std::copy(&next[0][0], &next[0][0] + 4, &cnt[0][0]);
  }
  return saturating_mul(total, static_cast<std::size_t>(hnn_.H->order()));
}

std::vector<NormalForm> GraphOfGroups::enumerate_ball(int max_length, std::size_t budget) const {
  if (max_length < 0) throw ValidationError("max_length must be non-negative");
  std::size_t count = ball_size(max_length);
  if (count > budget) throw BudgetExceeded("enumerate_ball exceeds budget", count);

  std::vector<NormalForm> out;
  out.reserve(count);
  const int heads = kind_ == SpecKind::Amalgam ? amalgam_.U->order() : hnn_.H->order();
  NormalForm word = identity();

  std::function<void()> extend = [&] {
    for (Element h = 0; h < heads; ++h) {
      word.head = h;
      out.push_back(word);
    }
    word.head = 0;
    if (static_cast<int>(word.letters.size()) == max_length) return;
    if (kind_ == SpecKind::Amalgam) {
      for (int side = 0; side < 2; ++side) {
        if (!word.letters.empty() && word.letters.back().tag == side) continue;
        for (std::size_t r = 1; r < right_[side].reps.size(); ++r) {
          word.letters.push_back({side, right_[side].reps[r]});
          extend();
          word.letters.pop_back();
        }
      }
    } else {
      for (int e : {1, -1}) {
        if (!word.letters.empty() && word.letters.back().rep == 0 && word.letters.back().tag == -e)
          continue;
        const auto& t = right_[e > 0 ? 0 : 1];
        for (Element rep : t.reps) {
          word.letters.push_back({e, rep});
          extend();
          word.letters.pop_back();
        }
      }
    }
  };
  extend();
  std::sort(out.begin(), out.end());
  return out;
}

std::string GraphOfGroups::to_string(const NormalForm& x) const {
  if (x.is_identity()) return "1";
  std::ostringstream out;
  bool first = true;
  auto put = [&](const std::string& s) {
    out << (first ? "" : " ") << s;
    first = false;
  };
  if (kind_ == SpecKind::Amalgam) {
    if (x.head != 0) put("U:" + amalgam_.U->label(x.head));
    for (const auto& l : x.letters)
      put(l.tag == 0 ? "A:" + amalgam_.A->label(l.rep) : "B:" + amalgam_.B->label(l.rep));
  } else {
    if (x.head != 0) put("H:" + hnn_.H->label(x.head));
    for (const auto& l : x.letters) {
      put(l.tag > 0 ? "t" : "t^-1");
      if (l.rep != 0) put("H:" + hnn_.H->label(l.rep));
    }
  }
  return out.str();
}

}  // namespace treetrace

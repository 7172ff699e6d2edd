#include "treetrace/transfer.hpp"

#include <chrono>

#include "treetrace/errors.hpp"

namespace treetrace {

namespace {

void check_spec(const BassSerreTree& tree, const GGroupRingElement& a) {
  if (tree.spec().id() != a.spec().id()) throw SpecMismatch("element and tree belong to different groups");
}

GroupAlgebraElement alpha_term(const GraphOfGroups& spec, const NormalForm& g, const GaussianRational& c) {
  return GroupAlgebraElement::basis(spec.target(), spec.alpha(g), c);
}

template <class Index>
void accumulate(OrbitVector<Index>& out, const Index& at, const GroupAlgebraElement& x) {
  if (x.is_zero()) return;
  auto [it, fresh] = out.emplace(at, x);
  if (fresh) return;
  it->second += x;
  if (it->second.is_zero()) out.erase(it);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

DeltaOperator lift_to_delta(const BassSerreTree& tree, const GGroupRingElement& a,
                            const std::set<TreeVertex>& columns) {
  check_spec(tree, a);
  const auto& spec = tree.spec();
  DeltaOperator op(spec.target(), columns);
  for (const auto& v : columns)
    for (const auto& [g, c] : a.coeffs()) op.add(tree.act(g, v), v, alpha_term(spec, g, c));
  return op;
}

OmegaOperator lift_to_omega(const BassSerreTree& tree, const GGroupRingElement& a,
                            const std::set<OmegaIndex>& columns) {
  check_spec(tree, a);
  const auto& spec = tree.spec();
  OmegaOperator op(spec.target(), columns);
  for (const auto& x : columns) {
    if (x.is_star()) continue;
    for (const auto& [g, c] : a.coeffs()) op.add(tree.act(g, x), x, alpha_term(spec, g, c));
  }
  return op;
}

DeltaVector apply_delta(const BassSerreTree& tree, const GGroupRingElement& a, const DeltaVector& x) {
  check_spec(tree, a);
  DeltaVector out;
  for (const auto& [v, coord] : x)
    for (const auto& [g, c] : a.coeffs())
      accumulate(out, tree.act(g, v), alpha_term(tree.spec(), g, c) * coord);
  return out;
}

OmegaVector apply_omega(const BassSerreTree& tree, const GGroupRingElement& a, const OmegaVector& x) {
  check_spec(tree, a);
  OmegaVector out;
  for (const auto& [w, coord] : x) {
    if (w.is_star()) continue;
    for (const auto& [g, c] : a.coeffs())
      accumulate(out, tree.act(g, w), alpha_term(tree.spec(), g, c) * coord);
  }
  return out;
}

DeltaVector pull_back(const BassSerreTree& tree, const OmegaVector& x) {
  DeltaVector out;
  for (const auto& [w, coord] : x) accumulate(out, tree.julg_valette_inverse(w), coord);
  return out;
}

DefectOperator defect_operator(const BassSerreTree& tree, const GGroupRingElement& a,
                               std::optional<int> scan_radius) {
  check_spec(tree, a);
  DefectOperator out;
  out.support.insert(tree.base_vertex());
  for (const auto& [g, c] : a.coeffs()) {
    if (scan_radius) {
      DefectSet d = tree.defect_set(g, *scan_radius);
      out.certified = out.certified && d.contained;
      out.support.insert(d.vertices.begin(), d.vertices.end());
    } else {
      auto d = tree.geodesic_defect(g);
      out.support.insert(d.begin(), d.end());
    }
  }

  std::set<OmegaIndex> images;
  for (const auto& v : out.support) images.insert(tree.julg_valette(v));
  const OmegaOperator omega = lift_to_omega(tree, a, images);

  out.op = lift_to_delta(tree, a, out.support);
  for (const auto& v : out.support) {
    const JVImage image = tree.julg_valette(v);
    for (const auto& [w, x] : omega.column(image)) out.op.add(tree.julg_valette_inverse(w), v, -x);
  }
  return out;
}

nlohmann::json TransferReport::to_json(bool timing) const {
  nlohmann::json j{{"element", element}, {"lhs", lhs.to_string()}, {"rhs", rhs.to_string()},
                   {"r", r},             {"equal", equal},          {"support", support}};
  if (!certified) j["certified"] = false;
  if (timing) j["ms"] = ms;
  return j;
}

TransferReport verify_transfer(const BassSerreTree& tree, const GGroupRingElement& a, int r,
                               std::uint64_t seed) {
  if (r < 1) throw ValidationError("r must be positive");
  const auto start = std::chrono::steady_clock::now();
  TransferReport report;
  report.element = a.to_string();
  report.r = r;
  DefectOperator d = defect_operator(tree, a);
  report.support = d.support.size();
  report.certified = d.certified;
  report.lhs = tr_G(a) * GaussianRational(r);
  report.rhs = tr_H_orbit(d.op);
  const int order = tree.spec().target()->order();
  for (int copy = 1; copy < r; ++copy) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(copy));
    std::map<TreeVertex, Element> shift;
    for (const auto& v : d.support) shift.emplace(v, static_cast<Element>(rng.below(order)));
    report.rhs += tr_H_orbit(d.op.rebase(shift));
  }
  report.equal = report.lhs == report.rhs;
  report.ms = elapsed_ms(start);
  return report;
}

DeltaVector act_vector(const BassSerreTree& tree, const NormalForm& g, const DeltaVector& x) {
  const auto h = GroupAlgebraElement::basis(tree.spec().target(), tree.spec().alpha(g));
  DeltaVector out;
  for (const auto& [v, coord] : x) accumulate(out, tree.act(g, v), h * coord);
  return out;
}

bool inner_product_invariance(const BassSerreTree& tree, const DeltaVector& x, const DeltaVector& y,
                              const NormalForm& g) {
  const auto& group = tree.spec().target();
  return inner_product(x, y, group) ==
         inner_product(act_vector(tree, g, x), act_vector(tree, g, y), group);
}

nlohmann::json PolynomialReport::to_json(bool timing) const {
  nlohmann::json j = transfer.to_json(timing);
  j["constant"] = constant.to_string();
  j["lazy_trace"] = lazy_trace.to_string();
  j["routes_agree"] = routes_agree;
  j["support_certified"] = support_certified;
  j["corrected_equal"] = corrected_equal;
  return j;
}

PolynomialReport polynomial_calculus_defect(const BassSerreTree& tree, const GGroupRingElement& a,
                                            const Polynomial& p, int max_degree,
                                            std::size_t max_support) {
  check_spec(tree, a);
  if (p.degree() > max_degree)
    throw BudgetExceeded("polynomial degree above budget " + std::to_string(max_degree),
                         static_cast<std::size_t>(p.degree()));
  const auto start = std::chrono::steady_clock::now();

  // Route one: p(a) in CG.
  GGroupRingElement pa(a.spec_ptr());
  GGroupRingElement power = GGroupRingElement::one(a.spec_ptr());
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    if (k > 0) power = power * a;
    if (power.support_size() > max_support)
      throw BudgetExceeded("p(a) support above budget", power.support_size());
    pa += power * p.coeffs[k];
  }
  PolynomialReport report;
  report.constant = p.constant();
  report.transfer = verify_transfer(tree, pa);
  report.transfer.element = "p(a), p = " + p.to_string() + ", a = " + a.to_string();
  DefectOperator d = defect_operator(tree, pa);

  // Route two, column by column over the support and its neighbours.
  std::set<TreeVertex> examined = d.support;
  for (const auto& v : d.support)
    for (const auto& [e, w] : tree.neighbors(v)) examined.insert(w);

  const auto& group = tree.spec().target();
  const TreeVertex v0 = tree.base_vertex();
  report.routes_agree = true;
  report.support_certified = true;
  for (const auto& v : examined) {
    DeltaVector x{{v, GroupAlgebraElement::one(group)}};
    OmegaVector y{{tree.julg_valette(v), GroupAlgebraElement::one(group)}};
    DeltaVector px;
    OmegaVector py;
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
      if (k > 0) {
        x = apply_delta(tree, a, x);
        y = apply_omega(tree, a, y);
      }
      for (const auto& [t, c] : x) accumulate(px, t, c * p.coeffs[k]);
      for (const auto& [t, c] : y) accumulate(py, t, c * p.coeffs[k]);
    }
    for (const auto& [t, c] : pull_back(tree, py)) accumulate(px, t, -c);
    for (const auto& [t, c] : px)
      if (t == v) report.lazy_trace += c.trace();

    if (!d.support.count(v)) {
      report.support_certified = report.support_certified && px.empty();
      continue;
    }
    DeltaVector expected = d.op.column(v);
    if (v == v0) accumulate(expected, v0, GroupAlgebraElement::basis(group, 0, -report.constant));
    report.routes_agree = report.routes_agree && expected == px;
  }
  report.corrected_equal = report.lazy_trace + report.constant == tr_G(pa);
  report.transfer.ms = elapsed_ms(start);
  return report;
}

std::vector<GGroupRingElement> vertex_group_idempotents(
    const std::shared_ptr<const GraphOfGroups>& spec) {
  std::vector<GGroupRingElement> out;
  std::set<std::set<NormalForm>> seen;
  const int kinds = spec->kind() == SpecKind::Amalgam ? 2 : 1;
  for (int kind = 0; kind < kinds; ++kind) {
    GroupPtr group;
    if (spec->kind() == SpecKind::HNN)
      group = spec->hnn_spec().H;
    else
      group = kind == 0 ? spec->amalgam_spec().A : spec->amalgam_spec().B;
    for (const auto& k : all_subgroups(group)) {
      std::vector<NormalForm> members;
      for (Element x : k.members) {
        RawLetter l = spec->kind() == SpecKind::HNN ? RawLetter::h(x)
                      : kind == 0                   ? RawLetter::a(x)
                                                    : RawLetter::b(x);
        members.push_back(spec->letter(l));
      }
      if (seen.emplace(members.begin(), members.end()).second)
        out.push_back(GGroupRingElement::averaging(spec, members));
    }
  }
  return out;
}

}  // namespace treetrace

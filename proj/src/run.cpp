#include "treetrace/run.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "treetrace/errors.hpp"
#include "treetrace/index_verifier.hpp"
#include "treetrace/random.hpp"
#include "treetrace/sampling.hpp"
#include "treetrace/transfer.hpp"

namespace treetrace {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxCounterexamples = 10;

const char* status_name(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::Passed: return "passed";
    case SuiteStatus::Failed: return "failed";
    case SuiteStatus::Error: return "error";
    case SuiteStatus::BudgetExceeded: return "budget_exceeded";
    case SuiteStatus::Skipped: return "skipped";
  }
  return "?";
}

bool graph_suite(const std::string& name) {
  return name == "transfer" || name == "jv" || name == "poly" || name == "cyclicity";
}

// Records one check; failures keep their detail up to the cap.
class Tally {
 public:
  explicit Tally(SuiteResult& r) : r_(r) {}

  bool check(bool ok, std::size_t trial, const std::function<json()>& detail) {
    ++r_.checks;
    if (!ok) {
      ++r_.failures;
      if (r_.counterexamples.size() < kMaxCounterexamples) r_.counterexamples.push_back({trial, detail()});
    }
    return ok;
  }

 private:
  SuiteResult& r_;
};

class SuiteRunner {
 public:
  SuiteRunner(const Scenario& s, const RunParameters& p, SuiteResult& r, std::uint64_t suite)
      : s_(s), p_(p), r_(r), tally_(r), suite_(suite) {}

  SplitMix64 rng(std::size_t trial) const { return SplitMix64::stream(p_.seed, (suite_ << 32) | trial); }

  void transfer() {
    BassSerreTree tree(s_.spec, std::nullopt, p_.budget);
    std::size_t equal = 0;
    for (int i = 0; i < p_.trials; ++i) {
      auto g = rng(i);
      auto a = random_group_ring_element(s_.spec, g, p_.max_support, p_.max_word_length);
      TransferReport rep = verify_transfer(tree, a);
      if (tally_.check(rep.equal, i, [&] { return rep.to_json(false); })) ++equal;
    }
    // Averaging idempotents: lhs = rhs = 1/|K| and |K| divides |H|.
    const int order_h = s_.spec->target()->order();
    json idem = json::array();
    auto idempotents = vertex_group_idempotents(s_.spec);
    for (std::size_t k = 0; k < idempotents.size(); ++k) {
      const auto& e = idempotents[k];
      const long order_k = static_cast<long>(e.support_size());
      TransferReport rep = verify_transfer(tree, e);
      const GaussianRational expected = GaussianRational::fraction(1, order_k);
      const bool ok = rep.equal && rep.lhs == expected && rep.rhs == expected && order_h % order_k == 0;
      tally_.check(ok, k, [&] {
        json j = rep.to_json(false);
        j["expected"] = expected.to_string();
        return j;
      });
      idem.push_back(json{{"order", order_k}, {"trace", rep.rhs.to_string()}, {"passed", ok}});
    }
    r_.summary = {{"trials", p_.trials}, {"equal", equal}, {"idempotents", idem}};
  }

  void jv() {
    BassSerreTree tree(s_.spec, std::nullopt, p_.budget);
    const Ball& ball = tree.ball(p_.radius);
    const TreeVertex v0 = tree.base_vertex();
    tally_.check(tree.julg_valette(v0).is_star(), 0, [] { return json{{"property", "phi(v0) = *"}}; });
    std::set<TreeEdge> hit;
    std::size_t collisions = 0;
    for (const auto& v : ball.vertices) {
      if (v == v0) continue;
      JVImage x = tree.julg_valette(v);
      if (x.is_star() || !hit.insert(*x.edge).second) ++collisions;
    }
    tally_.check(collisions == 0, 0, [&] { return json{{"property", "injective off v0"}, {"collisions", collisions}}; });
    const std::set<TreeEdge> edges(ball.edges.begin(), ball.edges.end());
    tally_.check(hit == edges, 0, [&] {
      return json{{"property", "onto the edges of the ball"}, {"images", hit.size()}, {"edges", edges.size()}};
    });

    std::size_t contained = 0, max_defect = 0;
    for (int i = 0; i < p_.trials; ++i) {
      auto g = rng(i);
      NormalForm x = random_element(*s_.spec, g, p_.max_word_length);
      DefectSet d = tree.defect_set(x, p_.radius);
      max_defect = std::max(max_defect, d.vertices.size());
      if (tally_.check(d.contained, i, [&] {
            json vs = json::array();
            for (const auto& v : d.vertices) vs.push_back(tree.vertex_label(v));
            return json{{"property", "defect set inside the geodesic"}, {"g", s_.spec->to_string(x)}, {"defect", vs}};
          }))
        ++contained;
    }
    r_.summary = {{"radius", p_.radius}, {"vertices", ball.vertices.size()}, {"edges", ball.edges.size()},
                  {"trials", p_.trials}, {"contained", contained}, {"max_defect", max_defect}};
  }

  void poly() {
    BassSerreTree tree(s_.spec, std::nullopt, p_.budget);
    std::size_t ok = 0, max_support = 0;
    for (int i = 0; i < p_.poly_trials; ++i) {
      auto g = rng(i);
      auto a = random_group_ring_element(s_.spec, g, p_.poly_max_support, p_.poly_max_word_length);
      Polynomial p = random_polynomial(g, p_.max_degree);
      PolynomialReport rep = polynomial_calculus_defect(tree, a, p, p_.max_degree);
      max_support = std::max(max_support, rep.transfer.support);
      if (tally_.check(rep.passed(), i, [&] {
            json j = rep.to_json(false);
            j["a"] = a.to_string();
            return j;
          }))
        ++ok;
    }
    r_.summary = {{"trials", p_.poly_trials}, {"max_degree", p_.max_degree}, {"passed", ok}, {"max_support", max_support}};
  }

  void cyclicity() {
    BassSerreTree tree(s_.spec, std::nullopt, p_.budget);
    const GroupPtr& h = s_.spec->target();
    const auto& near = tree.ball(std::min(p_.radius, 2)).vertices;
    const std::set<TreeVertex> ball1 = vertex_set(tree, std::min(p_.radius, 1));
    const std::set<TreeVertex> ball3 = vertex_set(tree, std::min(p_.radius, 3));
    const int word = std::min(p_.max_word_length, 3);
    std::size_t cyclic = 0, homomorphic = 0, invariant = 0;

    for (int i = 0; i < p_.cyclicity_trials; ++i) {
      auto g = rng(i);
      auto a = random_group_ring_element(s_.spec, g, 4, word);
      auto b = random_group_ring_element(s_.spec, g, 4, word);

      // x = a_Delta on a few columns, y = b_Delta compressed so both products exist.
      std::set<TreeVertex> cols;
      while (cols.size() < std::min<std::size_t>(4, near.size())) cols.insert(near[g.below(near.size())]);
      auto x = lift_to_delta(tree, a, cols);
      auto y = lift_to_delta(tree, b, x.rows()).restrict(cols, x.rows());
      if (tally_.check(trace_cyclicity(x, y), i, [&] {
            return json{{"property", "tr_H(xy) = tr_H(yx)"}, {"a", a.to_string()}, {"b", b.to_string()}};
          }))
        ++cyclic;

      auto lb = lift_to_delta(tree, b, ball1);
      auto la = lift_to_delta(tree, a, lb.rows());
      const bool mult = product(la, lb).same_entries(lift_to_delta(tree, a * b, ball1));
      const bool star = lift_to_delta(tree, a, ball3)
                            .adjoint()
                            .restrict(ball3, ball3)
                            .same_entries(lift_to_delta(tree, a.star(), ball3).restrict(ball3, ball3));
      if (tally_.check(mult && star, i, [&] {
            return json{{"property", "Delta lift is a *-homomorphism"}, {"a", a.to_string()}, {"b", b.to_string()},
                        {"multiplicative", mult}, {"adjoint", star}};
          }))
        ++homomorphic;

      DeltaVector u, v;
      for (int k = 0; k < 3; ++k) {
        u[near[g.below(near.size())]] += GroupAlgebraElement::basis(
            h, static_cast<Element>(g.below(h->order())), random_nonzero_scalar(g));
        v[near[g.below(near.size())]] += GroupAlgebraElement::basis(
            h, static_cast<Element>(g.below(h->order())), random_nonzero_scalar(g));
      }
      std::erase_if(u, [](const auto& kv) { return kv.second.is_zero(); });
      std::erase_if(v, [](const auto& kv) { return kv.second.is_zero(); });
      NormalForm t = random_element(*s_.spec, g, p_.max_word_length);
      if (tally_.check(inner_product_invariance(tree, u, v, t), i, [&] {
            return json{{"property", "<gu, gv> = <u, v>"}, {"g", s_.spec->to_string(t)}};
          }))
        ++invariant;
    }
    r_.summary = {{"trials", p_.cyclicity_trials}, {"cyclic", cyclic}, {"star_homomorphism", homomorphic},
                  {"inner_product_invariant", invariant}};
  }

  void index() {
    const GroupPtr& h = s_.H;
    std::size_t equal = 0, kasparov = 0, stable = 0;
    for (int i = 0; i < p_.index_pairs; ++i) {
      const std::uint64_t seed = rng(i).next();
      ProjectionPair pair = generate_projection_pair(seed, h, p_.index_m, p_.index_n);
      IndexReport rep = h_index(pair.p, pair.q);
      const bool ok = rep.equal && rep.trace_t0 == rep.trace_t1;
      auto detail = [&](const char* property) {
        json j = rep.to_json();
        j["property"] = property;
        j["pair_seed"] = std::to_string(seed);
        return j;
      };
      if (tally_.check(ok, i, [&] { return detail("trace = index"); })) ++equal;
      KasparovReport k = kasparov_compactness_check(pair.p, pair.q);
      if (tally_.check(k.passed(), i, [&] {
            json j = detail("Kasparov compactness");
            j["kasparov"] = k.to_json();
            return j;
          }))
        ++kasparov;
      IndexReport doubled = h_index(pair.p.pad(2 * p_.index_m), pair.q.pad(2 * p_.index_m));
      if (tally_.check(doubled == rep, i, [&] {
            json j = detail("truncation doubling");
            j["doubled"] = doubled.to_json();
            return j;
          }))
        ++stable;
    }
    r_.summary = {{"pairs", p_.index_pairs}, {"m", p_.index_m}, {"n", p_.index_n}, {"group_order", h->order()},
                  {"equal", equal}, {"kasparov", kasparov}, {"doubling_stable", stable}};
  }

  void norms() {
    const GroupPtr& h = s_.H;
    std::size_t ok = 0;
    double worst = 0;
    for (int i = 0; i < p_.norm_trials; ++i) {
      auto g = rng(i);
      auto a = random_module_matrix(g, h, p_.norm_m, p_.norm_n);
      auto b = random_module_matrix(g, h, p_.norm_m, p_.norm_n);
      auto c = random_module_matrix(g, h, p_.norm_m, p_.norm_n);
      NormReport rep = norm_inequalities_check(a, b, c);
      if (rep.trace_bound > 0) worst = std::max(worst, rep.trace_sum / rep.trace_bound);
      if (rep.product_bound > 0) worst = std::max(worst, rep.product_trace / rep.product_bound);
      if (tally_.check(rep.passed(), i, [&] { return rep.to_json(); })) ++ok;
    }
    // The ratio is rounded so the report stays byte-stable across libm builds.
    std::ostringstream ratio;
    ratio << std::fixed << std::setprecision(6) << worst;
    r_.summary = {{"trials", p_.norm_trials}, {"passed", ok}, {"relative_tolerance", "1e-9"},
                  {"worst_ratio", ratio.str()}};
  }

 private:
  static std::set<TreeVertex> vertex_set(const BassSerreTree& tree, int radius) {
    const auto& vs = tree.ball(radius).vertices;
    return {vs.begin(), vs.end()};
  }

  const Scenario& s_;
  const RunParameters& p_;
  SuiteResult& r_;
  Tally tally_;
  std::uint64_t suite_;
};

}  // namespace

json to_json(const RunParameters& p) {
  json j{{"seed", p.seed},
         {"radius", p.radius},
         {"trials", p.trials},
         {"max_support", p.max_support},
         {"max_word_length", p.max_word_length},
         {"max_degree", p.max_degree},
         {"poly_trials", p.poly_trials},
         {"poly_max_support", p.poly_max_support},
         {"poly_max_word_length", p.poly_max_word_length},
         {"cyclicity_trials", p.cyclicity_trials},
         {"index_pairs", p.index_pairs},
         {"index_m", p.index_m},
         {"index_n", p.index_n},
         {"norm_trials", p.norm_trials},
         {"norm_m", p.norm_m},
         {"norm_n", p.norm_n},
         {"budget", p.budget}};
  return j;
}

json SuiteResult::to_json(bool timing) const {
  json j{{"status", status_name(status)}, {"checks", checks}, {"failures", failures}, {"summary", summary}};
  if (!error.empty()) j["error"] = error;
  if (!counterexamples.empty()) {
    json cs = json::array();
    for (const auto& c : counterexamples) cs.push_back(json{{"trial", c.trial}, {"detail", c.detail}});
    j["counterexamples"] = cs;
  }
  if (timing) j["ms"] = ms;
  return j;
}

bool RunReport::passed() const { return exit_code() == 0; }

int RunReport::exit_code() const {
  bool input = false, failed = false, budget = false;
  for (const auto& s : suites) {
    input = input || s.input_error;
    failed = failed || s.status == SuiteStatus::Failed || (s.status == SuiteStatus::Error && !s.input_error);
    budget = budget || s.status == SuiteStatus::BudgetExceeded;
  }
  return input ? 2 : failed ? 1 : budget ? 3 : 0;
}

json RunReport::to_json(bool timing) const {
  json out{{"scenario", {{"name", scenario}, {"kind", kind}, {"prng", SplitMix64::kName}, {"parameters", treetrace::to_json(parameters)}}},
           {"suites", json::object()},
           {"passed", passed()},
           {"exit_code", exit_code()}};
  for (const auto& s : suites) out["suites"][s.name] = s.to_json(timing);
  return out;
}

std::string RunReport::to_text(bool timing) const {
  std::ostringstream out;
  out << "scenario " << scenario << " (" << kind << "), seed " << parameters.seed << '\n';
  for (const auto& s : suites) {
    out << "  " << std::left << std::setw(10) << s.name << ' ' << std::setw(15) << status_name(s.status) << ' '
        << s.checks - s.failures << '/' << s.checks << " checks";
    if (timing) out << ", " << std::fixed << std::setprecision(1) << s.ms << " ms";
    out << '\n';
    if (!s.error.empty()) out << "    error: " << s.error << '\n';
    for (const auto& c : s.counterexamples) out << "    counterexample at trial " << c.trial << ": " << c.detail.dump() << '\n';
  }
  out << (passed() ? "PASSED" : "FAILED") << " (exit " << exit_code() << ")\n";
  return out.str();
}

std::vector<std::string> default_suites(const Scenario& scenario) {
  if (scenario.has_tree()) return {"cyclicity", "jv", "poly", "transfer"};
  return {"index", "norms"};
}

SuiteResult run_suite(const Scenario& scenario, const std::string& suite, const RunParameters& params) {
  SuiteResult r;
  r.name = suite;
  const auto& names = known_suites();
  auto pos = std::find(names.begin(), names.end(), suite);
  if (pos == names.end()) {
    r.status = SuiteStatus::Error;
    r.input_error = true;
    r.error = "unknown suite '" + suite + "'";
    return r;
  }
  if (graph_suite(suite) && !scenario.has_tree()) {
    r.status = SuiteStatus::Skipped;
    r.error = "needs an amalgam or hnn scenario";
    return r;
  }
  const auto start = std::chrono::steady_clock::now();
  SuiteRunner runner(scenario, params, r, static_cast<std::uint64_t>(pos - names.begin()));
  try {
    if (suite == "transfer") runner.transfer();
    else if (suite == "jv") runner.jv();
    else if (suite == "poly") runner.poly();
    else if (suite == "cyclicity") runner.cyclicity();
    else if (suite == "index") runner.index();
    else runner.norms();
    r.status = r.failures == 0 ? SuiteStatus::Passed : SuiteStatus::Failed;
  } catch (const BudgetExceeded& e) {
    r.status = SuiteStatus::BudgetExceeded;
    r.error = e.what();
  } catch (const ValidationError& e) {
    r.status = SuiteStatus::Error;
    r.input_error = true;
    r.error = e.what();
  } catch (const std::exception& e) {
    r.status = SuiteStatus::Error;
    r.error = e.what();
  }
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

RunReport run(const Scenario& scenario, const RunOptions& options) {
  RunReport report;
  report.scenario = scenario.name;
  report.kind = scenario.kind;
  report.parameters = scenario.run;
  RunParameters& p = report.parameters;
  if (options.seed) p.seed = *options.seed;
  if (options.radius) p.radius = *options.radius;
  if (options.trials) p.trials = *options.trials;
  if (options.suites) p.suites = options.suites;

  std::vector<std::string> suites = p.suites ? *p.suites : default_suites(scenario);
  std::sort(suites.begin(), suites.end());
  suites.erase(std::unique(suites.begin(), suites.end()), suites.end());
  for (const auto& name : suites) report.suites.push_back(run_suite(scenario, name, p));
  return report;
}

}  // namespace treetrace

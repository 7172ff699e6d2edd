#include "treetrace/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "treetrace/errors.hpp"
#include "treetrace/random.hpp"

namespace treetrace {

using nlohmann::json;

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names{"cyclicity", "index", "jv", "norms", "poly", "transfer"};
  return names;
}

namespace {

// Line of every value in an already validated JSON text, keyed by JSON
// pointer. nlohmann does not keep positions, so this rescans the text.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) { value(""); }

  std::size_t line(const std::string& pointer) const {
    auto it = lines_.find(pointer);
    return it == lines_.end() ? 0 : it->second;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~')
        out += "~0";
      else if (c == '/')
        out += "~1";
      else
        out += c;
    }
    return out;
  }

  void value(const std::string& pointer) {
    skip_ws();
    lines_.emplace(pointer, line_);
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      ++pos_;
      skip_ws();
      for (std::size_t index = 0; pos_ < text_.size() && text_[pos_] != close; ++index) {
        if (c == '{') {
          std::string key = string();
          skip_ws();
          ++pos_;  // ':'
          value(pointer + "/" + escape(key));
        } else {
          value(pointer + "/" + std::to_string(index));
        }
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string();
    } else {
      while (pos_ < text_.size() && !std::strchr(",]} \t\r\n", text_[pos_])) ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

// Best JSON pointer for a spec-level validation failure.
std::string blame(const json& doc, const std::string& message) {
  auto has = [&](const char* key) { return doc.contains(key); };
  auto mentions = [&](const char* text) { return message.find(text) != std::string::npos; };
  if (mentions("vertex group A")) return has("alpha_A") ? "/alpha_A" : "/A";
  if (mentions("vertex group B") || mentions("disagree")) return has("alpha_B") ? "/alpha_B" : "/B";
  if (mentions("into B")) return has("embed_B") ? "/embed_B" : "/U";
  if (mentions("into A")) return "/U";
  if (mentions("phi")) return has("phi") ? "/phi" : "/conjugator";
  if (mentions("conjugator")) return "/conjugator";
  if (mentions("U ")) return "/U";
  return "";
}

struct ParsedGroup {
  GroupPtr group;
  std::vector<Element> from_index;  // user index -> internal element
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lines_(text) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw ParseError(lines_.line(pointer), (pointer.empty() ? "/" : pointer) + ": " + message);
  }
  [[noreturn]] void invalid(const std::string& pointer, const std::string& message) const {
    throw ValidationError("line " + std::to_string(lines_.line(pointer)) + " (" +
                          (pointer.empty() ? "/" : pointer) + "): " + message);
  }

  void only_fields(const json& obj, const std::string& pointer, std::initializer_list<const char*> allowed) const {
    if (!obj.is_object()) fail(pointer, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) fail(pointer + "/" + key, "unknown field '" + key + "'");
    }
  }

  const json& require(const json& obj, const std::string& pointer, const char* key) const {
    if (!obj.contains(key)) fail(pointer, std::string("missing field '") + key + "'");
    return obj.at(key);
  }

  long integer(const json& j, const std::string& pointer, long lo, long hi) const {
    if (!j.is_number_integer()) fail(pointer, "expected an integer");
    const long v = j.get<long>();
    if (v < lo || v > hi)
      fail(pointer, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  std::string string(const json& j, const std::string& pointer) const {
    if (!j.is_string()) fail(pointer, "expected a string");
    return j.get<std::string>();
  }

  std::vector<int> int_array(const json& j, const std::string& pointer) const {
    if (!j.is_array()) fail(pointer, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(static_cast<int>(integer(j[i], pointer + "/" + std::to_string(i), -1000000, 1000000)));
    return out;
  }

  ParsedGroup group(const json& j, const std::string& pointer) const {
    only_fields(j, pointer, {"table", "labels", "permutations"});
    const bool table = j.contains("table"), perms = j.contains("permutations");
    if (table == perms) fail(pointer, "a group needs exactly one of 'table' or 'permutations'");
    ParsedGroup out;
    try {
      if (table) {
        const json& t = j.at("table");
        if (!t.is_array() || t.empty()) fail(pointer + "/table", "expected a non-empty array of rows");
        std::vector<std::vector<int>> rows;
        for (std::size_t i = 0; i < t.size(); ++i) rows.push_back(int_array(t[i], pointer + "/table/" + std::to_string(i)));
        std::vector<std::string> labels;
        if (j.contains("labels")) {
          const json& l = j.at("labels");
          if (!l.is_array()) fail(pointer + "/labels", "expected an array of strings");
          for (std::size_t i = 0; i < l.size(); ++i) labels.push_back(string(l[i], pointer + "/labels/" + std::to_string(i)));
          if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size())
            invalid(pointer + "/labels", "labels are not distinct");
        }
        out.group = make_group(FiniteGroup::from_table(rows, labels));
        // from_table swaps the identity into slot 0.
        const int n = static_cast<int>(rows.size());
        int e = 0;
        for (int c = 0; c < n; ++c) {
          bool ok = true;
          for (int a = 0; a < n && ok; ++a) ok = rows[c][a] == a && rows[a][c] == a;
          if (ok) {
            e = c;
            break;
          }
        }
        out.from_index.resize(n);
        for (int x = 0; x < n; ++x) out.from_index[x] = x == e ? 0 : x == 0 ? e : x;
      } else {
        if (j.contains("labels")) fail(pointer + "/labels", "labels are only allowed with 'table'");
        const json& p = j.at("permutations");
        if (!p.is_array()) fail(pointer + "/permutations", "expected an array of permutations");
        std::vector<Permutation> gens;
        for (std::size_t i = 0; i < p.size(); ++i)
          gens.push_back(int_array(p[i], pointer + "/permutations/" + std::to_string(i)));
        out.group = make_group(FiniteGroup::from_permutations(gens));
        out.from_index.resize(out.group->order());
        for (int x = 0; x < out.group->order(); ++x) out.from_index[x] = x;
      }
    } catch (const GroupAxiomError& e) {
      invalid(pointer, e.what());
    }
    return out;
  }

  Element element(const ParsedGroup& g, const json& j, const std::string& pointer) const {
    if (j.is_number_integer()) {
      const long i = j.get<long>();
      if (i < 0 || i >= static_cast<long>(g.from_index.size()))
        invalid(pointer, "element index " + std::to_string(i) + " out of range");
      return g.from_index[i];
    }
    if (j.is_array()) {
      if (!g.group->is_permutation_group()) fail(pointer, "permutation given for a group defined by a table");
      auto found = g.group->find_permutation(int_array(j, pointer));
      if (!found) invalid(pointer, "permutation " + j.dump() + " is not in the group");
      return *found;
    }
    if (j.is_string()) {
      auto found = g.group->find_label(j.get<std::string>());
      if (!found) invalid(pointer, "no element labelled '" + j.get<std::string>() + "'");
      return *found;
    }
    fail(pointer, "expected an element (index, permutation or label)");
  }

  std::vector<Element> elements(const ParsedGroup& g, const json& j, const std::string& pointer) const {
    if (!j.is_array()) fail(pointer, "expected an array of elements");
    std::vector<Element> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(element(g, j[i], pointer + "/" + std::to_string(i)));
    return out;
  }

  Subgroup subgroup(const ParsedGroup& g, const json& j, const std::string& pointer) const {
    try {
      return make_subgroup(g.group, elements(g, j, pointer));
    } catch (const ValidationError& e) {
      invalid(pointer, e.what());
    }
  }

  // [[source, image], ...] on generators of the source.
  GroupHom hom(const ParsedGroup& source, const ParsedGroup& target, const json& j,
               const std::string& pointer) const {
    if (!j.is_array()) fail(pointer, "expected an array of [source, image] pairs");
    std::vector<std::pair<Element, Element>> images;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string at = pointer + "/" + std::to_string(i);
      if (!j[i].is_array() || j[i].size() != 2) fail(at, "expected a [source, image] pair");
      images.emplace_back(element(source, j[i][0], at + "/0"), element(target, j[i][1], at + "/1"));
    }
    try {
      return hom_from_generators(source.group, target.group, images);
    } catch (const Error& e) {
      invalid(pointer, e.what());
    }
  }

  // [[u, image], ...] with u named in the ambient group of u_sub; returns a
  // hom on subgroup_as_group(u_sub), whose element i is u_sub.members[i].
  GroupHom hom_on_subgroup(const ParsedGroup& ambient, const Subgroup& u_sub, const ParsedGroup& target,
                           const json& j, const std::string& pointer) const {
    if (!j.is_array()) fail(pointer, "expected an array of [u, image] pairs");
    std::vector<std::pair<Element, Element>> images;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string at = pointer + "/" + std::to_string(i);
      if (!j[i].is_array() || j[i].size() != 2) fail(at, "expected a [u, image] pair");
      const Element x = element(ambient, j[i][0], at + "/0");
      if (!u_sub.contains(x)) invalid(at + "/0", "map is given on an element outside U");
      const auto pos = std::lower_bound(u_sub.members.begin(), u_sub.members.end(), x) - u_sub.members.begin();
      images.emplace_back(static_cast<Element>(pos), element(target, j[i][1], at + "/1"));
    }
    try {
      return hom_from_generators(subgroup_as_group(u_sub), target.group, images);
    } catch (const Error& e) {
      invalid(pointer, e.what());
    }
  }

  GroupHom identity_or(const ParsedGroup& source, const ParsedGroup& target, const json& doc,
                       const char* key, const std::string& what) const {
    if (doc.contains(key)) return hom(source, target, doc.at(key), std::string("/") + key);
    if (!(*source.group == *target.group))
      fail("", std::string("missing field '") + key + "' (" + what + " differs from H)");
    return identity_hom(target.group);
  }

  RunParameters run(const json& j) const {
    const std::string p = "/run";
    only_fields(j, p,
                {"seed", "radius", "trials", "max_support", "max_word_length", "max_degree", "poly_trials",
                 "poly_max_support", "poly_max_word_length", "cyclicity_trials", "index_pairs", "index_m",
                 "index_n", "norm_trials", "norm_m", "norm_n", "budget", "suites"});
    RunParameters r;
    auto get = [&](const char* key, int& field, long lo, long hi) {
      if (j.contains(key)) field = static_cast<int>(integer(j.at(key), p + "/" + key, lo, hi));
    };
    if (j.contains("seed")) {
      const json& s = j.at("seed");
      if (!s.is_number_unsigned()) fail(p + "/seed", "expected a non-negative integer");
      r.seed = s.get<std::uint64_t>();
    }
    get("radius", r.radius, 0, 12);
    get("trials", r.trials, 0, 1000000);
    get("max_support", r.max_support, 1, 64);
    get("max_word_length", r.max_word_length, 1, 16);
    get("max_degree", r.max_degree, 1, 8);
    get("poly_trials", r.poly_trials, 0, 100000);
    get("poly_max_support", r.poly_max_support, 1, 64);
    get("poly_max_word_length", r.poly_max_word_length, 1, 16);
    get("cyclicity_trials", r.cyclicity_trials, 0, 100000);
    get("index_pairs", r.index_pairs, 0, 100000);
    get("index_m", r.index_m, 1, 64);
    get("index_n", r.index_n, 1, 8);
    get("norm_trials", r.norm_trials, 0, 100000);
    get("norm_m", r.norm_m, 1, 16);
    get("norm_n", r.norm_n, 1, 4);
    if (j.contains("budget")) r.budget = static_cast<std::size_t>(integer(j.at("budget"), p + "/budget", 1, 100000000));
    if (j.contains("suites")) {
      const json& s = j.at("suites");
      if (!s.is_array()) fail(p + "/suites", "expected an array of suite names");
      std::vector<std::string> names;
      for (std::size_t i = 0; i < s.size(); ++i) {
        std::string name = string(s[i], p + "/suites/" + std::to_string(i));
        if (std::find(known_suites().begin(), known_suites().end(), name) == known_suites().end())
          fail(p + "/suites/" + std::to_string(i), "unknown suite '" + name + "'");
        names.push_back(std::move(name));
      }
      r.suites = std::move(names);
    }
    return r;
  }

  std::map<std::string, RawLetter> letters(const json& j, const Scenario& s,
                                           const std::map<std::string, const ParsedGroup*>& groups) const {
    const std::string p = "/letters";
    if (!j.is_object()) fail(p, "expected an object of letter definitions");
    std::map<std::string, RawLetter> out;
    for (const auto& [name, def] : j.items()) {
      const std::string at = p + "/" + name;
      if (name.empty() || name == "1" || std::any_of(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); }) ||
          name.find('^') != std::string::npos)
        fail(at, "bad letter label '" + name + "'");
      if (def.is_string() && def.get<std::string>() == "t") {
        if (s.kind != "hnn") invalid(at, "the stable letter exists only in hnn scenarios");
        out.emplace(name, RawLetter::t(1));
        continue;
      }
      if (!def.is_object() || def.size() != 1) fail(at, "expected {\"A\"|\"B\"|\"H\": element} or \"t\"");
      const std::string side = def.begin().key();
      auto g = groups.find(side);
      if (g == groups.end()) fail(at, "side '" + side + "' does not exist in this scenario");
      const Element e = element(*g->second, def.begin().value(), at + "/" + side);
      out.emplace(name, side == "A" ? RawLetter::a(e) : side == "B" ? RawLetter::b(e) : RawLetter::h(e));
    }
    return out;
  }

  const LineIndex lines_;
};

}  // namespace

Scenario parse_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  Parser p(text);
  if (!doc.is_object()) p.fail("", "expected a JSON object");

  Scenario s;
  s.name = p.string(p.require(doc, "", "name"), "/name");
  s.kind = p.string(p.require(doc, "", "kind"), "/kind");
  if (doc.contains("schema_version") && p.integer(doc.at("schema_version"), "/schema_version", 0, 1000) != 1)
    p.fail("/schema_version", "unsupported schema version");
  if (doc.contains("prng") && p.string(doc.at("prng"), "/prng") != SplitMix64::kName)
    p.fail("/prng", std::string("only ") + SplitMix64::kName + " is supported");
  if (doc.contains("description")) p.string(doc.at("description"), "/description");
  const std::initializer_list<const char*> common{"schema_version", "name", "kind", "prng", "description", "letters", "run"};
  auto fields = [&](std::initializer_list<const char*> extra) {
    std::vector<const char*> all(common);
    all.insert(all.end(), extra);
    for (const auto& [key, value] : doc.items())
      if (std::find_if(all.begin(), all.end(), [&](const char* a) { return key == a; }) == all.end())
        p.fail("/" + key, "unknown field '" + key + "'");
  };

  std::map<std::string, const ParsedGroup*> sides;
  ParsedGroup a, b, h;
  if (s.kind == "amalgam") {
    fields({"A", "B", "U", "H", "embed_B", "alpha_A", "alpha_B"});
    a = p.group(p.require(doc, "", "A"), "/A");
    const bool separate_b = doc.contains("B");
    b = separate_b ? p.group(doc.at("B"), "/B") : a;
    h = doc.contains("H") ? p.group(doc.at("H"), "/H") : a;
    Subgroup u = p.subgroup(a, p.require(doc, "", "U"), "/U");

    AmalgamSpec spec;
    spec.A = a.group;
    spec.B = b.group;
    spec.H = h.group;
    spec.U = subgroup_as_group(u);
    spec.embed_A = make_hom(spec.U, a.group, u.members);
    if (doc.contains("embed_B")) {
      GroupHom on_u = p.hom_on_subgroup(a, u, b, doc.at("embed_B"), "/embed_B");
      spec.embed_B = make_hom(spec.U, b.group, on_u.images);
    } else {
      if (separate_b && !(*a.group == *b.group)) p.fail("", "missing field 'embed_B' (B differs from A)");
      spec.embed_B = make_hom(spec.U, b.group, u.members);
    }
    spec.alpha_A = p.identity_or(a, h, doc, "alpha_A", "A");
    spec.alpha_B = p.identity_or(b, h, doc, "alpha_B", "B");
    try {
      s.spec = std::make_shared<const GraphOfGroups>(GraphOfGroups::amalgam(std::move(spec)));
    } catch (const ValidationError& e) {
      p.invalid(blame(doc, e.what()), e.what());
    }
    s.H = h.group;
    sides = {{"A", &a}, {"B", &b}};
  } else if (s.kind == "hnn") {
    fields({"H", "U", "conjugator", "phi"});
    h = p.group(p.require(doc, "", "H"), "/H");
    HNNSpec spec;
    spec.H = h.group;
    spec.U = p.subgroup(h, p.require(doc, "", "U"), "/U");
    spec.conjugator = p.element(h, p.require(doc, "", "conjugator"), "/conjugator");
    if (doc.contains("phi")) {
      GroupHom phi = p.hom_on_subgroup(h, spec.U, h, doc.at("phi"), "/phi");
      spec.phi.assign(h.group->order(), -1);
      for (int i = 0; i < spec.U.order(); ++i) spec.phi[spec.U.members[i]] = phi.images[i];
    }
    try {
      s.spec = std::make_shared<const GraphOfGroups>(GraphOfGroups::hnn(std::move(spec)));
    } catch (const ValidationError& e) {
      p.invalid(blame(doc, e.what()), e.what());
    }
    s.H = h.group;
    sides = {{"H", &h}};
  } else if (s.kind == "synthetic_index") {
    fields({"H"});
    h = p.group(p.require(doc, "", "H"), "/H");
    s.H = h.group;
    sides = {{"H", &h}};
  } else {
    p.fail("/kind", "kind must be 'amalgam', 'hnn' or 'synthetic_index'");
  }

  if (doc.contains("letters")) s.letters = p.letters(doc.at("letters"), s, sides);
  if (doc.contains("run")) s.run = p.run(doc.at("run"));
  return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::vector<RawLetter> Scenario::parse_word(std::string_view word) const {
  std::vector<RawLetter> out;
  std::istringstream in{std::string(word)};
  std::string token;
  while (in >> token) {
    bool inverse = false;
    if (token.size() > 3 && token.ends_with("^-1")) {
      inverse = true;
      token.resize(token.size() - 3);
    }
    if (token == "1") continue;
    RawLetter l;
    if (auto it = letters.find(token); it != letters.end()) {
      l = it->second;
    } else if (token == "t" || token == "T") {
      if (!spec || spec->kind() != SpecKind::HNN) throw ValidationError("stable letter in a non-hnn scenario");
      l = RawLetter::t(token == "t" ? 1 : -1);
    } else {
      const char side = token[0];
      const std::string digits = token.substr(1);
      GroupPtr g;
      if (spec && spec->kind() == SpecKind::Amalgam && side == 'A') g = spec->amalgam_spec().A;
      if (spec && spec->kind() == SpecKind::Amalgam && side == 'B') g = spec->amalgam_spec().B;
      if (spec && spec->kind() == SpecKind::HNN && side == 'H') g = spec->hnn_spec().H;
      if (!g || digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw ValidationError("unknown letter '" + token + "'");
      const int e = std::stoi(digits);
      if (e >= g->order()) throw ValidationError("letter '" + token + "' out of range");
      l = side == 'A' ? RawLetter::a(e) : side == 'B' ? RawLetter::b(e) : RawLetter::h(e);
    }
    if (inverse) {
      if (l.kind == RawLetter::Kind::Stable) {
        l.exponent = -l.exponent;
      } else {
        const auto& g = l.kind == RawLetter::Kind::A   ? spec->amalgam_spec().A
                        : l.kind == RawLetter::Kind::B ? spec->amalgam_spec().B
                                                       : spec->hnn_spec().H;
        l.element = g->inv(l.element);
      }
    }
    out.push_back(l);
  }
  return out;
}

}  // namespace treetrace

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "treetrace/finite_group.hpp"

namespace treetrace {

enum class SpecKind : std::uint8_t { Amalgam, HNN };

/// One letter of a normal form.
///
/// Amalgam: tag is the side (0 = A, 1 = B) and rep a non-identity right coset
/// representative of U in that side.
/// HNN: tag is the exponent (+1 or -1) of the stable letter t, and rep the
/// coset representative of H that follows it (right cosets of U after t,
/// of phi(U) after t^-1; rep may be the identity).
struct FormLetter {
  int tag = 0;
  Element rep = 0;

  auto operator<=>(const FormLetter&) const = default;
};

/// Canonical word for an element of an amalgam or HNN extension.
///
/// Amalgam: x = u * r_1 * ... * r_k with u in U and alternating sides.
/// HNN:     x = h * t^e_1 r_1 * ... * t^e_k r_k, Britton reduced.
struct NormalForm {
  std::uint64_t spec_id = 0;
  SpecKind kind = SpecKind::Amalgam;
  Element head = 0;
  std::vector<FormLetter> letters;

  /// Number of transversal letters (amalgam) or stable letters (hnn).
  std::size_t length() const noexcept { return letters.size(); }
  bool is_identity() const noexcept { return head == 0 && letters.empty(); }

  bool operator==(const NormalForm&) const = default;
  /// Shortlex: length first, then letters, then head.
  std::strong_ordering operator<=>(const NormalForm& other) const;
};

struct NormalFormHash {
  std::size_t operator()(const NormalForm& x) const noexcept;
};

/// Input letter of a raw word.
struct RawLetter {
  enum class Kind : std::uint8_t { A, B, H, Stable };
  Kind kind = Kind::H;
  Element element = 0;  // for A, B, H
  int exponent = 1;     // for Stable

  static RawLetter a(Element e) { return {Kind::A, e, 1}; }
  static RawLetter b(Element e) { return {Kind::B, e, 1}; }
  static RawLetter h(Element e) { return {Kind::H, e, 1}; }
  static RawLetter t(int exponent = 1) { return {Kind::Stable, 0, exponent}; }

  bool operator==(const RawLetter&) const = default;
};

/// G = A *_U B with a homomorphism alpha: G -> H given on the factors.
/// U is an abstract group embedded into both factors.
struct AmalgamSpec {
  GroupPtr A, B, U, H;
  GroupHom embed_A, embed_B;  // U -> A, U -> B
  GroupHom alpha_A, alpha_B;  // A -> H, B -> H
};

/// G = HNN(H, U, phi) with t u t^-1 = phi(u) = g u g^-1 and alpha(t) = g.
struct HNNSpec {
  GroupPtr H;
  Subgroup U;
  Element conjugator = 0;
  std::vector<Element> phi;  // indexed by H element; -1 outside U
};

/// Default cap on enumerate_ball.
inline constexpr std::size_t kDefaultBallBudget = 200000;

/// A one-edge graph of finite groups (segment or loop) together with the
/// subduing homomorphism to H. Immutable; copies share the same spec id.
class GraphOfGroups {
 public:
  /// Validates injectivity of the embeddings, compatibility of the alphas on
  /// U, and injectivity of alpha on both factors. Throws ValidationError.
  static GraphOfGroups amalgam(AmalgamSpec spec);
  /// Validates that phi is conjugation by the conjugator on U.
  static GraphOfGroups hnn(HNNSpec spec);
  /// H *_U H with both embeddings the inclusion and alpha the fold map.
  static GraphOfGroups double_of(const GroupPtr& H, const Subgroup& U);
  /// HNN(H, U, conjugation by g).
  static GraphOfGroups conjugation_hnn(const GroupPtr& H, const Subgroup& U, Element g);

  SpecKind kind() const noexcept { return kind_; }
  std::uint64_t id() const noexcept { return id_; }
  const AmalgamSpec& amalgam_spec() const { return amalgam_; }
  const HNNSpec& hnn_spec() const { return hnn_; }
  /// Target group of alpha.
  const GroupPtr& target() const noexcept { return kind_ == SpecKind::Amalgam ? amalgam_.H : hnn_.H; }

  NormalForm identity() const;
  NormalForm letter(RawLetter l) const { return normalize(std::span<const RawLetter>(&l, 1)); }

  NormalForm normalize(std::span<const RawLetter> word) const;
  NormalForm multiply(const NormalForm& x, const NormalForm& y) const;
  NormalForm invert(const NormalForm& x) const;
  Element alpha(const NormalForm& x) const;

  /// Expands a normal form back into raw letters; normalize() of the result
  /// returns the form unchanged.
  std::vector<RawLetter> raw_letters(const NormalForm& x) const;

  /// All elements of normal-form length <= max_length in shortlex order.
  std::vector<NormalForm> enumerate_ball(int max_length,
                                         std::size_t budget = kDefaultBallBudget) const;
  /// Closed-form count of elements of length <= max_length, saturating at
  /// SIZE_MAX.
  std::size_t ball_size(int max_length) const;

  /// Throws SpecMismatch unless x is a well-formed normal form of this spec.
  void check_form(const NormalForm& x) const;

  std::string to_string(const NormalForm& x) const;

  // Coset data used by the Bass-Serre tree.
  const Transversal& right_transversal(int tag) const;
  const Transversal& left_transversal(int tag) const;
  /// Elements of the vertex group of the given kind (0 = A / H, 1 = B) as
  /// normal forms.
  const std::vector<NormalForm>& vertex_group(int kind) const { return vertex_groups_[kind]; }
  /// Elements of the edge group (U) as normal forms.
  const std::vector<NormalForm>& edge_group() const { return edge_group_; }

 private:
  GraphOfGroups() = default;
  void finish();

  void push_raw(NormalForm& x, const RawLetter& l) const;
  void absorb(NormalForm& x, Element carried, std::size_t upto) const;

  SpecKind kind_ = SpecKind::Amalgam;
  std::uint64_t id_ = 0;
  AmalgamSpec amalgam_;
  HNNSpec hnn_;

  // Amalgam: index 0 = A, 1 = B. HNN: 0 = U (after t), 1 = phi(U) (after t^-1).
  std::vector<Transversal> right_;
  std::vector<Transversal> left_;
  std::vector<std::vector<Element>> unembed_;  // amalgam: factor element -> U element or -1
  std::vector<Element> phi_inv_;               // hnn
  std::vector<std::vector<NormalForm>> vertex_groups_;
  std::vector<NormalForm> edge_group_;
};

}  // namespace treetrace

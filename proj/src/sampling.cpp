#include "treetrace/sampling.hpp"

namespace treetrace {

std::vector<RawLetter> random_raw_word(const GraphOfGroups& spec, SplitMix64& rng, int length) {
  std::vector<RawLetter> word;
  word.reserve(length);
  for (int i = 0; i < length; ++i) {
    if (spec.kind() == SpecKind::Amalgam) {
      const auto& s = spec.amalgam_spec();
      const int na = s.A->order();
      const int pick = static_cast<int>(rng.below(na + s.B->order()));
      word.push_back(pick < na ? RawLetter::a(pick) : RawLetter::b(pick - na));
    } else if (rng.coin()) {
      word.push_back(RawLetter::t(rng.coin() ? 1 : -1));
    } else {
      word.push_back(RawLetter::h(static_cast<Element>(rng.below(spec.target()->order()))));
    }
  }
  return word;
}

NormalForm random_element(const GraphOfGroups& spec, SplitMix64& rng, int max_length) {
  return spec.normalize(random_raw_word(spec, rng, rng.between(1, max_length)));
}

}  // namespace treetrace

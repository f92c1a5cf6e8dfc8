#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "subsetsum/instance.hpp"

namespace subsetsum {

enum class Scheme { Constrained, Unconstrained, Multi, SideInfo, KAry };

const char* scheme_name(Scheme scheme);
Scheme scheme_from_name(std::string_view name);

// Scheme-tagged compressed representation.
//   Constrained:   m_value = M, sums = {E}
//   Unconstrained: sums = {E}
//   Multi:         m_value = M, sums = {E_1..E_m}
//   SideInfo:      sums = {E}
//   KAry:          counts = {N_1..N_{K-1}}, sums = {E_1..E_{K-1}}
struct EncodedMessage {
  Scheme scheme = Scheme::Constrained;
  std::int64_t n = 0;
  std::optional<std::int64_t> m_value;
  std::vector<std::int64_t> sums;
  std::vector<std::int64_t> counts;

  nlohmann::json to_json() const;
  static EncodedMessage from_json(const nlohmann::json& j);
  bool operator==(const EncodedMessage&) const = default;
};

enum class DecodeStrategy { Exhaustive, MeetInMiddle };

// Decoding classifies the full solution set rather than tie-breaking:
// ambiguity is the observable the experiments measure.
struct DecodeOutcome {
  enum class Kind { Unique, Ambiguous, NotFound };
  Kind kind = Kind::NotFound;
  std::uint64_t count = 0;                  // exact number of solutions
  std::vector<SourceSequence> witnesses;    // up to max_witnesses, lex order

  bool unique() const { return kind == Kind::Unique; }
  nlohmann::json to_json() const;
};

// Joint source/side-information law P(sigma, tau). Row 0 is sigma = +1, row 1
// is sigma = -1; columns follow the tau alphabet (+1,-1 for binary tau, else
// 1..K'). epsilon is the max-norm typicality tolerance; nonpositive means the
// decoder default 2/N.
struct JointDistribution {
  std::vector<std::vector<double>> p;
  double epsilon = -1.0;

  void validate() const;
  std::size_t tau_alphabet() const { return p.empty() ? 0 : p[0].size(); }
  // H(sigma | tau) in bits.
  double conditional_entropy_bits() const;
};

EncodedMessage encode_constrained(const SourceSequence& seq, const WeightSet& weights);
DecodeOutcome decode_constrained(const EncodedMessage& msg, const WeightSet& weights,
                                 DecodeStrategy strategy, int max_witnesses = 2);

EncodedMessage encode_unconstrained(const SourceSequence& seq, const WeightSet& weights);
DecodeOutcome decode_unconstrained(const EncodedMessage& msg, const WeightSet& weights,
                                   DecodeStrategy strategy, int max_witnesses = 2);

EncodedMessage encode_multi(const SourceSequence& seq, const WeightSet& weights);
DecodeOutcome decode_multi(const EncodedMessage& msg, const WeightSet& weights,
                           DecodeStrategy strategy, int max_witnesses = 2);

// Slepian-Wolf style: the message carries E only; the decoder restricts the
// search to sequences jointly typical with tau under `joint`.
EncodedMessage encode_side_info(const SourceSequence& seq, const WeightSet& weights);
DecodeOutcome decode_side_info(const EncodedMessage& msg, const WeightSet& weights,
                               const SourceSequence& tau, const JointDistribution& joint,
                               int max_witnesses = 2);

// K-ary staged scheme over K-1 weight rows. MeetInMiddle runs the staged
// decoder (per-stage binary solves; ambiguity count is the product of stage
// counts along the first completed branch). Exhaustive searches the joint
// composition class and is exact.
EncodedMessage encode_kary(const SourceSequence& seq, const WeightSet& weights);
DecodeOutcome decode_kary(const EncodedMessage& msg, const WeightSet& weights,
                          DecodeStrategy strategy = DecodeStrategy::MeetInMiddle,
                          int max_witnesses = 2);

// Codeword length accounting from exact ranges of the signed sums:
// composition overhead log2(N+1) where applicable plus log2(2*N*L_k + 1) per
// transmitted sum.
double codeword_length_bits(const EncodedMessage& msg, std::span<const std::int64_t> levels);
double codeword_length_bits(const EncodedMessage& msg, const WeightSet& weights);

}  // namespace subsetsum

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace subsetsum {

// Source sequence over the spin alphabet {-1,+1} or, for K-ary sources, over
// {1..K}. Immutable after construction; factories validate the symbols.
class SourceSequence {
 public:
  static SourceSequence binary(std::vector<int> spins);
  static SourceSequence kary(int k, std::vector<int> symbols);

  // "+-+" for binary sequences, digit strings for K-ary (K <= 9).
  static SourceSequence parse_binary(std::string_view text);
  static SourceSequence parse_kary(int k, std::string_view text);

  std::int64_t size() const { return static_cast<std::int64_t>(symbols_.size()); }
  bool is_binary() const { return kary_ == 0; }
  // Number of distinct symbols: 2 for spin sequences, K otherwise.
  int alphabet_size() const { return kary_ == 0 ? 2 : kary_; }
  int kary_alphabet() const { return kary_; }
  const std::vector<int>& symbols() const { return symbols_; }
  int operator[](std::int64_t i) const { return symbols_[static_cast<std::size_t>(i)]; }
  std::string to_string() const;

  bool operator==(const SourceSequence&) const = default;

 private:
  SourceSequence(int k, std::vector<int> symbols)
      : kary_(k), symbols_(std::move(symbols)) {}
  int kary_ = 0;  // 0 marks the spin alphabet {-1,+1}
  std::vector<int> symbols_;
};

// Occurrence counts per symbol. For spin sequences the binary views expose
// N_+, N_- and the magnetization M = N_+ - N_-.
struct Composition {
  std::map<int, std::int64_t> counts;
  std::int64_t n = 0;

  std::int64_t count_of(int symbol) const {
    auto it = counts.find(symbol);
    return it == counts.end() ? 0 : it->second;
  }
  std::int64_t n_plus() const { return count_of(+1); }
  std::int64_t n_minus() const { return count_of(-1); }
  std::int64_t magnetization() const { return n_plus() - n_minus(); }

  bool operator==(const Composition&) const = default;
};

Composition composition_of(const SourceSequence& seq);

// Random weight instance: m rows of n integers, row k i.i.d. uniform on
// {1..L_k}. Sampling is a pure function of (seed, n, levels); rows draw from
// independent derived streams.
class WeightSet {
 public:
  static WeightSet sample(std::int64_t n, std::int64_t level, std::uint64_t seed);
  static WeightSet sample_multi(std::int64_t n, const std::vector<std::int64_t>& levels,
                                std::uint64_t seed);
  // Wraps explicit rows (validated against the levels).
  static WeightSet from_rows(std::vector<std::vector<std::int64_t>> rows,
                             std::vector<std::int64_t> levels, std::uint64_t seed = 0);

  std::int64_t size() const {
    return rows_.empty() ? 0 : static_cast<std::int64_t>(rows_[0].size());
  }
  std::size_t row_count() const { return rows_.size(); }
  std::int64_t level(std::size_t row = 0) const { return levels_.at(row); }
  const std::vector<std::int64_t>& levels() const { return levels_; }
  std::span<const std::int64_t> row(std::size_t k = 0) const { return rows_.at(k); }
  std::uint64_t seed() const { return seed_; }

  nlohmann::json to_json() const;
  static WeightSet from_json(const nlohmann::json& j);

  bool operator==(const WeightSet&) const = default;

 private:
  WeightSet(std::vector<std::vector<std::int64_t>> rows, std::vector<std::int64_t> levels,
            std::uint64_t seed)
      : rows_(std::move(rows)), levels_(std::move(levels)), seed_(seed) {}
  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<std::int64_t> levels_;
  std::uint64_t seed_ = 0;
};

// E(sigma) = sum_i a_i sigma_i for a spin sequence, exact in 64-bit arithmetic.
// Requires n * L < 2^62 so every partial sum stays representable.
std::int64_t subset_sum_value(const SourceSequence& seq, const WeightSet& weights,
                              std::size_t row = 0);

}  // namespace subsetsum

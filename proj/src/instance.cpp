#include "subsetsum/instance.hpp"

#include <stdexcept>

#include "subsetsum/rng.hpp"

namespace subsetsum {

SourceSequence SourceSequence::binary(std::vector<int> spins) {
  if (spins.empty()) throw std::invalid_argument("sequence must be nonempty");
  for (int s : spins) {
    if (s != 1 && s != -1)
      throw std::invalid_argument("binary sequence symbols must be +1 or -1");
  }
  return SourceSequence(0, std::move(spins));
}

SourceSequence SourceSequence::kary(int k, std::vector<int> symbols) {
  if (k < 2) throw std::invalid_argument("K-ary alphabet needs K >= 2");
  if (symbols.empty()) throw std::invalid_argument("sequence must be nonempty");
  for (int s : symbols) {
    if (s < 1 || s > k)
      throw std::invalid_argument("K-ary sequence symbols must lie in 1..K");
  }
  return SourceSequence(k, std::move(symbols));
}

SourceSequence SourceSequence::parse_binary(std::string_view text) {
  std::vector<int> spins;
  spins.reserve(text.size());
  for (char c : text) {
    if (c == '+')
      spins.push_back(+1);
    else if (c == '-')
      spins.push_back(-1);
    else
      throw std::invalid_argument("binary sequence strings use only '+'/'-'");
  }
  return binary(std::move(spins));
}

SourceSequence SourceSequence::parse_kary(int k, std::string_view text) {
  if (k < 2 || k > 9)
    throw std::invalid_argument("digit serialization supports 2 <= K <= 9");
  std::vector<int> symbols;
  symbols.reserve(text.size());
  for (char c : text) {
    if (c < '1' || c > '0' + k)
      throw std::invalid_argument("K-ary sequence strings use digits 1..K");
    symbols.push_back(c - '0');
  }
  return kary(k, std::move(symbols));
}

std::string SourceSequence::to_string() const {
  std::string out;
  out.reserve(symbols_.size());
  if (is_binary()) {
    for (int s : symbols_) out.push_back(s > 0 ? '+' : '-');
  } else {
    if (kary_ > 9)
      throw std::invalid_argument("digit serialization supports K <= 9");
    for (int s : symbols_) out.push_back(static_cast<char>('0' + s));
  }
  return out;
}

Composition composition_of(const SourceSequence& seq) {
  Composition comp;
  comp.n = seq.size();
  for (int s : seq.symbols()) ++comp.counts[s];
  return comp;
}

WeightSet WeightSet::sample(std::int64_t n, std::int64_t level, std::uint64_t seed) {
  return sample_multi(n, {level}, seed);
}

WeightSet WeightSet::sample_multi(std::int64_t n, const std::vector<std::int64_t>& levels,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("weight count n must be >= 1");
  if (levels.empty()) throw std::invalid_argument("at least one level required");
  for (std::int64_t L : levels) {
    if (L < 1) throw std::invalid_argument("level L must be >= 1");
  }
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    Rng rng = derive_stream(seed, k);
    std::vector<std::int64_t> row(static_cast<std::size_t>(n));
    for (auto& w : row)
      w = 1 + static_cast<std::int64_t>(
                  rng.next_below(static_cast<std::uint64_t>(levels[k])));
    rows.push_back(std::move(row));
  }
  return WeightSet(std::move(rows), levels, seed);
}

WeightSet WeightSet::from_rows(std::vector<std::vector<std::int64_t>> rows,
                               std::vector<std::int64_t> levels, std::uint64_t seed) {
  if (rows.empty() || rows.size() != levels.size())
    throw std::invalid_argument("rows and levels must match and be nonempty");
  const std::size_t n = rows[0].size();
  if (n == 0) throw std::invalid_argument("weight rows must be nonempty");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != n) throw std::invalid_argument("ragged weight rows");
    if (levels[k] < 1) throw std::invalid_argument("level L must be >= 1");
    for (std::int64_t w : rows[k]) {
      if (w < 1 || w > levels[k])
        throw std::invalid_argument("weights must lie in 1..L");
    }
  }
  return WeightSet(std::move(rows), std::move(levels), seed);
}

nlohmann::json WeightSet::to_json() const {
  nlohmann::json j;
  j["n"] = size();
  j["seed"] = seed_;
  if (rows_.size() == 1) {
    j["L"] = levels_[0];
    j["weights"] = rows_[0];
  } else {
    j["L_list"] = levels_;
    j["weights"] = rows_;
  }
  return j;
}

WeightSet WeightSet::from_json(const nlohmann::json& j) {
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  std::vector<std::int64_t> levels;
  std::vector<std::vector<std::int64_t>> rows;
  if (j.contains("L_list")) {
    levels = j.at("L_list").get<std::vector<std::int64_t>>();
    rows = j.at("weights").get<std::vector<std::vector<std::int64_t>>>();
  } else {
    levels = {j.at("L").get<std::int64_t>()};
    rows = {j.at("weights").get<std::vector<std::int64_t>>()};
  }
  auto ws = from_rows(std::move(rows), std::move(levels), seed);
  if (j.contains("n") && j.at("n").get<std::int64_t>() != ws.size())
    throw std::invalid_argument("weight JSON: n does not match weights length");
  return ws;
}

std::int64_t subset_sum_value(const SourceSequence& seq, const WeightSet& weights,
                              std::size_t row) {
  if (!seq.is_binary())
    throw std::invalid_argument("subset sums are defined for spin sequences");
  if (seq.size() != weights.size())
    throw std::invalid_argument("sequence and weight lengths differ");
  const auto a = weights.row(row);
  const std::int64_t n = seq.size();
  const std::int64_t L = weights.level(row);
  if (static_cast<unsigned __int128>(n) * static_cast<unsigned __int128>(L) >=
      (static_cast<unsigned __int128>(1) << 62))
    throw std::overflow_error("n * L too large for 64-bit subset sums");
  std::int64_t e = 0;
  for (std::int64_t i = 0; i < n; ++i)
    e += seq[i] > 0 ? a[static_cast<std::size_t>(i)] : -a[static_cast<std::size_t>(i)];
  return e;
}

}  // namespace subsetsum

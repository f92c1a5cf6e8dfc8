#include <doctest.h>

#include <cmath>

#include "subsetsum/codec.hpp"
#include "subsetsum/counting.hpp"
#include "subsetsum/rng.hpp"

using namespace subsetsum;

namespace {

SourceSequence random_binary(Rng& rng, std::int64_t n, double p = 0.5) {
  std::vector<int> spins(static_cast<std::size_t>(n));
  for (auto& s : spins) s = rng.next_bernoulli(p) ? +1 : -1;
  return SourceSequence::binary(spins);
}

}  // namespace

TEST_CASE("constrained encode: hand cases and composition invariance") {
  const auto w12 = WeightSet::from_rows({{1, 2}}, {2});
  const auto msg = encode_constrained(SourceSequence::parse_binary("+-"), w12);
  CHECK(*msg.m_value == 0);
  CHECK(msg.sums[0] == -1);

  const auto w555 = WeightSet::from_rows({{5, 5, 5}}, {5});
  const auto msg2 = encode_constrained(SourceSequence::parse_binary("++-"), w555);
  CHECK(*msg2.m_value == 1);
  CHECK(msg2.sums[0] == 5);
  // M depends only on the composition.
  const auto msg3 = encode_constrained(SourceSequence::parse_binary("-++"), w555);
  CHECK(*msg3.m_value == *msg2.m_value);
}

TEST_CASE("constrained decode: unique, ambiguous, not-found, parity") {
  const auto w12 = WeightSet::from_rows({{1, 2}}, {2});
  for (auto strategy : {DecodeStrategy::Exhaustive, DecodeStrategy::MeetInMiddle}) {
    EncodedMessage msg{Scheme::Constrained, 2, 0, {-1}, {}};
    const auto unique = decode_constrained(msg, w12, strategy);
    REQUIRE(unique.kind == DecodeOutcome::Kind::Unique);
    CHECK(unique.witnesses[0].to_string() == "+-");

    msg.sums = {2};  // no composition-mate reaches E = 2 (parity prune fires)
    CHECK(decode_constrained(msg, w12, strategy).kind == DecodeOutcome::Kind::NotFound);
  }

  const auto w11 = WeightSet::from_rows({{1, 1}}, {1});
  EncodedMessage swap_msg{Scheme::Constrained, 2, 0, {0}, {}};
  const auto amb = decode_constrained(swap_msg, w11, DecodeStrategy::Exhaustive);
  CHECK(amb.kind == DecodeOutcome::Kind::Ambiguous);
  CHECK(amb.count == 2);
  REQUIRE(amb.witnesses.size() == 2);
  CHECK(amb.witnesses[0].to_string() == "-+");  // lex order: '-' before '+'
  CHECK(amb.witnesses[1].to_string() == "+-");

  EncodedMessage bad_m{Scheme::Constrained, 2, 1, {0}, {}};  // M parity violates N
  CHECK_THROWS_AS(decode_constrained(bad_m, w11, DecodeStrategy::Exhaustive),
                  std::invalid_argument);
}

TEST_CASE("unconstrained decode: bijective weights and swap ambiguity") {
  const auto pow2 = WeightSet::from_rows({{1, 2, 4}}, {4});
  EncodedMessage msg{Scheme::Unconstrained, 3, {}, {-5}, {}};
  for (auto strategy : {DecodeStrategy::Exhaustive, DecodeStrategy::MeetInMiddle}) {
    const auto out = decode_unconstrained(msg, pow2, strategy);
    REQUIRE(out.kind == DecodeOutcome::Kind::Unique);
    CHECK(out.witnesses[0].to_string() == "+--");
  }
  const auto w11 = WeightSet::from_rows({{1, 1}}, {1});
  EncodedMessage zero{Scheme::Unconstrained, 2, {}, {0}, {}};
  const auto amb = decode_unconstrained(zero, w11, DecodeStrategy::MeetInMiddle);
  CHECK(amb.kind == DecodeOutcome::Kind::Ambiguous);
  CHECK(amb.count == 2);
}

TEST_CASE("round-trip: unique decodes reproduce the source exactly") {
  Rng rng(1001);
  for (int rep = 0; rep < 300; ++rep) {
    const std::int64_t n = 6 + static_cast<std::int64_t>(rng.next_below(9));
    const std::int64_t level = 1 + static_cast<std::int64_t>(rng.next_below(4096));
    const auto ws = WeightSet::sample(n, level, rng.next_u64());
    const auto seq = random_binary(rng, n);

    const auto cmsg = encode_constrained(seq, ws);
    const auto cout_ = decode_constrained(cmsg, ws, DecodeStrategy::MeetInMiddle);
    REQUIRE(cout_.kind != DecodeOutcome::Kind::NotFound);
    if (cout_.kind == DecodeOutcome::Kind::Unique) {
      CHECK(cout_.witnesses[0] == seq);
      CHECK(encode_constrained(cout_.witnesses[0], ws) == cmsg);
    } else {
      for (const auto& w : cout_.witnesses) CHECK(encode_constrained(w, ws) == cmsg);
    }

    const auto umsg = encode_unconstrained(seq, ws);
    const auto uout = decode_unconstrained(umsg, ws, DecodeStrategy::MeetInMiddle);
    REQUIRE(uout.kind != DecodeOutcome::Kind::NotFound);
    if (uout.kind == DecodeOutcome::Kind::Unique) CHECK(uout.witnesses[0] == seq);
  }
}

TEST_CASE("strategy equivalence: exhaustive and meet-in-the-middle agree") {
  Rng rng(7777);
  for (int rep = 0; rep < 400; ++rep) {
    const std::int64_t n = 4 + static_cast<std::int64_t>(rng.next_below(13));
    const std::int64_t level = 1 + static_cast<std::int64_t>(rng.next_below(64));
    const auto ws = WeightSet::sample(n, level, rng.next_u64());
    const auto seq = random_binary(rng, n);

    const auto cmsg = encode_constrained(seq, ws);
    const auto a = decode_constrained(cmsg, ws, DecodeStrategy::Exhaustive, 3);
    const auto b = decode_constrained(cmsg, ws, DecodeStrategy::MeetInMiddle, 3);
    CHECK(a.kind == b.kind);
    CHECK(a.count == b.count);
    REQUIRE(a.witnesses.size() == b.witnesses.size());
    for (std::size_t i = 0; i < a.witnesses.size(); ++i)
      CHECK(a.witnesses[i] == b.witnesses[i]);

    const auto umsg = encode_unconstrained(seq, ws);
    const auto ua = decode_unconstrained(umsg, ws, DecodeStrategy::Exhaustive, 3);
    const auto ub = decode_unconstrained(umsg, ws, DecodeStrategy::MeetInMiddle, 3);
    CHECK(ua.kind == ub.kind);
    CHECK(ua.count == ub.count);
    for (std::size_t i = 0; i < ua.witnesses.size(); ++i)
      CHECK(ua.witnesses[i] == ub.witnesses[i]);
  }
}

TEST_CASE("constrained solution count equals the brute-force oracle") {
  Rng rng(31415);
  for (int rep = 0; rep < 200; ++rep) {
    const std::int64_t n = 4 + static_cast<std::int64_t>(rng.next_below(11));
    const std::int64_t level = 1 + static_cast<std::int64_t>(rng.next_below(16));
    const auto ws = WeightSet::sample(n, level, rng.next_u64());
    const auto seq = random_binary(rng, n);
    const auto msg = encode_constrained(seq, ws);
    const auto out = decode_constrained(msg, ws, DecodeStrategy::MeetInMiddle);
    CHECK(out.count ==
          static_cast<std::uint64_t>(brute_force_omega_constrained(ws, seq)));
    CHECK(out.count >= 1);
  }
}

TEST_CASE("collision characterization on equal-composition pairs") {
  // E(sigma) = E(sigma_hat) iff the two swapped index sets carry equal weight.
  Rng rng(9090);
  for (int rep = 0; rep < 500; ++rep) {
    const std::int64_t n = 4 + static_cast<std::int64_t>(rng.next_below(9));
    const std::int64_t level = 1 + static_cast<std::int64_t>(rng.next_below(8));
    const auto ws = WeightSet::sample(n, level, rng.next_u64());
    const auto base = random_binary(rng, n);
    auto permuted = base.symbols();
    for (std::size_t i = permuted.size(); i > 1; --i)
      std::swap(permuted[i - 1], permuted[rng.next_below(i)]);
    const auto other = SourceSequence::binary(permuted);

    std::int64_t swap_plus = 0, swap_minus = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      if (other[i] > 0 && base[i] < 0) swap_plus += ws.row()[static_cast<std::size_t>(i)];
      if (other[i] < 0 && base[i] > 0) swap_minus += ws.row()[static_cast<std::size_t>(i)];
    }
    const bool collide = subset_sum_value(other, ws) == subset_sum_value(base, ws);
    CHECK(collide == (swap_plus == swap_minus));
  }
}

TEST_CASE("multi: m = 1 reduces to the constrained codec") {
  Rng rng(246);
  for (int rep = 0; rep < 100; ++rep) {
    const std::int64_t n = 4 + static_cast<std::int64_t>(rng.next_below(9));
    const std::int64_t level = 1 + static_cast<std::int64_t>(rng.next_below(32));
    const auto ws = WeightSet::sample(n, level, rng.next_u64());
    const auto seq = random_binary(rng, n);
    const auto cmsg = encode_constrained(seq, ws);
    auto mmsg = encode_multi(seq, ws);
    CHECK(mmsg.sums == cmsg.sums);
    const auto cd = decode_constrained(cmsg, ws, DecodeStrategy::MeetInMiddle);
    const auto md = decode_multi(mmsg, ws, DecodeStrategy::MeetInMiddle);
    CHECK(cd.kind == md.kind);
    CHECK(cd.count == md.count);
  }
}

TEST_CASE("multi: a second sum breaks the swap tie") {
  const auto ws = WeightSet::from_rows({{1, 1}, {1, 2}}, {1, 2});
  const auto seq = SourceSequence::parse_binary("+-");
  const auto msg = encode_multi(seq, ws);
  CHECK(*msg.m_value == 0);
  CHECK(msg.sums == std::vector<std::int64_t>{0, -1});
  for (auto strategy : {DecodeStrategy::Exhaustive, DecodeStrategy::MeetInMiddle}) {
    const auto out = decode_multi(msg, ws, strategy);
    REQUIRE(out.kind == DecodeOutcome::Kind::Unique);
    CHECK(out.witnesses[0] == seq);
  }
}

TEST_CASE("multi: strategies agree on random instances") {
  Rng rng(135);
  for (int rep = 0; rep < 150; ++rep) {
    const std::int64_t n = 4 + static_cast<std::int64_t>(rng.next_below(9));
    const std::int64_t l1 = 1 + static_cast<std::int64_t>(rng.next_below(8));
    const std::int64_t l2 = 1 + static_cast<std::int64_t>(rng.next_below(8));
    const auto ws = WeightSet::sample_multi(n, {l1, l2}, rng.next_u64());
    const auto seq = random_binary(rng, n);
    const auto msg = encode_multi(seq, ws);
    const auto a = decode_multi(msg, ws, DecodeStrategy::Exhaustive);
    const auto b = decode_multi(msg, ws, DecodeStrategy::MeetInMiddle);
    CHECK(a.kind == b.kind);
    CHECK(a.count == b.count);
  }
}

TEST_CASE("side info: perfect correlation pins the answer to tau") {
  const std::int64_t n = 10;
  Rng rng(864);
  for (int rep = 0; rep < 20; ++rep) {
    const auto ws = WeightSet::sample(n, 4, rng.next_u64());  // tiny level: huge raw ambiguity
    const auto seq = random_binary(rng, n);
    // Diagonal joint with the pair's own marginal: off-diagonal cells of any
    // candidate must vanish once epsilon < 1/(2N), leaving only tau itself.
    const double a = static_cast<double>(composition_of(seq).n_plus()) /
                     static_cast<double>(n);
    JointDistribution joint;
    joint.p = {{a, 0.0}, {0.0, 1.0 - a}};
    joint.epsilon = 1.0 / (2.0 * static_cast<double>(n)) - 1e-9;
    const auto msg = encode_side_info(seq, ws);
    const auto out = decode_side_info(msg, ws, seq, joint);
    REQUIRE(out.kind == DecodeOutcome::Kind::Unique);
    CHECK(out.witnesses[0] == seq);
  }
}

TEST_CASE("side info: independent joint with full tolerance matches unconstrained") {
  Rng rng(5353);
  JointDistribution joint;
  joint.p = {{0.25, 0.25}, {0.25, 0.25}};
  joint.epsilon = 1.0;
  for (int rep = 0; rep < 60; ++rep) {
    const std::int64_t n = 4 + static_cast<std::int64_t>(rng.next_below(9));
    const std::int64_t level = 1 + static_cast<std::int64_t>(rng.next_below(16));
    const auto ws = WeightSet::sample(n, level, rng.next_u64());
    const auto seq = random_binary(rng, n);
    const auto tau = random_binary(rng, n);
    const auto smsg = encode_side_info(seq, ws);
    const auto sout = decode_side_info(smsg, ws, tau, joint, 3);
    EncodedMessage umsg{Scheme::Unconstrained, n, {}, smsg.sums, {}};
    const auto uout = decode_unconstrained(umsg, ws, DecodeStrategy::Exhaustive, 3);
    CHECK(sout.kind == uout.kind);
    CHECK(sout.count == uout.count);
  }
}

TEST_CASE("side info: empty typical set reports not-found") {
  const std::int64_t n = 14;
  Rng rng(12);
  const auto ws = WeightSet::sample(n, 100, 3);
  const auto seq = random_binary(rng, n);
  const auto msg = encode_side_info(seq, ws);
  // tau constant +1 cannot be jointly typical with a balanced BSC joint.
  const auto tau = SourceSequence::binary(std::vector<int>(n, +1));
  JointDistribution joint;
  joint.p = {{0.45, 0.05}, {0.05, 0.45}};
  joint.epsilon = 2.0 / static_cast<double>(n);
  CHECK(decode_side_info(msg, ws, tau, joint).kind == DecodeOutcome::Kind::NotFound);
}

TEST_CASE("kary: hand-checked two-stage example") {
  const auto ws = WeightSet::from_rows({{1, 2, 4}, {1, 2, 4}}, {4, 4});
  const auto seq = SourceSequence::kary(3, {1, 2, 3});
  const auto msg = encode_kary(seq, ws);
  CHECK(msg.counts == std::vector<std::int64_t>{1, 1});
  CHECK(msg.sums == std::vector<std::int64_t>{-5, -2});
  for (auto strategy : {DecodeStrategy::Exhaustive, DecodeStrategy::MeetInMiddle}) {
    const auto out = decode_kary(msg, ws, strategy);
    REQUIRE(out.kind == DecodeOutcome::Kind::Unique);
    CHECK(out.witnesses[0] == seq);
  }
}

TEST_CASE("kary: K = 2 reduces to the constrained codec") {
  Rng rng(88);
  for (int rep = 0; rep < 100; ++rep) {
    const std::int64_t n = 4 + static_cast<std::int64_t>(rng.next_below(9));
    const std::int64_t level = 1 + static_cast<std::int64_t>(rng.next_below(32));
    const auto ws = WeightSet::sample(n, level, rng.next_u64());
    std::vector<int> kary_syms(static_cast<std::size_t>(n));
    std::vector<int> spins(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      const bool one = rng.next_bernoulli(0.5);
      kary_syms[static_cast<std::size_t>(i)] = one ? 1 : 2;
      spins[static_cast<std::size_t>(i)] = one ? +1 : -1;
    }
    const auto kmsg = encode_kary(SourceSequence::kary(2, kary_syms), ws);
    const auto cmsg = encode_constrained(SourceSequence::binary(spins), ws);
    CHECK(kmsg.sums[0] == cmsg.sums[0]);
    const auto kout = decode_kary(kmsg, ws, DecodeStrategy::MeetInMiddle);
    const auto cout_ = decode_constrained(cmsg, ws, DecodeStrategy::MeetInMiddle);
    CHECK(kout.kind == cout_.kind);
    CHECK(kout.count == cout_.count);
  }
}

TEST_CASE("kary: staged classification is consistent with the joint search") {
  Rng rng(4242);
  int staged_overreports = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const std::int64_t n = 5 + static_cast<std::int64_t>(rng.next_below(7));
    const std::int64_t l1 = 1 + static_cast<std::int64_t>(rng.next_below(12));
    const std::int64_t l2 = 1 + static_cast<std::int64_t>(rng.next_below(12));
    const auto ws = WeightSet::sample_multi(n, {l1, l2}, rng.next_u64());
    std::vector<int> syms(static_cast<std::size_t>(n));
    for (auto& s : syms) s = 1 + static_cast<int>(rng.next_below(3));
    const auto seq = SourceSequence::kary(3, syms);
    const auto msg = encode_kary(seq, ws);

    const auto joint = decode_kary(msg, ws, DecodeStrategy::Exhaustive);
    const auto staged = decode_kary(msg, ws, DecodeStrategy::MeetInMiddle);
    REQUIRE(joint.kind != DecodeOutcome::Kind::NotFound);
    REQUIRE(staged.kind != DecodeOutcome::Kind::NotFound);

    if (staged.kind == DecodeOutcome::Kind::Unique) {
      CHECK(joint.kind == DecodeOutcome::Kind::Unique);
      CHECK(staged.witnesses[0] == joint.witnesses[0]);
      CHECK(staged.witnesses[0] == seq);
    } else if (joint.kind == DecodeOutcome::Kind::Unique) {
      // Staged ambiguity may over-report when later stages prune branches.
      ++staged_overreports;
    }
    for (const auto& w : staged.witnesses) CHECK(encode_kary(w, ws) == msg);
  }
  // The approximation should stay uncommon on this (deliberately collision
  // heavy) ensemble.
  CHECK(staged_overreports <= 60);
}

TEST_CASE("codeword length accounting") {
  EncodedMessage cmsg{Scheme::Constrained, 4, 0, {1}, {}};
  const std::vector<std::int64_t> l4{4};
  CHECK(codeword_length_bits(cmsg, l4) ==
        doctest::Approx(std::log2(5.0) + std::log2(33.0)).epsilon(1e-14));

  EncodedMessage umsg{Scheme::Unconstrained, 1, {}, {1}, {}};
  const std::vector<std::int64_t> l1{1};
  CHECK(codeword_length_bits(umsg, l1) == doctest::Approx(std::log2(3.0)).epsilon(1e-14));

  // Per-symbol rate: R + O(log N / N) at L = 2^{0.6 N}.
  auto per_symbol = [](std::int64_t n) {
    EncodedMessage msg{Scheme::Constrained, n, 0, {0}, {}};
    const std::vector<std::int64_t> lv{
        static_cast<std::int64_t>(std::llround(std::exp2(0.6 * static_cast<double>(n))))};
    return codeword_length_bits(msg, lv) / static_cast<double>(n);
  };
  const double overhead32 = per_symbol(32) - 0.6;
  const double overhead48 = per_symbol(48) - 0.6;
  CHECK(overhead32 > 0.0);
  CHECK(overhead32 <= 12.0 * std::log2(32.0) / 32.0);
  CHECK(overhead48 < overhead32);  // O(log N / N) decay

  EncodedMessage kmsg{Scheme::KAry, 4, {}, {1, 1}, {1, 1}};
  const std::vector<std::int64_t> lk{4, 8};
  CHECK(codeword_length_bits(kmsg, lk) ==
        doctest::Approx(2.0 * std::log2(5.0) + std::log2(33.0) + std::log2(65.0))
            .epsilon(1e-14));
}

TEST_CASE("message JSON round-trips by scheme") {
  const auto ws = WeightSet::sample(6, 8, 21);
  Rng rng(3);
  const auto seq = random_binary(rng, 6);
  for (const auto& msg :
       {encode_constrained(seq, ws), encode_unconstrained(seq, ws),
        encode_side_info(seq, ws)}) {
    CHECK(EncodedMessage::from_json(msg.to_json()) == msg);
  }
  const auto wk = WeightSet::sample_multi(6, {4, 4}, 9);
  const auto kmsg = encode_kary(SourceSequence::kary(3, {1, 2, 3, 3, 2, 1}), wk);
  CHECK(EncodedMessage::from_json(kmsg.to_json()) == kmsg);
  const auto mmsg = encode_multi(seq, wk);
  CHECK(EncodedMessage::from_json(mmsg.to_json()) == mmsg);
}

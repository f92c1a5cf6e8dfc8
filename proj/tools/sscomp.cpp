// Command-line front end: encode, decode, count, ratefunc, sweep, verify.
// Exit codes: 0 success/Unique, 1 usage or input error, 2 Ambiguous decode,
// 3 NotFound decode, 4 failed verification.

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "subsetsum/codec.hpp"
#include "subsetsum/counting.hpp"
#include "subsetsum/experiments.hpp"
#include "subsetsum/instance.hpp"
#include "subsetsum/ratefuncs.hpp"
#include "subsetsum/verify.hpp"

namespace {

using nlohmann::json;
using namespace subsetsum;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

SourceSequence parse_sequence(const std::string& text, int kary) {
  return kary > 0 ? SourceSequence::parse_kary(kary, text)
                  : SourceSequence::parse_binary(text);
}

struct Cli {
  std::string weights_path, msg_path, seq_text, tau_text, joint_path, out_path;
  std::string scheme = "constrained";
  std::string strategy = "mitm";
  std::string func = "h";
  std::string config_path, suite;
  int kary = 0;
  int witnesses = 2;
  int threads = 0;
  std::int64_t n = 0, level = 1, n_plus = 0, n_minus = 0, trials = -1;
  double p = 0.5, from = 0.01, to = 0.99;
  int points = 99;
  std::vector<std::int64_t> levels;
  std::optional<std::uint64_t> seed;
};

DecodeStrategy strategy_from(const std::string& s) {
  if (s == "exhaustive") return DecodeStrategy::Exhaustive;
  if (s == "mitm") return DecodeStrategy::MeetInMiddle;
  throw std::invalid_argument("strategy must be exhaustive or mitm");
}

int cmd_weights(const Cli& cli) {
  if (!cli.seed) throw std::invalid_argument("weights: --seed is required");
  WeightSet ws = cli.levels.empty()
                     ? WeightSet::sample(cli.n, cli.level, *cli.seed)
                     : WeightSet::sample_multi(cli.n, cli.levels, *cli.seed);
  write_text(cli.out_path, ws.to_json().dump(2) + "\n");
  return 0;
}

int cmd_encode(const Cli& cli) {
  const WeightSet weights = WeightSet::from_json(read_json_file(cli.weights_path));
  const Scheme scheme = scheme_from_name(cli.scheme);
  const SourceSequence seq =
      parse_sequence(cli.seq_text, scheme == Scheme::KAry
                                       ? static_cast<int>(weights.row_count()) + 1
                                       : cli.kary);
  EncodedMessage msg;
  switch (scheme) {
    case Scheme::Constrained: msg = encode_constrained(seq, weights); break;
    case Scheme::Unconstrained: msg = encode_unconstrained(seq, weights); break;
    case Scheme::Multi: msg = encode_multi(seq, weights); break;
    case Scheme::SideInfo: msg = encode_side_info(seq, weights); break;
    case Scheme::KAry: msg = encode_kary(seq, weights); break;
  }
  json out = msg.to_json();
  out["config"] = {{"scheme", cli.scheme},
                   {"weights", cli.weights_path},
                   {"seq", cli.seq_text}};
  out["codeword_length_bits"] = codeword_length_bits(msg, weights);
  write_text(cli.out_path, out.dump(2) + "\n");
  return 0;
}

int cmd_decode(const Cli& cli) {
  const WeightSet weights = WeightSet::from_json(read_json_file(cli.weights_path));
  const EncodedMessage msg = EncodedMessage::from_json(read_json_file(cli.msg_path));
  const DecodeStrategy strategy = strategy_from(cli.strategy);

  DecodeOutcome outcome;
  switch (msg.scheme) {
    case Scheme::Constrained:
      outcome = decode_constrained(msg, weights, strategy, cli.witnesses);
      break;
    case Scheme::Unconstrained:
      outcome = decode_unconstrained(msg, weights, strategy, cli.witnesses);
      break;
    case Scheme::Multi:
      outcome = decode_multi(msg, weights, strategy, cli.witnesses);
      break;
    case Scheme::KAry:
      outcome = decode_kary(msg, weights, strategy, cli.witnesses);
      break;
    case Scheme::SideInfo: {
      if (cli.tau_text.empty() || cli.joint_path.empty())
        throw std::invalid_argument("side-info decode needs --tau and --joint");
      const json jj = read_json_file(cli.joint_path);
      JointDistribution joint;
      joint.p = jj.at("p").get<std::vector<std::vector<double>>>();
      joint.epsilon = jj.value("epsilon", -1.0);
      const auto tau = parse_sequence(cli.tau_text, cli.kary);
      outcome = decode_side_info(msg, weights, tau, joint, cli.witnesses);
      break;
    }
  }
  json out = outcome.to_json();
  out["config"] = {{"msg", cli.msg_path},
                   {"weights", cli.weights_path},
                   {"strategy", cli.strategy},
                   {"witnesses", cli.witnesses}};
  write_text(cli.out_path, out.dump(2) + "\n");
  switch (outcome.kind) {
    case DecodeOutcome::Kind::Unique: return 0;
    case DecodeOutcome::Kind::Ambiguous: return 2;
    case DecodeOutcome::Kind::NotFound: return 3;
  }
  return 1;
}

int cmd_count_lambda(const Cli& cli) {
  const CountTable table = lambda_table(cli.n, cli.level);
  std::ostringstream csv;
  csv << "s,count\n";
  for (std::int64_t s = table.s_min(); s <= table.s_max(); ++s)
    csv << s << ',' << table.at(s).get_str() << '\n';
  std::cerr << json{{"command", "count lambda"}, {"n", cli.n}, {"L", cli.level}}.dump()
            << "\n";
  write_text(cli.out_path, csv.str());
  return 0;
}

int cmd_count_omega(const Cli& cli) {
  json out;
  if (cli.scheme == "constrained") {
    const auto ex = expected_omega_constrained(cli.n_plus, cli.n_minus, cli.level);
    out = {{"scheme", "constrained"},
           {"params", {{"n_plus", cli.n_plus}, {"n_minus", cli.n_minus}, {"L", cli.level}}},
           {"value", ex.value()},
           {"value_exact", ex.exact.get_str()},
           {"method", "exact-rational"}};
  } else if (cli.scheme == "unconstrained") {
    const auto ex = expected_omega_unconstrained(cli.n, cli.p, cli.level);
    out = {{"scheme", "unconstrained"},
           {"params", {{"n", cli.n}, {"p", cli.p}, {"L", cli.level}}},
           {"value", ex.value()},
           {"value_exact", ex.exact.get_str()},
           {"method", "exact-rational"}};
  } else {
    throw std::invalid_argument("count omega: scheme must be constrained or unconstrained");
  }
  write_text(cli.out_path, out.dump(2) + "\n");
  return 0;
}

int cmd_ratefunc(const Cli& cli) {
  std::ostringstream csv;
  csv << "x,value\n";
  for (int i = 0; i < cli.points; ++i) {
    const double x = cli.points == 1 ? cli.from
                                     : cli.from + (cli.to - cli.from) * i / (cli.points - 1);
    double v;
    if (cli.func == "h")
      v = binary_entropy(x);
    else if (cli.func == "phi")
      v = phi(x).phi_value;
    else if (cli.func == "psi")
      v = psi(x);
    else if (cli.func == "xi")
      v = xi(x);
    else if (cli.func == "rc")
      v = critical_rate_unconstrained(x);
    else
      throw std::invalid_argument("ratefunc: --func must be one of h, phi, psi, xi, rc");
    char line[64];
    std::snprintf(line, sizeof(line), "%.12g,%.12g\n", x, v);
    csv << line;
  }
  std::cerr << json{{"command", "ratefunc"},
                    {"func", cli.func},
                    {"from", cli.from},
                    {"to", cli.to},
                    {"points", cli.points}}
                   .dump()
            << "\n";
  write_text(cli.out_path, csv.str());
  return 0;
}

int cmd_sweep(const Cli& cli) {
  SweepConfig config = SweepConfig::from_json(read_json_file(cli.config_path));
  if (cli.seed) config.seed = *cli.seed;
  if (cli.trials > 0) config.trials = cli.trials;
  if (cli.threads > 0) config.threads = cli.threads;
  if (!cli.out_path.empty()) config.out_path = cli.out_path;
  if (config.out_path.empty())
    throw std::invalid_argument("sweep: an output path is required (--out or config)");

  const SweepResult result = run_ambiguity_sweep(config);
  write_text(config.out_path, result.csv());
  write_text(config.out_path + ".meta.json", result.metadata().dump(2) + "\n");
  std::cerr << result.metadata()["config"].dump() << "\n";
  return 0;
}

int cmd_verify(const Cli& cli) {
  const std::uint64_t seed = cli.seed.value_or(20250801u);
  std::vector<SuiteReport> reports;
  if (cli.suite == "all")
    reports = verify_all(seed);
  else if (cli.suite == "lambda")
    reports = {verify_lambda()};
  else if (cli.suite == "appendixA")
    reports = {verify_appendix_a()};
  else if (cli.suite == "appendixB")
    reports = {verify_appendix_b()};
  else if (cli.suite == "omega")
    reports = {verify_omega(seed)};
  else if (cli.suite == "ratefuncs")
    reports = {verify_ratefuncs()};
  else
    throw std::invalid_argument(
        "verify: suite must be lambda, appendixA, appendixB, omega, ratefuncs or all");

  bool all_ok = true;
  for (const auto& report : reports) {
    std::cout << "suite " << report.suite << "\n";
    for (const auto& line : report.lines) {
      std::cout << "  [" << (line.ok ? "ok" : "FAIL") << "] " << line.name;
      if (!line.detail.empty()) std::cout << " (" << line.detail << ")";
      std::cout << "\n";
      all_ok = all_ok && line.ok;
    }
  }
  std::cout << (all_ok ? "verification passed" : "verification FAILED") << "\n";
  return all_ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subset-sum compression codecs and counting tools"};
  app.require_subcommand(1);
  Cli cli;

  auto* weights = app.add_subcommand("weights", "sample a WeightSet to JSON");
  weights->add_option("--n", cli.n, "number of weights")->required();
  weights->add_option("--level", cli.level, "level L");
  weights->add_option("--levels", cli.levels, "per-row levels for multi-row sets");
  weights->add_option("--seed", cli.seed, "sampling seed")->required();
  weights->add_option("--out", cli.out_path, "output path (default stdout)");

  auto* encode = app.add_subcommand("encode", "encode a sequence");
  encode->add_option("--scheme", cli.scheme,
                     "constrained|unconstrained|multi|side_info|kary");
  encode->add_option("--seq", cli.seq_text, "sequence (+-... or digits)")->required();
  encode->add_option("--k", cli.kary, "K for K-ary sequences");
  encode->add_option("--weights", cli.weights_path, "WeightSet JSON")->required();
  encode->add_option("--out", cli.out_path, "output path (default stdout)");

  auto* decode = app.add_subcommand("decode", "decode a message");
  decode->add_option("--msg", cli.msg_path, "EncodedMessage JSON")->required();
  decode->add_option("--weights", cli.weights_path, "WeightSet JSON")->required();
  decode->add_option("--strategy", cli.strategy, "exhaustive|mitm");
  decode->add_option("--witnesses", cli.witnesses, "max witnesses to report");
  decode->add_option("--tau", cli.tau_text, "side-information sequence");
  decode->add_option("--joint", cli.joint_path, "joint distribution JSON");
  decode->add_option("--k", cli.kary, "K for a K-ary tau");
  decode->add_option("--out", cli.out_path, "output path (default stdout)");

  auto* count = app.add_subcommand("count", "exact counting oracles");
  auto* count_lambda = count->add_subcommand("lambda", "Lambda_s^n table as CSV");
  count_lambda->add_option("--n", cli.n, "parts")->required();
  count_lambda->add_option("--level", cli.level, "level L")->required();
  count_lambda->add_option("--out", cli.out_path, "output path (default stdout)");
  auto* count_omega = count->add_subcommand("omega", "exact expected solution count");
  count_omega->add_option("--scheme", cli.scheme, "constrained|unconstrained");
  count_omega->add_option("--n-plus", cli.n_plus, "N_+ (constrained)");
  count_omega->add_option("--n-minus", cli.n_minus, "N_- (constrained)");
  count_omega->add_option("--n", cli.n, "N (unconstrained)");
  count_omega->add_option("--p", cli.p, "source parameter (unconstrained)");
  count_omega->add_option("--level", cli.level, "level L")->required();
  count_omega->add_option("--out", cli.out_path, "output path (default stdout)");

  auto* ratefunc = app.add_subcommand("ratefunc", "tabulate a rate function to CSV");
  ratefunc->add_option("--func", cli.func, "h|phi|psi|xi|rc")->required();
  ratefunc->add_option("--from", cli.from, "grid start");
  ratefunc->add_option("--to", cli.to, "grid end");
  ratefunc->add_option("--points", cli.points, "grid size");
  ratefunc->add_option("--out", cli.out_path, "output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo rate sweep");
  sweep->add_option("--config", cli.config_path, "sweep config JSON")->required();
  sweep->add_option("--out", cli.out_path, "CSV output path (overrides config)");
  sweep->add_option("--seed", cli.seed, "seed (overrides config)");
  sweep->add_option("--trials", cli.trials, "trials per point (overrides config)");
  sweep->add_option("--threads", cli.threads, "thread cap");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", cli.suite, "lambda|appendixA|appendixB|omega|ratefuncs|all")
      ->required();
  verify->add_option("--seed", cli.seed, "Monte Carlo seed");
  verify->add_option("--threads", cli.threads, "thread cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cli.threads > 0) omp_set_num_threads(cli.threads);
    if (weights->parsed()) return cmd_weights(cli);
    if (encode->parsed()) return cmd_encode(cli);
    if (decode->parsed()) return cmd_decode(cli);
    if (count->parsed()) {
      if (count_lambda->parsed()) return cmd_count_lambda(cli);
      if (count_omega->parsed()) return cmd_count_omega(cli);
      throw std::invalid_argument("count needs a lambda or omega subcommand");
    }
    if (ratefunc->parsed()) return cmd_ratefunc(cli);
    if (sweep->parsed()) return cmd_sweep(cli);
    if (verify->parsed()) return cmd_verify(cli);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

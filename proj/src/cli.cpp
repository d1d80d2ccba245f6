#include "rank2lu/cli.hpp"

#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rank2lu/state_file.hpp"

namespace rank2lu::cli {

namespace {

using io::Json;

constexpr char kRawNote[] =
    "Raw density-matrix files (\"rho\") are decomposed first and inherit the "
    "degenerate-spectrum refusal; decomposition-form files (\"lambda\", \"A\", \"B\") are used "
    "as given.";

struct Options {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string path1;
  std::string path2;
  std::string method = "theorem";
  std::string witness_out;
  int restarts = OracleConfig{}.restarts;
  int max_iters = OracleConfig{}.max_iters;

  // gen
  std::string family;
  bool random = false;
  std::string equivalent_base;
  std::string slocc_base;
  bool inequivalent = false;
  double theta = 0.0;
  double gamma_angle = 0.0;
  double lambda = 0.7;
  int m = 2;
  int n = 2;
  std::string out;
  std::string out2;
  bool raw = false;
};

int emit_error(std::ostream& out, std::ostream& err, const std::string& code,
               const std::string& message) {
  err << "error: " << message << '\n';
  out << Json{{"error", code}, {"message", message}}.dump(2) << '\n';
  return kExitError;
}

int exit_code_for(Decision d) {
  switch (d) {
    case Decision::Equivalent: return kExitOk;
    case Decision::NotEquivalent: return kExitNotEquivalent;
    case Decision::Undecided: return kExitUndecided;
  }
  return kExitUndecided;
}

int cmd_fingerprint(const Options& o, std::ostream& out) {
  const auto cfg = ToleranceConfig::from_scale(o.tol);
  const RankTwoState s = io::read_state_file(o.path1, cfg).rank_two(cfg);
  out << io::fingerprint_to_json(fingerprint(s, cfg)).dump(2) << '\n';
  return kExitOk;
}

int cmd_canonical(const Options& o, std::ostream& out) {
  const auto cfg = ToleranceConfig::from_scale(o.tol);
  const RankTwoState s = io::read_state_file(o.path1, cfg).rank_two(cfg);
  out << io::canonical_to_json(canonicalize(s, cfg)).dump(2) << '\n';
  return kExitOk;
}

int cmd_equiv(const Options& o, std::ostream& out, std::ostream& err) {
  const auto cfg = ToleranceConfig::from_scale(o.tol);
  const io::StateInput in1 = io::read_state_file(o.path1, cfg);
  const io::StateInput in2 = io::read_state_file(o.path2, cfg);
  if (!(in1.shape == in2.shape)) {
    throw Error(ErrorCode::ShapeMismatch, "state files have different shapes (m, n)");
  }

  if (o.method == "oracle") {
    OracleConfig ocfg;
    ocfg.restarts = o.restarts;
    ocfg.max_iters = o.max_iters;
    const OracleResult r = oracle_search(in1.density(), in2.density(), ocfg, Seed{o.seed});
    const bool found = r.verdict == OracleVerdict::Equivalent;
    std::ostringstream diag;
    diag << (found ? "oracle witness found" : "NoWitnessFound") << " (best residual "
         << r.best_residual << " after " << r.restarts_run << " restarts)";
    Json j{{"decision", found ? "Equivalent" : "Undecided"},
           {"method", "oracle"},
           {"diagnosis", diag.str()},
           {"oracle_verdict", found ? "Equivalent" : "NoWitnessFound"},
           {"best_residual", r.best_residual},
           {"witness", found ? io::lu_witness_to_json(r.best_witness) : Json(nullptr)}};
    if (found && !o.witness_out.empty()) {
      io::write_json_file(o.witness_out, io::lu_witness_to_json(r.best_witness));
    }
    out << j.dump(2) << '\n';
    return found ? kExitOk : kExitUndecided;
  }

  Verdict v;
  try {
    const RankTwoState s1 = in1.rank_two(cfg);
    const RankTwoState s2 = in2.rank_two(cfg);
    if (o.method == "theorem") {
      v = decide_lu(s1, s2, cfg);
    } else if (o.method == "canonical") {
      v = decide_lu_canonical(s1, s2, cfg);
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown method " + o.method);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateSpectrum) throw;
    v = Verdict{};
    v.method = o.method == "canonical" ? Method::Canonical : Method::Theorem;
    v.decision = Decision::Undecided;
    v.diagnosis = "degenerate spectrum; try --method oracle";
  }
  if (v.decision == Decision::Undecided) err << "undecided: " << v.diagnosis << '\n';
  if (v.lu_witness && !o.witness_out.empty()) {
    io::write_json_file(o.witness_out, io::lu_witness_to_json(*v.lu_witness));
  }
  out << io::verdict_to_json(v).dump(2) << '\n';
  return exit_code_for(v.decision);
}

int cmd_slocc(const Options& o, std::ostream& out) {
  const auto cfg = ToleranceConfig::from_scale(o.tol);
  const RankTwoState s1 = io::read_state_file(o.path1, cfg).rank_two(cfg);
  const RankTwoState s2 = io::read_state_file(o.path2, cfg).rank_two(cfg);
  const Verdict v = decide_slocc(s1, s2, cfg);
  if (v.slocc_witness && !o.witness_out.empty()) {
    io::write_json_file(o.witness_out, io::slocc_witness_to_json(*v.slocc_witness));
  }
  out << io::verdict_to_json(v).dump(2) << '\n';
  return v.decision == Decision::Equivalent ? kExitOk : kExitUndecided;
}

Json state_json(const RankTwoState& s, bool raw) {
  return raw ? io::density_to_json(assemble(s)) : io::state_to_json(s);
}

int cmd_gen(const Options& o, std::ostream& out) {
  const auto cfg = ToleranceConfig::from_scale(o.tol);
  const int modes = static_cast<int>(!o.family.empty()) + static_cast<int>(o.random) +
                    static_cast<int>(!o.equivalent_base.empty()) +
                    static_cast<int>(!o.slocc_base.empty()) + static_cast<int>(o.inequivalent);
  if (modes != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "choose exactly one of --family, --random, --equivalent-pair, "
                "--inequivalent-pair, --slocc-pair");
  }

  std::vector<Json> docs;
  std::optional<Json> witness;
  if (!o.family.empty()) {
    if (o.family != "two-qubit") throw Error(ErrorCode::InvalidArgument, "unknown family " + o.family);
    docs.push_back(state_json(two_qubit_family(o.theta, o.gamma_angle, o.lambda), o.raw));
  } else if (o.random) {
    const auto shape = BipartiteShape::make(o.m, o.n);
    docs.push_back(state_json(random_class_state(shape, o.lambda, {}, Seed{o.seed}, cfg), o.raw));
  } else if (!o.equivalent_base.empty()) {
    const RankTwoState base = io::read_state_file(o.equivalent_base, cfg).rank_two(cfg);
    auto [image, w] = equivalent_pair(base, Seed{o.seed}, cfg);
    docs.push_back(state_json(image, o.raw));
    witness = io::lu_witness_to_json(w);
  } else if (!o.slocc_base.empty()) {
    const RankTwoState base = io::read_state_file(o.slocc_base, cfg).rank_two(cfg);
    auto [image, w] = slocc_pair(base, Seed{o.seed}, 100.0, cfg);
    docs.push_back(state_json(image, o.raw));
    witness = io::slocc_witness_to_json(w);
  } else {
    if (!(o.lambda > 0.0 && o.lambda < 1.0)) {
      throw Error(ErrorCode::InvalidState, "lambda must lie in (0, 1)");
    }
    auto [first, second] =
        inequivalent_pair(BipartiteShape::make(o.m, o.n), o.lambda, Seed{o.seed}, cfg);
    docs.push_back(state_json(first, o.raw));
    docs.push_back(state_json(second, o.raw));
  }

  if (witness && !o.witness_out.empty()) io::write_json_file(o.witness_out, *witness);
  if (o.out.empty()) {
    out << (docs.size() == 1 ? docs[0] : Json{{"first", docs[0]}, {"second", docs[1]}}).dump(2)
        << '\n';
    return kExitOk;
  }
  Json written = Json::array();
  io::write_json_file(o.out, docs[0]);
  written.push_back(o.out);
  if (docs.size() == 2) {
    if (o.out2.empty()) throw Error(ErrorCode::InvalidArgument, "pair output needs --out2");
    io::write_json_file(o.out2, docs[1]);
    written.push_back(o.out2);
  }
  out << Json{{"written", written}}.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Local-unitary equivalence of rank-two bipartite mixed states"};
  app.require_subcommand(1);
  app.footer(kRawNote);

  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "numerical tolerance (rank, equality; degeneracy = 10x)")
        ->check(CLI::Range(1e-15, 0.1));
  };

  auto* fp = app.add_subcommand("fingerprint", "print the invariant fingerprint of a state");
  fp->add_option("state", o.path1, "state file")->required();
  add_tol(fp);

  auto* canon = app.add_subcommand("canonical", "print the canonical form (Delta, Gamma Delta)");
  canon->add_option("state", o.path1, "state file")->required();
  add_tol(canon);

  auto* equiv = app.add_subcommand("equiv", "decide local-unitary equivalence of two states");
  equiv->add_option("state1", o.path1, "first state file")->required();
  equiv->add_option("state2", o.path2, "second state file")->required();
  equiv->add_option("--method", o.method, "decision route")
      ->check(CLI::IsMember({"theorem", "canonical", "oracle"}));
  equiv->add_option("--witness", o.witness_out, "write the witness (u1, u2) to this file");
  equiv->add_option("--seed", o.seed, "oracle seed");
  equiv->add_option("--restarts", o.restarts, "oracle restarts")->check(CLI::PositiveNumber);
  equiv->add_option("--max-iters", o.max_iters, "oracle iterations per restart")
      ->check(CLI::PositiveNumber);
  add_tol(equiv);
  equiv->footer(kRawNote);

  auto* slocc = app.add_subcommand("slocc", "sufficient SLOCC criterion (m = n, B invertible)");
  slocc->add_option("state1", o.path1, "first state file")->required();
  slocc->add_option("state2", o.path2, "second state file")->required();
  slocc->add_option("--witness", o.witness_out, "write the witness (p, q) to this file");
  add_tol(slocc);

  auto* gen = app.add_subcommand("gen", "generate state files");
  gen->add_option("--family", o.family, "named family (two-qubit)");
  gen->add_flag("--random", o.random, "random in-class state");
  gen->add_option("--equivalent-pair", o.equivalent_base, "Haar local-unitary image of a base");
  gen->add_option("--slocc-pair", o.slocc_base, "invertible local image of a base (m = n)");
  gen->add_flag("--inequivalent-pair", o.inequivalent, "certified inequivalent pair");
  gen->add_option("--theta", o.theta, "family angle of A");
  gen->add_option("--gamma", o.gamma_angle, "family angle of B");
  gen->add_option("--lambda", o.lambda, "weight of the first eigenvector");
  gen->add_option("--m", o.m, "dimension of subsystem 1");
  gen->add_option("--n", o.n, "dimension of subsystem 2");
  gen->add_option("--seed", o.seed, "generator seed");
  gen->add_option("--out", o.out, "output file (first state)");
  gen->add_option("--out2", o.out2, "output file (second state of a pair)");
  gen->add_option("--witness", o.witness_out, "write the generating witness to this file");
  gen->add_flag("--raw", o.raw, "write raw density matrices instead of (lambda, A, B)");
  add_tol(gen);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return emit_error(out, err, "UsageError", e.what());
  }

  try {
    if (*fp) return cmd_fingerprint(o, out);
    if (*canon) return cmd_canonical(o, out);
    if (*equiv) return cmd_equiv(o, out, err);
    if (*slocc) return cmd_slocc(o, out);
    if (*gen) return cmd_gen(o, out);
  } catch (const Error& e) {
    return emit_error(out, err, std::string(to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return emit_error(out, err, "InternalError", e.what());
  }
  return emit_error(out, err, "UsageError", "no subcommand");
}

}  // namespace rank2lu::cli

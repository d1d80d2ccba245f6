#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rank2lu/cli.hpp"
#include "rank2lu/lab.hpp"
#include "rank2lu/state_file.hpp"

using namespace rank2lu;
using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = RANK2LU_GOLDEN_DIR;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  Json doc() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rank2lu");
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rank2lu_cli_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

bool close(const Json& a, const Json& b, double tol) {
  if (a.is_number() && b.is_number()) return std::abs(a.get<double>() - b.get<double>()) <= tol;
  if (a.type() != b.type()) return false;
  if (a.is_array() || a.is_object()) {
    if (a.size() != b.size()) return false;
    if (a.is_array()) {
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!close(a[i], b[i], tol)) return false;
    } else {
      for (auto it = a.begin(); it != a.end(); ++it)
        if (!b.contains(it.key()) || !close(it.value(), b.at(it.key()), tol)) return false;
    }
    return true;
  }
  return a == b;
}

Json golden(const std::string& name) {
  std::ifstream f(kGolden / name);
  return Json::parse(f);
}

const std::string bell = (kGolden / "bell_mixture.json").string();

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("fingerprint") {
  const Run r = run({"fingerprint", bell});
  CHECK(r.code == cli::kExitOk);
  CHECK(close(r.doc(), golden("bell_fingerprint.json"), 1e-9));

  TempDir t;
  std::ofstream(t.file("bad.json")) << "{\"m\": 2,";
  Run e = run({"fingerprint", t.file("bad.json")});
  CHECK(e.code == cli::kExitError);
  CHECK(e.doc().at("message").get<std::string>().find("parse error") != std::string::npos);
  CHECK(e.err.find("parse error") != std::string::npos);

  ComplexMatrix r3 = ComplexMatrix::Zero(4, 4);
  r3(0, 0) = 0.5;
  r3(1, 1) = 0.3;
  r3(2, 2) = 0.2;
  io::write_json_file(t.file("r3.json"),
                      io::density_to_json(DensityMatrix::make(BipartiteShape::make(2, 2), r3)));
  e = run({"fingerprint", t.file("r3.json")});
  CHECK(e.code == cli::kExitError);
  CHECK(e.doc().at("message").get<std::string>().find("rank not two") != std::string::npos);

  e = run({"fingerprint", t.file("missing.json")});
  CHECK(e.code == cli::kExitError);
}

TEST_CASE("canonical") {
  const Run r = run({"canonical", bell});
  CHECK(r.code == cli::kExitOk);
  CHECK(close(r.doc(), golden("bell_canonical.json"), 1e-9));

  TempDir t;
  for (auto [th, ga] : {std::pair{0.4, 0.9}, {1.7, 0.0}}) {
    io::write_json_file(t.file("f.json"), io::state_to_json(two_qubit_family(th, ga, 0.7)));
    const Run f = run({"canonical", t.file("f.json")});
    CHECK(f.code == cli::kExitOk);
    CHECK(close(f.doc(), golden("bell_canonical.json"), 1e-8));
  }

  std::ofstream(t.file("out.json"))
      << R"({"m": 2, "n": 3, "lambda": 0.7,
             "A": {"re": [[1, 0, 0], [0, 0, 0]]},
             "B": {"re": [[0, 0, 0], [0, 1, 0]]}})";
  const Run e = run({"canonical", t.file("out.json")});
  CHECK(e.code == cli::kExitError);
  CHECK(e.doc().at("error") == "ClassConditionViolated");
}

TEST_CASE("equiv exit codes") {
  TempDir t;
  CHECK(run({"gen", "--equivalent-pair", bell, "--seed", "7", "--out", t.file("img.json")}).code ==
        0);
  Run r = run({"equiv", bell, t.file("img.json"), "--witness", t.file("w.json")});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.doc().at("decision") == "Equivalent");
  CHECK(r.doc().at("witness").at("residual").get<double>() <= 1e-8);
  const Json w = Json::parse(slurp(t.file("w.json")));
  const ComplexMatrix u1 = io::matrix_from_json(w.at("u1"), 2, 2, "u1");
  const ComplexMatrix u2 = io::matrix_from_json(w.at("u2"), 2, 2, "u2");
  CHECK(verify_lu_witness(io::read_state_file(bell).rank_two(ToleranceConfig{}),
                          io::read_state_file(t.file("img.json")).rank_two(ToleranceConfig{}),
                          {u1, u2}) <= 1e-8);

  r = run({"equiv", bell, t.file("img.json"), "--method", "canonical"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.doc().at("method") == "canonical");

  run({"gen", "--family", "two-qubit", "--lambda", "0.6", "--out", t.file("l6.json")});
  r = run({"equiv", bell, t.file("l6.json")});
  CHECK(r.code == cli::kExitNotEquivalent);
  CHECK(r.doc().at("diagnosis").get<std::string>().rfind("(i)", 0) == 0);

  io::write_json_file(t.file("deg.json"),
                      io::density_to_json(assemble(two_qubit_family(0, 0, 0.5))));
  r = run({"equiv", t.file("deg.json"), t.file("deg.json"), "--method", "theorem"});
  CHECK(r.code == cli::kExitUndecided);
  CHECK(r.doc().at("diagnosis") == "degenerate spectrum; try --method oracle");
  r = run({"equiv", t.file("deg.json"), t.file("deg.json"), "--method", "canonical"});
  CHECK(r.code == cli::kExitUndecided);

  r = run({"equiv", t.file("deg.json"), t.file("deg.json"), "--method", "oracle", "--restarts",
           "2"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.doc().at("oracle_verdict") == "Equivalent");

  r = run({"equiv", bell, t.file("l6.json"), "--method", "oracle", "--restarts", "2",
           "--max-iters", "50"});
  CHECK(r.code == cli::kExitUndecided);
  CHECK(r.doc().at("oracle_verdict") == "NoWitnessFound");

  run({"gen", "--random", "--m", "2", "--n", "3", "--lambda", "0.7", "--seed", "1", "--out",
       t.file("r23.json")});
  r = run({"equiv", bell, t.file("r23.json")});
  CHECK(r.code == cli::kExitError);
  CHECK(r.doc().at("error") == "ShapeMismatch");

  r = run({"equiv", bell, t.file("img.json"), "--method", "magic"});
  CHECK(r.code == cli::kExitError);
}

TEST_CASE("slocc") {
  TempDir t;
  io::write_json_file(t.file("base.json"),
                      io::state_to_json(random_class_state(BipartiteShape::make(3, 3), 0.7, {},
                                                           Seed{4})));
  CHECK(run({"gen", "--slocc-pair", t.file("base.json"), "--seed", "2", "--out",
             t.file("img.json")})
            .code == 0);
  Run r = run({"slocc", t.file("base.json"), t.file("img.json")});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.doc().at("witness").at("residual").get<double>() <= 1e-8);

  r = run({"slocc", t.file("base.json"), t.file("base.json")});
  CHECK(r.code == cli::kExitOk);

  ClassStateSpec spec;
  spec.delta = std::vector<double>{std::sqrt(0.5), std::sqrt(0.5), 0.0};
  io::write_json_file(t.file("sing.json"),
                      io::state_to_json(random_class_state(BipartiteShape::make(3, 3), 0.7, spec,
                                                           Seed{5})));
  r = run({"slocc", t.file("sing.json"), t.file("sing.json")});
  CHECK(r.code == cli::kExitError);
  CHECK(r.doc().at("message").get<std::string>().find("B singular") != std::string::npos);

  run({"gen", "--family", "two-qubit", "--lambda", "0.6", "--out", t.file("l6.json")});
  r = run({"slocc", bell, t.file("l6.json")});
  CHECK(r.code == cli::kExitUndecided);
}

TEST_CASE("gen") {
  TempDir t;
  Run r = run({"gen", "--family", "two-qubit", "--theta", "0", "--gamma", "0", "--lambda", "0.7"});
  CHECK(r.code == 0);
  const RankTwoState s = io::state_from_json(r.doc()).rank_two(ToleranceConfig{});
  const RankTwoState b = io::read_state_file(bell).rank_two(ToleranceConfig{});
  CHECK((s.a() - b.a()).norm() < 1e-15);
  CHECK((s.b() - b.b()).norm() < 1e-15);

  const std::vector<std::string> args = {"gen", "--random", "--m", "3", "--n", "4",
                                         "--lambda", "0.6", "--seed", "5", "--out"};
  auto a1 = args, a2 = args;
  a1.push_back(t.file("x1.json"));
  a2.push_back(t.file("x2.json"));
  CHECK(run(a1).code == 0);
  CHECK(run(a2).code == 0);
  CHECK(slurp(t.file("x1.json")) == slurp(t.file("x2.json")));

  io::write_json_file(t.file("deg.json"), io::density_to_json(assemble(two_qubit_family(0, 0, 0.5))));
  r = run({"gen", "--equivalent-pair", t.file("deg.json"), "--seed", "1"});
  CHECK(r.code == cli::kExitError);
  CHECK(r.doc().at("error") == "DegenerateSpectrum");

  CHECK(run({"gen", "--random", "--m", "2", "--n", "2", "--lambda", "1.5"}).code == 2);
  CHECK(run({"gen", "--random", "--m", "3", "--n", "2"}).code == 2);
  CHECK(run({"gen", "--inequivalent-pair", "--m", "2", "--n", "2", "--lambda", "0.7"}).code == 2);
  CHECK(run({"gen", "--random", "--family", "two-qubit"}).code == 2);
  CHECK(run({"gen"}).code == 2);

  r = run({"gen", "--inequivalent-pair", "--m", "3", "--n", "3", "--lambda", "0.7", "--seed",
           "3", "--out", t.file("p1.json"), "--out2", t.file("p2.json")});
  CHECK(r.code == 0);
  r = run({"equiv", t.file("p1.json"), t.file("p2.json")});
  CHECK(r.code == cli::kExitNotEquivalent);

  r = run({"gen", "--inequivalent-pair", "--m", "3", "--n", "4", "--lambda", "0.7"});
  CHECK(r.code == 0);
  CHECK(r.doc().contains("first"));
  CHECK(r.doc().contains("second"));

  r = run({"gen", "--random", "--m", "2", "--n", "3", "--lambda", "0.7", "--raw", "--out",
           t.file("raw.json")});
  CHECK(r.code == 0);
  CHECK(Json::parse(slurp(t.file("raw.json"))).contains("rho"));
  CHECK(run({"fingerprint", t.file("raw.json")}).code == 0);
}

TEST_CASE("state file round trip is exact") {
  TempDir t;
  for (int k = 0; k < 10; ++k) {
    const auto s = random_class_state(BipartiteShape::make(3, 4), 0.6, {}, Seed{90u + k});
    io::write_json_file(t.file("s.json"), io::state_to_json(s));
    const RankTwoState back = io::read_state_file(t.file("s.json")).rank_two(ToleranceConfig{});
    CHECK(back.lambda1() == s.lambda1());
    CHECK(back.a() == s.a());
    CHECK(back.b() == s.b());
  }
}

TEST_CASE("help and usage") {
  Run r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("equiv") != std::string::npos);
  r = run({"equiv", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("degenerate-spectrum refusal") != std::string::npos);
  r = run({});
  CHECK(r.code == 2);
  r = run({"fingerprint", bell, "--tol", "abc"});
  CHECK(r.code == 2);
  CHECK(r.doc().at("error") == "UsageError");
  r = run({"fingerprint", bell, "--tol", "1e-6"});
  CHECK(r.code == 0);
}

TEST_CASE("installed binary exit codes") {
  TempDir t;
  const std::string cli = RANK2LU_CLI_PATH;
  auto status = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > \"" + t.file("o.txt") + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("fingerprint \"" + bell + "\"") == 0);
  io::write_json_file(t.file("l6.json"), io::state_to_json(two_qubit_family(0, 0, 0.6)));
  CHECK(status("equiv \"" + bell + "\" \"" + t.file("l6.json") + "\"") == 1);
  CHECK(status("canonical \"" + t.file("nothing.json") + "\"") == 2);
  io::write_json_file(t.file("deg.json"), io::density_to_json(assemble(two_qubit_family(0, 0, 0.5))));
  CHECK(status("equiv \"" + t.file("deg.json") + "\" \"" + t.file("deg.json") + "\"") == 3);
}

TEST_SUITE_END();

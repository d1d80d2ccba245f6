#include "rank2lu/state_file.hpp"

#include <fstream>
#include <sstream>

namespace rank2lu::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::ParseError, "parse error: " + what);
}

int read_dim(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    parse_fail(std::string("missing integer field \"") + key + "\"");
  }
  return j.at(key).get<int>();
}

Json real_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd real_from_rows(const Json& rows, int nrows, int ncols, const std::string& name) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != nrows) {
    parse_fail(name + " must have " + std::to_string(nrows) + " rows");
  }
  Eigen::MatrixXd out(nrows, ncols);
  for (int i = 0; i < nrows; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != ncols) {
      parse_fail(name + " rows must have " + std::to_string(ncols) + " entries");
    }
    for (int k = 0; k < ncols; ++k) {
      const Json& x = row[static_cast<std::size_t>(k)];
      if (!x.is_number()) parse_fail(name + " entries must be numbers");
      out(i, k) = x.get<double>();
    }
  }
  return out;
}

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

RankTwoState StateInput::rank_two(const ToleranceConfig& cfg) const {
  if (decomposed) return *decomposed;
  return decompose(*raw, cfg);
}

DensityMatrix StateInput::density() const {
  if (raw) return *raw;
  return assemble(*decomposed);
}

Json matrix_to_json(const ComplexMatrix& m) {
  return Json{{"re", real_rows(m.real())}, {"im", real_rows(m.imag())}};
}

ComplexMatrix matrix_from_json(const Json& j, int rows, int cols, const char* name) {
  if (!j.is_object() || !j.contains("re")) {
    parse_fail(std::string(name) + " must be an object with \"re\" and \"im\" arrays");
  }
  const Eigen::MatrixXd re = real_from_rows(j.at("re"), rows, cols, std::string(name) + ".re");
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(rows, cols);
  if (j.contains("im")) im = real_from_rows(j.at("im"), rows, cols, std::string(name) + ".im");
  ComplexMatrix out(rows, cols);
  out.real() = re;
  out.imag() = im;
  return out;
}

StateInput state_from_json(const Json& j, const ToleranceConfig& cfg) {
  if (!j.is_object()) parse_fail("state file must hold a JSON object");
  const int m = read_dim(j, "m");
  const int n = read_dim(j, "n");
  StateInput in{BipartiteShape::make(m, n), std::nullopt, std::nullopt};
  if (j.contains("rho")) {
    in.raw = DensityMatrix::make(in.shape, matrix_from_json(j.at("rho"), m * n, m * n, "rho"),
                                 cfg);
    return in;
  }
  if (!j.contains("lambda") || !j.at("lambda").is_number()) {
    parse_fail("state file needs either \"rho\" or \"lambda\", \"A\", \"B\"");
  }
  if (!j.contains("A") || !j.contains("B")) parse_fail("missing coefficient matrix A or B");
  in.decomposed = RankTwoState::make(in.shape, j.at("lambda").get<double>(),
                                     matrix_from_json(j.at("A"), m, n, "A"),
                                     matrix_from_json(j.at("B"), m, n, "B"), cfg);
  return in;
}

StateInput read_state_file(const std::string& path, const ToleranceConfig& cfg) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::ParseError, "parse error: cannot open " + path);
  Json j;
  try {
    file >> j;
  } catch (const Json::exception& e) {
    parse_fail(path + ": " + e.what());
  }
  return state_from_json(j, cfg);
}

Json state_to_json(const RankTwoState& s) {
  return Json{{"m", s.shape().m},
              {"n", s.shape().n},
              {"lambda", s.lambda1()},
              {"A", matrix_to_json(s.a())},
              {"B", matrix_to_json(s.b())}};
}

Json density_to_json(const DensityMatrix& rho) {
  return Json{{"m", rho.shape().m}, {"n", rho.shape().n}, {"rho", matrix_to_json(rho.rho())}};
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  file << j.dump(2) << '\n';
}

Json fingerprint_to_json(const Fingerprint& f) {
  Json traces = Json::array();
  for (const auto& z : f.trace_powers) traces.push_back(complex_pair(z));
  return Json{{"purity", f.purity},
              {"trace_powers", traces},
              {"rank_a", f.rank_a},
              {"rank_b", f.rank_b},
              {"rank_ba_powers", f.rank_ba_powers}};
}

Json canonical_to_json(const CanonicalForm& c) {
  Json delta = Json::array();
  for (Eigen::Index k = 0; k < c.delta.size(); ++k) delta.push_back(c.delta(k));
  Json blocks = Json::array();
  for (const auto& b : c.blocks) {
    blocks.push_back(
        Json{{"start", b.start}, {"size", b.size}, {"value", b.value}, {"zero", b.zero}});
  }
  Json spectra = Json::array();
  for (const auto& block : gamma_spectra(c)) {
    Json list = Json::array();
    for (const auto& z : block) list.push_back(complex_pair(z));
    spectra.push_back(std::move(list));
  }
  return Json{{"delta", delta}, {"blocks", blocks}, {"gamma_spectra", spectra}};
}

Json lu_witness_to_json(const LUWitness& w) {
  return Json{{"u1", matrix_to_json(w.u1)}, {"u2", matrix_to_json(w.u2)}, {"residual", w.residual}};
}

Json slocc_witness_to_json(const SloccWitness& w) {
  return Json{{"p", matrix_to_json(w.p)}, {"q", matrix_to_json(w.q)}, {"residual", w.residual}};
}

Json verdict_to_json(const Verdict& v) {
  Json out{{"decision", std::string(to_string(v.decision))},
           {"method", std::string(to_string(v.method))},
           {"diagnosis", v.diagnosis},
           {"witness", nullptr}};
  if (v.lu_witness) out["witness"] = lu_witness_to_json(*v.lu_witness);
  if (v.slocc_witness) out["witness"] = slocc_witness_to_json(*v.slocc_witness);
  return out;
}

}  // namespace rank2lu::io

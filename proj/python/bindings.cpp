#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rank2lu/lab.hpp"
#include "rank2lu/state_file.hpp"

namespace py = pybind11;
using namespace rank2lu;

namespace {

py::dict fingerprint_dict(const Fingerprint& f) {
  py::dict d;
  d["purity"] = f.purity;
  d["trace_powers"] = f.trace_powers;
  d["rank_a"] = f.rank_a;
  d["rank_b"] = f.rank_b;
  d["rank_ba_powers"] = f.rank_ba_powers;
  return d;
}

ToleranceConfig tol_or_default(const std::optional<ToleranceConfig>& cfg) {
  return cfg.value_or(ToleranceConfig{});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Local-unitary equivalence of rank-two bipartite mixed states";

  static py::exception<Error> error(m, "Rank2LUError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string code(to_string(e.code()));
      py::object exc = py::handle(error.ptr())(code + ": " + e.what());
      exc.attr("code") = code;
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<ToleranceConfig>(m, "ToleranceConfig")
      .def(py::init([](double tol_rank, double tol_eq, double tol_degenerate) {
             ToleranceConfig c{tol_rank, tol_eq, tol_degenerate};
             c.validate();
             return c;
           }),
           py::arg("tol_rank") = 1e-8, py::arg("tol_eq") = 1e-8, py::arg("tol_degenerate") = 1e-7)
      .def_static("from_scale", &ToleranceConfig::from_scale)
      .def_readonly("tol_rank", &ToleranceConfig::tol_rank)
      .def_readonly("tol_eq", &ToleranceConfig::tol_eq)
      .def_readonly("tol_degenerate", &ToleranceConfig::tol_degenerate);

  py::class_<BipartiteShape>(m, "BipartiteShape")
      .def(py::init(&BipartiteShape::make), py::arg("m"), py::arg("n"))
      .def_readonly("m", &BipartiteShape::m)
      .def_readonly("n", &BipartiteShape::n)
      .def("__eq__", [](const BipartiteShape& a, const BipartiteShape& b) { return a == b; })
      .def("__repr__", [](const BipartiteShape& s) {
        return "BipartiteShape(m=" + std::to_string(s.m) + ", n=" + std::to_string(s.n) + ")";
      });

  py::class_<RankTwoState>(m, "RankTwoState")
      .def(py::init([](int mm, int nn, double lambda, const ComplexMatrix& a,
                       const ComplexMatrix& b, std::optional<ToleranceConfig> cfg) {
             return RankTwoState::make(BipartiteShape::make(mm, nn), lambda, a, b,
                                       tol_or_default(cfg));
           }),
           py::arg("m"), py::arg("n"), py::arg("lambda1"), py::arg("a"), py::arg("b"),
           py::arg("cfg") = py::none())
      .def_property_readonly("shape", &RankTwoState::shape)
      .def_property_readonly("lambda1", &RankTwoState::lambda1)
      .def_property_readonly("lambda2", &RankTwoState::lambda2)
      .def_property_readonly("a", &RankTwoState::a)
      .def_property_readonly("b", &RankTwoState::b)
      .def("rho", [](const RankTwoState& s) { return assemble(s).rho(); })
      .def("to_json", [](const RankTwoState& s) { return io::state_to_json(s).dump(); });

  py::class_<LUWitness>(m, "LUWitness")
      .def_readonly("u1", &LUWitness::u1)
      .def_readonly("u2", &LUWitness::u2)
      .def_readonly("residual", &LUWitness::residual);

  py::class_<SloccWitness>(m, "SloccWitness")
      .def_readonly("p", &SloccWitness::p)
      .def_readonly("q", &SloccWitness::q)
      .def_readonly("residual", &SloccWitness::residual);

  py::class_<Verdict>(m, "Verdict")
      .def_property_readonly("decision",
                             [](const Verdict& v) { return std::string(to_string(v.decision)); })
      .def_property_readonly("method",
                             [](const Verdict& v) { return std::string(to_string(v.method)); })
      .def_readonly("diagnosis", &Verdict::diagnosis)
      .def_readonly("lu_witness", &Verdict::lu_witness)
      .def_readonly("slocc_witness", &Verdict::slocc_witness)
      .def("__repr__", [](const Verdict& v) {
        return "Verdict(" + std::string(to_string(v.decision)) + ", " + v.diagnosis + ")";
      });

  py::class_<CanonicalForm>(m, "CanonicalForm")
      .def_readonly("delta", &CanonicalForm::delta)
      .def_readonly("gamma", &CanonicalForm::gamma)
      .def_readonly("u", &CanonicalForm::u)
      .def_readonly("v", &CanonicalForm::v)
      .def_property_readonly("gamma_spectra", &gamma_spectra);

  py::class_<OracleConfig>(m, "OracleConfig")
      .def(py::init([](int restarts, int max_iters, double step_init, double accept,
                       double reject) {
             OracleConfig c{restarts, max_iters, step_init, accept, reject};
             c.validate();
             return c;
           }),
           py::arg("restarts") = 50, py::arg("max_iters") = 2000, py::arg("step_init") = 0.1,
           py::arg("accept_threshold") = 1e-6, py::arg("reject_threshold") = 1e-3)
      .def_readonly("restarts", &OracleConfig::restarts)
      .def_readonly("max_iters", &OracleConfig::max_iters);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("best_residual", &OracleResult::best_residual)
      .def_readonly("best_witness", &OracleResult::best_witness)
      .def_property_readonly("verdict",
                             [](const OracleResult& r) {
                               return r.verdict == OracleVerdict::Equivalent ? "Equivalent"
                                                                             : "NoWitnessFound";
                             })
      .def_readonly("best_restart", &OracleResult::best_restart)
      .def_readonly("restarts_run", &OracleResult::restarts_run);

  const auto cfg_arg = py::arg("cfg") = py::none();

  m.def("decompose",
        [](int mm, int nn, const ComplexMatrix& rho, std::optional<ToleranceConfig> cfg) {
          const auto c = tol_or_default(cfg);
          return decompose(DensityMatrix::make(BipartiteShape::make(mm, nn), rho, c), c);
        },
        py::arg("m"), py::arg("n"), py::arg("rho"), cfg_arg);
  m.def("check_class_condition",
        [](const ComplexMatrix& a, const ComplexMatrix& b, std::optional<ToleranceConfig> cfg) {
          return check_class_condition(a, b, tol_or_default(cfg)).holds;
        },
        py::arg("a"), py::arg("b"), cfg_arg);
  m.def("fingerprint",
        [](const RankTwoState& s, std::optional<ToleranceConfig> cfg) {
          return fingerprint_dict(fingerprint(s, tol_or_default(cfg)));
        },
        py::arg("state"), cfg_arg);
  m.def("canonicalize",
        [](const RankTwoState& s, std::optional<ToleranceConfig> cfg) {
          return canonicalize(s, tol_or_default(cfg));
        },
        py::arg("state"), cfg_arg);
  m.def("standard_form",
        [](const RankTwoState& s, std::optional<ToleranceConfig> cfg) {
          return standard_form(s, tol_or_default(cfg));
        },
        py::arg("state"), cfg_arg);
  m.def("decide_lu",
        [](const RankTwoState& a, const RankTwoState& b, const std::string& method,
           std::optional<ToleranceConfig> cfg) {
          const auto c = tol_or_default(cfg);
          if (method == "theorem") return decide_lu(a, b, c);
          if (method == "canonical") return decide_lu_canonical(a, b, c);
          throw Error(ErrorCode::InvalidArgument, "method must be 'theorem' or 'canonical'");
        },
        py::arg("s1"), py::arg("s2"), py::arg("method") = "theorem", cfg_arg);
  m.def("decide_slocc",
        [](const RankTwoState& a, const RankTwoState& b, std::optional<ToleranceConfig> cfg) {
          return decide_slocc(a, b, tol_or_default(cfg));
        },
        py::arg("s1"), py::arg("s2"), cfg_arg);
  m.def("verify_lu_witness",
        [](const RankTwoState& a, const RankTwoState& b, const ComplexMatrix& u1,
           const ComplexMatrix& u2) { return verify_lu_witness(a, b, LUWitness{u1, u2, 0.0}); },
        py::arg("s1"), py::arg("s2"), py::arg("u1"), py::arg("u2"));
  m.def("oracle_search",
        [](const RankTwoState& a, const RankTwoState& b, std::optional<OracleConfig> cfg,
           std::uint64_t seed) { return oracle_search(a, b, cfg.value_or(OracleConfig{}), Seed{seed}); },
        py::arg("s1"), py::arg("s2"), py::arg("cfg") = py::none(), py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());

  m.def("haar_unitary", [](int d, std::uint64_t seed) { return haar_unitary(d, Seed{seed}); },
        py::arg("d"), py::arg("seed"));
  m.def("random_class_state",
        [](int mm, int nn, double lambda, std::uint64_t seed,
           std::optional<std::vector<double>> delta, std::optional<ComplexMatrix> gamma) {
          return random_class_state(BipartiteShape::make(mm, nn), lambda,
                                    ClassStateSpec{std::move(delta), std::move(gamma)}, Seed{seed});
        },
        py::arg("m"), py::arg("n"), py::arg("lambda1"), py::arg("seed"),
        py::arg("delta") = py::none(), py::arg("gamma") = py::none());
  m.def("equivalent_pair",
        [](const RankTwoState& base, std::uint64_t seed) { return equivalent_pair(base, Seed{seed}); },
        py::arg("base"), py::arg("seed"));
  m.def("inequivalent_pair",
        [](int mm, int nn, double lambda, std::uint64_t seed) {
          return inequivalent_pair(BipartiteShape::make(mm, nn), lambda, Seed{seed});
        },
        py::arg("m"), py::arg("n"), py::arg("lambda1"), py::arg("seed"));
  m.def("slocc_pair",
        [](const RankTwoState& base, std::uint64_t seed, double max_condition) {
          return slocc_pair(base, Seed{seed}, max_condition);
        },
        py::arg("base"), py::arg("seed"), py::arg("max_condition") = 100.0);
  m.def("two_qubit_family", &two_qubit_family, py::arg("theta"), py::arg("gamma_angle"),
        py::arg("lambda1"));
  m.def("concurrence_2x2",
        [](const ComplexMatrix& mm) { return concurrence_2x2(mm); }, py::arg("m"));
  m.def("state_from_json",
        [](const std::string& text) {
          return io::state_from_json(io::Json::parse(text)).rank_two(ToleranceConfig{});
        },
        py::arg("text"));
}

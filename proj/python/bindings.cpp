#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lindchain/dynamics.hpp"
#include "lindchain/entanglement.hpp"
#include "lindchain/luttinger.hpp"
#include "lindchain/model.hpp"
#include "lindchain/oracle.hpp"
#include "lindchain/spectral.hpp"

namespace py = pybind11;
using namespace lindchain;

namespace {

ModelSpec make_spec(int n_cells, double lambda, double eta, const std::string& boundary,
                    const std::string& orientation) {
  ModelSpec s;
  s.n_cells = n_cells;
  s.lambda = lambda;
  s.eta = eta;
  s.boundary = boundary_from_string(boundary);
  if (orientation == "mirrored") s.orientation = JumpOrientation::mirrored;
  else if (orientation != "standard") throw DomainError("unknown jump orientation '" + orientation + "'");
  return s;
}

FillingRule filling_from_string(const std::string& s) {
  if (s == "half") return FillingRule::half_filling_real_band;
  if (s == "all") return FillingRule::all_filled;
  throw DomainError("unknown filling '" + s + "' (half | all)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact correlation-matrix dynamics of a lossy dimerized fermion chain";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<DerivedParams>(m, "DerivedParams")
      .def_readonly("lambda_", &DerivedParams::lambda)
      .def_readonly("eta", &DerivedParams::eta)
      .def_readonly("w", &DerivedParams::w)
      .def_readonly("v", &DerivedParams::v)
      .def_readonly("gamma_A", &DerivedParams::gamma_A)
      .def_readonly("gamma_B", &DerivedParams::gamma_B)
      .def_readonly("gamma", &DerivedParams::gamma)
      .def_readonly("t1", &DerivedParams::t1)
      .def_readonly("t2", &DerivedParams::t2)
      .def_readonly("t1p", &DerivedParams::t1p)
      .def_readonly("t2p", &DerivedParams::t2p)
      .def_readonly("mu", &DerivedParams::mu);
  m.def("derive_params", &derive_params, py::arg("lambda_"), py::arg("eta"));

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init(&make_spec), py::arg("n_cells") = 2, py::arg("lambda_") = 0.2, py::arg("eta") = 0.3,
           py::arg("boundary") = "periodic", py::arg("orientation") = "standard")
      .def_readonly("n_cells", &ModelSpec::n_cells)
      .def_readonly("lambda_", &ModelSpec::lambda)
      .def_readonly("eta", &ModelSpec::eta)
      .def_property_readonly("boundary", [](const ModelSpec& s) { return to_string(s.boundary); })
      .def_property_readonly("n_sites", &ModelSpec::n_sites);

  py::class_<OperatorSet>(m, "OperatorSet")
      .def_property_readonly("h", &OperatorSet::h)
      .def_property_readonly("K", &OperatorSet::K)
      .def_property_readonly("h_eff", &OperatorSet::h_eff)
      .def_property_readonly("D", &OperatorSet::D);
  m.def("build_operators", &build_operators, py::arg("spec"));

  m.def("dispersion", &dispersion_pbc, py::arg("params"), py::arg("k"));
  m.def(
      "classify_phase", [](double l, double e) { return to_string(classify_phase(l, e)); }, py::arg("lambda_"),
      py::arg("eta"));
  m.def(
      "spectrum",
      [](const ModelSpec& spec) {
        const SpectrumReport r = analyze_spectrum(spec);
        py::dict d;
        d["eigenvalues"] = r.eigenvalues;
        d["phase_class"] = to_string(r.phase_class);
        d["gap_slow"] = r.gap.slow;
        d["gap_fast"] = r.gap.fast;
        d["rapidities"] = r.rapidities;
        return d;
      },
      py::arg("spec"));
  m.def("many_body_spectrum",
        [](const std::vector<Complex>& r, std::optional<int> max_exc) { return many_body_spectrum(r, max_exc); },
        py::arg("rapidities"), py::arg("max_excitations") = py::none());

  m.def(
      "initial_correlator",
      [](const ModelSpec& spec, const std::string& filling) {
        return prepare_initial_state(build_operators(spec), filling_from_string(filling)).C;
      },
      py::arg("spec"), py::arg("filling") = "half");
  m.def(
      "evolve",
      [](const ModelSpec& spec, const CMatrix& C0, double t) {
        return propagate(CorrelationState{C0, 0.0}, build_operators(spec), t).C;
      },
      py::arg("spec"), py::arg("C0"), py::arg("t"));
  m.def(
      "block_entropy", [](const CMatrix& C, int l) { return block_entropy(CorrelationState{C, 0.0}, l); },
      py::arg("C"), py::arg("l"));
  m.def("gaussian_entropy", &gaussian_entropy, py::arg("nu"));

  m.def(
      "two_site",
      [](double gamma, double t, const std::string& initial) {
        const TwoSiteInitial init = initial == "doubly_occupied" ? TwoSiteInitial::doubly_occupied
                                                                 : TwoSiteInitial::singlet_like;
        const TwoSiteState s = two_site_rho(gamma, t, init);
        const TwoSiteMeasures e = two_site_entropies(s);
        py::dict d;
        d["rho"] = s.rho;
        d["S_AB"] = e.S_AB;
        d["S_A"] = e.S_A;
        d["S_B"] = e.S_B;
        d["mutual_information"] = e.mutual_information;
        d["concurrence"] = e.concurrence;
        d["eof"] = e.eof;
        return d;
      },
      py::arg("gamma"), py::arg("t"), py::arg("initial") = "singlet_like");

  m.def(
      "msee_short_time",
      [](double v, double g2, double gamma, const std::vector<double>& q, double t) {
        LuttingerParams p;
        p.v = v;
        p.g2 = g2;
        p.gamma = gamma;
        p.q_grid = q;
        p.validate();
        std::vector<BogoliubovPair> pairs;
        for (double x : q) pairs.push_back(bogoliubov_short_time(p, x, t));
        return msee_short_time(pairs).S;
      },
      py::arg("v"), py::arg("g2"), py::arg("gamma"), py::arg("q"), py::arg("t"));
}

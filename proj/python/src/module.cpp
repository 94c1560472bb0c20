#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cli.hpp"
#include "rwpoly/dense_oracle.hpp"
#include "rwpoly/generators.hpp"
#include "rwpoly/graph_io.hpp"
#include "rwpoly/high_degree.hpp"
#include "rwpoly/newton.hpp"
#include "rwpoly/poly_sparsifier.hpp"
#include "rwpoly/resistance.hpp"
#include "rwpoly/sddm.hpp"

namespace py = pybind11;
using namespace rwpoly;

namespace {

using Release = py::call_guard<py::gil_scoped_release>;

WeightedGraph graph_from_arrays(std::size_t n, py::array_t<std::int64_t> u,
                                py::array_t<std::int64_t> v, py::array_t<double> w) {
  auto uu = u.unchecked<1>();
  auto vv = v.unchecked<1>();
  auto ww = w.unchecked<1>();
  require(uu.shape(0) == vv.shape(0) && uu.shape(0) == ww.shape(0), ErrorKind::DimensionMismatch,
          "u, v and w must have the same length");
  std::vector<Edge> e(static_cast<std::size_t>(uu.shape(0)));
  for (py::ssize_t i = 0; i < uu.shape(0); ++i) {
    require(uu(i) >= 0 && vv(i) >= 0 && std::size_t(uu(i)) < n && std::size_t(vv(i)) < n,
            ErrorKind::InvalidArgument, "vertex index out of range");
    e[std::size_t(i)] = {Vertex(uu(i)), Vertex(vv(i)), ww(i)};
  }
  return WeightedGraph::from_edges(n, e);
}

py::tuple edge_arrays(const WeightedGraph& g) {
  const std::size_t m = g.num_edges();
  py::array_t<std::int64_t> u(m), v(m);
  py::array_t<double> w(m);
  auto uu = u.mutable_unchecked<1>();
  auto vv = v.mutable_unchecked<1>();
  auto ww = w.mutable_unchecked<1>();
  for (std::size_t i = 0; i < m; ++i) {
    const Edge& e = g.edges()[i];
    uu(py::ssize_t(i)) = e.u;
    vv(py::ssize_t(i)) = e.v;
    ww(py::ssize_t(i)) = e.w;
  }
  return py::make_tuple(u, v, w);
}

SparsifyConfig make_config(double eps, double c_s, bool second_stage, double split,
                           bool allow_disconnected, unsigned threads) {
  SparsifyConfig c;
  c.epsilon = eps;
  c.c_s = c_s;
  c.second_stage = second_stage;
  c.split = split;
  c.allow_disconnected = allow_disconnected;
  c.threads = threads;
  c.validate();
  return c;
}

// Keyword arguments shared by every sampling entry point.
#define RW_CFG_ARGS                                                                         \
  py::arg("eps") = 0.5, py::arg("seed") = 1, py::arg("c_s") = 4.0,                          \
      py::arg("second_stage") = true, py::arg("split") = 0.5,                               \
      py::arg("allow_disconnected") = false, py::arg("threads") = 0

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random-walk matrix-polynomial sparsification";

  // Messages carry the error kind, e.g. "Bipartite: graph is bipartite ...".
  // Leaked on purpose: the type must outlive interpreter shutdown.
  static PyObject* exc =
      py::exception<Error>(m, "RwpolyError", PyExc_ValueError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(exc, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<WeightedGraph>(m, "Graph")
      .def(py::init(&graph_from_arrays), py::arg("n"), py::arg("u"), py::arg("v"), py::arg("w"))
      .def_property_readonly("num_vertices", &WeightedGraph::num_vertices)
      .def_property_readonly("num_edges", &WeightedGraph::num_edges)
      .def("edges", &edge_arrays, "(u, v, w) arrays with u < v")
      .def("degrees", [](const WeightedGraph& g) { return g.degrees(); })
      .def("weight", &WeightedGraph::weight)
      .def("laplacian", [](const WeightedGraph& g) { return dense_laplacian(g); })
      .def("laplacian_matvec",
           [](const WeightedGraph& g, std::vector<double> x) { return laplacian_matvec(g, x); })
      .def("is_connected", [](const WeightedGraph& g) { return is_connected(g); })
      .def("is_bipartite", [](const WeightedGraph& g) { return is_bipartite(g); })
      .def("save", [](const WeightedGraph& g, const std::filesystem::path& p) { save_graph(p, g); })
      .def_static(
          "load",
          [](const std::filesystem::path& p, bool symmetrize) {
            return load_graph(p, LoadOptions{.symmetrize = symmetrize}).graph;
          },
          py::arg("path"), py::arg("symmetrize") = false)
      .def("__repr__", [](const WeightedGraph& g) {
        return "<Graph n=" + std::to_string(g.num_vertices()) +
               " m=" + std::to_string(g.num_edges()) + ">";
      });

  py::class_<SddmMatrix>(m, "Sddm")
      .def(py::init<std::vector<double>, WeightedGraph>(), py::arg("diag"), py::arg("offdiag"))
      .def_static("from_laplacian", &SddmMatrix::from_laplacian)
      .def_property_readonly("size", &SddmMatrix::size)
      .def("diag", [](const SddmMatrix& s) { return s.diag(); })
      .def("offdiag", [](const SddmMatrix& s) { return s.offdiag(); })
      .def("slack", &SddmMatrix::slack)
      .def("dense", [](const SddmMatrix& s) { return dense_sddm(s); })
      .def("save", [](const SddmMatrix& s, const std::filesystem::path& p) { save_sddm(p, s); })
      .def_static("load", [](const std::filesystem::path& p) { return load_sddm(p); });

  py::class_<SimilarityReport>(m, "SimilarityReport")
      .def_readonly("lambda_min", &SimilarityReport::lambda_min)
      .def_readonly("lambda_max", &SimilarityReport::lambda_max)
      .def_readonly("eps_required", &SimilarityReport::eps_required)
      .def_readonly("linear_eps", &SimilarityReport::linear_eps)
      .def_readonly("passed", &SimilarityReport::pass)
      .def_readonly("kernel_mismatch", &SimilarityReport::kernel_mismatch)
      .def_readonly("rank", &SimilarityReport::rank)
      .def("__repr__", &SimilarityReport::to_string);

  // Dense oracle.
  m.def("dense_poly",
        [](const WeightedGraph& g, std::vector<double> a) { return dense_poly(g, PolyCoeffs(a)); },
        py::arg("g"), py::arg("alpha"));
  m.def("dense_sddm_poly",
        [](const SddmMatrix& s, std::vector<double> a) { return sddm_poly_dense(s, PolyCoeffs(a)); },
        py::arg("m"), py::arg("alpha"));
  m.def("similarity_check", &similarity_check, py::arg("x"), py::arg("y"), py::arg("eps"));
  m.def("linear_similarity_check", &linear_similarity_check, py::arg("x"), py::arg("y"),
        py::arg("eps"));
  m.def("exact_er", &exact_er, py::arg("laplacian"), py::arg("u"), py::arg("v"));
  m.def("enumerate_mass",
        [](const WeightedGraph& g, std::size_t r) { return enumerate_paths(g, r).total_mass; },
        py::arg("g"), py::arg("r"));
  m.def("scalar_inequality_violations",
        [] { return scalar_inequality_suite().violations; });

  // Sparsifiers.
  m.def(
      "sparsify_poly",
      [](const WeightedGraph& g, std::vector<double> alpha, double eps, std::uint64_t seed,
         double c_s, bool ss, double split, bool ad, unsigned threads) {
        return sparsify_poly(g, PolyCoeffs(alpha), make_config(eps, c_s, ss, split, ad, threads),
                             {seed, 0});
      },
      py::arg("g"), py::arg("alpha"), RW_CFG_ARGS, Release());
  m.def(
      "sparsify_monomial",
      [](const WeightedGraph& g, std::size_t r, double eps, std::uint64_t seed, double c_s,
         bool ss, double split, bool ad, unsigned threads) {
        return sparsify_monomial(g, r, make_config(eps, c_s, ss, split, ad, threads), {seed, 0});
      },
      py::arg("g"), py::arg("r"), RW_CFG_ARGS, Release());
  m.def(
      "sparsify_high_degree",
      [](const WeightedGraph& g, std::size_t d, double eps, std::uint64_t seed, double c_s,
         bool ss, double split, bool ad, unsigned threads) {
        return sparsify_high_degree(g, d, eps, make_config(std::min(eps, 1.0), c_s, ss, split, ad, threads),
                                    {seed, 0});
      },
      py::arg("g"), py::arg("d"), RW_CFG_ARGS, Release());
  m.def(
      "schedule",
      [](std::size_t d, double eps) {
        auto s = schedule(d, eps);
        return py::make_tuple(s.to_string(), s.target_degree, s.substituted);
      },
      py::arg("d"), py::arg("eps"));
  m.def(
      "sparsify_sddm",
      [](const SddmMatrix& s, std::vector<double> alpha, double eps, std::uint64_t seed,
         double c_s, bool ss, double split, bool ad, unsigned threads) {
        return sparsify_sddm(s, PolyCoeffs(alpha), make_config(eps, c_s, ss, split, ad, threads),
                             {seed, 0});
      },
      py::arg("m"), py::arg("alpha"), RW_CFG_ARGS, Release());
  m.def("extra_diagonal",
        [](const SddmMatrix& s, std::vector<double> a) { return extra_diagonal(s, PolyCoeffs(a)); },
        py::arg("m"), py::arg("alpha"));

  // Newton applications.
  m.def(
      "qth_root_coefficients", [](std::size_t q) { return qth_root_reduce_step(q).alpha; },
      py::arg("q"));
  py::class_<FactorChain>(m, "FactorChain")
      .def_property_readonly("length", &FactorChain::length)
      .def_property_readonly("eps_bound", &FactorChain::eps_bound)
      .def("apply", [](const FactorChain& c, std::vector<double> x) { return c.apply(x); })
      .def("apply_transpose",
           [](const FactorChain& c, std::vector<double> x) { return c.apply_transpose(x); })
      .def("dense", &FactorChain::dense);
  m.def(
      "inv_sqrt_chain",
      [](const SddmMatrix& s, double eps_total, std::uint64_t seed, double c_s, unsigned threads) {
        SparsifyConfig c;
        c.c_s = c_s;
        c.threads = threads;
        return inv_sqrt_chain(s, eps_total, c, {seed, 0});
      },
      py::arg("m"), py::arg("eps_total") = 0.2, py::arg("seed") = 1, py::arg("c_s") = 4.0,
      py::arg("threads") = 0, Release());

  // Resistance oracle.
  py::class_<ErOracle>(m, "ResistanceOracle")
      .def(py::init([](const WeightedGraph& g, std::vector<double> alpha, double eps, double delta,
                       std::uint64_t seed, bool dense) {
             SparsifyConfig c;
             ErOptions o;
             o.delta = delta;
             if (dense) o.method = ErMethod::DenseExact;
             return ErOracle::build(g, PolyCoeffs(alpha), eps, c, {seed, 0}, o);
           }),
           py::arg("g"), py::arg("alpha") = std::vector<double>{1.0}, py::arg("eps") = 0.3,
           py::arg("delta") = 0.2, py::arg("seed") = 1, py::arg("dense") = false)
      .def("query", &ErOracle::query, py::arg("u"), py::arg("v"))
      .def_property_readonly("sparsifier", &ErOracle::sparsifier)
      .def_property_readonly("sketch_dimension", &ErOracle::sketch_dimension);

  // Generators.
  auto g = m.def_submodule("gen", "Test graph generators");
  g.def("path", [](std::size_t n) { return gen::path(n); });
  g.def("cycle", [](std::size_t n) { return gen::cycle(n); });
  g.def("complete", [](std::size_t n) { return gen::complete(n); });
  g.def("barbell", [](std::size_t k) { return gen::barbell(k); });
  g.def(
      "erdos_renyi",
      [](std::size_t n, double p, double lo, double hi, std::uint64_t seed) {
        return gen::erdos_renyi(n, p, {lo, hi}, {seed, 0});
      },
      py::arg("n"), py::arg("p"), py::arg("lo") = 1.0, py::arg("hi") = 1.0, py::arg("seed") = 1);
  g.def(
      "sddm_with_slack",
      [](const WeightedGraph& graph, double lo, double hi, std::uint64_t seed) {
        return gen::sddm_with_slack(graph, lo, hi, {seed, 0});
      },
      py::arg("g"), py::arg("lo"), py::arg("hi"), py::arg("seed") = 1);

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release nogil;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run one command line; returns (exit_code, stdout, stderr).");
}

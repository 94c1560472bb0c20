#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "rwpoly/dense_oracle.hpp"
#include "rwpoly/graph_io.hpp"
#include "rwpoly/high_degree.hpp"
#include "rwpoly/newton.hpp"
#include "rwpoly/poly_sparsifier.hpp"
#include "rwpoly/resistance.hpp"
#include "rwpoly/sddm.hpp"

namespace rwpoly::cli {

namespace fs = std::filesystem;

namespace {

struct Global {
  double eps = 0.5;
  std::uint64_t seed = 1;
  double cs = 4.0;
  unsigned threads = 0;
  double split = 0.5;
  bool no_second_stage = false;
  bool allow_disconnected = false;
  bool symmetrize = false;
  bool remap_ids = false;
  std::string manifest;
};

SparsifyConfig make_config(const Global& g) {
  SparsifyConfig c;
  c.epsilon = g.eps;
  c.c_s = g.cs;
  c.threads = g.threads;
  c.split = g.split;
  c.second_stage = !g.no_second_stage;
  c.allow_disconnected = g.allow_disconnected;
  c.validate();
  return c;
}

RngStream stream(const Global& g) { return RngStream{g.seed, 0}; }

/// Flat key=value run record.
class Manifest {
 public:
  void set(const std::string& k, const std::string& v) {
    for (auto& kv : kv_)
      if (kv.first == k) {
        kv.second = v;
        return;
      }
    kv_.emplace_back(k, v);
  }
  template <class T>
  void set(const std::string& k, const T& v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    set(k, os.str());
  }
  void write(const fs::path& p) const {
    std::ofstream f(p);
    require(static_cast<bool>(f), ErrorKind::Io, "cannot write manifest " + p.string());
    for (const auto& [k, v] : kv_) f << k << '=' << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

std::map<std::string, std::string> read_manifest(const fs::path& p) {
  std::ifstream f(p);
  require(static_cast<bool>(f), ErrorKind::Io, "cannot read manifest " + p.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(f, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::vector<double> parse_alpha(const std::string& s) {
  std::vector<double> a;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    require(!tok.empty(), ErrorKind::InvalidArgument, "empty entry in --alpha");
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "bad number in --alpha: " + tok);
    }
    require(used == tok.size(), ErrorKind::InvalidArgument, "bad number in --alpha: " + tok);
    a.push_back(v);
  }
  return a;
}

std::string join_alpha(const std::vector<double>& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + format_double(a[i]);
  return s;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return kUsage;
    case ErrorKind::Disconnected:
    case ErrorKind::Bipartite:
    case ErrorKind::Refused: return kRefused;
    default: return kValidation;
  }
}

LoadedGraph load_input(const Global& g, const std::string& path) {
  LoadOptions o;
  o.symmetrize = g.symmetrize;
  o.remap_ids = g.remap_ids;
  return load_graph(path, o);
}

void common_manifest(Manifest& m, const Global& g, const std::string& sub,
                     const std::vector<std::string>& args) {
  m.set("subcommand", sub);
  m.set("eps", format_double(g.eps));
  m.set("seed", g.seed);
  m.set("cs", format_double(g.cs));
  m.set("split", format_double(g.split));
  m.set("second_stage", g.no_second_stage ? "false" : "true");
  m.set("threads", g.threads);
  for (std::size_t i = 0; i < args.size(); ++i) m.set("arg." + std::to_string(i), args[i]);
}

void finish_manifest(Manifest& m, const Global& g, const std::string& output,
                     std::chrono::steady_clock::time_point t0) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.set("wall_time_s", secs);
  fs::path where = g.manifest.empty() ? fs::path(output + ".manifest") : fs::path(g.manifest);
  if (g.manifest.empty() && output.empty()) return;
  m.write(where);
}

void stats_to_manifest(Manifest& m, const SparsifyStats& st) {
  m.set("samples", st.samples);
  m.set("stage_one_edges", st.stage_one_edges);
  m.set("eps1", format_double(st.eps1));
  m.set("eps2", format_double(st.eps2));
  m.set("second_stage_ran", st.second_stage_ran ? "true" : "false");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"Sparsifiers of random-walk matrix polynomials", "rwpoly"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--eps", g.eps, "Target spectral error (0, 1]");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--cs", g.cs, "Oversampling constant c_s");
  app.add_option("--threads", g.threads, "Sampling threads (0 = all cores)");
  app.add_option("--split", g.split, "Fraction of eps for path sampling");
  app.add_flag("--no-second-stage", g.no_second_stage, "Skip resistance resparsification");
  app.add_flag("--allow-disconnected", g.allow_disconnected, "Process components separately");
  app.add_flag("--symmetrize", g.symmetrize, "Complete one-sided Matrix Market entries");
  app.add_flag("--remap-ids", g.remap_ids, "Map edge-list labels to 0..n-1");
  app.add_option("--manifest", g.manifest, "Manifest path (default: <output>.manifest)");

  std::string input, output, alpha_s, a_path, b_path, queries, chain_prefix;
  std::size_t r = 1, d = 0, q = 1, max_iters = 30;
  double delta = 0.2;
  bool verify = false, sddm_mode = false, linear = false, dense_steps = false;

  auto* sp = app.add_subcommand("sparsify-poly", "Sparsify L_alpha(G)");
  sp->add_option("-i,--input", input)->required();
  sp->add_option("--alpha", alpha_s)->required();
  sp->add_option("-o,--output", output)->required();
  sp->add_flag("--verify", verify, "Check against the dense oracle");

  auto* sm = app.add_subcommand("sparsify-monomial", "Sparsify L_{G_r}");
  sm->add_option("-i,--input", input)->required();
  sm->add_option("-r", r)->required();
  sm->add_option("-o,--output", output)->required();
  sm->add_flag("--verify", verify);

  auto* hd = app.add_subcommand("high-degree", "Sparsify L_{G_d} for even d by composition");
  hd->add_option("-i,--input", input)->required();
  hd->add_option("--d", d)->required();
  hd->add_option("-o,--output", output)->required();
  hd->add_flag("--verify", verify);

  auto* ss = app.add_subcommand("sparsify-sddm", "Sparsify an SDDM matrix polynomial");
  ss->add_option("-i,--input", input)->required();
  ss->add_option("--alpha", alpha_s)->required();
  ss->add_option("-o,--output", output)->required();
  ss->add_flag("--verify", verify);

  auto* is = app.add_subcommand("inv-sqrt", "Inverse square-root factor chain of an SDDM matrix");
  is->add_option("-i,--input", input)->required();
  is->add_option("-o,--output", output, "Output prefix")->required();
  is->add_option("--max-iters", max_iters);
  is->add_flag("--dense-steps", dense_steps, "Exact polynomial steps (small n)");
  is->add_flag("--verify", verify);

  auto* qr = app.add_subcommand("qth-root", "Sparsify the middle polynomial of the q-th root step");
  qr->add_option("-i,--input", input)->required();
  qr->add_option("--q", q)->required();
  qr->add_option("-o,--output", output)->required();
  qr->add_flag("--verify", verify);

  auto* rs = app.add_subcommand("resistance", "Effective-resistance queries on G_alpha");
  rs->add_option("-i,--input", input)->required();
  rs->add_option("--alpha", alpha_s)->default_str("1");
  rs->add_option("--delta", delta, "Sketch tolerance");
  rs->add_option("--queries", queries, "File of \"u v\" lines (default: stdin)");
  rs->add_option("-o,--output", output, "Answer file (default: stdout)");

  auto* vf = app.add_subcommand("verify", "Compare a sparsifier with the dense oracle");
  vf->add_option("-a", a_path, "Candidate (graph, or SDDM with --sddm)");
  vf->add_option("-b", b_path, "Original input")->required();
  vf->add_option("--alpha", alpha_s);
  vf->add_option("--d", d, "Monomial degree instead of --alpha");
  vf->add_option("--chain", chain_prefix, "Inverse square-root chain prefix");
  vf->add_flag("--sddm", sddm_mode, "Inputs are SDDM matrices");
  vf->add_flag("--linear", linear, "Use the (1 +- eps) form");
  vf->add_option("-o,--output", output, "Also write the report here");

  auto* en = app.add_subcommand("enumerate", "List every length-r walk with w(p) and Z(p)");
  en->add_option("-i,--input", input)->required();
  en->add_option("-r", r)->required();
  en->add_option("-o,--output", output);

  std::string replay_path;
  auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rp->add_option("manifest", replay_path)->required();
  rp->add_option("-o,--output", output, "Override the output path");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  Manifest man;
  try {
    if (*rp) {
      auto kv = read_manifest(replay_path);
      std::vector<std::string> again;
      for (std::size_t i = 0;; ++i) {
        auto it = kv.find("arg." + std::to_string(i));
        if (it == kv.end()) break;
        again.push_back(it->second);
      }
      require(!again.empty(), ErrorKind::Parse, "manifest has no recorded arguments");
      if (!output.empty()) {
        for (std::size_t i = 0; i + 1 < again.size(); ++i)
          if (again[i] == "-o" || again[i] == "--output") again[i + 1] = output;
        for (std::size_t i = 0; i + 1 < again.size(); ++i)
          if (again[i] == "--manifest") again[i + 1] = output + ".manifest";
      }
      return run(again, out, err);
    }

    const SparsifyConfig cfg = make_config(g);
    const RngStream rng = stream(g);

    if (*sp || *sm || *hd) {
      const std::string sub = *sp ? "sparsify-poly" : *sm ? "sparsify-monomial" : "high-degree";
      common_manifest(man, g, sub, args);
      LoadedGraph in = load_input(g, input);
      man.set("input", input);
      WeightedGraph h;
      PolyCoeffs alpha = PolyCoeffs::monomial(1);
      if (*sp) {
        alpha = PolyCoeffs(parse_alpha(alpha_s));
        SparsifyStats st;
        h = sparsify_poly(in.graph, alpha, cfg, rng, &st);
        man.set("alpha", join_alpha(alpha.values()));
        stats_to_manifest(man, st);
      } else if (*sm) {
        require(r >= 1, ErrorKind::InvalidArgument, "-r must be >= 1");
        alpha = PolyCoeffs::monomial(r);
        SparsifyStats st;
        h = sparsify_monomial(in.graph, r, cfg, rng, &st);
        man.set("r", r);
        stats_to_manifest(man, st);
      } else {
        alpha = PolyCoeffs::monomial(std::max<std::size_t>(d, 1));
        HighDegreeStats st;
        h = sparsify_high_degree(in.graph, d, g.eps, cfg, rng, &st);
        man.set("d", d);
        man.set("schedule", st.schedule.to_string());
        man.set("accumulated_eps", format_double(st.accumulated_eps));
        man.set("rescale_events", st.rescale_events);
      }
      save_graph(output, h);
      if (g.remap_ids) save_id_map(output + ".ids", in.original_ids);
      man.set("output", output);
      man.set("output_nnz", h.num_edges());
      out << sub << ": n=" << h.num_vertices() << " m_in=" << in.graph.num_edges()
          << " m_out=" << h.num_edges() << " -> " << output << "\n";
      int code = kOk;
      if (verify) {
        const auto rep = similarity_check(dense_laplacian(h), dense_poly(in.graph, alpha), g.eps);
        man.set("similarity", rep.to_string());
        out << rep.to_string() << "\n";
        if (!rep.pass) code = kVerifyFailed;
      }
      finish_manifest(man, g, output, t0);
      return code;
    }

    if (*ss || *qr) {
      const std::string sub = *ss ? "sparsify-sddm" : "qth-root";
      common_manifest(man, g, sub, args);
      const SddmMatrix m = load_sddm(input);
      man.set("input", input);
      PolyCoeffs alpha = PolyCoeffs::monomial(1);
      if (*ss) {
        alpha = PolyCoeffs(parse_alpha(alpha_s));
      } else {
        const QthRootReduction red = qth_root_reduce_step(q);
        alpha = red.coeffs();
        man.set("q", q);
        out << "middle polynomial alpha = " << join_alpha(alpha.values()) << "\n";
      }
      man.set("alpha", join_alpha(alpha.values()));
      const SddmMatrix res = sparsify_sddm(m, alpha, cfg, rng);
      save_sddm(output, res);
      man.set("output", output);
      man.set("output_nnz", res.offdiag().num_edges());
      out << sub << ": n=" << res.size() << " offdiag_in=" << m.offdiag().num_edges()
          << " offdiag_out=" << res.offdiag().num_edges() << " -> " << output << "\n";
      int code = kOk;
      if (verify) {
        const auto rep = linear_similarity_check(dense_sddm(res), dense_poly(m, alpha), g.eps);
        man.set("similarity", rep.to_string());
        out << rep.to_string() << "\n";
        if (!rep.pass) code = kVerifyFailed;
      }
      finish_manifest(man, g, output, t0);
      return code;
    }

    if (*is) {
      common_manifest(man, g, "inv-sqrt", args);
      const SddmMatrix m = load_sddm(input);
      man.set("input", input);
      NewtonOptions no;
      no.max_iters = max_iters;
      no.dense_steps = dense_steps;
      require(g.eps < 1, ErrorKind::InvalidArgument, "inv-sqrt needs --eps < 1");
      const FactorChain chain = inv_sqrt_chain(m, g.eps, cfg, rng, no);
      Manifest cm;
      cm.set("steps", chain.length());
      cm.set("n", chain.size());
      cm.set("eps_bound", format_double(chain.eps_bound()));
      cm.set("terminal_rho", format_double(chain.terminal_rho()));
      for (std::size_t j = 0; j < chain.length(); ++j) {
        const std::string f = output + ".step" + std::to_string(j) + ".mtx";
        save_sddm(f, chain.factors()[j]);
        cm.set("step." + std::to_string(j), fs::path(f).filename().string());
      }
      const std::string term = output + ".terminal.mtx";
      save_sddm(term, chain.terminal());
      cm.set("terminal", fs::path(term).filename().string());
      cm.write(output + ".chain");
      man.set("output", output);
      man.set("steps", chain.length());
      man.set("eps_bound", format_double(chain.eps_bound()));
      out << "inv-sqrt: steps=" << chain.length() << " terminal_rho=" << chain.terminal_rho()
          << " eps_bound=" << chain.eps_bound() << " -> " << output << ".chain\n";
      int code = kOk;
      if (verify) {
        const DenseMatrix C = chain.dense();
        const DenseMatrix P = C * dense_sddm(m) * C.transpose();
        const auto rep = linear_similarity_check(P, DenseMatrix::Identity(P.rows(), P.cols()), g.eps);
        man.set("similarity", rep.to_string());
        out << rep.to_string() << "\n";
        if (!rep.pass) code = kVerifyFailed;
      }
      finish_manifest(man, g, output + ".chain", t0);
      return code;
    }

    if (*rs) {
      common_manifest(man, g, "resistance", args);
      LoadedGraph in = load_input(g, input);
      const PolyCoeffs alpha(alpha_s.empty() ? std::vector<double>{1.0} : parse_alpha(alpha_s));
      ErOptions eo;
      eo.delta = delta;
      eo.threads = g.threads;
      const ErOracle oracle = ErOracle::build(in.graph, alpha, g.eps, cfg, rng, eo);
      std::ifstream qf;
      if (!queries.empty()) {
        qf.open(queries);
        require(static_cast<bool>(qf), ErrorKind::Io, "cannot open " + queries);
      }
      std::istream& qin = queries.empty() ? std::cin : static_cast<std::istream&>(qf);
      std::ofstream of;
      if (!output.empty()) {
        of.open(output);
        require(static_cast<bool>(of), ErrorKind::Io, "cannot write " + output);
      }
      std::ostream& ans = output.empty() ? out : static_cast<std::ostream&>(of);
      std::string line;
      std::size_t lineno = 0, answered = 0;
      while (std::getline(qin, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long u = -1, v = -1;
        if (!(ls >> u >> v) || u < 0 || v < 0)
          throw ParseError(ErrorKind::Parse, lineno, "expected \"u v\"");
        ans << format_double(oracle.query(static_cast<Vertex>(u), static_cast<Vertex>(v))) << "\n";
        ans.flush();
        ++answered;
      }
      man.set("input", input);
      man.set("alpha", join_alpha(alpha.values()));
      man.set("delta", format_double(delta));
      man.set("output", output);
      man.set("output_nnz", oracle.sparsifier().num_edges());
      man.set("queries_answered", answered);
      finish_manifest(man, g, output, t0);
      return kOk;
    }

    if (*vf) {
      common_manifest(man, g, "verify", args);
      SimilarityReport rep;
      if (!chain_prefix.empty()) {
        const auto kv = read_manifest(chain_prefix + ".chain");
        const fs::path dir = fs::path(chain_prefix).parent_path();
        std::vector<SddmMatrix> factors;
        const std::size_t steps = std::stoul(kv.at("steps"));
        for (std::size_t j = 0; j < steps; ++j)
          factors.push_back(load_sddm(dir / kv.at("step." + std::to_string(j))));
        const FactorChain chain(std::move(factors), load_sddm(dir / kv.at("terminal")), 0, 0);
        const SddmMatrix m = load_sddm(b_path);
        const DenseMatrix C = chain.dense();
        const DenseMatrix P = C * dense_sddm(m) * C.transpose();
        rep = linear_similarity_check(P, DenseMatrix::Identity(P.rows(), P.cols()), g.eps);
      } else {
        require(!a_path.empty(), ErrorKind::InvalidArgument, "verify needs -a or --chain");
        require(alpha_s.empty() != (d == 0), ErrorKind::InvalidArgument,
                "give exactly one of --alpha and --d");
        const PolyCoeffs alpha = d ? PolyCoeffs::monomial(d) : PolyCoeffs(parse_alpha(alpha_s));
        if (sddm_mode) {
          const DenseMatrix X = dense_sddm(load_sddm(a_path));
          const DenseMatrix Y = dense_poly(load_sddm(b_path), alpha);
          rep = linear ? linear_similarity_check(X, Y, g.eps) : similarity_check(X, Y, g.eps);
        } else {
          const DenseMatrix X = dense_laplacian(load_input(g, a_path).graph);
          const DenseMatrix Y = dense_poly(load_input(g, b_path).graph, alpha);
          rep = linear ? linear_similarity_check(X, Y, g.eps) : similarity_check(X, Y, g.eps);
        }
      }
      out << rep.to_string() << "\n";
      if (!output.empty()) {
        std::ofstream f(output);
        require(static_cast<bool>(f), ErrorKind::Io, "cannot write " + output);
        f << rep.to_string() << "\n";
      }
      man.set("similarity", rep.to_string());
      man.set("output", output);
      finish_manifest(man, g, output, t0);
      return rep.pass ? kOk : kVerifyFailed;
    }

    if (*en) {
      common_manifest(man, g, "enumerate", args);
      LoadedGraph in = load_input(g, input);
      const Enumeration e = enumerate_paths(in.graph, r);
      std::ofstream of;
      if (!output.empty()) {
        of.open(output);
        require(static_cast<bool>(of), ErrorKind::Io, "cannot write " + output);
      }
      std::ostream& o = output.empty() ? out : static_cast<std::ostream&>(of);
      o << "# walks " << e.walks.size() << " total_mass " << format_double(e.total_mass)
        << " expected " << format_double(2.0 * static_cast<double>(r * in.graph.num_edges()))
        << "\n";
      for (const auto& w : e.walks) {
        for (Vertex v : w.vertices) o << v << ' ';
        o << format_double(w.weight) << ' ' << format_double(w.resistance_bound) << ' '
          << format_double(w.weight * w.resistance_bound) << "\n";
      }
      man.set("input", input);
      man.set("r", r);
      man.set("output", output);
      man.set("output_nnz", e.walks.size());
      finish_manifest(man, g, output, t0);
      return kOk;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace rwpoly::cli

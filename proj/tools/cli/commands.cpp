#include "commands.hpp"

#include <cmath>

#include "qosc/algebra.hpp"
#include "qosc/families.hpp"
#include "qosc/representation.hpp"
#include "qosc/tridiagonalization.hpp"

#ifndef QOSC_VERSION
#define QOSC_VERSION "0.0.0"
#endif

namespace qosc::cli {

namespace {

Error bad(const std::string& msg) { return Error(ErrorKind::invalid_parameter, msg); }

std::size_t to_size(int v, const char* key) {
  if (v < 1) throw bad(std::string(key) + " must be positive");
  return static_cast<std::size_t>(v);
}

TolerancePolicy read_policy(ParamSet& ps) {
  TolerancePolicy pol;
  pol.abs_tol = ps.number("abs_tol", pol.abs_tol);
  pol.rel_tol = ps.number("rel_tol", pol.rel_tol);
  pol.validate();
  return pol;
}

GeneralParams read_general(ParamSet& ps) {
  GeneralParams g;
  g.q = ps.number("q");
  g.xi0 = ps.number("xi0");
  g.zeta0 = ps.number("zeta0");
  g.s1 = ps.number("s1");
  g.s2 = ps.number("s2");
  return g;
}

StructuredParams read_structured(ParamSet& ps) {
  StructuredParams s;
  s.q = ps.number("q");
  s.c1 = ps.number("c1");
  s.c2 = ps.number("c2");
  s.c3 = ps.number("c3");
  return s;
}

AWParams read_aw(ParamSet& ps) {
  AWParams a;
  a.q = ps.number("q");
  a.a1 = ps.number("a1");
  a.a2 = ps.number("a2");
  a.a3 = ps.number("a3");
  a.a4 = ps.number("a4");
  return a;
}

QHahnParams read_q_hahn(ParamSet& ps) {
  QHahnParams h;
  h.q = ps.number("q");
  h.c1 = ps.number("c1");
  h.c2 = ps.number("c2");
  h.N = ps.integer("N");
  return h;
}

QParaParams read_q_para(ParamSet& ps) {
  QParaParams k;
  k.q = ps.number("q");
  k.c3 = ps.number("c3");
  k.N = ps.integer("N");
  return k;
}

void add_band_table(RunReport& r, const std::string& name, const BandMatrix& m) {
  Table& t = r.add_table(name);
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    t.rows.push_back(Json{{"n", i},
                          {"sub", i > 0 ? m(i, i - 1) : 0.0},
                          {"diag", m(i, i)},
                          {"super", i + 1 < n ? m(i, i + 1) : 0.0}});
  }
}

void add_blocks_table(RunReport& r, const Decomposition& d) {
  Table& t = r.add_table("blocks");
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    const auto& s = d.blocks[b].spectrum;
    t.rows.push_back(Json{{"block", b}, {"size", d.blocks[b].size}, {"first", s.front()}, {"last", s.back()}});
  }
}

void add_decomposition_check(RunReport& r, const Decomposition& d) {
  r.checks.push_back({"invariance", d.off_block_mass, d.tolerance, d.off_block_mass <= d.tolerance});
}

// A finite pair (A, B) for the qosc and decompose paths.
struct Pair {
  BandMatrix a;
  BandMatrix b;
};

Pair read_pair(ParamSet& ps, const std::string& kind) {
  if (kind == "canonical") {
    const double a = ps.number("a", 1.0);
    const double q = ps.number("q");
    const auto c = canonical_pair(a, q, to_size(ps.integer("size", 12), "size"));
    return {c.A, c.B};
  }
  if (kind == "general") {
    const GeneralParams g = read_general(ps);
    auto rep = build_general(g, to_size(ps.integer("size", 12), "size"));
    return {std::move(rep.A), std::move(rep.B)};
  }
  if (kind == "structured") {
    const StructuredParams s = read_structured(ps);
    const std::size_t size = to_size(ps.integer("size", 12), "size");
    return {big_q_jacobi(s, size).jacobi_matrix(), build_B_from_A(s, size)};
  }
  if (kind == "q-hahn") {
    const QHahnParams h = read_q_hahn(ps);
    const MonicRecurrence rec = q_hahn(h);
    return {rec.jacobi_matrix(), build_B_from_A(structured_params(h), rec)};
  }
  if (kind == "q-para") {
    const QParaParams k = read_q_para(ps);
    const MonicRecurrence rec = q_para_krawtchouk(k);
    return {rec.jacobi_matrix(), build_B_from_A(structured_params(k), rec)};
  }
  throw bad("unknown pair '" + kind + "' (canonical, general, structured, q-hahn, q-para)");
}

MonicRecurrence read_family(ParamSet& ps, const std::string& family, int n_max) {
  if (family == "big-q-jacobi") return big_q_jacobi(read_structured(ps), to_size(n_max, "n_max"));
  if (family == "askey-wilson") return askey_wilson(read_aw(ps), to_size(n_max, "n_max"));
  if (family == "q-hahn") return q_hahn(read_q_hahn(ps));
  if (family == "q-para") return q_para_krawtchouk(read_q_para(ps));
  throw bad("unknown family '" + family + "' (big-q-jacobi, askey-wilson, q-hahn, q-para)");
}

void cmd_build(RunReport& r, ParamSet& ps) {
  const std::string kind = ps.text("parameterization", "general");
  if (kind == "general") {
    const GeneralParams g = read_general(ps);
    const std::size_t size = to_size(ps.integer("size", 12), "size");
    const TolerancePolicy pol = read_policy(ps);
    const GeneralRepresentation rep = build_general(g, size);
    const ResidualReport comm = q_commutator_residual(rep.A, rep.B, g.q, BandMatrix::identity(size), pol);
    r.add_check("q-commutator", comm);
    const double xi = xi_residuals(rep.A, rep.B, g.q).max_abs();
    r.checks.push_back({"xi-residuals", xi, comm.tolerance, xi <= comm.tolerance});
    add_band_table(r, "A", rep.A);
    add_band_table(r, "B", rep.B);
    Table& t = r.add_table("trace");
    const auto& tr = rep.trace;
    for (std::size_t n = 0; n < size; ++n) {
      t.rows.push_back(Json{{"n", n},      {"xi", tr.xi[n]},   {"zeta", tr.zeta[n]}, {"z", tr.z[n]},
                            {"gamma", tr.gamma[n]}, {"y", tr.y[n]}, {"K", tr.K[n]},   {"b", tr.b[n]},
                            {"eta", tr.eta[n]}, {"u", tr.u[n]}, {"s0", tr.s0}});
    }
    return;
  }
  if (kind != "structured") throw bad("unknown parameterization '" + kind + "' (general, structured)");
  const StructuredParams s = read_structured(ps);
  const std::size_t size = to_size(ps.integer("size", 12), "size");
  const TolerancePolicy pol = read_policy(ps);
  const MonicRecurrence rec = big_q_jacobi(s, size);
  const BandMatrix a = rec.jacobi_matrix();
  const BandMatrix b = build_B_from_A(s, size);
  r.add_check("q-commutator", q_commutator_residual(a, b, s.q, BandMatrix::identity(size), pol));
  const Classification c = classify(a, b, s.q, pol);
  r.add_check("classify-fit", c.fit);
  add_band_table(r, "A", a);
  add_band_table(r, "B", b);
  Table& t = r.add_table("recurrence");
  for (std::size_t n = 0; n < size; ++n) {
    const int k = static_cast<int>(n);
    t.rows.push_back(Json{{"n", n},
                          {"D", big_q_jacobi_D(s.q, s.c1, s.c2, s.c3, k)},
                          {"C", big_q_jacobi_C(s.q, s.c1, s.c2, s.c3, k)},
                          {"b", rec.b[n]},
                          {"u", n > 0 ? rec.u[n - 1] : 0.0}});
  }
  const auto rk = tridiagonalization_constants(s);
  const auto k = big_qjacobi_constants(s);
  r.add_table("constants").rows.push_back(Json{{"r0", rk.r0},
                                               {"r1", rk.r1},
                                               {"gamma1", k.gamma1},
                                               {"delta1", k.delta1},
                                               {"gamma2", k.gamma2},
                                               {"delta2", k.delta2},
                                               {"xi0", c.params.xi0},
                                               {"zeta0", c.params.zeta0},
                                               {"s1", c.params.s1},
                                               {"s2", c.params.s2}});
}

void suite_qosc(RunReport& r, ParamSet& ps) {
  const std::string kind = ps.text("pair", "canonical");
  const Pair p = read_pair(ps, kind);
  const double q = ps.number("q");
  const TolerancePolicy pol = read_policy(ps);
  r.add_check("q-commutator", relation_residual(p.a, p.b, q, {}, 1.0, pol));
  if (kind == "canonical") {
    r.add_check("q-commutator-ulp", q_commutator_ulp(p.a, p.b, q, BandMatrix::identity(p.a.size())));
  }
}

void suite_bigqjacobi(RunReport& r, ParamSet& ps) {
  const StructuredParams s = read_structured(ps);
  const std::size_t size = to_size(ps.integer("size", 14), "size");
  const TolerancePolicy pol = read_policy(ps);
  const auto rep = big_qjacobi_algebra_residuals(s, size, pol);
  r.add_check("oscillator", rep.oscillator);
  r.add_check("bz", rep.bz);
  r.add_check("za", rep.za);
  const auto& k = rep.constants;
  r.add_table("constants").rows.push_back(
      Json{{"gamma1", k.gamma1}, {"delta1", k.delta1}, {"gamma2", k.gamma2}, {"delta2", k.delta2}});
}

void suite_aw_algebra(RunReport& r, ParamSet& ps) {
  const StructuredParams s = read_structured(ps);
  const double mu = ps.number("mu");
  const std::size_t size = to_size(ps.integer("size", 14), "size");
  const std::string v = ps.text("variant", "ML");
  if (v != "ML" && v != "LM") throw bad("variant must be ML or LM");
  const TolerancePolicy pol = read_policy(ps);
  const auto rep = aw_algebra_residuals(s, mu, size, pol, v == "ML" ? AWVariant::ML : AWVariant::LM);
  r.add_check("m-definition", rep.m_definition);
  r.add_check("zm", rep.zm);
  r.add_check(v == "ML" ? "ml" : "lm", rep.second());
  Table& t = r.add_table("orderings");
  for (const auto& [name, res] : {std::pair{"ML", &rep.ml}, std::pair{"LM", &rep.lm}}) {
    t.rows.push_back(Json{{"ordering", name}, {"max_abs", res->max_abs}, {"tolerance", res->tolerance}, {"pass", res->pass}});
  }
  r.add_table("resolution").rows.push_back(Json{{"passing", rep.passing ? to_string(*rep.passing) : "none"}});
  const auto& k = rep.constants;
  r.add_table("constants").rows.push_back(Json{
      {"omega0", k.omega0}, {"sigma1", k.sigma1}, {"omega1", k.omega1}, {"sigma2", k.sigma2}, {"omega2", k.omega2}});
}

void suite_aw_match(RunReport& r, ParamSet& ps) {
  const AWParams a = read_aw(ps);
  const std::size_t size = to_size(ps.integer("size", 21), "size");
  const TolerancePolicy pol = read_policy(ps);
  const AWMatchReport rep = aw_match(a, size, pol);
  r.add_check("b", rep.b);
  r.add_check("u", rep.u);
  Table& t = r.add_table("coefficients");
  for (std::size_t n = 0; n < size; ++n) {
    t.rows.push_back(Json{{"n", n},
                          {"b_reduced", rep.reduced.b[n]},
                          {"b_askey_wilson", rep.askey_wilson.b[n]},
                          {"u_reduced", n > 0 ? rep.reduced.u[n - 1] : 0.0},
                          {"u_askey_wilson", n > 0 ? rep.askey_wilson.u[n - 1] : 0.0}});
  }
}

void suite_qdiff(RunReport& r, ParamSet& ps) {
  const StructuredParams s = read_structured(ps);
  const int k_max = ps.integer("k_max", 10);
  const int n_max = ps.integer("n_max", 8);
  const TolerancePolicy pol = read_policy(ps);
  r.add_check("oscillator", qdiff_oscillator_check(s, k_max, pol));
  r.add_check("z-eigen", qdiff_Z_eigen_check(s, n_max, pol));
}

void run_suite(RunReport& r, ParamSet& ps, const std::string& suite) {
  if (suite == "qosc") return suite_qosc(r, ps);
  if (suite == "bigqjacobi-algebra") return suite_bigqjacobi(r, ps);
  if (suite == "aw-algebra") return suite_aw_algebra(r, ps);
  if (suite == "aw-match") return suite_aw_match(r, ps);
  if (suite == "qdiff") return suite_qdiff(r, ps);
  throw bad("unknown suite '" + suite + "' (qosc, bigqjacobi-algebra, aw-algebra, aw-match, qdiff)");
}

void cmd_spectrum(RunReport& r, ParamSet& ps) {
  const std::string family = ps.text("family", "q-hahn");
  if (family != "q-hahn" && family != "q-para") throw bad("spectrum supports the q-hahn and q-para families");
  const MonicRecurrence rec = read_family(ps, family, 0);
  const bool want_blocks = ps.flag("decompose", false);
  const TolerancePolicy pol = read_policy(ps);
  const SpectrumLattice lat = claimed_spectrum(rec);
  r.add_check("spectrum", verify_spectrum(rec, lat, pol));
  const auto eig = eigenvalues(rec.jacobi_matrix(), pol);
  const auto pairing = pair_spectrum(eig, lat.points);
  const auto scaled = scaled_char_poly_residuals(rec, lat.points);
  Table& t = r.add_table("eigenvalues");
  for (std::size_t s = 0; s < lat.points.size(); ++s) {
    const double e = eig[pairing[s]];
    t.rows.push_back(Json{{"s", s},
                          {"lattice", lat.points[s]},
                          {"eigenvalue", e},
                          {"distance", std::abs(e - lat.points[s])},
                          {"charpoly_scaled", scaled[s]}});
  }
  if (want_blocks) {
    double q = 0.0;
    BandMatrix b;
    if (const auto* h = std::get_if<QHahnParams>(&rec.params)) {
      q = h->q;
      b = build_B_from_A(structured_params(*h), rec);
    } else {
      const auto& k = std::get<QParaParams>(rec.params);
      q = k.q;
      b = build_B_from_A(structured_params(k), rec);
    }
    const Decomposition d = decompose(rec.jacobi_matrix(), b, q, pol);
    add_decomposition_check(r, d);
    add_blocks_table(r, d);
  }
}

void cmd_poly(RunReport& r, ParamSet& ps) {
  const std::string family = ps.text("family", "big-q-jacobi");
  const int n_max = ps.integer("n_max", 5);
  if (n_max < 0) throw bad("n_max must be >= 0");
  const MonicRecurrence rec = read_family(ps, family, n_max + 1);
  const std::vector<double> xs = ps.numbers("x");
  const TolerancePolicy pol = read_policy(ps);
  if (static_cast<std::size_t>(n_max) > rec.size()) {
    throw Error(ErrorKind::out_of_range, "n_max exceeds the recurrence length " + std::to_string(rec.size()));
  }
  Table& t = r.add_table("P");
  ResidualReport cross;
  cross.tolerance = pol.rel_tol;
  for (int n = 0; n <= n_max; ++n) {
    const LaurentPoly expanded = monic_polynomial(rec, n);
    for (double x : xs) {
      const double v = eval_monic(rec, n, x);
      const double dev = std::abs(v - expanded.eval(x)) / std::max(1.0, std::abs(v));
      cross.max_abs = std::max(cross.max_abs, dev);
      t.rows.push_back(Json{{"n", n}, {"x", x}, {"value", v}});
    }
  }
  cross.pass = cross.max_abs <= cross.tolerance;
  r.add_check("recurrence-vs-expansion", cross);
}

void cmd_decompose(RunReport& r, ParamSet& ps) {
  const std::string kind = ps.text("pair", "q-hahn");
  const Pair p = read_pair(ps, kind);
  const double q = ps.number("q");
  const TolerancePolicy pol = read_policy(ps);
  const Decomposition d = decompose(p.a, p.b, q, pol);
  r.add_check("q-commutator", q_commutator_residual(p.a, p.b, q, BandMatrix::identity(p.a.size()), pol));
  add_decomposition_check(r, d);
  add_blocks_table(r, d);
}

}  // namespace

ParamSet::ParamSet(Json input) : input_(std::move(input)) {
  if (!input_.is_object()) throw bad("parameters must be a JSON object");
}

const Json* ParamSet::find(const std::string& key) const {
  auto it = input_.find(key);
  return it == input_.end() || it->is_null() ? nullptr : &*it;
}

double ParamSet::number(const std::string& key) {
  const Json* v = find(key);
  if (v == nullptr) throw bad("missing parameter '" + key + "'");
  if (!v->is_number()) throw bad("parameter '" + key + "' must be a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) throw bad("parameter '" + key + "' must be finite");
  echo_[key] = d;
  return d;
}

double ParamSet::number(const std::string& key, double fallback) {
  if (find(key) == nullptr) {
    echo_[key] = fallback;
    return fallback;
  }
  return number(key);
}

int ParamSet::integer(const std::string& key) {
  const Json* v = find(key);
  if (v == nullptr) throw bad("missing parameter '" + key + "'");
  if (!v->is_number_integer()) throw bad("parameter '" + key + "' must be an integer");
  const int i = v->get<int>();
  echo_[key] = i;
  return i;
}

int ParamSet::integer(const std::string& key, int fallback) {
  if (find(key) == nullptr) {
    echo_[key] = fallback;
    return fallback;
  }
  return integer(key);
}

std::string ParamSet::text(const std::string& key, const std::string& fallback) {
  const Json* v = find(key);
  std::string s = fallback;
  if (v != nullptr) {
    if (!v->is_string()) throw bad("parameter '" + key + "' must be a string");
    s = v->get<std::string>();
  }
  echo_[key] = s;
  return s;
}

bool ParamSet::flag(const std::string& key, bool fallback) {
  const Json* v = find(key);
  bool b = fallback;
  if (v != nullptr) {
    if (!v->is_boolean()) throw bad("parameter '" + key + "' must be a boolean");
    b = v->get<bool>();
  }
  echo_[key] = b;
  return b;
}

std::vector<double> ParamSet::numbers(const std::string& key) {
  const Json* v = find(key);
  if (v == nullptr) throw bad("missing parameter '" + key + "'");
  std::vector<double> out;
  if (v->is_number()) {
    out.push_back(v->get<double>());
  } else if (v->is_array()) {
    for (const Json& e : *v) {
      if (!e.is_number()) throw bad("parameter '" + key + "' must be a list of numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw bad("parameter '" + key + "' must be a list of numbers");
  }
  if (out.empty()) throw bad("parameter '" + key + "' must not be empty");
  echo_[key] = out;
  return out;
}

RunReport run_command(const std::string& command, const Json& params) {
  ParamSet ps(params);
  RunReport r;
  r.command = command;
  r.version = QOSC_VERSION;
  if (command == "build") {
    cmd_build(r, ps);
  } else if (command == "verify") {
    run_suite(r, ps, ps.text("suite", "qosc"));
  } else if (command == "algebra") {
    const std::string suite = ps.text("suite", "bigqjacobi-algebra");
    if (suite != "bigqjacobi-algebra" && suite != "aw-algebra") {
      throw bad("algebra runs the bigqjacobi-algebra or aw-algebra suite");
    }
    run_suite(r, ps, suite);
  } else if (command == "spectrum") {
    cmd_spectrum(r, ps);
  } else if (command == "poly") {
    cmd_poly(r, ps);
  } else if (command == "decompose") {
    cmd_decompose(r, ps);
  } else {
    throw bad("unknown command '" + command + "'");
  }
  r.params = ps.echo();
  return r;
}

int exit_status(const RunReport& report) { return report.pass() ? 0 : 1; }

int exit_status(const Error& error) { return is_parameter_error(error.kind()) ? 2 : 1; }

}  // namespace qosc::cli

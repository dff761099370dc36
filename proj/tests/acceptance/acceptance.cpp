// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qosc/algebra.hpp"
#include "qosc/families.hpp"
#include "qosc/opmatrix.hpp"
#include "qosc/representation.hpp"
#include "qosc/tridiagonalization.hpp"
#include "support/oracle.hpp"

namespace {

using namespace qosc;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome check_general_solution() {
  const auto t0 = Clock::now();
  test::Draws draws(1);
  const TolerancePolicy pol{1e-12, 1e-9};
  double worst_comm = 0.0, worst_xi = 0.0;
  bool pass = true;
  for (int trial = 0; trial < 50; ++trial) {
    GeneralParams p;
    const auto rep = test::draw_representation(draws, 16, &p);
    const auto comm = q_commutator_residual(rep.A, rep.B, p.q, BandMatrix::identity(16), pol);
    const double xi = xi_residuals(rep.A, rep.B, p.q).max_abs();
    pass = pass && comm.pass && xi <= comm.tolerance;
    worst_comm = std::max(worst_comm, comm.max_abs / std::max(1.0, comm.scale));
    worst_xi = std::max(worst_xi, xi / std::max(1.0, comm.scale));
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 1.0;
  return {pass, "50 draws, size 16: commutator " + fmt("%.2e", worst_comm) + " x scale, xi " + fmt("%.2e", worst_xi) +
                    " x scale, " + fmt("%.3f", elapsed) + " s"};
}

Outcome check_exact_oracle() {
  const auto t0 = Clock::now();
  constexpr std::size_t size = 8;
  std::size_t nonzero = 0;
  for (const auto& p : test::rational_fixtures()) {
    const auto [a, b] = general_pair(general_solution(p, size));
    const auto r = q_commutator(a, b, p.q);
    for (std::size_t i = 0; i + 1 < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        if (r(i, j) != test::Rational(i == j ? 1 : 0)) ++nonzero;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {nonzero == 0 && elapsed < 5.0,
          "5 rational fixtures, size 8: " + std::to_string(nonzero) + " nonzero interior residual entries, " +
              fmt("%.3f", elapsed) + " s"};
}

Outcome check_big_q_jacobi_identification() {
  test::Draws draws(3);
  const TolerancePolicy pol{1e-12, 1e-9};
  double worst = 0.0;
  bool pass = true;
  for (int trial = 0; trial < 20; ++trial) {
    const StructuredParams p = draws.structured();
    const std::size_t size = 14;
    try {
      const auto c = classify(big_q_jacobi(p, size).jacobi_matrix(), build_B_from_A(p, size), p.q, pol);
      pass = pass && c.fit.pass;
      worst = std::max(worst, c.fit.max_abs);
    } catch (const Error& e) {
      return {false, std::string("draw ") + std::to_string(trial) + ": " + e.what()};
    }
  }
  return {pass, "20 draws: worst relative entry deviation " + fmt("%.2e", worst)};
}

Outcome check_tridiagonalization_theorem() {
  test::Draws draws(4);
  const TolerancePolicy pol{1e-12, 1e-9};
  double worst_b = 0.0, worst_u = 0.0;
  bool pass = true;
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = aw_match(draws.askey_wilson(), 21, pol);
    pass = pass && r.pass();
    worst_b = std::max(worst_b, r.b.max_abs);
    worst_u = std::max(worst_u, r.u.max_abs);
  }
  return {pass, "50 draws, n <= 20: b " + fmt("%.2e", worst_b) + ", u " + fmt("%.2e", worst_u)};
}

/// Largest relative pairing error and scaled char-poly residual.
std::pair<double, double> spectrum_errors(const MonicRecurrence& rec, const SpectrumLattice& lat) {
  const auto eig = eigenvalues(rec.jacobi_matrix(), {1e-12, 1e-8});
  const auto pairing = pair_spectrum(eig, lat.points);
  double pair = 0.0, poly = 0.0;
  for (std::size_t s = 0; s < lat.points.size(); ++s) {
    pair = std::max(pair, std::abs(eig[pairing[s]] - lat.points[s]) / std::abs(lat.points[s]));
  }
  for (double r : scaled_char_poly_residuals(rec, lat.points)) poly = std::max(poly, r);
  return {pair, poly};
}

Outcome check_q_hahn_truncation() {
  double worst_pair = 0.0, worst_poly = 0.0;
  bool pass = true;
  for (int N : {3, 5, 7}) {
    for (double q : {0.5, 0.7}) {
      for (auto [c1, c2] : std::array<std::pair<double, double>, 2>{{{0.3, 0.4}, {-0.5, 0.2}}}) {
        const QHahnParams h{q, c1, c2, N};
        const auto rec = q_hahn(h);
        const auto lat = claimed_spectrum(rec);
        const auto [pair, poly] = spectrum_errors(rec, lat);
        const auto d = decompose(rec.jacobi_matrix(), build_B_from_A(structured_params(h), rec), q);
        pass = pass && pair <= 1e-8 && poly <= 1e-8 && d.blocks.size() == 1;
        worst_pair = std::max(worst_pair, pair);
        worst_poly = std::max(worst_poly, poly);
      }
    }
  }
  return {pass, "N in {3,5,7}, q in {0.5,0.7}: pairing " + fmt("%.2e", worst_pair) + ", char-poly " +
                    fmt("%.2e", worst_poly) + ", one block each"};
}

Outcome check_q_para_krawtchouk_spectrum() {
  double worst_pair = 0.0, worst_mass = 0.0;
  bool pass = true;
  for (int N : {3, 5, 7}) {
    for (double q : {0.5, 0.6}) {
      for (double c3 : {0.2, 0.25}) {
        const QParaParams k{q, c3, N};
        const auto rec = q_para_krawtchouk(k);
        const auto lat = claimed_spectrum(rec);
        const auto [pair, poly] = spectrum_errors(rec, lat);
        const auto d = decompose(rec.jacobi_matrix(), build_B_from_A(structured_params(k), rec), q, {1e-12, 1e-8});
        const std::size_t half = static_cast<std::size_t>((N + 1) / 2);
        bool blocks = d.blocks.size() == 2;
        for (const auto& b : d.blocks) blocks = blocks && b.size == half;
        pass = pass && pair <= 1e-8 && blocks && d.off_block_mass <= 1e-8;
        worst_pair = std::max(worst_pair, pair);
        worst_mass = std::max(worst_mass, d.off_block_mass);
      }
    }
  }
  const auto eig = eigenvalues(q_para_krawtchouk({0.5, 0.2, 3}).jacobi_matrix());
  const std::array<double, 4> expect{0.05, 0.1, 1.0, 2.0};
  double instance = 0.0;
  for (std::size_t i = 0; i < 4; ++i) instance = std::max(instance, std::abs(eig[i] - expect[i]) / expect[i]);
  pass = pass && instance <= 1e-8;
  return {pass, "N in {3,5,7}: pairing " + fmt("%.2e", worst_pair) + ", off-block mass " + fmt("%.2e", worst_mass) +
                    ", N=3 instance " + fmt("%.2e", instance)};
}

Outcome check_canonical_form() {
  double worst = 0.0;
  bool pass = true;
  for (double q : {0.3, 0.5, 0.9}) {
    for (double a : {1.0, 2.0, -0.5}) {
      for (std::size_t size = 1; size <= 64; ++size) {
        const CanonicalPair c = canonical_pair(a, q, size);
        const auto r = q_commutator_ulp(c.A, c.B, q, BandMatrix::identity(size), 4.0);
        pass = pass && r.pass && r.checked_rows.end == size;
        worst = std::max(worst, r.max_abs);
      }
    }
  }
  return {pass, "sizes 1..64: worst " + fmt("%.0f", worst) + " ulp"};
}

Outcome check_algebra_relations() {
  test::Draws draws(8);
  const TolerancePolicy pol{1e-12, 1e-8};
  const std::size_t size = 14;
  double worst = 0.0, worst_entry = 0.0;
  bool pass = true;
  int ml = 0, controls = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const StructuredParams p = draws.structured();
    const double mu = draws.signed_magnitude(0.1, 2.0);
    const auto big = big_qjacobi_algebra_residuals(p, size, pol);
    const auto aw = aw_algebra_residuals(p, mu, size, pol);
    pass = pass && big.pass() && aw.pass();
    for (const ResidualReport* r : {&big.oscillator, &big.bz, &big.za, &aw.m_definition, &aw.zm, &aw.ml}) {
      worst = std::max(worst, r->max_abs / std::max(1.0, r->scale));
    }
    if (aw.passing == AWVariant::ML) ++ml;

    // The norm-product scale can exceed the small-index right-hand sides by
    // many orders, so the controls are judged row by row. The relations
    // themselves must also hold at that stricter scale.
    const BandMatrix a = big_q_jacobi(p, size).jacobi_matrix();
    const BandMatrix b = build_B_from_A(p, size);
    const BandMatrix z = build_Z(p, size).matrix();
    const BandMatrix l = pencil(p, {mu, 0.0}, size);
    const BandMatrix m = aw_shifted_M(p, mu, size);
    const auto& kb = big.constants;
    const auto& ka = aw.constants;
    struct Relation {
      const BandMatrix* x;
      const BandMatrix* y;
      LinearTerm term;
      double constant;
    };
    const std::array<Relation, 5> rels{{{&a, &b, {0.0, &a}, 1.0},
                                        {&b, &z, {kb.gamma1, &a}, kb.delta1},
                                        {&z, &a, {kb.gamma2, &b}, kb.delta2},
                                        {&z, &m, {ka.sigma1, &l}, ka.omega1},
                                        {&m, &l, {ka.sigma2, &z}, ka.omega2}}};
    for (const Relation& r : rels) {
      const auto full = relation_residual_rowwise(*r.x, *r.y, p.q, std::span(&r.term, 1), r.constant, pol);
      pass = pass && full.pass;
      worst_entry = std::max(worst_entry, full.max_abs);
      if (!relation_residual_rowwise(*r.x, *r.y, p.q, {}, 0.0, pol).pass) ++controls;
    }
  }
  pass = pass && ml == 20 && controls == 100;
  return {pass, "20 draws, size 14: worst " + fmt("%.2e", worst) + " x scale, " + fmt("%.2e", worst_entry) +
                    " row-scaled; ML ordering passes in " + std::to_string(ml) + "/20; " + std::to_string(controls) +
                    "/100 zeroed controls fail"};
}

Outcome check_q_difference_picture() {
  const std::array<StructuredParams, 3> fixtures{
      {{0.7, 0.3, 0.4, 0.2}, {0.5, 0.25, 0.5, 0.25}, {0.9, -0.6, 0.35, 1.3}}};
  double osc = 0.0, eig = 0.0;
  bool pass = true;
  for (const auto& p : fixtures) {
    const auto a = qdiff_oscillator_check(p, 10, {1e-12, 1e-9});
    const auto b = qdiff_Z_eigen_check(p, 8, {1e-12, 1e-9});
    pass = pass && a.pass && b.pass;
    osc = std::max(osc, a.max_abs);
    eig = std::max(eig, b.max_abs);
  }
  return {pass, "3 fixtures: oscillator " + fmt("%.2e", osc) + " x mass, eigenrelation " + fmt("%.2e", eig)};
}

struct RunResult {
  std::string output;
  int status = -1;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QOSC_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

Outcome check_cli_contract() {
  struct Fixture {
    std::string args;
    int status;
    std::string needle;  // must appear in the output
  };
  const std::vector<Fixture> fixtures{
      {"build --parameterization general --q 0.7 --xi0 1 --zeta0 0.2 --s1 0.1 --s2 0.3 --size 12", 0, "q-commutator"},
      {"build --parameterization structured --q 0.5 --c1 0.25 --c2 0.5 --c3 0.25 --size 10", 0,
       "0.20967741935483872"},
      {"build --parameterization general --q 0.5 --xi0 1 --zeta0 0.2 --s1 0.1 --s2 0.3 --size 200", 2,
       "overflow-guard"},
      {"verify --suite aw-match --q 0.6 --a1 0.9 --a2 0.5 --a3 0.4 --a4 0.3", 0, "coefficients"},
      {"verify --suite qosc --pair canonical --q 0.5 --size 16", 0, "q-commutator-ulp"},
      {"verify --suite aw-algebra --q 0.7 --c1 0.3 --c2 0.4 --c3 0.2 --mu 0.37", 0, "\"passing\": \"ML\""},
      {"algebra --suite aw-algebra --variant LM --q 0.7 --c1 0.3 --c2 0.4 --c3 0.2 --mu 0.37", 1, "\"lm\""},
      {"spectrum --family q-hahn --q 0.5 --c1 0.3 --c2 0.4 --N 3 --decompose", 0, "blocks"},
      {"spectrum --family q-para --q 0.5 --c3 0.2 --N 3 --decompose", 0, "0.050000000000000003"},
      {"poly --family big-q-jacobi --q 0.5 --c1 0.25 --c2 0.5 --c3 0.25 --n-max 5 --x 0.5,1,2", 0, "\"P\""},
      {"decompose --pair q-para --q 0.6 --c3 0.25 --N 7", 0, "invariance"},
      {"spectrum --family q-para --q 0.5 --c3 0.2 --N 4", 2, "invalid-parameter"},
      {"verify --suite qdiff --q 0.7 --c1 0.3 --c2 0.4 --c3 0.2 --no-json", 0, "PASS verify"},
  };
  std::size_t identical = 0, statuses = 0;
  std::string first_bad;
  for (const auto& f : fixtures) {
    const RunResult a = run_cli(f.args);
    const RunResult b = run_cli(f.args);
    const bool same = a.output == b.output && a.status == b.status;
    const bool status_ok = a.status == f.status && a.output.find(f.needle) != std::string::npos;
    identical += same;
    statuses += status_ok;
    if ((!same || !status_ok) && first_bad.empty()) {
      first_bad = "; first failure: '" + f.args + "' exit " + std::to_string(a.status);
    }
  }
  const std::size_t n = fixtures.size();
  return {identical == n && statuses == n, std::to_string(identical) + "/" + std::to_string(n) +
                                               " byte-identical reruns, " + std::to_string(statuses) + "/" +
                                               std::to_string(n) + " exit statuses as expected" + first_bad};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"general-solution", check_general_solution},
      {"exact-oracle", check_exact_oracle},
      {"big-q-jacobi-identification", check_big_q_jacobi_identification},
      {"tridiagonalization-theorem", check_tridiagonalization_theorem},
      {"q-hahn-truncation", check_q_hahn_truncation},
      {"q-para-krawtchouk", check_q_para_krawtchouk_spectrum},
      {"canonical-form", check_canonical_form},
      {"algebra-relations", check_algebra_relations},
      {"q-difference", check_q_difference_picture},
      {"cli-contract", check_cli_contract},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %-28s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}

// bkl: special values of GL_n(F_q) Bessel functions via exotic Kloosterman
// L-functions and Gauss-sum epsilon factors, plus the verification suite.

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "bkl/bessel.hpp"
#include "bkl/hecke.hpp"
#include "bkl/verify.hpp"

using json = nlohmann::ordered_json;
using namespace bkl;

namespace {

// exit codes: 0 ok, 2 validation, 3 cost cap, 4 tolerance/check failure
constexpr int kExitValidation = 2;
constexpr int kExitCost = 3;
constexpr int kExitTolerance = 4;

struct TaskConfig {
  uint64_t q = 0;          // prime power as given
  unsigned ext = 1;        // extra extension: base becomes q^ext
  std::vector<unsigned> lambda;
  std::vector<uint64_t> alpha;
  uint64_t psi_twist = 1;  // residue for e=1, subfield dlog otherwise
  uint64_t c = 1;
  uint64_t a = 0;          // kloosterman target; 0: fall back to c
  unsigned m = 1;
  unsigned n = 0;
  unsigned k = 2;
  std::string route = "both";
  double tol = 1e-7;
  uint64_t cap = AmbientField::kDefaultCap;
  std::string cache_dir;
  std::string format = "json";
  bool force = false;
  uint64_t seed = 0x42;
  std::vector<unsigned> sigma_lambda;
  std::vector<uint64_t> sigma_alpha;
  std::vector<std::string> checks;
};

PrimePower parse_base(const TaskConfig& cfg) {
  require(cfg.q >= 2, errc::invalid_argument, "--q is required and must be at least 2");
  uint64_t p = cfg.q;
  unsigned e = 1;
  for (uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) {
      uint64_t q = cfg.q;
      e = 0;
      while (q % d == 0) {
        q /= d;
        ++e;
      }
      require(q == 1, errc::invalid_prime, "--q must be a prime power");
      p = d;
      break;
    }
  }
  PrimePower base{p, e * cfg.ext};
  base.validate();
  return base;
}

/// Scalar from a CLI integer: residue for prime fields, generator power
/// otherwise (labels are generator-dependent, like character exponents).
Fe parse_scalar(const AmbientField& F, uint64_t v, const char* what) {
  Fe out;
  if (F.base().e == 1) {
    out = F.scalar(v);
  } else {
    out = F.from_subfield_dlog(v, 1);
  }
  require(!out.is_zero(), errc::invalid_argument, std::string(what) + " must be nonzero in F_q");
  return out;
}

GenericRepParams parse_rep(uint64_t q, const std::vector<unsigned>& lambda,
                           const std::vector<uint64_t>& alpha) {
  require(!lambda.empty(), errc::invalid_argument, "--lambda is required");
  require(alpha.size() == lambda.size(), errc::invalid_argument,
          "--alpha must list one exponent per part of --lambda");
  GenericRepParams P;
  P.q = q;
  P.lambda = lambda;
  for (size_t j = 0; j + 1 < lambda.size(); ++j)
    require(lambda[j] >= lambda[j + 1], errc::invalid_argument,
            "--lambda must be weakly decreasing");
  P.alpha.mu = lambda;
  for (size_t j = 0; j < lambda.size(); ++j) {
    const uint64_t Mn = ipow_u64(q, lambda[j]) - 1;
    P.alpha.chars.push_back({lambda[j], Mn == 0 ? 0 : alpha[j] % Mn});
  }
  return P;
}

json ambient_json(const AmbientField& F) {
  json j;
  j["p"] = F.p();
  j["e"] = F.base().e;
  j["N"] = F.ext_degree();
  j["modulus"] = std::vector<unsigned>(F.modulus().begin(), F.modulus().end());
  j["generator_code"] = F.generator().code;
  return j;
}

json alpha_json(const CharTuple& t) {
  json arr = json::array();
  for (const auto& ch : t.chars) arr.push_back({{"degree", ch.d}, {"exponent", ch.k}});
  return arr;
}

json cplx_json(const cplx& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

void emit(const TaskConfig& cfg, const json& doc, const std::string& csv) {
  if (cfg.format == "csv" && !csv.empty()) {
    std::cout << csv;
  } else {
    std::cout << doc.dump(2) << "\n";
  }
}

int cmd_bessel(const TaskConfig& cfg) {
  const PrimePower base = parse_base(cfg);
  const GenericRepParams P = parse_rep(base.q(), cfg.lambda, cfg.alpha);
  const unsigned n = P.n();
  const unsigned N = cfg.route == "lfunction"
                         ? required_ambient_degree_for(P.lambda, n)
                         : required_ambient_degree(n);
  AmbientField F = AmbientField::make_cached(base, N, cfg.cap, cfg.cache_dir);
  BesselContext ctx(F);
  if (cfg.force) ctx.tables().set_cost_cap(uint64_t(-1));
  const AddChar psi{parse_scalar(F, cfg.psi_twist, "--psi-twist")};
  const Fe c = parse_scalar(F, cfg.c, "--c");

  std::vector<cplx> vl, vg;
  if (cfg.route == "lfunction" || cfg.route == "both")
    vl = bessel_antidiag_via_L(ctx, P, c, psi).values;
  if (cfg.route == "gamma" || cfg.route == "both") {
    vg.assign(n + 1, {1.0, 0.0});
    for (unsigned m = 1; m <= n; ++m) vg[m] = bessel_antidiag_via_gamma(ctx, P, c, psi, m);
  }

  json doc;
  doc["q"] = base.q();
  doc["n"] = n;
  doc["lambda"] = P.lambda;
  doc["alpha"] = alpha_json(P.alpha);
  doc["psi_twist"] = cfg.psi_twist;
  doc["c"] = cfg.c;
  doc["route"] = cfg.route;
  doc["ambient"] = ambient_json(F);
  json values = json::array();
  std::string csv = "m,re,im" + std::string(cfg.route == "both" ? ",deviation" : "") + "\n";
  bool tol_fail = false;
  for (unsigned m = 0; m <= n; ++m) {
    const cplx v = cfg.route == "gamma" ? vg[m] : vl[m];
    json row;
    row["m"] = m;
    row["re"] = v.real();
    row["im"] = v.imag();
    csv += std::to_string(m) + "," + std::to_string(v.real()) + "," + std::to_string(v.imag());
    if (cfg.route == "both") {
      const double dev = std::abs(vl[m] - vg[m]);
      row["deviation"] = dev;
      csv += "," + std::to_string(dev);
      const uint64_t terms = m == 0 ? 0 : EtaleAlgebra(F, P.lambda, m).fiber_size();
      if (dev >= cfg.tol * (1.0 + double(terms) * 1e-6)) tol_fail = true;
    }
    csv += "\n";
    values.push_back(row);
  }
  doc["values"] = values;
  if (cfg.route == "both") doc["routes_agree"] = !tol_fail;
  emit(cfg, doc, csv);
  return tol_fail ? kExitTolerance : 0;
}

int cmd_lfunction(const TaskConfig& cfg) {
  const PrimePower base = parse_base(cfg);
  const GenericRepParams P = parse_rep(base.q(), cfg.lambda, cfg.alpha);
  const unsigned n = P.n();
  AmbientField F =
      AmbientField::make_cached(base, required_ambient_degree_for(P.lambda, n), cfg.cap,
                                cfg.cache_dir);
  BesselContext ctx(F);
  if (cfg.force) ctx.tables().set_cost_cap(uint64_t(-1));
  const AddChar psi{parse_scalar(F, cfg.psi_twist, "--psi-twist")};
  const Fe c = parse_scalar(F, cfg.c, "--c");
  const auto data = lpolynomial(ctx, P, c, psi);

  json doc;
  doc["q"] = base.q();
  doc["n"] = n;
  doc["lambda"] = P.lambda;
  doc["alpha"] = alpha_json(P.alpha);
  doc["psi_twist"] = cfg.psi_twist;
  doc["c"] = cfg.c;
  doc["ambient"] = ambient_json(F);
  json lstar = json::array(), power_sums = json::array(), roots = json::array();
  std::string csv = "m,lstar_re,lstar_im\n";
  for (unsigned m = 0; m <= n; ++m) {
    lstar.push_back(cplx_json(data.lstar[m]));
    csv += std::to_string(m) + "," + std::to_string(data.lstar[m].real()) + "," +
           std::to_string(data.lstar[m].imag()) + "\n";
  }
  for (const auto& p : data.power_sums) power_sums.push_back(cplx_json(p));
  double purity_dev = 0.0;
  const double target = qhalf_pow(base.q(), int64_t(n) - 1);
  for (const auto& w : data.roots) {
    roots.push_back(cplx_json(w));
    purity_dev = std::max(purity_dev, std::abs(std::abs(w) - target) / target);
  }
  doc["lstar"] = lstar;
  doc["power_sums"] = power_sums;
  doc["roots"] = roots;
  doc["purity_max_relative_deviation"] = purity_dev;
  emit(cfg, doc, csv);
  return 0;
}

int cmd_kloosterman(const TaskConfig& cfg) {
  const PrimePower base = parse_base(cfg);
  require(!cfg.lambda.empty(), errc::invalid_argument, "--lambda is required");
  require(cfg.alpha.size() == cfg.lambda.size(), errc::invalid_argument,
          "--alpha must list one exponent per part");
  const unsigned N = required_ambient_degree_for(cfg.lambda, cfg.m);
  AmbientField F = AmbientField::make_cached(base, N, cfg.cap, cfg.cache_dir);
  CharTables ct(F);
  if (cfg.force) ct.set_cost_cap(uint64_t(-1));
  KloostermanSpec spec;
  spec.lambda = cfg.lambda;
  spec.chi.mu = cfg.lambda;
  for (size_t j = 0; j < cfg.lambda.size(); ++j) {
    const uint64_t Mn = F.qpow(cfg.lambda[j]) - 1;
    spec.chi.chars.push_back({cfg.lambda[j], Mn == 0 ? 0 : cfg.alpha[j] % Mn});
  }
  spec.psi = AddChar{parse_scalar(F, cfg.psi_twist, "--psi-twist")};
  spec.a = parse_scalar(F, cfg.a ? cfg.a : cfg.c, "--a");
  spec.m = cfg.m;
  const cplx J = kloosterman(ct, spec);

  json doc;
  doc["q"] = base.q();
  doc["lambda"] = cfg.lambda;
  doc["chi"] = alpha_json(spec.chi);
  doc["psi_twist"] = cfg.psi_twist;
  doc["a"] = cfg.a ? cfg.a : cfg.c;
  doc["m"] = cfg.m;
  doc["ambient"] = ambient_json(F);
  doc["value"] = cplx_json(J);
  emit(cfg, doc, "re,im\n" + std::to_string(J.real()) + "," + std::to_string(J.imag()) + "\n");
  return 0;
}

int cmd_gauss(const TaskConfig& cfg) {
  const PrimePower base = parse_base(cfg);
  require(cfg.n >= 1, errc::invalid_argument, "--n (the character degree r) is required");
  require(cfg.alpha.size() == 1, errc::invalid_argument, "--alpha must list one exponent");
  AmbientField F = AmbientField::make_cached(base, cfg.n, cfg.cap, cfg.cache_dir);
  CharTables ct(F);
  const AddChar psi{parse_scalar(F, cfg.psi_twist, "--psi-twist")};
  const uint64_t Mr = F.qpow(cfg.n) - 1;
  const cplx tau = ct.gauss_sum({cfg.n, Mr == 0 ? 0 : cfg.alpha[0] % Mr}, psi);

  json doc;
  doc["q"] = base.q();
  doc["r"] = cfg.n;
  doc["exponent"] = cfg.alpha[0];
  doc["psi_twist"] = cfg.psi_twist;
  doc["ambient"] = ambient_json(F);
  doc["value"] = cplx_json(tau);
  doc["abs"] = std::abs(tau);
  emit(cfg, doc,
       "re,im,abs\n" + std::to_string(tau.real()) + "," + std::to_string(tau.imag()) + "," +
           std::to_string(std::abs(tau)) + "\n");
  return 0;
}

int cmd_gamma(const TaskConfig& cfg) {
  const PrimePower base = parse_base(cfg);
  const GenericRepParams P = parse_rep(base.q(), cfg.lambda, cfg.alpha);
  const GenericRepParams S = parse_rep(base.q(), cfg.sigma_lambda, cfg.sigma_alpha);
  const unsigned N = required_ambient_degree(std::max(P.n(), S.n()));
  AmbientField F = AmbientField::make_cached(base, N, cfg.cap, cfg.cache_dir);
  BesselContext ctx(F);
  const AddChar psi{parse_scalar(F, cfg.psi_twist, "--psi-twist")};
  const cplx g = gamma_factor(ctx, P, S, psi);
  const cplx eps = epsilon0(ctx, P, S, psi);

  json doc;
  doc["q"] = base.q();
  doc["lambda"] = P.lambda;
  doc["alpha"] = alpha_json(P.alpha);
  doc["sigma_lambda"] = S.lambda;
  doc["sigma_alpha"] = alpha_json(S.alpha);
  doc["psi_twist"] = cfg.psi_twist;
  doc["ambient"] = ambient_json(F);
  doc["epsilon0"] = cplx_json(eps);
  doc["gamma"] = cplx_json(g);
  emit(cfg, doc, "");
  return 0;
}

int cmd_basechange(const TaskConfig& cfg) {
  const PrimePower base = parse_base(cfg);
  const GenericRepParams P = parse_rep(base.q(), cfg.lambda, cfg.alpha);
  const unsigned n = P.n(), k = cfg.k;
  require(k >= 1, errc::invalid_argument, "--k must be at least 1");
  const GenericRepParams Pk = shintani_base_change(P, k);

  AmbientField F = AmbientField::make_cached(base, required_ambient_degree(n), cfg.cap,
                                             cfg.cache_dir);
  BesselContext ctx(F);
  PrimePower ext{base.p, base.e * k};
  AmbientField Fk = AmbientField::make_cached(ext, required_ambient_degree(n), cfg.cap,
                                              cfg.cache_dir);
  BesselContext ctxk(Fk);
  const AddChar psi{parse_scalar(F, cfg.psi_twist, "--psi-twist")};
  const AddChar psik{Fk.one()};
  const Fe c = parse_scalar(F, cfg.c, "--c");
  // the same scalar in F_{q^k}: match dlog order for prime fields (residue)
  const Fe ck = F.base().e == 1 ? Fk.scalar(cfg.c) : Fk.from_subfield_dlog(cfg.c, 1);

  const auto tb = bessel_antidiag_via_L(ctx, P, c, psi);
  const auto tk = bessel_antidiag_via_L(ctxk, Pk, ck, psik);
  std::vector<cplx> bvals(n);
  for (unsigned j = 1; j <= n; ++j)
    bvals[j - 1] = qhalf_pow(base.q(), int64_t(j) * (n - j)) * tb.values[j];

  json doc;
  doc["q"] = base.q();
  doc["k"] = k;
  doc["lambda"] = P.lambda;
  doc["alpha"] = alpha_json(P.alpha);
  doc["c"] = cfg.c;
  doc["base_changed"] = {{"q", Pk.q}, {"lambda", Pk.lambda}, {"alpha", alpha_json(Pk.alpha)}};
  json checks = json::array();
  bool all_ok = true;
  double max_dev = 0.0;
  for (unsigned m = 1; m <= n; ++m) {
    cplx scale = qhalf_pow(base.q(), int64_t(k) * m * (n - m));
    if ((k - 1) % 2 && (m * (n - m)) % 2) scale = -scale;
    const cplx lhs = dickson_eval(bvals, k, m);
    const cplx rhs = scale * tk.values[m];
    const double dev = std::abs(lhs - rhs) / (1.0 + std::abs(scale));
    max_dev = std::max(max_dev, dev);
    const bool ok = dev < 1e-6;
    all_ok = all_ok && ok;
    checks.push_back({{"m", m},
                      {"dickson", cplx_json(lhs)},
                      {"scaled_bessel", cplx_json(rhs)},
                      {"deviation", dev},
                      {"pass", ok}});
  }
  doc["dickson_checks"] = checks;
  doc["max_deviation"] = max_dev;
  doc["pass"] = all_ok;
  emit(cfg, doc, "");
  return all_ok ? 0 : kExitTolerance;
}

int cmd_hecke_check(const TaskConfig& cfg) {
  const PrimePower base = parse_base(cfg);
  require(cfg.n >= 1, errc::invalid_argument, "--n is required");
  hecke::GroupTable G(cfg.n, base.p, base.e);
  const auto oracle =
      hecke::bessel_functions_numeric(G, uint8_t(cfg.psi_twist % G.q()), 5, cfg.seed);
  AmbientField F = AmbientField::make_cached(base, required_ambient_degree(cfg.n), cfg.cap,
                                             cfg.cache_dir);
  BesselContext ctx(F);
  const auto match =
      hecke::match_oracle_to_params(oracle, G, ctx, uint8_t(cfg.psi_twist % G.q()));

  json doc;
  doc["q"] = base.q();
  doc["n"] = cfg.n;
  doc["group_order"] = G.size();
  doc["support_points"] = oracle.points.size();
  doc["eigenfunctions"] = oracle.functions.size();
  doc["commutator_max"] = oracle.commutator_max;
  doc["coset_consistency_max"] = oracle.offsupport_max;
  doc["match_max_deviation"] = match.max_value_deviation;
  doc["match_min_second_best"] = match.min_second_best;
  doc["pass"] = match.max_value_deviation < 1e-6;
  emit(cfg, doc, "");
  return match.max_value_deviation < 1e-6 ? 0 : kExitTolerance;
}

int cmd_verify(const TaskConfig& cfg) {
  verify::Options opts;
  opts.table_cap = cfg.cap;
  opts.cache_dir = cfg.cache_dir;
  if (cfg.force) opts.cost_cap = uint64_t(-1);
  const auto results = cfg.checks.empty() ? verify::run_all(opts)
                                          : verify::run_selected(opts, cfg.checks);
  json doc;
  json checks = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    checks.push_back({{"name", r.name},
                      {"pass", r.pass},
                      {"max_deviation", r.max_deviation},
                      {"tolerance", r.tolerance},
                      {"detail", r.detail}});
  }
  doc["checks"] = checks;
  doc["pass"] = all;
  std::cout << doc.dump(2) << "\n";
  return all ? 0 : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bessel functions of GL_n(F_q) via exotic Kloosterman sums and Gauss sums"};
  app.require_subcommand(1);

  TaskConfig cfg;
  if (const char* env = std::getenv("BKL_CACHE_DIR")) cfg.cache_dir = env;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "base field size (prime power)");
    sub->add_option("--ext", cfg.ext, "extra extension degree: base becomes q^ext");
    sub->add_option("--psi-twist", cfg.psi_twist, "additive character twist b in F_q^x");
    sub->add_option("--tol", cfg.tol, "route-agreement tolerance");
    sub->add_option("--cap", cfg.cap, "dlog table cap on q^N - 1");
    sub->add_option("--cache-dir", cfg.cache_dir, "dlog table cache directory");
    sub->add_option("--format", cfg.format, "output format: json or csv");
    sub->add_flag("--force", cfg.force, "bypass the cost guard");
    sub->add_option("--seed", cfg.seed, "seed for the hecke diagonalization draws");
  };
  auto add_rep = [&](CLI::App* sub) {
    sub->add_option("--lambda", cfg.lambda, "partition of n")->delimiter(',');
    sub->add_option("--alpha", cfg.alpha, "character exponents, one per part")->delimiter(',');
  };

  auto* bessel = app.add_subcommand("bessel", "Bessel values at anti-diagonal points");
  add_common(bessel);
  add_rep(bessel);
  bessel->add_option("--c", cfg.c, "scalar c in F_q^x");
  bessel->add_option("--route", cfg.route, "lfunction, gamma, or both");

  auto* lfun = app.add_subcommand("lfunction", "Kloosterman L-polynomial data");
  add_common(lfun);
  add_rep(lfun);
  lfun->add_option("--c", cfg.c, "scalar c in F_q^x");

  auto* kloos = app.add_subcommand("kloosterman", "one exotic Kloosterman sum");
  add_common(kloos);
  add_rep(kloos);
  kloos->add_option("--m", cfg.m, "extension degree");
  kloos->add_option("--a", cfg.a, "norm target a in F_q^x");
  kloos->add_option("--c", cfg.c, "alias for --a");

  auto* gauss = app.add_subcommand("gauss", "one Gauss sum tau(gamma, psi_r)");
  add_common(gauss);
  gauss->add_option("--n", cfg.n, "character degree r");
  gauss->add_option("--alpha", cfg.alpha, "character exponent")->delimiter(',');

  auto* gamma = app.add_subcommand("gamma", "gamma factor of a pair pi x sigma");
  add_common(gamma);
  add_rep(gamma);
  gamma->add_option("--sigma-lambda", cfg.sigma_lambda, "partition for sigma")->delimiter(',');
  gamma->add_option("--sigma-alpha", cfg.sigma_alpha, "exponents for sigma")->delimiter(',');

  auto* bc = app.add_subcommand("basechange", "Shintani base change and the Dickson identity");
  add_common(bc);
  add_rep(bc);
  bc->add_option("--k", cfg.k, "base change degree");
  bc->add_option("--c", cfg.c, "scalar c in F_q^x");

  auto* hk = app.add_subcommand("hecke-check", "brute-force Hecke-algebra oracle match");
  add_common(hk);
  hk->add_option("--n", cfg.n, "GL_n degree");

  auto* ver = app.add_subcommand("verify", "run the acceptance grid");
  add_common(ver);
  ver->add_option("--check", cfg.checks, "run only the named criteria")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (bessel->parsed()) return cmd_bessel(cfg);
    if (lfun->parsed()) return cmd_lfunction(cfg);
    if (kloos->parsed()) return cmd_kloosterman(cfg);
    if (gauss->parsed()) return cmd_gauss(cfg);
    if (gamma->parsed()) return cmd_gamma(cfg);
    if (bc->parsed()) return cmd_basechange(cfg);
    if (hk->parsed()) return cmd_hecke_check(cfg);
    if (ver->parsed()) return cmd_verify(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::cost_exceeded ? kExitCost : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

#include "ldacert/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <ostream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ldacert/certificate.hpp"
#include "ldacert/error.hpp"
#include "ldacert/report.hpp"
#include "ldacert/tiling.hpp"
#include "ldacert/verify.hpp"

namespace ldacert {

namespace {

constexpr const char* kVersion = "1.0.0";

void apply_thread_cap() {
  const char* env = std::getenv("LDA_CERT_THREADS");
  if (!env || !*env) return;
  int n = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, n);
  if (ec != std::errc() || ptr != end || n < 1) throw ParamError(fmt::format("LDA_CERT_THREADS='{}' is not a positive integer", env));
  omp_set_num_threads(std::min(n, omp_get_max_threads()));
}

std::vector<double> parse_n_range(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) throw ParamError("--N expects from:to:points");
  try {
    std::size_t i1 = 0, i2 = 0, i3 = 0;
    const std::string s1 = spec.substr(0, a), s2 = spec.substr(a + 1, b - a - 1), s3 = spec.substr(b + 1);
    const double from = std::stod(s1, &i1), to = std::stod(s2, &i2);
    const int points = std::stoi(s3, &i3);
    if (i1 != s1.size() || i2 != s2.size() || i3 != s3.size()) throw std::invalid_argument("");
    return log_grid(from, to, points);
  } catch (const std::logic_error&) {
    throw ParamError("cannot parse --N '" + spec + "'");
  }
}

struct ParamFlags {
  double p = 4.0, theta = 0.5, C = 1.0, q = 1.0;
  std::string variant = "quantum";
  double kappa_nam = 1.0, kappa1 = 1.0, kappa2 = 48.0, c_lt = 0.0;

  void add(CLI::App* app) {
    app->add_option("--p", p, "integrability exponent p > 3")->capture_default_str();
    app->add_option("--theta", theta, "exponent theta in (0, 1)")->capture_default_str();
    app->add_option("--C", C, "user constant in front of the gradient terms")->capture_default_str();
    app->add_option("--q", q, "number of spin states")->capture_default_str();
    app->add_option("--variant", variant, "quantum | xc | classical")->capture_default_str();
    app->add_option("--kappa-nam", kappa_nam, "constant of the Nam lower bound")->capture_default_str();
    app->add_option("--kappa1", kappa1, "bulk constant of the kinetic upper bound")->capture_default_str();
    app->add_option("--kappa2", kappa2, "gradient constant of the kinetic upper bound")->capture_default_str();
    app->add_option("--c-lt", c_lt, "Lieb-Thirring constant (0: conjectured c_TF)")->capture_default_str();
  }

  CertParams resolve() const {
    CertParams P;
    P.p = p;
    P.theta = theta;
    P.C = C;
    P.q = q;
    P.variant = parse_variant(variant);
    P.kinetic.kappa_nam = kappa_nam;
    P.kinetic.kappa1 = kappa1;
    P.kinetic.kappa2 = kappa2;
    P.kinetic.c_lt = c_lt;
    return P;
  }
};

int cmd_certify(const std::string& density, const ParamFlags& pf, const std::string& model_spec,
                const QuadOptions& quad, std::ostream& out) {
  const CertParams P = pf.resolve();
  require_valid(P);
  const UegModel model = make_model(model_spec, P.q);
  const Density rho = parse_density(density);
  const Certificate c = certify(rho, P, model, quad);
  Json j = certificate_json(c);
  Json qj;
  qj["rel_tol"] = quad.rel_tol;
  qj["grid_n"] = quad.grid_n;
  j["quadrature"] = qj;
  out << dump_json(j) << "\n";
  return 0;
}

int cmd_scaling(const ParamFlags& pf, const std::string& n_spec, double fixed, std::ostream& out) {
  const CertParams P = pf.resolve();
  require_valid(P);
  const auto N = parse_n_range(n_spec);
  FunctionalSet unit{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, P.theta, P.p, {}};
  const auto res = scaling_sweep(unit, P, N, fixed > 0.0 ? std::optional<double>(fixed) : std::nullopt);
  Json j = scaling_json(res, P);
  j["base_functionals"] = "unit";
  j["epsilon_rule"] = fixed > 0.0 ? fmt::format("N^-{:.17g}", fixed) : std::string("optimized");
  out << dump_json(j) << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, std::ostream& out) {
  const auto results = run_suite(suite);
  bool ok = true;
  for (const auto& r : results) {
    out << format_check(r) << "\n";
    ok = ok && r.pass;
  }
  out << (ok ? "PASS" : "FAIL") << " suite " << suite << "\n";
  return ok ? 0 : static_cast<int>(Status::accuracy);
}

int cmd_tile(double ell, double delta, int tile, int n, const std::string& field, const std::string& path,
             std::ostream& out) {
  const TilingConfig cfg{ell, delta};
  cfg.validate();
  if (tile < 0 || tile >= 24) throw ParamError("--tile must be in [0, 24)");
  if (n < 2) throw ParamError("--n must be at least 2");
  if (field != "chi" && field != "xi") throw ParamError("--field must be chi or xi");
  const Tetra T = field == "chi" ? chi_tile(tile, cfg) : xi_tile(tile, cfg);
  Vec3 lo, hi;
  T.bounds(lo, hi);
  const double r = cfg.smear_radius();
  lo.array() -= 1.5 * r;
  hi.array() += 1.5 * r;
  ScalarField f;
  for (int a = 0; a < 3; ++a) {
    f.spec.n[a] = n;
    f.spec.h[a] = (hi[a] - lo[a]) / (n - 1);
    f.spec.origin[a] = lo[a];
  }
  f.values.resize(f.spec.size());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 x = f.spec.point(i, j, k);
        f.values[f.spec.index(i, j, k)] = field == "chi" ? chi(tile, cfg, x) : xi(tile, cfg, x);
      }
  write_grid_file(path, f);
  Json j;
  j["ell"] = ell;
  j["delta"] = delta;
  j["tile"] = tile;
  j["field"] = field;
  j["n"] = n;
  j["out"] = path;
  j["grid_integral"] = integrate(f);
  out << dump_json(j) << "\n";
  return 0;
}

int cmd_info(std::ostream& out) {
  Json j;
  j["version"] = kVersion;
  j["constants"] = constants_json(CertParams{});
  j["models"] = Json::array({"tf-dirac", "tf-only", "custom:<A>,<B>"});
  j["suites"] = suite_names();
  Json tol = Json::object();
  for (const auto& t : tolerance_table()) {
    Json e;
    e["value"] = t.value;
    e["meaning"] = t.meaning;
    tol[t.name] = e;
  }
  j["tolerances"] = tol;
  j["max_threads"] = omp_get_max_threads();
  out << dump_json(j) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified error bands for the local density approximation", "lda-cert"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* certify_cmd = app.add_subcommand("certify", "certify a density and print a JSON report");
  std::string density;
  std::string model = "tf-dirac";
  QuadOptions quad;
  ParamFlags cert_flags;
  certify_cmd->add_option("--density", density, "LDA-GRID file or builtin:<name>,key=val,...")->required();
  certify_cmd->add_option("--model", model, "tf-dirac | tf-only | custom:<A>,<B>")->capture_default_str();
  certify_cmd->add_option("--rel-tol", quad.rel_tol, "quadrature accuracy target")->capture_default_str();
  certify_cmd->add_option("--grid-n", quad.grid_n, "grid points per axis for sampled fields")->capture_default_str();
  cert_flags.add(certify_cmd);

  auto* scaling_cmd = app.add_subcommand("scaling", "fit the error rate of the certificate under rho -> N rho");
  ParamFlags scale_flags;
  std::string n_spec = "1e4:1e12:6";
  double fixed = 0.0;
  scale_flags.add(scaling_cmd);
  scaling_cmd->add_option("--N", n_spec, "from:to:points, log-spaced")->capture_default_str();
  scaling_cmd->add_option("--fixed-eps-exponent", fixed, "use eps = N^-x instead of the optimum");

  auto* verify_cmd = app.add_subcommand("verify", "run invariant suites");
  std::string suite = "all";
  verify_cmd->add_option("--suite", suite, "kinetic | tiling | coulomb | lemmas | all")->capture_default_str();

  auto* tile_cmd = app.add_subcommand("tile", "write a sampled tile function as an LDA-GRID file");
  double ell = 4.0, delta = 0.5;
  int tile = 0, n = 48;
  std::string field = "chi", path;
  tile_cmd->add_option("--ell", ell, "tile scale")->capture_default_str();
  tile_cmd->add_option("--delta", delta, "smearing scale")->capture_default_str();
  tile_cmd->add_option("--tile", tile, "tile index 0..23")->capture_default_str();
  tile_cmd->add_option("--n", n, "grid points per axis")->capture_default_str();
  tile_cmd->add_option("--field", field, "chi | xi")->capture_default_str();
  tile_cmd->add_option("--out", path, "output path")->required();

  auto* info_cmd = app.add_subcommand("info", "print constants and verification tolerances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(Status::rejected);
  }

  try {
    apply_thread_cap();
    if (*certify_cmd) return cmd_certify(density, cert_flags, model, quad, out);
    if (*scaling_cmd) return cmd_scaling(scale_flags, n_spec, fixed, out);
    if (*verify_cmd) return cmd_verify(suite, out);
    if (*tile_cmd) return cmd_tile(ell, delta, tile, n, field, path, out);
    if (*info_cmd) return cmd_info(out);
  } catch (const Error& e) {
    err << "lda-cert: " << e.what() << "\n";
    return static_cast<int>(e.status());
  } catch (const std::exception& e) {
    err << "lda-cert: " << e.what() << "\n";
    return static_cast<int>(Status::accuracy);
  }
  return static_cast<int>(Status::rejected);
}

}  // namespace ldacert

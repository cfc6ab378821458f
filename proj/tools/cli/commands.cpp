#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "isospec/charfn.hpp"
#include "isospec/fredholm.hpp"
#include "isospec/kernels.hpp"
#include "isospec/spectrum.hpp"

namespace isospec::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kOrdering = "ascending real part; conjugate pairs by imaginary part";

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Non-finite residuals become null in JSON; keep them readable.
json residual_json(double r) { return std::isfinite(r) ? json(r) : json("inf"); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

std::string csv_of(const PiecewiseFunction& f) {
  std::ostringstream s;
  write_csv(s, f);
  return s.str();
}

std::string csv_of(const Spectrum& sp) {
  std::ostringstream s;
  write_csv(s, sp);
  return s.str();
}

double rel(cplx u, cplx v, double scale) { return std::abs(u - v) / scale; }

bool near_breakpoint(double x, double a, double gap) {
  const double k = std::round(x / (0.5 * a));
  return std::abs(x - k * 0.5 * a) < gap;
}

SpectrumOptions spectrum_options(const RunConfig& c) {
  SpectrumOptions o;
  o.newton.tol = c.spectrum.newton_tol;
  o.im_window = c.spectrum.im_window;
  return o;
}

// ---------------------------------------------------------------------------
// verify checks

void check_kernel_identity(Report& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-50.0, 400.0), im(-20.0, 20.0), pos(0.0, kPi), tiny(-1e-6, 1e-6);
  double worst = 0.0;
  for (int k = 0; k < 400; ++k) {
    const bool small = k % 10 == 0;
    const cplx lambda = small ? cplx{tiny(rng), tiny(rng)} : cplx{re(rng), im(rng)};
    const double x = pos(rng), t = pos(rng), xi = pos(rng);
    for (int nu = 0; nu <= 1; ++nu) {
      if (nu == 1 && std::abs(lambda) < 1e-3) continue;
      const cplx lhs = skernel(lambda, x - t) * ykernel(nu, lambda, xi);
      const cplx sign = nu == 0 ? 1.0 : -1.0;
      const cplx scale = nu == 0 ? cplx{2.0} : 2.0 * lambda;
      const cplx u = ykernel(1 - nu, lambda, x - t + xi), v = ykernel(1 - nu, lambda, x - t - xi);
      const cplx rhs = (sign * u + v) / scale;
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(u / scale) + std::abs(v / scale)));
    }
  }
  r.add("kernel_identity", worst, 1e-10, "product-to-sum identity for S(x - t) Y_nu(xi)");
}

void check_closed_forms(Report& r, const FamilyMember& m, const RunConfig& c, std::mt19937_64& rng) {
  const double a = m.a;
  const DelaySetup setup = m.setup();
  ClosedForms cf(m.q, setup, c.grid);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double series_err = 0.0, fd_err = 0.0;
  const double h = 1e-4;
  auto fd = [h](auto&& f, double x) {
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h);
  };
  for (int k = 0; k < 20; ++k) {
    cplx lambda;
    do {
      lambda = {-400.0 + 800.0 * unit(rng), -400.0 + 800.0 * unit(rng)};
    } while (std::abs(lambda) > 400.0);
    double x1, x2;
    do x1 = a + (kPi - a) * unit(rng);
    while (near_breakpoint(x1, a, 4 * h) || x1 > kPi - 4 * h);
    do x2 = 2.0 * a + (kPi - 2.0 * a) * unit(rng);
    while (near_breakpoint(x2, a, 4 * h) || x2 > kPi - 4 * h);

    const auto terms = series_terms(m.q, setup, 2, lambda, c.grid);
    const double s1 = std::max(terms[1].y.max_abs(), 1e-300), s1p = std::max(terms[1].yprime.max_abs(), 1e-300);
    const double s2 = std::max(terms[2].y.max_abs(), 1e-300), s2p = std::max(terms[2].yprime.max_abs(), 1e-300);
    const auto [y2, y2p] = cf.y2_pair(lambda, x2);
    series_err = std::max({series_err, rel(cf.y1(lambda, x1), terms[1].y.eval(x1), s1),
                           rel(cf.y1_prime(lambda, x1), terms[1].yprime.eval(x1), s1p),
                           rel(y2, terms[2].y.eval(x2), s2), rel(y2p, terms[2].yprime.eval(x2), s2p)});
    const cplx d1 = fd([&](double x) { return cf.y1(lambda, x); }, x1);
    const cplx d2 = fd([&](double x) { return cf.y2(lambda, x); }, x2);
    fd_err = std::max({fd_err, rel(d1, cf.y1_prime(lambda, x1), s1p), rel(d2, y2p, s2p)});
  }
  r.add("closed_forms_vs_series", series_err, 1e-7, "closed forms of the first two series terms");
  r.add("closed_forms_derivative", fd_err, 1e-7, "x-derivatives of the closed forms");
}

void check_delta(Report& r, const std::vector<FamilyMember>& members, const RunConfig& c) {
  const auto grid = validation_lambdas();
  double worst = 0.0, omega_gap = 0.0;
  for (const auto& m : members) {
    for (int j = 0; j <= 1; ++j) {
      const CharData data = build_w(m.q, m.setup(), j, c.grid);
      if (m.nu == 0 && j == 0) omega_gap = std::max(omega_gap, std::abs(data.omega - integrate(data.w, m.a, 3.0 * m.a)));
      const ClosedCharacteristic closed(data);
      const DirectCharacteristic direct(m.q, m.setup(), j, c.grid.steps_per_a);
      for (const cplx lambda : grid) {
        const cplx dc = closed(lambda);
        worst = std::max(worst, std::abs(dc - direct(lambda)) / (1.0 + std::abs(dc)));
      }
    }
  }
  r.add("delta_closed_vs_direct", worst, 1e-6, "characteristic function from the effective potential");
  if (c.nu == 0) r.add("omega_equals_integral_of_w", omega_gap, 1e-9, "omega equals the integral of w (nu = 0)");
}

void check_w_invariance(Report& r, const std::vector<FamilyMember>& members, const RunConfig& c) {
  double worst = 0.0;
  try {
    const PiecewiseFunction w0 = w_of_member(members.front(), c.grid);
    for (std::size_t k = 1; k < members.size(); ++k) {
      worst = std::max(worst, max_abs_diff(w_of_member(members[k], c.grid), w0));
    }
  } catch (const ConsistencyError&) {
    worst = kInf;
  }
  r.add("w_alpha_invariance", worst, 1e-8, "effective potential independent of alpha");
}

void check_eigenpair(Report& r, const EigenInputs& in, const RunConfig& c) {
  const FredholmOperator op(c.a, in.h.map([](double, cplx v, Side) { return cplx{v.real(), 0.0}; }));
  const PiecewiseFunction me = op.apply(in.e);
  const double apply_gap = max_abs_diff(me, in.eta * in.e);
  double nearest = kInf;
  for (const double eta : nystrom_eigenvalues(op, c.nystrom_n)) nearest = std::min(nearest, std::abs(eta - in.eta));
  r.add("eigenpair_apply", apply_gap, 1e-6, "eigen-relation M_h e = eta e by direct quadrature");
  r.add("eigenpair_nystrom", nearest, 1e-6, "eigenvalue eta of the discretized operator");
  if (c.nu == 1) {
    const cplx mean = integrate(in.e, 1.5 * c.a, 2.0 * c.a);
    r.add("zero_mean", std::abs(mean), 1e-10, "zero mean of e over (3a/2, 2a)");
    r.add("transfer_integral", std::abs(transfer_integral(in.h, in.e, c.a)), 1e-8,
          "double integral of K_h times the running integral of e vanishes");
  }
}

Spectrum spectrum_of(const CharacteristicFunction& f, int nu, int j, const RunConfig& c) {
  return compute_spectrum([&f](cplx l) { return f(l); }, nu, j, c.spectrum.n_max, spectrum_options(c));
}

json spectrum_json(const Spectrum& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back(complex_json(e.lambda));
  return {{"eigenvalues", entries},
          {"certified_count", s.certified_count},
          {"window", {complex_json(s.window.lo), complex_json(s.window.hi)}}};
}

}  // namespace

void Report::add(std::string name, double residual, double tolerance, std::string anchor) {
  const bool ok = std::isfinite(residual) && residual <= tolerance;
  checks.push_back({std::move(name), residual, tolerance, ok, std::move(anchor)});
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& e) { return e.pass; });
}

json Report::to_json() const {
  json list = json::array();
  for (const auto& e : checks) {
    list.push_back({{"check_name", e.check_name},
                    {"max_residual", residual_json(e.max_residual)},
                    {"tolerance", e.tolerance},
                    {"pass", e.pass},
                    {"anchor", e.anchor}});
  }
  json j = {{"command", command}, {"pass", pass()}, {"checks", list}};
  if (!details.empty()) j["details"] = details;
  return j;
}

EigenInputs eigen_inputs(const RunConfig& c) {
  EigenInputs in;
  const AnalyticPair pair = analytic_pair(c.a, c.grid);
  if (c.eigen_source == "analytic") {
    in.h = pair.h;
    in.e = pair.e;
    in.eta = pair.eta;
  } else {
    EigenOptions opts;
    opts.max_pairs = c.eigen_index + 1;
    opts.segment_nodes = c.grid.segment_nodes;
    const auto pairs = eigenpairs(FredholmOperator(c.a, pair.h), c.nystrom_n, opts);
    if (c.eigen_index >= pairs.size()) throw ConfigError("eigen_index exceeds the number of computed eigenpairs");
    in.h = pair.h;
    in.e = pairs[c.eigen_index].e;
    in.eta = pairs[c.eigen_index].eta;
  }
  const double scale = c.h_scale, shift = c.e_shift;
  if (scale != 1.0) in.h = scale * in.h;
  if (shift != 0.0) in.e = in.e.map([shift](double, cplx v, Side) { return v + shift; });
  return in;
}

std::vector<FamilyMember> build_members(const RunConfig& c, const EigenInputs& in) {
  std::vector<FamilyMember> out;
  for (const cplx alpha : c.alphas) {
    if (c.potential == "zero") {
      out.push_back(build_member(0.0 * in.h, in.eta, 0.0 * in.e, c.nu, alpha, c.a, c.grid));
    } else {
      out.push_back(build_member(in.h, in.eta, in.e, c.nu, alpha, c.a, c.grid));
    }
  }
  return out;
}

std::vector<cplx> validation_lambdas() {
  std::vector<cplx> out;
  for (int k = 0; k < 60; ++k) out.emplace_back(-20.0 + 420.0 * k / 59.0, 0.0);
  for (int k = 0; k < 5; ++k) {
    const double re = -20.0 + 420.0 * k / 4.0;
    out.emplace_back(re, 5.0);
    out.emplace_back(re, -5.0);
  }
  return out;
}

Report run_verify(const RunConfig& c) {
  Report r;
  r.command = "verify";
  std::mt19937_64 rng(c.seed);
  const EigenInputs in = eigen_inputs(c);
  const auto members = build_members(c, in);
  check_kernel_identity(r, rng);
  check_closed_forms(r, members.back(), c, rng);
  check_delta(r, members, c);
  check_w_invariance(r, members, c);
  check_eigenpair(r, in, c);
  r.details = {{"config", to_json(c)}};
  return r;
}

Report run_isospec(const RunConfig& c) {
  Report r;
  r.command = "isospec";
  const auto members = build_members(c, eigen_inputs(c));
  json runs = json::array();
  for (int j = 0; j <= 1; ++j) {
    std::vector<Spectrum> closed, direct;
    json counts = json::array(), direct_counts = json::array();
    std::string failure;
    try {
      for (const auto& m : members) {
        closed.push_back(spectrum_of(ClosedCharacteristic(build_w(m.q, m.setup(), j, c.grid)), c.nu, j, c));
        direct.push_back(spectrum_of(DirectCharacteristic(m.q, m.setup(), j, c.grid.steps_per_a), c.nu, j, c));
        counts.push_back(closed.back().certified_count);
        direct_counts.push_back(direct.back().certified_count);
      }
    } catch (const Error& e) {
      failure = e.what();
    }
    double across = kInf, methods = kInf, baseline = kInf;
    int worst_count = 0;
    if (failure.empty()) {
      try {
        across = 0.0;
        methods = 0.0;
        worst_count = c.spectrum.n_max;
        for (std::size_t k = 0; k < members.size(); ++k) {
          across = std::max({across, compare(closed.front(), closed[k]), compare(direct.front(), direct[k])});
          methods = std::max(methods, compare(closed[k], direct[k]));
          worst_count = std::min({worst_count, closed[k].certified_count, direct[k].certified_count});
        }
      } catch (const ComparisonError& e) {
        failure = e.what();
        across = methods = kInf;
      }
    }
    const std::string tag = "_j" + std::to_string(j);
    r.add("spectra_alpha_invariant" + tag, across, 1e-6, "spectrum independent of alpha");
    r.add("spectra_closed_vs_direct" + tag, methods, 1e-6, "closed-form and direct characteristic functions agree");
    r.add("certified_count" + tag, static_cast<double>(c.spectrum.n_max - worst_count), 0.0,
          "winding-number count matches the number of refined eigenvalues");
    if (c.potential == "zero" && failure.empty()) {
      baseline = 0.0;
      const auto exact = initial_guesses(c.nu, j, c.spectrum.n_max);
      for (const auto& s : closed) {
        for (std::size_t k = 0; k < s.entries.size(); ++k) {
          baseline = std::max(baseline, std::abs(s.entries[k].lambda - exact[k]) / (1.0 + std::abs(exact[k])));
        }
      }
      r.add("classical_baseline" + tag, baseline, 1e-10, "zero potential gives the classical spectrum");
    }
    json alphas = json::array();
    for (const cplx z : c.alphas) alphas.push_back(complex_json(z));
    json run = {{"alphas", alphas},
                {"nu", c.nu},
                {"j", j},
                {"max_rel_diff", residual_json(across)},
                {"closed_vs_direct", residual_json(methods)},
                {"certified_counts", counts},
                {"certified_counts_direct", direct_counts},
                {"ordering", kOrdering}};
    if (!failure.empty()) run["error"] = failure;
    runs.push_back(run);
  }
  r.details = {{"runs", runs}, {"config", to_json(c)}};
  return r;
}

int cmd_verify(const RunConfig& c, const fs::path& out) {
  const Report r = run_verify(c);
  ensure_dir(out);
  write_json(out / "verify.json", r.to_json());
  return r.pass() ? kExitPass : kExitCheckFailed;
}

int cmd_family(const RunConfig& c, const fs::path& out) {
  const auto members = build_members(c, eigen_inputs(c));
  ensure_dir(out);
  json omegas = json::array(), files = json::array(), alphas = json::array();
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::string name = "q_alpha" + std::to_string(k) + ".csv";
    write_file(out / name, csv_of(members[k].q));
    files.push_back(name);
    alphas.push_back(complex_json(members[k].alpha));
    omegas.push_back(complex_json(omega_of_member(members[k])));
  }
  write_json(out / "family.json", {{"a", c.a},
                                   {"nu", c.nu},
                                   {"alphas", alphas},
                                   {"omega_per_alpha", omegas},
                                   {"zero_mean_flag", members.front().e_zero_mean},
                                   {"files", files}});
  return kExitPass;
}

int cmd_fredholm(const RunConfig& c, const fs::path& out) {
  const EigenInputs in = eigen_inputs(c);
  const FredholmOperator op(c.a, in.h.map([](double, cplx v, Side) { return cplx{v.real(), 0.0}; }));
  ensure_dir(out);
  json eigenvalues = json::array(), pairs = json::array();
  for (const double eta : nystrom_eigenvalues(op, c.nystrom_n)) eigenvalues.push_back(eta);
  int code = kExitPass;
  try {
    EigenOptions opts;
    opts.segment_nodes = c.grid.segment_nodes;
    const auto found = eigenpairs(op, c.nystrom_n, opts);
    for (std::size_t k = 0; k < found.size(); ++k) {
      const std::string name = "eigenfunction" + std::to_string(k) + ".csv";
      write_file(out / name, csv_of(found[k].e));
      pairs.push_back({{"eta", found[k].eta}, {"residual", found[k].residual}, {"file", name}});
    }
  } catch (const NoEigenvalueError& e) {
    pairs = json::array();
    code = kExitCheckFailed;
  }
  write_json(out / "fredholm.json", {{"a", c.a},
                                     {"n", c.nystrom_n},
                                     {"eigenvalues", eigenvalues},
                                     {"eigenpairs", pairs},
                                     {"ordering", "decreasing |eta|, negative first on ties"}});
  return code;
}

int cmd_spectrum(const RunConfig& c, const fs::path& out) {
  const auto members = build_members(c, eigen_inputs(c));
  ensure_dir(out);
  json runs = json::array();
  int code = kExitPass;
  for (std::size_t k = 0; k < members.size(); ++k) {
    for (int j = 0; j <= 1; ++j) {
      json run = {{"alpha", complex_json(members[k].alpha)}, {"nu", c.nu}, {"j", j}};
      try {
        const Spectrum s =
            spectrum_of(ClosedCharacteristic(build_w(members[k].q, members[k].setup(), j, c.grid)), c.nu, j, c);
        const std::string name = "spectrum_alpha" + std::to_string(k) + "_j" + std::to_string(j) + ".csv";
        write_file(out / name, csv_of(s));
        run["file"] = name;
        run.update(spectrum_json(s));
      } catch (const Error& e) {
        run["error"] = e.what();
        code = kExitCheckFailed;
      }
      runs.push_back(run);
    }
  }
  write_json(out / "spectrum.json", {{"ordering", kOrdering}, {"runs", runs}});
  return code;
}

int cmd_isospec(const RunConfig& c, const fs::path& out) {
  const Report r = run_isospec(c);
  ensure_dir(out);
  write_json(out / "isospec.json", r.to_json());
  return r.pass() ? kExitPass : kExitCheckFailed;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Iso-bispectral potentials for delay Sturm-Liouville problems"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<std::pair<std::string, int (*)(const RunConfig&, const fs::path&)>> commands = {
      {"verify", cmd_verify}, {"family", cmd_family},   {"fredholm", cmd_fredholm},
      {"spectrum", cmd_spectrum}, {"isospec", cmd_isospec}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "seed for randomized checks")->each([&](const std::string&) { seed_given = true; });
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfigError;
  }
  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed_given) config.seed = seed;
    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (subs[k]->parsed()) {
        const int rc = commands[k].second(config, out_dir);
        std::cout << commands[k].first << ": " << (rc == kExitPass ? "pass" : "FAIL") << " (" << out_dir << ")\n";
        return rc;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitConfigError;
}

}  // namespace isospec::cli

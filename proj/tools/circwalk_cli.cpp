#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "circwalk/asymptotics.hpp"
#include "circwalk/cache.hpp"
#include "circwalk/errors.hpp"
#include "circwalk/io.hpp"
#include "circwalk/mixing.hpp"
#include "circwalk/models.hpp"
#include "circwalk/spectral.hpp"

using namespace circwalk;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kOther = 1, kUsage = 2, kCap = 3, kGuard = 4 };

struct Options {
  int n = 12, k = 6;
  std::string p = "-1:0.25,0:0.5,1:0.25";
  std::string model = "constant";
  double alpha = 0.0, beta = 1.0, a1 = 1.0, a2 = 1.0;
  std::uint64_t cap = kDefaultCap;
  std::uint64_t seed = 0;
  std::string out;
  int tmax = -1;
  double c1 = 1.0, c2 = 10.0;
  std::string cache_dir;
  std::string start;  // "worst", "ground" or positions "3 2 0"
  int steps = 100;
  int draws = 0;
  int l = 1;
  std::vector<int> ns{8, 12, 16, 20};
  bool kernel = false;
};

void add_model_options(CLI::App* sub, Options& o, bool with_model_flag = true) {
  sub->add_option("--n", o.n, "number of sites")->check(CLI::PositiveNumber);
  sub->add_option("--k", o.k, "number of particles")->check(CLI::PositiveNumber);
  sub->add_option("--p", o.p, "step distribution, e.g. \"-1:0.25,0:0.5,1:0.25\"");
  if (with_model_flag) sub->add_option("--model", o.model, "constant | asep | dimer")->check(CLI::IsMember({"constant", "asep", "dimer"}));
  sub->add_option("--alpha", o.alpha, "asep left rate");
  sub->add_option("--beta", o.beta, "asep right rate");
  sub->add_option("--a1", o.a1, "dimer weight a1");
  sub->add_option("--a2", o.a2, "dimer weight a2");
  sub->add_option("--cap", o.cap, "maximum state-space size")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "64-bit seed");
  sub->add_option("--out", o.out, "output path (stdout if omitted)");
}

ModelSpec spec_of(const Options& o) {
  ModelSpec s;
  s.n = o.n;
  s.k = o.k;
  if (o.model == "asep") {
    s.kind = ModelKind::Asep;
  } else if (o.model == "dimer") {
    s.kind = ModelKind::Dimer;
  } else {
    s.kind = ModelKind::Constant;
    s.p = StepDistribution::parse(o.p);
  }
  s.alpha = o.alpha;
  s.beta = o.beta;
  s.a1 = o.a1;
  s.a2 = o.a2;
  return s;
}

void check_nk(const Options& o) {
  if (o.k >= o.n) throw InvalidArgument("need 1 <= k < n");
}

ChainModel make_model(const Options& o) {
  check_nk(o);
  return build_model(spec_of(o), o.cap);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    io::write_atomic(o.out, text);
  }
}

void emit_json(const Options& o, json j) {
  j["schema_version"] = io::kSchemaVersion;
  emit(o, j.dump(2) + "\n");
}

json cplx_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::optional<CircleConfig> parse_start(const Options& o, bool worst_default) {
  if (o.start.empty()) return worst_default ? std::nullopt : std::optional(CircleConfig::ground(o.n, o.k));
  if (o.start == "worst") return std::nullopt;
  if (o.start == "ground") return CircleConfig::ground(o.n, o.k);
  std::vector<int> pos;
  std::istringstream in(o.start);
  for (int v; in >> v;) pos.push_back(v);
  if (!in.eof()) throw InvalidArgument("--start must be 'worst', 'ground' or positions like \"3 2 0\"");
  return CircleConfig(o.n, pos);
}

int default_tmax(const ChainModel& m) {
  return static_cast<int>(std::ceil(10.0 * std::ceil(std::log(double(m.n())) / m.gamma())));
}

const Spectrum& spectrum_for(const Options& o, const ChainModel& m, Spectrum& holder, bool& hit) {
  std::optional<SpectrumCache> cache;
  if (!o.cache_dir.empty()) cache.emplace(o.cache_dir);
  else cache = SpectrumCache::from_env();
  hit = false;
  if (!cache) return m.spectrum();
  holder = cache->get_or_compute(m, &hit);
  return holder;
}

int run_spectrum(const Options& o) {
  ChainModel m = make_model(o);
  Spectrum holder;
  bool hit = false;
  const Spectrum& s = spectrum_for(o, m, holder, hit);
  std::cerr << (hit ? "spectrum cache hit\n" : "");
  json h = io::model_json(m);
  h["artifact"] = "spectrum";
  h["orbits"] = s.entries.size();
  emit(o, io::with_json_header(h, io::spectrum_table(s)));
  return kOk;
}

int run_gap(const Options& o) {
  ChainModel m = make_model(o);
  const GapReport g = gap(m);
  json j = io::model_json(m);
  j["gamma_exact"] = g.gamma_exact;
  j["gamma_formula"] = g.gamma_formula;
  j["gamma_avg"] = g.gamma_avg;
  json ell = json::object(), ellf = json::object();
  for (auto [l, v] : g.gamma_ell) ell[std::to_string(l)] = v;
  for (auto [l, v] : g.gamma_ell_formula) ellf[std::to_string(l)] = v;
  j["gamma_ell"] = ell;
  j["gamma_ell_formula"] = ellf;
  j["lambda_I1"] = cplx_json(mixture_eigenvalue(CircleConfig::first_excited(o.n, o.k), m.p()));
  if (o.k >= 2 && o.n - o.k >= 2) {
    const LambdaI2 l2 = lambda_I2(m);
    j["lambda_I2"] = cplx_json(l2.direct);
    j["lambda_I2_closed_form"] = l2.closed_form;
  }
  emit_json(o, j);
  return kOk;
}

int run_mix(const Options& o) {
  ChainModel m = make_model(o);
  const int tmax = o.tmax >= 0 ? o.tmax : default_tmax(m);
  std::optional<CircleConfig> start = parse_start(o, m.space().size() <= 20000);
  const MixingCurve c = exact_tv_curve(m, tmax, start);
  json h = io::model_json(m);
  h["artifact"] = "mixing_curve";
  h["start"] = start ? start->to_string() : "worst";
  h["gamma"] = m.gamma();
  h["tmax"] = tmax;
  json te = json::object();
  for (double eps : default_eps_grid()) {
    const MixingTime mt = mixing_time(c, eps);
    te[io::fmt(eps)] = mt.reached ? json(mt.t) : json(nullptr);
  }
  h["t_eps"] = te;
  emit(o, io::with_json_header(h, io::curve_table(c)));
  return kOk;
}

int run_cutoff(const Options& o) {
  Options base = o;
  ModelFamily family = [base](int n) {
    Options x = base;
    x.n = n;
    x.k = n / 2;
    return make_model(x);
  };
  const std::string desc = o.model == "constant" ? "constant p=" + o.p : o.model;
  const CutoffSweep sw = cutoff_sweep(family, desc, o.ns, default_s_grid(), default_eps_grid());
  json h;
  h["artifact"] = "cutoff";
  h["family"] = desc;
  h["ns"] = o.ns;
  if (o.out.empty()) {
    std::cout << io::with_json_header(h, io::cutoff_table(sw)) << io::with_json_header(h, io::t_eps_table(sw));
  } else {
    std::filesystem::path dir(o.out);
    io::write_atomic(dir / "cutoff_profile.csv", io::with_json_header(h, io::cutoff_table(sw)));
    io::write_atomic(dir / "t_eps.csv", io::with_json_header(h, io::t_eps_table(sw)));
    const EnvelopeReport env = gamma_envelope_report(family, o.ns, default_s_grid());
    io::write_atomic(dir / "gamma_envelope.csv", io::with_json_header(h, io::envelope_table(env)));
  }
  return kOk;
}

int run_sample(const Options& o) {
  ChainModel m = make_model(o);
  json h = io::model_json(m);
  h["seed"] = o.seed;
  RngStream rng(o.seed, 0);
  if (o.draws > 0) {
    StationarySampler s(m.space());
    std::vector<CircleConfig> draws;
    for (int i = 0; i < o.draws; ++i) draws.push_back(s.draw(rng));
    h["artifact"] = "stationary_draws";
    emit(o, io::with_json_header(h, io::trajectory_table(draws)));
    return kOk;
  }
  const std::optional<CircleConfig> start = parse_start(o, false);
  if (!start) throw InvalidArgument("sample needs a concrete --start");
  h["artifact"] = "trajectory";
  h["steps"] = o.steps;
  emit(o, io::with_json_header(h, io::trajectory_table(simulate(rng, m, *start, o.steps))));
  return kOk;
}

int run_classify(const Options& o) {
  check_nk(o);
  const auto classes = classify_orbits(o.n, o.k, o.c1, o.c2, o.cap);
  json h;
  h["artifact"] = "classification";
  h["n"] = o.n;
  h["k"] = o.k;
  h["c1"] = o.c1;
  h["c2"] = o.c2;
  emit(o, io::with_json_header(h, io::classification_table(classes)));
  return kOk;
}

int run_saddle(const Options& o) {
  check_nk(o);
  const SaddleData d = solve_r(o.n, o.k, o.l);
  const SaddleApprox a = saddle_approx(o.n, o.k, o.l);
  const SaddleGamma g = gamma_from_saddle(o.n, o.k, o.l);
  json j;
  j["n"] = o.n;
  j["k"] = o.k;
  j["l"] = o.l;
  j["r"] = d.r;
  j["r_closed"] = d.r_closed;
  j["r_gap"] = d.r_gap;
  j["f0"] = d.f0;
  j["curvature"] = d.curvature;
  j["approx_alpha_ell"] = a.approx;
  j["exact_alpha_ell"] = a.exact;
  j["rel_error"] = a.rel_error;
  j["kr"] = a.kr;
  j["small_r_regime"] = a.small_r_regime;
  j["gamma_saddle"] = g.formula;
  j["gamma_saddle_im_form"] = g.im_form;
  j["gamma_exact"] = g.exact;
  j["gamma_rel_gap"] = g.rel_gap;
  emit_json(o, j);
  return kOk;
}

json audit_json(const ChainModel& m) {
  const AssumptionAudit a = audit_assumptions(m.p(), m.n(), m.k());
  json j = io::model_json(m);
  j["audit"] = {{"eta_hat", a.eta_hat},   {"mean_abs", a.mean_abs}, {"mean_abs_over_k", a.mean_abs_over_k},
                {"delta_hat", a.delta_hat}, {"Kg_hat", a.Kg_hat},   {"Ka_hat", a.Ka_hat},
                {"gcd_ok", a.gcd_ok},       {"reducible", a.reducible}};
  return j;
}

int run_audit(const Options& o) {
  check_nk(o);
  // Audit reports on any p, including ones the constant builder would reject.
  if (o.model == "constant") {
    ChainModel m(o.n, o.k, StepDistribution::parse(o.p), o.cap);
    m.label = "constant p=" + m.p().to_string();
    emit_json(o, audit_json(m));
  } else {
    emit_json(o, audit_json(make_model(o)));
  }
  return kOk;
}

int run_model(const Options& o, const std::string& kind) {
  Options x = o;
  x.model = kind;
  ChainModel m = make_model(x);
  json j = audit_json(m);
  j["weights"] = json::object();
  for (auto [l, w] : m.p().weights()) j["weights"][std::to_string(l)] = w;
  if (kind == "dimer") {
    const DimerCheck d = dimer_check(o.n, o.k, o.a1, o.a2);
    j["dimer"] = {{"lambda_I1_closed", cplx_json(d.lambda_I1_closed)},
                  {"lambda_I1_spectral", cplx_json(d.lambda_I1_spectral)},
                  {"lambda_residual", d.lambda_residual},
                  {"fourier_residual", d.fourier_residual},
                  {"gamma_asymptotic", d.gamma_asymptotic},
                  {"gamma_asymptotic_alt", d.gamma_asymptotic_alt},
                  {"gamma_exact", d.gamma_exact},
                  {"log_n_over_gamma_asymptotic", d.log_n_over_gamma_asymptotic}};
  }
  if (o.kernel) {
    json h = j;
    h["artifact"] = "kernel";
    emit(o, io::with_json_header(h, io::kernel_table(m.kernel())));
  } else {
    emit_json(o, j);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact spectra, mixing curves and saddle-point checks for non-intersecting walks on a circle"};
  app.require_subcommand(1);
  Options o;

  auto* spectrum = app.add_subcommand("spectrum", "orbit-compressed spectrum as CSV");
  add_model_options(spectrum, o);
  spectrum->add_option("--cache-dir", o.cache_dir, "spectrum cache directory (overrides CIRCWALK_CACHE_DIR)");

  auto* gap_cmd = app.add_subcommand("gap", "spectral gap report as JSON");
  add_model_options(gap_cmd, o);

  auto* mix = app.add_subcommand("mix", "exact TV mixing curve as CSV");
  add_model_options(mix, o);
  mix->add_option("--tmax", o.tmax, "last time step (default 10 ceil(log n / gamma))");
  mix->add_option("--start", o.start, "'worst', 'ground' or positions \"3 2 0\"");

  auto* cutoff = app.add_subcommand("cutoff", "cutoff profile sweep over n with k = n/2");
  add_model_options(cutoff, o);
  cutoff->add_option("--ns", o.ns, "values of n")->delimiter(',');

  auto* sample = app.add_subcommand("sample", "simulate a trajectory or draw from the stationary law");
  add_model_options(sample, o);
  sample->add_option("--steps", o.steps, "trajectory length")->check(CLI::NonNegativeNumber);
  sample->add_option("--start", o.start, "'ground' or positions \"3 2 0\"");
  sample->add_option("--stationary", o.draws, "draw this many stationary samples instead");

  auto* classify = app.add_subcommand("classify", "J1/J2/J3 orbit classification as CSV");
  add_model_options(classify, o);
  classify->add_option("--c1", o.c1, "J1 threshold constant");
  classify->add_option("--c2", o.c2, "J3 displacement constant");

  auto* saddle = app.add_subcommand("saddle", "saddle-point data for the ground state");
  add_model_options(saddle, o);
  saddle->add_option("--l", o.l, "jump size")->check(CLI::PositiveNumber);

  auto* audit = app.add_subcommand("audit", "assumption audit of a step distribution");
  add_model_options(audit, o);

  auto* model = app.add_subcommand("model", "build a preset model");
  model->require_subcommand(1);
  std::string kind;
  for (const char* name : {"constant", "asep", "dimer"}) {
    auto* sub = model->add_subcommand(name, std::string(name) + " preset");
    add_model_options(sub, o, false);
    sub->add_flag("--kernel", o.kernel, "emit the sparse kernel as CSV instead of JSON");
    sub->callback([&kind, name] { kind = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*spectrum) return run_spectrum(o);
    if (*gap_cmd) return run_gap(o);
    if (*mix) return run_mix(o);
    if (*cutoff) return run_cutoff(o);
    if (*sample) return run_sample(o);
    if (*classify) return run_classify(o);
    if (*saddle) return run_saddle(o);
    if (*audit) return run_audit(o);
    if (*model) return run_model(o, kind);
  } catch (const StateSpaceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCap;
  } catch (const NumericalGuard& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kGuard;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kUsage;
}

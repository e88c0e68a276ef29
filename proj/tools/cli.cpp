#include "cli.hpp"

#include "sldp/mcverify.hpp"
#include "sldp/rates.hpp"
#include "sldp/samplers.hpp"
#include "sldp/selftest.hpp"
#include "sldp/variational.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace sldp::cli {

namespace {

// --- option table -------------------------------------------------------------

enum class Kind { Int, Double, String, Vector, VectorList, IntList, Flag, StringList };

struct OptDef {
  const char* flag;
  const char* key;
  Kind kind;
  const char* help;
};

std::string command_summary(const std::string& name) {
  static const std::map<std::string, std::string> m{
      {"sample", "draw X^(n) or its projection"},
      {"rate-quenched", "quenched rate function on a grid or at points"},
      {"rate-annealed", "annealed rate function on a grid or at points"},
      {"var-formula", "Gaussian-subfamily bound on the variational formula"},
      {"verify-ldp", "Monte Carlo tail rates versus n"},
      {"slln", "distance of frame row measures to the Gaussian"},
      {"phi-n", "finite-n scaled log-mgf of the projection"},
      {"self-test", "built-in invariant checks"}};
  return m.at(name);
}

const std::map<std::string, std::vector<OptDef>>& command_options() {
  static const std::map<std::string, std::vector<OptDef>> m{
      {"sample",
       {{"--k", "k", Kind::Int, "projection dimension"},
        {"--n", "n", Kind::Int, "ambient dimension"},
        {"--count", "count", Kind::Int, "number of samples"},
        {"--mode", "mode", Kind::String, "quenched (one frame) or annealed (fresh frames)"},
        {"--what", "what", Kind::String, "projection or x"}}},
      {"rate-quenched",
       {{"--k", "k", Kind::Int, "dimension of x"},
        {"--nu", "nu", Kind::String, "standard | gaussian:<json> | discrete:<csv>"},
        {"--grid", "grid", Kind::String, "lo:hi:step sweep along --direction"},
        {"--x", "x", Kind::VectorList, "evaluation point (comma-separated); repeatable"},
        {"--direction", "direction", Kind::Vector, "sweep direction (default e1)"}}},
      {"rate-annealed",
       {{"--k", "k", Kind::Int, "dimension of x"},
        {"--grid", "grid", Kind::String, "lo:hi:step sweep along --direction"},
        {"--x", "x", Kind::VectorList, "evaluation point (comma-separated); repeatable"},
        {"--direction", "direction", Kind::Vector, "sweep direction (default e1)"},
        {"--radial", "radial", Kind::Flag, "evaluate once per radius |g|"}}},
      {"var-formula", {{"--x", "x", Kind::Vector, "query point (comma-separated)"}}},
      {"verify-ldp",
       {{"--k", "k", Kind::Int, "projection dimension"},
        {"--event", "event", Kind::String, "halfspace | outside | inside"},
        {"--threshold", "threshold", Kind::Double, "halfspace threshold"},
        {"--direction", "direction", Kind::Vector, "halfspace normal (default e1)"},
        {"--radius", "radius", Kind::Double, "ball radius"},
        {"--n-grid", "nGrid", Kind::IntList, "comma-separated dimensions n"},
        {"--samples", "samples", Kind::Int, "samples per n"},
        {"--mode", "mode", Kind::String, "quenched or annealed"},
        {"--tilt", "tilt", Kind::Flag, "exponential tilting with exact reweighting"}}},
      {"slln",
       {{"--k", "k", Kind::Int, "frame width"},
        {"--q", "q", Kind::Double, "transport exponent in (0, 2)"},
        {"--n-grid", "nGrid", Kind::IntList, "comma-separated dimensions n"},
        {"--repeats", "repeats", Kind::Int, "frames per n"},
        {"--directions", "directions", Kind::Int, "slicing directions"}}},
      {"phi-n",
       {{"--n-grid", "nGrid", Kind::IntList, "comma-separated dimensions n"},
        {"--t1", "t1", Kind::Vector, "first argument (comma-separated)"},
        {"--t2", "t2", Kind::Double, "second argument (< T)"},
        {"--samples", "samples", Kind::Int, "frame draws per n"},
        {"--joint", "joint", Kind::Flag, "sample (xi, A) jointly instead of integrating xi"}}},
      {"self-test", {{"--only", "only", Kind::StringList, "run only the named checks"}}},
  };
  return m;
}

bool uses_solver(const std::string& cmd) {
  return cmd == "rate-quenched" || cmd == "rate-annealed" || cmd == "var-formula" || cmd == "verify-ldp";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(what + ": '" + s + "' is not a number");
  }
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(what + ": '" + s + "' is not an integer");
  }
}

Json vector_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// Finite doubles as numbers, the rest as strings ("inf", "-inf", "nan").
Json number_json(double v) { return std::isfinite(v) ? Json(v) : Json(format_double(v)); }

// --- typed parameter access -----------------------------------------------------

class Params {
 public:
  explicit Params(Json& j) : j_(j) {}

  bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  T get(const char* key, T fallback) {
    if (!j_.contains(key)) j_[key] = fallback;
    return get<T>(key);
  }
  template <class T>
  T get(const char* key) const {
    if (!j_.contains(key)) throw ValidationError(std::string("missing parameter '") + key + "'");
    try {
      return j_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw ValidationError(std::string("parameter '") + key + "' has the wrong type");
    }
  }
  Vec vec(const char* key) const {
    const auto v = get<std::vector<double>>(key);
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

 private:
  Json& j_;
};

void check_keys(const ExperimentSpec& spec) {
  std::set<std::string> allowed;
  for (const auto& d : command_options().at(spec.command)) allowed.insert(d.key);
  if (uses_solver(spec.command)) allowed.insert("solver");
  if (spec.command == "rate-quenched" || spec.command == "rate-annealed") allowed.insert("nu");
  for (const auto& [key, _] : spec.parameters.items()) {
    if (!allowed.count(key)) throw ValidationError("parameter '" + key + "' does not apply to " + spec.command);
  }
}

SolverConfig solver_of(Params& p) {
  if (!p.has("solver")) return {};
  return solver_config_from_json(p.get<Json>("solver"));
}

int positive(Params& p, const char* key, int fallback) {
  const int v = p.get<int>(key, fallback);
  if (v < 1) throw ValidationError(std::string(key) + " must be >= 1");
  return v;
}

std::vector<int> n_grid_of(Params& p, std::vector<int> fallback) {
  auto g = p.get<std::vector<int>>("nGrid", std::move(fallback));
  if (g.empty()) throw ValidationError("nGrid is empty");
  return g;
}

// --- commands -------------------------------------------------------------------------

std::vector<Vec> rate_points(Params& p, int& k) {
  const bool has_x = p.has("x"), has_grid = p.has("grid");
  if (has_x == has_grid) throw ValidationError("give exactly one of --grid or --x");
  std::vector<Vec> pts;
  if (has_x) {
    for (const auto& v : p.get<std::vector<std::vector<double>>>("x")) {
      pts.push_back(Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    if (pts.empty()) throw ValidationError("no evaluation points");
    if (!p.has("k")) p.get<int>("k", static_cast<int>(pts[0].size()));
    k = p.get<int>("k");
    for (const auto& x : pts) {
      if (x.size() != k) throw ValidationError("every --x must have k = " + std::to_string(k) + " coordinates");
    }
    return pts;
  }
  k = positive(p, "k", 1);
  Vec u = Vec::Zero(k);
  u(0) = 1.0;
  if (p.has("direction")) {
    u = p.vec("direction");
    if (u.size() != k || !(u.norm() > 0.0)) throw ValidationError("direction must be a nonzero k-vector");
    u.normalize();
  }
  for (double g : parse_grid(p.get<std::string>("grid"))) pts.push_back(g * u);
  return pts;
}

int write_curve(const ExperimentSpec& spec, RateCurve& curve) {
  emit_rate_curve(curve, spec.output, metadata_header(spec));
  for (const auto& pt : curve.points) {
    if (!pt.converged) return kNumeric;
  }
  return kOk;
}

int cmd_rate_quenched(ExperimentSpec& spec, Params& p) {
  int k = 0;
  const auto pts = rate_points(p, k);
  const NuSpec nu = parse_nu(p.get<std::string>("nu", "standard"), k);
  const SolverConfig cfg = solver_of(p);
  RateCurve curve{"quenched", spec.family, describe_nu(nu), cfg, {}, {}};
  for (int i = 0; i < k; ++i) curve.argmaxNames.push_back("t1_" + std::to_string(i + 1));
  curve.argmaxNames.push_back("t2");
  for (const auto& x : pts) {
    const auto r = j_quenched(spec.family, nu, x, cfg);
    curve.points.push_back({x, r.value, r.converged, r.tau, r.argmax});
  }
  return write_curve(spec, curve);
}

int cmd_rate_annealed(ExperimentSpec& spec, Params& p) {
  int k = 0;
  const auto pts = rate_points(p, k);
  const bool radial = p.get<bool>("radial", false);
  const SolverConfig cfg = solver_of(p);
  RateCurve curve{"annealed", spec.family, "-", cfg, {}, {"s1", "s2"}, "c"};
  std::map<double, RateResult> by_radius;
  for (const auto& x : pts) {
    RateResult r;
    if (radial) {
      // The annealed rate depends on x only through its norm.
      const double radius = x.norm();
      auto it = by_radius.find(radius);
      if (it == by_radius.end()) {
        Vec e = Vec::Zero(k);
        e(0) = radius;
        it = by_radius.emplace(radius, j_annealed(spec.family, e, cfg)).first;
      }
      r = it->second;
    } else {
      r = j_annealed(spec.family, x, cfg);
    }
    curve.points.push_back({x, r.value, r.converged, r.tau, r.argmax});
  }
  return write_curve(spec, curve);
}

Json meta_json(const ExperimentSpec& spec) {
  const std::string body = to_json(spec).dump();
  Json m;
  m["specHash"] = hex64(fnv1a64(body));
  m["seed"] = spec.seed;
  m["build"] = build_describe();
  m["spec"] = to_json(spec);
  return m;
}

int cmd_var_formula(ExperimentSpec& spec, Params& p) {
  const Vec x = p.vec("x");
  if (x.size() < 1) throw ValidationError("--x needs at least one coordinate");
  GaussianSearch search;
  search.solver = solver_of(p);
  const auto r = variational_rhs(spec.family, x, search);
  Json out;
  out["meta"] = meta_json(spec);
  out["x"] = vector_json(x);
  out["jan"] = number_json(r.jan);
  out["rhsUpper"] = number_json(r.rhs_upper);
  out["argminSigma"] = Json::array();
  for (Eigen::Index i = 0; i < r.sigma2.size(); ++i) out["argminSigma"].push_back(r.sigma2(i));
  out["argminCov"] = to_json(r.argmin)["cov"];
  out["jquStandard"] = number_json(r.jqu_standard);
  out["converged"] = r.converged;
  out["evaluations"] = r.evaluations;
  out["note"] = "rhsUpper minimizes over centered Gaussians only and is an upper bound on the full infimum";
  write_text(spec.output, out.dump(2) + "\n");
  return r.converged ? kOk : kNumeric;
}

TailEvent event_of(Params& p, int k) {
  const std::string kind = p.get<std::string>("event", "halfspace");
  if (kind == "halfspace") {
    Vec u = Vec::Zero(k);
    u(0) = 1.0;
    if (p.has("direction")) u = p.vec("direction");
    if (u.size() != k) throw ValidationError("direction must have k coordinates");
    return TailEvent::halfspace(u, p.get<double>("threshold", 1.0));
  }
  if (kind == "outside" || kind == "inside") return TailEvent::norm_ball(p.get<double>("radius", 1.0), kind == "outside");
  throw ValidationError("event must be halfspace, outside or inside");
}

int cmd_verify_ldp(ExperimentSpec& spec, Params& p, int jobs) {
  const int k = positive(p, "k", 1);
  const TailEvent ev = event_of(p, k);
  const auto grid = n_grid_of(p, {100, 400, 1600});
  const int samples = positive(p, "samples", 100000);
  const FrameMode mode = frame_mode_from_string(p.get<std::string>("mode", "quenched"));
  TailOptions opts;
  opts.tilt = p.get<bool>("tilt", false);
  opts.jobs = jobs;
  opts.solver = solver_of(p);
  const auto est = estimate_tail_rate(spec.family, k, ev, grid, samples, mode, RngStream(spec.seed), opts);

  double analytic = 0.0;
  const Vec x = ev.dominating_point(k);
  const bool rare = !(ev.kind == TailEvent::Kind::NormBall && !ev.complement) && x.norm() > 0.0;
  if (rare) {
    analytic = mode == FrameMode::Quenched ? j_quenched(spec.family, NuSpec::standard(k), x, opts.solver).value
                                           : j_annealed(spec.family, x, opts.solver).value;
  }
  std::ostringstream os;
  os << metadata_header(spec) << '\n';
  os << "# event=" << ev.describe() << " mode=" << to_string(mode) << " family=" << spec.family.name()
     << " analytic_rate=" << format_double(analytic) << '\n';
  os << "n,pHat,logRate,stdErr,samples,tilted,hits,ess,zeroHits,lowHits,analyticRate\n";
  bool flagged = false;
  for (const auto& e : est) {
    os << e.n << ',' << format_double(e.pHat) << ',' << format_double(e.logRate) << ','
       << format_double(e.stdErr) << ',' << e.samples << ',' << (e.tilted ? "true" : "false") << ','
       << e.hits << ',' << format_double(e.ess) << ',' << (e.zeroHits ? "true" : "false") << ','
       << (e.lowHits ? "true" : "false") << ',' << format_double(analytic) << '\n';
    if (e.zeroHits) {
      flagged = true;
      std::cerr << "n=" << e.n << ": no sample hit the event; rate reported as inf (try --tilt)\n";
    }
  }
  write_text(spec.output, os.str());
  return flagged ? kNumeric : kOk;
}

int cmd_slln(ExperimentSpec& spec, Params& p, int jobs) {
  const int k = positive(p, "k", 1);
  const double q = p.get<double>("q", 1.0);
  const auto grid = n_grid_of(p, {100, 1000, 10000});
  const int repeats = positive(p, "repeats", 10);
  const int dirs = positive(p, "directions", 64);
  const auto rows = slln_experiment(k, q, grid, repeats, RngStream(spec.seed), dirs, jobs);
  std::ostringstream os;
  os << metadata_header(spec) << '\n';
  os << "n,mean,sd,secondMoment";
  for (int j = 0; j < k; ++j) os << ",marginal" << j + 1;
  os << '\n';
  for (const auto& r : rows) {
    os << r.n << ',' << format_double(r.mean) << ',' << format_double(r.sd) << ',' << format_double(r.secondMoment);
    for (int j = 0; j < k; ++j) os << ',' << format_double(r.marginalMean(j));
    os << '\n';
  }
  write_text(spec.output, os.str());
  return kOk;
}

int cmd_phi_n(ExperimentSpec& spec, Params& p, int jobs) {
  const auto grid = n_grid_of(p, {50, 200, 800});
  const Vec t1 = p.has("t1") ? p.vec("t1") : Vec::Constant(1, 0.5);
  if (!p.has("t1")) p.get<std::vector<double>>("t1", {0.5});
  const double t2 = p.get<double>("t2", 0.0);
  const int samples = positive(p, "samples", 2000);
  const bool joint = p.get<bool>("joint", false);
  std::ostringstream os;
  os << metadata_header(spec) << '\n';
  os << "n,value,stdErr,ess,unstable,conditional\n";
  bool unstable = false;
  const RngStream rng(spec.seed);
  for (int n : grid) {
    const auto e = phi_n_estimate(spec.family, n, t1, t2, samples, rng.split(static_cast<std::uint64_t>(n)), joint, jobs);
    os << n << ',' << format_double(e.value) << ',' << format_double(e.stdErr) << ',' << format_double(e.ess) << ','
       << (e.unstable ? "true" : "false") << ',' << (e.conditional ? "true" : "false") << '\n';
    unstable = unstable || e.unstable;
  }
  write_text(spec.output, os.str());
  return unstable ? kNumeric : kOk;
}

int cmd_sample(ExperimentSpec& spec, Params& p) {
  const int k = positive(p, "k", 1);
  const int n = positive(p, "n", 100);
  const int count = positive(p, "count", 10);
  const FrameMode mode = frame_mode_from_string(p.get<std::string>("mode", "quenched"));
  const std::string what = p.get<std::string>("what", "projection");
  if (what != "projection" && what != "x") throw ValidationError("--what must be projection or x");
  if (n <= k) throw ValidationError("sample needs n > k");
  const RngStream rng(spec.seed);
  RngStream frame_rng = rng.split(0);
  const StiefelFrame fixed = haar_stiefel(n, k, frame_rng);
  std::ostringstream os;
  os << metadata_header(spec) << '\n';
  const int cols = what == "x" ? n : k;
  for (int j = 0; j < cols; ++j) os << (j ? "," : "") << (what == "x" ? "x" : "y") << j + 1;
  os << '\n';
  for (int i = 0; i < count; ++i) {
    RngStream lane = rng.split(static_cast<std::uint64_t>(i) + 1);
    const Vec x = sample_X(spec.family, n, lane);
    Vec row = x;
    if (what == "projection") {
      row = mode == FrameMode::Quenched ? project(fixed, x) : project(haar_stiefel(n, k, lane), x);
    }
    for (int j = 0; j < cols; ++j) os << (j ? "," : "") << format_double(row(j));
    os << '\n';
  }
  write_text(spec.output, os.str());
  return kOk;
}

int cmd_self_test(ExperimentSpec& spec, Params& p, int jobs) {
  SelfTestOptions o;
  o.seed = spec.seed;
  o.jobs = jobs;
  o.only = p.get<std::vector<std::string>>("only", {});
  for (const auto& name : o.only) {
    const auto& all = self_test_checks();
    if (std::find(all.begin(), all.end(), name) == all.end()) throw ValidationError("unknown check '" + name + "'");
  }
  Json report = Json::array();
  bool all_pass = true;
  run_self_test(o, [&](const CheckResult& r) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << std::fixed << std::setprecision(2) << r.seconds
              << " s): " << r.detail << std::endl;
    std::cout.unsetf(std::ios::floatfield);
    all_pass = all_pass && r.pass;
    report.push_back(Json{{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  });
  if (!spec.output.empty() && spec.output != "-") {
    Json out;
    out["meta"] = meta_json(spec);
    out["checks"] = report;
    write_text(spec.output, out.dump(2) + "\n");
  }
  return all_pass ? kOk : kFailure;
}

}  // namespace

// --- parsing helpers ------------------------------------------------------------------

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw ValidationError("grid must look like lo:hi:step");
  const double lo = parse_double(parts[0], "grid lo");
  const double hi = parse_double(parts[1], "grid hi");
  const double step = parse_double(parts[2], "grid step");
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("grid needs finite bounds and step > 0");
  if (hi < lo) throw ValidationError("grid is empty (hi < lo)");
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 10000000) throw ValidationError("grid has too many points");
  std::vector<double> g(count);
  for (long i = 0; i < count; ++i) g[i] = lo + static_cast<double>(i) * step;
  return g;
}

Vec parse_vector(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(parse_double(cell, "vector entry"));
  if (v.empty()) throw ValidationError("empty vector '" + text + "'");
  return Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

int run(ExperimentSpec& spec, int jobs) {
  const auto& cmds = experiment_commands();
  if (std::find(cmds.begin(), cmds.end(), spec.command) == cmds.end()) {
    throw ValidationError("unknown command '" + spec.command + "'");
  }
  check_keys(spec);
  Params p(spec.parameters);
  if (spec.command == "rate-quenched") return cmd_rate_quenched(spec, p);
  if (spec.command == "rate-annealed") return cmd_rate_annealed(spec, p);
  if (spec.command == "var-formula") return cmd_var_formula(spec, p);
  if (spec.command == "verify-ldp") return cmd_verify_ldp(spec, p, jobs);
  if (spec.command == "slln") return cmd_slln(spec, p, jobs);
  if (spec.command == "phi-n") return cmd_phi_n(spec, p, jobs);
  if (spec.command == "sample") return cmd_sample(spec, p);
  return cmd_self_test(spec, p, jobs);
}

int main(int argc, const char* const* argv) {
  CLI::App app{"Large deviations of random projections onto Stiefel frames"};
  app.require_subcommand(1);

  struct Common {
    std::string family = "product-gaussian";
    std::string p, qstar, seed = "1", out = "-", spec, solver;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  } common;
  std::map<std::string, std::map<std::string, std::string>> scalars;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> lists;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::map<std::string, CLI::Option*>> handles;

  for (const auto& [name, defs] : command_options()) {
    CLI::App* sub = app.add_subcommand(name, command_summary(name));
    sub->add_option("--family", common.family, "product-gaussian | product-custom | cone-lp | ball-lp");
    sub->add_option("--p", common.p, "exponent p of the family");
    sub->add_option("--qstar", common.qstar, "moment exponent q* (family default if omitted)");
    sub->add_option("--seed", common.seed, "64-bit unsigned seed");
    sub->add_option("--jobs", common.jobs, "worker threads");
    sub->add_option("--out", common.out, "output path ('-' for stdout)");
    sub->add_option("--spec", common.spec, "experiment spec JSON; its values override flags");
    if (uses_solver(name)) sub->add_option("--solver", common.solver, "solver settings: JSON text or file");
    for (const auto& d : defs) {
      CLI::Option* opt = nullptr;
      if (d.kind == Kind::Flag) {
        opt = sub->add_flag(d.flag, flags[name][d.key], d.help);
      } else if (d.kind == Kind::VectorList || d.kind == Kind::StringList) {
        opt = sub->add_option(d.flag, lists[name][d.key], d.help);
      } else {
        opt = sub->add_option(d.flag, scalars[name][d.key], d.help);
      }
      handles[name][d.key] = opt;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    ExperimentSpec spec;
    spec.command = name;
    Json fam;
    fam["kind"] = common.family;
    if (!common.p.empty()) fam["p"] = parse_double(common.p, "--p");
    if (!common.qstar.empty()) fam["qStar"] = parse_double(common.qstar, "--qstar");
    const std::string seed_text = trim(common.seed);
    if (seed_text.empty() || seed_text.find_first_not_of("0123456789") != std::string::npos) {
      throw ValidationError("--seed must be a nonnegative integer");
    }
    try {
      spec.seed = std::stoull(seed_text);
    } catch (const std::exception&) {
      throw ValidationError("--seed does not fit in 64 bits");
    }
    spec.output = common.out;

    for (const auto& d : command_options().at(name)) {
      if (handles[name][d.key]->count() == 0) continue;
      const std::string what = d.flag;
      const std::string& raw = scalars[name][d.key];
      switch (d.kind) {
        case Kind::Int: spec.parameters[d.key] = parse_int(raw, what); break;
        case Kind::Double: spec.parameters[d.key] = parse_double(raw, what); break;
        case Kind::String: spec.parameters[d.key] = raw; break;
        case Kind::Vector: spec.parameters[d.key] = vector_json(parse_vector(raw)); break;
        case Kind::IntList: {
          Json a = Json::array();
          std::stringstream ss(raw);
          std::string cell;
          while (std::getline(ss, cell, ',')) a.push_back(parse_int(cell, what));
          spec.parameters[d.key] = a;
          break;
        }
        case Kind::Flag: spec.parameters[d.key] = flags[name][d.key]; break;
        case Kind::VectorList: {
          Json a = Json::array();
          for (const auto& s : lists[name][d.key]) a.push_back(vector_json(parse_vector(s)));
          spec.parameters[d.key] = a;
          break;
        }
        case Kind::StringList: spec.parameters[d.key] = lists[name][d.key]; break;
      }
    }
    if (!common.solver.empty()) {
      const std::string t = trim(common.solver);
      const Json s = !t.empty() && t[0] == '{' ? parse_json(t, "--solver") : read_json_file(common.solver);
      solver_config_from_json(s);
      spec.parameters["solver"] = s;
    }

    if (!common.spec.empty()) {
      Json file = read_json_file(common.spec);
      if (!file.is_object()) throw ValidationError(common.spec + ": spec must be a JSON object");
      if (!file.contains("command")) file["command"] = name;
      const ExperimentSpec loaded = experiment_spec_from_json(file);
      if (loaded.command != name) {
        throw ValidationError(common.spec + ": spec is for '" + loaded.command + "', not '" + name + "'");
      }
      if (file.contains("family")) {
        spec.family = loaded.family;
        fam = Json();
      }
      if (file.contains("seed")) spec.seed = loaded.seed;
      if (file.contains("output")) spec.output = loaded.output;
      for (const auto& [key, value] : loaded.parameters.items()) spec.parameters[key] = value;
    }
    if (!fam.is_null()) spec.family = family_from_json(fam);
    return run(spec, common.jobs);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const DegenerateInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace sldp::cli

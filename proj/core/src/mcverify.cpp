#include "sldp/mcverify.hpp"

#include "sldp/log_mgf.hpp"
#include "sldp/measures.hpp"
#include "sldp/rates.hpp"
#include "sldp/samplers.hpp"
#include "sldp/wasserstein.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace sldp {

// --- events -----------------------------------------------------------------

TailEvent TailEvent::halfspace(Vec direction, double threshold) {
  const double norm = direction.norm();
  if (direction.size() < 1 || !(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("halfspace direction must be a nonzero finite vector");
  }
  if (!std::isfinite(threshold)) throw ValidationError("halfspace threshold must be finite");
  TailEvent e;
  e.kind = Kind::Halfspace;
  e.direction = direction / norm;
  e.threshold = threshold;
  return e;
}

TailEvent TailEvent::norm_ball(double radius, bool complement) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ValidationError("ball radius must be finite and >= 0");
  TailEvent e;
  e.kind = Kind::NormBall;
  e.radius = radius;
  e.complement = complement;
  return e;
}

bool TailEvent::contains(const Vec& y) const {
  if (kind == Kind::Halfspace) return direction.dot(y) >= threshold;
  const double r = y.norm();
  return complement ? r >= radius : r <= radius;
}

Vec TailEvent::dominating_point(int k) const {
  if (kind == Kind::Halfspace) return std::max(threshold, 0.0) * direction;
  Vec x = Vec::Zero(k);
  if (complement) x(0) = radius;
  return x;
}

std::string TailEvent::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::Halfspace) {
    os << "halfspace(u=";
    for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << direction(i);
    os << "; x=" << threshold << ")";
  } else {
    os << (complement ? "outside" : "inside") << "(r=" << radius << ")";
  }
  return os.str();
}

std::string to_string(FrameMode mode) { return mode == FrameMode::Quenched ? "quenched" : "annealed"; }

FrameMode frame_mode_from_string(const std::string& name) {
  if (name == "quenched") return FrameMode::Quenched;
  if (name == "annealed") return FrameMode::Annealed;
  throw ValidationError("unknown frame mode '" + name + "' (expected quenched or annealed)");
}

namespace {

// log of a sum of exponentials, kept as max + log(scaled sum). The scaled
// sum is compensated (Neumaier) so batch merges are order-stable.
struct LogSum {
  double max = -kInf;
  double sum = 0.0;
  double comp = 0.0;

  void rescale(double new_max) {
    const double f = std::exp(max - new_max);
    sum *= f;
    comp *= f;
    max = new_max;
  }
  void add_scaled(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  void add(double log_value) {
    if (log_value == -kInf) return;
    if (log_value > max) rescale(log_value);
    add_scaled(std::exp(log_value - max));
  }
  void merge(const LogSum& o) {
    if (o.max == -kInf) return;
    if (o.max > max) rescale(o.max);
    const double f = std::exp(o.max - max);
    add_scaled(o.sum * f);
    add_scaled(o.comp * f);
  }
  double log() const { return max == -kInf ? -kInf : max + std::log(sum + comp); }
};

struct WeightStats {
  long count = 0;
  LogSum w;
  LogSum w2;

  void add(double log_w) {
    ++count;
    w.add(log_w);
    w2.add(2.0 * log_w);
  }
  void merge(const WeightStats& o) {
    count += o.count;
    w.merge(o.w);
    w2.merge(o.w2);
  }
  // Relative variance N E[w^2] / (E[w])^2 - 1 of the weights over N draws.
  double relative_variance(long n) const {
    if (count == 0) return kInf;
    return std::max(0.0, std::exp(std::log(static_cast<double>(n)) + w2.log() - 2.0 * w.log()) - 1.0);
  }
  double ess() const { return count == 0 ? 0.0 : std::exp(2.0 * w.log() - w2.log()); }
};

// Runs fn(b) for b in [0, batches) on up to `jobs` threads. Results are
// written by index, so the caller merges them in a fixed order.
template <class F>
void run_batches(long batches, int jobs, F&& fn) {
  const long workers = std::clamp<long>(jobs, 1, std::max<long>(1, batches));
  if (workers == 1) {
    for (long b = 0; b < batches; ++b) fn(b);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (long t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const long b = next.fetch_add(1);
        if (b >= batches) return;
        try {
          fn(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = batches;
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void check_grid(const std::vector<int>& n_grid, int k) {
  if (n_grid.empty()) throw ValidationError("n grid is empty");
  for (int n : n_grid) {
    if (n <= k) throw ValidationError("every n in the grid must exceed k");
  }
}

// Exponential tilt of the base coordinates: xi_i has density proportional
// to exp(s_i y + t2 r(y) - |y|^p / p).
struct Tilt {
  Vec t1;
  double t2 = 0.0;
};

double analytic_rate(const MeasureFamily& family, int k, const TailEvent& event, FrameMode mode,
                     const SolverConfig& cfg) {
  const Vec x = event.dominating_point(k);
  if (event.kind == TailEvent::Kind::NormBall && !event.complement) return 0.0;
  if (x.norm() == 0.0) return 0.0;
  return mode == FrameMode::Quenched ? j_quenched(family, NuSpec::standard(k), x, cfg).value
                                     : j_annealed(family, x, cfg).value;
}

}  // namespace

std::vector<RateEstimate> estimate_tail_rate(const MeasureFamily& family, int k,
                                             const TailEvent& event,
                                             const std::vector<int>& n_grid, long samples_per,
                                             FrameMode mode, const RngStream& rng,
                                             const TailOptions& options) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (event.kind == TailEvent::Kind::Halfspace && event.dim() != k) {
    throw ValidationError("halfspace direction has the wrong dimension");
  }
  if (samples_per < 1) throw ValidationError("samples per n must be >= 1");
  if (options.batchSize < 1) throw ValidationError("batch size must be >= 1");
  check_grid(n_grid, k);
  const int n_max = *std::max_element(n_grid.begin(), n_grid.end());

  bool tilt = options.tilt;
  if (tilt && event.kind == TailEvent::Kind::Halfspace && event.threshold <= 0.0) tilt = false;
  Tilt tilt_params;
  if (tilt) {
    if (event.kind != TailEvent::Kind::Halfspace) {
      throw DomainError("tilting is implemented for halfspace events only");
    }
    if (mode == FrameMode::Annealed && !family.closed_form()) {
      throw DomainError("annealed tilting is implemented for the product-gaussian family only");
    }
    const auto rr = j_quenched(family, NuSpec::standard(k), event.dominating_point(k), options.solver);
    if (!std::isfinite(rr.value)) throw DomainError("event has infinite rate; nothing to tilt toward");
    tilt_params.t1 = rr.argmax.head(k);
    tilt_params.t2 = family.r_is_one() ? 0.0 : rr.argmax(k);
  } else {
    const double j = analytic_rate(family, k, event, mode, options.solver);
    if (-static_cast<double>(n_max) * j < std::log(1e-12)) {
      throw DomainError("event probability is below 1e-12 at n = " + std::to_string(n_max) +
                        " (rate " + std::to_string(j) + "); enable tilting");
    }
  }

  const bool ball = family.kind() == FamilyKind::BallLp;
  const double p = family.p();
  std::vector<RateEstimate> out;
  out.reserve(n_grid.size());

  for (int n : n_grid) {
    const RngStream n_rng = rng.split(static_cast<std::uint64_t>(n));
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    // Quenched: one frame per n, and its tilted samplers and normalizer.
    std::optional<StiefelFrame> fixed;
    std::vector<TiltedPNormal> samplers;
    Vec fixed_s;
    double fixed_log_norm = 0.0;
    auto tilt_for = [&](const StiefelFrame& a) { return Vec(sqrt_n * (a.entries() * tilt_params.t1)); };
    if (mode == FrameMode::Quenched) {
      RngStream frame_rng = n_rng.split(0);
      fixed = haar_stiefel(n, k, frame_rng);
      if (tilt) {
        fixed_s = tilt_for(*fixed);
        const double a = family.r_is_one() ? 1.0 / p : 1.0 / p - tilt_params.t2;
        samplers.reserve(n);
        for (int i = 0; i < n; ++i) {
          samplers.emplace_back(p, fixed_s(i), a);
          fixed_log_norm += lambda_eval(family, fixed_s(i), tilt_params.t2);
        }
      }
    }

    const long batches = (samples_per + options.batchSize - 1) / options.batchSize;
    std::vector<WeightStats> stats(batches);
    run_batches(batches, options.jobs, [&](long b) {
      RngStream lane = n_rng.split(static_cast<std::uint64_t>(b) + 1);
      const long begin = b * options.batchSize;
      const long end = std::min(samples_per, begin + options.batchSize);
      WeightStats local;
      Vec xi(n);
      for (long j = begin; j < end; ++j) {
        std::optional<StiefelFrame> fresh;
        if (mode == FrameMode::Annealed) fresh = haar_stiefel(n, k, lane);
        const StiefelFrame& frame = fresh ? *fresh : *fixed;
        double log_w = 0.0;
        if (!tilt) {
          xi = sample_xi(family, n, lane);
        } else if (mode == FrameMode::Quenched) {
          log_w = fixed_log_norm;
          for (int i = 0; i < n; ++i) {
            xi(i) = samplers[i](lane);
            log_w -= fixed_s(i) * xi(i) + tilt_params.t2 * family.r(xi(i));
          }
        } else {
          // product-gaussian: the tilted coordinate is N(s_i, 1).
          const Vec s = tilt_for(frame);
          for (int i = 0; i < n; ++i) {
            xi(i) = s(i) + lane.normal();
            log_w += 0.5 * s(i) * s(i) - s(i) * xi(i);
          }
        }
        Vec x = apply_representation(family, xi);
        if (ball) x = scale_to_ball(x, lane);
        if (event.contains(project(frame, x))) local.add(log_w);
      }
      stats[b] = local;
    });

    WeightStats total;
    for (const auto& s : stats) total.merge(s);

    RateEstimate e;
    e.n = n;
    e.samples = samples_per;
    e.tilted = tilt;
    e.hits = total.count;
    e.zeroHits = total.count == 0;
    e.lowHits = total.count < 10;
    e.ess = total.ess();
    if (e.zeroHits) {
      e.pHat = 0.0;
      e.logRate = kInf;
      e.stdErr = kInf;
    } else {
      const double log_p = total.w.log() - std::log(static_cast<double>(samples_per));
      // pHat itself may underflow for very rare tilted events; logRate does not.
      e.pHat = std::exp(log_p);
      e.logRate = -log_p / n;
      e.stdErr = std::sqrt(total.relative_variance(samples_per) / static_cast<double>(samples_per)) / n;
    }
    out.push_back(e);
  }
  return out;
}

// --- SLLN -------------------------------------------------------------------

std::vector<SllnRow> slln_experiment(int k, double q, const std::vector<int>& n_grid, int repeats,
                                     const RngStream& rng, int n_directions, int jobs) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (!(q > 0.0 && q < 2.0)) throw ValidationError("slln needs q in (0, 2)");
  if (repeats < 1) throw ValidationError("repeats must be >= 1");
  if (n_directions < 1) throw ValidationError("need at least one direction");
  check_grid(n_grid, k);

  std::vector<SllnRow> rows;
  for (int n : n_grid) {
    const RngStream n_rng = rng.split(static_cast<std::uint64_t>(n));
    const std::vector<double> grid = gaussian_quantile_grid(n);
    std::vector<double> diag(repeats), trace(repeats);
    std::vector<Vec> marginal(repeats);
    run_batches(repeats, jobs, [&](long r) {
      RngStream lane = n_rng.split(static_cast<std::uint64_t>(r));
      const StiefelFrame a = haar_stiefel(n, k, lane);
      const EmpiricalMeasure m = row_empirical(a);
      diag[r] = wasserstein_to_gaussian(m, q, n_directions, lane).total;
      trace[r] = covariance(m).trace();
      marginal[r] = Vec(k);
      for (int j = 0; j < k; ++j) {
        std::vector<double> col(m.points().col(j).data(), m.points().col(j).data() + n);
        std::sort(col.begin(), col.end());
        marginal[r](j) = wasserstein_1d(col, grid, q).value;
      }
    });
    SllnRow row;
    row.n = n;
    row.marginalMean = Vec::Zero(k);
    for (int r = 0; r < repeats; ++r) {
      row.mean += diag[r];
      row.secondMoment += trace[r];
      row.marginalMean += marginal[r];
    }
    row.mean /= repeats;
    row.secondMoment /= repeats;
    row.marginalMean /= repeats;
    double ss = 0.0;
    for (int r = 0; r < repeats; ++r) ss += (diag[r] - row.mean) * (diag[r] - row.mean);
    row.sd = repeats > 1 ? std::sqrt(ss / (repeats - 1)) : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- Phi_n ------------------------------------------------------------------

PhiEstimate phi_n_estimate(const MeasureFamily& family, int n, const Vec& t1, double t2,
                           long samples, const RngStream& rng, bool joint, int jobs) {
  const int k = static_cast<int>(t1.size());
  if (k < 1) throw ValidationError("t1 must have at least one coordinate");
  if (n <= k) throw ValidationError("phi_n needs n > k");
  if (!(t2 < family.domain_bound())) throw ValidationError("phi_n needs t2 < T");
  if (samples < 1) throw ValidationError("samples must be >= 1");

  constexpr long kBatch = 256;
  const long batches = (samples + kBatch - 1) / kBatch;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  std::vector<WeightStats> stats(batches);
  run_batches(batches, jobs, [&](long b) {
    RngStream lane = rng.split(static_cast<std::uint64_t>(b));
    WeightStats local;
    const long end = std::min(samples, (b + 1) * kBatch);
    for (long j = b * kBatch; j < end; ++j) {
      const StiefelFrame a = haar_stiefel(n, k, lane);
      const Vec s = sqrt_n * (a.entries() * t1);
      double e = 0.0;
      if (joint) {
        const Vec xi = sample_xi(family, n, lane);
        e = s.dot(xi);
        if (!family.r_is_one()) {
          for (int i = 0; i < n; ++i) e += t2 * family.r(xi(i));
        } else {
          e += t2 * n;
        }
      } else {
        for (int i = 0; i < n; ++i) e += lambda_eval(family, s(i), t2);
      }
      local.add(e);
    }
    stats[b] = local;
  });
  WeightStats total;
  for (const auto& s : stats) total.merge(s);

  PhiEstimate out;
  out.samples = samples;
  out.conditional = !joint;
  out.value = (total.w.log() - std::log(static_cast<double>(samples))) / n;
  out.stdErr = std::sqrt(total.relative_variance(samples) / static_cast<double>(samples)) / n;
  out.ess = total.ess();
  out.unstable = out.ess < 100.0;
  return out;
}

// --- Bartlett moments -------------------------------------------------------

ChiReport chi_moment_check(int n, int k, long draws, const RngStream& rng) {
  if (draws < 1000) throw ValidationError("chi_moment_check needs at least 1000 draws");
  if (!(n > k && k >= 1)) throw ValidationError("chi_moment_check needs n > k >= 1");
  ChiReport rep;
  rep.n = n;
  rep.k = k;
  rep.draws = draws;
  Vec sum = Vec::Zero(k), sum2 = Vec::Zero(k);
  RngStream lane = rng.split(0);
  for (long d = 0; d < draws; ++d) {
    const BartlettPair qr = bartlett_qr(gaussian_matrix(n, k, lane));
    rep.maxGramError = std::max(rep.maxGramError, qr.q.gram_error());
    for (int i = 0; i < k; ++i) {
      const double v = qr.r(i, i) * qr.r(i, i);
      sum(i) += v;
      sum2(i) += v * v;
    }
  }
  const double dn = static_cast<double>(draws);
  rep.mean = sum / dn;
  rep.variance = (sum2 / dn - rep.mean.cwiseAbs2()) * (dn / (dn - 1.0));
  rep.z = Vec(k);
  rep.pass = true;
  for (int i = 0; i < k; ++i) {
    const double dof = n - i;
    rep.z(i) = (rep.mean(i) - dof) / std::sqrt(2.0 * dof / dn);
    if (!(std::abs(rep.z(i)) <= 4.0)) rep.pass = false;
  }
  return rep;
}

}  // namespace sldp

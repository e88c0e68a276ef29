#pragma once

#include "sldp/family.hpp"
#include "sldp/legendre.hpp"
#include "sldp/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sldp {

/// Rare event for the projection y = n^{-1/2} a^T X in R^k.
///  - halfspace: <direction, y> >= threshold (direction of unit norm)
///  - normBall:  ||y|| <= radius, or ||y|| >= radius when `complement`
struct TailEvent {
  enum class Kind { Halfspace, NormBall };

  static TailEvent halfspace(Vec direction, double threshold);
  static TailEvent norm_ball(double radius, bool complement);

  Kind kind = Kind::Halfspace;
  Vec direction;
  double threshold = 0.0;
  double radius = 0.0;
  bool complement = false;

  int dim() const { return static_cast<int>(direction.size()); }
  bool contains(const Vec& y) const;
  /// Point of the closed event closest to the origin along the event's
  /// natural ray (used to locate the dominating rate).
  Vec dominating_point(int k) const;
  std::string describe() const;
};

enum class FrameMode { Quenched, Annealed };

std::string to_string(FrameMode mode);
FrameMode frame_mode_from_string(const std::string& name);

struct TailOptions {
  bool tilt = false;
  int jobs = 1;
  int batchSize = 4096;
  SolverConfig solver;
};

struct RateEstimate {
  int n = 0;
  double pHat = 0.0;
  double logRate = kInf;  // -(1/n) log pHat
  double stdErr = 0.0;    // delta method on logRate
  long samples = 0;
  bool tilted = false;
  long hits = 0;
  double ess = 0.0;       // effective sample size of the hit weights
  bool zeroHits = false;  // no sample hit the event: logRate = +inf
  bool lowHits = false;   // fewer than 10 hits
};

/// Monte Carlo estimate of -(1/n) log P(y in event) for every n in n_grid.
/// Quenched mode holds one Haar frame per n fixed (dedicated RNG lane);
/// annealed mode draws a fresh frame per sample. With `tilt`, the i.i.d.
/// base coordinates are exponentially tilted at the Legendre argmax of the
/// quenched Gaussian-frame rate at the dominating point and reweighted by
/// the exact likelihood ratio; the frame is never tilted.
/// Throws DomainError when an untilted run targets a probability below
/// 1e-12 (by the analytic rate) or when tilting is requested where it is
/// not supported.
std::vector<RateEstimate> estimate_tail_rate(const MeasureFamily& family, int k,
                                             const TailEvent& event,
                                             const std::vector<int>& n_grid, long samples_per,
                                             FrameMode mode, const RngStream& rng,
                                             const TailOptions& options = {});

/// Row of the SLLN table.
struct SllnRow {
  int n = 0;
  double mean = 0.0;  // mean of the W_q diagnostic over repeats
  double sd = 0.0;
  Vec marginalMean;   // per-coordinate 1D diagnostic, averaged over repeats
  double secondMoment = 0.0;  // mean of tr C(L_{n,k}); equals k
};

/// W_q distance between the row-empirical measure of Haar frames and the
/// standard Gaussian, for each n in n_grid, averaged over `repeats` frames.
std::vector<SllnRow> slln_experiment(int k, double q, const std::vector<int>& n_grid, int repeats,
                                     const RngStream& rng, int n_directions = 64, int jobs = 1);

struct PhiEstimate {
  double value = 0.0;
  double stdErr = 0.0;
  double ess = 0.0;
  bool unstable = false;  // ess < 100
  long samples = 0;
  bool conditional = true;
};

/// Phi_n(t1, t2) = (1/n) log E exp(sqrt(n) <xi, A t1> + t2 sum r(xi_i)).
/// By default xi is integrated out exactly given the frame, leaving
/// (1/n) log E_A exp(sum_i Lambda(sqrt(n) (A t1)_i, t2)); `joint` samples
/// (xi, A) together instead. Both use log-sum-exp accumulation.
PhiEstimate phi_n_estimate(const MeasureFamily& family, int n, const Vec& t1, double t2,
                           long samples, const RngStream& rng, bool joint = false, int jobs = 1);

struct ChiReport {
  int n = 0;
  int k = 0;
  long draws = 0;
  Vec mean;      // empirical mean of R(i,i)^2
  Vec variance;  // empirical variance of R(i,i)^2
  Vec z;         // (mean - (n - i + 1)) / sqrt(2 (n - i + 1) / draws)
  double maxGramError = 0.0;  // max ||A^T A - I||_F over draws
  bool pass = false;          // all |z| <= 4
};

ChiReport chi_moment_check(int n, int k, long draws, const RngStream& rng);

}  // namespace sldp

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "decaylab/analysis.hpp"
#include "decaylab/bounds.hpp"
#include "decaylab/grid.hpp"
#include "decaylab/semigroup.hpp"

/// Successive approximations for the mild Navier-Stokes equation on the periodic box
///   u^{(0)}(t) = e^{t Delta} u0,  u^{(m+1)}(t) = e^{t Delta} u0 - int_0^t e^{(t-tau) Delta} P div(u^{(m)} (x) u^{(m)}) dtau,
/// with P div(u (x) u) linear in tau between time nodes and integrated exactly against the heat factor.
namespace decaylab::picard {

struct PicardConfig {
  double alpha = 1.0;
  double q = 4.0;
  double m0 = 0.05;
  GridSpec grid{128, 128.0};
  double t_first = 0.05;  // first positive node
  double t_final = 640.0;
  int time_nodes = 48;    // positive nodes, geometric between t_first and t_final
  std::vector<double> explicit_times;  // overrides the geometric grid when non-empty; first entry 0
  int max_iterations = 8;              // iterates u^{(1)} .. u^{(m_max)} after u^{(0)}
  double contraction_tolerance = 1e-5; // tail ||V^{(m)}||_X / ||u^{(m+1)}||_X that counts as converged
  double roundoff_floor = 1e-12;       // relative size below which differences carry no ratio
  bool nonlinear = true;               // false zeroes the bilinear term
  bool dealias = true;                 // 2/3 rule on the quadratic product

  /// Throws ConfigError unless alpha in [1,3], 3/alpha < q < 3/(alpha-1) (no upper bound at
  /// alpha = 1), q <= 12 finite, m0 >= 0, a valid grid, and sqrt(t_final) <= 0.2 L.
  void validate() const;
  /// Node list starting at 0.
  std::vector<double> time_grid() const;
};

/// Norm ledger entry at one node: L^q and L^inf of |u| and L^3 of |grad u| over |x| <= 0.8 L.
struct NormEntry {
  double lq = 0.0;
  double linf = 0.0;
  double grad_ln = 0.0;
};

/// Whole run: scalar ledgers for every iterate, full fields only where requested.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<NormEntry>> iterates;     // [m][node] for u^{(m)}
  std::vector<std::vector<NormEntry>> differences;  // [m][node] for V^{(m)} = u^{(m+1)} - u^{(m)}
  std::vector<NormEntry> correction;                // u^{(m_max)} - u^{(0)}
  std::map<std::size_t, GridField> snapshots;       // final iterate at requested node indices
  double max_divergence = 0.0;                      // largest ||div u||_2 / ||grad u||_2 seen
  int levels() const { return static_cast<int>(iterates.size()); }
};

struct RunOptions {
  std::vector<std::size_t> snapshot_nodes;
};

/// Runs all iterates together node by node. u0 must live on cfg.grid and be solenoidal.
/// Throws SolverError on non-finite values, naming the iterate and node.
Trajectory run_picard(const GridField& u0, const PicardConfig& cfg, const RunOptions& opt = {});

/// Leray-projected sample of the slowly decaying field m0 (1 + |x|^2)^{-(1+alpha)/2} (x2, -x1, 0).
GridField initial_grid_field(const PicardConfig& cfg);

/// All fields of one iterate on the node list.
struct Iterate {
  std::vector<double> times;
  std::vector<GridField> fields;
};

/// u^{(0)} = heat flow of u0 on the node list.
Iterate heat_iterate(const GridField& u0, const std::vector<double>& times);
/// One classical step u^{(m)} -> u^{(m+1)} with the same time discretisation as run_picard.
Iterate picard_step(const Iterate& prev, const GridField& u0, const PicardConfig& cfg);
NormEntry norm_entry(const GridField& u, double q);

/// ||u(t_n) - e^{t_n Delta} u0 + int_0^{t_n} e^{(t_n - tau) Delta} P div(u (x) u) dtau||_2 / ||u(t_n)||_2
/// with the Duhamel integral re-evaluated on its own graded mesh and u (x) u linear between nodes.
struct ResubstitutionResult {
  double residual = 0.0;
  double quadrature_estimate = 0.0;  // mesh-halving estimate of the re-evaluated integral
};
ResubstitutionResult resubstitution_residual(const Iterate& it, const GridField& u0, std::size_t node,
                                             const semigroup::TimeGridSpec& grid);

struct XNormReport {
  double x_norm = 0.0;                // sum of the three weighted suprema
  std::array<double, 3> terms{};      // L^inf, L^q, gradient L^3
  std::array<double, 3> argmax_t{};
};

/// Weights (1+t)^{a/2} l, (1+t)^{a/2 - 3/(2q)} l, t^{1/2} (1+t)^{(a-1)/2} l with l = ln(2+t) iff a = 3.
std::array<double, 3> x_weights(double t, double alpha, double q);
/// Throws DomainError when the ledger and time list differ in length or the ledger is empty.
XNormReport x_norm(const std::vector<double>& times, const std::vector<NormEntry>& ledger, double alpha, double q);

struct ContractionReport {
  std::vector<double> difference_norms;  // ||V^{(m)}||_X
  std::vector<double> ratios;            // rho_m for m >= 1 above the roundoff floor
  double max_ratio = 0.0;
  bool contracting = false;   // every ratio <= 1/2
  bool diverging = false;     // rho_m > 1 at least twice
  int converged_iterations = -1;  // m + 1 for the first V^{(m)} under tolerance, -1 if none
  bool converged = false;
};

/// Requires at least three iterates, else DomainError. Zero differences give empty ratios.
ContractionReport contraction_report(const Trajectory& traj, const PicardConfig& cfg);

/// Weighted channel series w_c(t) * ledger_c(t) judged for decade stability.
struct ChannelReport {
  std::array<BoundReport, 3> bounds;
  std::array<analysis::DecaySeries, 3> series;
};
ChannelReport channel_report(const std::vector<double>& times, const std::vector<NormEntry>& ledger,
                             const PicardConfig& cfg, double budget, double trend_tolerance = 0.02);

struct ThresholdResult {
  double threshold = 0.0;  // largest contracting m0 found
  double lower = 0.0, upper = 0.0;
  std::vector<std::pair<double, double>> history;  // (m0, max ratio)
};

/// Geometric bisection on m0 in [lo, hi] with `levels` iterates per probe; lo must contract and hi
/// must not, else DomainError.
ThresholdResult bisect_threshold(const PicardConfig& cfg, double lo, double hi, int steps = 8, int levels = 3);

struct BilinearProbe {
  analysis::DecaySeries series;  // ||e^{t Delta} P div(u (x) u)||_{L^q}
  double predicted_slope = 0.0;  // -1/2 - (3/2)(1/r - 1/q)
  double forcing_lr = 0.0;       // ||u (x) u||_{L^r}
};

/// Evolves P div(u (x) u) of one snapshot over `times`.
BilinearProbe bilinear_decay_probe(const GridField& u, double r, double q, const std::vector<double>& times);

/// CSV rows m,t,Lq_norm,Linf_norm,grad_Ln_norm,x_weight_applied for every iterate.
void write_ledger_csv(const Trajectory& traj, const PicardConfig& cfg, const std::string& path);

}  // namespace decaylab::picard

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "banditkit/exp_family.hpp"

namespace banditkit {

// ---------------------------------------------------------------------------
// Regret and draw-count bounds

/// Minimax regret bound 76 sqrt(V K T) + (mu_plus - mu_minus) K.
/// Throws std::invalid_argument unless T >= K >= 2 and V > 0.
double theorem1_bound(std::int64_t horizon, std::int64_t num_arms,
                      double variance, double mu_minus, double mu_plus);

/// Explicit bound on E[N_a(T)] for a suboptimal arm, split into its terms:
///   log T / kl(mu_a + d, mu* - d)
/// + log((1 + log^2(T/K)) / K) / kl(mu_a + d, mu* - d)
/// + (16 e^2 + 2) 2 V K / d^2
/// + 1
struct Theorem2Terms {
  double kl_gap = 0.0;  // kl(mu_a + d, mu* - d)
  double log_term = 0.0;
  double correction_term = 0.0;
  double constant_term = 0.0;
  double one = 1.0;

  double total() const {
    return log_term + correction_term + constant_term + one;
  }
};

/// Admissible window for d: [sqrt(22 V K / T), (mu* - mu_a) / 3].
struct DeltaWindow {
  double lower = 0.0;
  double upper = 0.0;
};

DeltaWindow theorem2_window(const BanditModel& model, std::size_t arm,
                            std::int64_t horizon);

/// Throws std::invalid_argument if `arm` is optimal or `delta` leaves the
/// admissible window (relative slack 1e-12 at both ends).
Theorem2Terms theorem2_terms(const BanditModel& model, std::size_t arm,
                             double delta, std::int64_t horizon);

double theorem2_bound(const BanditModel& model, std::size_t arm, double delta,
                      std::int64_t horizon);

// ---------------------------------------------------------------------------
// Proof constants

struct ProofConstants {
  std::int64_t horizon = 0;
  std::int64_t num_arms = 0;
  double variance = 0.0;
  double u = 0.0;
  double delta0 = 0.0;    // sqrt(22 V K / T)
  double f_of_u = 0.0;    // 2V/u^2 log(T u^2 / (2 V K))
  std::int64_t n_of_u = 0;  // ceil(8V/u^2 log(T u^2 / (8 V K)))
  double C = 0.0;         // log(T/(K f) (1 + log^2(T/(K f))))
  double beta = 0.0;      // C / (C - 1)
  double c = 0.0;         // 1 - 1/sqrt(2)
};

/// Throws std::invalid_argument if u < delta0 (relative slack 1e-12).
ProofConstants proof_constants(std::int64_t horizon, std::int64_t num_arms,
                               double variance, double u);

/// n(d) = ceil(log(T/K (1 + log^2(T/K))) / kl(mu_a + d, mu* - d)).
std::int64_t n_of_delta(const BanditModel& model, std::size_t arm,
                        double delta, std::int64_t horizon);

/// 2 sqrt(22) + 16e^2/sqrt(22) log(e sqrt(11)) + 2/sqrt(22)
///   + 16/sqrt(22) log(e sqrt(11/4)) + 2/(sqrt(22) c^2), the constant that
/// the minimax proof rounds up to 76.
double minimax_constant();

// ---------------------------------------------------------------------------
// Checks

struct CheckResult {
  std::string name;
  bool passed = false;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // min over the grid of (rhs - lhs)
  std::string detail;
};

struct Report {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
};

/// `count` log-spaced points on [lo, hi]; lo, hi > 0.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

double lemma_beta_lhs(double beta);  // 1 / (exp(log(beta)/beta) - 1)
double lemma_beta_rhs(double beta);  // 2 max(beta, beta/(beta-1))

/// Evaluates both sides of the beta lemma on every grid point (all > 1).
CheckResult check_lemma_beta(std::span<const double> betas);

/// Scalar inequalities used along the proofs, each on a log-spaced grid:
/// log(x(1+log^2 x))/(1+log^2 x) <= 1 (x >= 1), h(x) <= 1 (x >= 11/4),
/// the two ratio bounds <= 2 (x >= e^{3/2}), and log(1+x^2) <= x.
std::vector<CheckResult> check_helper_inequalities(std::size_t points = 10'000);

/// kl(mu, mu') - (mu - mu')^2 / (2V) >= -1e-12 on an n x n grid over
/// [lo, hi]^2 (endpoints included).
CheckResult check_pinsker(Family kind, double variance, std::size_t n,
                          double lo, double hi, double sigma2 = 0.0);

/// f(u) < T/K, log(T/(K f(u))) >= 3/2, f(u) K/T <= e^{-3/2}, C >= 3/2,
/// beta <= 2C, beta/(beta-1) == C, and 2V g(n)/n <= u^2/2 for n >= n(u),
/// for every u on `us`.
CheckResult check_proof_constants(std::int64_t horizon, std::int64_t num_arms,
                                  double variance, std::span<const double> us);

// ---------------------------------------------------------------------------
// Monte Carlo deviation checks

enum class DeviationEvent {
  KlPlus,     // exists n in [N, M]: kl_+(mu_hat_n, mu) >= level
  MeanBelow,  // exists n in [N, M]: mu_hat_n <= level  (level <= mu)
  MeanAbove,  // exists n in [N, M]: mu_hat_n >= level  (level >= mu)
};

struct DeviationCase {
  std::string name;
  ArmDistribution arm;  // arm.mean is the true mean
  DeviationEvent event = DeviationEvent::KlPlus;
  double level = 0.0;
  std::int64_t first = 1;  // N
  std::int64_t last = 1;   // M
};

struct DeviationResult {
  std::int64_t trials = 0;
  std::int64_t events = 0;
  double empirical = 0.0;
  double log_bound = 0.0;  // -N gamma, or -N (x - mu)^2 / (2V)
  double bound = 0.0;
  double slack = 0.0;  // 3 sqrt(bound (1 - bound) / trials)
  bool passed = false;
};

/// Monte Carlo estimate of the event probability against exp(log_bound).
/// Trial i draws from Rng(derive_seed(seed, 0, i)); the count is independent
/// of `threads`. Throws std::invalid_argument for level <= 0 (KlPlus),
/// N < 1, M < N or trials < 1.
DeviationResult mc_deviation(const DeviationCase& c, std::int64_t trials,
                             std::uint64_t seed, unsigned threads = 0);

/// Maximal inequality P(exists N <= n <= M : kl_+(mu_hat_n, mu) >= gamma)
/// <= exp(-N gamma) for rewards drawn from `family_of` with mean `mu`.
DeviationResult mc_maximal_inequality(const ArmDistribution& family_of,
                                      double mu, double gamma,
                                      std::int64_t first, std::int64_t last,
                                      std::int64_t trials, std::uint64_t seed,
                                      unsigned threads = 0);

/// Cases exercised by the deviation suite.
std::vector<DeviationCase> default_deviation_cases();

// ---------------------------------------------------------------------------
// Suites

struct SuiteOptions {
  std::int64_t trials = 100'000;
  double bernoulli_variance = 0.25;  // pinsker suite; undersized V must fail
  std::uint64_t seed = 20170613;
  unsigned threads = 0;
};

/// Suites: "pinsker", "lemmas", "deviation", "bounds". "all" is handled by
/// the caller. Throws std::invalid_argument for an unknown name.
Report run_suite(const std::string& suite, const SuiteOptions& options);

const std::vector<std::string>& suite_names();

void print_report(std::ostream& out, const Report& report);
/// Columns: suite,check,passed,evaluated,violations,worst_margin,detail
void write_report_csv(std::ostream& out, const std::vector<Report>& reports);

}  // namespace banditkit

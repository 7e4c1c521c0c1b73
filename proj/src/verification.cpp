#include "banditkit/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "banditkit/index.hpp"
#include "banditkit/parallel.hpp"
#include "banditkit/rng.hpp"

namespace banditkit {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kWindowSlack = 1e-12;

void require_horizon(std::int64_t horizon, std::int64_t num_arms) {
  if (num_arms < 2 || horizon < num_arms) {
    throw std::invalid_argument("bounds need T >= K >= 2");
  }
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

// Accumulates lhs <= rhs comparisons.
struct Tally {
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  double worst_at = 0.0;

  void add(double at, double lhs, double rhs, double tolerance = 0.0) {
    ++evaluated;
    const double margin = rhs - lhs;
    if (!(margin >= -tolerance)) ++violations;
    if (margin < worst || std::isnan(margin)) {
      worst = margin;
      worst_at = at;
    }
  }

  CheckResult result(std::string name) const {
    CheckResult r;
    r.name = std::move(name);
    r.evaluated = evaluated;
    r.violations = violations;
    r.worst_margin = worst;
    r.passed = violations == 0 && evaluated > 0;
    r.detail = std::to_string(evaluated) + " points, " +
               std::to_string(violations) + " violations, worst margin " +
               format_double(worst) + " at " + format_double(worst_at);
    return r;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

double theorem1_bound(std::int64_t horizon, std::int64_t num_arms,
                      double variance, double mu_minus, double mu_plus) {
  require_horizon(horizon, num_arms);
  if (!(variance > 0.0)) throw std::invalid_argument("theorem1: V must be > 0");
  const double k = static_cast<double>(num_arms);
  return 76.0 * std::sqrt(variance * k * static_cast<double>(horizon)) +
         (mu_plus - mu_minus) * k;
}

DeltaWindow theorem2_window(const BanditModel& model, std::size_t arm,
                            std::int64_t horizon) {
  const auto k = static_cast<std::int64_t>(model.num_arms());
  require_horizon(horizon, k);
  const ModelStats stats = model_stats(model);
  const double v = model.bounds().variance;
  return {std::sqrt(22.0 * v * static_cast<double>(k) /
                    static_cast<double>(horizon)),
          stats.gaps.at(arm) / 3.0};
}

namespace {

double gap_kl(const BanditModel& model, std::size_t arm, double delta) {
  const ModelStats stats = model_stats(model);
  return kl_div(model.family(), model.arms()[arm].mean + delta,
                stats.best_mean - delta, model.sigma2());
}

}  // namespace

Theorem2Terms theorem2_terms(const BanditModel& model, std::size_t arm,
                             double delta, std::int64_t horizon) {
  if (arm >= model.num_arms()) throw std::out_of_range("theorem2: bad arm");
  const DeltaWindow window = theorem2_window(model, arm, horizon);
  if (!(window.upper > 0.0)) {
    throw std::invalid_argument("theorem2: arm is not suboptimal");
  }
  if (delta < window.lower * (1.0 - kWindowSlack) ||
      delta > window.upper * (1.0 + kWindowSlack)) {
    throw std::invalid_argument(
        "theorem2: delta outside [sqrt(22VK/T), gap/3] = [" +
        format_double(window.lower) + ", " + format_double(window.upper) + "]");
  }
  const double t = static_cast<double>(horizon);
  const double k = static_cast<double>(model.num_arms());
  const double v = model.bounds().variance;
  const double log_tk = std::log(t / k);

  Theorem2Terms terms;
  terms.kl_gap = gap_kl(model, arm, delta);
  terms.log_term = std::log(t) / terms.kl_gap;
  terms.correction_term = std::log((1.0 + log_tk * log_tk) / k) / terms.kl_gap;
  terms.constant_term = (16.0 * kE * kE + 2.0) * 2.0 * v * k / (delta * delta);
  return terms;
}

double theorem2_bound(const BanditModel& model, std::size_t arm, double delta,
                      std::int64_t horizon) {
  return theorem2_terms(model, arm, delta, horizon).total();
}

// ---------------------------------------------------------------------------

ProofConstants proof_constants(std::int64_t horizon, std::int64_t num_arms,
                               double variance, double u) {
  require_horizon(horizon, num_arms);
  if (!(variance > 0.0)) throw std::invalid_argument("proof constants: V <= 0");
  ProofConstants pc;
  pc.horizon = horizon;
  pc.num_arms = num_arms;
  pc.variance = variance;
  pc.u = u;
  const double t = static_cast<double>(horizon);
  const double k = static_cast<double>(num_arms);
  pc.delta0 = std::sqrt(22.0 * variance * k / t);
  if (!(u >= pc.delta0 * (1.0 - kWindowSlack))) {
    throw std::invalid_argument("proof constants need u >= delta0 = " +
                                format_double(pc.delta0));
  }
  const double u2 = u * u;
  pc.f_of_u = 2.0 * variance / u2 * std::log(t * u2 / (2.0 * variance * k));
  pc.n_of_u = static_cast<std::int64_t>(
      std::ceil(8.0 * variance / u2 * std::log(t * u2 / (8.0 * variance * k))));
  const double log_x = std::log(t / (k * pc.f_of_u));
  pc.C = log_x + std::log1p(log_x * log_x);
  pc.beta = pc.C / (pc.C - 1.0);
  pc.c = 1.0 - 1.0 / std::numbers::sqrt2;
  return pc;
}

std::int64_t n_of_delta(const BanditModel& model, std::size_t arm,
                        double delta, std::int64_t horizon) {
  const Theorem2Terms terms = theorem2_terms(model, arm, delta, horizon);
  const double tk = static_cast<double>(horizon) /
                    static_cast<double>(model.num_arms());
  const double log_tk = std::log(tk);
  return static_cast<std::int64_t>(
      std::ceil(std::log(tk * (1.0 + log_tk * log_tk)) / terms.kl_gap));
}

double minimax_constant() {
  const double r22 = std::sqrt(22.0);
  const double c = 1.0 - 1.0 / std::numbers::sqrt2;
  return 2.0 * r22 + 16.0 * kE * kE / r22 * std::log(kE * std::sqrt(11.0)) +
         2.0 / r22 + 16.0 / r22 * std::log(kE * std::sqrt(11.0 / 4.0)) +
         2.0 / (r22 * c * c);
}

// ---------------------------------------------------------------------------

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw std::invalid_argument("log_spaced needs 0 < lo <= hi, count >= 1");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + step * static_cast<double>(i));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

double lemma_beta_lhs(double beta) {
  return 1.0 / std::expm1(std::log(beta) / beta);
}

double lemma_beta_rhs(double beta) {
  return 2.0 * std::max(beta, beta / (beta - 1.0));
}

CheckResult check_lemma_beta(std::span<const double> betas) {
  Tally tally;
  for (double beta : betas) {
    if (!(beta > 1.0)) {
      throw std::invalid_argument("lemma beta grid needs beta > 1");
    }
    tally.add(beta, lemma_beta_lhs(beta), lemma_beta_rhs(beta));
  }
  return tally.result("lemma_beta");
}

std::vector<CheckResult> check_helper_inequalities(std::size_t points) {
  std::vector<CheckResult> out;
  {
    Tally tally;
    for (double x : log_spaced(1.0, 1e12, points)) {
      const double l2 = std::log(x) * std::log(x);
      tally.add(x, std::log(x * (1.0 + l2)) / (1.0 + l2), 1.0, 1e-15);
    }
    out.push_back(tally.result("log_ratio_le_1 (x >= 1)"));
  }
  {
    Tally tally;
    for (double x : log_spaced(11.0 / 4.0, 1e12, points)) {
      const double lx = std::log(x);
      tally.add(x, std::log(x / lx) / lx, 1.0, 1e-15);
    }
    out.push_back(tally.result("h_le_1 (x >= 11/4)"));
  }
  {
    Tally first;
    Tally second;
    for (double x : log_spaced(std::exp(1.5), 1e12, points)) {
      const double lx = std::log(x);
      first.add(x, std::log(x * (1.0 + lx * lx)) / lx, 2.0, 1e-15);
      second.add(x, lx / std::log(x / lx), 2.0, 1e-15);
    }
    out.push_back(first.result("log_x_log2_over_log_le_2 (x >= e^1.5)"));
    out.push_back(second.result("log_over_log_x_over_log_le_2 (x >= e^1.5)"));
  }
  {
    Tally tally;
    for (std::size_t i = 0; i < points; ++i) {
      const double x = 100.0 * static_cast<double>(i) /
                       static_cast<double>(points - 1);
      tally.add(x, std::log1p(x * x), x, 1e-15);
    }
    out.push_back(tally.result("log1p_x2_le_x (x >= 0)"));
  }
  return out;
}

CheckResult check_pinsker(Family kind, double variance, std::size_t n,
                          double lo, double hi, double sigma2) {
  if (!(variance > 0.0) || n < 2 || !(lo < hi)) {
    throw std::invalid_argument("pinsker check needs V > 0, n >= 2, lo < hi");
  }
  Tally tally;
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = lo + step * static_cast<double>(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double mu_prime = lo + step * static_cast<double>(j);
      const double d = mu - mu_prime;
      // kl >= d^2/(2V)  <=>  d^2/(2V) <= kl
      tally.add(mu, d * d / (2.0 * variance), kl_div(kind, mu, mu_prime, sigma2),
                1e-12);
    }
  }
  return tally.result("pinsker " + std::string(to_string(kind)) +
                      " V=" + format_double(variance));
}

CheckResult check_proof_constants(std::int64_t horizon, std::int64_t num_arms,
                                  double variance,
                                  std::span<const double> us) {
  const double tk = static_cast<double>(horizon) /
                    static_cast<double>(num_arms);
  const ExplorationSchedule schedule(horizon, num_arms);
  Tally tally;
  for (double u : us) {
    const ProofConstants pc = proof_constants(horizon, num_arms, variance, u);
    tally.add(u, pc.f_of_u, tk);
    tally.add(u, 1.5, std::log(tk / pc.f_of_u), 1e-12);
    tally.add(u, pc.f_of_u / tk, std::exp(-1.5), 1e-15);
    tally.add(u, 1.5, pc.C, 1e-12);
    tally.add(u, pc.beta, 2.0 * pc.C);
    const double identity = pc.beta / (pc.beta - 1.0);
    tally.add(u, std::abs(identity - pc.C), 1e-9 * pc.C);
    const std::int64_t n0 = std::max<std::int64_t>(pc.n_of_u, 1);
    for (std::int64_t n : {n0, n0 + 1, 2 * n0, 10 * n0}) {
      const double lhs = 2.0 * variance * exploration_g(n, schedule) /
                         static_cast<double>(n);
      tally.add(u, lhs, u * u / 2.0, 1e-15);
    }
  }
  return tally.result("proof_constants T=" + std::to_string(horizon) +
                      " K=" + std::to_string(num_arms) +
                      " V=" + format_double(variance));
}

// ---------------------------------------------------------------------------

DeviationResult mc_deviation(const DeviationCase& c, std::int64_t trials,
                             std::uint64_t seed, unsigned threads) {
  if (c.first < 1 || c.last < c.first) {
    throw std::invalid_argument("deviation case needs 1 <= N <= M");
  }
  if (trials < 1) throw std::invalid_argument("deviation needs trials >= 1");
  c.arm.validate();
  const double mu = c.arm.mean;
  const double v = default_variance(c.arm.kind, c.arm.sigma2);

  DeviationResult result;
  result.trials = trials;
  switch (c.event) {
    case DeviationEvent::KlPlus:
      if (!(c.level > 0.0)) {
        throw std::invalid_argument("maximal inequality needs gamma > 0");
      }
      result.log_bound = -static_cast<double>(c.first) * c.level;
      break;
    case DeviationEvent::MeanBelow:
    case DeviationEvent::MeanAbove: {
      if ((c.event == DeviationEvent::MeanBelow && c.level > mu) ||
          (c.event == DeviationEvent::MeanAbove && c.level < mu)) {
        throw std::invalid_argument("deviation level on the wrong side of mu");
      }
      const double d = c.level - mu;
      result.log_bound = -static_cast<double>(c.first) * d * d / (2.0 * v);
      break;
    }
  }
  result.bound = std::exp(result.log_bound);

  auto occurs = [&](Rng& rng) {
    double sum = 0.0;
    for (std::int64_t n = 1; n <= c.last; ++n) {
      sum += sample(c.arm, rng);
      if (n < c.first) continue;
      const double mean = sum / static_cast<double>(n);
      switch (c.event) {
        case DeviationEvent::KlPlus:
          if (kl_plus(c.arm.kind, mean, mu, c.arm.sigma2) >= c.level) {
            return true;
          }
          break;
        case DeviationEvent::MeanBelow:
          if (mean <= c.level) return true;
          break;
        case DeviationEvent::MeanAbove:
          if (mean >= c.level) return true;
          break;
      }
    }
    return false;
  };

  constexpr std::size_t kBlock = 1024;
  const auto total = static_cast<std::size_t>(trials);
  const std::size_t blocks = (total + kBlock - 1) / kBlock;
  std::vector<std::int64_t> counts(blocks, 0);
  parallel_for(blocks, resolve_thread_count(threads), [&](std::size_t b) {
    std::int64_t hits = 0;
    const std::size_t end = std::min(total, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      Rng rng(derive_seed(seed, 0, i));
      if (occurs(rng)) ++hits;
    }
    counts[b] = hits;
  });
  for (auto h : counts) result.events += h;

  result.empirical =
      static_cast<double>(result.events) / static_cast<double>(trials);
  result.slack = 3.0 * std::sqrt(result.bound * (1.0 - result.bound) /
                                 static_cast<double>(trials));
  result.passed = result.empirical <= result.bound + result.slack;
  return result;
}

DeviationResult mc_maximal_inequality(const ArmDistribution& family_of,
                                      double mu, double gamma,
                                      std::int64_t first, std::int64_t last,
                                      std::int64_t trials, std::uint64_t seed,
                                      unsigned threads) {
  DeviationCase c;
  c.name = "maximal_inequality";
  c.arm = family_of;
  c.arm.mean = mu;
  c.event = DeviationEvent::KlPlus;
  c.level = gamma;
  c.first = first;
  c.last = last;
  return mc_deviation(c, trials, seed, threads);
}

std::vector<DeviationCase> default_deviation_cases() {
  return {
      {"kl+ bernoulli mu=0.5 gamma=0.2 N=10 M=200",
       ArmDistribution::bernoulli(0.5), DeviationEvent::KlPlus, 0.2, 10, 200},
      {"kl+ bernoulli mu=0.2 gamma=0.05 N=30 M=400",
       ArmDistribution::bernoulli(0.2), DeviationEvent::KlPlus, 0.05, 30, 400},
      {"kl+ gaussian mu=0 s2=1 gamma=0.1 N=20 M=500",
       ArmDistribution::gaussian(0.0, 1.0), DeviationEvent::KlPlus, 0.1, 20,
       500},
      {"kl+ bernoulli mu=0.5 gamma=2 N=10 M=200 (bound ~ 0)",
       ArmDistribution::bernoulli(0.5), DeviationEvent::KlPlus, 2.0, 10, 200},
      {"mean<=x gaussian mu=0 s2=1 x=-0.5 N=10 M=200",
       ArmDistribution::gaussian(0.0, 1.0), DeviationEvent::MeanBelow, -0.5,
       10, 200},
      {"mean>=x gaussian mu=0 s2=2 x=0.6 N=15 M=300",
       ArmDistribution::gaussian(0.0, 2.0), DeviationEvent::MeanAbove, 0.6, 15,
       300},
      {"mean>=x bernoulli mu=0.3 x=0.45 N=20 M=300",
       ArmDistribution::bernoulli(0.3), DeviationEvent::MeanAbove, 0.45, 20,
       300},
  };
}

// ---------------------------------------------------------------------------

namespace {

Report pinsker_suite(const SuiteOptions& options) {
  Report report{"pinsker", {}};
  report.checks.push_back(check_pinsker(
      Family::Bernoulli, options.bernoulli_variance, 200, 0.01, 0.99));
  for (double s2 : {0.5, 1.0, 4.0}) {
    CheckResult r = check_pinsker(Family::Gaussian, s2, 200, -2.0, 2.0, s2);
    if (r.passed && r.worst_margin != 0.0) {
      r.passed = false;
      r.detail += " (expected exact equality)";
    }
    report.checks.push_back(std::move(r));
  }
  // Falsifiability: an undersized V must be caught.
  CheckResult control =
      check_pinsker(Family::Bernoulli, 0.1, 200, 0.01, 0.99);
  CheckResult flipped;
  flipped.name = "control: bernoulli V=0.1 is rejected";
  flipped.evaluated = control.evaluated;
  flipped.violations = control.violations;
  flipped.worst_margin = control.worst_margin;
  flipped.passed = control.violations > 0;
  flipped.detail = control.detail;
  report.checks.push_back(std::move(flipped));
  return report;
}

Report lemmas_suite() {
  Report report{"lemmas", {}};
  const auto betas = log_spaced(1.0 + 1e-3, 1e3, 10'000);
  report.checks.push_back(check_lemma_beta(betas));
  for (auto& r : check_helper_inequalities()) {
    report.checks.push_back(std::move(r));
  }
  return report;
}

Report deviation_suite(const SuiteOptions& options) {
  Report report{"deviation", {}};
  const auto cases = default_deviation_cases();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const DeviationResult r =
        mc_deviation(c, options.trials, derive_seed(options.seed, 1, i),
                     options.threads);
    CheckResult check;
    check.name = c.name;
    check.passed = r.passed;
    check.evaluated = static_cast<std::size_t>(r.trials);
    check.violations = r.passed ? 0 : 1;
    check.worst_margin = r.bound + r.slack - r.empirical;
    std::ostringstream os;
    os << std::setprecision(6) << "empirical " << r.empirical << " ("
       << r.events << "/" << r.trials << "), bound " << r.bound << " + slack "
       << r.slack;
    check.detail = os.str();
    report.checks.push_back(std::move(check));
  }
  return report;
}

Report bounds_suite() {
  Report report{"bounds", {}};
  {
    Tally tally;
    const double c = minimax_constant();
    tally.add(c, c, 76.0);
    auto r = tally.result("minimax constant <= 76");
    r.detail = "constant " + format_double(c) + "; " + r.detail;
    report.checks.push_back(std::move(r));
  }
  {
    Tally tally;
    for (std::int64_t k : {2, 5, 10, 50}) {
      for (std::int64_t t : {k, 10 * k, 1000 * k, 100'000 * k}) {
        const double b = theorem1_bound(t, k, 0.25, 0.0, 1.0);
        const double b2 = theorem1_bound(2 * t, k, 0.25, 0.0, 1.0);
        const double kk = static_cast<double>(k);
        tally.add(static_cast<double>(t),
                  std::abs((b2 - kk) - std::numbers::sqrt2 * (b - kk)),
                  1e-9 * b);
        if (t == k) tally.add(kk, std::abs(b - 39.0 * kk), 1e-9 * b);
      }
    }
    report.checks.push_back(tally.result("theorem1 homogeneity and T=K form"));
  }
  for (auto [t, k, v] : {std::tuple{std::int64_t{1000}, std::int64_t{2}, 0.25},
                         std::tuple{std::int64_t{10'000}, std::int64_t{10}, 0.25},
                         std::tuple{std::int64_t{100'000}, std::int64_t{2}, 1.0},
                         std::tuple{std::int64_t{1'000'000}, std::int64_t{50}, 4.0}}) {
    const double d0 = std::sqrt(22.0 * v * static_cast<double>(k) /
                                static_cast<double>(t));
    const auto us = log_spaced(d0, 1000.0 * d0, 2000);
    report.checks.push_back(check_proof_constants(t, k, v, us));
  }
  {
    // Window, decomposition and monotonicity of the explicit draw-count bound.
    Tally tally;
    const auto model = BanditModel::bernoulli("b", {0.9, 0.3});
    for (std::int64_t t : {1000, 100'000, 10'000'000}) {
      const auto w = theorem2_window(model, 1, t);
      double previous = std::numeric_limits<double>::infinity();
      for (double d : log_spaced(w.lower, w.upper, 50)) {
        const auto terms = theorem2_terms(model, 1, d, t);
        const double sum = terms.log_term + terms.correction_term +
                           terms.constant_term + terms.one;
        tally.add(d, std::abs(sum - terms.total()), 0.0);
        tally.add(d, terms.constant_term, previous);
        previous = terms.constant_term;
      }
      bool rejected = false;
      try {
        theorem2_terms(model, 1, w.upper * 1.01, t);
      } catch (const std::invalid_argument&) {
        rejected = true;
      }
      tally.add(static_cast<double>(t), rejected ? 0.0 : 1.0, 0.0);
    }
    auto r = tally.result("theorem2 window, terms and 1/d^2 monotonicity");
    r.detail += "; note: explicit form carries a K/d^2 constant term while "
                "the displayed rate is O(loglog T / d^2)";
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"pinsker", "lemmas", "deviation",
                                              "bounds"};
  return names;
}

Report run_suite(const std::string& suite, const SuiteOptions& options) {
  if (suite == "pinsker") return pinsker_suite(options);
  if (suite == "lemmas") return lemmas_suite();
  if (suite == "deviation") return deviation_suite(options);
  if (suite == "bounds") return bounds_suite();
  throw std::invalid_argument("unknown verification suite '" + suite + "'");
}

void print_report(std::ostream& out, const Report& report) {
  out << "== " << report.suite << " ==\n";
  for (const auto& check : report.checks) {
    out << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": "
        << check.detail << '\n';
  }
  out << report.suite << ": " << (report.passed() ? "PASS" : "FAIL") << '\n';
}

void write_report_csv(std::ostream& out, const std::vector<Report>& reports) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + '"';
  };
  out << "suite,check,passed,evaluated,violations,worst_margin,detail\n";
  for (const auto& report : reports) {
    for (const auto& c : report.checks) {
      out << report.suite << ',' << quote(c.name) << ','
          << (c.passed ? 1 : 0) << ',' << c.evaluated << ',' << c.violations
          << ',' << std::setprecision(17) << c.worst_margin << ','
          << quote(c.detail) << '\n';
    }
  }
}

}  // namespace banditkit

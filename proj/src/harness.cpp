#include "sinedist/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace sinedist {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kQuarterPi = std::numbers::pi / 4;

struct ToleranceEntry {
  std::string_view id;
  double value;
};

// Identities get the tight tolerances, inequality slacks the loose one
// (stacked eigensolver error across several matrix square roots).
constexpr ToleranceEntry kDefaultTolerances[] = {
    {"pure_pair_observable_identity", 1e-10},
    {"pure_prob_bound", 1e-8},
    {"pure_branch_sum_bound", 1e-8},
    {"prob_bound_saturation", 1e-10},
    {"branch_sum_saturation", 1e-10},
    {"metric_axioms", 1e-8},
    {"mixed_prob_bound", 1e-8},
    {"povm_prob_bound", 1e-8},
    {"tp_contractivity", 1e-8},
    {"fidelity_diff_bound", 1e-8},
    {"angle_sum_lemma", 1e-12},
    {"purified_trace_identities", 1e-9},
};

double resolve_tolerance(const SuiteConfig& config, std::string_view check_id) {
  const auto it = config.tolerance_overrides.find(std::string(check_id));
  if (it != config.tolerance_overrides.end()) return it->second;
  return default_tolerance(check_id);
}

// Shared trial loop: derives the check's sub-seed from the config seed and
// the check id, hands each trial its own independent stream plus a dimension
// cycled over the configured range, and folds margins into a CheckResult.
CheckResult run_check(std::string_view check_id, const SuiteConfig& config,
                      const std::function<double(Rng&, Eigen::Index, long long)>& trial_margin) {
  validate_config(config);
  CheckResult result;
  result.check_id = std::string(check_id);
  result.trials = config.trials;
  result.tolerance = resolve_tolerance(config, check_id);
  result.seed = Rng(config.seed).derive(check_id).seed_state();
  result.worst_margin = std::numeric_limits<double>::infinity();
  const Eigen::Index dim_count = config.dim_hi - config.dim_lo + 1;
  for (long long t = 0; t < config.trials; ++t) {
    const Eigen::Index dim = config.dim_lo + static_cast<Eigen::Index>(t % dim_count);
    Rng rng = Rng(result.seed).derive(static_cast<std::uint64_t>(t));
    const double margin = trial_margin(rng, dim, t);
    if (margin < result.worst_margin) {
      result.worst_margin = margin;
      result.worst_trial = t;
    }
    if (margin < -result.tolerance) ++result.violations;
  }
  return result;
}

DensityMatrix random_mixed(Eigen::Index dim, Rng& rng) {
  const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(dim)));
  return random_density(dim, rank, rng);
}

// Branch probability tr(E_mu rho E_mu^dagger) evaluated per operator.
double branch_prob(const CMatrix& kraus_op, const DensityMatrix& rho) {
  return Eigen::numext::real((kraus_op * rho.matrix() * kraus_op.adjoint()).trace());
}

// Branch probability ||E_mu |x>||^2 on a pure input.
double branch_prob(const CMatrix& kraus_op, const PureStateT<double>& x) {
  return (kraus_op * x.amplitudes()).squaredNorm();
}

// Angle grid for the saturation checks: trials points strictly inside
// (0, pi/4), evenly spaced, so the distance cos(2 theta) stays positive.
double theta_grid_point(long long t, long long trials) {
  return kQuarterPi * static_cast<double>(t + 1) / static_cast<double>(trials + 1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double default_tolerance(std::string_view check_id) {
  for (const auto& entry : kDefaultTolerances)
    if (entry.id == check_id) return entry.value;
  fail(Errc::IndexOutOfRange, "default_tolerance: unknown check id " + std::string(check_id));
}

void validate_config(const SuiteConfig& config) {
  if (config.trials < 1) fail(Errc::IndexOutOfRange, "config: trials must be at least 1");
  if (config.dim_lo < 2)
    fail(Errc::DimensionMismatch, "config: dimensions start at 2");
  if (config.dim_hi < config.dim_lo)
    fail(Errc::DimensionMismatch, "config: empty dimension range");
  if (config.dim_hi > 8)
    fail(Errc::DimensionOverflow, "config: dimensions above 8 are not supported");
}

CheckResult check_observable_identity(const SuiteConfig& config) {
  return run_check("pure_pair_observable_identity", config,
                   [](Rng& rng, Eigen::Index dim, long long) {
                     const auto pair = make_pair(rng.uniform(0.0, kQuarterPi), dim);
                     const CMatrix l = random_hermitian(dim, rng);
                     const auto expectation = [&l](const PureStateT<double>& s) {
                       return Eigen::numext::real(
                           (s.amplitudes().adjoint() * l * s.amplitudes())(0, 0));
                     };
                     const double lhs = expectation(pair.x) - expectation(pair.y);
                     const double rhs = (Eigen::numext::real(l(0, 0)) - Eigen::numext::real(l(1, 1))) *
                                        sine_pure(pair.x, pair.y);
                     return -std::abs(lhs - rhs);
                   });
}

CheckResult check_pure_prob_bound(const SuiteConfig& config) {
  return run_check("pure_prob_bound", config, [](Rng& rng, Eigen::Index dim, long long) {
    const auto x = random_pure(dim, rng);
    const auto y = random_pure(dim, rng);
    const auto channel = random_channel(dim, rng);
    const double dp = success_prob(channel, DensityMatrix::pure(x)) -
                      success_prob(channel, DensityMatrix::pure(y));
    return sine_pure(x, y) - std::abs(dp);
  });
}

CheckResult check_pure_branch_sum_bound(const SuiteConfig& config) {
  return run_check("pure_branch_sum_bound", config, [](Rng& rng, Eigen::Index dim, long long) {
    const auto x = random_pure(dim, rng);
    const auto y = random_pure(dim, rng);
    const auto channel = random_channel(dim, rng);
    double sum = 0;
    for (const auto& e : channel.kraus()) sum += std::abs(branch_prob(e, x) - branch_prob(e, y));
    return 2 * sine_pure(x, y) - sum;
  });
}

CheckResult check_prob_bound_saturation(const SuiteConfig& config) {
  const long long trials = config.trials;
  return run_check("prob_bound_saturation", config,
                   [trials](Rng&, Eigen::Index dim, long long t) {
                     const auto pair = make_pair(theta_grid_point(t, trials), dim);
                     const auto channel = bound_saturating_channel(pair);
                     const double dp = success_prob(channel, DensityMatrix::pure(pair.x)) -
                                       success_prob(channel, DensityMatrix::pure(pair.y));
                     return -std::abs(std::abs(dp) - sine_pure(pair.x, pair.y));
                   });
}

CheckResult check_branch_sum_saturation(const SuiteConfig& config) {
  const long long trials = config.trials;
  return run_check("branch_sum_saturation", config,
                   [trials](Rng&, Eigen::Index dim, long long t) {
                     const auto pair = make_pair(theta_grid_point(t, trials), dim);
                     const auto channel = branch_sum_saturating_channel(pair);
                     double sum = 0;
                     for (const auto& e : channel.kraus())
                       sum += std::abs(branch_prob(e, pair.x) - branch_prob(e, pair.y));
                     return -std::abs(sum - 2 * sine_pure(pair.x, pair.y));
                   });
}

CheckResult check_metric_axioms(const SuiteConfig& config) {
  return run_check("metric_axioms", config, [](Rng& rng, Eigen::Index dim, long long t) {
    const DensityMatrix sigma = random_mixed(dim, rng);
    const DensityMatrix omega = random_mixed(dim, rng);
    // Every fifth triple is collinear (rho on the segment from sigma to
    // omega), where the convexity inequalities run closest to equality.
    const DensityMatrix rho = [&]() -> DensityMatrix {
      if (t % 5 != 4) return random_mixed(dim, rng);
      const double u = rng.uniform();
      return DensityMatrix(u * sigma.matrix() + (1 - u) * omega.matrix());
    }();
    // Degenerate mixture weights are boundary cases worth hitting exactly.
    const double q = t % 7 == 6 ? static_cast<double>(rng.below(2)) : rng.uniform();
    const double r = 1 - q;
    const DensityMatrix mix(q * rho.matrix() + r * omega.matrix());

    const double f_sr = fidelity(sigma, rho);
    const double f_rs = fidelity(rho, sigma);
    const double f_sw = fidelity(sigma, omega);
    const double f_rw = fidelity(rho, omega);
    const double f_smix = fidelity(sigma, mix);
    const auto dist = [](double f) { return std::sqrt(std::max(0.0, 1 - f)); };
    const double d_sr = dist(f_sr);
    const double d_sw = dist(f_sw);
    const double d_rw = dist(f_rw);
    const double d_smix = dist(f_smix);

    double margin = -std::abs(d_sr - dist(f_rs));                  // symmetry
    margin = std::min(margin, std::min(d_sr, 1 - d_sr));           // range [0, 1]
    margin = std::min(margin, d_sw + d_rw - d_sr);                 // triangle
    margin = std::min(margin, q * d_sr * d_sr + r * d_sw * d_sw -
                                  d_smix * d_smix);                // squared convexity
    margin = std::min(margin, f_smix - (q * f_sr + r * f_sw));     // fidelity concavity

    // Against a pure reference the distance itself is concave.
    const auto x = random_pure(dim, rng);
    const double d_xrho = dist(fidelity_pure_ref(x, rho));
    const double d_xomega = dist(fidelity_pure_ref(x, omega));
    const double d_xmix = dist(fidelity_pure_ref(x, mix));
    return std::min(margin, d_xmix - (q * d_xrho + r * d_xomega));
  });
}

CheckResult check_mixed_prob_bound(const SuiteConfig& config) {
  return run_check("mixed_prob_bound", config, [](Rng& rng, Eigen::Index dim, long long) {
    const DensityMatrix sigma = random_mixed(dim, rng);
    const DensityMatrix rho = random_mixed(dim, rng);
    const auto channel = random_channel(dim, rng);
    const double d = sine_distance(sigma, rho);
    const double dp = success_prob(channel, sigma) - success_prob(channel, rho);
    double sum = 0;
    for (const auto& e : channel.kraus())
      sum += std::abs(branch_prob(e, sigma) - branch_prob(e, rho));
    return std::min(d - std::abs(dp), 2 * d - sum);
  });
}

CheckResult check_povm_prob_bound(const SuiteConfig& config) {
  return run_check("povm_prob_bound", config, [](Rng& rng, Eigen::Index dim, long long) {
    const DensityMatrix sigma = random_mixed(dim, rng);
    const DensityMatrix rho = random_mixed(dim, rng);
    const std::size_t outcomes = 1 + rng.below(static_cast<std::uint64_t>(2 * dim));
    const Povm povm = random_povm(dim, outcomes, rng);
    const RealVector<double> diff = povm_probs(povm, sigma) - povm_probs(povm, rho);
    const double d = sine_distance(sigma, rho);
    return std::min(d - diff.cwiseAbs().maxCoeff(), 2 * d - diff.cwiseAbs().sum());
  });
}

CheckResult check_tp_contractivity(const SuiteConfig& config) {
  return run_check("tp_contractivity", config, [](Rng& rng, Eigen::Index dim, long long t) {
    const DensityMatrix sigma = random_mixed(dim, rng);
    const DensityMatrix rho = random_mixed(dim, rng);
    const bool unitary_trial = t % 4 == 3;
    KrausChannel channel = [&]() -> KrausChannel {
      if (unitary_trial) return KrausChannel({random_unitary(dim, rng)});
      if (t % 4 == 1)
        return povm_to_channel(
            random_povm(dim, 1 + rng.below(static_cast<std::uint64_t>(2 * dim)), rng));
      return random_tp_channel(dim, rng);
    }();
    const double d_in = sine_distance(sigma, rho);
    const double d_out = sine_distance(DensityMatrix::normalized(apply(channel, sigma)),
                                       DensityMatrix::normalized(apply(channel, rho)));
    // Conjugating by a unitary permutes nothing in the spectrum, so there
    // the contraction must be an equality.
    return unitary_trial ? -std::abs(d_out - d_in) : d_in - d_out;
  });
}

CheckResult check_fidelity_diff_bound(const SuiteConfig& config) {
  return run_check("fidelity_diff_bound", config, [](Rng& rng, Eigen::Index dim, long long) {
    const DensityMatrix sigma = random_mixed(dim, rng);
    const DensityMatrix rho = random_mixed(dim, rng);
    const DensityMatrix omega = random_mixed(dim, rng);
    const double d = sine_distance(sigma, rho);
    double margin = d - std::abs(fidelity(sigma, omega) - fidelity(rho, omega));

    const auto channel = random_tp_channel(dim, rng);
    const DensityMatrix omega_out = random_mixed(dim, rng);
    const double diff_out =
        std::abs(fidelity(DensityMatrix::normalized(apply(channel, sigma)), omega_out) -
                 fidelity(DensityMatrix::normalized(apply(channel, rho)), omega_out));
    return std::min(margin, d - diff_out);
  });
}

CheckResult check_angle_sum_lemma(double grid_step, double tolerance, std::uint64_t seed) {
  if (!(grid_step > 0) || grid_step > kHalfPi)
    fail(Errc::IndexOutOfRange, "check_angle_sum_lemma: grid step outside (0, pi/2]");
  const long long steps = std::max<long long>(1, std::llround(kHalfPi / grid_step));
  CheckResult result;
  result.check_id = "angle_sum_lemma";
  result.tolerance = tolerance;
  result.seed = seed;
  result.worst_margin = std::numeric_limits<double>::infinity();
  long long index = 0;
  for (long long k = 0; k <= steps; ++k) {
    const double sin_a = std::sin(kHalfPi * static_cast<double>(k) / static_cast<double>(steps));
    for (long long l = steps - k; l <= steps; ++l) {
      const double sin_b = std::sin(kHalfPi * static_cast<double>(l) / static_cast<double>(steps));
      const double sum = sin_a + sin_b;
      const double margin = std::min(sum - 1, sum - (sin_a * sin_a + sin_b * sin_b));
      if (margin < result.worst_margin) {
        result.worst_margin = margin;
        result.worst_trial = index;
      }
      if (margin < -tolerance) ++result.violations;
      ++index;
    }
  }
  result.trials = index;
  return result;
}

CheckResult check_purified_trace_identities(const SuiteConfig& config) {
  return run_check("purified_trace_identities", config, [](Rng& rng, Eigen::Index dim, long long) {
    const DensityMatrix sigma = random_mixed(dim, rng);
    const auto channel = random_channel(dim, rng);
    const auto purification = purify(sigma);
    const auto extended = extend(channel, purification.dim_ancilla);
    const DensityMatrix lifted = DensityMatrix::pure(purification.state);

    double margin = -std::abs(success_prob(channel, sigma) - success_prob(extended, lifted));

    const auto spectrum = hermitian_eig(sigma.matrix());
    for (std::size_t mu = 0; mu < channel.size(); ++mu) {
      const double direct = branch_prob(channel.kraus()[mu], sigma);
      // Extending with an identity ancilla must not move any branch
      // probability on the purification.
      margin = std::min(
          margin, -std::abs(direct - branch_prob(extended.kraus()[mu], purification.state)));
      // Spectral form: weight each eigenvector's effect expectation by its
      // eigenvalue.
      const CMatrix effect = channel.kraus()[mu].adjoint() * channel.kraus()[mu];
      double spectral = 0;
      for (Eigen::Index j = 0; j < dim; ++j) {
        const CVector a = spectrum.eigenvectors.col(j);
        spectral += spectrum.eigenvalues(j) * Eigen::numext::real((a.adjoint() * effect * a)(0, 0));
      }
      margin = std::min(margin, -std::abs(direct - spectral));
    }
    return margin;
  });
}

std::vector<CheckResult> run_suite(const SuiteConfig& config) {
  validate_config(config);
  const auto scaled = [&config](long long divisor) {
    SuiteConfig c = config;
    c.trials = std::max<long long>(1, config.trials / divisor);
    return c;
  };
  // The purified-input and contractivity checks square or repeatedly
  // decompose their matrices, so their dimension is capped.
  const auto capped = [](SuiteConfig c, Eigen::Index hi) {
    c.dim_hi = std::max(c.dim_lo, std::min(c.dim_hi, hi));
    return c;
  };

  std::vector<CheckResult> results;
  results.reserve(std::size(kCheckIds));
  results.push_back(check_observable_identity(scaled(5)));
  results.push_back(check_pure_prob_bound(config));
  results.push_back(check_pure_branch_sum_bound(config));
  results.push_back(check_prob_bound_saturation(config));
  results.push_back(check_branch_sum_saturation(config));
  results.push_back(check_metric_axioms(config));
  results.push_back(check_mixed_prob_bound(config));
  results.push_back(check_povm_prob_bound(config));
  results.push_back(check_tp_contractivity(capped(scaled(2), 4)));
  results.push_back(check_fidelity_diff_bound(scaled(2)));
  results.push_back(check_angle_sum_lemma(kHalfPi / 140,
                                          resolve_tolerance(config, "angle_sum_lemma"),
                                          Rng(config.seed).derive("angle_sum_lemma").seed_state()));
  results.push_back(check_purified_trace_identities(capped(scaled(2), 4)));
  return results;
}

std::string format_records(const std::vector<CheckResult>& results) {
  std::string out;
  for (const auto& r : results) {
    out += r.check_id;
    out += '\t';
    out += std::to_string(r.trials);
    out += '\t';
    out += std::to_string(r.violations);
    out += '\t';
    out += format_double(r.worst_margin);
    out += '\t';
    out += format_double(r.tolerance);
    out += '\t';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::string format_table(const std::vector<CheckResult>& results) {
  std::string out =
      "check                           trials  violations  worst_margin   tolerance  "
      "worst_trial  status\n";
  for (const auto& r : results) {
    char line[160];
    std::snprintf(line, sizeof line, "%-30s %7lld %11lld  %+.6e  %.1e  %11lld  %s\n",
                  r.check_id.c_str(), r.trials, r.violations, r.worst_margin, r.tolerance,
                  r.worst_trial, r.violations == 0 ? "ok" : "VIOLATED");
    out += line;
  }
  return out;
}

}  // namespace sinedist

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "smoothstop/signals.hpp"
#include "smoothstop/spectrum.hpp"

namespace smoothstop {

/// Critical value choice: the pure-noise expectation sum lambda^(2 alpha) delta^2,
/// or a fixed number.
struct KappaPolicy {
    std::optional<double> explicit_value;

    [[nodiscard]] bool is_default() const { return !explicit_value.has_value(); }
    [[nodiscard]] double resolve(const Spectrum& s, double alpha, double delta) const;
};

/// Signals understood by the studies: the four benchmark kinds plus `zero`.
/// smooth3 is drawn once from `signal_seed` and held fixed across replicates.
Signal build_study_signal(std::string_view kind, std::size_t dimension, std::uint64_t signal_seed);

/// Default seed for randomized study signals derived from the master seed.
std::uint64_t default_signal_seed(std::uint64_t master_seed);

struct EfficiencyStudyConfig {
    double p = 0.5;
    std::size_t dimension = 10000;
    double delta = 0.01;
    std::vector<std::string> signals{"supersmooth", "smooth3", "smooth21", "rough"};
    std::vector<double> alphas{0.0, 0.2, 0.5, 1.0, 1.5};
    std::size_t replicates = 1000;
    std::uint64_t master_seed = 0;
    std::optional<std::uint64_t> signal_seed;
    KappaPolicy kappa;
    unsigned workers = 1;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct ReplicateRecord {
    std::string signal;
    double alpha = 0.0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::size_t tau = 0;
    double loss = 0.0;
    double rel_efficiency = 0.0;
    /// ceil(t^b_alpha) / tau; NaN and flagged when tau == 0.
    double rel_stopping = 0.0;
    bool flagged = false;
};

/// One record per (signal, alpha, replicate), ordered by that triple.
/// Output is independent of cfg.workers.
std::vector<ReplicateRecord> run_efficiency_study(const EfficiencyStudyConfig& cfg);

struct RateStudyConfig {
    std::vector<int> k_values{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    double p = 0.5;
    double r_max = 1000.0;
    double two_beta_min = 0.5;  // 2 * beta_min
    std::vector<std::string> signals{"supersmooth", "rough"};
    std::vector<double> alphas{0.0, 0.2, 0.5, 1.0, 1.5};
    std::size_t replicates = 1000;
    /// Replicates for cells with k >= large_k_from.
    std::size_t replicates_large_k = 200;
    int large_k_from = 8;
    std::uint64_t master_seed = 0;
    std::optional<std::uint64_t> signal_seed;
    KappaPolicy kappa;
    unsigned workers = 1;

    void validate() const;
    [[nodiscard]] std::size_t replicates_for(int k) const;
};

/// D_k = 100 * 2^k.
std::size_t rate_dimension(int k);
/// delta_k = sqrt(r_max^2 / D_k^(2 beta_min + 2p + 1)).
double rate_delta(const RateStudyConfig& cfg, int k);

struct RateRow {
    int k = 0;
    std::size_t dimension = 0;
    double delta = 0.0;
    std::string signal;
    double alpha = 0.0;
    std::size_t n_reps = 0;
    double mean_loss = 0.0;
    double se_loss = 0.0;
    double oracle_risk = 0.0;  // min_m risk(m)
    double sqrtD_risk = 0.0;   // risk(ceil(sqrt(D_k)))
};

/// One row per (k, signal, alpha), in that order.
std::vector<RateRow> run_rate_study(const RateStudyConfig& cfg);

struct NullStudyConfig {
    std::vector<std::size_t> dimensions{1000, 2000, 4000};
    double p = 0.5;
    double delta = 0.01;
    double alpha = 0.0;
    KappaPolicy kappa;
    std::size_t replicates = 1000;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;

    void validate() const;
};

struct NullRow {
    std::size_t dimension = 0;
    double delta = 0.0;
    double alpha = 0.0;
    double kappa = 0.0;
    std::size_t n_reps = 0;
    double mean_loss = 0.0;
    double se_loss = 0.0;
    double mean_tau = 0.0;
    double median_tau = 0.0;
    double sd_std = 0.0;
    /// s_D^((2p+1)/(1-2 alpha p)) delta^2; NaN when alpha p >= 1/2.
    double theory_rate = 0.0;
};

/// Stops on pure noise (mu = 0) for each dimension in the list.
std::vector<NullRow> run_null_lowerbound_study(const NullStudyConfig& cfg);

struct SummaryRow {
    std::string signal;
    double alpha = 0.0;
    std::string metric;
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    double mean = 0.0, se = 0.0;
    std::size_t n = 0;
    std::size_t n_flagged = 0;
};

/// Type-7 (linear interpolation) sample quantile of sorted data.
double quantile_type7(std::span<const double> sorted, double q);

/// Per (signal, alpha) group, in order of first appearance, one row for each
/// of rel_efficiency, rel_stopping_time, tau, loss. Flagged records are
/// excluded from rel_stopping_time and counted in n_flagged.
/// Throws std::invalid_argument on empty input.
std::vector<SummaryRow> summarize(std::span<const ReplicateRecord> records);

void write_records_csv(std::ostream& out, std::span<const ReplicateRecord> records);
void write_rate_csv(std::ostream& out, std::span<const RateRow> rows);
void write_null_csv(std::ostream& out, std::span<const NullRow> rows);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace smoothstop

#include "smoothstop/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "smoothstop/csv.hpp"
#include "smoothstop/estimator.hpp"
#include "smoothstop/numeric.hpp"
#include "smoothstop/oracles.hpp"
#include "smoothstop/random.hpp"
#include "smoothstop/stopping.hpp"

namespace smoothstop {

double KappaPolicy::resolve(const Spectrum& s, double alpha, double delta) const {
    return explicit_value ? *explicit_value : default_kappa(s, alpha, delta);
}

std::uint64_t default_signal_seed(std::uint64_t master_seed) {
    return rng::derive_seed(master_seed, 0, "signal", 0.0);
}

Signal build_study_signal(std::string_view kind, std::size_t dimension, std::uint64_t signal_seed) {
    if (kind == "zero") return make_zero_signal(dimension);
    const SignalKind k = parse_signal_kind(kind);
    return make_paper_signal(k, dimension,
                             k == SignalKind::Smooth3 ? std::optional(signal_seed) : std::nullopt);
}

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw std::invalid_argument(field + ": " + why);
}

void validate_common(double p, const std::vector<std::string>& signals,
                     const std::vector<double>& alphas, std::size_t replicates,
                     const KappaPolicy& kappa) {
    require(std::isfinite(p) && p >= 0.0, "p", "must be >= 0");
    require(!signals.empty(), "signals", "must not be empty");
    for (const auto& s : signals) {
        if (s == "zero") continue;
        try {
            parse_signal_kind(s);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("signals: unknown signal '" + s + "'");
        }
    }
    require(!alphas.empty(), "alpha_list", "must not be empty");
    for (double a : alphas) require(std::isfinite(a) && a >= 0.0, "alpha_list", "entries must be >= 0");
    require(replicates >= 1, "replicates", "must be >= 1");
    if (kappa.explicit_value)
        require(std::isfinite(*kappa.explicit_value) && *kappa.explicit_value >= 0.0, "kappa",
                "must be >= 0");
}

/// Everything one (spectrum, signal, delta, alpha, kappa) cell needs to run
/// replicates without touching shared mutable state.
struct Cell {
    std::string label;       // signal label used in output
    std::string seed_label;  // label mixed into replicate seeds
    double alpha = 0.0;
    double delta = 0.0;
    double kappa = 0.0;
    std::vector<double> lambda;
    std::vector<double> mu;
    std::vector<double> weights;        // lambda^(2 alpha)
    std::vector<double> noise_weights;  // delta^2 / lambda^2
    std::vector<double> bias_tail;      // B^2_m, m = 0..D
};

Cell make_cell(const Spectrum& s, const Signal& mu, double delta, double alpha, double kappa,
               std::string label, std::string seed_label) {
    Cell c;
    c.label = std::move(label);
    c.seed_label = std::move(seed_label);
    c.alpha = alpha;
    c.delta = delta;
    c.kappa = kappa;
    c.lambda.assign(s.values().begin(), s.values().end());
    c.mu = mu.coefficients;
    c.weights = s.smoothing_weights(alpha);
    c.noise_weights = s.inverse_squares();
    for (double& w : c.noise_weights) w *= delta * delta;
    const std::size_t d = s.dimension();
    c.bias_tail.assign(d + 1, 0.0);
    CompensatedSum tail;
    for (std::size_t m = d; m > 0; --m) {
        tail.add(c.mu[m - 1] * c.mu[m - 1]);
        c.bias_tail[m - 1] = tail.value();
    }
    return c;
}

struct Outcome {
    std::size_t tau = 0;
    double loss = 0.0;
};

/// Simulates one observation with the same noise stream as simulate(), stops,
/// and evaluates the loss from the retained noise as B^2_tau + S_tau.
Outcome run_replicate(const Cell& c, std::uint64_t seed) {
    const std::size_t d = c.lambda.size();
    std::vector<double> eps(d);
    rng::CounterStream(seed).normals(0, d, eps.data());
    std::vector<double> y(d);
    for (std::size_t i = 0; i < d; ++i) y[i] = c.lambda[i] * c.mu[i] + c.delta * eps[i];

    Outcome out;
    out.tau = stopping_time(y, c.weights, c.kappa);
    CompensatedSum loss(c.bias_tail[out.tau]);
    for (std::size_t i = 0; i < out.tau; ++i) loss.add(c.noise_weights[i] * eps[i] * eps[i]);
    out.loss = loss.value();
    return out;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(std::span<const double> xs) {
    MeanSe r;
    if (xs.empty()) return {std::nan(""), std::nan("")};
    r.mean = compensated_sum(xs) / static_cast<double>(xs.size());
    if (xs.size() < 2) {
        r.se = std::nan("");
        return r;
    }
    CompensatedSum ss;
    for (double x : xs) ss.add((x - r.mean) * (x - r.mean));
    const double n = static_cast<double>(xs.size());
    r.se = std::sqrt(ss.value() / (n - 1.0) / n);
    return r;
}

}  // namespace

void EfficiencyStudyConfig::validate() const {
    validate_common(p, signals, alphas, replicates, kappa);
    require(dimension >= 1, "D", "must be >= 1");
    require(std::isfinite(delta) && delta > 0.0, "delta", "must be > 0");
}

std::vector<ReplicateRecord> run_efficiency_study(const EfficiencyStudyConfig& cfg) {
    cfg.validate();
    const Spectrum spectrum = make_polynomial_spectrum(cfg.p, cfg.dimension);
    const std::uint64_t signal_seed = cfg.signal_seed.value_or(default_signal_seed(cfg.master_seed));

    struct EfficiencyCell {
        Cell cell;
        double min_risk;
        double ceil_balanced;
    };
    std::vector<EfficiencyCell> cells;
    for (const auto& kind : cfg.signals) {
        const Signal mu = build_study_signal(kind, cfg.dimension, signal_seed);
        const double min_risk = classical_oracle(spectrum, mu, cfg.delta).risk;
        for (double alpha : cfg.alphas) {
            const double kappa = cfg.kappa.resolve(spectrum, alpha, cfg.delta);
            const double tb = alpha_balanced_oracle(spectrum, mu, cfg.delta, alpha);
            cells.push_back({make_cell(spectrum, mu, cfg.delta, alpha, kappa, kind, kind), min_risk,
                             std::ceil(tb)});
        }
    }

    const std::size_t n = cfg.replicates;
    std::vector<ReplicateRecord> records(cells.size() * n);
    detail::parallel_for(records.size(), cfg.workers, [&](std::size_t task) {
        const auto& ec = cells[task / n];
        const std::size_t rep = task % n;
        const std::uint64_t seed = rng::derive_seed(cfg.master_seed, rep, ec.cell.seed_label, ec.cell.alpha);
        const Outcome o = run_replicate(ec.cell, seed);

        ReplicateRecord& r = records[task];
        r.signal = ec.cell.label;
        r.alpha = ec.cell.alpha;
        r.replicate = rep;
        r.seed = seed;
        r.tau = o.tau;
        r.loss = o.loss;
        // A zero loss can only meet a zero oracle risk (mu = 0 stopped at 0): perfect efficiency.
        r.rel_efficiency = (o.loss == 0.0 && ec.min_risk == 0.0) ? 1.0 : std::sqrt(ec.min_risk / o.loss);
        if (o.tau == 0) {
            r.rel_stopping = std::nan("");
            r.flagged = true;
        } else {
            r.rel_stopping = ec.ceil_balanced / static_cast<double>(o.tau);
        }
    });
    return records;
}

std::size_t rate_dimension(int k) {
    if (k < 0 || k > 40) throw std::invalid_argument("k_range: k must lie in [0, 40]");
    return std::size_t{100} << k;
}

double rate_delta(const RateStudyConfig& cfg, int k) {
    const double d = static_cast<double>(rate_dimension(k));
    return std::sqrt(cfg.r_max * cfg.r_max / std::pow(d, cfg.two_beta_min + 2.0 * cfg.p + 1.0));
}

void RateStudyConfig::validate() const {
    validate_common(p, signals, alphas, replicates, kappa);
    require(!k_values.empty(), "k_range", "must not be empty");
    for (int k : k_values) require(k >= 0 && k <= 20, "k_range", "entries must lie in [0, 20]");
    require(std::isfinite(r_max) && r_max > 0.0, "r_max", "must be > 0");
    require(std::isfinite(two_beta_min) && two_beta_min >= 0.0, "beta_min", "2*beta_min must be >= 0");
    require(replicates_large_k >= 1, "replicates_large_k", "must be >= 1");
}

std::size_t RateStudyConfig::replicates_for(int k) const {
    return k >= large_k_from ? replicates_large_k : replicates;
}

std::vector<RateRow> run_rate_study(const RateStudyConfig& cfg) {
    cfg.validate();
    const std::uint64_t signal_seed = cfg.signal_seed.value_or(default_signal_seed(cfg.master_seed));

    struct RateCell {
        Cell cell;
        RateRow row;
        std::size_t first_task;
    };
    std::vector<RateCell> cells;
    std::size_t total = 0;
    for (int k : cfg.k_values) {
        const std::size_t d = rate_dimension(k);
        const double delta = rate_delta(cfg, k);
        const Spectrum spectrum = make_polynomial_spectrum(cfg.p, d);
        const auto sqrt_index = static_cast<double>(
            std::min<std::size_t>(d, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))))));
        for (const auto& kind : cfg.signals) {
            const Signal mu = build_study_signal(kind, d, signal_seed);
            const double oracle = classical_oracle(spectrum, mu, delta).risk;
            const double sqrt_risk = risk(spectrum, mu, delta, sqrt_index);
            for (double alpha : cfg.alphas) {
                const double kappa = cfg.kappa.resolve(spectrum, alpha, delta);
                RateRow row;
                row.k = k;
                row.dimension = d;
                row.delta = delta;
                row.signal = kind;
                row.alpha = alpha;
                row.n_reps = cfg.replicates_for(k);
                row.oracle_risk = oracle;
                row.sqrtD_risk = sqrt_risk;
                cells.push_back({make_cell(spectrum, mu, delta, alpha, kappa, kind,
                                           kind + "/k=" + std::to_string(k)),
                                 row, total});
                total += row.n_reps;
            }
        }
    }

    // task -> cell lookup via the cumulative first_task offsets.
    std::vector<double> losses(total);
    detail::parallel_for(total, cfg.workers, [&](std::size_t task) {
        auto it = std::upper_bound(cells.begin(), cells.end(), task,
                                   [](std::size_t t, const RateCell& c) { return t < c.first_task; });
        const RateCell& rc = *std::prev(it);
        const std::size_t rep = task - rc.first_task;
        const auto seed = rng::derive_seed(cfg.master_seed, rep, rc.cell.seed_label, rc.cell.alpha);
        losses[task] = run_replicate(rc.cell, seed).loss;
    });

    std::vector<RateRow> rows;
    rows.reserve(cells.size());
    for (const auto& rc : cells) {
        RateRow row = rc.row;
        const auto stats = mean_and_se(std::span(losses).subspan(rc.first_task, row.n_reps));
        row.mean_loss = stats.mean;
        row.se_loss = stats.se;
        rows.push_back(std::move(row));
    }
    return rows;
}

void NullStudyConfig::validate() const {
    require(!dimensions.empty(), "D_list", "must not be empty");
    for (auto d : dimensions) require(d >= 1, "D_list", "entries must be >= 1");
    require(std::isfinite(p) && p >= 0.0, "p", "must be >= 0");
    require(std::isfinite(delta) && delta > 0.0, "delta", "must be > 0");
    require(std::isfinite(alpha) && alpha >= 0.0, "alpha", "must be >= 0");
    require(replicates >= 1, "replicates", "must be >= 1");
    if (kappa.explicit_value)
        require(std::isfinite(*kappa.explicit_value) && *kappa.explicit_value >= 0.0, "kappa",
                "must be >= 0");
}

std::vector<NullRow> run_null_lowerbound_study(const NullStudyConfig& cfg) {
    cfg.validate();
    std::vector<Cell> cells;
    std::vector<NullRow> rows;
    for (std::size_t d : cfg.dimensions) {
        const Spectrum spectrum = make_polynomial_spectrum(cfg.p, d);
        const double kappa = cfg.kappa.resolve(spectrum, cfg.alpha, cfg.delta);
        cells.push_back(make_cell(spectrum, make_zero_signal(d), cfg.delta, cfg.alpha, kappa, "zero",
                                  "zero/D=" + std::to_string(d)));
        NullRow row;
        row.dimension = d;
        row.delta = cfg.delta;
        row.alpha = cfg.alpha;
        row.kappa = kappa;
        row.n_reps = cfg.replicates;
        row.sd_std = sd_std(spectrum, cfg.alpha);
        const double ap = cfg.alpha * cfg.p;
        row.theory_rate = ap < 0.5 ? std::pow(row.sd_std, (2.0 * cfg.p + 1.0) / (1.0 - 2.0 * ap)) *
                                         cfg.delta * cfg.delta
                                   : std::nan("");
        rows.push_back(row);
    }

    const std::size_t n = cfg.replicates;
    std::vector<Outcome> outcomes(cells.size() * n);
    detail::parallel_for(outcomes.size(), cfg.workers, [&](std::size_t task) {
        const Cell& c = cells[task / n];
        const std::size_t rep = task % n;
        outcomes[task] = run_replicate(c, rng::derive_seed(cfg.master_seed, rep, c.seed_label, c.alpha));
    });

    for (std::size_t j = 0; j < rows.size(); ++j) {
        std::vector<double> losses(n), taus(n);
        for (std::size_t r = 0; r < n; ++r) {
            losses[r] = outcomes[j * n + r].loss;
            taus[r] = static_cast<double>(outcomes[j * n + r].tau);
        }
        const auto ls = mean_and_se(losses);
        rows[j].mean_loss = ls.mean;
        rows[j].se_loss = ls.se;
        rows[j].mean_tau = mean_and_se(taus).mean;
        std::sort(taus.begin(), taus.end());
        rows[j].median_tau = quantile_type7(taus, 0.5);
    }
    return rows;
}

double quantile_type7(std::span<const double> sorted, double q) {
    if (sorted.empty()) return std::nan("");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<SummaryRow> summarize(std::span<const ReplicateRecord> records) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");

    // Group keys in order of first appearance.
    std::vector<std::pair<std::string, double>> keys;
    std::map<std::pair<std::string, double>, std::vector<const ReplicateRecord*>> groups;
    for (const auto& r : records) {
        auto key = std::make_pair(r.signal, r.alpha);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) keys.push_back(key);
        it->second.push_back(&r);
    }

    std::vector<SummaryRow> out;
    for (const auto& key : keys) {
        const auto& group = groups[key];
        std::size_t flagged = 0;
        for (const auto* r : group) flagged += r->flagged ? 1 : 0;

        auto emit = [&](const char* metric, auto extract, bool skip_flagged) {
            std::vector<double> xs;
            for (const auto* r : group)
                if (!(skip_flagged && r->flagged)) xs.push_back(extract(*r));
            SummaryRow row{key.first, key.second, metric};
            row.n = xs.size();
            row.n_flagged = flagged;
            const auto stats = mean_and_se(xs);
            row.mean = stats.mean;
            row.se = stats.se;
            std::sort(xs.begin(), xs.end());
            if (xs.empty()) {
                row.min = row.q1 = row.median = row.q3 = row.max = std::nan("");
            } else {
                row.min = xs.front();
                row.q1 = quantile_type7(xs, 0.25);
                row.median = quantile_type7(xs, 0.5);
                row.q3 = quantile_type7(xs, 0.75);
                row.max = xs.back();
            }
            out.push_back(std::move(row));
        };
        emit("rel_efficiency", [](const ReplicateRecord& r) { return r.rel_efficiency; }, false);
        emit("rel_stopping_time", [](const ReplicateRecord& r) { return r.rel_stopping; }, true);
        emit("tau", [](const ReplicateRecord& r) { return static_cast<double>(r.tau); }, false);
        emit("loss", [](const ReplicateRecord& r) { return r.loss; }, false);
    }
    return out;
}

void write_records_csv(std::ostream& out, std::span<const ReplicateRecord> records) {
    out << "signal,alpha,replicate,seed,tau,loss,rel_efficiency,rel_stopping,flag\n";
    for (const auto& r : records) {
        out << r.signal << ',' << csv::format(r.alpha) << ',' << r.replicate << ',' << r.seed << ','
            << r.tau << ',' << csv::format(r.loss) << ',' << csv::format(r.rel_efficiency) << ','
            << csv::format(r.rel_stopping) << ',' << (r.flagged ? "tau_zero" : "") << '\n';
    }
}

void write_rate_csv(std::ostream& out, std::span<const RateRow> rows) {
    out << "k,D,delta,signal,alpha,n_reps,mean_loss,se_loss,oracle_risk,sqrtD_risk\n";
    for (const auto& r : rows) {
        out << r.k << ',' << r.dimension << ',' << csv::format(r.delta) << ',' << r.signal << ','
            << csv::format(r.alpha) << ',' << r.n_reps << ',' << csv::format(r.mean_loss) << ','
            << csv::format(r.se_loss) << ',' << csv::format(r.oracle_risk) << ','
            << csv::format(r.sqrtD_risk) << '\n';
    }
}

void write_null_csv(std::ostream& out, std::span<const NullRow> rows) {
    out << "D,delta,alpha,kappa,n_reps,mean_loss,se_loss,mean_tau,median_tau,sd_std,theory_rate\n";
    for (const auto& r : rows) {
        out << r.dimension << ',' << csv::format(r.delta) << ',' << csv::format(r.alpha) << ','
            << csv::format(r.kappa) << ',' << r.n_reps << ',' << csv::format(r.mean_loss) << ','
            << csv::format(r.se_loss) << ',' << csv::format(r.mean_tau) << ','
            << csv::format(r.median_tau) << ',' << csv::format(r.sd_std) << ','
            << csv::format(r.theory_rate) << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "signal,alpha,metric,min,q1,median,q3,max,mean,se,n,n_flagged\n";
    for (const auto& r : rows) {
        out << r.signal << ',' << csv::format(r.alpha) << ',' << r.metric << ',' << csv::format(r.min)
            << ',' << csv::format(r.q1) << ',' << csv::format(r.median) << ',' << csv::format(r.q3)
            << ',' << csv::format(r.max) << ',' << csv::format(r.mean) << ',' << csv::format(r.se)
            << ',' << r.n << ',' << r.n_flagged << '\n';
    }
}

}  // namespace smoothstop

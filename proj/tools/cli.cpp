#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "smoothstop/csv.hpp"
#include "smoothstop/errors.hpp"
#include "smoothstop/experiments.hpp"
#include "smoothstop/observation.hpp"
#include "smoothstop/oracles.hpp"
#include "smoothstop/signals.hpp"
#include "smoothstop/spectrum.hpp"
#include "smoothstop/stopping.hpp"

namespace smoothstop::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Bad configuration: exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
    bool dry_run = false;
    bool emit_plot_script = false;
};

/// Typed access to a JSON object that remembers which keys were read, so
/// unknown (typically misspelled) keys can be rejected.
class ConfigReader {
public:
    explicit ConfigReader(json doc) : doc_(std::move(doc)) {
        if (!doc_.is_object()) throw ConfigError("configuration root must be a JSON object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return doc_.contains(key); }

    template <typename T>
    T get(const std::string& key) {
        if (!doc_.contains(key)) throw ConfigError("missing required field '" + key + "'");
        return convert<T>(key);
    }

    template <typename T>
    T get_or(const std::string& key, T fallback) {
        if (!doc_.contains(key)) return fallback;
        return convert<T>(key);
    }

    template <typename T>
    std::optional<T> get_optional(const std::string& key) {
        if (!doc_.contains(key)) return std::nullopt;
        return convert<T>(key);
    }

    /// `kappa`: absent or "default" selects the default critical value.
    KappaPolicy kappa() {
        used_.insert("kappa");
        if (!doc_.contains("kappa")) return {};
        const auto& v = doc_.at("kappa");
        if (v.is_string() && v.get<std::string>() == "default") return {};
        if (v.is_number()) {
            const double k = v.get<double>();
            if (!(k >= 0.0) || !std::isfinite(k)) throw ConfigError("kappa: must be >= 0");
            return {k};
        }
        throw ConfigError("kappa: expected \"default\" or a number");
    }

    void reject_unknown() const {
        for (const auto& item : doc_.items())
            if (!used_.count(item.key()))
                throw ConfigError("unknown configuration field '" + item.key() + "'");
    }

private:
    template <typename T>
    T convert(const std::string& key) {
        used_.insert(key);
        try {
            return doc_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("field '" + key + "' has the wrong type");
        }
    }

    json doc_;
    std::set<std::string> used_;
};

ConfigReader load_config(const std::string& path) {
    if (path.empty()) throw ConfigError("--config is required");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    try {
        return ConfigReader(json::parse(in, nullptr, true, /*ignore_comments=*/true));
    } catch (const json::parse_error& e) {
        throw ConfigError("configuration file '" + path + "' is not valid JSON: " + e.what());
    }
}

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError(std::string(field) + ": must be > 0");
}

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) throw NumericError(std::string("non-finite value in ") + what);
}

std::uint64_t resolve_seed(const Flags& flags, ConfigReader& cfg, const std::string& key) {
    auto from_file = cfg.get_optional<std::uint64_t>(key);
    if (flags.seed) return *flags.seed;
    return from_file.value_or(0);
}

unsigned resolve_workers(const Flags& flags) {
    if (flags.workers > 0) return flags.workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

fs::path prepare_out_dir(const Flags& flags) {
    fs::path dir(flags.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void print_warnings(const StoppingConfig& cfg, const Spectrum& s, std::ostream& err) {
    for (const auto& w : config_warnings(cfg, s)) err << "warning: " << w << '\n';
}

/// Spectrum from `spectrum_file` or from (`p`, `D`).
Spectrum read_spectrum(ConfigReader& cfg) {
    if (cfg.has("spectrum_file")) {
        const auto path = cfg.get<std::string>("spectrum_file");
        try {
            return load_spectrum(path);
        } catch (const ParseError& e) {
            throw ConfigError(std::string("spectrum_file: ") + e.what());
        }
    }
    const double p = cfg.get<double>("p");
    const long long d = cfg.get<long long>("D");
    if (!(p >= 0.0)) throw ConfigError("p: must be >= 0");
    if (d < 1) throw ConfigError("D: must be >= 1");
    return make_polynomial_spectrum(p, static_cast<std::size_t>(d));
}

Signal read_signal_entry(const std::string& kind_or_path, bool is_file, std::size_t dimension,
                         std::uint64_t signal_seed) {
    if (is_file) {
        try {
            Signal mu = load_signal(kind_or_path);
            if (mu.dimension() != dimension)
                throw ConfigError("signal_file '" + kind_or_path + "' has dimension " +
                                  std::to_string(mu.dimension()) + " but the spectrum has D=" +
                                  std::to_string(dimension));
            return mu;
        } catch (const ParseError& e) {
            throw ConfigError(std::string("signal_file: ") + e.what());
        }
    }
    try {
        return build_study_signal(kind_or_path, dimension, signal_seed);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("signal: ") + e.what());
    }
}

std::vector<double> read_alphas(ConfigReader& cfg, std::vector<double> fallback) {
    auto alphas = cfg.get_or<std::vector<double>>("alpha_list", std::move(fallback));
    if (alphas.empty()) throw ConfigError("alpha_list: must not be empty");
    for (double a : alphas)
        if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("alpha_list: entries must be >= 0");
    return alphas;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Flags& flags, std::ostream& out, std::ostream& err) {
    auto cfg = load_config(flags.config_path);
    const Spectrum spectrum = read_spectrum(cfg);
    const double delta = cfg.get<double>("delta");
    require_positive(delta, "delta");
    const std::uint64_t seed = resolve_seed(flags, cfg, "seed");
    const auto signal_seed = cfg.get_or<std::uint64_t>("signal_seed", default_signal_seed(seed));
    Signal mu;
    if (cfg.has("signal_file"))
        mu = read_signal_entry(cfg.get<std::string>("signal_file"), true, spectrum.dimension(), signal_seed);
    else
        mu = read_signal_entry(cfg.get<std::string>("signal"), false, spectrum.dimension(), signal_seed);
    cfg.reject_unknown();

    if (flags.dry_run) {
        out << "plan: simulate one observation, D=" << spectrum.dimension() << ", signal=" << mu.label
            << ", delta=" << csv::format(delta) << ", seed=" << seed << "\n";
        return kSuccess;
    }
    const Observation obs = simulate(spectrum, mu, delta, seed, false);
    for (double y : obs.y) require_finite(y, "observation");
    const auto dir = prepare_out_dir(flags);
    save_observation(obs, dir / "observation.csv");
    err << "wrote " << (dir / "observation.csv").string() << '\n';
    return kSuccess;
}

int cmd_oracles(const Flags& flags, std::ostream& out, std::ostream& err) {
    auto cfg = load_config(flags.config_path);
    const Spectrum spectrum = read_spectrum(cfg);
    const double delta = cfg.get<double>("delta");
    require_positive(delta, "delta");
    const auto alphas = read_alphas(cfg, {0.0});
    const KappaPolicy kappa = cfg.kappa();
    const double c_kappa = cfg.get_or<double>("c_kappa", 1.0);
    require_positive(c_kappa, "c_kappa");
    const std::uint64_t master = resolve_seed(flags, cfg, "master_seed");
    const auto signal_seed = cfg.get_or<std::uint64_t>("signal_seed", default_signal_seed(master));
    const auto kinds = cfg.get_or<std::vector<std::string>>("signals", {});
    const auto files = cfg.get_or<std::vector<std::string>>("signal_files", {});
    if (kinds.empty() && files.empty()) throw ConfigError("signals: at least one signal is required");
    cfg.reject_unknown();

    std::vector<Signal> signals;
    for (const auto& k : kinds) signals.push_back(read_signal_entry(k, false, spectrum.dimension(), signal_seed));
    for (const auto& f : files) signals.push_back(read_signal_entry(f, true, spectrum.dimension(), signal_seed));

    if (flags.dry_run) {
        out << "plan: oracles for " << signals.size() << " signal(s) x " << alphas.size()
            << " alpha(s) = " << signals.size() * alphas.size() << " rows, D=" << spectrum.dimension()
            << "\n";
        return kSuccess;
    }

    std::ostringstream csv_out;
    csv_out << "signal,alpha,t_classical,risk_classical,t_balanced,t_alpha_balanced,t_proxy,m_balanced\n";
    for (const auto& mu : signals) {
        for (double alpha : alphas) {
            StoppingConfig sc{alpha, kappa.resolve(spectrum, alpha, delta), c_kappa};
            print_warnings(sc, spectrum, err);
            const OracleReport r = oracle_report(spectrum, mu, delta, sc);
            require_finite(r.classical.risk, "classical oracle risk");
            csv_out << mu.label << ',' << csv::format(alpha) << ',' << r.classical.index << ','
                    << csv::format(r.classical.risk) << ',' << csv::format(r.balanced) << ','
                    << csv::format(r.alpha_balanced) << ',' << csv::format(r.proxy) << ','
                    << r.discrete_balanced << '\n';
        }
    }
    out << csv_out.str();
    const auto dir = prepare_out_dir(flags);
    write_file(dir / "oracles.csv", csv_out.str());
    return kSuccess;
}

std::string efficiency_plot_script() {
    return R"(# gnuplot script: relative efficiency by (signal, alpha) from efficiency_summary.csv
set datafile separator ','
set key off
set ylabel 'relative efficiency'
set xlabel 'group (signal, alpha)'
set xtics rotate by 45 right
set terminal pngcairo size 1200,600
set output 'efficiency.png'
plot '< grep ",rel_efficiency," efficiency_summary.csv' using 0:5:4:8:7:xticlabels(sprintf("%s a=%s", stringcolumn(1), stringcolumn(2))) with candlesticks whiskerbars
)";
}

std::string rates_plot_script() {
    return R"(# gnuplot script: log-log risk rates from rates.csv
set datafile separator ','
set logscale xy
set xlabel 'D_k'
set ylabel 'risk'
set key outside
set terminal pngcairo size 1200,700
set output 'rates.png'
plot for [a in "0 0.2 0.5 1 1.5"] '< grep ",supersmooth," rates.csv' using 2:($5==a+0 ? $7 : 1/0) with linespoints title 'supersmooth alpha='.a, \
     '< grep ",supersmooth,0," rates.csv' using 2:9 with lines dt 2 title 'oracle', \
     '< grep ",supersmooth,0," rates.csv' using 2:10 with lines dt 3 title 'sqrt(D) index'
)";
}

std::string nullbound_plot_script() {
    return R"(# gnuplot script: pure-noise loss against dimension from nullbound.csv
set datafile separator ','
set logscale xy
set xlabel 'D'
set ylabel 'mean loss'
set terminal pngcairo size 900,600
set output 'nullbound.png'
plot 'nullbound.csv' every ::1 using 1:6 with linespoints title 'mean loss', \
     'nullbound.csv' every ::1 using 1:11 with lines dt 2 title 's_D rate'
)";
}

int cmd_efficiency(const Flags& flags, std::ostream& out, std::ostream& err) {
    auto cfg = load_config(flags.config_path);
    EfficiencyStudyConfig sc;
    sc.p = cfg.get_or<double>("p", sc.p);
    const long long d = cfg.get_or<long long>("D", static_cast<long long>(sc.dimension));
    if (d < 1) throw ConfigError("D: must be >= 1");
    sc.dimension = static_cast<std::size_t>(d);
    sc.delta = cfg.get_or<double>("delta", sc.delta);
    require_positive(sc.delta, "delta");
    sc.signals = cfg.get_or<std::vector<std::string>>("signals", sc.signals);
    sc.alphas = read_alphas(cfg, sc.alphas);
    const long long reps = cfg.get_or<long long>("replicates", static_cast<long long>(sc.replicates));
    if (reps < 1) throw ConfigError("replicates: must be >= 1");
    sc.replicates = static_cast<std::size_t>(reps);
    sc.master_seed = resolve_seed(flags, cfg, "master_seed");
    sc.signal_seed = cfg.get_optional<std::uint64_t>("signal_seed");
    sc.kappa = cfg.kappa();
    sc.workers = resolve_workers(flags);
    cfg.reject_unknown();
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (flags.dry_run) {
        out << "plan: efficiency study, D=" << sc.dimension << ", delta=" << csv::format(sc.delta)
            << ", p=" << csv::format(sc.p) << "\n"
            << "cells: " << sc.signals.size() << " signal(s) x " << sc.alphas.size() << " alpha(s) = "
            << sc.signals.size() * sc.alphas.size() << "\n"
            << "records: " << sc.signals.size() * sc.alphas.size() * sc.replicates << "\n"
            << "master_seed: " << sc.master_seed << "\n";
        return kSuccess;
    }
    const Spectrum spectrum = make_polynomial_spectrum(sc.p, sc.dimension);
    for (double a : sc.alphas)
        print_warnings({a, sc.kappa.resolve(spectrum, a, sc.delta), 1.0}, spectrum, err);

    const auto records = run_efficiency_study(sc);
    for (const auto& r : records) require_finite(r.loss, "loss");
    const auto summary = summarize(records);

    const auto dir = prepare_out_dir(flags);
    std::ostringstream rec_csv, sum_csv;
    write_records_csv(rec_csv, records);
    write_summary_csv(sum_csv, summary);
    write_file(dir / "efficiency_records.csv", rec_csv.str());
    write_file(dir / "efficiency_summary.csv", sum_csv.str());
    if (flags.emit_plot_script) write_file(dir / "efficiency.gp", efficiency_plot_script());
    err << "wrote " << records.size() << " records to " << (dir / "efficiency_records.csv").string() << '\n';
    return kSuccess;
}

int cmd_rates(const Flags& flags, std::ostream& out, std::ostream& err) {
    auto cfg = load_config(flags.config_path);
    RateStudyConfig sc;
    if (cfg.has("k_list")) {
        sc.k_values = cfg.get<std::vector<int>>("k_list");
    } else if (cfg.has("k_range")) {
        const auto range = cfg.get<std::vector<int>>("k_range");
        if (range.size() != 2 || range[0] > range[1])
            throw ConfigError("k_range: expected [first, last] with first <= last");
        sc.k_values.clear();
        for (int k = range[0]; k <= range[1]; ++k) sc.k_values.push_back(k);
    }
    sc.p = cfg.get_or<double>("p", sc.p);
    sc.r_max = cfg.get_or<double>("r_max", sc.r_max);
    sc.two_beta_min = cfg.get_or<double>("two_beta_min", sc.two_beta_min);
    sc.signals = cfg.get_or<std::vector<std::string>>("signals", sc.signals);
    sc.alphas = read_alphas(cfg, sc.alphas);
    const long long reps = cfg.get_or<long long>("replicates", static_cast<long long>(sc.replicates));
    const long long reps_large =
        cfg.get_or<long long>("replicates_large_k", static_cast<long long>(sc.replicates_large_k));
    if (reps < 1) throw ConfigError("replicates: must be >= 1");
    if (reps_large < 1) throw ConfigError("replicates_large_k: must be >= 1");
    sc.replicates = static_cast<std::size_t>(reps);
    sc.replicates_large_k = static_cast<std::size_t>(reps_large);
    sc.large_k_from = cfg.get_or<int>("large_k_from", sc.large_k_from);
    sc.master_seed = resolve_seed(flags, cfg, "master_seed");
    sc.signal_seed = cfg.get_optional<std::uint64_t>("signal_seed");
    sc.kappa = cfg.kappa();
    sc.workers = resolve_workers(flags);
    cfg.reject_unknown();
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (flags.dry_run) {
        std::size_t replicates = 0;
        out << "plan: rate study, p=" << csv::format(sc.p) << ", r_max=" << csv::format(sc.r_max)
            << ", 2*beta_min=" << csv::format(sc.two_beta_min) << "\n"
            << "k,D,delta,replicates\n";
        for (int k : sc.k_values) {
            out << k << ',' << rate_dimension(k) << ',' << csv::format(rate_delta(sc, k)) << ','
                << sc.replicates_for(k) << '\n';
            replicates += sc.replicates_for(k) * sc.signals.size() * sc.alphas.size();
        }
        out << "cells: " << sc.k_values.size() * sc.signals.size() * sc.alphas.size()
            << ", total replicates: " << replicates << "\n";
        return kSuccess;
    }

    const auto rows = run_rate_study(sc);
    for (const auto& r : rows) {
        require_finite(r.mean_loss, "mean loss");
        require_finite(r.oracle_risk, "oracle risk");
    }
    const auto dir = prepare_out_dir(flags);
    std::ostringstream csv_out;
    write_rate_csv(csv_out, rows);
    write_file(dir / "rates.csv", csv_out.str());
    if (flags.emit_plot_script) write_file(dir / "rates.gp", rates_plot_script());
    err << "wrote " << rows.size() << " rows to " << (dir / "rates.csv").string() << '\n';
    return kSuccess;
}

int cmd_nullbound(const Flags& flags, std::ostream& out, std::ostream& err) {
    auto cfg = load_config(flags.config_path);
    NullStudyConfig sc;
    if (cfg.has("D_list")) {
        const auto ds = cfg.get<std::vector<long long>>("D_list");
        sc.dimensions.clear();
        for (auto d : ds) {
            if (d < 1) throw ConfigError("D_list: entries must be >= 1");
            sc.dimensions.push_back(static_cast<std::size_t>(d));
        }
    }
    sc.p = cfg.get_or<double>("p", sc.p);
    sc.delta = cfg.get_or<double>("delta", sc.delta);
    require_positive(sc.delta, "delta");
    sc.alpha = cfg.get_or<double>("alpha", sc.alpha);
    const long long reps = cfg.get_or<long long>("replicates", static_cast<long long>(sc.replicates));
    if (reps < 1) throw ConfigError("replicates: must be >= 1");
    sc.replicates = static_cast<std::size_t>(reps);
    sc.master_seed = resolve_seed(flags, cfg, "master_seed");
    sc.kappa = cfg.kappa();
    sc.workers = resolve_workers(flags);
    cfg.reject_unknown();
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (flags.dry_run) {
        out << "plan: pure-noise study, alpha=" << csv::format(sc.alpha) << ", p=" << csv::format(sc.p)
            << ", delta=" << csv::format(sc.delta) << "\n"
            << "cells: " << sc.dimensions.size() << ", total replicates: "
            << sc.dimensions.size() * sc.replicates << "\n";
        return kSuccess;
    }
    const auto rows = run_null_lowerbound_study(sc);
    for (const auto& r : rows) require_finite(r.mean_loss, "mean loss");
    const auto dir = prepare_out_dir(flags);
    std::ostringstream csv_out;
    write_null_csv(csv_out, rows);
    write_file(dir / "nullbound.csv", csv_out.str());
    if (flags.emit_plot_script) write_file(dir / "nullbound.gp", nullbound_plot_script());
    err << "wrote " << rows.size() << " rows to " << (dir / "nullbound.csv").string() << '\n';
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Smoothed-residual early stopping for truncated SVD estimation", "smoothstop"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    std::uint64_t seed = 0;
    app.add_option("--config", flags.config_path, "JSON configuration file");
    app.add_option("--out", flags.out_dir, "Output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the configuration)");
    app.add_option("--workers", flags.workers, "Worker threads (default: hardware concurrency)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--dry-run", flags.dry_run, "Validate and print the plan without computing");
    app.add_flag("--emit-plot-script", flags.emit_plot_script, "Write a gnuplot script next to the CSVs");

    using Handler = int (*)(const Flags&, std::ostream&, std::ostream&);
    const std::vector<std::tuple<const char*, const char*, Handler>> commands{
        {"simulate", "Generate one observation and write index,y", cmd_simulate},
        {"oracles", "Compute oracle indices per signal and alpha", cmd_oracles},
        {"efficiency", "Relative efficiency Monte-Carlo study", cmd_efficiency},
        {"rates", "Convergence-rate study over D_k = 100 * 2^k", cmd_rates},
        {"nullbound", "Pure-noise dimension-dependent lower bound study", cmd_nullbound},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help, handler] : commands) subs.push_back(app.add_subcommand(name, help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
    if (seed_opt->count() > 0) flags.seed = seed;

    try {
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) return std::get<2>(commands[i])(flags, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumericError;
    } catch (const DimensionMismatch& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

}  // namespace smoothstop::cli

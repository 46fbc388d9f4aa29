#include "smoothstop/observation.hpp"

#include <cmath>
#include <stdexcept>

#include "smoothstop/csv.hpp"
#include "smoothstop/errors.hpp"
#include "smoothstop/random.hpp"

namespace smoothstop {

namespace {

void check_delta(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be a finite nonnegative number");
}

}  // namespace

Observation inject_noise(const Spectrum& s, const Signal& mu, double delta,
                         std::span<const double> eps) {
    check_dimension(s.dimension(), mu.dimension(), "inject_noise: signal");
    check_dimension(s.dimension(), eps.size(), "inject_noise: noise");
    check_delta(delta);
    Observation obs;
    obs.delta = delta;
    obs.y.resize(s.dimension());
    for (std::size_t i = 0; i < obs.y.size(); ++i)
        obs.y[i] = s[i] * mu.coefficients[i] + delta * eps[i];
    obs.noise.emplace(eps.begin(), eps.end());
    return obs;
}

Observation simulate(const Spectrum& s, const Signal& mu, double delta, std::uint64_t seed,
                     bool retain_noise) {
    check_dimension(s.dimension(), mu.dimension(), "simulate: signal");
    check_delta(delta);
    std::vector<double> eps(s.dimension());
    rng::CounterStream(seed).normals(0, eps.size(), eps.data());
    Observation obs = inject_noise(s, mu, delta, eps);
    obs.seed = seed;
    if (!retain_noise) obs.noise.reset();
    return obs;
}

void save_observation(const Observation& obs, const std::filesystem::path& path) {
    csv::write_indexed_column(path, "y", obs.y);
}

}  // namespace smoothstop

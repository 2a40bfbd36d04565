#pragma once

// Seeded synthetic activation cohorts.
//
// Benign models are i.i.d. standard normal. Shortcut models plant a ring of
// correlated neurons in the first ring_size columns:
//
//   a_j = cos(theta_j) * u + sin(theta_j) * v + noise_std * z_j,
//   theta_j = 2 pi j / ring_size,
//
// with u, v ~ signal_strength * N(0, I_N). Correlations then decay as
// cos(theta_i - theta_j) * s^2 / (s^2 + noise_std^2), so under the correlation
// distance the ring is a metric circle and carries a long-lived 1-cycle.
//
// Random streams: model i draws from Xoshiro256(derive_seed(seed, i)). A
// shortcut model draws u (N normals), then v (N normals), then the matrix in
// row-major order, one normal per cell. A benign model draws only the matrix.

#include <nntopo/activation.hpp>
#include <nntopo/error.hpp>
#include <nntopo/rng.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace nntopo {

struct SyntheticSpec {
    std::size_t n_models = 30;
    std::size_t n_samples = 500;
    std::size_t n_neurons = 64;
    std::size_t ring_size = 0;  // 0 for benign
    double signal_strength = 3.0;
    double noise_std = 0.5;
    std::uint64_t seed = 0;

    friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

inline void validate(const SyntheticSpec& s) {
    if (s.n_models < 1) throw usage_error("synthetic spec: n_models must be positive");
    if (s.n_samples < 2) throw usage_error("synthetic spec: n_samples must be >= 2");
    if (s.n_neurons < 2) throw usage_error("synthetic spec: n_neurons must be >= 2");
    if (s.ring_size != 0 && (s.ring_size < 4 || s.ring_size > s.n_neurons)) {
        throw usage_error("synthetic spec: ring_size must be 0 or in [4, n_neurons]");
    }
    if (!(s.signal_strength >= 0.0) || !std::isfinite(s.signal_strength)) {
        throw usage_error("synthetic spec: signal_strength must be >= 0");
    }
    if (!(s.noise_std > 0.0) || !std::isfinite(s.noise_std)) throw usage_error("synthetic spec: noise_std must be > 0");
}

inline ActivationMatrix gen_benign_model(const SyntheticSpec& spec, std::size_t model_index) {
    validate(spec);
    if (spec.ring_size != 0) throw usage_error("gen_benign_model: ring_size must be 0");
    Xoshiro256 rng(derive_seed(spec.seed, model_index));
    std::vector<double> values(spec.n_samples * spec.n_neurons);
    for (auto& v : values) v = rng.normal();
    return ActivationMatrix(spec.n_samples, spec.n_neurons, std::move(values));
}

inline ActivationMatrix gen_shortcut_model(const SyntheticSpec& spec, std::size_t model_index) {
    validate(spec);
    if (spec.ring_size < 4) throw usage_error("gen_shortcut_model: ring_size must be >= 4");
    Xoshiro256 rng(derive_seed(spec.seed, model_index));
    const std::size_t n = spec.n_samples, m = spec.n_neurons;
    std::vector<double> u(n), v(n);
    for (auto& x : u) x = spec.signal_strength * rng.normal();
    for (auto& x : v) x = spec.signal_strength * rng.normal();

    std::vector<double> cos_t(spec.ring_size), sin_t(spec.ring_size);
    for (std::size_t j = 0; j < spec.ring_size; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(spec.ring_size);
        cos_t[j] = std::cos(theta);
        sin_t[j] = std::sin(theta);
    }

    std::vector<double> values(n * m);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < m; ++j) {
            const double z = rng.normal();
            values[r * m + j] = j < spec.ring_size ? cos_t[j] * u[r] + sin_t[j] * v[r] + spec.noise_std * z : z;
        }
    }
    return ActivationMatrix(n, m, std::move(values));
}

inline ActivationMatrix gen_model(const SyntheticSpec& spec, std::size_t model_index) {
    return spec.ring_size == 0 ? gen_benign_model(spec, model_index) : gen_shortcut_model(spec, model_index);
}

inline std::vector<ActivationMatrix> gen_cohort(const SyntheticSpec& spec) {
    validate(spec);
    std::vector<ActivationMatrix> out;
    out.reserve(spec.n_models);
    for (std::size_t i = 0; i < spec.n_models; ++i) out.push_back(gen_model(spec, i));
    return out;
}

}  // namespace nntopo

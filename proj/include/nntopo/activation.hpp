#pragma once

// Activation matrices: N samples (rows) by m neurons (columns). Column j is the
// activation vector of neuron j over the probe inputs.

#include <nntopo/detail/io.hpp>
#include <nntopo/error.hpp>
#include <nntopo/rng.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nntopo {

enum class ActivationFormat { csv, binary };

inline constexpr std::string_view kActmMagic = "ACTM";
inline constexpr std::uint32_t kActmVersion = 1;
inline constexpr std::size_t kDefaultNeuronCap = 1024;

class ActivationMatrix {
public:
    ActivationMatrix(std::size_t n_samples, std::size_t n_neurons, std::vector<double> values,
                     std::vector<std::string> labels = {})
        : n_samples_(n_samples), n_neurons_(n_neurons), values_(std::move(values)), labels_(std::move(labels)) {
        if (n_samples_ < 2) throw data_error("n_samples < 2");
        if (n_neurons_ < 2) throw data_error("n_neurons < 2");
        if (values_.size() != n_samples_ * n_neurons_) {
            throw data_error("dimension mismatch: expected " + std::to_string(n_samples_ * n_neurons_) +
                             " values, got " + std::to_string(values_.size()));
        }
        if (!labels_.empty() && labels_.size() != n_neurons_) {
            throw data_error("dimension mismatch: " + std::to_string(labels_.size()) + " labels for " +
                             std::to_string(n_neurons_) + " neurons");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw data_error("non-finite value at sample " + std::to_string(i / n_neurons_ + 1) + ", neuron " +
                                 std::to_string(i % n_neurons_ + 1));
            }
        }
    }

    std::size_t n_samples() const noexcept { return n_samples_; }
    std::size_t n_neurons() const noexcept { return n_neurons_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    double operator()(std::size_t sample, std::size_t neuron) const noexcept {
        return values_[sample * n_neurons_ + neuron];
    }

    std::vector<double> column(std::size_t neuron) const {
        std::vector<double> col(n_samples_);
        for (std::size_t r = 0; r < n_samples_; ++r) col[r] = (*this)(r, neuron);
        return col;
    }

    friend bool operator==(const ActivationMatrix&, const ActivationMatrix&) = default;

private:
    std::size_t n_samples_;
    std::size_t n_neurons_;
    std::vector<double> values_;
    std::vector<std::string> labels_;
};

namespace detail {

inline ActivationMatrix parse_activation_csv(std::string_view text) {
    const auto rows = lines(text);
    if (rows.empty()) throw data_error("activation CSV: empty input");

    std::vector<std::string> labels;
    std::size_t first_data = 0;
    {
        const auto cells = split(rows.front().second, ',');
        if (!parse_double(cells.front())) {
            for (auto c : cells) labels.emplace_back(trim(c));
            first_data = 1;
        }
    }

    const std::size_t width = labels.empty() ? split(rows.front().second, ',').size() : labels.size();
    std::vector<double> values;
    for (std::size_t r = first_data; r < rows.size(); ++r) {
        const auto [line_no, line] = rows[r];
        const auto cells = split(line, ',');
        if (cells.size() != width) {
            throw data_error("activation CSV: dimension mismatch on line " + std::to_string(line_no) + ": expected " +
                             std::to_string(width) + " columns, got " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = parse_double(cells[c]);
            const auto where = "line " + std::to_string(line_no) + ", column " + std::to_string(c + 1);
            if (!v) throw data_error("activation CSV: malformed number '" + std::string(trim(cells[c])) + "' at " + where);
            if (!std::isfinite(*v)) {
                throw data_error("activation CSV: non-finite value '" + std::string(trim(cells[c])) + "' at " + where);
            }
            values.push_back(*v);
        }
    }
    const std::size_t n_samples = rows.size() - first_data;
    if (n_samples < 2) throw data_error("n_samples < 2");
    return ActivationMatrix(n_samples, width, std::move(values), std::move(labels));
}

inline ActivationMatrix parse_activation_actm(std::string_view bytes) {
    ByteReader in(bytes, "ACTM");
    if (in.take(4) != kActmMagic) throw data_error("ACTM: malformed header (bad magic)");
    if (const auto version = in.u32(); version != kActmVersion) {
        throw data_error("ACTM: unsupported format version " + std::to_string(version));
    }
    const std::uint64_t n_samples = in.u64();
    const std::uint64_t n_neurons = in.u64();
    if (n_samples < 2) throw data_error("n_samples < 2");
    if (n_neurons < 2) throw data_error("n_neurons < 2");
    if (n_neurons > in.remaining() / 8 || n_samples > in.remaining() / 8 / n_neurons ||
        in.remaining() != n_samples * n_neurons * 8) {
        throw data_error("ACTM: dimension mismatch: header declares " + std::to_string(n_samples) + "x" +
                         std::to_string(n_neurons) + " but payload has " + std::to_string(in.remaining()) + " bytes");
    }
    std::vector<double> values(n_samples * n_neurons);
    for (auto& v : values) v = in.f64();
    return ActivationMatrix(n_samples, n_neurons, std::move(values));
}

}  // namespace detail

inline ActivationMatrix parse_activation(std::string_view bytes, ActivationFormat format) {
    return format == ActivationFormat::csv ? detail::parse_activation_csv(bytes) : detail::parse_activation_actm(bytes);
}

inline std::string to_actm(const ActivationMatrix& m) {
    std::string out;
    out.reserve(24 + m.values().size() * 8);
    out.append(kActmMagic);
    detail::put_u32(out, kActmVersion);
    detail::put_u64(out, m.n_samples());
    detail::put_u64(out, m.n_neurons());
    for (double v : m.values()) detail::put_f64(out, v);
    return out;
}

inline std::string to_csv(const ActivationMatrix& m) {
    std::string out;
    if (!m.labels().empty()) {
        for (std::size_t j = 0; j < m.labels().size(); ++j) {
            if (j) out += ',';
            out += m.labels()[j];
        }
        out += '\n';
    }
    for (std::size_t r = 0; r < m.n_samples(); ++r) {
        for (std::size_t j = 0; j < m.n_neurons(); ++j) {
            if (j) out += ',';
            out += detail::format_double(m(r, j));
        }
        out += '\n';
    }
    return out;
}

// Indices chosen by subsample_neurons, ascending. Partial Fisher-Yates over
// [0, n): for i in [0, cap) swap slot i with slot i + bounded(n - i), using
// Xoshiro256(seed); the first cap slots, sorted, are the selection.
inline std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t cap, std::uint64_t seed) {
    if (cap < 2) throw usage_error("neuron cap must be >= 2");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (n <= cap) return idx;
    Xoshiro256 rng(seed);
    for (std::size_t i = 0; i < cap; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.bounded(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    return idx;
}

inline ActivationMatrix subsample_neurons(const ActivationMatrix& m, std::size_t cap, std::uint64_t seed) {
    const auto keep = subsample_indices(m.n_neurons(), cap, seed);
    if (keep.size() == m.n_neurons()) return m;
    std::vector<double> values;
    values.reserve(m.n_samples() * keep.size());
    for (std::size_t r = 0; r < m.n_samples(); ++r) {
        for (auto j : keep) values.push_back(m(r, j));
    }
    std::vector<std::string> labels;
    if (!m.labels().empty()) {
        for (auto j : keep) labels.push_back(m.labels()[j]);
    }
    return ActivationMatrix(m.n_samples(), keep.size(), std::move(values), std::move(labels));
}

}  // namespace nntopo

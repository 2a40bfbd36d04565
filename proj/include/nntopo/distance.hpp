#pragma once

// Correlation distance d(a_i, a_j) = 1 - rho(a_i, a_j) between neuron
// activation vectors, stored as a condensed upper triangle.

#include <nntopo/activation.hpp>
#include <nntopo/detail/io.hpp>
#include <nntopo/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nntopo {

inline constexpr std::string_view kCdmxMagic = "CDMX";
inline constexpr std::uint32_t kCdmxVersion = 1;

// Pairwise dissimilarities for i < j in lexicographic (i, j) order. Values must
// be finite and non-negative; correlation distances additionally lie in [0, 2].
class CondensedDistanceMatrix {
public:
    CondensedDistanceMatrix(std::size_t n_points, std::vector<double> values)
        : n_points_(n_points), values_(std::move(values)) {
        if (n_points_ < 1) throw data_error("distance matrix needs at least one point");
        if (values_.size() != n_points_ * (n_points_ - 1) / 2) {
            throw data_error("distance matrix: expected " + std::to_string(n_points_ * (n_points_ - 1) / 2) +
                             " condensed values, got " + std::to_string(values_.size()));
        }
        for (double v : values_) {
            if (!std::isfinite(v) || v < 0.0) throw data_error("distance matrix: invalid entry " + detail::format_double(v));
        }
    }

    std::size_t n_points() const noexcept { return n_points_; }
    std::span<const double> values() const noexcept { return values_; }

    static constexpr std::size_t index(std::size_t n, std::size_t i, std::size_t j) noexcept {
        // requires i < j
        return n * i - i * (i + 1) / 2 + (j - i - 1);
    }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        return values_[index(n_points_, i, j)];
    }

    friend bool operator==(const CondensedDistanceMatrix&, const CondensedDistanceMatrix&) = default;

private:
    std::size_t n_points_;
    std::vector<double> values_;
};

// Sample Pearson correlation, two-pass (means first). A constant vector is
// uncorrelated with everything: the result is 0.
inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw data_error("pearson_correlation: length mismatch");
    if (a.size() < 2) throw data_error("pearson_correlation: need at least 2 samples");
    const auto n = static_cast<double>(a.size());
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= n;
    mean_b /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    const double r = sab / std::sqrt(saa * sbb);
    return std::clamp(r, -1.0, 1.0);
}

inline CondensedDistanceMatrix distance_matrix(const ActivationMatrix& m) {
    const std::size_t n = m.n_neurons();
    const std::size_t rows = m.n_samples();
    const auto nrows = static_cast<double>(rows);

    // Centre each column once and keep its sum of squares; rho is then a dot product of
    // centred columns, identical to pearson_correlation term by term.
    std::vector<double> centred(n * rows);
    std::vector<double> sumsq(n);
    for (std::size_t j = 0; j < n; ++j) {
        double mean = 0.0;
        for (std::size_t r = 0; r < rows; ++r) mean += m(r, j);
        mean /= nrows;
        double ss = 0.0;
        double* col = centred.data() + j * rows;
        for (std::size_t r = 0; r < rows; ++r) {
            col[r] = m(r, j) - mean;
            ss += col[r] * col[r];
        }
        sumsq[j] = ss;
    }

    std::vector<double> values(n * (n - 1) / 2);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* ci = centred.data() + i * rows;
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            const double* cj = centred.data() + j * rows;
            double rho = 0.0;
            if (sumsq[i] != 0.0 && sumsq[j] != 0.0) {
                double dot = 0.0;
                for (std::size_t r = 0; r < rows; ++r) dot += ci[r] * cj[r];
                rho = std::clamp(dot / std::sqrt(sumsq[i] * sumsq[j]), -1.0, 1.0);
            }
            values[k] = 1.0 - rho;
        }
    }
    return CondensedDistanceMatrix(n, std::move(values));
}

inline std::string to_cdmx(const CondensedDistanceMatrix& d) {
    std::string out;
    out.reserve(16 + d.values().size() * 8);
    out.append(kCdmxMagic);
    detail::put_u32(out, kCdmxVersion);
    detail::put_u64(out, d.n_points());
    for (double v : d.values()) detail::put_f64(out, v);
    return out;
}

inline CondensedDistanceMatrix parse_cdmx(std::string_view bytes) {
    detail::ByteReader in(bytes, "CDMX");
    if (in.take(4) != kCdmxMagic) throw data_error("CDMX: malformed header (bad magic)");
    if (const auto version = in.u32(); version != kCdmxVersion) {
        throw data_error("CDMX: unsupported format version " + std::to_string(version));
    }
    const std::uint64_t n = in.u64();
    if (n < 1 || n > (std::uint64_t{1} << 32)) throw data_error("CDMX: implausible point count " + std::to_string(n));
    const std::uint64_t count = n * (n - 1) / 2;
    if (in.remaining() != count * 8) {
        throw data_error("CDMX: dimension mismatch: " + std::to_string(n) + " points need " + std::to_string(count * 8) +
                         " payload bytes, got " + std::to_string(in.remaining()));
    }
    std::vector<double> values(count);
    for (auto& v : values) v = in.f64();
    return CondensedDistanceMatrix(n, std::move(values));
}

// Square symmetric CSV, for inspection.
inline std::string to_square_csv(const CondensedDistanceMatrix& d) {
    std::string out;
    for (std::size_t i = 0; i < d.n_points(); ++i) {
        for (std::size_t j = 0; j < d.n_points(); ++j) {
            if (j) out += ',';
            out += detail::format_double(d(i, j));
        }
        out += '\n';
    }
    return out;
}

inline CondensedDistanceMatrix parse_square_csv(std::string_view text) {
    const auto rows = detail::lines(text);
    const std::size_t n = rows.size();
    if (n == 0) throw data_error("distance CSV: empty input");
    std::vector<double> full(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto cells = detail::split(rows[i].second, ',');
        if (cells.size() != n) {
            throw data_error("distance CSV: line " + std::to_string(rows[i].first) + " has " +
                             std::to_string(cells.size()) + " columns, expected " + std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            const auto v = detail::parse_double(cells[j]);
            if (!v || !std::isfinite(*v)) {
                throw data_error("distance CSV: bad value at line " + std::to_string(rows[i].first) + ", column " +
                                 std::to_string(j + 1));
            }
            full[i * n + j] = *v;
        }
    }
    std::vector<double> values;
    values.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        if (full[i * n + i] != 0.0) throw data_error("distance CSV: non-zero diagonal at row " + std::to_string(i + 1));
        for (std::size_t j = i + 1; j < n; ++j) {
            if (full[i * n + j] != full[j * n + i]) {
                throw data_error("distance CSV: asymmetric entry (" + std::to_string(i + 1) + ", " +
                                 std::to_string(j + 1) + ")");
            }
            values.push_back(full[i * n + j]);
        }
    }
    return CondensedDistanceMatrix(n, std::move(values));
}

}  // namespace nntopo

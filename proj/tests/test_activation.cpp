#include <nntopo/activation.hpp>
#include <nntopo/rng.hpp>

#include <gtest/gtest.h>

#include <cstring>
#include <numeric>
#include <string>

using namespace nntopo;

namespace {

std::string actm_header(std::uint64_t n_samples, std::uint64_t n_neurons) {
    std::string out = "ACTM";
    detail::put_u32(out, 1);
    detail::put_u64(out, n_samples);
    detail::put_u64(out, n_neurons);
    return out;
}

ActivationMatrix random_activations(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    std::vector<double> v(rows * cols);
    for (auto& x : v) x = rng.normal() * 1e3;
    return ActivationMatrix(rows, cols, std::move(v));
}

template <class F>
std::string error_message(F&& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(ParseActivation, CsvWithLabels) {
    const auto m = parse_activation("n1,n2\n1.0,2.0\n3.0,4.0", ActivationFormat::csv);
    EXPECT_EQ(m.n_samples(), 2u);
    EXPECT_EQ(m.n_neurons(), 2u);
    EXPECT_EQ(std::vector<double>(m.values().begin(), m.values().end()), (std::vector<double>{1, 2, 3, 4}));
    EXPECT_EQ(m.labels(), (std::vector<std::string>{"n1", "n2"}));
    EXPECT_EQ(m.column(1), (std::vector<double>{2, 4}));
}

TEST(ParseActivation, CsvWithoutLabelsAndCrlf) {
    const auto m = parse_activation("1,2,3\r\n4,5,6\r\n\r\n", ActivationFormat::csv);
    EXPECT_EQ(m.n_samples(), 2u);
    EXPECT_EQ(m.n_neurons(), 3u);
    EXPECT_TRUE(m.labels().empty());
    EXPECT_EQ(m(1, 2), 6.0);
}

TEST(ParseActivation, CsvNaNNamesTheCell) {
    const auto msg = error_message([] { parse_activation("a,b\n1,2\n3,NaN\n", ActivationFormat::csv); });
    EXPECT_NE(msg.find("non-finite"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 3, column 2"), std::string::npos) << msg;
}

TEST(ParseActivation, CsvErrors) {
    EXPECT_THROW(parse_activation("a,b\n1,2\n3\n", ActivationFormat::csv), data_error);
    EXPECT_THROW(parse_activation("a,b\n1,2\n3,x\n", ActivationFormat::csv), data_error);
    EXPECT_THROW(parse_activation("a,b\n1,2\n", ActivationFormat::csv), data_error);
    EXPECT_THROW(parse_activation("1\n2\n", ActivationFormat::csv), data_error);
    EXPECT_THROW(parse_activation("", ActivationFormat::csv), data_error);
}

TEST(ParseActivation, BinaryZeroSamples) {
    const auto msg = error_message([] { parse_activation(actm_header(0, 3), ActivationFormat::binary); });
    EXPECT_NE(msg.find("n_samples < 2"), std::string::npos) << msg;
}

TEST(ParseActivation, BinaryErrors) {
    auto bad_magic = actm_header(2, 2);
    bad_magic[0] = 'X';
    bad_magic.append(32, '\0');
    EXPECT_THROW(parse_activation(bad_magic, ActivationFormat::binary), data_error);

    auto truncated = actm_header(2, 2);
    truncated.append(24, '\0');
    EXPECT_THROW(parse_activation(truncated, ActivationFormat::binary), data_error);

    auto huge = actm_header(1ULL << 40, 1ULL << 40);
    EXPECT_THROW(parse_activation(huge, ActivationFormat::binary), data_error);

    auto nonfinite = actm_header(2, 2);
    for (double v : {1.0, std::numeric_limits<double>::infinity(), 3.0, 4.0}) detail::put_f64(nonfinite, v);
    const auto msg = error_message([&] { parse_activation(nonfinite, ActivationFormat::binary); });
    EXPECT_NE(msg.find("sample 1, neuron 2"), std::string::npos) << msg;

    EXPECT_THROW(parse_activation("ACT", ActivationFormat::binary), data_error);
}

TEST(ParseActivation, BinaryLayoutIsLittleEndian) {
    const ActivationMatrix m(2, 2, {1.0, 2.0, 3.0, 4.0});
    const auto bytes = to_actm(m);
    ASSERT_EQ(bytes.size(), 4u + 4 + 8 + 8 + 4 * 8);
    EXPECT_EQ(bytes.substr(0, 4), "ACTM");
    EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1u);
    EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2u);
    EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 2u);
    // 1.0 = 0x3FF0000000000000, little-endian
    EXPECT_EQ(static_cast<unsigned char>(bytes[24 + 7]), 0x3Fu);
    EXPECT_EQ(static_cast<unsigned char>(bytes[24 + 6]), 0xF0u);
}

TEST(ParseActivation, RoundTripBothFormats) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto m = random_activations(2 + seed % 7, 2 + seed % 5, seed);
        EXPECT_EQ(parse_activation(to_actm(m), ActivationFormat::binary), m);
        const auto again = parse_activation(to_csv(m), ActivationFormat::csv);
        EXPECT_EQ(again.n_samples(), m.n_samples());
        EXPECT_EQ(again.n_neurons(), m.n_neurons());
        EXPECT_TRUE(std::equal(again.values().begin(), again.values().end(), m.values().begin()));
    }
}

TEST(SubsampleNeurons, UnderCapIsIdentity) {
    const ActivationMatrix m(2, 3, {1, 2, 3, 4, 5, 6}, {"a", "b", "c"});
    EXPECT_EQ(subsample_neurons(m, 5, 0), m);
    EXPECT_EQ(subsample_neurons(m, 3, 0), m);
}

TEST(SubsampleNeurons, RejectsTinyCap) {
    const ActivationMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
    EXPECT_THROW(subsample_neurons(m, 1, 0), usage_error);
}

TEST(SubsampleNeurons, DeterministicAndMatchesReferenceSelection) {
    const auto m = random_activations(3, 1000, 11);
    const auto a = subsample_neurons(m, 512, 7);
    const auto b = subsample_neurons(m, 512, 7);
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.n_neurons(), 512u);

    // From tests/oracles/prng_oracle.py: subsample(1000, 512, 7).
    const auto idx = subsample_indices(1000, 512, 7);
    EXPECT_EQ(std::vector<std::size_t>(idx.begin(), idx.begin() + 8), (std::vector<std::size_t>{1, 2, 4, 6, 8, 9, 10, 11}));
    EXPECT_EQ(std::vector<std::size_t>(idx.end() - 4, idx.end()), (std::vector<std::size_t>{994, 995, 997, 998}));
    EXPECT_EQ(std::accumulate(idx.begin(), idx.end(), std::size_t{0}), 254966u);
}

TEST(SubsampleNeurons, ColumnsAreBitwiseSubsetInOrder) {
    std::vector<std::string> labels;
    for (int j = 0; j < 40; ++j) labels.push_back("layer:" + std::to_string(j));
    const auto base = random_activations(6, 40, 5);
    const ActivationMatrix m(6, 40, std::vector<double>(base.values().begin(), base.values().end()), labels);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto idx = subsample_indices(40, 9, seed);
        ASSERT_TRUE(std::is_sorted(idx.begin(), idx.end()));
        ASSERT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
        const auto s = subsample_neurons(m, 9, seed);
        for (std::size_t c = 0; c < idx.size(); ++c) {
            EXPECT_EQ(s.labels()[c], labels[idx[c]]);
            for (std::size_t r = 0; r < 6; ++r) {
                const double x = s(r, c), y = m(r, idx[c]);
                EXPECT_EQ(std::memcmp(&x, &y, sizeof(double)), 0);
            }
        }
    }
}

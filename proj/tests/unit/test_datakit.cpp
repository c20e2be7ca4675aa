// Copyright 2026 The vqtn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "vqtn/datakit.hpp"

using namespace vqtn;
using namespace vqtn::datakit;

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

std::filesystem::path scratch(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / "vqtn_datakit_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

// Small base dataset with uniform inputs in [-pi, pi].
Dataset uniform_base(std::size_t m, std::size_t d, std::size_t n_train, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    Dataset b;
    b.inputs.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < b.inputs.rows(); i++)
        for (Eigen::Index j = 0; j < b.inputs.cols(); j++) b.inputs(i, j) = u(rng);
    b.targets = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    std::tie(b.train, b.test) = random_split(m, n_train, rng);
    return b;
}

// Dense state-vector oracle, qubit 0 is the most significant bit.
struct Dense {
    std::size_t n;
    Eigen::VectorXcd psi;
    explicit Dense(std::size_t n_) : n(n_), psi(Eigen::VectorXcd::Zero(1 << n_)) {
        psi(0) = 1.0;
    }
    void one(const Eigen::Matrix2cd &g, std::size_t q) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
        for (std::size_t k = 0; k < n; k++) {
            Eigen::MatrixXcd f = k == q ? Eigen::MatrixXcd(g) : Eigen::MatrixXcd::Identity(2, 2);
            Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
            for (Eigen::Index a = 0; a < m.rows(); a++)
                for (Eigen::Index b = 0; b < m.cols(); b++) next.block(2 * a, 2 * b, 2, 2) = m(a, b) * f;
            m = next;
        }
        psi = m * psi;
    }
    void cx(std::size_t c, std::size_t t) {
        Eigen::VectorXcd out = psi;
        for (Eigen::Index i = 0; i < psi.size(); i++) {
            const bool cb = (i >> (n - 1 - c)) & 1;
            out(cb ? (i ^ (Eigen::Index{1} << (n - 1 - t))) : i) = psi(i);
        }
        psi = out;
    }
    double z0() const {
        double s = 0.0;
        for (Eigen::Index i = 0; i < psi.size(); i++) s += ((i >> (n - 1)) & 1 ? -1.0 : 1.0) * std::norm(psi(i));
        return s;
    }
};

double oracle_relabel(const std::vector<double> &x, std::size_t layers, const std::vector<double> &th) {
    const std::size_t n = x.size();
    const cd i1(0.0, 1.0);
    Eigen::Matrix2cd h;
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    auto rz = [&](double a) {
        Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
        z(0, 0) = std::exp(-i1 * a / 2.0);
        z(1, 1) = std::exp(i1 * a / 2.0);
        return z;
    };
    Dense s(n);
    for (int r = 0; r < 2; r++) {
        for (std::size_t q = 0; q < n; q++) s.one(h, q);
        for (std::size_t q = 0; q < n; q++) s.one(rz(x[q]), q);
        for (std::size_t q = 0; q + 1 < n; q++) {
            s.cx(q, q + 1);
            s.one(rz(x[q] * x[q + 1]), q + 1);
            s.cx(q, q + 1);
        }
    }
    for (std::size_t l = 0; l < layers; l++) {
        for (std::size_t q = 0; q < n; q++) {
            const double *t = &th[3 * (l * n + q)];
            Eigen::Matrix2cd u;
            u << std::cos(t[0] / 2), -std::exp(i1 * t[2]) * std::sin(t[0] / 2), std::exp(i1 * t[1]) * std::sin(t[0] / 2),
                std::exp(i1 * (t[1] + t[2])) * std::cos(t[0] / 2);
            s.one(u, q);
        }
        for (std::size_t q = 0; q + 1 < n; q++) s.cx(q, q + 1);
    }
    return s.z0();
}

}  // namespace

TEST(Step, ValuesAndSplit) {
    EXPECT_DOUBLE_EQ(step_function(0.5), 0.5);
    EXPECT_DOUBLE_EQ(step_function(0.0), -0.5);
    EXPECT_DOUBLE_EQ(step_function(-1.0), -0.5);
    const Dataset d = step_dataset(500, 400, 3);
    ASSERT_EQ(d.size(), 500u);
    EXPECT_DOUBLE_EQ(d.inputs(0, 0), -kPi);
    EXPECT_DOUBLE_EQ(d.inputs(499, 0), kPi);
    EXPECT_EQ(d.train.size(), 400u);
    EXPECT_EQ(d.test.size(), 100u);
    std::set<std::size_t> all(d.train.begin(), d.train.end());
    all.insert(d.test.begin(), d.test.end());
    EXPECT_EQ(all.size(), 500u);
    for (Eigen::Index i = 0; i < 500; i++) EXPECT_EQ(d.targets(i), step_function(d.inputs(i, 0)));
}

TEST(Step, SeedChangesSplitOnly) {
    const Dataset a = step_dataset(500, 400, 1), b = step_dataset(500, 400, 2);
    EXPECT_EQ(a.inputs, b.inputs);
    EXPECT_NE(a.train, b.train);
}

TEST(Dataset, ValidateCatchesOverlapAndRange) {
    Dataset d = step_dataset(10, 5, 0);
    d.test.push_back(d.train.front());
    EXPECT_THROW(d.validate(), DataError);
    d = step_dataset(10, 5, 0);
    d.train.push_back(10);
    EXPECT_THROW(d.validate(), DataError);
    EXPECT_THROW(step_dataset(10, 11, 0), ConfigError);
}

TEST(Idx, RoundTripKnownImages) {
    IdxArray a{{4, 2, 2}, {0, 1, 2, 3, 10, 20, 30, 40, 255, 254, 253, 252, 7, 7, 7, 7}};
    std::stringstream ss;
    write_idx(ss, a);
    const std::string bytes = ss.str();
    ASSERT_EQ(bytes.size(), 4u + 12u + 16u);
    EXPECT_EQ(static_cast<unsigned char>(bytes[2]), 0x08);
    EXPECT_EQ(static_cast<unsigned char>(bytes[3]), 0x03);
    const IdxArray b = read_idx(ss);
    EXPECT_EQ(b.dims, a.dims);
    EXPECT_EQ(b.data, a.data);
    EXPECT_EQ(b.items(), 4u);
    EXPECT_EQ(b.item_size(), 4u);
}

TEST(Idx, LabelsRoundTripThroughFile) {
    IdxArray l{{5}, {0, 9, 3, 3, 1}};
    const auto p = scratch("labels.idx");
    write_idx(p, l);
    const IdxArray r = read_idx(p);
    EXPECT_EQ(r.magic(), kIdxLabelsMagic);
    EXPECT_EQ(r.data, l.data);
}

TEST(Idx, BadMagicTruncationOverflow) {
    {
        std::stringstream ss(std::string(8, '\0'));
        EXPECT_THROW(read_idx(ss), DataError);
    }
    {
        IdxArray a{{2, 2, 2}, std::vector<std::uint8_t>(8, 1)};
        std::stringstream ss;
        write_idx(ss, a);
        std::string s = ss.str();
        s.pop_back();
        std::stringstream cut(s);
        EXPECT_THROW(read_idx(cut), DataError);
    }
    {
        std::stringstream ss;
        const unsigned char h[] = {0, 0, 8, 3, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0, 0, 0, 2};
        ss.write(reinterpret_cast<const char *>(h), sizeof h);
        EXPECT_THROW(read_idx(ss), DataError);
    }
    EXPECT_THROW(read_idx(scratch("missing.idx")), DataError);
}

TEST(Checksums, VerifyMatchesAndMismatches) {
    const auto p = scratch("abc.bin");
    {
        std::ofstream f(p, std::ios::binary);
        f << "abc";
    }
    const std::string abc = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";
    EXPECT_EQ(sha256_file(p), abc);
    EXPECT_NO_THROW(verify_checksums({{p, abc}}));
    EXPECT_THROW(verify_checksums({{p, std::string(64, '0')}}), DataError);
    EXPECT_THROW(verify_checksums({{scratch("nope.bin"), abc}}), DataError);
}

TEST(Pca, LineCapturesAllVariance) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd dir(5);
    dir << 1, -2, 0.5, 3, 1;
    dir.normalize();
    Eigen::MatrixXd x(200, 5);
    for (Eigen::Index i = 0; i < 200; i++) x.row(i) = (g(rng) * dir).transpose() + 1e-4 * Eigen::RowVectorXd::NullaryExpr(5, [&] { return g(rng); });
    const PcaModel m = fit_pca(x, 1);
    EXPECT_GE(m.explained_variance[0] / m.total_variance, 0.99999);
    EXPECT_NEAR(std::abs(m.components.col(0).dot(dir)), 1.0, 1e-6);
}

TEST(Pca, OrthonormalAndReconstructionBound) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(120, 10, [&] { return g(rng); });
    x.col(3) *= 5.0;
    for (std::size_t n : {1u, 4u, 10u}) {
        const PcaModel m = fit_pca(x, n);
        const Eigen::MatrixXd gram = m.components.transpose() * m.components;
        EXPECT_LT((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-10);
        for (std::size_t k = 1; k < n; k++) EXPECT_GE(m.explained_variance[k - 1], m.explained_variance[k]);
        // Mean squared reconstruction error equals the discarded variance.
        const double discarded = m.total_variance - std::accumulate(m.explained_variance.begin(), m.explained_variance.end(), 0.0);
        const double err = (x - m.inverse_transform(m.transform(x))).squaredNorm() / static_cast<double>(x.rows() - 1);
        EXPECT_NEAR(err, discarded, 1e-9 * m.total_variance);
    }
    EXPECT_THROW(fit_pca(x, 11), ConfigError);
}

TEST(Fmnist, PreprocessShapesAndTrainOnlyFit) {
    const auto [img, lab] = synthetic_fashion_idx(300, 1);
    ASSERT_EQ(img.dims, (std::vector<std::uint32_t>{300, 28, 28}));
    const FmnistInputs f = preprocess_fmnist(img, 4, 120, 100, 9);
    EXPECT_EQ(f.data.size(), 120u);
    EXPECT_EQ(f.data.dim(), 4u);
    EXPECT_EQ(f.data.train.size(), 100u);
    EXPECT_EQ(f.data.test.size(), 20u);
    // PCA centred on the training images, so their projections have zero mean.
    const Eigen::RowVectorXd mean = f.data.train_inputs().colwise().mean();
    EXPECT_LT(mean.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(f.pca.mean.maxCoeff(), 1.0);
    EXPECT_GE(f.pca.mean.minCoeff(), 0.0);
}

TEST(MpsRelabel, ConstantTargetGivesOnes) {
    const Dataset base = uniform_base(40, 4, 30, 2);
    learn::CmpsParams t;
    t.slices.resize(4);
    for (auto &site : t.slices) {
        for (auto &s : site) s = Eigen::MatrixXd::Zero(1, 1);
        site[0](0, 0) = 1.0;
    }
    const Dataset d = relabel_with_mps(base, t);
    EXPECT_LT((d.targets.array() - 1.0).abs().maxCoeff(), 1e-14);
    EXPECT_DOUBLE_EQ(d.normalization(), 1.0);
}

TEST(MpsRelabel, MatchesDenseContraction) {
    const Dataset base = uniform_base(30, 3, 20, 5);
    const learn::CmpsParams t = random_target_mps(3, 3, 11);
    const Dataset d = relabel_with_mps(base, t);
    EXPECT_NEAR(d.targets.cwiseAbs().maxCoeff(), 1.0, 1e-14);
    // Dense 27-entry weight vector contracted with the product feature vector.
    std::vector<double> w(27);
    for (int a = 0; a < 3; a++)
        for (int b = 0; b < 3; b++)
            for (int c = 0; c < 3; c++) w[9 * a + 3 * b + c] = (t.slices[0][a] * t.slices[1][b] * t.slices[2][c])(0, 0);
    Eigen::VectorXd raw(30);
    for (Eigen::Index i = 0; i < 30; i++) {
        double s = 0.0;
        for (int a = 0; a < 3; a++)
            for (int b = 0; b < 3; b++)
                for (int c = 0; c < 3; c++) {
                    auto f = [&](int p, double x) { return p == 0 ? 1.0 : (p == 1 ? std::cos(x) : std::sin(x)); };
                    s += w[9 * a + 3 * b + c] * f(a, base.inputs(i, 0)) * f(b, base.inputs(i, 1)) * f(c, base.inputs(i, 2));
                }
        raw(i) = s;
    }
    const double k = raw.cwiseAbs().maxCoeff();
    EXPECT_NEAR(d.normalization(), k, 1e-12);
    EXPECT_LT((d.targets - raw / k).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MpsRelabel, DimensionMismatchThrows) {
    const Dataset base = uniform_base(10, 3, 5, 1);
    EXPECT_THROW(relabel_with_mps(base, random_target_mps(4, 2, 0)), ConfigError);
}

TEST(CircuitRelabel, ZeroAnglesAndInputsGiveOne) {
    const std::vector<double> x(3, 0.0), th(90, 0.0);
    EXPECT_NEAR(relabel_circuit_value(x, 10, th), 1.0, 1e-12);
}

TEST(CircuitRelabel, MatchesDenseOracle) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (std::size_t n : {2u, 3u, 4u}) {
        const std::size_t layers = default_relabel_layers(std::max<std::size_t>(n, 3));
        const auto th = relabel_angles(n, layers, 100 + n);
        for (int trial = 0; trial < 4; trial++) {
            std::vector<double> x(n);
            for (auto &v : x) v = u(rng);
            EXPECT_NEAR(relabel_circuit_value(x, layers, th), oracle_relabel(x, layers, th), 1e-10);
        }
    }
}

TEST(CircuitRelabel, NormalizedTrainStdIsOne) {
    const Dataset base = uniform_base(60, 3, 50, 3);
    EXPECT_EQ(relabel_angles(3, default_relabel_layers(3), 0).size(), 90u);
    const Dataset d = relabel_with_circuit(base, default_relabel_layers(3), 4);
    const Eigen::VectorXd y = d.train_targets();
    EXPECT_NEAR(std::sqrt((y.array() - y.mean()).square().mean()), 1.0, 1e-12);
    EXPECT_EQ(d.provenance["normalization_kind"], "train_std");
}

TEST(CircuitRelabel, RefusesLargeInputs) {
    const Dataset base = uniform_base(4, 13, 3, 0);
    EXPECT_THROW(relabel_with_circuit(base, 1, 0), ResourceLimitError);
    EXPECT_THROW(default_relabel_layers(10), ConfigError);
}

TEST(Provenance, RegenerateIsBitIdentical) {
    const nlohmann::json src = {{"source", "synthetic"}, {"synthetic_count", 200}, {"synthetic_seed", 5}};
    const FmnistInputs f = fmnist_inputs(src, 3, 80, 60, 2);
    const Dataset circ = relabel_with_circuit(f.data, default_relabel_layers(3), 8);
    const Dataset again = regenerate(circ.provenance);
    EXPECT_EQ(again.inputs, circ.inputs);
    EXPECT_EQ(again.targets, circ.targets);
    EXPECT_EQ(again.train, circ.train);

    const Dataset mps = relabel_with_mps(f.data, random_target_mps(3, 3, 6));
    const Dataset mps2 = regenerate(nlohmann::json::parse(mps.provenance.dump()));
    EXPECT_EQ(mps2.targets, mps.targets);

    const Dataset step = step_dataset(50, 40, 7);
    EXPECT_EQ(regenerate(step.provenance).train, step.train);
}

TEST(Provenance, CsvAndSidecarRoundTrip) {
    const Dataset d = step_dataset(30, 20, 1);
    const auto stem = scratch("step");
    save_dataset(stem, d);
    const Dataset r = load_dataset(stem);
    EXPECT_EQ(r.inputs, d.inputs);
    EXPECT_EQ(r.targets, d.targets);
    EXPECT_EQ(r.train, d.train);
    EXPECT_EQ(r.test, d.test);
    EXPECT_EQ(r.provenance["generator"], "step");
    EXPECT_EQ(r.provenance["n_test"], 10);
    std::ostringstream a, b;
    write_csv(a, d);
    write_csv(b, step_dataset(30, 20, 1));
    EXPECT_EQ(a.str(), b.str());
}

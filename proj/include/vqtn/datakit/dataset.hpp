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

#ifndef VQTN_DATAKIT_DATASET_HPP
#define VQTN_DATAKIT_DATASET_HPP

#include <Eigen/Core>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "vqtn/errors.hpp"

namespace vqtn::datakit {

/// Regression data with a train/test split. `targets` are normalized; raw targets are
/// `targets * provenance["normalization"]`.
struct Dataset {
    Eigen::MatrixXd inputs;  // M x d
    Eigen::VectorXd targets;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    nlohmann::json provenance = nlohmann::json::object();

    std::size_t size() const {
        return static_cast<std::size_t>(inputs.rows());
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(inputs.cols());
    }
    double normalization() const {
        return provenance.value("normalization", 1.0);
    }

    void validate() const {
        if (targets.size() != inputs.rows()) throw DataError("dataset: input and target counts differ");
        if (!targets.allFinite()) throw DataError("dataset: non-finite target");
        std::vector<char> seen(size(), 0);
        for (const auto *part : {&train, &test})
            for (std::size_t i : *part) {
                if (i >= size()) throw DataError("dataset: split index out of range");
                if (seen[i]++) throw DataError("dataset: index " + std::to_string(i) + " appears twice in the split");
            }
    }

    Eigen::MatrixXd rows(const std::vector<std::size_t> &idx) const {
        Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), inputs.cols());
        for (std::size_t i = 0; i < idx.size(); i++) out.row(static_cast<Eigen::Index>(i)) = inputs.row(static_cast<Eigen::Index>(idx[i]));
        return out;
    }
    Eigen::VectorXd values(const std::vector<std::size_t> &idx) const {
        Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); i++) out(static_cast<Eigen::Index>(i)) = targets(static_cast<Eigen::Index>(idx[i]));
        return out;
    }
    Eigen::MatrixXd train_inputs() const {
        return rows(train);
    }
    Eigen::VectorXd train_targets() const {
        return values(train);
    }
    Eigen::MatrixXd test_inputs() const {
        return rows(test);
    }
    Eigen::VectorXd test_targets() const {
        return values(test);
    }
};

/// Seeded permutation of 0..m-1 cut into the first n_train indices and the rest.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> random_split(std::size_t m, std::size_t n_train,
                                                                                  std::mt19937_64 &rng) {
    if (n_train > m) throw ConfigError("random_split: more training points than data");
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates with an explicit uniform draw so the permutation does not depend on the
    // standard library's shuffle implementation.
    for (std::size_t i = m; i > 1; i--) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(perm[i - 1], perm[pick(rng)]);
    }
    std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

/// CSV with columns index, split, x0..x{d-1}, y, written with round-trip precision.
inline void write_csv(std::ostream &out, const Dataset &d) {
    std::vector<std::string> split(d.size(), "unused");
    for (std::size_t i : d.train) split[i] = "train";
    for (std::size_t i : d.test) split[i] = "test";
    out << "index,split";
    for (std::size_t j = 0; j < d.dim(); j++) out << ",x" << j;
    out << ",y\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < d.size(); i++) {
        out << i << ',' << split[i];
        for (std::size_t j = 0; j < d.dim(); j++) out << ',' << d.inputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        out << ',' << d.targets(static_cast<Eigen::Index>(i)) << '\n';
    }
}

/// Writes `<stem>.csv` and the provenance sidecar `<stem>.json`.
inline void save_dataset(const std::filesystem::path &stem, const Dataset &d) {
    d.validate();
    std::filesystem::path csv = stem, meta = stem;
    csv += ".csv";
    meta += ".json";
    std::ofstream c(csv), m(meta);
    if (!c || !m) throw DataError("save_dataset: cannot write " + stem.string());
    write_csv(c, d);
    nlohmann::json j = d.provenance;
    j["rows"] = d.size();
    j["dim"] = d.dim();
    j["n_train"] = d.train.size();
    j["n_test"] = d.test.size();
    m << j.dump(2) << '\n';
}

inline Dataset read_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("read_csv: empty input");
    const auto cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
    if (cols < 2) throw DataError("read_csv: header needs index, split and y columns");
    const std::size_t d = cols - 2;
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    Dataset out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != d + 3) throw DataError("read_csv: ragged row " + std::to_string(xs.size()));
        std::vector<double> x(d);
        try {
            for (std::size_t j = 0; j < d; j++) x[j] = std::stod(cells[2 + j]);
            ys.push_back(std::stod(cells.back()));
        } catch (const std::exception &) {
            throw DataError("read_csv: bad number in row " + std::to_string(xs.size()));
        }
        if (cells[1] == "train") out.train.push_back(xs.size());
        if (cells[1] == "test") out.test.push_back(xs.size());
        xs.push_back(std::move(x));
    }
    out.inputs.resize(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(d));
    out.targets.resize(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); i++) {
        for (std::size_t j = 0; j < d; j++) out.inputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = xs[i][j];
        out.targets(static_cast<Eigen::Index>(i)) = ys[i];
    }
    return out;
}

inline Dataset load_dataset(const std::filesystem::path &stem) {
    std::filesystem::path csv = stem, meta = stem;
    csv += ".csv";
    meta += ".json";
    std::ifstream c(csv);
    if (!c) throw DataError("load_dataset: cannot open " + csv.string());
    Dataset d = read_csv(c);
    std::ifstream m(meta);
    if (m) {
        try {
            d.provenance = nlohmann::json::parse(m);
        } catch (const nlohmann::json::exception &e) {
            throw DataError(std::string("load_dataset: bad provenance sidecar: ") + e.what());
        }
    }
    d.validate();
    return d;
}

}  // namespace vqtn::datakit

#endif

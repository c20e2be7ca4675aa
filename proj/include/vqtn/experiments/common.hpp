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

#ifndef VQTN_EXPERIMENTS_COMMON_HPP
#define VQTN_EXPERIMENTS_COMMON_HPP

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "vqtn/analysis/stats.hpp"
#include "vqtn/circuits/encoding.hpp"
#include "vqtn/errors.hpp"
#include "vqtn/version.hpp"

namespace vqtn::experiments {

/// One subcommand's settings. `params` holds the subcommand-specific block; the per-seed parameter
/// set s uses seed `seed + s`.
struct ExperimentConfig {
    std::string command;
    std::uint64_t seed = 0;
    std::size_t seeds = 1;
    std::size_t jobs = 1;
    std::string out = "out";
    nlohmann::json params = nlohmann::json::object();

    nlohmann::json to_json() const {
        return {{"command", command}, {"seed", seed}, {"seeds", seeds}, {"jobs", jobs}, {"out", out}, {"params", params}};
    }

    static ExperimentConfig from_json(const nlohmann::json &j) {
        static const std::set<std::string> known{"command", "seed", "seeds", "jobs", "out", "params"};
        if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
        for (const auto &[k, v] : j.items())
            if (!known.count(k)) throw ConfigError("experiment config: unknown key '" + k + "'");
        ExperimentConfig c;
        try {
            c.command = j.value("command", std::string{});
            c.seed = j.value("seed", std::uint64_t{0});
            c.seeds = j.value("seeds", std::size_t{1});
            c.jobs = j.value("jobs", std::size_t{1});
            c.out = j.value("out", std::string("out"));
            c.params = j.value("params", nlohmann::json::object());
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError(std::string("experiment config: ") + e.what());
        }
        if (!c.params.is_object()) throw ConfigError("experiment config: params must be an object");
        if (c.seeds == 0) throw ConfigError("experiment config: seeds must be positive");
        return c;
    }

    static ExperimentConfig load(const std::filesystem::path &path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config " + path.string());
        try {
            return from_json(nlohmann::json::parse(f));
        } catch (const nlohmann::json::parse_error &e) {
            throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
        }
    }

    /// Typed read of params[key] with a default; a present value of the wrong type is a ConfigError.
    template <typename T>
    T get(const std::string &key, const T &fallback) const {
        return get_from(params, key, fallback);
    }

    template <typename T>
    static T get_from(const nlohmann::json &block, const std::string &key, const T &fallback) {
        if (!block.contains(key)) return fallback;
        try {
            return block.at(key).get<T>();
        } catch (const nlohmann::json::exception &) {
            throw ConfigError("config value '" + key + "' has the wrong type: " + block.at(key).dump());
        }
    }
};

/// Command-line overrides applied on top of a config file.
struct Overrides {
    std::optional<std::vector<std::size_t>> n;
    std::optional<std::vector<std::size_t>> layers;
    std::optional<double> gamma;
    std::optional<std::size_t> seeds;
    std::optional<std::size_t> jobs;
    std::optional<std::string> out;
};

inline void apply_overrides(ExperimentConfig &c, const Overrides &o) {
    if (o.n) c.params["N"] = *o.n;
    if (o.layers) c.params["L"] = *o.layers;
    if (o.gamma) c.params["gamma"] = std::vector<double>{*o.gamma};
    if (o.seeds) c.seeds = *o.seeds;
    if (o.jobs) c.jobs = *o.jobs;
    if (o.out) c.out = *o.out;
    if (c.seeds == 0) throw ConfigError("--seeds must be positive");
}

/// Runs fn(0..count-1) on up to `jobs` threads and returns results in index order. The first
/// failure by index is rethrown after every task has finished.
template <typename F>
auto run_indexed(std::size_t count, std::size_t jobs, F fn) -> std::vector<decltype(fn(std::size_t{0}))> {
    using R = decltype(fn(std::size_t{0}));
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t nt = std::max<std::size_t>(1, std::min(jobs, count));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < nt; t++) pool.emplace_back(worker);
    }
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(count);
    for (auto &s : slots) out.push_back(std::move(*s));
    return out;
}

/// Tidy table: one observation per row. Cells are JSON scalars so numbers keep full precision.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;

    void add(std::vector<nlohmann::json> row) {
        if (row.size() != columns.size()) throw std::logic_error("table row width differs from header");
        rows.push_back(std::move(row));
    }
    void append(const Table &other) {
        for (const auto &r : other.rows) add(r);
    }
    std::size_t column(const std::string &name) const {
        for (std::size_t i = 0; i < columns.size(); i++)
            if (columns[i] == name) return i;
        throw std::out_of_range("no column " + name);
    }
    std::vector<double> numbers(const std::string &name) const {
        const std::size_t c = column(name);
        std::vector<double> v;
        for (const auto &r : rows) v.push_back(r[c].get<double>());
        return v;
    }

    void write_csv(std::ostream &out) const {
        for (std::size_t i = 0; i < columns.size(); i++) out << (i ? "," : "") << columns[i];
        out << '\n';
        for (const auto &r : rows) {
            for (std::size_t i = 0; i < r.size(); i++) {
                if (i) out << ',';
                if (r[i].is_string())
                    out << r[i].get<std::string>();
                else if (r[i].is_number_float() && !std::isfinite(r[i].get<double>()))
                    out << "nan";
                else
                    out << r[i].dump();
            }
            out << '\n';
        }
    }
};

inline nlohmann::json summary_json(std::span<const double> v) {
    const auto s = analysis::summarize(v);
    return {{"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev}, {"ci95", s.ci95}};
}

struct ExperimentResult {
    std::map<std::string, Table> tables;
    nlohmann::json summary = nlohmann::json::object();
    nlohmann::json manifest = nlohmann::json::object();  // extra manifest fields (per-run seeds, final losses)
};

/// Writes <name>.csv for each table, summary.json and manifest.json. The manifest holds the full
/// config, so rerunning with it reproduces every file.
inline void write_result(const std::filesystem::path &dir, const ExperimentConfig &cfg, const ExperimentResult &r) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;
    for (const auto &[name, table] : r.tables) {
        std::ofstream f(dir / (name + ".csv"));
        if (!f) throw ConfigError("cannot write to output directory " + dir.string());
        table.write_csv(f);
        files.push_back(name + ".csv");
    }
    std::ofstream(dir / "summary.json") << r.summary.dump(2) << '\n';
    files.push_back("summary.json");
    nlohmann::json m = r.manifest;
    m["artifact_version"] = kArtifactVersion;
    m["config"] = cfg.to_json();
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < cfg.seeds; s++) seeds.push_back(cfg.seed + s);
    m["seeds"] = seeds;
    m["outputs"] = files;
    std::ofstream(dir / "manifest.json") << m.dump(2) << '\n';
}

inline std::string fmt_id(const std::string &prefix, const std::vector<std::pair<std::string, std::string>> &parts) {
    std::string s = prefix;
    for (const auto &[k, v] : parts) s += "_" + k + v;
    return s;
}

inline std::string num(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

/// Encoding from a config value: a short name ("naive", "exponential", "iqp_1d") sized to `n`,
/// an object {"kind": name, "base": b}, or a full serialized EncodingMap.
inline circuits::EncodingMap encoding_from(const nlohmann::json &v, std::size_t n) {
    std::string kind;
    double base = 3.0;
    if (v.is_string()) {
        kind = v.get<std::string>();
    } else if (v.is_object() && v.contains("kind") && !v.contains("N") && !v.contains("d") && !v.contains("n_qubits")) {
        kind = v.at("kind").get<std::string>();
        base = v.value("base", 3.0);
    } else {
        return circuits::EncodingMap::from_json(v);
    }
    if (kind == "naive") return circuits::EncodingMap::naive(n);
    if (kind == "exponential") return circuits::EncodingMap::exponential(n, base);
    if (kind == "iqp_1d") return circuits::EncodingMap::iqp_1d(n);
    throw ConfigError("unknown encoding '" + kind + "'");
}

}  // namespace vqtn::experiments

#endif

// Copyright 2026 The primesq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Figure datasets: each run assembles module outputs into named columns
// and writes <figure_id>.csv, optional auxiliary tables and a JSON manifest.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "primesq/covariance.hpp"
#include "primesq/interval_statistics.hpp"

namespace primesq {

enum class FigureId {
    ratios,
    pik_curves,
    ms_histogram,
    error_functions,
    normalized_error,
    random_models,
    covariance_sums,
    stddev,
    rh_bounds,
};

std::string to_string(FigureId id);
// Throws std::invalid_argument for unknown names.
FigureId parse_figure_id(const std::string& name);
const std::vector<FigureId>& all_figures();

struct ExperimentConfig {
    FigureId figure = FigureId::ratios;
    std::size_t k_max = 1000;
    std::size_t realizations = 100;
    std::uint64_t seed = 1;
    long double c = kDefaultMeanWeight;
    std::size_t d1 = 10;
    std::size_t d2 = 50;
    // Emit every stride-th k (the last k is always emitted).
    std::size_t stride = 1;
    Separation separation = Separation::start_to_start;
    std::filesystem::path output_dir = ".";
    // Truncated sums of the ratios figure; off skips tau entirely.
    bool tau = true;
    TauOptions tau_options;
    SieveOptions sieve_options;
};

// Throws std::invalid_argument when a field is out of range.
void validate(const ExperimentConfig& config);

struct Column {
    std::string name;
    std::vector<long double> values;  // NaN marks a missing value
    bool integer = false;
};

struct Table {
    // A deque, so references returned by add() stay valid.
    std::deque<Column> columns;

    Column& add(std::string name, bool integer = false);
    const Column& at(const std::string& name) const;
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().values.size(); }
};

struct FigureDataset {
    std::string figure_id;
    Table main;
    // Extra tables written as <figure_id>.<name>.csv (histogram bins, ...).
    std::map<std::string, Table> aux;
    // Scalar diagnostics echoed into the manifest.
    std::map<std::string, long double> summary;
    bool truncated = false;
    std::string truncation_reason;
    // Largest k the dataset actually covers.
    std::size_t k_covered = 0;
};

FigureDataset run_experiment(const ExperimentConfig& config);

// Writes the CSV files and the manifest; returns the paths written, the
// manifest last.
std::vector<std::filesystem::path> write_dataset(const FigureDataset& dataset,
                                                 const ExperimentConfig& config,
                                                 double wall_seconds);

// CSV text of a table: header row, 12 significant digits, empty fields for
// missing values. Throws std::invalid_argument on unequal column lengths.
std::string to_csv(const Table& table);

struct Histogram {
    std::vector<long double> edges;  // bins + 1 edges
    std::vector<std::size_t> counts;
};

// Freedman–Diaconis bin width over the finite values; one bin when the
// interquartile range vanishes.
Histogram freedman_diaconis(std::vector<long double> values);

std::string library_version();

}  // namespace primesq

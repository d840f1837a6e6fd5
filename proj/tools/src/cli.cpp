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

#include "primesq_cli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "primesq/covariance.hpp"
#include "primesq/errors.hpp"
#include "primesq/experiments.hpp"
#include "primesq/interval_statistics.hpp"
#include "primesq/prime_engine.hpp"
#include "primesq/random_models.hpp"

namespace primesq::cli {

namespace {

std::string opt(const std::optional<long double>& v) { return v ? format_real(*v) : ""; }

std::filesystem::path default_output_dir() {
    const char* env = std::getenv(kOutputDirEnv);
    return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

SieveOptions sieve_options(std::size_t segment_kib) {
    SieveOptions o;
    o.segment_bytes = segment_kib * 1024;
    return o;
}

int run_sieve(std::size_t K, std::size_t segment_kib, std::ostream& out) {
    const auto table = PrimeTable::with_count(K + 1);
    const auto counts = interval_counts(table, K, sieve_options(segment_kib));
    out << "k,p_k,p_k1,l_k,pi_k\n";
    for (std::size_t k = 1; k <= K; ++k) {
        const Interval iv = make_interval(table, k);
        out << k << ',' << iv.p_lo << ',' << iv.p_hi << ',' << iv.length << ',' << counts[k - 1]
            << '\n';
    }
    return kExitOk;
}

int run_stats(std::size_t K, bool with_tau, long double c, std::size_t segment_kib,
              std::ostream& out) {
    const auto table = PrimeTable::with_count(K + 1);
    const auto opts = sieve_options(segment_kib);
    const auto counts = interval_counts(table, K, opts);
    std::vector<std::uint64_t> cumulative(K);
    std::uint64_t running = 2;  // pi(4)
    for (std::size_t i = 0; i < K; ++i) cumulative[i] = running += counts[i];
    std::vector<long double> tau;
    if (with_tau) tau = tau_truncated(table, K);
    const auto stats = interval_stats(table, counts, tau);
    const ErrorSeries es = error_series(table, cumulative, c);
    out << "k,x,pi_k,li_k,tilde_pi_k,tau_k,mu_k,sigma_k,pi_bar_k,pi_x,epsilon,epsilon0,delta,E\n";
    for (std::size_t k = 1; k <= K; ++k) {
        const auto& s = stats[k - 1];
        const std::size_t i = k - 1;
        out << k << ',' << table[k + 1] * table[k + 1] << ',' << counts[i] << ','
            << format_real(s.li_k) << ',' << format_real(s.tilde_pi_k) << ',' << opt(s.tau_k) << ','
            << format_real(s.mu_k) << ',' << opt(s.sigma_k) << ',' << opt(s.pi_bar_k) << ','
            << cumulative[i] << ',' << format_real(es.epsilon[i]) << ','
            << format_real(es.epsilon_adj[i]) << ',' << format_real(es.delta_norm[i]) << ','
            << format_real(es.E[i]) << '\n';
    }
    return kExitOk;
}

int run_model(const std::string& kind_name, std::size_t K, std::size_t realizations,
              std::uint64_t seed, const std::optional<std::filesystem::path>& out_dir,
              std::ostream& out) {
    const ModelKind kind = parse_model_kind(kind_name);
    const auto table = PrimeTable::with_count(K + 1);
    const auto ensemble = run_ensemble(table, kind, K, realizations, seed);
    std::ostringstream csv;
    csv << 'k';
    for (std::size_t r = 1; r <= realizations; ++r) {
        csv << ",count" << (realizations > 1 ? "_" + std::to_string(r) : "");
    }
    csv << '\n';
    for (std::size_t k = 1; k <= K; ++k) {
        csv << k;
        for (const auto& s : ensemble) csv << ',' << s.counts[k - 1];
        csv << '\n';
    }
    if (!out_dir) {
        out << csv.str();
        return kExitOk;
    }
    std::filesystem::create_directories(*out_dir);
    const std::string stem = "model_" + kind_name;
    std::ofstream(*out_dir / (stem + ".csv"), std::ios::binary) << csv.str();
    nlohmann::ordered_json sidecar;
    sidecar["model"] = kind_name;
    sidecar["seed"] = seed;
    sidecar["K"] = K;
    sidecar["realizations"] = realizations;
    nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
    for (const auto& s : ensemble) seeds.push_back(s.seed);
    sidecar["realization_seeds"] = seeds;
    sidecar["tool_version"] = library_version();
    std::ofstream(*out_dir / (stem + ".json"), std::ios::binary) << sidecar.dump(2) << '\n';
    out << (*out_dir / (stem + ".csv")).string() << '\n';
    return kExitOk;
}

int run_cov(const std::string& n1, const std::string& n2, std::int64_t h1, std::int64_t h2,
            std::int64_t q, const std::string& method, bool exact, std::ostream& out) {
    std::size_t max_index = 1;
    for (const auto& s : {n1, n2}) {
        if (s.rfind("P#", 0) == 0) max_index = std::max<std::size_t>(max_index, std::stoull(s.substr(2)));
    }
    const auto table = PrimeTable::with_count(max_index);
    const CovParams params{Modulus::parse(n1, table), Modulus::parse(n2, table), h1, h2, q};
    if (method == "enum") {
        const Rational g = G_enum(params);
        out << (exact ? g.to_string() : format_real(g.to_long_double())) << '\n';
    } else if (method == "threesum") {
        out << format_real(G_threesum(params)) << '\n';
    } else if (method == "compact") {
        out << format_real(G_compact(params)) << '\n';
    } else {
        out << format_real(G_value(params)) << '\n';
    }
    return kExitOk;
}

int run_figure(const ExperimentConfig& config, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const FigureDataset ds = run_experiment(config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& path : write_dataset(ds, config, seconds)) out << path.string() << '\n';
    return ds.truncated ? kExitResource : kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Primes between consecutive squared primes: counts, estimators, random "
                 "models and covariance sums"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Cap on worker threads (default: all cores)")
        ->check(CLI::PositiveNumber);
    app.set_version_flag("--version", library_version());

    std::size_t k_max = 0;
    std::size_t segment_kib = 128;
    auto* sieve = app.add_subcommand("sieve", "Interval table k, p_k, p_{k+1}, l_k, pi_k");
    sieve->add_option("--k-max", k_max, "Number of intervals")->required()->check(CLI::PositiveNumber);
    sieve->add_option("--segment-kib", segment_kib, "Sieve segment size in KiB")
        ->check(CLI::PositiveNumber);

    bool with_tau = false;
    double c = static_cast<double>(kDefaultMeanWeight);
    auto* stats = app.add_subcommand("stats", "Per-interval statistics and error series");
    stats->add_option("--k-max", k_max, "Number of intervals")->required()->check(CLI::PositiveNumber);
    stats->add_flag("--tau", with_tau, "Include the truncated Moebius sums");
    stats->add_option("--c", c, "Weight of li in the adjusted mean");
    stats->add_option("--segment-kib", segment_kib, "Sieve segment size in KiB")
        ->check(CLI::PositiveNumber);

    std::string kind;
    std::size_t realizations = 1;
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> model_out;
    auto* model = app.add_subcommand("model", "Random-model realizations");
    model->add_option("--kind", kind, "correlated, uncorrelated or constrained")
        ->required()
        ->check(CLI::IsMember({"correlated", "uncorrelated", "constrained"}));
    model->add_option("--k-max", k_max, "Number of intervals")->required()->check(CLI::PositiveNumber);
    model->add_option("--realizations", realizations, "Ensemble size")->check(CLI::PositiveNumber);
    model->add_option("--seed", seed, "Master seed");
    model->add_option("--out", model_out, "Write CSV and JSON sidecar into this directory");

    std::string n1, n2, method = "auto";
    std::int64_t h1 = 0, h2 = 0, q = 0;
    bool exact = false;
    auto* cov = app.add_subcommand("cov", "Covariance G(n1, n2, h1, h2, q)");
    cov->add_option("--n1", n1, "Modulus: integer or P#i")->required();
    cov->add_option("--n2", n2, "Modulus: integer or P#i")->required();
    cov->add_option("--h1", h1, "First window length")->required()->check(CLI::PositiveNumber);
    cov->add_option("--h2", h2, "Second window length")->required()->check(CLI::PositiveNumber);
    cov->add_option("--q", q, "Offset of the second window")->required();
    cov->add_option("--method", method, "enum, threesum, compact or auto")
        ->check(CLI::IsMember({"enum", "threesum", "compact", "auto"}));
    cov->add_flag("--exact", exact, "Print the enumeration result as a fraction");

    ExperimentConfig config;
    config.output_dir = default_output_dir();
    std::string figure_id, separation = "start_to_start";
    double figure_c = static_cast<double>(kDefaultMeanWeight);
    bool no_tau = false;
    auto* figure = app.add_subcommand("figure", "Write one figure dataset and its manifest");
    figure->add_option("--id", figure_id, "Figure id")->required();
    figure->add_option("--k-max", config.k_max, "Largest k")->required()->check(CLI::PositiveNumber);
    figure->add_option("--realizations", config.realizations, "Ensemble size")
        ->check(CLI::PositiveNumber);
    figure->add_option("--seed", config.seed, "Master seed");
    figure->add_option("--c", figure_c, "Weight of li in the adjusted mean");
    figure->add_option("--d1", config.d1, "Largest individual lag")->check(CLI::PositiveNumber);
    figure->add_option("--d2", config.d2, "Second remainder cut")->check(CLI::PositiveNumber);
    figure->add_option("--stride", config.stride, "Emit every stride-th k")
        ->check(CLI::PositiveNumber);
    figure->add_option("--separation", separation, "start_to_start or end_to_end")
        ->check(CLI::IsMember({"start_to_start", "end_to_end"}));
    figure->add_flag("--no-tau", no_tau, "Skip the truncated Moebius sums");
    figure->add_option("--out", config.output_dir, "Output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << library_version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*sieve) return run_sieve(k_max, segment_kib, out);
        if (*stats) return run_stats(k_max, with_tau, c, segment_kib, out);
        if (*model) return run_model(kind, k_max, realizations, seed, model_out, out);
        if (*cov) return run_cov(n1, n2, h1, h2, q, method, exact, out);
        config.figure = parse_figure_id(figure_id);
        config.c = figure_c;
        config.tau = !no_tau;
        config.separation =
            separation == "end_to_end" ? Separation::end_to_end : Separation::start_to_start;
        return run_figure(config, out);
    } catch (const ResourceLimitError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnsupportedCaseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace primesq::cli

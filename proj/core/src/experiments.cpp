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

#include "primesq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "primesq/errors.hpp"
#include "primesq/numeric.hpp"
#include "primesq/prime_engine.hpp"
#include "primesq/random_models.hpp"

#ifndef PRIMESQ_VERSION
#define PRIMESQ_VERSION "0.0.0"
#endif

namespace primesq {

namespace {

constexpr long double kMissing = std::numeric_limits<long double>::quiet_NaN();

const std::vector<std::pair<FigureId, const char*>> kFigureNames = {
    {FigureId::ratios, "ratios"},
    {FigureId::pik_curves, "pik_curves"},
    {FigureId::ms_histogram, "ms_histogram"},
    {FigureId::error_functions, "error_functions"},
    {FigureId::normalized_error, "normalized_error"},
    {FigureId::random_models, "random_models"},
    {FigureId::covariance_sums, "covariance_sums"},
    {FigureId::stddev, "stddev"},
    {FigureId::rh_bounds, "rh_bounds"},
};

std::vector<std::size_t> row_ks(std::size_t K, std::size_t stride) {
    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k <= K; k += stride) ks.push_back(k);
    if (ks.back() != K) ks.push_back(K);
    return ks;
}

long double log_square(std::uint64_t p) { return 2.0L * std::log(static_cast<long double>(p)); }

long double x_at(const PrimeTable& table, std::size_t k) {
    return static_cast<long double>(table[k + 1] * table[k + 1]);
}

// Largest k <= K with p_{k+1}^2 <= capacity.
std::size_t feasible_k(const PrimeTable& table, std::size_t K, std::uint64_t capacity) {
    std::size_t k = 0;
    while (k < K && table[k + 2] <= capacity / table[k + 2]) ++k;
    return k;
}

void mark_truncated(FigureDataset& ds, const std::string& reason) {
    ds.truncated = true;
    if (!ds.truncation_reason.empty()) ds.truncation_reason += "; ";
    ds.truncation_reason += reason;
}

struct Context {
    const ExperimentConfig& config;
    PrimeTable table;
    std::vector<std::size_t> ks;
    std::size_t K;
};

// Common k and x columns.
Table base_table(const Context& ctx) {
    Table t;
    auto& k = t.add("k", true);
    auto& x = t.add("x", true);
    for (std::size_t kk : ctx.ks) {
        k.values.push_back(static_cast<long double>(kk));
        x.values.push_back(x_at(ctx.table, kk));
    }
    return t;
}

void fill(Table& t, const std::string& name, const Context& ctx,
          const std::vector<long double>& per_k, bool integer = false) {
    auto& col = t.add(name, integer);
    for (std::size_t k : ctx.ks) col.values.push_back(k <= per_k.size() ? per_k[k - 1] : kMissing);
}

std::pair<long double, long double> mean_std(const std::vector<long double>& values) {
    CompensatedSum<long double> s;
    std::size_t n = 0;
    for (long double v : values) {
        if (std::isfinite(v)) {
            s += v;
            ++n;
        }
    }
    if (n == 0) return {kMissing, kMissing};
    const long double m = s.value() / static_cast<long double>(n);
    CompensatedSum<long double> ss;
    for (long double v : values) {
        if (std::isfinite(v)) ss += (v - m) * (v - m);
    }
    const long double sd = n > 1 ? std::sqrt(ss.value() / static_cast<long double>(n - 1)) : 0.0L;
    return {m, sd};
}

long double normal_pdf(long double z, long double mean, long double sd) {
    const long double u = (z - mean) / sd;
    return std::exp(-0.5L * u * u) / (sd * std::sqrt(2.0L * std::numbers::pi_v<long double>));
}

Table histogram_table(const Histogram& h, long double mean, long double sd) {
    Table t;
    auto& left = t.add("bin_left");
    auto& right = t.add("bin_right");
    auto& count = t.add("count", true);
    auto& density = t.add("density");
    auto& pdf = t.add("normal_pdf");
    std::size_t total = 0;
    for (std::size_t c : h.counts) total += c;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        const long double width = h.edges[b + 1] - h.edges[b];
        left.values.push_back(h.edges[b]);
        right.values.push_back(h.edges[b + 1]);
        count.values.push_back(static_cast<long double>(h.counts[b]));
        density.values.push_back(total > 0 && width > 0
                                     ? static_cast<long double>(h.counts[b]) /
                                           (static_cast<long double>(total) * width)
                                     : 0.0L);
        pdf.values.push_back(normal_pdf((h.edges[b] + h.edges[b + 1]) / 2.0L, mean, sd));
    }
    return t;
}

struct PrimeErrors {
    std::vector<long double> li_k;  // li_j
    std::vector<long double> pr;    // pi_j - li_j
    std::vector<long double> ad;    // pi_j - [c li_j + (1-c) mu_j]
};

PrimeErrors prime_errors(const Context& ctx, const std::vector<std::uint64_t>& counts) {
    PrimeErrors e;
    e.li_k.resize(ctx.K);
    e.pr.resize(ctx.K);
    e.ad.resize(ctx.K);
    const long double c = ctx.config.c;
#pragma omp parallel for schedule(static)
    for (std::size_t k = 1; k <= ctx.K; ++k) {
        const long double li = li_interval(ctx.table, k);
        const auto pi = static_cast<long double>(counts[k - 1]);
        e.li_k[k - 1] = li;
        e.pr[k - 1] = pi - li;
        e.ad[k - 1] = pi - (c * li + (1.0L - c) * ms_mean(ctx.table, k));
    }
    return e;
}

std::vector<std::uint64_t> running_counts(const std::vector<std::uint64_t>& counts) {
    std::vector<std::uint64_t> out(counts.size());
    std::uint64_t running = 2;  // pi(4)
    for (std::size_t i = 0; i < counts.size(); ++i) out[i] = running += counts[i];
    return out;
}

std::vector<long double> tilde_series(const Context& ctx) {
    return tilde_pi_intervals(ctx.table, ctx.K);
}

void run_ratios(Context& ctx, FigureDataset& ds) {
    const auto counts = interval_counts(ctx.table, ctx.K, ctx.config.sieve_options);
    const auto tilde = tilde_series(ctx);
    std::vector<long double> tau;
    if (ctx.config.tau) {
        const std::size_t tau_k = feasible_k(ctx.table, ctx.K, ctx.config.tau_options.capacity);
        if (tau_k < ctx.K) {
            mark_truncated(ds, "tau limited to k <= " + std::to_string(tau_k) + " by capacity");
        }
        if (tau_k >= 1) tau = tau_truncated(ctx.table, tau_k, ctx.config.tau_options);
    }
    std::vector<long double> pi_ratio(ctx.K), tilde_ratio(ctx.K), tau_ratio(ctx.K, kMissing);
    for (std::size_t k = 1; k <= ctx.K; ++k) {
        const long double m = ms_mean(ctx.table, k);
        pi_ratio[k - 1] = static_cast<long double>(counts[k - 1]) / m;
        tilde_ratio[k - 1] = tilde[k - 1] / m;
        if (k <= tau.size()) tau_ratio[k - 1] = tau[k - 1] / m;
    }
    ds.main = base_table(ctx);
    fill(ds.main, "pi_ratio", ctx, pi_ratio);
    fill(ds.main, "tilde_ratio", ctx, tilde_ratio);
    fill(ds.main, "tau_ratio", ctx, tau_ratio);
    const std::size_t tail = std::max<std::size_t>(1, ctx.K / 10);
    const std::vector<long double> last_pi(pi_ratio.end() - tail, pi_ratio.end());
    const std::vector<long double> last_tilde(tilde_ratio.end() - tail, tilde_ratio.end());
    const std::vector<long double> last_tau(tau_ratio.end() - tail, tau_ratio.end());
    ds.summary["pi_ratio_tail_mean"] = mean_std(last_pi).first;
    ds.summary["tilde_ratio_tail_mean"] = mean_std(last_tilde).first;
    ds.summary["tau_ratio_tail_mean"] = mean_std(last_tau).first;
    ds.summary["two_exp_minus_gamma"] = 2.0L * std::exp(-kEulerGamma);
}

void run_pik_curves(Context& ctx, FigureDataset& ds) {
    const auto counts = interval_counts(ctx.table, ctx.K, ctx.config.sieve_options);
    std::vector<long double> pi(ctx.K), gap(ctx.K), theory(ctx.K);
    for (std::size_t k = 1; k <= ctx.K; ++k) {
        const Interval iv = make_interval(ctx.table, k);
        const long double x = static_cast<long double>(iv.end());
        const auto g = static_cast<long double>(iv.gap);
        pi[k - 1] = static_cast<long double>(counts[k - 1]);
        gap[k - 1] = g;
        theory[k - 1] = (2.0L * std::sqrt(x) * g - g * g) / std::log(x);
    }
    ds.main = base_table(ctx);
    fill(ds.main, "pi_k", ctx, pi, true);
    fill(ds.main, "gap", ctx, gap, true);
    fill(ds.main, "theory", ctx, theory);
}

void run_ms_histogram(Context& ctx, FigureDataset& ds) {
    const auto counts = interval_counts(ctx.table, ctx.K, ctx.config.sieve_options);
    std::vector<long double> pi_bar(ctx.K, kMissing);
    std::vector<long double> valid;
    for (std::size_t k = 1; k <= ctx.K; ++k) {
        if (auto v = normalize_pi(ctx.table, k, counts[k - 1])) {
            pi_bar[k - 1] = *v;
            valid.push_back(*v);
        }
    }
    ds.main = base_table(ctx);
    fill(ds.main, "pi_bar", ctx, pi_bar);
    const auto [mean, sd] = mean_std(valid);
    ds.aux["bins"] = histogram_table(freedman_diaconis(valid), 0.0L, 1.0L);
    Table normal;
    auto& z = normal.add("z");
    auto& pdf = normal.add("pdf");
    for (int i = -160; i <= 160; ++i) {
        const long double zz = static_cast<long double>(i) / 40.0L;
        z.values.push_back(zz);
        pdf.values.push_back(normal_pdf(zz, 0.0L, 1.0L));
    }
    ds.aux["normal"] = std::move(normal);
    ds.summary["mean"] = mean;
    ds.summary["std"] = sd;
    ds.summary["valid"] = static_cast<long double>(valid.size());
    ds.summary["excluded"] = static_cast<long double>(ctx.K - valid.size());
}

void run_error_functions(Context& ctx, FigureDataset& ds) {
    const auto cumulative = cumulative_pi(ctx.table, ctx.K, ctx.config.sieve_options);
    const ErrorSeries es = error_series(ctx.table, cumulative, ctx.config.c);
    Rng rng(derive_seed(ctx.config.seed, 0));
    std::vector<long double> lower(ctx.K), upper(ctx.K), omega(ctx.K);
    CompensatedSum<long double> path;
    for (std::size_t k = 1; k <= ctx.K; ++k) {
        lower[k - 1] = es.lower_sum[k - 1] - es.li_sum[k - 1];
        upper[k - 1] = es.upper_sum[k - 1] - es.li_sum[k - 1];
        if (auto sigma = ms_std(ctx.table, k)) path += *sigma * static_cast<long double>(rng.normal());
        omega[k - 1] = path.value();
    }
    ds.main = base_table(ctx);
    fill(ds.main, "epsilon", ctx, es.epsilon);
    fill(ds.main, "sum_lower", ctx, lower);
    fill(ds.main, "sum_upper", ctx, upper);
    fill(ds.main, "omega_path", ctx, omega);
}

void run_normalized_error(Context& ctx, FigureDataset& ds) {
    const auto cumulative = cumulative_pi(ctx.table, ctx.K, ctx.config.sieve_options);
    const ErrorSeries es = error_series(ctx.table, cumulative, ctx.config.c);
    std::vector<long double> norm_lower(ctx.K), norm_upper(ctx.K);
    for (std::size_t k = 1; k <= ctx.K; ++k) {
        norm_lower[k - 1] = (es.lower_sum[k - 1] - es.li_sum[k - 1]) / es.delta_norm[k - 1];
        norm_upper[k - 1] = (es.upper_sum[k - 1] - es.li_sum[k - 1]) / es.delta_norm[k - 1];
    }
    ds.main = base_table(ctx);
    fill(ds.main, "E", ctx, es.E);
    fill(ds.main, "delta", ctx, es.delta_norm);
    fill(ds.main, "epsilon", ctx, es.epsilon);
    fill(ds.main, "norm_lower", ctx, norm_lower);
    fill(ds.main, "norm_upper", ctx, norm_upper);
    const auto [mean, sd] = mean_std(es.E);
    ds.aux["bins"] = histogram_table(freedman_diaconis(es.E), mean, sd > 0 ? sd : 1.0L);
    const std::vector<long double> second_half(es.E.begin() + static_cast<std::ptrdiff_t>(ctx.K / 2),
                                               es.E.end());
    ds.summary["mean"] = mean;
    ds.summary["std"] = sd;
    ds.summary["E_at_k_max"] = es.E.back();
    ds.summary["mean_second_half"] = mean_std(second_half).first;
}

// e^gamma/2 * sum_{j<=k} (count_j - tilde_pi_j) for one realization.
std::vector<long double> model_path(const RealizationSeries& s, const std::vector<long double>& tilde) {
    const long double factor = std::exp(kEulerGamma) / 2.0L;
    std::vector<long double> path(s.K);
    CompensatedSum<long double> sum;
    for (std::size_t j = 0; j < s.K; ++j) {
        sum += static_cast<long double>(s.counts[j]) - tilde[j];
        path[j] = factor * sum.value();
    }
    return path;
}

void run_random_models(Context& ctx, FigureDataset& ds) {
    const auto cumulative = cumulative_pi(ctx.table, ctx.K, ctx.config.sieve_options);
    const ErrorSeries es = error_series(ctx.table, cumulative, ctx.config.c);
    const auto tilde = tilde_series(ctx);
    ds.main = base_table(ctx);
    fill(ds.main, "epsilon", ctx, es.epsilon);
    fill(ds.main, "epsilon0", ctx, es.epsilon_adj);
    const std::size_t R = ctx.config.realizations;
    for (ModelKind kind : {ModelKind::correlated, ModelKind::uncorrelated}) {
        const std::uint64_t master = derive_seed(ctx.config.seed, kind == ModelKind::correlated ? 1 : 2);
        const auto ensemble = run_ensemble(ctx.table, kind, ctx.K, R, master);
        const std::string prefix = kind == ModelKind::correlated ? "corr_" : "uncorr_";
        std::vector<long double> finals;
        for (std::size_t r = 0; r < R; ++r) {
            const auto path = model_path(ensemble[r], tilde);
            finals.push_back(path.back());
            fill(ds.main, prefix + std::to_string(r + 1), ctx, path);
        }
        const auto [m, sd] = mean_std(finals);
        (void)m;
        ds.summary[prefix + "final_std"] = sd;
    }
}

void run_covariance_sums(Context& ctx, FigureDataset& ds) {
    const auto& cfg = ctx.config;
    const std::size_t d1 = cfg.d1;
    const std::size_t d2 = cfg.d2;
    const std::size_t max_lag = std::max(d1, d2);
    const auto counts = interval_counts(ctx.table, ctx.K, cfg.sieve_options);
    const auto errors = prime_errors(ctx, counts);
    const auto tilde = tilde_series(ctx);

    ds.main = base_table(ctx);
    const auto emit = [&](const std::string& label, auto&& kappa_at, auto&& remainder_at,
                          std::size_t valid_k) {
        for (std::size_t lag = 1; lag <= d1; ++lag) {
            std::vector<long double> col(ctx.K, kMissing);
            for (std::size_t k = 1; k <= valid_k; ++k) col[k - 1] = kappa_at(lag, k);
            fill(ds.main, "kappa_" + label + "_" + std::to_string(lag), ctx, col);
        }
        for (std::size_t d : {d1, d2}) {
            std::vector<long double> col(ctx.K, kMissing);
            for (std::size_t k = 1; k <= valid_k; ++k) col[k - 1] = remainder_at(d, k);
            fill(ds.main, "rem_" + label + "_" + std::to_string(d), ctx, col);
        }
    };

    // Theory, incrementally over k.
    const std::size_t th_k = std::min(ctx.K, kCovarianceMaxK);
    if (th_k < ctx.K) mark_truncated(ds, "theory limited to k <= " + std::to_string(th_k));
    const CovarianceSums cs = covariance_sums(ctx.table, th_k, cfg.separation);
    std::vector<long double> th_kappa(th_k * d1, 0.0L);
    std::vector<std::vector<long double>> th_rem(2, std::vector<long double>(th_k, 0.0L));
    {
        std::vector<CompensatedSum<long double>> lag_sum(d1);
        std::vector<CompensatedSum<long double>> rem_sum(2);
        const std::size_t ds_[2] = {d1, d2};
        for (std::size_t k = 1; k <= th_k; ++k) {
            for (std::size_t lag = 1; lag <= d1 && lag < k; ++lag) lag_sum[lag - 1] += cs.pair(k - lag, k);
            for (std::size_t lag = 1; lag <= d1; ++lag) th_kappa[(k - 1) * d1 + lag - 1] = lag_sum[lag - 1].value();
            for (int r = 0; r < 2; ++r) {
                for (std::size_t i = 1; i + ds_[r] < k; ++i) rem_sum[r] += cs.pair(i, k);
                th_rem[r][k - 1] = rem_sum[r].value();
            }
        }
    }
    emit("th", [&](std::size_t lag, std::size_t k) { return th_kappa[(k - 1) * d1 + lag - 1]; },
         [&](std::size_t d, std::size_t k) { return th_rem[d == d1 ? 0 : 1][k - 1]; }, th_k);

    const auto ensemble = run_ensemble(ctx.table, ModelKind::correlated, ctx.K, cfg.realizations,
                                       derive_seed(cfg.seed, 1));
    const EnsembleStats st = ensemble_stats(ensemble, tilde, max_lag);
    emit("sim", [&](std::size_t lag, std::size_t k) { return st.profile.kappa_at(lag, k); },
         [&](std::size_t d, std::size_t k) { return st.profile.remainder(d, k); }, ctx.K);

    const LagProfile pr = lag_profile(errors.pr, max_lag);
    const LagProfile ad = lag_profile(errors.ad, max_lag);
    emit("pr", [&](std::size_t lag, std::size_t k) { return pr.kappa_at(lag, k); },
         [&](std::size_t d, std::size_t k) { return pr.remainder(d, k); }, ctx.K);
    emit("ad", [&](std::size_t lag, std::size_t k) { return ad.kappa_at(lag, k); },
         [&](std::size_t d, std::size_t k) { return ad.remainder(d, k); }, ctx.K);

    ds.summary["kappa_th_1"] = th_kappa[(th_k - 1) * d1];
    ds.summary["kappa_sim_1"] = st.profile.kappa_at(1, ctx.K);
    ds.summary["kappa_sim_1_stderr"] = st.kappa_stderr[0];
    if (d1 >= 2 && ctx.K >= 3) ds.summary["kappa_sim_2"] = st.profile.kappa_at(2, ctx.K);
}

void run_stddev(Context& ctx, FigureDataset& ds) {
    const auto& cfg = ctx.config;
    const auto counts = interval_counts(ctx.table, ctx.K, cfg.sieve_options);
    const auto errors = prime_errors(ctx, counts);
    const auto tilde = tilde_series(ctx);

    const std::size_t th_k = std::min(ctx.K, kCovarianceMaxK);
    if (th_k < ctx.K) mark_truncated(ds, "theory limited to k <= " + std::to_string(th_k));
    const CovarianceSums cs = covariance_sums(ctx.table, th_k, cfg.separation);
    const auto ensemble = run_ensemble(ctx.table, ModelKind::correlated, ctx.K, cfg.realizations,
                                       derive_seed(cfg.seed, 1));
    const EnsembleStats st = ensemble_stats(ensemble, tilde, 0);
    const LagProfile pr = lag_profile(errors.pr, 0);
    const LagProfile ad = lag_profile(errors.ad, 0);

    std::vector<long double> th(ctx.K, kMissing), th0(ctx.K, kMissing), sim(ctx.K), sim0(ctx.K),
        spr(ctx.K), spr0(ctx.K), sad(ctx.K), sad0(ctx.K), ub(ctx.K);
    for (std::size_t k = 1; k <= ctx.K; ++k) {
        const std::size_t i = k - 1;
        if (k <= th_k) {
            th[i] = std::sqrt(cs.var_correlated[i]);
            th0[i] = std::sqrt(cs.var_uncorrelated[i]);
        }
        sim[i] = std::sqrt(st.profile.square_of_sum[i]);
        sim0[i] = std::sqrt(st.profile.sum_of_squares[i]);
        spr[i] = std::sqrt(pr.square_of_sum[i]);
        spr0[i] = std::sqrt(pr.sum_of_squares[i]);
        sad[i] = std::sqrt(ad.square_of_sum[i]);
        sad0[i] = std::sqrt(ad.sum_of_squares[i]);
        ub[i] = sigma_upper_bound(ctx.table, k);
    }
    ds.main = base_table(ctx);
    fill(ds.main, "sigma_th", ctx, th);
    fill(ds.main, "sigma_sim", ctx, sim);
    fill(ds.main, "sigma_pr", ctx, spr);
    fill(ds.main, "sigma_ad", ctx, sad);
    fill(ds.main, "sigma_th_0", ctx, th0);
    fill(ds.main, "sigma_sim_0", ctx, sim0);
    fill(ds.main, "sigma_pr_0", ctx, spr0);
    fill(ds.main, "sigma_ad_0", ctx, sad0);
    fill(ds.main, "sigma_ub", ctx, ub);
    ds.summary["sigma_pr_0_squared"] = pr.sum_of_squares.back();
}

void run_rh_bounds(Context& ctx, FigureDataset& ds) {
    const auto counts = interval_counts(ctx.table, ctx.K, ctx.config.sieve_options);
    const auto cumulative = running_counts(counts);
    const ErrorSeries es = error_series(ctx.table, cumulative, ctx.config.c);
    const auto errors = prime_errors(ctx, counts);
    std::vector<long double> abs_eps(ctx.K), discrete(ctx.K), discrete_b(ctx.K), sum_sq(ctx.K),
        continuous(ctx.K), uncorrelated(ctx.K), koch(ctx.K);
    CompensatedSum<long double> disc, disc_b, squares;
    for (std::size_t k = 1; k <= ctx.K; ++k) {
        const std::size_t i = k - 1;
        const Interval iv = make_interval(ctx.table, k);
        const long double l = static_cast<long double>(iv.length);
        const long double lx = log_square(iv.p_hi);
        const long double x = static_cast<long double>(iv.end());
        disc += l * (lx - std::log(l)) / (lx * lx);
        disc_b += l * (lx - std::log(l) + kMontgomerySoundararajanB) / (lx * lx);
        squares += errors.pr[i] * errors.pr[i];
        abs_eps[i] = std::fabs(es.epsilon[i]);
        discrete[i] = std::sqrt(disc.value());
        discrete_b[i] = disc_b.value() > 0 ? std::sqrt(disc_b.value()) : kMissing;
        sum_sq[i] = std::sqrt(squares.value());
        continuous[i] = std::sqrt(es.li[i] / 2.0L);
        uncorrelated[i] = std::sqrt(2.0L * std::exp(-kEulerGamma) * es.li[i]);
        koch[i] = std::sqrt(x) * std::log(x);
    }
    ds.main = base_table(ctx);
    fill(ds.main, "abs_eps", ctx, abs_eps);
    fill(ds.main, "discrete_bound", ctx, discrete);
    fill(ds.main, "discrete_bound_b", ctx, discrete_b);
    fill(ds.main, "sum_sq_sqrt", ctx, sum_sq);
    fill(ds.main, "continuous_bound", ctx, continuous);
    fill(ds.main, "uncorrelated_bound", ctx, uncorrelated);
    fill(ds.main, "koch", ctx, koch);
    const std::size_t K = ctx.K - 1;
    ds.summary["ordered_at_k_max"] = (abs_eps[K] < discrete[K] && discrete[K] < uncorrelated[K] &&
                                      uncorrelated[K] < koch[K])
                                         ? 1.0L
                                         : 0.0L;
}

}  // namespace

std::string to_string(FigureId id) {
    for (const auto& [fid, name] : kFigureNames) {
        if (fid == id) return name;
    }
    return "unknown";
}

FigureId parse_figure_id(const std::string& name) {
    for (const auto& [fid, n] : kFigureNames) {
        if (name == n) return fid;
    }
    throw std::invalid_argument("unknown figure id '" + name + "'");
}

const std::vector<FigureId>& all_figures() {
    static const std::vector<FigureId> ids = [] {
        std::vector<FigureId> out;
        for (const auto& entry : kFigureNames) out.push_back(entry.first);
        return out;
    }();
    return ids;
}

void validate(const ExperimentConfig& config) {
    if (config.k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (config.realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    if (config.stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (config.d1 < 1 || config.d2 < config.d1) {
        throw std::invalid_argument("need 1 <= d1 <= d2");
    }
    if (!std::isfinite(config.c)) throw std::invalid_argument("c must be finite");
}

Column& Table::add(std::string name, bool integer) {
    for (const auto& c : columns) {
        if (c.name == name) throw std::invalid_argument("duplicate column '" + name + "'");
    }
    columns.push_back(Column{std::move(name), {}, integer});
    return columns.back();
}

const Column& Table::at(const std::string& name) const {
    for (const auto& c : columns) {
        if (c.name == name) return c;
    }
    throw std::out_of_range("no column '" + name + "'");
}

std::string to_csv(const Table& table) {
    const std::size_t rows = table.rows();
    for (const auto& c : table.columns) {
        if (c.values.size() != rows) {
            throw std::invalid_argument("column '" + c.name + "' has unequal length");
        }
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i].name;
    }
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i) out << ',';
            const Column& c = table.columns[i];
            const long double v = c.values[r];
            if (!std::isfinite(v)) continue;
            if (c.integer) {
                out << std::llround(v);
            } else {
                out << format_real(v);
            }
        }
        out << '\n';
    }
    return out.str();
}

Histogram freedman_diaconis(std::vector<long double> values) {
    std::erase_if(values, [](long double v) { return !std::isfinite(v); });
    Histogram h;
    if (values.empty()) return h;
    std::sort(values.begin(), values.end());
    const auto quantile = [&](long double q) {
        const long double pos = q * static_cast<long double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (pos - static_cast<long double>(lo)) * (values[hi] - values[lo]);
    };
    const long double lo = values.front();
    const long double hi = values.back();
    const long double iqr = quantile(0.75L) - quantile(0.25L);
    std::size_t bins = 1;
    if (iqr > 0 && hi > lo) {
        const long double width =
            2.0L * iqr / std::cbrt(static_cast<long double>(values.size()));
        bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
        bins = std::clamp<std::size_t>(bins, 1, 10000);
    }
    const long double span = hi > lo ? hi - lo : 1.0L;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.edges[b] = lo + span * static_cast<long double>(b) / static_cast<long double>(bins);
    }
    h.counts.assign(bins, 0);
    for (long double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / span * static_cast<long double>(bins));
        h.counts[std::min(b, bins - 1)] += 1;
    }
    return h;
}

std::string library_version() { return PRIMESQ_VERSION; }

FigureDataset run_experiment(const ExperimentConfig& config) {
    validate(config);
    FigureDataset ds;
    ds.figure_id = to_string(config.figure);
    const std::size_t K = feasible_k(PrimeTable::with_count(config.k_max + 2), config.k_max,
                                     config.sieve_options.capacity);
    if (K < 1) throw ResourceLimitError("run_experiment: capacity below the first interval", 1);
    if (K < config.k_max) {
        mark_truncated(ds, "sieve capacity limits k to " + std::to_string(K));
    }
    Context ctx{config, PrimeTable::with_count(K + 2), row_ks(K, config.stride), K};
    switch (config.figure) {
        case FigureId::ratios: run_ratios(ctx, ds); break;
        case FigureId::pik_curves: run_pik_curves(ctx, ds); break;
        case FigureId::ms_histogram: run_ms_histogram(ctx, ds); break;
        case FigureId::error_functions: run_error_functions(ctx, ds); break;
        case FigureId::normalized_error: run_normalized_error(ctx, ds); break;
        case FigureId::random_models: run_random_models(ctx, ds); break;
        case FigureId::covariance_sums: run_covariance_sums(ctx, ds); break;
        case FigureId::stddev: run_stddev(ctx, ds); break;
        case FigureId::rh_bounds: run_rh_bounds(ctx, ds); break;
    }
    ds.k_covered = K;
    return ds;
}

std::vector<std::filesystem::path> write_dataset(const FigureDataset& dataset,
                                                 const ExperimentConfig& config,
                                                 double wall_seconds) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    std::vector<fs::path> written;
    const auto write = [&](const fs::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << text;
        if (!out) throw std::runtime_error("failed writing " + path.string());
        written.push_back(path);
    };
    write(config.output_dir / (dataset.figure_id + ".csv"), to_csv(dataset.main));
    for (const auto& [name, table] : dataset.aux) {
        write(config.output_dir / (dataset.figure_id + "." + name + ".csv"), to_csv(table));
    }

    nlohmann::ordered_json manifest;
    manifest["figure_id"] = dataset.figure_id;
    manifest["K_max"] = config.k_max;
    manifest["k_covered"] = dataset.k_covered;
    manifest["realizations"] = config.realizations;
    manifest["seed"] = config.seed;
    manifest["c"] = static_cast<double>(config.c);
    manifest["d1"] = config.d1;
    manifest["d2"] = config.d2;
    manifest["stride"] = config.stride;
    manifest["separation"] =
        config.separation == Separation::end_to_end ? "end_to_end" : "start_to_start";
    manifest["tool_version"] = library_version();
    manifest["wall_time_seconds"] = wall_seconds;
    manifest["truncated"] = dataset.truncated;
    if (dataset.truncated) manifest["truncation_reason"] = dataset.truncation_reason;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& p : written) files.push_back(p.filename().string());
    manifest["files"] = files;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    for (const auto& [key, value] : dataset.summary) {
        if (std::isfinite(value)) {
            summary[key] = static_cast<double>(value);
        } else {
            summary[key] = nullptr;
        }
    }
    manifest["summary"] = summary;
    write(config.output_dir / (dataset.figure_id + ".manifest.json"), manifest.dump(2) + "\n");
    return written;
}

}  // namespace primesq

// qgp — experiment front-end over the exact-moment engine, the Haar sampler,
// and the concentration bounds. Subcommands sample output densities at
// configurable scale, cross-check exact against asymptotic and
// Monte-Carlo moments, demonstrate predictive triviality, and sweep tail
// bounds against empirical frequencies. Artifacts are CSV or JSON tables
// plus a .meta.json sidecar; table bodies are byte-identical across reruns
// and thread counts for a fixed config.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qgp/csvio.hpp"
#include "qgp/errors.hpp"
#include "qgp/gp_moments.hpp"
#include "qgp/inference.hpp"
#include "qgp/sampler.hpp"
#include "qgp/stats.hpp"
#include "qgp/tails.hpp"
#include "qgp/weingarten.hpp"

namespace {

using qgp::csvio::fmt17;
using qgp::csvio::Table;
using qgp::weingarten::Group;
namespace gp = qgp::gp;
namespace sampler = qgp::sampler;
namespace stats = qgp::stats;
namespace tails = qgp::tails;
namespace inference = qgp::inference;

struct Options {
    std::string group;
    int qubits = 0;
    long dim = 0;
    long samples = 10000;
    std::uint64_t seed = 0;
    int order = 0;
    std::string states;
    std::string observable;
    std::string mode = "all";
    std::string out;
    std::string format = "csv";
    int threads = 0;  // 0 = available parallelism
    std::string cache_dir;
    int bins = 60;
    std::string config_path;
};

struct Failure {
    std::string where;
    std::string detail;
};

struct RunContext {
    std::vector<Failure> failures;
    std::vector<std::string> artifacts;

    void check(bool ok, const std::string& where, const std::string& detail) {
        if (!ok) failures.push_back({where, detail});
    }
};

long resolve_dim(const Options& o, long fallback) {
    if (o.qubits > 0 && o.dim > 0)
        throw qgp::Error("give --qubits or --dim, not both");
    if (o.qubits > 0) {
        if (o.qubits > 40) throw qgp::Error("qubit count too large");
        return 1L << o.qubits;
    }
    if (o.dim > 0) return o.dim;
    return fallback;
}

int qubit_count(long d) {
    if (d < 2 || (d & (d - 1)) != 0)
        throw qgp::Error("dimension must be a power of two for qubit observables");
    int n = 0;
    while ((1L << n) < d) ++n;
    return n;
}

std::string observable_spec(const Options& o, long d) {
    if (!o.observable.empty()) return o.observable;
    return "Z" + std::string(static_cast<size_t>(qubit_count(d) - 1), 'I');
}

sampler::SampleOptions sample_options(const Options& o) {
    sampler::SampleOptions s;
    s.n_samples = o.samples;
    s.seed = o.seed;
    s.threads = o.threads;
    return s;
}

std::vector<Group> requested_groups(const Options& o, const std::string& dflt) {
    const std::string g = o.group.empty() ? dflt : o.group;
    if (g == "both")
        return {Group::unitary, Group::orthogonal};
    return {qgp::weingarten::group_from_string(g)};
}

nlohmann::json config_echo(const std::string& command, const Options& o) {
    nlohmann::json j;
    j["command"] = command;
    j["group"] = o.group;
    j["qubits"] = o.qubits;
    j["dim"] = o.dim;
    j["samples"] = o.samples;
    j["seed"] = o.seed;
    j["order"] = o.order;
    j["states"] = o.states;
    j["observable"] = o.observable;
    j["mode"] = o.mode;
    j["out"] = o.out;
    j["format"] = o.format;
    j["threads"] = o.threads;
    j["cache_dir"] = o.cache_dir;
    j["bins"] = o.bins;
    return j;
}

// Writes one table artifact plus its metadata sidecar. Wall time goes only
// into the sidecar so the table body stays byte-stable.
class Emitter {
public:
    Emitter(std::string base, std::string format, nlohmann::json echo,
            RunContext& ctx)
        : base_(std::move(base)), format_(std::move(format)),
          echo_(std::move(echo)), ctx_(&ctx),
          t0_(std::chrono::steady_clock::now()) {
        const auto parent = std::filesystem::path(base_).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
    }

    std::string emit(const std::string& tag, const Table& t) {
        const std::string path =
            base_ + (tag.empty() ? "" : "_" + tag) + "." + format_;
        qgp::csvio::write_table(path, t, format_);
        nlohmann::json meta;
        meta["artifact_version"] = 1;
        meta["config"] = echo_;
        meta["wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
                .count();
        qgp::csvio::write_json_file(qgp::csvio::sidecar_path(path), meta);
        ctx_->artifacts.push_back(path);
        return path;
    }

private:
    std::string base_;
    std::string format_;
    nlohmann::json echo_;
    RunContext* ctx_;
    std::chrono::steady_clock::time_point t0_;
};

// --------------------------------------------------------------------------
// density: distribution of a single output under Haar encodings, with the
// Gaussian model overlay and the even moment-ratio table.

void run_density(const Options& o, RunContext& ctx) {
    const long d = resolve_dim(o, 1024);
    const auto obs_spec = observable_spec(o, d);
    Emitter em(o.out.empty() ? "density" : o.out, o.format,
               config_echo("density", o), ctx);

    for (Group g : requested_groups(o, "both")) {
        const auto obs = qgp::make_observable(obs_spec, g);
        qgp::DatasetParams dp;
        dp.d = d;
        dp.m = 1;
        const auto ds = qgp::make_dataset(qgp::DatasetKind::computational, dp, g);
        const auto batch = sampler::sample_outputs(ds, obs, g, sample_options(o));
        const std::string gname = qgp::weingarten::to_string(g);
        const double sigma = tails::output_sigma(d, g);

        const auto hist = stats::histogram(batch, 0, o.bins, sigma);
        Table ht;
        ht.header = {"bin_lo", "bin_hi", "density", "gaussian_model"};
        for (size_t b = 0; b + 1 < hist.edges.size(); ++b)
            ht.rows.push_back({fmt17(hist.edges[b]), fmt17(hist.edges[b + 1]),
                               fmt17(hist.density[b]), fmt17(hist.overlay[b])});
        em.emit(gname + "_hist", ht);

        const double variance = stats::accumulate_column(batch, 0).raw_moment(2);
        const double model_variance = sigma * sigma;
        Table mt;
        mt.header = {"k",        "variance", "model_variance", "ratio",
                     "batch_se", "reference", "pass"};
        bool all_ok = true;
        for (int k = 2; k <= 8; k += 2) {
            const auto r = stats::moment_ratio_with_se(batch, 0, k);
            const bool ratio_ok =
                k == 2 || std::abs(r.ratio - r.reference) <= 5.0 * r.se;
            const bool var_ok = std::abs(variance / model_variance - 1.0) <= 0.05;
            const bool ok = ratio_ok && var_ok;
            all_ok = all_ok && ok;
            mt.rows.push_back({std::to_string(k), fmt17(variance),
                               fmt17(model_variance), fmt17(r.ratio), fmt17(r.se),
                               fmt17(r.reference), ok ? "1" : "0"});
        }
        const std::string path = em.emit(gname + "_moments", mt);
        ctx.check(all_ok, path,
                  "variance or moment ratios outside the Gaussian-model window");
    }
}

// --------------------------------------------------------------------------
// joint: joint density of two outputs on a state pair, with empirical vs
// model covariance/correlation.

void run_joint(const Options& o, RunContext& ctx) {
    const long d = resolve_dim(o, 4096);
    const auto obs_spec = observable_spec(o, d);
    Emitter em(o.out.empty() ? "joint" : o.out, o.format,
               config_echo("joint", o), ctx);

    std::vector<qgp::DatasetKind> kinds;
    if (o.states.empty()) {
        kinds = {qgp::DatasetKind::ghz_pair, qgp::DatasetKind::epsilon_pair};
    } else {
        kinds = {qgp::dataset_kind_from_string(o.states)};
    }

    for (Group g : requested_groups(o, "unitary")) {
        const auto obs = qgp::make_observable(obs_spec, g);
        for (auto kind : kinds) {
            qgp::DatasetParams dp;
            dp.d = d;
            dp.seed = o.seed;
            const auto ds = qgp::make_dataset(kind, dp, g);
            const auto batch = sampler::sample_outputs(ds, obs, g, sample_options(o));
            const std::string tag =
                qgp::weingarten::to_string(g) + "_" + qgp::to_string(kind);

            const auto h2 = stats::histogram2d(batch, 0, 1, o.bins);
            Table ht;
            ht.header = {"x_lo", "x_hi", "y_lo", "y_hi", "density"};
            const int bins = static_cast<int>(h2.x_edges.size()) - 1;
            for (int bx = 0; bx < bins; ++bx)
                for (int by = 0; by < bins; ++by)
                    ht.rows.push_back({fmt17(h2.x_edges[bx]), fmt17(h2.x_edges[bx + 1]),
                                       fmt17(h2.y_edges[by]), fmt17(h2.y_edges[by + 1]),
                                       fmt17(h2.density(bx, by))});
            em.emit(tag + "_hist2d", ht);

            // Overlaps of order one follow the order-one covariance model;
            // overlaps of order 1/d follow the uncorrelated one.
            const auto mode = kind == qgp::DatasetKind::epsilon_pair
                                  ? gp::CovMode::asymptotic_uncorrelated
                                  : gp::CovMode::asymptotic;
            const auto model = gp::covariance_matrix(ds.inner, d, g, mode);
            const auto est = stats::empirical_covariance(batch);

            Table ct;
            ct.header = {"i",       "j",       "cov",       "cov_se",
                         "corr",    "corr_se", "model_cov", "model_corr",
                         "pass"};
            bool all_ok = true;
            for (int i = 0; i < batch.m(); ++i)
                for (int j = 0; j < batch.m(); ++j) {
                    const double mc = model.entries(i, j);
                    const double denom = std::sqrt(model.entries(i, i) *
                                                   model.entries(j, j));
                    const double mcorr = denom > 0.0 ? mc / denom : 0.0;
                    const bool ok = std::abs(est.corr(i, j) - mcorr) <= 0.05;
                    all_ok = all_ok && ok;
                    ct.rows.push_back({std::to_string(i), std::to_string(j),
                                       fmt17(est.cov(i, j)), fmt17(est.cov_se(i, j)),
                                       fmt17(est.corr(i, j)), fmt17(est.corr_se(i, j)),
                                       fmt17(mc), fmt17(mcorr), ok ? "1" : "0"});
                }
            const std::string path = em.emit(tag + "_cov", ct);
            ctx.check(all_ok, path,
                      "empirical correlation deviates from the model by more "
                      "than 0.05");
        }
    }
}

// --------------------------------------------------------------------------
// verify-moments: exact vs asymptotic vs positive closed form vs Monte Carlo.

struct VerifyRow {
    Group g;
    int k = 2;
    bool same_state = true;
};

void run_verify_moments(const Options& o, RunContext& ctx) {
    const long d = resolve_dim(o, 8);
    Emitter em(o.out.empty() ? "verify_moments" : o.out, o.format,
               config_echo("verify-moments", o), ctx);

    const bool want_exact = o.mode == "all" || o.mode == "exact";
    const bool want_asym = o.mode == "all" || o.mode == "asymptotic";
    const bool want_lit = o.mode == "all" || o.mode == "literal";
    const bool want_mc = o.mode == "all" || o.mode == "mc";

    std::vector<VerifyRow> rows;
    if (o.order > 0 || !o.states.empty() || !o.group.empty()) {
        VerifyRow r;
        r.g = qgp::weingarten::group_from_string(o.group.empty() ? "unitary"
                                                                 : o.group);
        r.k = o.order > 0 ? o.order : 2;
        if (!o.states.empty()) {
            if (o.states == "same-state")
                r.same_state = true;
            else if (o.states == "orthogonal-states")
                r.same_state = false;
            else
                throw qgp::Error("states must be same-state or orthogonal-states");
        }
        rows = {r};
    } else {
        rows = {{Group::unitary, 2, true},    {Group::unitary, 3, true},
                {Group::unitary, 4, true},    {Group::orthogonal, 2, true},
                {Group::orthogonal, 4, true}, {Group::unitary, 2, false},
                {Group::orthogonal, 2, false}};
    }

    Table t;
    t.header = {"group", "k",  "states", "d",    "exact", "asymptotic",
                "literal", "mc",   "mc_se", "pass",  "notes"};
    bool all_ok = true;

    for (const auto& row : rows) {
        const int m = row.same_state ? 1 : row.k;
        if (!row.same_state && d < m)
            throw qgp::Error("orthogonal-states rows need d >= k");
        qgp::DatasetParams dp;
        dp.d = d;
        dp.m = m;
        const auto ds = qgp::make_dataset(qgp::DatasetKind::computational, dp, row.g);
        std::vector<int> assignment(static_cast<size_t>(row.k), 0);
        if (!row.same_state)
            for (int i = 0; i < row.k; ++i) assignment[static_cast<size_t>(i)] = i;

        std::string exact_s, asym_s, lit_s, mc_s, mcse_s, notes;
        double exact_v = 0.0, lit_v = 0.0, mc_v = 0.0, mc_se = 0.0;
        bool have_exact = false, have_mc = false;

        if (want_exact) {
            const auto table =
                qgp::weingarten::cached_table(row.g, row.k, d, o.cache_dir);
            qgp::weingarten::MomentSpec spec{assignment, &ds.inner};
            exact_v = qgp::to_double(qgp::weingarten::exact_moment(table, spec));
            exact_s = fmt17(exact_v);
            have_exact = true;
        }
        if (want_asym) {
            const auto cov = gp::covariance_matrix(
                ds.inner, d, row.g,
                row.same_state ? gp::CovMode::asymptotic
                               : gp::CovMode::asymptotic_orthogonal);
            asym_s = fmt17(gp::isserlis_moment(cov, assignment));
        }
        if (want_lit) {
            if (row.same_state) {
                lit_v = row.k % 2 == 1
                            ? 0.0
                            : stats::gaussian_reference(row.k) *
                                  std::pow((row.g == Group::orthogonal ? 2.0 : 1.0) /
                                               static_cast<double>(d),
                                           row.k / 2.0);
            } else {
                lit_v = gp::orthogonal_states_moment(row.k, d, row.g,
                                                     gp::SignMode::literal);
            }
            lit_s = fmt17(lit_v);
        }
        if (want_mc) {
            const auto obs = qgp::make_observable(observable_spec(o, d), row.g);
            const auto batch = sampler::sample_outputs(ds, obs, row.g,
                                                       sample_options(o));
            stats::MomentAccumulator acc(2);
            for (long s = 0; s < batch.n_samples(); ++s) {
                double prod = 1.0;
                for (int slot : assignment) prod *= batch.values(s, slot);
                acc.update(prod);
            }
            mc_v = acc.mean();
            mc_se = std::sqrt(acc.variance() / static_cast<double>(acc.count()));
            mc_s = fmt17(mc_v);
            mcse_s = fmt17(mc_se);
            have_mc = true;
        }

        if (want_lit && have_exact && lit_v * exact_v < 0.0)
            notes = "sign mismatch: positive closed form vs negative exact moment";

        bool ok = true;
        if (have_exact && have_mc) ok = std::abs(mc_v - exact_v) <= 4.0 * mc_se;
        all_ok = all_ok && ok;
        t.rows.push_back({qgp::weingarten::to_string(row.g), std::to_string(row.k),
                          row.same_state ? "same-state" : "orthogonal-states",
                          std::to_string(d), exact_s, asym_s, lit_s, mc_s, mcse_s,
                          ok ? "1" : "0", notes});
    }

    const std::string path = em.emit("", t);
    ctx.check(all_ok, path, "Monte Carlo moment outside 4 SE of the exact value");
}

// --------------------------------------------------------------------------
// predictive: posterior-vs-prior triviality over a (d, N) grid.

void run_predictive(const Options& o, RunContext& ctx) {
    Emitter em(o.out.empty() ? "predictive" : o.out, o.format,
               config_echo("predictive", o), ctx);
    const Group g = qgp::weingarten::group_from_string(
        o.group.empty() ? "unitary" : o.group);
    const auto kmode = o.mode == "exact" ? inference::KernelMode::exact
                                         : inference::KernelMode::asymptotic;
    const int m = 4;
    const double w = 0.5;  // pairwise squared overlap of the training states

    std::vector<std::pair<long, double>> grid;  // (d, shots)
    const long fixed_d = o.qubits > 0 || o.dim > 0 ? resolve_dim(o, 0) : 0;
    if (fixed_d > 0) {
        for (double shots : {10.0, 100.0, 1000.0}) grid.push_back({fixed_d, shots});
        grid.push_back({fixed_d, static_cast<double>(fixed_d)});
    } else {
        for (long dd : {1L << 10, 1L << 14, 1L << 18})
            for (double shots : {10.0, 100.0, 1000.0}) grid.push_back({dd, shots});
        // deliberately out of the polylog regime:
        grid.push_back({1L << 10, static_cast<double>(1L << 10)});
    }

    Table t;
    t.header = {"d",
                "shots",
                "m",
                "overlap",
                "prior_variance",
                "posterior_mean",
                "mean_shift_bound",
                "variance_reduction",
                "variance_reduction_bound",
                "relative_variance_reduction",
                "regime_ok",
                "pass"};
    bool all_ok = true;
    for (const auto& [dd, shots] : grid) {
        inference::GPModel gpm;
        gpm.covariance.entries = Eigen::MatrixXd(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                gpm.covariance.entries(i, j) =
                    inference::fidelity_kernel(i == j ? 1.0 : w, dd, g, kmode);
        gpm.covariance.provenance = kmode == inference::KernelMode::exact
                                        ? gp::CovMode::exact
                                        : gp::CovMode::asymptotic;
        gpm.noise_variance = 1.0 / shots;
        gpm.kernel_fn = [kmode](double overlap, long dim, Group grp) {
            return inference::fidelity_kernel(overlap, dim, grp, kmode);
        };

        Eigen::VectorXd y(m), cross(m);
        for (int i = 0; i < m; ++i) {
            y(i) = i % 2 == 0 ? 1.0 : -1.0;  // labels at the edge of the range
            cross(i) = gpm.kernel_fn(w, dd, g);
        }
        const double prior = gpm.kernel_fn(1.0, dd, g);
        const auto rep = inference::triviality_report(gpm, y, cross, prior, dd);

        // The operator-norm bounds must dominate the realized shifts.
        const bool ok = rep.mean_shift <= rep.mean_shift_bound * (1.0 + 1e-9) &&
                        rep.variance_reduction <=
                            rep.variance_reduction_bound * (1.0 + 1e-9);
        all_ok = all_ok && ok;
        t.rows.push_back({std::to_string(dd), fmt17(shots), std::to_string(m),
                          fmt17(w), fmt17(rep.posterior.prior_variance),
                          fmt17(rep.posterior.mean), fmt17(rep.mean_shift_bound),
                          fmt17(rep.variance_reduction),
                          fmt17(rep.variance_reduction_bound),
                          fmt17(rep.relative_variance_reduction),
                          rep.regime_ok ? "1" : "0", ok ? "1" : "0"});
    }
    const std::string path = em.emit("", t);
    ctx.check(all_ok, path, "posterior shift exceeded its operator-norm bound");
}

// --------------------------------------------------------------------------
// tails: empirical tail frequencies vs every bound kind.

void run_tails(const Options& o, RunContext& ctx) {
    const long d = resolve_dim(o, 64);
    const auto obs_spec = observable_spec(o, d);
    Emitter em(o.out.empty() ? "tails" : o.out, o.format, config_echo("tails", o),
               ctx);
    const Group g = qgp::weingarten::group_from_string(
        o.group.empty() ? "unitary" : o.group);
    const auto obs = qgp::make_observable(obs_spec, g);
    const double sigma = tails::output_sigma(d, g);

    qgp::DatasetParams dp;
    dp.d = d;
    dp.m = 1;
    const auto ds = qgp::make_dataset(qgp::DatasetKind::computational, dp, g);
    const auto batch = sampler::sample_outputs(ds, obs, g, sample_options(o));

    Table t;
    t.header = {"family", "kind", "d",      "c",       "t",     "y",
                "bound",  "log_bound", "literal", "empirical", "emp_se",
                "ci_low", "ci_high",   "pass",          "match_4se"};
    bool all_ok = true;

    auto push_row = [&](const std::string& family, const tails::TailBound& b,
                        double c, const std::string& t_s, const std::string& y_s,
                        const std::string& lit_s, const stats::TailFrequency& tf,
                        bool sound_required) {
        const bool sound = b.value >= tf.frequency - 4.0 * tf.se;
        const bool match = std::abs(b.value - tf.frequency) <= 4.0 * tf.se;
        if (sound_required) all_ok = all_ok && sound;
        t.rows.push_back({family, b.kind, std::to_string(d), fmt17(c), t_s, y_s,
                          fmt17(b.value), fmt17(b.log_value), lit_s,
                          fmt17(tf.frequency), fmt17(tf.se), fmt17(tf.ci_low),
                          fmt17(tf.ci_high), sound ? "1" : "0",
                          match ? "1" : "0"});
    };

    // Single-output bounds at c in sigma units.
    for (double mult : {2.0, 3.0, 4.0}) {
        const double c = mult * sigma;
        const auto tf = stats::tail_frequency(batch, 0, c);
        push_row("output", tails::make_gaussian_bound(c, sigma), c, "", "",
                 fmt17(tails::gaussian_tail_literal(c, d)), tf, true);
        push_row("output", tails::make_chebyshev_bound(c, sigma * sigma), c, "",
                 "", "", tf, true);
        for (int tdes : {2, 4, 6})
            push_row("output", tails::make_tdesign_bound(c, d, tdes), c,
                     std::to_string(tdes), "", "", tf, true);
    }

    // Parameter-shift gradient tails (unitary gate model).
    if (g == Group::unitary) {
        const auto grad = sampler::parameter_shift_gradient_samples(
            ds.states[0], obs, g, sample_options(o));
        const double sigma_g = 2.0 / std::sqrt(static_cast<double>(d));
        for (double mult : {4.0, 6.0}) {
            const double c = mult * sigma_g;
            const auto tf = stats::tail_frequency(grad, 0, c);
            push_row("gradient", tails::make_gradient_bound(c, d), c, "", "", "",
                     tf, true);
        }
    }

    // Loss deviations around the model mean y² + 1/d.
    if (g == Group::unitary) {
        for (const auto& [y, mult] : std::vector<std::pair<double, double>>{
                 {0.0, 10.0}, {0.5, 10.0}, {0.5, 30.0}}) {
            const double c = mult / static_cast<double>(d);
            const double model_mean = y * y + 1.0 / static_cast<double>(d);
            sampler::SampleBatch loss = batch;
            loss.state_labels = {"loss_deviation"};
            loss.values =
                ((batch.values.col(0).array() - y).square() - model_mean).matrix();
            const auto tf = stats::tail_frequency(loss, 0, c);
            push_row("loss", tails::make_loss_bound(c, y, d), c, "", fmt17(y), "",
                     tf, true);
        }
    }

    const std::string path = em.emit("", t);
    ctx.check(all_ok, path, "a bound fell below empirical frequency - 4 SE");
}

// --------------------------------------------------------------------------
// JSON config files: a flat object of flag-name → value (arrays allowed).
// The file is expanded into "--key=value" tokens before the regular parse, so
// explicit command-line flags always win and unknown keys fail the parse with
// the usual diagnostics.

std::vector<std::string> expand_config_args(std::vector<std::string> args) {
    std::string file;
    std::vector<std::string> out;
    out.reserve(args.size());
    for (size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size())
                throw qgp::Error("--config needs a file path");
            file = args[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            file = a.substr(std::string("--config=").size());
        } else {
            out.push_back(a);
        }
    }
    if (file.empty()) return out;

    std::ifstream in(file);
    if (!in) throw qgp::Error("cannot read config file: " + file);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw qgp::Error("malformed config file " + file + ": " + e.what());
    }
    if (!doc.is_object())
        throw qgp::Error("config file must hold a JSON object: " + file);

    const auto given = [&out](const std::string& flag) {
        return std::any_of(out.begin(), out.end(), [&flag](const std::string& t) {
            return t == flag || t.rfind(flag + "=", 0) == 0;
        });
    };
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string flag =
            it.key().rfind("--", 0) == 0 ? it.key() : "--" + it.key();
        if (flag == "--config")
            throw qgp::Error("config files cannot nest --config");
        if (given(flag)) continue;
        const auto push = [&out, &flag, &file](const nlohmann::json& v) {
            if (v.is_string())
                out.push_back(flag + "=" + v.get<std::string>());
            else if (v.is_number() || v.is_boolean())
                out.push_back(flag + "=" + v.dump());
            else
                throw qgp::Error("config value for " + flag +
                                 " must be a scalar or array of scalars: " + file);
        };
        if (it.value().is_array())
            for (const auto& v : it.value()) push(v);
        else
            push(it.value());
    }
    return out;
}

void add_common_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--group", o.group, "unitary, orthogonal, or both")
        ->envname("QGP_GROUP");
    cmd->add_option("--qubits", o.qubits, "qubit count (dimension 2^n)")
        ->envname("QGP_QUBITS");
    cmd->add_option("--dim", o.dim, "Hilbert-space dimension")->envname("QGP_DIM");
    cmd->add_option("--samples", o.samples, "Monte Carlo sample count")
        ->envname("QGP_SAMPLES")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "RNG seed")->envname("QGP_SEED");
    cmd->add_option("--order", o.order, "moment order k")->envname("QGP_ORDER");
    cmd->add_option("--states", o.states, "dataset/regime selector")
        ->envname("QGP_STATES");
    cmd->add_option("--observable", o.observable, "Pauli string, e.g. ZIII")
        ->envname("QGP_OBSERVABLE");
    cmd->add_option("--mode", o.mode,
                    "exact | asymptotic | literal | mc | all")
        ->envname("QGP_MODE");
    cmd->add_option("--out", o.out, "output path prefix")->envname("QGP_OUT");
    cmd->add_option("--format", o.format, "csv or json")
        ->envname("QGP_FORMAT")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", o.threads,
                    "sampler worker threads (0 = available parallelism)")
        ->envname("QGP_THREADS");
    cmd->add_option("--cache-dir", o.cache_dir,
                    "directory for persisted Weingarten tables")
        ->envname("QGP_CACHE_DIR");
    cmd->add_option("--bins", o.bins, "histogram bins")->envname("QGP_BINS");
    cmd->add_option("--config", o.config_path,
                    "JSON config file: flat object of flag names to values; "
                    "explicit flags take precedence");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Haar-random encoding moments, sampling, and concentration "
                 "bounds"};
    app.require_subcommand(1);

    Options od, oj, ov, op, ot;
    auto* dens = app.add_subcommand(
        "density", "single-output density, Gaussian overlay, moment ratios");
    add_common_options(dens, od);
    auto* jnt = app.add_subcommand(
        "joint", "two-output joint density and covariance for a state pair");
    add_common_options(jnt, oj);
    auto* ver = app.add_subcommand(
        "verify-moments", "exact vs asymptotic vs closed-form vs Monte Carlo");
    add_common_options(ver, ov);
    auto* pred = app.add_subcommand(
        "predictive", "posterior-vs-prior triviality over a (d, shots) grid");
    add_common_options(pred, op);
    auto* tl = app.add_subcommand(
        "tails", "tail bounds against empirical frequencies");
    add_common_options(tl, ot);

    try {
        auto args = expand_config_args({argv + 1, argv + argc});
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    RunContext ctx;
    std::string command;
    try {
        if (dens->parsed()) {
            command = "density";
            run_density(od, ctx);
        } else if (jnt->parsed()) {
            command = "joint";
            run_joint(oj, ctx);
        } else if (ver->parsed()) {
            command = "verify-moments";
            run_verify_moments(ov, ctx);
        } else if (pred->parsed()) {
            command = "predictive";
            run_predictive(op, ctx);
        } else if (tl->parsed()) {
            command = "tails";
            run_tails(ot, ctx);
        }
    } catch (const std::exception& e) {
        nlohmann::json out;
        out["command"] = command;
        out["status"] = "error";
        out["error"] = e.what();
        std::cout << out.dump() << std::endl;
        return 2;
    }

    nlohmann::json out;
    out["command"] = command;
    out["status"] = ctx.failures.empty() ? "ok" : "fail";
    out["artifacts"] = ctx.artifacts;
    out["failures"] = nlohmann::json::array();
    for (const auto& f : ctx.failures)
        out["failures"].push_back({{"where", f.where}, {"detail", f.detail}});
    std::cout << out.dump() << std::endl;
    return ctx.failures.empty() ? 0 : 1;
}

#include <adastable/cli.hpp>

#include <adastable/baselines.hpp>
#include <adastable/csv.hpp>
#include <adastable/error.hpp>
#include <adastable/hurst.hpp>
#include <adastable/io.hpp>
#include <adastable/tails.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <ostream>

namespace adastable {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kInput = 3, kDomain = 4 };

struct CommonOptions {
    std::string input;
    std::string format = "plain";
    std::string column;
    std::string transform = "none";
    std::string config;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_input) {
    auto* in = cmd->add_option("--input", o.input, "Series file");
    if (needs_input) in->required();
    cmd->add_option("--format", o.format, "plain (one value per line) or csv")
        ->check(CLI::IsMember({"plain", "csv"}));
    cmd->add_option("--column", o.column, "CSV column holding the series");
    cmd->add_option("--transform", o.transform, "none, log-returns or cumsum")
        ->check(CLI::IsMember({"none", "log-returns", "cumsum"}));
    cmd->add_option("--config", o.config, "Tracker configuration JSON");
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--seed", o.seed, "Random seed");
}

std::vector<double> load(const CommonOptions& o) {
    SeriesSpec spec;
    spec.path = o.input;
    spec.format = parse_series_format(o.format);
    spec.column = o.column;
    spec.transform = parse_series_transform(o.transform);
    return load_series(spec);
}

TrackerConfig config_of(const CommonOptions& o) {
    return o.config.empty() ? TrackerConfig{} : load_config(o.config);
}

fs::path output_path(const CommonOptions& o, const std::string& name) {
    fs::create_directories(o.out_dir);
    return fs::path(o.out_dir) / name;
}

void write_json(const fs::path& path, const json& doc) {
    write_file_atomic(path, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

json theta_json(const StableParams& th) {
    return {{"mu", th.mu}, {"sigma", th.sigma}, {"alpha", th.alpha}, {"beta", th.beta}};
}

std::span<const double> evaluation_window(std::span<const double> xs, std::size_t warmup) {
    if (xs.size() <= warmup) {
        throw DomainError("series of length " + std::to_string(xs.size()) + " is too short for warmup " +
                          std::to_string(warmup));
    }
    return xs.subspan(warmup);
}

struct StaticSummary {
    double mu;
    double sigma;
    double alpha;
};

StaticSummary static_fit(std::span<const double> xs, const TrackerConfig& cfg) {
    const AlphaTable table = build_alpha_table(cfg.powers.p1, cfg.powers.p2, cfg.alpha_min, cfg.alpha_max,
                                               cfg.alpha_step);
    StaticSummary s{};
    s.mu = estimate_mu(xs);
    s.alpha = estimate_alpha(xs, s.mu, table);
    s.sigma = estimate_sigma(xs, s.mu, s.alpha, cfg.powers.p_sigma);
    return s;
}

int run_track(const CommonOptions& o, const std::string& emit_config, std::ostream& out) {
    const TrackerConfig cfg = config_of(o);
    if (!emit_config.empty()) {
        const fs::path path(emit_config);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        write_json(path, config_to_json(cfg));
        if (o.input.empty()) return kOk;
    }
    if (o.input.empty()) throw InputError("track needs --input (or only --emit-config)");
    const std::vector<double> xs = load(o);
    const ParamTrack tr = MovingEstimator(cfg).track(xs);
    write_file_atomic(output_path(o, "track.csv"), [&](std::ostream& os) { write_track_csv(os, xs, tr); });
    json summary = {{"n", xs.size()},
                    {"start", tr.start},
                    {"evaluated", tr.size()},
                    {"mean_loglik", tr.mean_loglik},
                    {"final_theta", theta_json(tr.thetas.back())},
                    {"config", config_to_json(cfg)}};
    write_json(output_path(o, "summary.json"), summary);
    out << "track: " << tr.size() << " points, mean log-likelihood " << format_double(tr.mean_loglik) << '\n';
    return kOk;
}

int run_sweep(const CommonOptions& o, const std::string& alphas_text, bool with_static, std::ostream& out) {
    const TrackerConfig cfg = config_of(o);
    const std::vector<double> xs = load(o);
    const std::vector<double> alphas = parse_grid(alphas_text);
    const std::vector<SweepPoint> pts = sweep_fixed_alpha(xs, alphas, cfg);
    write_file_atomic(output_path(o, "sweep.csv"), [&](std::ostream& os) {
        os << "alpha,mean_loglik\n";
        for (const SweepPoint& p : pts) os << format_double(p.alpha) << ',' << format_double(p.mean_loglik) << '\n';
    });
    if (with_static) {
        const auto window = evaluation_window(xs, cfg.warmup);
        std::vector<StaticSigmaFit> fits;
        for (const double a : alphas) fits.push_back(fit_static_sigma_mle(window, a));
        write_file_atomic(output_path(o, "sweep_static.csv"), [&](std::ostream& os) {
            os << "alpha,sigma,mean_loglik\n";
            for (std::size_t i = 0; i < alphas.size(); ++i) {
                os << format_double(alphas[i]) << ',' << format_double(fits[i].sigma) << ','
                   << format_double(fits[i].mean_loglik) << '\n';
            }
        });
    }
    const auto best = std::max_element(pts.begin(), pts.end(), [](const SweepPoint& a, const SweepPoint& b) {
        return a.mean_loglik < b.mean_loglik;
    });
    out << "sweep: best alpha " << format_double(best->alpha) << ", mean log-likelihood "
        << format_double(best->mean_loglik) << '\n';
    return kOk;
}

int run_static(const CommonOptions& o, std::optional<double> mle_alpha, std::ostream& out) {
    const TrackerConfig cfg = config_of(o);
    const std::vector<double> xs = load(o);
    const StaticSummary s = static_fit(xs, cfg);
    const double a = mle_alpha.value_or(s.alpha);
    const StaticSigmaFit mle = fit_static_sigma_mle(evaluation_window(xs, cfg.warmup), a);
    json doc = {{"n", xs.size()},
                {"mu", s.mu},
                {"sigma", s.sigma},
                {"alpha", s.alpha},
                {"p_sigma", cfg.powers.p_sigma},
                {"p1", cfg.powers.p1},
                {"p2", cfg.powers.p2},
                {"mle",
                 {{"model", "static_sigma"},
                  {"alpha", a},
                  {"beta", 0.0},
                  {"sigma", mle.sigma},
                  {"mean_loglik", mle.mean_loglik},
                  {"evaluated", xs.size() - cfg.warmup}}}};
    write_json(output_path(o, "static.json"), doc);
    out << "static: mu " << format_double(s.mu) << ", sigma " << format_double(s.sigma) << ", alpha "
        << format_double(s.alpha) << '\n';
    return kOk;
}

int run_garch(const CommonOptions& o, std::ostream& out) {
    const TrackerConfig cfg = config_of(o);
    const std::vector<double> xs = load(o);
    const GarchFit fit = garch11_fit(xs, cfg.warmup);
    json doc = {{"model", "garch11"},
                {"params", {{"omega", fit.params.omega}, {"a", fit.params.a}, {"b", fit.params.b}}},
                {"mean_loglik", fit.mean_loglik},
                {"n", xs.size()},
                {"evaluated", xs.size() - cfg.warmup},
                {"converged", fit.converged},
                {"iterations", fit.iterations}};
    write_json(output_path(o, "garch.json"), doc);
    out << "garch: mean log-likelihood " << format_double(fit.mean_loglik) << '\n';
    return kOk;
}

int run_hurst(const CommonOptions& o, const std::string& qs_text, const std::string& taus_text, double q_track,
              bool with_gaussianize, std::ostream& out) {
    const TrackerConfig cfg = config_of(o);
    const std::vector<double> series = load(o);
    const std::vector<double> qs = parse_grid(qs_text);
    std::vector<std::size_t> taus;
    if (taus_text.empty()) {
        taus = default_taus(series.size());
    } else {
        for (const double t : parse_grid(taus_text)) {
            if (!(t >= 1.0) || t != std::floor(t)) throw InputError("lags must be positive integers");
            taus.push_back(static_cast<std::size_t>(t));
        }
    }
    const ScalingEstimate est = structure_function(series, qs, taus);
    write_file_atomic(output_path(o, "zeta.csv"), [&](std::ostream& os) { write_scaling_csv(os, est); });
    write_file_atomic(output_path(o, "structure.csv"), [&](std::ostream& os) { write_structure_csv(os, est); });

    // The tracker sees the increments of the analysed process.
    std::vector<double> increments(series.size() - 1);
    for (std::size_t i = 0; i + 1 < series.size(); ++i) increments[i] = series[i + 1] - series[i];
    const ParamTrack tr = MovingEstimator(cfg).track(increments);
    const auto hs = adaptive_hurst(tr, q_track);
    double h_sum = 0.0;
    std::size_t h_count = 0;
    write_file_atomic(output_path(o, "hurst_t.csv"), [&](std::ostream& os) {
        os << "t,alpha,H\n";
        for (std::size_t i = 0; i < tr.size(); ++i) {
            os << tr.start + i << ',' << format_double(tr.thetas[i].alpha) << ',';
            if (hs[i]) os << format_double(*hs[i]);
            os << '\n';
        }
    });
    for (const auto& h : hs) {
        if (h) {
            h_sum += *h;
            ++h_count;
        }
    }
    json doc = {{"n", series.size()}, {"q", q_track}, {"defined", h_count}};
    doc["mean_H"] = h_count ? json(h_sum / static_cast<double>(h_count)) : json(nullptr);
    json scaling = json::array();
    for (std::size_t i = 0; i < qs.size(); ++i) {
        json row = {{"q", qs[i]}, {"diagnostic", est.diagnostics[i]}};
        row["zeta"] = std::isfinite(est.zeta[i]) ? json(est.zeta[i]) : json(nullptr);
        row["r2"] = std::isfinite(est.r2[i]) ? json(est.r2[i]) : json(nullptr);
        scaling.push_back(row);
    }
    doc["scaling"] = scaling;
    if (with_gaussianize) {
        const std::vector<double> g = gaussianize(increments, tr);
        write_file_atomic(output_path(o, "gaussianized.csv"), [&](std::ostream& os) {
            os << "t,x,g\n";
            for (std::size_t i = 0; i < g.size(); ++i) {
                os << tr.start + i << ',' << format_double(increments[tr.start + i]) << ',' << format_double(g[i])
                   << '\n';
            }
        });
        doc["jarque_bera"] = jarque_bera(g);
    }
    write_json(output_path(o, "hurst.json"), doc);
    out << "hurst: " << qs.size() << " moment orders over " << taus.size() << " lags\n";
    return kOk;
}

int run_tails(const CommonOptions& o, const std::string& ks_text, const std::string& alphas_text,
              const std::string& normalization, double extreme_k, std::ostream& out) {
    const TrackerConfig cfg = config_of(o);
    const std::vector<double> xs = load(o);
    ParamTrack tr;
    if (normalization == "static") {
        const StaticSummary s = static_fit(xs, cfg);
        tr = constant_track({s.mu, s.sigma, s.alpha, 0.0}, xs);
    } else {
        tr = MovingEstimator(cfg).track(xs);
    }
    const TailCurve curve = exceedance_curve(xs, tr, parse_grid(ks_text), parse_grid(alphas_text));
    write_file_atomic(output_path(o, "tails.csv"), [&](std::ostream& os) { write_tail_csv(os, curve); });
    const ExtremeCount c = count_extreme(xs, tr, extreme_k);
    json doc = {{"k", extreme_k},   {"left", c.left},  {"right", c.right},
                {"total", c.total()}, {"n", tr.size()}, {"normalization", normalization}};
    write_json(output_path(o, "extremes.json"), doc);
    out << "tails: " << c.total() << " residuals beyond " << format_double(extreme_k) << '\n';
    return kOk;
}

int run_table(const CommonOptions& o, std::ostream& out) {
    const TrackerConfig cfg = config_of(o);
    const AlphaTable table = build_alpha_table(cfg.powers.p1, cfg.powers.p2, cfg.alpha_min, cfg.alpha_max,
                                               cfg.alpha_step);
    write_file_atomic(output_path(o, "alpha_table.csv"), [&](std::ostream& os) { table.write_csv(os); });
    out << "table: " << table.alphas().size() << " rows\n";
    return kOk;
}

int run_simulate(const CommonOptions& o, const StableParams& theta, std::size_t n, const std::string& name,
                 std::ostream& out) {
    theta.validate();
    const std::vector<double> xs = sample_stable(theta, n, o.seed);
    write_file_atomic(output_path(o, name), [&](std::ostream& os) {
        for (const double x : xs) os << format_double(x) << '\n';
    });
    out << "simulate: " << n << " values\n";
    return kOk;
}

void report(std::ostream& err, const char* kind, const std::string& message, std::size_t line = 0) {
    json doc = {{"error", kind}, {"message", message}};
    if (line) doc["line"] = line;
    err << doc.dump() << '\n';
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive stable-distribution tracking of heavy-tailed series", "adastable"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string emit_config;
    std::string alphas = "1.0:2.0:0.05";
    std::string tail_alphas = "1.5,1.7,1.9,1.95,2.0";
    std::string qs = "0.25,0.5,1";
    std::string taus;
    std::string ks = "1:10:1";
    std::string normalization = "track";
    double q_track = 0.5;
    double extreme_k = 10.0;
    bool with_static = false;
    bool with_gaussianize = false;
    std::optional<double> mle_alpha;
    StableParams sim{0.0, 1.0, 1.5, 0.0};
    std::size_t sim_n = 10000;
    std::string sim_name = "series.txt";

    auto* track_cmd = app.add_subcommand("track", "Adaptive tracking; writes track.csv and summary.json");
    add_common(track_cmd, common, false);
    track_cmd->add_option("--emit-config", emit_config, "Write the effective configuration JSON here");

    auto* sweep_cmd = app.add_subcommand("sweep", "Fixed-alpha evaluation grid; writes sweep.csv");
    add_common(sweep_cmd, common, true);
    sweep_cmd->add_option("--alphas", alphas, "start:stop:step or comma list");
    sweep_cmd->add_flag("--static", with_static, "Also fit one static scale per alpha (sweep_static.csv)");

    auto* static_cmd = app.add_subcommand("static", "Whole-sample estimates and static scale fit; static.json");
    add_common(static_cmd, common, true);
    static_cmd->add_option("--alpha", mle_alpha, "Stability for the static scale fit (default: estimate)");

    auto* garch_cmd = app.add_subcommand("garch", "GARCH(1,1) fit; writes garch.json");
    add_common(garch_cmd, common, true);

    auto* hurst_cmd = app.add_subcommand("hurst", "Scaling exponents of a process-level series");
    add_common(hurst_cmd, common, true);
    hurst_cmd->add_option("--qs", qs, "Moment orders");
    hurst_cmd->add_option("--taus", taus, "Lags (default: powers of two up to n/10)");
    hurst_cmd->add_option("--q", q_track, "Moment order for the tracked Hurst exponent");
    hurst_cmd->add_flag("--gaussianize", with_gaussianize, "Write gaussianized increments");

    auto* tails_cmd = app.add_subcommand("tails", "Tail exceedance curves and extreme counts");
    add_common(tails_cmd, common, true);
    tails_cmd->add_option("--ks", ks, "Thresholds in scale units");
    tails_cmd->add_option("--alphas", tail_alphas, "Reference stabilities for model curves");
    tails_cmd->add_option("--normalization", normalization, "track or static")
        ->check(CLI::IsMember({"track", "static"}));
    tails_cmd->add_option("--extreme-k", extreme_k, "Threshold for the extreme-event count");

    auto* table_cmd = app.add_subcommand("table", "Export the alpha lookup table; alpha_table.csv");
    add_common(table_cmd, common, false);

    auto* sim_cmd = app.add_subcommand("simulate", "Write i.i.d. stable samples, one per line");
    add_common(sim_cmd, common, false);
    sim_cmd->add_option("--mu", sim.mu);
    sim_cmd->add_option("--sigma", sim.sigma);
    sim_cmd->add_option("--alpha", sim.alpha);
    sim_cmd->add_option("--beta", sim.beta);
    sim_cmd->add_option("--n", sim_n);
    sim_cmd->add_option("--name", sim_name, "Output file name inside --out");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        if (!rev.empty()) rev.pop_back();  // program name
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        report(err, "usage", e.what());
        return kUsage;
    }

    try {
        if (track_cmd->parsed()) return run_track(common, emit_config, out);
        if (sweep_cmd->parsed()) return run_sweep(common, alphas, with_static, out);
        if (static_cmd->parsed()) return run_static(common, mle_alpha, out);
        if (garch_cmd->parsed()) return run_garch(common, out);
        if (hurst_cmd->parsed()) return run_hurst(common, qs, taus, q_track, with_gaussianize, out);
        if (tails_cmd->parsed()) return run_tails(common, ks, tail_alphas, normalization, extreme_k, out);
        if (table_cmd->parsed()) return run_table(common, out);
        if (sim_cmd->parsed()) return run_simulate(common, sim, sim_n, sim_name, out);
    } catch (const InputError& e) {
        report(err, "input", e.what(), e.line());
        return kInput;
    } catch (const StepError& e) {
        report(err, "input", e.what());
        return kInput;
    } catch (const DomainError& e) {
        report(err, "domain", e.what());
        return kDomain;
    } catch (const DegenerateSampleError& e) {
        report(err, "degenerate", e.what());
        return kDomain;
    } catch (const AccuracyError& e) {
        report(err, "accuracy", e.what());
        return kFailure;
    } catch (const fs::filesystem_error& e) {
        report(err, "io", e.what());
        return kInput;
    } catch (const std::exception& e) {
        report(err, "internal", e.what());
        return kFailure;
    }
    report(err, "usage", "no subcommand given");
    return kUsage;
}

}  // namespace adastable

#include "rmt/cli.hpp"

#include "CLI11.hpp"
#include "rmt/cleaning.hpp"
#include "rmt/dynamics.hpp"
#include "rmt/estimators.hpp"
#include "rmt/io.hpp"
#include "rmt/portfolio.hpp"
#include "rmt/rsvd.hpp"
#include "rmt/spectra.hpp"
#include "rmt/spikes.hpp"
#include "rmt/synth.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace rmt {

namespace {

std::string fmt(double x) { return format_double(x, 12); }

std::vector<double> parse_list(const std::string& s, const std::string& field) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (item.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument(field + ": invalid number '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(field + ": empty list");
    return out;
}

/// Appends `--key value` for config entries whose flag is not already on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::set<std::string> given;
    for (const auto& a : args)
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                                         : a.find('=') - 2));
    for (const auto& [key, value] : read_key_value_lines(is, "config " + path)) {
        if (given.count(key)) continue;
        if (value == "true") {
            args.push_back("--" + key);
        } else if (value != "false") {
            args.push_back("--" + key);
            args.push_back(value);
        }
    }
    return args;
}

/// Writes to --out when given, else to the command's stream.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}
    std::ostream& stream() { return buf_; }
    void commit() {
        if (path_.empty()) {
            fallback_ << buf_.str();
            return;
        }
        std::ofstream os(path_, std::ios::binary);
        if (!os) throw std::invalid_argument("out: cannot open '" + path_ + "' for writing");
        os << buf_.str();
    }

private:
    std::string path_;
    std::ostream& fallback_;
    std::ostringstream buf_;
};

ReturnPanel load_panel(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("input: cannot open '" + path + "'");
    // Leading '#' lines carry metadata of panels written to stdout.
    std::ostringstream rest;
    std::string line;
    bool data = false;
    while (std::getline(is, line)) {
        if (!data && !line.empty() && line[0] == '#') continue;
        data = true;
        rest << line << '\n';
    }
    std::istringstream body(rest.str());
    return read_panel_csv(body, path);
}

std::string law_list() { return "mp, wigner, ewma, powerlaw, dressed, elliptic, rsvd"; }

struct SpectrumArgs {
    std::string law = "mp";
    double q = 0.5, variance = 1.0, alpha = 0.35, n = 0.25, m = 0.25;
    std::optional<double> mu;  // 2 for the power-law prior, 4 for elliptic
    std::size_t points = 2000;
};

SpectralDensity compute_spectrum(const SpectrumArgs& a, Metadata& meta) {
    SpectralOptions opt;
    opt.points = a.points;
    const double mu = a.mu.value_or(a.law == "elliptic" ? 4.0 : 2.0);
    meta.emplace_back("law", a.law);
    if (a.law == "mp") {
        meta.emplace_back("q", fmt(a.q));
        return mp_density(a.q, a.points);
    }
    if (a.law == "wigner") {
        meta.emplace_back("variance", fmt(a.variance));
        return wigner_density(a.variance, a.points);
    }
    if (a.law == "ewma") {
        meta.emplace_back("q", fmt(a.q));
        return ewma_density(a.q, opt);
    }
    if (a.law == "powerlaw") {
        meta.emplace_back("alpha", fmt(a.alpha));
        meta.emplace_back("mu", fmt(mu));
        return powerlaw_prior_density({a.alpha, mu}, opt);
    }
    if (a.law == "dressed") {
        meta.emplace_back("alpha", fmt(a.alpha));
        meta.emplace_back("mu", fmt(mu));
        meta.emplace_back("q", fmt(a.q));
        return dressed_spectrum(powerlaw_prior_density({a.alpha, mu}, opt), a.q, opt);
    }
    if (a.law == "elliptic") {
        meta.emplace_back("q", fmt(a.q));
        meta.emplace_back("mu", fmt(mu));
        return elliptic_student_density({a.q, mu}, opt);
    }
    if (a.law == "rsvd") {
        meta.emplace_back("n", fmt(a.n));
        meta.emplace_back("m", fmt(a.m));
        return rsvd_benchmark(a.n, a.m, a.points);
    }
    throw std::invalid_argument("law: unknown value '" + a.law + "' (" + law_list() + ")");
}

TrueCorrelationSpec make_spec(const std::string& kind, long long N, double rho, const std::string& spikes,
                              double alpha, double mu_c) {
    TrueCorrelationSpec s;
    s.N = N;
    if (kind == "identity") {
        s.kind = TrueCorrelationKind::Identity;
    } else if (kind == "spike") {
        s.kind = TrueCorrelationKind::SingleSpike;
        s.rho = rho;
    } else if (kind == "multispike") {
        s.kind = TrueCorrelationKind::MultiSpike;
        s.spikes = parse_list(spikes, "spikes");
    } else if (kind == "powerlaw") {
        s.kind = TrueCorrelationKind::PowerLaw;
        s.alpha = alpha;
        s.mu = mu_c;
    } else {
        throw std::invalid_argument("spec: unknown value '" + kind + "' (identity, spike, multispike, powerlaw)");
    }
    s.validate();
    return s;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random-matrix tools for large correlation matrices", "rmt"};
    app.require_subcommand(1);
    std::string out_path, format = "csv";
    auto add_common = [&](CLI::App* c) {
        c->add_option("--out", out_path, "Output file (default: standard output)");
        c->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "text"}));
    };

    // spectrum
    SpectrumArgs sa;
    auto* spectrum = app.add_subcommand("spectrum", "Asymptotic eigenvalue or singular-value density");
    spectrum->add_option("--law", sa.law, "One of: " + law_list());
    spectrum->add_option("--q", sa.q, "N/T (or N*epsilon for ewma)")->check(CLI::PositiveNumber);
    spectrum->add_option("--variance", sa.variance, "Wigner variance")->check(CLI::PositiveNumber);
    spectrum->add_option("--alpha", sa.alpha, "Power-law prior lower edge");
    spectrum->add_option("--mu", sa.mu, "Tail exponent (default 2, elliptic 4)");
    spectrum->add_option("--n", sa.n, "N/T for rsvd");
    spectrum->add_option("--m", sa.m, "M/T for rsvd");
    spectrum->add_option("--points", sa.points, "Grid points")->check(CLI::Range(16, 1000000));
    add_common(spectrum);

    // clean
    std::string input, scheme_name = "clip";
    double alpha = 0.5, mu = 2.0;
    bool renorm = false;
    auto* cleancmd = app.add_subcommand("clean", "Clean the Pearson matrix of a panel");
    cleancmd->add_option("--input", input, "Panel CSV")->required();
    cleancmd->add_option("--scheme", scheme_name, "clip, powerlaw, shrink or ledoit");
    cleancmd->add_option("--alpha", alpha, "Cleaning parameter in [0, 1]");
    cleancmd->add_option("--mu", mu, "Power-law exponent (powerlaw scheme)");
    cleancmd->add_flag("--renormalize-diagonal", renorm, "Rescale the clipped matrix to unit diagonal");
    add_common(cleancmd);

    // backtest
    std::string alphas_text, predictor = "returns", test = "risk";
    int window = 1000, horizon = 99, step = 100;
    std::uint64_t seed = 0;
    auto* bt = app.add_subcommand("backtest", "Rolling Markowitz backtest of a cleaning scheme");
    bt->add_option("--input", input, "Panel CSV")->required();
    bt->add_option("--scheme", scheme_name, "clip, powerlaw, shrink or ledoit");
    bt->add_option("--alpha", alpha, "Single cleaning parameter");
    bt->add_option("--alphas", alphas_text, "Comma-separated list of cleaning parameters");
    bt->add_option("--mu", mu, "Power-law exponent (powerlaw scheme)");
    bt->add_option("--window", window, "Estimation window (days)")->check(CLI::Range(2, 1 << 30));
    bt->add_option("--horizon", horizon, "Out-of-sample horizon (days)")->check(CLI::Range(1, 1 << 30));
    bt->add_option("--step", step, "Days between rebalances")->check(CLI::Range(1, 1 << 30));
    bt->add_option("--predictor", predictor, "returns or random")->check(CLI::IsMember({"returns", "random"}));
    auto* bt_seed = bt->add_option("--seed", seed, "Seed (random predictor)");
    bt->add_option("--test", test, "risk or residual")->check(CLI::IsMember({"risk", "residual"}));
    add_common(bt);

    // svd
    std::string xpath, ypath;
    double buffer = kSvdBuffer;
    auto* svd = app.add_subcommand("svd", "Cross-correlation singular values against the random null band");
    svd->add_option("--x", xpath, "Input panel CSV (predictors)")->required();
    svd->add_option("--y", ypath, "Output panel CSV")->required();
    svd->add_option("--buffer", buffer, "Edge-scale multiplier for significance")->check(CLI::NonNegativeNumber);
    add_common(svd);

    // simulate
    std::string spec_kind = "identity", spikes_text, dist = "gaussian";
    long long N = 100, T = 500;
    double rho = 0.0, mu_c = 2.0, mu_student = 4.0;
    bool standardize_out = false;
    auto* sim = app.add_subcommand("simulate", "Synthetic return panel");
    sim->add_option("--spec", spec_kind, "identity, spike, multispike or powerlaw");
    sim->add_option("--rho", rho, "Common correlation (spike)");
    sim->add_option("--spikes", spikes_text, "Comma-separated spike eigenvalues (multispike)");
    sim->add_option("--alpha", alpha, "Power-law lower edge (powerlaw)");
    sim->add_option("--mu-c", mu_c, "Power-law tail exponent (powerlaw)");
    sim->add_option("--N", N, "Assets")->check(CLI::Range(1LL, 1LL << 20));
    sim->add_option("--T", T, "Days")->check(CLI::Range(2LL, 1LL << 30));
    sim->add_option("--seed", seed, "Seed")->required();
    sim->add_option("--dist", dist, "gaussian or student")->check(CLI::IsMember({"gaussian", "student"}));
    sim->add_option("--mu", mu_student, "Student tail index (student)");
    sim->add_flag("--standardize", standardize_out, "Standardize columns (always on for student)");
    add_common(sim);

    // dynamics
    double epsilon = 0.02, lambda1 = 10.0, lambda_b = 1.0;
    std::string taus_text;
    bool non_overlapping = false;
    auto* dyn = app.add_subcommand("dynamics", "Top-eigenpair tracking and variograms");
    dyn->add_option("--input", input, "Panel CSV (otherwise a stationary panel is simulated)");
    dyn->add_option("--epsilon", epsilon, "EWMA parameter")->check(CLI::Range(1e-12, 1.0 - 1e-12));
    dyn->add_option("--lambda1", lambda1, "Top true eigenvalue (simulation)")->check(CLI::PositiveNumber);
    dyn->add_option("--lambda-b", lambda_b, "Bulk true eigenvalue (simulation)")->check(CLI::PositiveNumber);
    dyn->add_option("--N", N, "Assets (simulation)")->check(CLI::Range(2LL, 1LL << 20));
    dyn->add_option("--T", T, "Days (simulation)")->check(CLI::Range(2LL, 1LL << 30));
    auto* dyn_seed = dyn->add_option("--seed", seed, "Seed (simulation)");
    dyn->add_option("--taus", taus_text, "Comma-separated lags (default: 0.5..5 over epsilon)");
    dyn->add_flag("--non-overlapping", non_overlapping, "Average over non-overlapping pairs");
    add_common(dyn);

    // spikes
    double u = 3.0;
    auto* sp = app.add_subcommand("spikes", "Outlier eigenvalues of a panel's Pearson matrix");
    sp->add_option("--input", input, "Panel CSV")->required();
    sp->add_option("--u", u, "Threshold in edge-fluctuation units");
    add_common(sp);

    try {
        std::vector<std::string> args = merge_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        Output output(out_path, out);
        std::ostream& os = output.stream();
        if (spectrum->parsed()) {
            Metadata meta{{"command", "spectrum"}};
            const SpectralDensity d = compute_spectrum(sa, meta);
            write_density_csv(os, d, meta);
        } else if (cleancmd->parsed()) {
            const ReturnPanel p = standardize(load_panel(input));
            CleaningScheme s{parse_cleaning_kind(scheme_name), alpha, mu, renorm};
            const CorrelationMatrix c = clean(pearson(p), s);
            write_matrix_csv(os, c.values(), c.asset_ids(),
                             {{"command", "clean"},
                              {"scheme", scheme_name},
                              {"alpha", fmt(alpha)},
                              {"trace", fmt(c.trace())}});
        } else if (bt->parsed()) {
            const ReturnPanel p = load_panel(input);
            BacktestOptions opt;
            opt.window = window;
            opt.horizon = horizon;
            opt.step = step;
            opt.predictor = predictor == "random" ? Predictor::Random : Predictor::Returns;
            if (opt.predictor == Predictor::Random && bt_seed->count() == 0)
                throw std::invalid_argument("seed: required for the random predictor");
            opt.seed = seed;
            const CleaningKind kind = parse_cleaning_kind(scheme_name);
            const std::vector<double> alphas =
                alphas_text.empty() ? std::vector<double>{alpha} : parse_list(alphas_text, "alphas");
            Metadata meta{{"command", "backtest"}, {"window", std::to_string(window)},
                          {"horizon", std::to_string(horizon)}, {"step", std::to_string(step)},
                          {"predictor", predictor}};
            if (opt.predictor == Predictor::Random) {
                meta.emplace_back("seed", std::to_string(seed));
                meta.emplace_back("generator", Rng::kAlgorithm);
            }
            write_metadata(os, meta, "# ");
            if (test == "risk") {
                os << "alpha,scheme,in_risk,out_risk,dates\n";
                for (const auto& r : backtest(p, kind, alphas, opt, mu))
                    os << fmt(r.alpha) << ',' << to_string(kind) << ',' << fmt(r.risk.in_sample) << ','
                       << fmt(r.risk.out_of_sample) << ',' << r.dates << '\n';
            } else {
                os << "alpha,scheme,in_res,out_res,ratio,dates\n";
                for (double a : alphas) {
                    const ResidualReport r = residual_test(p, {kind, a, mu}, opt);
                    os << fmt(a) << ',' << to_string(kind) << ',' << fmt(r.in_res) << ',' << fmt(r.out_res)
                       << ',' << fmt(r.ratio) << ',' << r.dates << '\n';
                }
            }
        } else if (svd->parsed()) {
            const WhiteningResult wx = normalize_principal_components(standardize(load_panel(xpath)));
            const WhiteningResult wy = normalize_principal_components(standardize(load_panel(ypath)));
            for (const auto& w : wx.warnings) err << "warning: x: " << w << '\n';
            for (const auto& w : wy.warnings) err << "warning: y: " << w << '\n';
            const CrossCorrelationResult r = cross_singulars(wx.components, wy.components, buffer);
            if (format == "text") {
                os << "null_band = " << fmt(r.null_band.first) << ' ' << fmt(r.null_band.second) << '\n'
                   << "edge_scale = " << fmt(r.edge_scale) << '\n'
                   << "threshold = " << fmt(r.threshold) << '\n'
                   << "significant_count = " << r.significant_count << '\n';
                for (Eigen::Index k = 0; k < r.singular_values.size(); ++k)
                    os << "singular " << k + 1 << ' ' << fmt(r.singular_values(k))
                       << (r.singular_values(k) > r.threshold ? " significant" : "") << '\n';
            } else {
                write_metadata(os,
                               {{"command", "svd"},
                                {"null_band_low", fmt(r.null_band.first)},
                                {"null_band_high", fmt(r.null_band.second)},
                                {"edge_scale", fmt(r.edge_scale)},
                                {"threshold", fmt(r.threshold)},
                                {"significant_count", std::to_string(r.significant_count)}},
                               "# ");
                os << "rank,singular_value,significant\n";
                for (Eigen::Index k = 0; k < r.singular_values.size(); ++k)
                    os << k + 1 << ',' << fmt(r.singular_values(k)) << ','
                       << (r.singular_values(k) > r.threshold ? 1 : 0) << '\n';
            }
        } else if (sim->parsed()) {
            const TrueCorrelationSpec spec = make_spec(spec_kind, N, rho, spikes_text, alpha, mu_c);
            Rng root(seed);
            Rng rc = root.split(1), rp = root.split(2);
            const CorrelationMatrix C = build_true_correlation(spec, rc.engine()());
            ReturnPanel p = dist == "student" ? student_panel(C, mu_student, T, rp)
                                              : gaussian_panel(C, T, rp);
            if (standardize_out && dist == "gaussian") p = standardize(p);
            Metadata meta{{"command", "simulate"},   {"spec", spec.describe()},
                          {"T", std::to_string(T)},  {"dist", dist},
                          {"seed", std::to_string(seed)}, {"generator", Rng::kAlgorithm}};
            if (dist == "student") meta.emplace_back("mu", fmt(mu_student));
            if (out_path.empty()) {
                write_metadata(os, meta, "# ");
                write_panel_csv(os, p);
            } else {
                write_panel_file(out_path, p, meta);
                return 0;
            }
        } else if (dyn->parsed()) {
            ReturnPanel p;
            Eigen::VectorXd ref;
            Metadata meta{{"command", "dynamics"}, {"epsilon", fmt(epsilon)}};
            if (!input.empty()) {
                p = standardize(load_panel(input));
                const CorrelationMatrix E = pearson(p);
                ref = E.eigenvectors().col(0);
                lambda1 = E.eigenvalues()(0);
                lambda_b = (E.trace() - lambda1) / static_cast<double>(E.size() - 1);
                meta.emplace_back("input", input);
            } else {
                if (dyn_seed->count() == 0) throw std::invalid_argument("seed: required when simulating");
                if (!(lambda1 > lambda_b)) throw std::invalid_argument("lambda1: must exceed lambda-b");
                Eigen::VectorXd diag = Eigen::VectorXd::Constant(N, lambda_b);
                diag(0) = lambda1;
                p = gaussian_panel(CorrelationMatrix(Eigen::MatrixXd(diag.asDiagonal())), T, seed);
                ref = Eigen::VectorXd::Unit(N, 0);
                meta.emplace_back("seed", std::to_string(seed));
                meta.emplace_back("generator", Rng::kAlgorithm);
                meta.emplace_back("N", std::to_string(N));
                meta.emplace_back("T", std::to_string(T));
            }
            meta.emplace_back("lambda1", fmt(lambda1));
            meta.emplace_back("lambda_b", fmt(lambda_b));
            const EigenTrack tr = track_top(p, epsilon, ref);
            std::vector<long long> lags;
            if (taus_text.empty()) {
                for (double f : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) lags.push_back(std::llround(f / epsilon));
            } else {
                for (double t : parse_list(taus_text, "taus")) lags.push_back(std::llround(t));
            }
            const Variograms emp = empirical_variogram(tr, lags, non_overlapping);
            const Variograms th = theoretical_variograms(lambda1, lambda_b, epsilon, emp.tau);
            const NonStationarityReport ns = detect_nonstationarity(tr);
            meta.emplace_back("nonstationarity_ratio", fmt(ns.ratio));
            meta.emplace_back("nonstationary", ns.fired ? "true" : "false");
            write_metadata(os, meta, "# ");
            os << "tau,value,vector,value_theory,vector_theory\n";
            for (std::size_t k = 0; k < emp.tau.size(); ++k)
                os << fmt(emp.tau[k]) << ',' << fmt(emp.value[k]) << ',' << fmt(emp.vector[k]) << ','
                   << fmt(th.value[k]) << ',' << fmt(th.vector[k]) << '\n';
        } else if (sp->parsed()) {
            const ReturnPanel p = standardize(load_panel(input));
            const double q = static_cast<double>(p.N()) / static_cast<double>(p.T());
            const SpikeReport r = detect_spikes(pearson(p), q, u);
            os << "q = " << fmt(q) << '\n'
               << "lambda_plus = " << fmt(r.edge.lambda_plus) << '\n'
               << "edge_scale = " << fmt(r.edge.scale()) << '\n'
               << "threshold = " << fmt(r.threshold) << '\n'
               << "outliers = " << r.outliers.size() << '\n'
               << "note = " << SpikeReport::kOverlapNote << '\n';
            for (const auto& o : r.outliers)
                os << "outlier rank=" << o.index + 1 << " lambda=" << fmt(o.lambda)
                   << " implied_Lambda=" << fmt(o.implied_Lambda) << " overlap_heuristic=" << fmt(o.overlap)
                   << '\n';
        }
        output.commit();
        return 0;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace rmt

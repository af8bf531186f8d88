// robound: command-line front end for the bounds and evaluation library.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 data error.

#include "robound/robound.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace robound;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string spec_path;
    std::string grid_path;
    std::string shape;
    std::string out;
    std::string svg;
    std::string p = "inf";
    double eps = 0.15;
    std::optional<double> kappa;
    std::string kappa_range;
    double tau = kDefaultBoundaryTolerance;
    bool tau_sensitivity = false;
    std::string classifier = "bayes";
    double rho = kDefaultFlipRate;
    std::uint64_t seed = 0;
    std::size_t m = 100;
    std::size_t trials = 20;
    std::string m_list = "10,100,1000";
    std::string mode = "exact";
    std::string save_classifier;
    std::size_t dim = 2;
    double phi_max = 0.0;
    std::size_t phi_steps = 20;
};

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::KappaOutOfRange:
        case ErrorCode::UnsupportedNorm:
        case ErrorCode::ModeUnsupported:
        case ErrorCode::DimUnsupported:
        case ErrorCode::Io:
            return kExitUsage;
        default:
            return kExitData;
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + " '" + s + "'");
    }
}

std::vector<double> kappa_values(const Config& cfg) {
    if (cfg.kappa && !cfg.kappa_range.empty()) throw UsageError("give either --kappa or --kappa-range");
    std::vector<double> out;
    if (!cfg.kappa_range.empty()) {
        const auto parts = split(cfg.kappa_range, ':');
        if (parts.size() != 3) throw UsageError("--kappa-range expects LO:HI:STEP");
        const double lo = to_double(parts[0], "kappa"), hi = to_double(parts[1], "kappa");
        const double step = to_double(parts[2], "kappa step");
        if (!(step > 0.0) || hi < lo) throw UsageError("--kappa-range needs LO <= HI and STEP > 0");
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    } else {
        out.push_back(cfg.kappa.value_or(0.1));
    }
    for (double k : out) check_kappa(k);
    return out;
}

VicinityKernel kernel_of(const Config& cfg, std::size_t dim) {
    if (!(cfg.eps > 0.0)) throw UsageError("--eps must be positive");
    Norm p;
    try {
        p = parse_norm(cfg.p);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return make_kernel(p, cfg.eps, dim);
}

GridDistribution load_distribution(const Config& cfg) {
    if (cfg.spec_path.empty() == cfg.grid_path.empty()) throw UsageError("give exactly one of --spec or --grid");
    if (!cfg.grid_path.empty()) {
        if (!fs::exists(cfg.grid_path)) throw Error(ErrorCode::Io, "grid file '" + cfg.grid_path + "' not found");
        return io::read_grid(cfg.grid_path);
    }
    if (!fs::exists(cfg.spec_path)) throw Error(ErrorCode::Io, "spec file '" + cfg.spec_path + "' not found");
    auto spec = io::read_spec(cfg.spec_path);
    if (!cfg.shape.empty()) {
        std::vector<std::size_t> shape;
        for (const auto& s : split(cfg.shape, 'x')) shape.push_back(static_cast<std::size_t>(to_double(s, "shape")));
        spec.shape = shape;
    }
    return build_distribution(spec);
}

Classifier load_classifier(const Config& cfg, const GridDistribution& dist, const VicinityKernel& kernel) {
    if (cfg.classifier == "bayes") return make_bayes_classifier(dist);
    if (cfg.classifier == "smoothed") return make_smoothed_bayes_classifier(dist, kernel);
    if (cfg.classifier == "noisy") return make_noisy_classifier(dist, cfg.rho, cfg.seed);
    if (!fs::exists(cfg.classifier)) {
        throw UsageError("--classifier must be bayes, smoothed, noisy or an existing file, got '" + cfg.classifier + "'");
    }
    return Classifier(io::read_classifier(cfg.classifier));
}

fs::path with_extension(const std::string& path, const char* ext) {
    fs::path p(path);
    p.replace_extension(ext);
    return p;
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        io::write_text(path, text);
        std::cout << "wrote " << path << '\n';
    }
}

// ---------------------------------------------------------------------------

int cmd_dist_build(const Config& cfg) {
    if (cfg.out.empty()) throw UsageError("dist build needs --out");
    const auto dist = load_distribution(cfg);
    io::write_grid(dist, cfg.out);
    std::printf("grid %s cells=%zu classes=%zu mass=%.6f bayes_error=%.6f\n", cfg.out.c_str(), dist.num_cells(),
                dist.num_classes(), dist.total_mass(), bayes_error(dist));
    return kExitOk;
}

int cmd_bound(const Config& cfg) {
    const auto kappas = kappa_values(cfg);
    const auto dist = load_distribution(cfg);
    const auto kernel = kernel_of(cfg, dist.geometry().dim());
    const auto report = kappa_sweep(dist, kernel, kappas, cfg.tau);

    std::printf("%8s %10s %10s %10s %10s %10s\n", "kappa", "eps_down", "b_a", "b_d", "b_p", "prob_acc");
    for (const auto& e : report.entries) {
        std::printf("%8.4f %10.6f %10.6f %10.6f %10.6f %10.6f\n", e.kappa, e.shrunk_eps, e.bayes_error, e.det_error,
                    e.prob_error, e.prob_acc_bound());
    }
    if (cfg.tau_sensitivity) {
        std::printf("tau sensitivity of b_d:");
        for (double t : {1e-9, 1e-6, 1e-3}) std::printf("  tau=%g b_d=%.6f", t, det_robust_bayes_error(dist, kernel, t));
        std::printf("\n");
    }

    if (kappas.size() == 1) {
        if (!cfg.out.empty()) write_or_print(cfg.out, io::bounds_to_json(report));
        return kExitOk;
    }
    write_or_print(cfg.out, io::sweep_to_csv(report));
    std::string svg_path = cfg.svg;
    if (svg_path.empty() && !cfg.out.empty()) svg_path = with_extension(cfg.out, ".svg").string();
    if (!svg_path.empty()) {
        svg::Plot plot;
        plot.title = "probabilistic robust accuracy bound";
        plot.x_label = "kappa";
        plot.y_label = "accuracy bound";
        svg::Series s{"1 - b_p(kappa)", {}, {}};
        for (const auto& e : report.entries) {
            s.x.push_back(e.kappa);
            s.y.push_back(e.prob_acc_bound());
        }
        plot.series.push_back(std::move(s));
        io::write_text(svg_path, svg::render(plot));
        std::cout << "wrote " << svg_path << '\n';
    }
    return kExitOk;
}

MuMode mode_of(const Config& cfg) {
    if (cfg.mode == "exact") return ExactGridMode{};
    if (cfg.mode == "mc") return MonteCarloMode{cfg.m, cfg.seed};
    throw UsageError("--mode must be exact or mc");
}

int cmd_eval(const Config& cfg) {
    const auto kappas = kappa_values(cfg);
    if (kappas.size() != 1) throw UsageError("eval takes a single --kappa");
    const double kappa = kappas.front();
    const auto dist = load_distribution(cfg);
    const auto kernel = kernel_of(cfg, dist.geometry().dim());
    const auto h = load_classifier(cfg, dist, kernel);
    const auto report = evaluate(h, dist, kernel, kappa, mode_of(cfg));
    const auto bound = prob_robust_upper_bound(dist, kernel, kappa, cfg.tau);

    std::printf("classifier %s  eps=%g p=%s kappa=%g\n", to_string(h.kind()).c_str(), cfg.eps, cfg.p.c_str(), kappa);
    std::printf("%-8s %10s %10s %10s\n", "measure", "accuracy", "bound", "gap");
    std::printf("%-8s %10.6f %10.6f %10.6f\n", "vanilla", report.vanilla_acc, bound.vanilla_acc_bound(),
                bound.vanilla_acc_bound() - report.vanilla_acc);
    if (report.det_robust_acc) {
        std::printf("%-8s %10.6f %10.6f %10.6f\n", "det", *report.det_robust_acc, bound.det_acc_bound(),
                    bound.det_acc_bound() - *report.det_robust_acc);
    }
    std::printf("%-8s %10.6f %10.6f %10.6f", "prob", report.prob_robust_acc, bound.prob_acc_bound(),
                bound.prob_acc_bound() - report.prob_robust_acc);
    if (report.prob_robust_stderr > 0.0) std::printf("  (stderr %.2e)", report.prob_robust_stderr);
    std::printf("\n");

    if (!cfg.out.empty()) write_or_print(cfg.out, io::report_to_json(report));
    if (!cfg.save_classifier.empty()) {
        io::write_classifier(materialize(h, dist.geometry()), cfg.save_classifier);
        std::cout << "wrote " << cfg.save_classifier << '\n';
    }
    return kExitOk;
}

int cmd_vote_compare(const Config& cfg) {
    const auto kappas = kappa_values(cfg);
    if (kappas.size() != 1) throw UsageError("vote-compare takes a single --kappa");
    if (cfg.trials == 0) throw UsageError("--trials must be positive");
    const auto dist = load_distribution(cfg);
    const auto kernel = kernel_of(cfg, dist.geometry().dim());
    const auto h = load_classifier(cfg, dist, kernel);
    std::vector<std::uint64_t> seeds;
    for (std::size_t t = 0; t < cfg.trials; ++t) seeds.push_back(derive_seed(cfg.seed, t));
    const auto cmp = compare_voting(h, dist, kernel, kappas.front(), cfg.m, seeds);

    std::ostringstream table;
    table.precision(10);
    table << "seed,inner_prob_acc,voting_prob_acc,delta\n";
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        table << cmp.seeds[i] << ',' << cmp.inner_prob_acc << ',' << cmp.voting_prob_acc[i] << ',' << cmp.deltas[i]
              << '\n';
    }
    write_or_print(cfg.out, table.str());
    std::printf("mean delta %.6f  95%% interval [%.6f, %.6f] over %zu seeds (m=%zu)\n", cmp.mean_delta, cmp.ci_low,
                cmp.ci_high, seeds.size(), cfg.m);
    return kExitOk;
}

int cmd_sample_study(const Config& cfg) {
    const auto kappas = kappa_values(cfg);
    if (kappas.size() != 1) throw UsageError("sample-study takes a single --kappa");
    std::vector<std::size_t> ms;
    for (const auto& s : split(cfg.m_list, ',')) {
        const double v = to_double(s, "m");
        if (!(v >= 1.0) || v != std::floor(v)) throw UsageError("--m-list entries must be positive integers");
        ms.push_back(static_cast<std::size_t>(v));
    }
    const auto dist = load_distribution(cfg);
    const auto kernel = kernel_of(cfg, dist.geometry().dim());
    const auto h = load_classifier(cfg, dist, kernel);
    const auto rows = sample_size_study(h, dist, kernel, kappas.front(), ms, cfg.trials, cfg.seed);

    std::ostringstream table;
    table.precision(10);
    table << "m,mean,std\n";
    for (const auto& r : rows) table << r.m << ',' << r.mean << ',' << r.stddev << '\n';
    write_or_print(cfg.out, table.str());

    std::string svg_path = cfg.svg;
    if (svg_path.empty() && !cfg.out.empty()) svg_path = with_extension(cfg.out, ".svg").string();
    if (!svg_path.empty()) {
        svg::Plot plot;
        plot.title = "voting classifier accuracy vs sample size";
        plot.x_label = "m";
        plot.y_label = "prob. robust accuracy";
        plot.log_x = true;
        svg::Series mean{"mean", {}, {}};
        svg::Series lo{"mean - std", {}, {}, "#aaaaaa"};
        svg::Series hi{"mean + std", {}, {}, "#aaaaaa"};
        for (const auto& r : rows) {
            const double x = static_cast<double>(r.m);
            mean.x.push_back(x);
            mean.y.push_back(r.mean);
            lo.x.push_back(x);
            lo.y.push_back(r.mean - r.stddev);
            hi.x.push_back(x);
            hi.y.push_back(r.mean + r.stddev);
        }
        plot.series = {mean, lo, hi};
        io::write_text(svg_path, svg::render(plot));
        std::cout << "wrote " << svg_path << '\n';
    }
    return kExitOk;
}

int cmd_geom(const Config& cfg) {
    if (cfg.dim < 1 || cfg.dim > 3) throw UsageError("--dim must be 1, 2 or 3");
    const auto kernel = kernel_of(cfg, cfg.dim);
    const double phi_max = cfg.phi_max > 0.0 ? cfg.phi_max : 2.0 * cfg.eps;
    if (cfg.phi_steps < 1) throw UsageError("--phi-steps must be positive");

    std::vector<double> phis;
    for (std::size_t i = 0; i <= cfg.phi_steps; ++i) {
        phis.push_back(phi_max * static_cast<double>(i) / static_cast<double>(cfg.phi_steps));
    }
    const auto rows = overlap_profile(kernel, phis);
    std::ostringstream table;
    table.precision(10);
    table << "phi,overlap,max_mu_change\n";
    for (const auto& r : rows) table << r.phi << ',' << r.min_overlap << ',' << r.max_mu_change << '\n';
    write_or_print(cfg.out, table.str());

    int failed = 0;
    const auto verdict = [&](bool ok, const std::string& what) {
        std::printf("%s  %s\n", ok ? "PASS" : "FAIL", what.c_str());
        if (!ok) ++failed;
    };

    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].min_overlap <= rows[i - 1].min_overlap + 1e-9;
    verdict(monotone, "overlap profile is non-increasing in phi");

    if (kernel.p == Norm::Linf) {
        double worst = 0.0;
        for (int i = 1; i <= 9; ++i) {
            const double kappa = 0.05 * i;
            const double closed = cfg.eps * (1.0 - std::pow(2.0 * kappa, 1.0 / static_cast<double>(cfg.dim)));
            worst = std::max(worst, std::abs(solve_shrink_numeric(kernel, kappa) - closed) / cfg.eps);
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, "shrunken radius numeric vs closed form, max rel. diff %.2e < 1e-6", worst);
        verdict(worst < 1e-6, buf);
    }
    if (cfg.dim == 1 || cfg.dim == 2) {
        const double b = directional_derivative_bound(kernel);
        char buf[160];
        if (cfg.dim == 1) {
            std::snprintf(buf, sizeof buf, "directional derivative bound %.6f = 1/(2 eps)", b);
            verdict(std::abs(b - 1.0 / (2.0 * cfg.eps)) < 1e-12, buf);
        } else {
            // the initial slope of the worst overlap loss cannot exceed the bound
            const double dphi = 1e-3 * cfg.eps;
            const double slope = max_mu_change(kernel, dphi) / dphi;
            std::snprintf(buf, sizeof buf, "directional derivative bound %.6f >= initial overlap-loss slope %.6f", b, slope);
            verdict(slope <= b * 1.02, buf);
        }
    }
    if (cfg.kappa) {
        check_kappa(*cfg.kappa);
        const double d = min_adv_distance(kernel, *cfg.kappa);
        const double per_axis = cfg.eps * (1.0 - std::pow(2.0 * *cfg.kappa, 1.0 / static_cast<double>(cfg.dim)));
        std::printf("min adversarial distance %.6f (Euclidean), shrunken radius %.6f (per axis)\n", d,
                    kernel.p == Norm::Linf ? per_axis : solve_shrink_numeric(kernel, *cfg.kappa));
        if (kernel.p == Norm::Linf) {
            verdict(d <= std::sqrt(static_cast<double>(cfg.dim)) * per_axis + 1e-9,
                    "min adversarial distance <= sqrt(n) x per-axis radius");
        }
    }
    return failed == 0 ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------

void add_input(CLI::App* app, Config& cfg) {
    app->add_option("--spec", cfg.spec_path, "distribution spec (JSON)");
    app->add_option("--grid", cfg.grid_path, "pre-built grid distribution (JSON)");
    app->add_option("--shape", cfg.shape, "grid shape override, e.g. 400x250");
}

void add_kernel(CLI::App* app, Config& cfg) {
    app->add_option("--p", cfg.p, "vicinity norm: 1, 2 or inf")->capture_default_str();
    app->add_option("--eps", cfg.eps, "vicinity radius")->capture_default_str();
}

void add_classifier(CLI::App* app, Config& cfg) {
    app->add_option("--classifier", cfg.classifier, "bayes, smoothed, noisy, or a classifier file")->capture_default_str();
    app->add_option("--rho", cfg.rho, "flip rate of the noisy classifier")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robound: robustness bounds and classifier evaluation on gridded distributions"};
    app.require_subcommand(1);
    Config cfg;
    int (*command)(const Config&) = nullptr;

    auto* dist = app.add_subcommand("dist", "distribution utilities");
    dist->require_subcommand(1);
    auto* build = dist->add_subcommand("build", "build a grid distribution from a spec; prints mass and Bayes error");
    add_input(build, cfg);
    build->add_option("--out", cfg.out, "output grid file")->required();
    build->callback([&] { command = cmd_dist_build; });

    auto* bound = app.add_subcommand("bound",
                                     "Bayes error b_a, deterministic b_d and probabilistic b_p(kappa) bounds.\n"
                                     "One kappa: JSON report to --out. Sweep: CSV (kappa,acc_bound) to --out "
                                     "plus an SVG plot next to it");
    add_input(bound, cfg);
    add_kernel(bound, cfg);
    bound->add_option("--kappa", cfg.kappa, "tolerance in [0, 0.5)");
    bound->add_option("--kappa-range", cfg.kappa_range, "sweep LO:HI:STEP");
    bound->add_option("--tau", cfg.tau, "boundary-region posterior slack")->capture_default_str();
    bound->add_flag("--tau-sensitivity", cfg.tau_sensitivity, "also report b_d for tau in {1e-9, 1e-6, 1e-3}");
    bound->add_option("--out", cfg.out, "output file");
    bound->add_option("--svg", cfg.svg, "plot file for sweeps");
    bound->callback([&] { command = cmd_bound; });

    auto* eval = app.add_subcommand("eval",
                                    "vanilla, deterministic and probabilistic robust accuracy next to the bounds.\n"
                                    "Report JSON fields: vanilla_acc, det_robust_acc, prob_robust_acc, "
                                    "prob_robust_stderr, kappa, eps, p, mode");
    add_input(eval, cfg);
    add_kernel(eval, cfg);
    add_classifier(eval, cfg);
    eval->add_option("--kappa", cfg.kappa, "tolerance in [0, 0.5)");
    eval->add_option("--mode", cfg.mode, "exact or mc")->capture_default_str();
    eval->add_option("--m", cfg.m, "Monte-Carlo samples per point")->capture_default_str();
    eval->add_option("--seed", cfg.seed, "seed for the noisy classifier and Monte Carlo")->capture_default_str();
    eval->add_option("--tau", cfg.tau, "boundary-region posterior slack")->capture_default_str();
    eval->add_option("--out", cfg.out, "report JSON");
    eval->add_option("--save-classifier", cfg.save_classifier, "write the evaluated classifier");
    eval->callback([&] { command = cmd_eval; });

    auto* vote = app.add_subcommand("vote-compare",
                                    "prob. robust accuracy of a classifier and its majority-vote wrapper.\n"
                                    "CSV columns: seed, inner_prob_acc, voting_prob_acc, delta");
    add_input(vote, cfg);
    add_kernel(vote, cfg);
    add_classifier(vote, cfg);
    vote->add_option("--kappa", cfg.kappa, "tolerance in [0, 0.5)");
    vote->add_option("--m", cfg.m, "vicinity samples per vote")->capture_default_str();
    vote->add_option("--trials", cfg.trials, "number of voting seeds")->capture_default_str();
    vote->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    vote->add_option("--out", cfg.out, "CSV output");
    vote->callback([&] { command = cmd_vote_compare; });

    auto* study = app.add_subcommand("sample-study",
                                     "spread of the voting classifier's accuracy over trials per sample size.\n"
                                     "CSV columns: m, mean, std");
    add_input(study, cfg);
    add_kernel(study, cfg);
    add_classifier(study, cfg);
    study->add_option("--kappa", cfg.kappa, "tolerance in [0, 0.5)");
    study->add_option("--m-list", cfg.m_list, "comma-separated ascending sample sizes")->capture_default_str();
    study->add_option("--trials", cfg.trials, "trials per sample size")->capture_default_str();
    study->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    study->add_option("--out", cfg.out, "CSV output");
    study->add_option("--svg", cfg.svg, "plot file");
    study->callback([&] { command = cmd_sample_study; });

    auto* geom = app.add_subcommand("geom",
                                    "overlap profile (CSV columns: phi, overlap, max_mu_change) and geometry checks");
    add_kernel(geom, cfg);
    geom->add_option("--dim", cfg.dim, "dimension n")->capture_default_str();
    geom->add_option("--kappa", cfg.kappa, "also report the minimum adversarial distance");
    geom->add_option("--phi-max", cfg.phi_max, "largest shift (default 2 eps)");
    geom->add_option("--phi-steps", cfg.phi_steps, "profile intervals")->capture_default_str();
    geom->add_option("--out", cfg.out, "CSV output");
    geom->callback([&] { command = cmd_geom; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        return command(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const MonotonicityViolationError& e) {
        std::cerr << "error: " << e.what() << " (kappa " << e.kappa_lo() << " -> " << e.kappa_hi() << ")\n";
        return kExitData;
    } catch (const DomainTooSmallError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}

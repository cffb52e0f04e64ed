// mfsign: experiment driver for sign statistics of Fourier coefficient
// tables.  Subcommands:
//
//   gen       build or extend the coefficient cache
//   signs     sign densities at primes, per residue class
//   satotate  distribution of normalized eigenvalues against the
//             semicircle law, with restriction to progressions
//   density   sign counting over all integers in a progression,
//             with density estimators, twisted partial sums, and
//             error-term checkpoints
//   fit       power-law fit of an emitted checkpoint file
//   report    run the full battery and write a manifest
//
// Exit codes: 0 success, 2 configuration error, 3 assertion failure
// (a machine-readable record is printed to stderr), 4 missing cache.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfsign/mfsign.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mfsign;

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::string form = "delta-preimage";  // built-in preset or a form file path
    std::int64_t t = 1;
    std::int64_t q = 5;
    std::vector<std::int64_t> d;          // empty: every unit class mod q
    std::int64_t X = 10000;               // integer counting bound
    std::int64_t x_max = 10000;           // prime cutoff
    std::int64_t T = 10000;               // cache truncation for gen
    std::vector<double> delta_grid;
    std::vector<std::int64_t> checkpoints;  // empty: geometric default
    std::uint64_t seed = 1;
    std::string out = ".";
    std::string cache = "cache";
};

// fold a representative into [0, q) and check it is a unit
static std::int64_t fold_class(std::int64_t d, std::int64_t q) {
    std::int64_t r = ((d % q) + q) % q;
    if (std::gcd(r == 0 ? q : r, q) != 1)
        throw std::domain_error("class " + std::to_string(d) + " is not a unit mod " +
                                std::to_string(q));
    return r;
}

static std::vector<std::int64_t> effective_classes(const ExperimentConfig& cfg) {
    std::vector<std::int64_t> out;
    if (!cfg.d.empty()) {
        for (std::int64_t d : cfg.d) out.push_back(fold_class(d, cfg.q));
    } else if (cfg.q == 1) {
        out.push_back(0);
    } else {
        for (std::int64_t d = 1; d < cfg.q; ++d)
            if (std::gcd(d, cfg.q) == 1) out.push_back(d);
    }
    return out;
}

static std::vector<std::int64_t> effective_checkpoints(const ExperimentConfig& cfg,
                                                       std::int64_t X) {
    if (!cfg.checkpoints.empty()) {
        for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
            if (cfg.checkpoints[i] < 1 || cfg.checkpoints[i] > X)
                throw std::domain_error("checkpoint " + std::to_string(cfg.checkpoints[i]) +
                                        " outside [1, X]");
            if (i > 0 && cfg.checkpoints[i] <= cfg.checkpoints[i - 1])
                throw std::domain_error("checkpoints must be strictly increasing");
        }
        return cfg.checkpoints;
    }
    // two decades below X, eleven geometric points
    std::vector<std::int64_t> out;
    for (int i = 0; i <= 10; ++i) {
        double x = static_cast<double>(X) * std::pow(10.0, -2.0 * (10 - i) / 10.0);
        auto v = static_cast<std::int64_t>(std::llround(x));
        if (v < 1) v = 1;
        if (v > X) v = X;
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    return out;
}

static std::string join_int_list(const std::vector<std::int64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

static std::string join_double_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += report::format_double(v[i]);
    }
    return out;
}

// the effective configuration, echoed into every report
static report::ConfigEcho config_echo(const ExperimentConfig& cfg, const std::string& cmd) {
    return {
        {"cmd", cmd},
        {"form", cfg.form},
        {"t", std::to_string(cfg.t)},
        {"q", std::to_string(cfg.q)},
        {"d", join_int_list(effective_classes(cfg))},
        {"X", std::to_string(cfg.X)},
        {"xmax", std::to_string(cfg.x_max)},
        {"T", std::to_string(cfg.T)},
        {"delta-grid", join_double_list(cfg.delta_grid)},
        {"checkpoints", join_int_list(cfg.checkpoints)},
        {"seed", std::to_string(cfg.seed)},
    };
}

// ---------------------------------------------------------------------------
// form sources
// ---------------------------------------------------------------------------

struct Experiment {
    shimura::LiftedForm A;           // eigenvalue table of the lifted form
    chars::DirichletCharacter chi;   // nebentypus of the source form
    std::int64_t N = 4;              // level of the source form
    int k = 6;                       // source weight is k + 1/2
    std::int64_t t = 1;
};

static fs::path builtin_cache_path(const ExperimentConfig& cfg) {
    return fs::path(cfg.cache) / "delta-preimage.qcache";
}

// Load the configured form and produce an eigenvalue table covering [1, T].
// The built-in preset reads the cache; a file-backed form is lifted directly.
static Experiment load_experiment(const ExperimentConfig& cfg, std::int64_t T) {
    Experiment e;
    if (cfg.form == "delta-preimage") {
        if (cfg.t != 1)
            throw std::domain_error("the delta-preimage preset is supported at t = 1 only");
        auto path = builtin_cache_path(cfg);
        auto [series, head] = qseries::load_cache(path);
        if (head.constructor != "delta")
            throw cache_mismatch(path.string() + ": expected a delta cache, found '" +
                                 head.constructor + "'");
        if (series.max_exponent() < T)
            throw cache_missing(path.string() + " covers T = " +
                                std::to_string(series.max_exponent()) + ", need T >= " +
                                std::to_string(T));
        e.A = shimura::delta_lifted(series);
        e.chi = chars::principal(4);
        e.N = 4;
        e.k = 6;
        e.t = 1;
    } else {
        if (!fs::exists(cfg.form))
            throw std::domain_error("no such form file: " + cfg.form +
                                    " (or use the built-in 'delta-preimage')");
        auto f = halfint::load_form(fs::path(cfg.form));
        e.A = shimura::lift(f, cfg.t, T);
        e.chi = f.nebentypus;
        e.N = f.level;
        e.k = f.k;
        e.t = cfg.t;
    }
    return e;
}

static density::SignFunction experiment_signs(const Experiment& e, std::int64_t T) {
    auto a = shimura::invert_lift(e.A, e.chi, e.N, e.k, T);
    return density::sign_function(a, e.chi, e.N, e.t);
}

// ---------------------------------------------------------------------------
// output helpers
// ---------------------------------------------------------------------------

static std::string write_report(const fs::path& out_dir, const std::string& name,
                                const std::string& content) {
    fs::create_directories(out_dir);
    fs::path p = out_dir / name;
    textio::write_file_atomic(p, content);
    std::cout << "wrote " << p.string() << "\n";
    return p.string();
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

static int run_gen(const ExperimentConfig& cfg) {
    if (cfg.T < 10) throw std::domain_error("gen: T must be >= 10");
    if (cfg.form != "delta-preimage") {
        // file-backed forms carry their own coefficients; just validate them
        if (!fs::exists(cfg.form))
            throw std::domain_error("no such form file: " + cfg.form);
        halfint::load_form(fs::path(cfg.form));
        std::cout << "form file is self-contained; no cache needed\n";
        return 0;
    }
    auto path = builtin_cache_path(cfg);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec)
        throw std::domain_error("gen: cannot create cache directory '" +
                                path.parent_path().string() + "': " + ec.message());

    if (fs::exists(path)) {
        auto [old_series, head] = qseries::load_cache(path);  // verifies the checksum
        if (old_series.max_exponent() >= cfg.T) {
            std::cout << "cache valid (T = " << old_series.max_exponent()
                      << "): " << path.string() << "\n";
            return 0;
        }
        // extend: recompute and require the old coefficients to reappear
        auto fresh = qseries::delta(cfg.T);
        for (std::int64_t i = 0; i <= head.trunc; ++i)
            if (fresh.c[static_cast<std::size_t>(i)] != old_series.c[static_cast<std::size_t>(i)])
                throw cache_mismatch(path.string() + ": extension disagrees at index " +
                                     std::to_string(i));
        qseries::save_cache(path, fresh, "delta", "-");
        std::cout << "cache extended to T = " << cfg.T << ": " << path.string() << "\n";
        return 0;
    }
    auto series = qseries::delta(cfg.T);
    qseries::save_cache(path, series, "delta", "-");
    std::cout << "cache written (T = " << cfg.T << "): " << path.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// signs
// ---------------------------------------------------------------------------

static int run_signs(const ExperimentConfig& cfg) {
    if (cfg.x_max < 1000) throw std::domain_error("signs: x_max must be >= 1000");
    auto e = load_experiment(cfg, cfg.x_max);
    auto f = experiment_signs(e, cfg.x_max);

    // signs at primes coprime to the level
    auto primes = arith::sieve_primes(cfg.x_max);
    std::vector<std::pair<std::int64_t, int>> prime_signs;
    prime_signs.reserve(primes.primes.size());
    for (std::int64_t p : primes.primes)
        if (std::gcd(p, e.N) == 1) prime_signs.emplace_back(p, f.at(p));

    report::CsvReport csv({"q", "d", "x_max", "class_primes", "total_primes", "positive",
                           "negative", "zero", "pos_ratio_class", "neg_ratio_class",
                           "zero_ratio_class", "pos_ratio_all", "neg_ratio_all"});
    for (std::int64_t d : effective_classes(cfg)) {
        auto rep = satotate::prime_sign_densities(prime_signs, d, cfg.q, cfg.x_max);
        if (!rep) continue;  // no primes in this class at this cutoff
        csv.add_row({std::to_string(rep->q), std::to_string(rep->d), std::to_string(rep->x),
                     std::to_string(rep->class_primes), std::to_string(rep->total_primes),
                     std::to_string(rep->positive), std::to_string(rep->negative),
                     std::to_string(rep->zero), report::format_double(rep->pos_ratio_class),
                     report::format_double(rep->neg_ratio_class),
                     report::format_double(rep->zero_ratio_class),
                     report::format_double(rep->pos_ratio_all),
                     report::format_double(rep->neg_ratio_all)});
        std::cout << "signs: d = " << rep->d << " mod " << rep->q << ": +"
                  << report::format_double(rep->pos_ratio_class) << " / -"
                  << report::format_double(rep->neg_ratio_class) << " over "
                  << rep->class_primes << " primes (zero " << rep->zero << ")\n";
    }
    write_report(cfg.out, "signs.csv", csv.render(config_echo(cfg, "signs")));
    return 0;
}

// ---------------------------------------------------------------------------
// satotate
// ---------------------------------------------------------------------------

static int run_satotate(const ExperimentConfig& cfg) {
    if (cfg.x_max < 1000) throw std::domain_error("satotate: x_max must be >= 1000");
    auto e = load_experiment(cfg, cfg.x_max);
    auto B = shimura::normalized_eigenvalues(e.A, e.chi, e.k, cfg.x_max);

    std::vector<satotate::Restriction> restrictions = {satotate::Restriction::everything()};
    if (cfg.q > 1)
        for (std::int64_t d : effective_classes(cfg))
            restrictions.push_back(satotate::Restriction::progression(d, cfg.q));

    report::CsvReport stats({"restriction", "x_max", "count", "expected_share",
                             "actual_share", "ks_distance", "chi_square"});
    report::CsvReport hist({"restriction", "a", "b", "count", "empirical", "predicted"});

    double total = static_cast<double>(B.table.size());
    for (const auto& r : restrictions) {
        auto s = satotate::restricted_sample(B, r, cfg.x_max);
        if (!s) continue;
        double share = total > 0 ? static_cast<double>(s->sample.size()) / total : 0.0;
        stats.add_row({r.label(), std::to_string(s->x_max),
                       std::to_string(s->sample.size()),
                       report::format_double(r.expected_share()),
                       report::format_double(share),
                       report::format_double(s->ks_distance),
                       report::format_double(s->chi_square)});
        for (const auto& row : s->interval_table)
            hist.add_row({r.label(), report::format_double(row.a),
                          report::format_double(row.b), std::to_string(row.count),
                          report::format_double(row.empirical),
                          report::format_double(row.predicted)});
        std::cout << "satotate: " << r.label() << ": n = " << s->sample.size()
                  << " KS = " << report::format_double(s->ks_distance)
                  << " chi2 = " << report::format_double(s->chi_square) << "\n";
    }
    auto echo = config_echo(cfg, "satotate");
    write_report(cfg.out, "satotate_stats.csv", stats.render(echo));
    write_report(cfg.out, "satotate_hist.csv", hist.render(echo));
    return 0;
}

// ---------------------------------------------------------------------------
// density
// ---------------------------------------------------------------------------

// |positive - negative| restricted to a class, sampled at the checkpoints
static std::vector<std::pair<std::int64_t, double>> class_error_checkpoints(
    const density::SignFunction& f, std::int64_t q, std::int64_t d,
    const std::vector<std::int64_t>& cps) {
    std::vector<std::pair<std::int64_t, double>> out;
    std::int64_t pos = 0, neg = 0;
    std::size_t next = 0;
    for (std::int64_t n = 1; n <= cps.back() && next < cps.size(); ++n) {
        if (n % q == d % q && std::gcd(n, f.N) == 1) {
            int s = f.at(n);
            if (s > 0) ++pos;
            if (s < 0) ++neg;
        }
        if (n == cps[next]) {
            out.emplace_back(n, static_cast<double>(std::llabs(pos - neg)));
            ++next;
        }
    }
    return out;
}

static int run_density(const ExperimentConfig& cfg) {
    if (cfg.X < 1000) throw std::domain_error("density: X must be >= 1000");
    density::validate_delta_grid(cfg.delta_grid);
    auto cps = effective_checkpoints(cfg, cfg.X);
    auto e = load_experiment(cfg, cfg.X);
    auto f = experiment_signs(e, cfg.X);
    auto echo = config_echo(cfg, "density");

    report::CsvReport csv({"q", "d", "X", "positive", "negative", "zero", "out_of_class",
                           "nonzero", "pos_ratio", "neg_ratio", "radius", "diff_quotient",
                           "sum_quotient"});
    report::CsvReport dd({"d", "delta", "estimate", "tail_bound"});
    auto classes = effective_classes(cfg);
    for (std::int64_t d : classes) {
        auto rep = density::main_theorem_experiment(f, cfg.q, d, cfg.X, cfg.delta_grid);
        csv.add_row({std::to_string(rep.q), std::to_string(rep.d), std::to_string(rep.X),
                     std::to_string(rep.positive), std::to_string(rep.negative),
                     std::to_string(rep.zero), std::to_string(rep.out_of_class),
                     std::to_string(rep.nonzero), report::format_double(rep.pos_ratio),
                     report::format_double(rep.neg_ratio), report::format_double(rep.radius),
                     report::format_double(rep.diff_quotient),
                     report::format_double(rep.sum_quotient)});
        for (const auto& est : rep.dd)
            dd.add_row({std::to_string(rep.d), report::format_double(est.delta),
                        report::format_double(est.estimate),
                        report::format_double(est.tail_bound)});
        std::cout << "density: d = " << rep.d << " mod " << rep.q << ": P = " << rep.positive
                  << " N = " << rep.negative << " zero = " << rep.zero
                  << " pos_ratio = " << report::format_double(rep.pos_ratio) << "\n";

        report::CsvReport cp({"x", "E"});
        for (auto [x, err] : class_error_checkpoints(f, cfg.q, d, cps))
            cp.add_row({std::to_string(x), report::format_double(err)});
        write_report(cfg.out, "checkpoints_d" + std::to_string(rep.d) + ".csv",
                     cp.render(echo));
    }
    write_report(cfg.out, "density.csv", csv.render(echo));
    if (!cfg.delta_grid.empty())
        write_report(cfg.out, "density_dd.csv", dd.render(echo));

    // twisted partial sums for every character of the configured modulus
    report::CsvReport delange({"character", "x", "value"});
    for (const auto& eps : chars::CharacterGroup(cfg.q).all()) {
        auto rows = density::delange_partial_sums(f, eps, cps);
        for (auto [x, v] : rows)
            delange.add_row({eps.label(), std::to_string(x), report::format_double(v)});
    }
    write_report(cfg.out, "delange.csv", delange.render(echo));
    return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

static std::vector<std::pair<double, double>> read_checkpoint_csv(const fs::path& path) {
    if (!fs::exists(path))
        throw std::domain_error("fit: no such file: " + path.string());
    std::istringstream in(textio::read_file(path));
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        try {
            double x = std::stod(line.substr(0, comma));
            std::string rest = line.substr(comma + 1);
            auto comma2 = rest.find(',');
            double v = std::stod(comma2 == std::string::npos ? rest : rest.substr(0, comma2));
            pts.emplace_back(x, v);
        } catch (const std::exception&) {
            continue;  // header or stray text row
        }
    }
    return pts;
}

static int run_fit(const ExperimentConfig& cfg, const std::string& input) {
    if (input.empty()) throw std::domain_error("fit: an input checkpoint CSV is required");
    auto pts = read_checkpoint_csv(input);
    auto fit = satotate::error_term_fit(pts);

    json out;
    out["C"] = fit.C;
    out["alpha"] = fit.alpha;
    out["residual"] = fit.residual;
    out["points_used"] = fit.checkpoints.size();
    out["input"] = input;
    out["tool"] = version_string;
    auto echo = config_echo(cfg, "fit");
    out["config"] = report::canonical_config(echo);
    out["config_hash"] =
        "fnv1a64:" + textio::hex64(textio::fnv1a64(report::canonical_config(echo)));
    write_report(cfg.out, "fit.json", out.dump(2) + "\n");
    std::cout << "fit: C = " << report::format_double(fit.C)
              << " alpha = " << report::format_double(fit.alpha)
              << " residual = " << report::format_double(fit.residual) << " ("
              << fit.checkpoints.size() << " points)\n";
    return 0;
}

// ---------------------------------------------------------------------------
// report: the full battery plus a manifest
// ---------------------------------------------------------------------------

static int run_report(const ExperimentConfig& cfg) {
    run_signs(cfg);
    run_satotate(cfg);
    run_density(cfg);
    auto classes = effective_classes(cfg);
    fs::path first_cp =
        fs::path(cfg.out) / ("checkpoints_d" + std::to_string(classes.front()) + ".csv");
    run_fit(cfg, first_cp.string());

    auto echo = config_echo(cfg, "report");
    std::string cfg_line = report::canonical_config(echo);
    json manifest;
    manifest["tool"] = version_string;
    manifest["config"] = cfg_line;
    manifest["config_hash"] = "fnv1a64:" + textio::hex64(textio::fnv1a64(cfg_line));
    json files = json::array();
    files.push_back("signs.csv");
    files.push_back("satotate_stats.csv");
    files.push_back("satotate_hist.csv");
    files.push_back("density.csv");
    if (!cfg.delta_grid.empty()) files.push_back("density_dd.csv");
    for (std::int64_t d : classes)
        files.push_back("checkpoints_d" + std::to_string(d) + ".csv");
    files.push_back("delange.csv");
    files.push_back("fit.json");
    manifest["files"] = files;
    write_report(cfg.out, "report.json", manifest.dump(2) + "\n");
    std::cout << "report: wrote " << files.size() + 1 << " files to " << cfg.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// entry point and error mapping
// ---------------------------------------------------------------------------

static void emit_failure_record(const ExperimentConfig& cfg, const std::string& kind,
                                const std::string& what, json extra = json::object()) {
    json rec;
    rec["error"] = "assertion_failure";
    rec["kind"] = kind;
    rec["what"] = what;
    for (auto& [k, v] : extra.items()) rec[k] = v;
    std::cerr << rec.dump() << "\n";
    try {
        fs::create_directories(cfg.out);
        textio::write_file_atomic(fs::path(cfg.out) / "failure.json", rec.dump(2) + "\n");
    } catch (const std::exception&) {
        // the stderr record is the contract; the file is best-effort
    }
}

int main(int argc, char** argv) {
    ExperimentConfig cfg;
    std::string fit_input;

    CLI::App app{"sign statistics of half-integral weight Fourier coefficients"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI file (flags win)");

    app.add_option("--form", cfg.form, "'delta-preimage' or a form file path");
    app.add_option("--t", cfg.t, "squarefree index of the lift");
    app.add_option("--q", cfg.q, "progression modulus");
    app.add_option("--d", cfg.d, "progression classes (default: all units mod q)")
        ->delimiter(',');
    app.add_option("--X", cfg.X, "integer counting bound");
    app.add_option("--xmax", cfg.x_max, "prime cutoff");
    app.add_option("--T", cfg.T, "cache truncation for gen");
    app.add_option("--delta-grid", cfg.delta_grid,
                   "positive strictly decreasing delta values")
        ->delimiter(',');
    app.add_option("--checkpoints", cfg.checkpoints,
                   "explicit checkpoint schedule (default: geometric)")
        ->delimiter(',');
    app.add_option("--seed", cfg.seed, "seed echoed into report provenance");
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--cache", cfg.cache, "cache directory");

    auto* gen = app.add_subcommand("gen", "build or extend the coefficient cache");
    auto* signs = app.add_subcommand("signs", "prime sign densities per class");
    auto* sato = app.add_subcommand("satotate", "semicircle statistics of B(p)");
    auto* dens = app.add_subcommand("density", "sign counting over a progression");
    auto* fit = app.add_subcommand("fit", "power-law fit of a checkpoint CSV");
    fit->add_option("input", fit_input, "checkpoint CSV emitted by density");
    auto* rept = app.add_subcommand("report", "full battery plus manifest");
    for (auto* s : {gen, signs, sato, dens, fit, rept}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        // configuration invariants shared by every subcommand
        if (cfg.q < 1) throw std::domain_error("q must be >= 1");
        if (cfg.t < 1 || !arith::is_squarefree(cfg.t))
            throw std::domain_error("t must be a squarefree positive integer");
        auto classes = effective_classes(cfg);
        if (classes.empty()) throw std::domain_error("no valid classes mod q");
        density::validate_delta_grid(cfg.delta_grid);

        if (gen->parsed()) return run_gen(cfg);
        if (signs->parsed()) return run_signs(cfg);
        if (sato->parsed()) return run_satotate(cfg);
        if (dens->parsed()) return run_density(cfg);
        if (fit->parsed()) return run_fit(cfg, fit_input);
        if (rept->parsed()) return run_report(cfg);
        std::cerr << "config error: no subcommand\n";
        return 2;
    } catch (const cache_missing& e) {
        std::cerr << "missing cache: " << e.what() << "\n"
                  << "run: mfsign gen --T " << std::max({cfg.T, cfg.X, cfg.x_max})
                  << " --cache " << cfg.cache << "\n";
        return 4;
    } catch (const cache_mismatch& e) {
        std::cerr << "cache error: " << e.what() << "\n"
                  << "remove the file and run: mfsign gen --T "
                  << std::max({cfg.T, cfg.X, cfg.x_max}) << " --cache " << cfg.cache << "\n";
        return 4;
    } catch (const rp_violation& e) {
        emit_failure_record(cfg, "rp_violation", e.what(), json{{"p", e.p}});
        return 3;
    } catch (const reality_violation& e) {
        emit_failure_record(cfg, "reality_violation", e.what(), json{{"index", e.index}});
        return 3;
    } catch (const sign_undecidable& e) {
        emit_failure_record(cfg, "sign_undecidable", e.what());
        return 3;
    } catch (const assertion_failure& e) {
        emit_failure_record(cfg, "assertion_failure", e.what());
        return 3;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        emit_failure_record(cfg, "internal_error", e.what());
        return 3;
    }
}

// hlwalk: command-line driver for the half-line complex walk toolkit.
//
// Subcommands: validate, classify, integrals, drift-scan, simulate,
// moments, probe, lattice, presets, rerun. Every stochastic command
// requires --seed and writes a manifest next to its output; rerunning a
// manifest reproduces the output byte for byte, regardless of --threads.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "halfline/classifier.hpp"
#include "halfline/errors.hpp"
#include "halfline/integrals.hpp"
#include "halfline/lattice.hpp"
#include "halfline/lyapunov.hpp"
#include "halfline/model.hpp"
#include "halfline/sampler.hpp"
#include "halfline/version.hpp"

using nlohmann::json;
using namespace halfline;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        write_file(out_path, content);
    }
}

void write_manifest(const std::string& out_path, const std::string& command,
                    const json& options) {
    if (out_path.empty()) return;
    json m;
    m["version"] = kVersion;
    m["command"] = command;
    m["options"] = options;  // threads intentionally excluded: not output-relevant
    write_file(out_path + ".manifest.json", m.dump(2) + "\n");
}

std::vector<double> parse_grid(const std::string& spec) {
    // either "lo:hi:log[:n]" / "lo:hi:lin[:n]" or a comma list
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() < 3) throw CLI::ValidationError("--x-grid", "expected lo:hi:log[:n]");
        const double lo = std::stod(parts[0]);
        const double hi = std::stod(parts[1]);
        const bool logspace = parts[2] == "log";
        const int n = parts.size() > 3 ? std::stoi(parts[3]) : 13;
        for (int i = 0; i < n; ++i) {
            const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            grid.push_back(logspace ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
        }
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    }
    return grid;
}

json tail_fit_json(const TailFit& fit) {
    return json{{"estimator", fit.estimator == TailEstimator::hill ? "hill" : "loglog_ccdf"},
                {"exponent", fit.exponent},
                {"stderr", fit.stderr_est},
                {"k_order", fit.k_order},
                {"n_samples", fit.n_samples},
                {"n_censored", fit.n_censored}};
}

json prediction_json(const ComplexModel& model, const Classification& cls) {
    const auto sharp = sharp_q_star(model);
    if (sharp.kind == MomentPrediction::Kind::sharp)
        return json{{"kind", "sharp"}, {"q_star", sharp.q_star}, {"source", sharp.source}};
    if (cls.verdict == Verdict::recurrent_heavy_side ||
        cls.verdict == Verdict::recurrent_negative) {
        try {
            const auto iv = moment_interval(model);
            return json{{"kind", "interval"},
                        {"q_low", iv.q_low},
                        {"q_high", iv.q_high},
                        {"source", iv.source}};
        } catch (const std::exception& e) {
            return json{{"kind", "unavailable"}, {"reason", e.what()}};
        }
    }
    return json{{"kind", "not_applicable"}};
}

// ---------------------------------------------------------------------------
// command payloads (shared between direct invocation and manifest rerun)
// ---------------------------------------------------------------------------

// tabular emitter: identical row order in both formats
std::string rows_to_output(const std::vector<std::string>& columns,
                           const std::vector<std::vector<std::string>>& rows,
                           const std::string& fmt) {
    if (fmt == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json obj;
            for (std::size_t c = 0; c < columns.size(); ++c) {
                const std::string& cell = r[c];
                // numeric cells stay numeric in JSON
                char* end = nullptr;
                const double v = std::strtod(cell.c_str(), &end);
                if (end && *end == '\0' && !cell.empty()) obj[columns[c]] = v;
                else obj[columns[c]] = cell;
            }
            arr.push_back(obj);
        }
        return arr.dump(2) + "\n";
    }
    std::string csv;
    for (std::size_t c = 0; c < columns.size(); ++c)
        csv += columns[c] + (c + 1 < columns.size() ? "," : "\n");
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c)
            csv += r[c] + (c + 1 < r.size() ? "," : "\n");
    return csv;
}

int run_simulate(const json& o, int threads, const std::string& out_path) {
    const auto model = validate(parse_raw_model(o.at("model").dump()));
    const WalkState start{o.at("start_x").get<double>(), o.at("start_branch").get<int>()};
    const auto records = simulate_excursions(
        model, start, o.at("a").get<double>(), o.at("excursions").get<std::size_t>(),
        o.at("horizon").get<std::uint64_t>(), o.at("seed").get<std::uint64_t>(), threads);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        rows.push_back({std::to_string(i), std::to_string(r.tau), r.censored ? "1" : "0",
                        fmt(r.max_x), std::to_string(r.end.branch)});
    }
    emit(out_path, rows_to_output({"idx", "tau", "censored", "max_x", "end_branch"}, rows,
                                  o.value("format", "csv")));
    return 0;
}

int run_moments(const json& o, int threads, const std::string& out_path) {
    const auto model = validate(parse_raw_model(o.at("model").dump()));
    const auto cls = classify(model);
    const bool recurrent = cls.verdict != Verdict::transient;
    const WalkState start{o.at("start_x").get<double>(), o.at("start_branch").get<int>()};
    const auto estimator = o.at("estimator").get<std::string>() == "loglog"
                               ? TailEstimator::loglog_ccdf
                               : TailEstimator::hill;
    const auto fit = estimate_return_tail(
        model, start, o.at("a").get<double>(), o.at("excursions").get<std::size_t>(),
        o.at("horizon").get<std::uint64_t>(), estimator, o.at("seed").get<std::uint64_t>(),
        threads);
    json out = tail_fit_json(fit);
    out["verdict"] = to_string(cls.verdict);
    if (!recurrent)
        out["warning"] = "model classified transient; return-time estimates are meaningless";
    out["prediction"] = prediction_json(model, cls);
    emit(out_path, out.dump(2) + "\n");
    return 0;
}

int run_probe(const json& o, int threads, const std::string& out_path) {
    const auto model = validate(parse_raw_model(o.at("model").dump()));
    ProbeParams params;
    params.n_walks = o.at("walks").get<std::size_t>();
    params.horizons = o.at("horizons").get<std::vector<std::uint64_t>>();
    params.a = o.at("a").get<double>();
    params.start = {o.at("start_x").get<double>(), o.at("start_branch").get<int>()};
    params.master_seed = o.at("seed").get<std::uint64_t>();
    params.threads = threads;
    const auto rep = recurrence_probe(model, params);
    json out{{"fraction_returned", rep.fraction_returned},
             {"median_min_x", rep.median_min_x},
             {"horizons", rep.horizons},
             {"median_x", rep.median_x},
             {"q25_x", rep.q25_x},
             {"q75_x", rep.q75_x},
             {"growth_ratio", rep.growth_ratio},
             {"hint", rep.hint}};
    emit(out_path, out.dump(2) + "\n");
    return 0;
}

int run_lattice(const json& o, int threads, const std::string& out_path) {
    LatticeVariant variant;
    if (!lattice_variant_from_string(o.at("variant").get<std::string>(), variant))
        throw CLI::ValidationError("--variant", "unknown variant");
    const auto sample = collect_embedded(
        variant, o.at("start_x1").get<long long>(), o.at("returns").get<std::size_t>(),
        o.at("seed").get<std::uint64_t>(), threads, o.at("replicas").get<int>(),
        o.at("cap").get<std::uint64_t>());
    std::vector<std::vector<std::string>> rows;
    rows.reserve(sample.jumps.size());
    for (std::size_t i = 0; i < sample.jumps.size(); ++i) {
        rows.push_back({std::to_string(i), std::to_string(sample.jumps[i]),
                        std::to_string(static_cast<int>(sample.side[i])),
                        sample.censored[i] ? "1" : "0"});
    }
    emit(out_path, rows_to_output({"idx", "jump", "side", "censored"}, rows,
                                  o.value("format", "csv")));
    return 0;
}

RawModel preset_model(const std::string& family, double alpha, double beta,
                      const std::string& density, double y0) {
    RawModel raw;
    auto branch = [&](const std::string& id, const std::string& kind, double a) {
        RawModel::RawBranch rb;
        rb.id = id;
        rb.kind = kind;
        rb.family = density;
        rb.alpha = a;
        rb.y0 = y0;
        return rb;
    };
    if (family == "sym") {
        raw.branches = {branch("plus", "symmetric", alpha), branch("minus", "symmetric", alpha)};
    } else if (family == "osc1") {
        raw.branches = {branch("plus", "one_sided", alpha), branch("minus", "one_sided", beta)};
    } else if (family == "osc2") {
        raw.branches = {branch("plus", "symmetric", alpha), branch("minus", "symmetric", beta)};
    } else if (family == "osc3") {
        raw.branches = {branch("plus", "symmetric", alpha), branch("minus", "one_sided", beta)};
    } else {
        throw CLI::ValidationError("--family", "expected sym|osc1|osc2|osc3");
    }
    raw.routing = {{0.0, 1.0}, {1.0, 0.0}};
    return raw;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random walks on complexes of half-lines"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();
    std::string format;
    app.add_option("--format", format, "csv or json (default depends on the command)")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string model_path, out_path;

    auto* c_validate = app.add_subcommand("validate", "check a model file");
    c_validate->add_option("model", model_path, "model JSON file")->required();

    auto* c_classify = app.add_subcommand("classify", "recurrence/transience verdict");
    double critical_tol = 1e-9;
    c_classify->add_option("model", model_path)->required();
    c_classify->add_option("--tol", critical_tol, "criterion tolerance for the critical set");
    c_classify->add_option("--out", out_path);

    auto* c_integrals = app.add_subcommand("integrals", "kernel integral table");
    std::string kind = "i21", method = "both";
    double nu = 0.0, alpha_opt = 1.0;
    c_integrals->add_option("--kind", kind, "i0|i20|i21|i1|i1_tilde|j0|j1|j2|j1_tilde")->required();
    c_integrals->add_option("--nu", nu, "power exponent (i kinds)");
    c_integrals->add_option("--alpha", alpha_opt, "tail exponent")->required();
    c_integrals->add_option("--method", method, "closed|quadrature|both");
    c_integrals->add_option("--out", out_path);

    auto* c_drift = app.add_subcommand("drift-scan", "mean-increment scan of a test function");
    std::string mode = "power", grid_spec = "1e2:1e6:log:13", weights_spec = "auto";
    double scan_nu = 0.05;
    c_drift->add_option("model", model_path)->required();
    c_drift->add_option("--mode", mode, "power|log|sqrtlog");
    c_drift->add_option("--nu", scan_nu, "power exponent (power mode)");
    c_drift->add_option("--x-grid", grid_spec, "lo:hi:log[:n] or comma list");
    c_drift->add_option("--weights", weights_spec, "auto or a weights JSON file");
    c_drift->add_option("--out", out_path);

    auto* c_sim = app.add_subcommand("simulate", "independent return-time excursions");
    std::size_t excursions = 1000;
    std::uint64_t horizon = 1000000, seed = 0;
    double level_a = 1.0, start_x = 100.0;
    int start_branch = 0;
    c_sim->add_option("model", model_path)->required();
    c_sim->add_option("--excursions", excursions)->capture_default_str();
    c_sim->add_option("--horizon", horizon)->capture_default_str();
    c_sim->add_option("--a", level_a, "return level")->capture_default_str();
    c_sim->add_option("--start-x", start_x)->capture_default_str();
    c_sim->add_option("--start-branch", start_branch)->capture_default_str();
    c_sim->add_option("--seed", seed, "master seed")->required();
    c_sim->add_option("--out", out_path);

    auto* c_moments = app.add_subcommand("moments", "return-time tail index estimate");
    std::string estimator = "hill";
    c_moments->add_option("model", model_path)->required();
    c_moments->add_option("--excursions", excursions)->capture_default_str();
    c_moments->add_option("--horizon", horizon)->capture_default_str();
    c_moments->add_option("--a", level_a)->capture_default_str();
    c_moments->add_option("--start-x", start_x)->capture_default_str();
    c_moments->add_option("--start-branch", start_branch)->capture_default_str();
    c_moments->add_option("--estimator", estimator, "hill|loglog");
    c_moments->add_option("--seed", seed)->required();
    c_moments->add_option("--out", out_path);

    auto* c_probe = app.add_subcommand("probe", "Monte Carlo recurrence diagnostics");
    std::size_t walks = 1000;
    std::string horizons_spec = "1e3,1e4,1e5";
    c_probe->add_option("model", model_path)->required();
    c_probe->add_option("--walks", walks)->capture_default_str();
    c_probe->add_option("--horizons", horizons_spec, "comma list")->capture_default_str();
    c_probe->add_option("--a", level_a)->capture_default_str();
    c_probe->add_option("--start-x", start_x)->capture_default_str();
    c_probe->add_option("--start-branch", start_branch)->capture_default_str();
    c_probe->add_option("--seed", seed)->required();
    c_probe->add_option("--out", out_path);

    auto* c_lattice = app.add_subcommand("lattice", "embedded axis-return chain of a planar walk");
    std::string variant = "example41";
    std::size_t returns = 10000;
    long long start_x1 = 0;
    int replicas = 64;
    std::uint64_t cap = 100000000ull;
    c_lattice->add_option("--variant", variant, "example41|example42a|example42b")
        ->capture_default_str();
    c_lattice->add_option("--returns", returns)->capture_default_str();
    c_lattice->add_option("--start-x1", start_x1)->capture_default_str();
    c_lattice->add_option("--replicas", replicas)->capture_default_str();
    c_lattice->add_option("--cap", cap, "step cap per excursion")->capture_default_str();
    c_lattice->add_option("--seed", seed)->required();
    c_lattice->add_option("--out", out_path);

    auto* c_presets = app.add_subcommand("presets", "write a two-branch model file");
    std::string family = "osc1", density = "shifted_pareto";
    double p_alpha = 0.6, p_beta = 0.6, p_y0 = 1.0;
    c_presets->add_option("--family", family, "sym|osc1|osc2|osc3")->required();
    c_presets->add_option("--alpha", p_alpha)->required();
    c_presets->add_option("--beta", p_beta, "second branch exponent (defaults to alpha)");
    c_presets->add_option("--density", density, "shifted_pareto|cutoff_pareto");
    c_presets->add_option("--y0", p_y0, "cutoff location");
    c_presets->add_option("--out", out_path);

    auto* c_rerun = app.add_subcommand("rerun", "re-execute a manifest");
    std::string manifest_path, rerun_out;
    c_rerun->add_option("manifest", manifest_path)->required();
    c_rerun->add_option("--out", rerun_out, "override the recorded output path");

    for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_validate->parsed()) {
            try {
                const auto model = load_model(model_path);
                std::cout << "ok: " << model.size() << " branches\n";
                return 0;
            } catch (const validation_error& e) {
                std::cerr << e.what() << "\n";
                return 2;
            }
        }

        if (c_classify->parsed()) {
            const auto model = load_model(model_path);
            const auto cls = classify(model, critical_tol);
            json out;
            out["criterion"] = std::isnan(cls.criterion_value)
                                   ? json(nullptr)
                                   : json(cls.criterion_value);
            out["max_chi_alpha"] = cls.max_chi_alpha;
            out["verdict"] = to_string(cls.verdict);
            out["q_prediction"] = prediction_json(model, cls);
            emit(out_path, out.dump(2) + "\n");
            return 0;
        }

        if (c_integrals->parsed()) {
            std::string csv = "kind,nu,alpha,closed,quad,abs_diff\n";
            double closed = std::numeric_limits<double>::quiet_NaN();
            double quad = std::numeric_limits<double>::quiet_NaN();
            IKind ik;
            JKind jk;
            const bool is_i = ikind_from_string(kind, ik);
            if (!is_i && !jkind_from_string(kind, jk))
                throw CLI::ValidationError("--kind", "unknown integral kind");
            if (method == "closed" || method == "both")
                closed = is_i ? i_integral(ik, {nu, alpha_opt}) : j_integral(jk, alpha_opt);
            if (method == "quadrature" || method == "both")
                quad = is_i ? i_integral(ik, {nu, alpha_opt}, EvalMethod::quadrature)
                            : j_integral(jk, alpha_opt, EvalMethod::quadrature);
            csv += kind + "," + fmt(nu) + "," + fmt(alpha_opt) + "," + fmt(closed) + "," +
                   fmt(quad) + "," + fmt(std::fabs(closed - quad)) + "\n";
            emit(out_path, csv);
            return 0;
        }

        if (c_drift->parsed()) {
            const auto model = load_model(model_path);
            const auto grid = parse_grid(grid_spec);
            LyapunovWeights w;
            if (weights_spec == "auto") {
                if (mode == "power") {
                    const auto cls = classify(model);
                    if (cls.verdict == Verdict::recurrent_heavy_side)
                        w = lambda_mixed(model, scan_nu);
                    else
                        w = lambda_recurrent(model, scan_nu);
                } else {
                    w = solve_crit_lambda(model);
                }
            } else {
                const json jw = json::parse(read_file(weights_spec));
                w.nu = jw.value("nu", 0.0);
                const auto lv = jw.at("lambda").get<std::vector<double>>();
                w.lambda = Eigen::Map<const Eigen::VectorXd>(lv.data(),
                                                             static_cast<Eigen::Index>(lv.size()));
                w.provenance = WeightProvenance::manual;
            }
            w.mode = mode == "power" ? WeightMode::power
                                     : (mode == "log" ? WeightMode::log : WeightMode::sqrt_log);
            if (w.mode != WeightMode::power) w.nu = 0.0;

            std::string csv = "x,branch,drift,err_est,asymptotic\n";
            for (double x : grid) {
                for (int i = 0; i < model.size(); ++i) {
                    QuadratureResult d;
                    double asym = std::numeric_limits<double>::quiet_NaN();
                    const auto& b = model.branch(i);
                    if (w.mode == WeightMode::power) {
                        d = drift_power(model, w, x, i);
                        try {
                            asym = drift_asymptotic(model, w, i) *
                                   std::pow(x, w.nu - b.density.alpha());
                        } catch (const std::domain_error&) {
                        }
                    } else if (w.mode == WeightMode::log) {
                        d = drift_log(model, w, x, i);
                        const double a_i = M_PI / std::tan(M_PI * b.chi() * b.density.alpha());
                        const double bal =
                            a_i + model.routing().row(i).dot(w.lambda) - w.lambda(i);
                        asym = b.chi() * b.density.c_const() / b.density.alpha() * bal *
                               std::pow(x, -b.density.alpha());
                    } else {
                        d = drift_sqrtlog(model, w, x, i);
                    }
                    csv += fmt(x) + "," + std::to_string(i) + "," + fmt(d.value) + "," +
                           fmt(d.abs_error_estimate) + "," + fmt(asym) + "\n";
                }
            }
            emit(out_path, csv);
            return 0;
        }

        if (c_sim->parsed() || c_moments->parsed() || c_probe->parsed()) {
            const json model_json = json::parse(raw_model_to_json(load_raw_model(model_path)));
            json o{{"model", model_json},   {"seed", seed},
                   {"a", level_a},          {"start_x", start_x},
                   {"start_branch", start_branch}};
            if (c_sim->parsed()) {
                o["excursions"] = excursions;
                o["horizon"] = horizon;
                write_manifest(out_path, "simulate", o);
                return run_simulate(o, threads, out_path);
            }
            if (c_moments->parsed()) {
                o["excursions"] = excursions;
                o["horizon"] = horizon;
                o["estimator"] = estimator == "loglog" ? "loglog" : "hill";
                write_manifest(out_path, "moments", o);
                return run_moments(o, threads, out_path);
            }
            std::vector<std::uint64_t> hs;
            for (double h : parse_grid(horizons_spec))
                hs.push_back(static_cast<std::uint64_t>(h));
            o["walks"] = walks;
            o["horizons"] = hs;
            write_manifest(out_path, "probe", o);
            return run_probe(o, threads, out_path);
        }

        if (c_lattice->parsed()) {
            json o{{"variant", variant}, {"returns", returns}, {"start_x1", start_x1},
                   {"replicas", replicas}, {"cap", cap}, {"seed", seed}};
            write_manifest(out_path, "lattice", o);
            return run_lattice(o, threads, out_path);
        }

        if (c_presets->parsed()) {
            if (!c_presets->count("--beta")) p_beta = p_alpha;
            const auto raw = preset_model(family, p_alpha, p_beta, density, p_y0);
            validate(raw);  // refuse to write an invalid file
            emit(out_path, raw_model_to_json(raw) + "\n");
            return 0;
        }

        if (c_rerun->parsed()) {
            const json m = json::parse(read_file(manifest_path));
            const std::string command = m.at("command").get<std::string>();
            const json& o = m.at("options");
            std::string target = rerun_out;
            if (target.empty()) {
                const std::string suffix = ".manifest.json";
                if (manifest_path.size() > suffix.size() &&
                    manifest_path.substr(manifest_path.size() - suffix.size()) == suffix)
                    target = manifest_path.substr(0, manifest_path.size() - suffix.size());
                else
                    throw std::runtime_error("cannot infer output path; pass --out");
            }
            if (command == "simulate") return run_simulate(o, threads, target);
            if (command == "moments") return run_moments(o, threads, target);
            if (command == "probe") return run_probe(o, threads, target);
            if (command == "lattice") return run_lattice(o, threads, target);
            throw std::runtime_error("manifest command not rerunnable: " + command);
        }
    } catch (const validation_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const insufficient_data& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return 3;
    } catch (const numeric_failure& e) {
        std::cerr << "numeric failure: " << e.what() << " (best estimate "
                  << fmt(e.best_estimate()) << " +/- " << fmt(e.error_bound()) << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

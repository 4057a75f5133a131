// Copyright 2026 The fqcontrol Authors
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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fqc/errors.h"
#include "fqc/io.h"
#include "fqc/sweep.h"

using json = nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kSolverError = 3, kDataError = 4 };

/// Thrown for bad flag values found after parsing.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LogLevel { Silent, Info, Debug };

LogLevel log_level() {
    const char *v = std::getenv("FQC_LOG");
    if (v == nullptr || std::string(v) == "info" || std::string(v).empty()) {
        return LogLevel::Info;
    }
    if (std::string(v) == "silent") {
        return LogLevel::Silent;
    }
    if (std::string(v) == "debug") {
        return LogLevel::Debug;
    }
    std::cerr << "fqc: unknown FQC_LOG value '" << v << "', using info\n";
    return LogLevel::Info;
}

const LogLevel g_log = log_level();

void log_info(const std::string &msg) {
    if (g_log != LogLevel::Silent) {
        std::cerr << "fqc: " << msg << "\n";
    }
}

void log_debug(const std::string &msg) {
    if (g_log == LogLevel::Debug) {
        std::cerr << "fqc: " << msg << "\n";
    }
}

void log_error(const std::string &msg) {
    if (g_log != LogLevel::Silent) {
        std::cerr << "fqc: error: " << msg << "\n";
    }
}

/// Flat key/value JSON config files. Keys are long flag names of the selected subcommand;
/// underscores are accepted for dashes.
class JsonConfig : public CLI::Config {
   public:
    explicit JsonConfig(const CLI::App *app) : app_(app) {}

    std::string to_config(const CLI::App *, bool, bool, std::string) const override { return "{}\n"; }

    std::vector<CLI::ConfigItem> from_config(std::istream &in) const override {
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception &e) {
            throw CLI::ConversionError(std::string("config file: ") + e.what());
        }
        if (!doc.is_object()) {
            throw CLI::ConversionError("config file: expected a flat JSON object");
        }
        std::vector<CLI::ConfigItem> items;
        for (auto &[key, value] : doc.items()) {
            CLI::ConfigItem item;
            for (const auto *sub : app_->get_subcommands()) {
                item.parents.push_back(sub->get_name());
            }
            item.name = key;
            std::replace(item.name.begin(), item.name.end(), '_', '-');
            auto scalar = [&](const json &v) {
                if (v.is_string()) {
                    return v.get<std::string>();
                }
                if (v.is_number_float()) {
                    return fqc::format_double(v.get<double>());
                }
                if (v.is_primitive() && !v.is_null()) {
                    return v.dump();
                }
                throw CLI::ConversionError("config key '" + key + "': nested values are not supported");
            };
            if (value.is_array()) {
                for (auto &v : value) {
                    item.inputs.push_back(scalar(v));
                }
            } else {
                item.inputs.push_back(scalar(value));
            }
            items.push_back(std::move(item));
        }
        return items;
    }

   private:
    const CLI::App *app_;
};

/// Options shared by the sweep subcommands.
struct SweepOptions {
    std::uint64_t seed = 42;
    std::int64_t n_targets = 1000;
    int threads = 0;
    std::string out;
    std::string format = "csv";
};

void add_sweep_options(CLI::App *sub, SweepOptions &o) {
    sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    sub->add_option("--n-targets", o.n_targets, "Random targets per grid point")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.threads, "Worker threads, 0 for all cores")->capture_default_str()->check(
        CLI::NonNegativeNumber);
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_option("--format", o.format, "Output format")->capture_default_str()->check(
        CLI::IsMember({"csv", "json"}));
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    f << text;
    if (!f) {
        throw ConfigError("write to '" + path + "' failed");
    }
}

std::string read_input(const std::string &path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open '" + path + "'");
    }
    ss << f.rdbuf();
    return ss.str();
}

json number_or_inf(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return fqc::format_double(v);
}

json records_json(const fqc::SweepTable &table) {
    json rows = json::array();
    for (const auto &r : table.records) {
        json row;
        if (table.kind == fqc::SweepKind::Qubit) {
            const auto &p = std::get<fqc::QubitChannelParams>(r.params);
            row["theta_bar"] = p.theta;
            row["phi_bar"] = p.phi;
            row["cos2theta"] = std::cos(2 * p.theta);
            row["cos2phi"] = std::cos(2 * p.phi);
        } else {
            row["q"] = std::get<fqc::GaussianChannelParam>(r.params).q;
        }
        row["Q"] = number_or_inf(r.capacity);
        row["n_targets"] = r.n_targets;
        row["frac_reachable"] = r.frac_reachable;
        row["mean_err"] = r.mean_err;
        row["neglog2_mean_err"] = r.neglog2_mean_err;
        row["std_neglog2_err"] = r.std_neglog2;
        row["max_err"] = r.max_err;
        row["seed"] = r.seed;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_sweep(const fqc::SweepTable &table, const json &config, const std::string &format) {
    if (format == "json") {
        json doc;
        doc["config"] = config;
        doc["columns"] = json::array();
        std::string header = fqc::csv_header(table.kind);
        std::stringstream hs(header);
        for (std::string col; std::getline(hs, col, ',');) {
            doc["columns"].push_back(col);
        }
        doc["rows"] = records_json(table);
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    fqc::write_csv(out, table);
    return out.str();
}

std::string measure_name(fqc::TargetMeasure m) {
    return m == fqc::TargetMeasure::HaarPure ? "haar" : "hilbert-schmidt";
}

int run_qubit_sweep(const SweepOptions &o, const std::vector<double> &theta_grid, const std::vector<double> &phi_grid,
                    const std::string &measure) {
    fqc::QubitSweepConfig cfg;
    cfg.theta_grid = theta_grid;
    cfg.phi_grid = phi_grid;
    cfg.n_targets = o.n_targets;
    cfg.seed = o.seed;
    cfg.threads = o.threads == 0 ? fqc::default_thread_count() : o.threads;
    cfg.measure = measure == "haar" ? fqc::TargetMeasure::HaarPure : fqc::TargetMeasure::HilbertSchmidt;
    if (theta_grid.empty() || phi_grid.empty()) {
        throw ConfigError("angle grids must not be empty");
    }
    for (double t : theta_grid) {
        for (double p : phi_grid) {
            try {
                fqc::QubitChannelParams::checked(t, p);
            } catch (const fqc::DomainError &e) {
                throw ConfigError(e.what());
            }
        }
    }

    json config = {{"command", "qubit-sweep"},
                   {"theta_grid", cfg.theta_grid},
                   {"phi_grid", cfg.phi_grid},
                   {"n_targets", cfg.n_targets},
                   {"seed", cfg.seed},
                   {"target_measure", measure_name(cfg.measure)}};
    log_debug("resolved config " + config.dump());
    log_info("qubit sweep: " + std::to_string(theta_grid.size() * phi_grid.size()) + " grid points x " +
             std::to_string(cfg.n_targets) + " targets on " + std::to_string(cfg.threads) + " threads");

    auto t0 = std::chrono::steady_clock::now();
    fqc::SweepTable table;
    table.kind = fqc::SweepKind::Qubit;
    table.records = fqc::run_qubit_sweep(cfg);
    table.comments = {"fqc qubit-sweep", "config: " + config.dump()};
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log_info("done in " + fqc::format_double(dt, 3) + " s");

    write_output(o.out, render_sweep(table, config, o.format));
    return kOk;
}

int run_gaussian_sweep(const SweepOptions &o, double q_min, double q_max, int q_steps, const std::string &cost,
                       double r_max, double nbar_max) {
    if (!(q_min <= q_max)) {
        throw ConfigError("--q-min must not exceed --q-max");
    }
    if (q_steps < 1 || (q_steps == 1 && q_min != q_max)) {
        throw ConfigError("--q-steps must be at least 2 unless --q-min equals --q-max");
    }
    if (!(r_max >= 0) || !(nbar_max >= 0) || !std::isfinite(r_max) || !std::isfinite(nbar_max)) {
        throw ConfigError("--r-max and --nbar-max must be finite and non-negative");
    }
    fqc::GaussianSweepConfig cfg;
    cfg.q_grid = q_steps == 1 ? std::vector<double>{q_min} : fqc::linear_grid(q_min, q_max, q_steps);
    cfg.n_targets = o.n_targets;
    cfg.seed = o.seed;
    cfg.r_max = r_max;
    cfg.nbar_max = nbar_max;
    cfg.threads = o.threads == 0 ? fqc::default_thread_count() : o.threads;
    try {
        cfg.cost = fqc::parse_cost_kind(cost);
        for (double q : cfg.q_grid) {
            fqc::GaussianChannelParam::checked(q);
        }
    } catch (const fqc::DomainError &e) {
        throw ConfigError(e.what());
    }

    json config = {{"command", "gaussian-sweep"},
                   {"q_min", q_min},
                   {"q_max", q_max},
                   {"q_steps", q_steps},
                   {"n_targets", cfg.n_targets},
                   {"seed", cfg.seed},
                   {"cost", std::string(fqc::cost_kind_name(cfg.cost))},
                   {"r_max", cfg.r_max},
                   {"nbar_max", cfg.nbar_max}};
    log_debug("resolved config " + config.dump());
    log_info("gaussian sweep: " + std::to_string(cfg.q_grid.size()) + " grid points x " +
             std::to_string(cfg.n_targets) + " targets on " + std::to_string(cfg.threads) + " threads");

    auto t0 = std::chrono::steady_clock::now();
    fqc::SweepTable table;
    table.kind = fqc::SweepKind::Gaussian;
    table.records = fqc::run_gaussian_sweep(cfg);
    table.comments = {"fqc gaussian-sweep", "config: " + config.dump()};
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log_info("done in " + fqc::format_double(dt, 3) + " s");

    write_output(o.out, render_sweep(table, config, o.format));
    return kOk;
}

fqc::Window parse_window(const std::string &s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("--window expects lo:hi, got '" + s + "'");
    }
    fqc::Window w;
    try {
        w.lo = fqc::parse_double(s.substr(0, colon));
        w.hi = fqc::parse_double(s.substr(colon + 1));
    } catch (const fqc::ParseError &) {
        throw ConfigError("--window expects lo:hi, got '" + s + "'");
    }
    if (!(w.lo <= w.hi)) {
        throw ConfigError("--window lower bound exceeds upper bound");
    }
    return w;
}

struct FitOptions {
    std::string input;
    std::string model = "i";
    std::string window;
    std::string stat = "mean";
    double theta_min = 0;
    std::string out;
    std::string format = "json";
};

int run_fit(const FitOptions &o) {
    if (o.format != "json") {
        throw ConfigError("fit writes JSON only");
    }
    fqc::ModelKind kind;
    try {
        kind = fqc::parse_model(o.model);
    } catch (const fqc::DomainError &e) {
        throw ConfigError(e.what());
    }
    std::optional<fqc::Window> window;
    if (!o.window.empty()) {
        window = parse_window(o.window);
    }
    auto stat = o.stat == "max" ? fqc::ErrorStatistic::Max : fqc::ErrorStatistic::Mean;

    std::string text = read_input(o.input);
    std::istringstream in(text);
    fqc::SweepTable table = fqc::read_csv(in);
    std::vector<std::string> rows = fqc::csv_data_rows(text);
    if (rows.size() != table.records.size()) {
        throw fqc::ParseError("row count mismatch while reading input");
    }

    // Optional restriction of a qubit grid to theta >= theta_min.
    std::vector<fqc::SweepRecord> kept;
    std::vector<std::string> kept_rows;
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < table.records.size(); i++) {
        const auto &r = table.records[i];
        if (o.theta_min > 0 && table.kind == fqc::SweepKind::Qubit) {
            if (std::get<fqc::QubitChannelParams>(r.params).theta < o.theta_min) {
                excluded++;
                continue;
            }
        }
        kept.push_back(r);
        kept_rows.push_back(rows[i]);
    }

    fqc::FitSelection sel = fqc::select_fit_points(kept, stat);
    fqc::FitResult fit = fqc::fit_points(kind, sel.points, window);
    std::vector<std::string> used;
    for (auto i : sel.indices) {
        used.push_back(kept_rows[i]);
    }

    json config = {{"command", "fit"},
                   {"model", std::string(fqc::model_name(kind))},
                   {"window", window ? json::array({window->lo, window->hi}) : json(nullptr)},
                   {"statistic", o.stat},
                   {"theta_min", o.theta_min},
                   {"input_comments", table.comments}};
    json doc = {{"model", std::string(fqc::model_name(kind))},
                {"coefficients", fit.coefficients},
                {"zeta", fit.zeta},
                {"window", config["window"]},
                {"n_points_used", fit.n_points_used},
                {"n_rows", table.records.size()},
                {"n_clamped", sel.clamped},
                {"n_infinite", sel.infinite},
                {"n_excluded", excluded},
                {"statistic", o.stat},
                {"input_digest", "sha256:" + fqc::rows_digest(used)},
                {"config", config}};
    log_info("fit model " + o.model + " on " + std::to_string(fit.n_points_used) + " points");
    write_output(o.out, doc.dump(2) + "\n");
    return kOk;
}

struct CapacityOptions {
    std::string kind;
    std::optional<double> theta, phi, q;
};

int run_capacity(const CapacityOptions &o) {
    bool qubit_args = o.theta || o.phi;
    std::string kind = o.kind;
    if (kind.empty()) {
        if (qubit_args && o.q) {
            throw ConfigError("give either --theta/--phi or --q, not both");
        }
        kind = o.q ? "gaussian" : "qubit";
    }
    double cap;
    try {
        if (kind == "qubit") {
            if (o.q) {
                throw ConfigError("--q does not apply to the qubit channel");
            }
            if (!o.theta || !o.phi) {
                throw ConfigError("qubit capacity needs --theta and --phi");
            }
            cap = fqc::capacity_control_channel(fqc::QubitChannelParams::checked(*o.theta, *o.phi));
        } else {
            if (qubit_args) {
                throw ConfigError("--theta/--phi do not apply to the gaussian channel");
            }
            if (!o.q) {
                throw ConfigError("gaussian capacity needs --q");
            }
            cap = fqc::capacity_gaussian(fqc::GaussianChannelParam::checked(*o.q));
        }
    } catch (const fqc::DomainError &e) {
        throw ConfigError(e.what());
    }
    std::cout << fqc::format_double(cap, 12) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Controllability sweeps and capacity/error scaling fits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fqc 0.1.0");
    // --config belongs to the top-level app; fallthrough lets it follow the subcommand name.
    app.fallthrough();
    app.set_config("--config", "", "Flat JSON file of flag values; explicit flags win");
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    app.allow_config_extras(CLI::config_extras_mode::error);

    SweepOptions qopt;
    std::vector<double> theta_grid = fqc::default_qubit_angle_grid();
    std::vector<double> phi_grid = fqc::default_qubit_angle_grid();
    std::string measure = "haar";
    auto *qs = app.add_subcommand("qubit-sweep", "Error statistics over a (theta, phi) grid");
    add_sweep_options(qs, qopt);
    qs->add_option("--theta-grid", theta_grid, "theta values in radians")->delimiter(',');
    qs->add_option("--phi-grid", phi_grid, "phi values in radians")->delimiter(',');
    qs->add_option("--target-measure", measure, "Target state distribution")
        ->capture_default_str()
        ->check(CLI::IsMember({"haar", "hilbert-schmidt"}));

    SweepOptions gopt;
    double q_min = 0.5, q_max = 3.0, r_max = 1.0, nbar_max = 1.0;
    int q_steps = 101;
    std::string cost = "gaussian";
    auto *gs = app.add_subcommand("gaussian-sweep", "Error statistics over a grid of q");
    add_sweep_options(gs, gopt);
    gs->add_option("--q-min", q_min)->capture_default_str();
    gs->add_option("--q-max", q_max)->capture_default_str();
    gs->add_option("--q-steps", q_steps)->capture_default_str();
    gs->add_option("--cost", cost, "Control error")->capture_default_str()->check(
        CLI::IsMember({"gaussian", "gaussian-fidelity", "matrix-uhlmann"}));
    gs->add_option("--r-max", r_max, "Largest target squeezing")->capture_default_str();
    gs->add_option("--nbar-max", nbar_max, "Largest target thermal occupation")->capture_default_str();

    FitOptions fopt;
    auto *fit = app.add_subcommand("fit", "Fit a scaling model to a sweep CSV");
    fit->add_option("input", fopt.input, "Sweep CSV, - for stdin")->required();
    fit->add_option("--model", fopt.model)->capture_default_str()->check(CLI::IsMember({"i", "ii", "iii"}));
    fit->add_option("--window", fopt.window, "lo:hi range of -log2(err) used for zeta");
    fit->add_option("--stat", fopt.stat, "Error statistic")->capture_default_str()->check(
        CLI::IsMember({"mean", "max"}));
    fit->add_option("--theta-min", fopt.theta_min, "Drop qubit rows with theta below this (radians)");
    fit->add_option("--out", fopt.out, "Output file (default stdout)");
    fit->add_option("--format", fopt.format)->capture_default_str()->check(CLI::IsMember({"csv", "json"}));

    CapacityOptions copt;
    auto *cap = app.add_subcommand("capacity", "Quantum capacity of a control channel");
    cap->add_option("kind", copt.kind, "qubit or gaussian")->check(CLI::IsMember({"qubit", "gaussian"}));
    cap->add_option("--theta", copt.theta);
    cap->add_option("--phi", copt.phi);
    cap->add_option("--q", copt.q);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        if (g_log != LogLevel::Silent) {
            app.exit(e);
        }
        return kConfigError;
    }

    try {
        if (*qs) {
            return run_qubit_sweep(qopt, theta_grid, phi_grid, measure);
        }
        if (*gs) {
            return run_gaussian_sweep(gopt, q_min, q_max, q_steps, cost, r_max, nbar_max);
        }
        if (*fit) {
            return run_fit(fopt);
        }
        return run_capacity(copt);
    } catch (const ConfigError &e) {
        log_error(e.what());
        return kConfigError;
    } catch (const fqc::ParseError &e) {
        log_error(e.what());
        return kConfigError;
    } catch (const fqc::InsufficientData &e) {
        log_error(e.what());
        return kDataError;
    } catch (const fqc::SingularDesign &e) {
        log_error(e.what());
        return kDataError;
    } catch (const fqc::EmptyWindow &e) {
        log_error(e.what());
        return kDataError;
    } catch (const fqc::Error &e) {
        log_error(e.what());
        return kSolverError;
    }
}

#include "fermirdm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "fermirdm/acceptance.hpp"
#include "fermirdm/densities.hpp"
#include "fermirdm/errors.hpp"
#include "fermirdm/potential.hpp"
#include "fermirdm/spectra.hpp"
#include "output.hpp"

namespace fermirdm::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RunConfig {
    std::string subcommand;
    int n_particles = 3;
    double t = kNaN;
    int points = 0;
    double half_width = kNaN;
    int k_max = 40;
    std::string format = "csv";
    std::string output = "-";
    std::string method = "nystrom";
    int n_min = 2;
    int n_max = 20;
    int samples = 801;
    double p_range = 3.0;
    bool rescaled = false;
    bool quick = false;
    double tolerance_scale = 1.0;
    std::vector<int> criteria;
};

bool given(double v) { return !std::isnan(v); }

double require_t(const RunConfig& c) {
    if (!given(c.t)) throw ValidationError("--t is required for '" + c.subcommand + "'");
    return c.t;
}

/// Canonical re-run command built from the resolved configuration.
std::string canonical_command(const RunConfig& c) {
    std::ostringstream os;
    os << "fermirdm " << c.subcommand;
    if (c.subcommand == "parity-scan") {
        os << " --n-min " << c.n_min << " --n-max " << c.n_max;
    } else if (c.subcommand != "verify") {
        os << " --n " << c.n_particles;
    }
    if (given(c.t)) os << " --t " << format_number(c.t);
    if (c.subcommand == "spectrum") os << " --method " << c.method << " --kmax " << c.k_max;
    if (c.points > 0) os << " --points " << c.points;
    if (given(c.half_width)) os << " --half-width " << format_number(c.half_width);
    if (c.subcommand == "potential") os << " --samples " << c.samples << " --range " << format_number(c.p_range);
    if (c.rescaled) os << " --rescaled";
    os << " --format " << c.format;
    return os.str();
}

Table base_table(const RunConfig& c) {
    Table t;
    t.metadata.emplace_back("command", canonical_command(c));
    t.metadata.emplace_back("subcommand", c.subcommand);
    if (c.subcommand != "parity-scan") t.metadata.emplace_back("n_particles", c.n_particles);
    if (given(c.t)) t.metadata.emplace_back("t", c.t);
    return t;
}

GridSpec grid_spec(const RunConfig& c) {
    GridSpec g;
    g.k_max = c.k_max;
    if (given(c.half_width)) g.half_width = c.half_width;
    if (c.points > 0) {
        if (!given(c.half_width)) throw ValidationError("--points needs --half-width");
        g.spacing = 2.0 * c.half_width / c.points;
    }
    return g;
}

std::vector<double> axis(double half_width, int points) {
    if (points < 2) throw ValidationError("--points must be at least 2");
    if (!(half_width > 0.0)) throw ValidationError("--half-width must be positive");
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) v[i] = -half_width + 2.0 * half_width * i / (points - 1);
    return v;
}

json extrema_json(const ExtremaReport& rep, double t) {
    auto list = [&](const std::vector<Extremum>& e) {
        json a = json::array();
        for (const auto& x : e) a.push_back({x.location * std::sqrt(t), x.value / t});
        return a;
    };
    json j;
    j["minima_count"] = rep.minima.size();
    j["maxima_count"] = rep.maxima.size();
    j["global_min_multiplicity"] = rep.global_min_multiplicity;
    j["global_min_value_over_t"] = rep.global_min_value / t;
    j["parity_verdict"] = to_string(rep.parity_class);
    j["highest_max_over_t"] = rep.highest_max_value / t;
    j["minima_sqrt_t_p_and_V_over_t"] = list(rep.minima);
    j["maxima_sqrt_t_p_and_V_over_t"] = list(rep.maxima);
    return j;
}

/// Rows k, lambda, pair_gap, segment_label; numerically zero occupations are dropped.
void spectrum_rows(Table& table, const std::vector<double>& l, int k_max) {
    table.columns = {"k", "lambda", "pair_gap", "segment_label"};
    std::vector<std::string> labels(l.size(), "below_floor");
    for (const auto& s : pairing_segments(l)) {
        for (int k = s.k_first; k <= s.k_last; ++k) labels[k - 1] = to_string(s.label);
    }
    const double floor = l.empty() ? 0.0 : 1e-13 * std::fabs(l.front());
    for (std::size_t k = 0; k < l.size() && static_cast<int>(k) < k_max; ++k) {
        if (!(std::fabs(l[k]) > floor)) break;
        const double gap = k + 1 < l.size() ? l[k] - l[k + 1] : kNaN;
        table.rows.push_back({static_cast<long long>(k + 1), l[k], gap, labels[k]});
    }
}

void add_segmentation(Table& table, const ExtremaReport& rep, const SpectrumResult& s) {
    const auto seg = segment_regimes(rep, s);
    table.metadata.emplace_back("k_star", seg.k_star);
    json cross = json::array();
    for (const auto& c : seg.crossings) {
        cross.push_back({{"kind", c.is_maximum ? "maximum" : "minimum"}, {"level", c.level}, {"k", c.k}});
    }
    table.blocks.emplace_back("crossings", cross);
}

void add_grid_meta(Table& table, const SpectrumResult& s) {
    const std::size_t n = s.grid_nodes.size();
    table.metadata.emplace_back("grid_points", static_cast<long long>(n));
    table.metadata.emplace_back("grid_spacing", n ? s.grid_weights.front() : kNaN);
    table.metadata.emplace_back("grid_half_width", n ? s.grid_nodes.back() + 0.5 * s.grid_weights.back() : kNaN);
}

Table cmd_spectrum(const RunConfig& c) {
    const double t = require_t(c);
    const auto params = make_params(c.n_particles, t);
    Table table = base_table(c);
    table.metadata.emplace_back("method", c.method);
    table.metadata.emplace_back("k_max", c.k_max);
    const bool strong = c.n_particles >= 3 && t <= max_strong_coupling_t(c.n_particles);

    if (c.method == "nystrom") {
        const auto s = solve_nystrom(build_kernel(params), grid_spec(c));
        add_grid_meta(table, s);
        table.metadata.emplace_back("trace_error", s.trace_error);
        spectrum_rows(table, s.lambdas, c.k_max);
        if (strong) {
            const auto pot = build_potential(params);
            add_segmentation(table, find_extrema(pot), s);
        }
    } else if (c.method == "schrodinger") {
        const auto pot = build_potential(params);
        const auto s = solve_momentum_schrodinger(params, pot, c.k_max);
        add_grid_meta(table, s);
        table.metadata.emplace_back("trace_error", kNaN);
        spectrum_rows(table, s.lambdas, c.k_max);
        add_segmentation(table, find_extrema(pot), s);
    } else if (c.method == "harmonic") {
        const auto pot = build_potential(params);
        const auto rep = find_extrema(pot);
        const auto hp = harmonic_params(pot, rep);
        table.metadata.emplace_back("alpha", hp.alpha);
        table.metadata.emplace_back("beta", hp.beta);
        table.metadata.emplace_back("mass", hp.mass);
        table.metadata.emplace_back("parity_verdict", to_string(rep.parity_class));
        spectrum_rows(table, harmonic_series(hp, t, rep.parity_class, c.k_max), c.k_max);
    } else {  // tail
        table.columns = {"k", "shape"};
        const int k0 = static_cast<int>(std::ceil(3.0 / t - 1e-9));
        table.metadata.emplace_back("note", "shape only; one multiplicative constant is undetermined");
        for (int k = k0; k < k0 + c.k_max; ++k) table.rows.push_back({static_cast<long long>(k), tail_spectrum(params, k)});
    }
    return table;
}

Table cmd_potential(RunConfig c) {
    if (c.n_particles == 2) {
        throw ValidationError("N = 2 is a special case: v_{2,0} = 0, so V_2(0) = 0 and the effective mass is undefined");
    }
    if (!given(c.t)) c.t = 0.1 / c.n_particles;
    const auto pot = build_potential(make_params(c.n_particles, c.t));
    const auto rep = find_extrema(pot);
    if (c.samples < 2) throw ValidationError("--samples must be at least 2");
    Table table = base_table(c);
    table.columns = {"sqrt_t_p", "V_over_t"};
    const double st = std::sqrt(c.t);
    for (int i = 0; i < c.samples; ++i) {
        const double u = -c.p_range + 2.0 * c.p_range * i / (c.samples - 1);
        table.rows.push_back({u, pot(u / st) / c.t});
    }
    auto ext = extrema_json(rep, c.t);
    const auto hp = harmonic_params(pot, rep);
    ext["harmonic"] = {{"alpha", hp.alpha}, {"beta", hp.beta}, {"mass", hp.mass}};
    table.blocks.emplace_back("extrema", ext);
    return table;
}

struct ScanRow {
    int n = 0;
    long long minima = 0;
    long long multiplicity = 0;
    std::string verdict;
    std::string expected;
    std::string status;
};

Table cmd_parity_scan(const RunConfig& c, bool& violation) {
    if (c.n_min < 2 || c.n_max > kMaxParticles || c.n_min > c.n_max) {
        throw ValidationError("parity scan range must satisfy 2 <= n-min <= n-max <= 64");
    }
    if (given(c.t) && c.t > max_strong_coupling_t(c.n_max)) {
        throw ValidationError("--t exceeds the t*N <= 0.2 gate at N = " + std::to_string(c.n_max));
    }
    std::vector<std::future<ScanRow>> jobs;
    for (int n = c.n_min; n <= c.n_max; ++n) {
        jobs.push_back(std::async(std::launch::async, [n, &c]() {
            ScanRow row;
            row.n = n;
            if (n == 2) {
                row.status = "skipped: N = 2 is a special case";
                return row;
            }
            const double t = given(c.t) ? c.t : 0.1 / n;
            const auto rep = find_extrema(build_potential(make_params(n, t)));
            row.minima = static_cast<long long>(rep.minima.size());
            row.multiplicity = rep.global_min_multiplicity;
            row.verdict = to_string(rep.parity_class);
            row.expected = to_string(n % 2 ? ParityClass::odd_like_unique_zero_min
                                           : ParityClass::even_like_degenerate_pair);
            const bool ok = row.verdict == row.expected && row.minima == n;
            row.status = ok ? (n > 20 ? "ok (beyond the systematic range N <= 20)" : "ok") : "VIOLATION";
            return row;
        }));
    }
    Table table = base_table(c);
    table.metadata.emplace_back("t_rule", given(c.t) ? "fixed" : "0.1/N");
    table.columns = {"N", "minima_count", "multiplicity", "verdict", "expected", "status"};
    violation = false;
    for (auto& f : jobs) {
        auto r = f.get();
        violation = violation || r.status == "VIOLATION";
        table.rows.push_back({static_cast<long long>(r.n), r.minima, r.multiplicity, r.verdict, r.expected, r.status});
    }
    return table;
}

std::vector<double> density_axis(const RunConfig& c, double default_half_width, int default_points) {
    return axis(given(c.half_width) ? c.half_width : default_half_width, c.points > 0 ? c.points : default_points);
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

Table cmd_density(const RunConfig& c) {
    const double t = require_t(c);
    const auto params = make_params(c.n_particles, t);
    const auto xs = density_axis(c, c.rescaled ? 5.0 : 5.0 * std::max(1.0, t), 401);
    Table table = base_table(c);
    if (c.rescaled) {
        std::vector<double> scaled;
        for (double x : xs) scaled.push_back(t * x);
        const auto d = one_particle_density(params, scaled);
        table.columns = {"x", "t_n_of_t_x"};
        std::vector<double> vals;
        for (std::size_t i = 0; i < xs.size(); ++i) vals.push_back(t * d.values[i]);
        for (std::size_t i = 0; i < xs.size(); ++i) table.rows.push_back({xs[i], vals[i]});
        table.metadata.emplace_back("integral", trapezoid(xs, vals));
    } else {
        const auto d = one_particle_density(params, xs);
        table.columns = {"x", "n"};
        for (std::size_t i = 0; i < xs.size(); ++i) table.rows.push_back({xs[i], d.values[i]});
        table.metadata.emplace_back("integral", trapezoid(xs, d.values));
    }
    table.metadata.emplace_back("source", t <= 1.0 ? "analytic kernel" : "wavefunction oracle");
    return table;
}

std::vector<double> pair_axis(const RunConfig& c) {
    const double t = c.t;
    const double hw = given(c.half_width) ? c.half_width : 2.5 * std::max(1.0, t);
    const int pts = c.points > 0 ? c.points
                                 : std::min(401, static_cast<int>(std::ceil(2.0 * hw / (std::min(t, 1.0) / 4.0))) + 1);
    return axis(hw, pts);
}

Table cmd_pairdensity(const RunConfig& c) {
    const double t = require_t(c);
    const auto xs = pair_axis(c);
    const auto pd = two_particle_density(make_params(c.n_particles, t), xs, xs);
    Table table = base_table(c);
    table.metadata.emplace_back("normalization", "N(N-1)/2");
    table.metadata.emplace_back("raw_scale", pd.norm_integral / (0.5 * c.n_particles * (c.n_particles - 1)));
    table.columns = {"x", "y", "n_xy", "n_xy_raw"};
    const double raw = pd.norm_integral / (0.5 * c.n_particles * (c.n_particles - 1));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            table.rows.push_back({xs[i], xs[j], pd.values(i, j), pd.values(i, j) * raw});
    return table;
}

Table cmd_correlation(const RunConfig& c) {
    const double t = require_t(c);
    const auto params = make_params(c.n_particles, t);
    const auto xs = pair_axis(c);
    const auto pd = two_particle_density(params, xs, xs);
    const auto n1 = one_particle_density(params, xs);
    const auto cf = correlation_function(pd, n1);
    Table table = base_table(c);
    table.columns = {"x", "y", "C", "masked"};
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            table.rows.push_back({xs[i], xs[j], cf.values(i, j),
                                  static_cast<long long>(cf.mask[j * xs.size() + i])});
    return table;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    acceptance::Options opt;
    opt.quick = c.quick;
    opt.tolerance_scale = c.tolerance_scale;
    bool ok = true;
    std::vector<int> ids = c.criteria;
    if (ids.empty())
        for (int i = 1; i <= acceptance::kCriterionCount; ++i) ids.push_back(i);
    for (int id : ids) {
        const auto r = acceptance::run_criterion(id, opt);
        out << acceptance::format_result(r) << std::flush;
        ok = ok && r.status != acceptance::Status::failed;
    }
    out << (ok ? "verify: all criteria passed\n" : "verify: FAILED\n");
    return ok ? kExitOk : kExitNumerical;
}

void emit(const Table& table, const RunConfig& c, std::ostream& out) {
    auto write = [&](std::ostream& os) {
        if (c.format == "json") {
            write_json(table, os);
        } else {
            write_csv(table, os);
        }
    };
    if (c.output == "-") {
        write(out);
        return;
    }
    std::ofstream file(c.output, std::ios::binary);
    if (!file) throw ValidationError("cannot open output file " + c.output);
    write(file);
}

/// key=value lines appended after the command-line flags so they take precedence.
std::vector<std::string> config_args(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("config line without '=': " + line);
        auto key = line.substr(0, eq), value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args = raw_args;
    try {
        for (std::size_t i = 0; i < raw_args.size(); ++i) {
            std::string path;
            if (raw_args[i] == "--config" && i + 1 < raw_args.size()) path = raw_args[i + 1];
            if (raw_args[i].rfind("--config=", 0) == 0) path = raw_args[i].substr(9);
            if (!path.empty()) {
                const auto extra = config_args(path);
                args.insert(args.end(), extra.begin(), extra.end());
            }
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    RunConfig c;
    CLI::App app{"Natural occupations and densities of harmonically interacting fermions"};
    app.name("fermirdm");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;

    auto common = [&](CLI::App* sub, bool with_n, bool with_grid) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        if (with_n) sub->add_option("--n", c.n_particles, "particle number")->check(CLI::Range(2, kMaxParticles));
        sub->add_option("--t", c.t, "length-scale ratio l+/l-")->check(CLI::PositiveNumber);
        if (with_grid) {
            sub->add_option("--points", c.points, "grid points");
            sub->add_option("--half-width", c.half_width, "grid half-width");
        }
        sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output,-o", c.output, "output path, '-' for stdout");
        sub->add_option("--config", config_path, "key=value file; its values override flags");
    };

    auto* spectrum = app.add_subcommand("spectrum", "occupation spectrum");
    common(spectrum, true, true);
    spectrum->add_option("--method", c.method, "nystrom | schrodinger | harmonic | tail")
        ->check(CLI::IsMember({"nystrom", "schrodinger", "harmonic", "tail"}));
    spectrum->add_option("--kmax", c.k_max, "number of occupations")->check(CLI::Range(1, 100000));

    auto* potential = app.add_subcommand("potential", "effective momentum-space potential and its extrema");
    common(potential, true, false);
    potential->add_option("--samples", c.samples, "sample count");
    potential->add_option("--range", c.p_range, "largest sqrt(t) p")->check(CLI::PositiveNumber);

    auto* scan = app.add_subcommand("parity-scan", "parity verdict over a range of N");
    common(scan, false, false);
    scan->add_option("--n-min", c.n_min, "smallest N");
    scan->add_option("--n-max", c.n_max, "largest N");

    auto* density = app.add_subcommand("density", "one-particle density n(x)");
    common(density, true, true);
    density->add_flag("--rescaled", c.rescaled, "emit t n(t x)");

    auto* pair = app.add_subcommand("pairdensity", "two-particle density n(x,y)");
    common(pair, true, true);
    auto* corr = app.add_subcommand("correlation", "correlation function n(x,y)/(n(x) n(y))");
    common(corr, true, true);

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    verify->add_flag("--quick", c.quick, "skip the t = 0.01 solves");
    verify->add_option("--tolerance-scale", c.tolerance_scale, "multiply every tolerance");
    verify->add_option("--criterion", c.criteria, "criteria to run")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->check(CLI::Range(1, acceptance::kCriterionCount));
    verify->add_option("--config", config_path, "key=value file");

    std::vector<const char*> argv{"fermirdm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        c.subcommand = app.get_subcommands().front()->get_name();
        if (c.subcommand == "verify") return cmd_verify(c, out);
        if (c.subcommand == "parity-scan") {
            bool violation = false;
            const auto table = cmd_parity_scan(c, violation);
            emit(table, c, out);
            if (violation) {
                err << "error: parity rule violated for at least one N\n";
                return kExitNumerical;
            }
            return kExitOk;
        }
        Table table;
        if (c.subcommand == "spectrum") table = cmd_spectrum(c);
        else if (c.subcommand == "potential") table = cmd_potential(c);
        else if (c.subcommand == "density") table = cmd_density(c);
        else if (c.subcommand == "pairdensity") table = cmd_pairdensity(c);
        else table = cmd_correlation(c);
        emit(table, c, out);
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace fermirdm::cli

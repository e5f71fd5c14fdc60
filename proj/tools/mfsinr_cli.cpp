// Command-line front end: distribution/rate evaluators, figure-data emitters,
// and a self-test (release gate) with a negative control.
//
// Output files are comma-separated with a '# key = value' metadata header that
// embeds the fully resolved run configuration, so every output file can be fed
// back through --config to reproduce itself bit-for-bit.
//
// Exit codes: 0 success, 1 usage error, 2 numerical-budget failure,
// 3 self-test failure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mfsinr/charfn.hpp"
#include "mfsinr/errors.hpp"
#include "mfsinr/inversion.hpp"
#include "mfsinr/montecarlo.hpp"
#include "mfsinr/quadrature.hpp"
#include "mfsinr/rate.hpp"
#include "mfsinr/sinr_dist.hpp"
#include "mfsinr/special.hpp"

namespace {

using namespace mfsinr;

constexpr const char* kArtifactVersion = "mfsinr 1.0.0";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::domain_error("cannot parse " + what + " from '" + s + "'");
    }
}

long long parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::domain_error("cannot parse " + what + " from '" + s + "'");
    }
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<int> out;
    for (const auto& part : split(s, ','))
        out.push_back(static_cast<int>(parse_int(trim(part), what)));
    if (out.empty()) throw std::domain_error(what + ": empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_double(trim(part), what));
    if (out.empty()) throw std::domain_error(what + ": empty list");
    return out;
}

// Grid spec "start:stop:points:lin|log".
struct GridSpec {
    double lo = 0.0, hi = 0.0;
    int n = 0;
    bool logscale = false;
};

GridSpec parse_grid(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 4)
        throw std::domain_error("grid must be start:stop:points:lin|log, got '" + s + "'");
    GridSpec g;
    g.lo = parse_double(parts[0], "grid start");
    g.hi = parse_double(parts[1], "grid stop");
    g.n = static_cast<int>(parse_int(parts[2], "grid points"));
    if (parts[3] == "log")
        g.logscale = true;
    else if (parts[3] == "lin")
        g.logscale = false;
    else
        throw std::domain_error("grid scale must be lin or log, got '" + parts[3] + "'");
    if (g.n < 1) throw std::domain_error("grid needs at least 1 point");
    if (g.n == 1) {
        if (g.lo != g.hi) throw std::domain_error("1-point grid requires start == stop");
        return g;
    }
    if (!(g.hi > g.lo)) throw std::domain_error("grid requires stop > start");
    if (g.logscale && !(g.lo > 0.0)) throw std::domain_error("log grid requires start > 0");
    return g;
}

std::vector<double> make_grid(const GridSpec& g) {
    if (g.n == 1) return {g.lo};
    if (g.logscale) return log_grid(g.lo, g.hi, g.n);
    std::vector<double> out(g.n);
    for (int i = 0; i < g.n; ++i) out[i] = g.lo + (g.hi - g.lo) * i / (g.n - 1);
    out.front() = g.lo;
    out.back() = g.hi;
    return out;
}

// ---------------------------------------------------------------------------
// Run configuration: every field that affects an output is embedded in that
// output's metadata header, and can be re-read through --config.

struct RunConfig {
    std::string subcommand;
    int L = 8, K = 4;
    double pt = 10.0;
    std::string pt_unit = "linear";  // {linear, db}
    double sigma2 = 1.0;
    double gamma = 0.8;
    std::string grid, grid_left, grid_right;
    std::string methods;
    std::string L_list, pt_list;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    unsigned shards = 0;
    double abs_tol = 1e-9, rel_tol = 1e-7;
    int max_panels = 2000;
    double truncation_tol = 1e-12, t_min = 1e-10;
    std::string out;
    std::string config_path;
    bool negative_control = false;

    double to_linear(double p) const {
        if (pt_unit == "linear") return p;
        if (pt_unit == "db") return std::pow(10.0, p / 10.0);
        throw std::domain_error("pt-unit must be linear or db, got '" + pt_unit + "'");
    }
    double linear_pt() const { return to_linear(pt); }

    SystemConfig sys(int l, double linear_power) const {
        SystemConfig cfg;
        cfg.L = l;
        cfg.K = K;
        cfg.p_t = linear_power;
        cfg.sigma2 = sigma2;
        cfg.validate();
        return cfg;
    }

    QuadratureSpec qspec() const {
        QuadratureSpec q;
        q.abs_tol = abs_tol;
        q.rel_tol = rel_tol;
        q.max_panels = max_panels;
        q.truncation_tol = truncation_tol;
        q.t_min = t_min;
        q.validate();
        return q;
    }

    mc::McSpec mcspec() const {
        mc::McSpec m;
        m.n_samples = samples;
        m.seed = seed;
        m.shards = shards;
        m.validate();
        return m;
    }
};

void apply_command_defaults(RunConfig& rc) {
    if (rc.subcommand == "cdf" || rc.subcommand == "pdf") {
        rc.grid = "0.001:1000:200:log";
        rc.methods = "exact";
    } else if (rc.subcommand == "outage") {
        rc.methods = "exact";
    } else if (rc.subcommand == "rate") {
        rc.methods = "mc,robust,jensen,asymptotic";
    } else if (rc.subcommand == "fig1") {
        rc.grid = "-10:30:41:lin";
        rc.pt_unit = "db";
        rc.L_list = "4,8";
        rc.K = 4;
        rc.sigma2 = 1.0;
        rc.gamma = 0.8;
        rc.out = "fig1.csv";
    } else if (rc.subcommand == "fig2") {
        rc.grid_left = "0.02:1.2:60:lin";
        rc.grid_right = "0.05:2.4:60:lin";
        rc.pt_list = "1,10,100,1000";
        rc.L_list = "16,64,256";
        rc.L = 8;
        rc.K = 4;
        rc.pt = 10.0;
        rc.pt_unit = "linear";
        rc.sigma2 = 1.0;
        rc.max_panels = 4000;
        rc.out = "fig2.csv";
    } else if (rc.subcommand == "fig3") {
        rc.grid = "-10:30:41:lin";
        rc.pt_unit = "db";
        rc.K = 6;
        rc.L_list = "8,12";
        rc.sigma2 = 1.0;
        rc.out = "fig3.csv";
    } else if (rc.subcommand == "selftest") {
        rc.samples = 10000000;
    }
}

// Sets one key from a config file; unknown keys are ignored so that any
// previous output file (whose header holds extra metadata) is a valid config.
void set_config_key(RunConfig& rc, const std::string& key, const std::string& value) {
    if (key == "L") rc.L = static_cast<int>(parse_int(value, key));
    else if (key == "K") rc.K = static_cast<int>(parse_int(value, key));
    else if (key == "pt") rc.pt = parse_double(value, key);
    else if (key == "pt_unit") rc.pt_unit = value;
    else if (key == "sigma2") rc.sigma2 = parse_double(value, key);
    else if (key == "gamma") rc.gamma = parse_double(value, key);
    else if (key == "grid") rc.grid = value;
    else if (key == "grid_left") rc.grid_left = value;
    else if (key == "grid_right") rc.grid_right = value;
    else if (key == "methods") rc.methods = value;
    else if (key == "L_list") rc.L_list = value;
    else if (key == "pt_list") rc.pt_list = value;
    else if (key == "samples") rc.samples = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "seed") rc.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "shards") rc.shards = static_cast<unsigned>(parse_int(value, key));
    else if (key == "abs_tol") rc.abs_tol = parse_double(value, key);
    else if (key == "rel_tol") rc.rel_tol = parse_double(value, key);
    else if (key == "max_panels") rc.max_panels = static_cast<int>(parse_int(value, key));
    else if (key == "truncation_tol") rc.truncation_tol = parse_double(value, key);
    else if (key == "t_min") rc.t_min = parse_double(value, key);
    // "artifact", "subcommand", "columns" and future metadata keys: ignored.
}

void apply_config_file(RunConfig& rc, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot read config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        std::string s = line;
        std::size_t i = 0;
        while (i < s.size() && s[i] == '#') ++i;
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        s = s.substr(i);
        const std::size_t pos = s.find(" = ");
        if (pos == std::string::npos) continue;
        set_config_key(rc, trim(s.substr(0, pos)), trim(s.substr(pos + 3)));
    }
}

// ---------------------------------------------------------------------------
// Output tables.

struct TableWriter {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }

    std::string render() const {
        std::string s;
        for (const auto& [k, v] : meta) s += "# " + k + " = " + v + "\n";
        s += "# columns = " + join(columns, ",") + "\n";
        s += join(columns, ",") + "\n";
        for (const auto& row : rows) s += join(row, ",") + "\n";
        return s;
    }
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::domain_error("cannot open output file: " + path);
    f << content;
    if (!f) throw std::domain_error("failed writing output file: " + path);
}

void add_sys_meta(TableWriter& w, const RunConfig& rc) {
    w.add_meta("L", std::to_string(rc.L));
    w.add_meta("K", std::to_string(rc.K));
    w.add_meta("pt", fmt(rc.pt));
    w.add_meta("pt_unit", rc.pt_unit);
    w.add_meta("sigma2", fmt(rc.sigma2));
}

void add_quad_meta(TableWriter& w, const RunConfig& rc) {
    w.add_meta("abs_tol", fmt(rc.abs_tol));
    w.add_meta("rel_tol", fmt(rc.rel_tol));
    w.add_meta("max_panels", std::to_string(rc.max_panels));
    w.add_meta("truncation_tol", fmt(rc.truncation_tol));
    w.add_meta("t_min", fmt(rc.t_min));
}

void add_mc_meta(TableWriter& w, const RunConfig& rc) {
    w.add_meta("samples", std::to_string(rc.samples));
    w.add_meta("seed", std::to_string(rc.seed));
    w.add_meta("shards", std::to_string(rc.shards));
}

TableWriter make_table(const RunConfig& rc) {
    TableWriter w;
    w.add_meta("artifact", kArtifactVersion);
    w.add_meta("subcommand", rc.subcommand);
    return w;
}

// Exit code once every analytic evaluation of a run is tallied: total failure
// is an error, partial failure degrades to nan rows but still warns on stderr
// so scripts that only watch the exit code are not silently handed gaps.
int analytic_exit(std::size_t attempts, std::size_t failures) {
    if (attempts > 0 && failures == attempts) {
        std::cerr << "error: every analytic point failed its numerical budget\n";
        return 2;
    }
    if (failures > 0) {
        std::cerr << "warning: " << failures << " of " << attempts
                  << " analytic points failed their numerical budget (nan in output)\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// cdf / pdf / outage

int run_distribution(const RunConfig& rc, CurveKind kind, bool single_point) {
    const std::vector<double> grid =
        single_point ? std::vector<double>{rc.gamma} : make_grid(parse_grid(rc.grid));
    const SystemConfig cfg = rc.sys(rc.L, rc.linear_pt());
    const QuadratureSpec q = rc.qspec();

    const auto methods = split(rc.methods, ',');
    if (methods.empty() || rc.methods.empty()) throw std::domain_error("no methods requested");
    for (const auto& m : methods) {
        const bool known = m == "exact" || m == "beta_approx" || m == "high_snr_beta" ||
                           m == "monte_carlo";
        if (!known) throw std::domain_error("unknown method '" + m + "'");
        if (kind == CurveKind::pdf && m != "exact")
            throw std::domain_error("pdf supports only the exact method, got '" + m + "'");
    }

    TableWriter w = make_table(rc);
    add_sys_meta(w, rc);
    if (single_point)
        w.add_meta("gamma", fmt(rc.gamma));
    else
        w.add_meta("grid", rc.grid);
    w.add_meta("methods", rc.methods);
    add_mc_meta(w, rc);
    add_quad_meta(w, rc);

    w.columns.push_back("gamma");
    std::vector<std::vector<std::string>> cols;  // per-method rendered columns
    std::size_t analytic_attempts = 0, analytic_failures = 0;
    const auto append_analytic = [&](const std::string& m, const DistributionCurve& c) {
        std::vector<std::string> col, err;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            col.push_back(fmt(c.ok[i] ? c.values[i] : kNaN));
            err.push_back(fmt(c.ok[i] ? c.error_estimates[i] : kInf));
            ++analytic_attempts;
            if (!c.ok[i]) ++analytic_failures;
        }
        w.columns.push_back(m);
        w.columns.push_back(m + "_err");
        cols.push_back(std::move(col));
        cols.push_back(std::move(err));
    };
    for (const auto& m : methods) {
        if (m == "exact") {
            append_analytic(m, kind == CurveKind::cdf ? sinr_cdf_exact(grid, cfg, q)
                                                      : sinr_pdf_exact(grid, cfg, q));
        } else if (m == "beta_approx") {
            append_analytic(m, sinr_cdf_beta_approx(grid, cfg, q));
        } else if (m == "high_snr_beta") {
            append_analytic(m, sinr_cdf_high_snr_beta(grid, cfg));
        } else {  // monte_carlo (cdf only; rejected above for pdf)
            const std::vector<double> samples = mc::sample_sinr_direct(cfg, rc.mcspec());
            const std::vector<double> emp = mc::empirical_cdf(samples, grid);
            std::vector<std::string> col;
            for (double v : emp) col.push_back(fmt(v));
            w.columns.push_back(m);
            cols.push_back(std::move(col));
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row{fmt(grid[i])};
        for (const auto& c : cols) row.push_back(c[i]);
        w.rows.push_back(std::move(row));
    }
    write_output(rc.out, w.render());
    return analytic_exit(analytic_attempts, analytic_failures);
}

// ---------------------------------------------------------------------------
// rate

int run_rate(const RunConfig& rc) {
    const SystemConfig cfg = rc.sys(rc.L, rc.linear_pt());
    const auto methods = split(rc.methods, ',');
    for (const auto& m : methods)
        if (m != "mc" && m != "robust" && m != "jensen" && m != "asymptotic")
            throw std::domain_error("unknown rate method '" + m + "'");

    TableWriter w = make_table(rc);
    add_sys_meta(w, rc);
    w.add_meta("methods", rc.methods);
    add_mc_meta(w, rc);
    w.columns = {"method", "value", "std_error", "n_samples"};
    for (const auto& m : methods) {
        if (m == "mc") {
            const RateEstimate est = ergodic_rate_mc(cfg, rc.mcspec());
            w.rows.push_back({m, fmt(est.mean), fmt(est.std_error),
                              std::to_string(est.n_samples)});
        } else if (m == "robust") {
            w.rows.push_back({m, fmt(ergodic_rate_robust(cfg)), fmt(0.0), "0"});
        } else if (m == "jensen") {
            w.rows.push_back({m, fmt(ergodic_rate_jensen(cfg)), fmt(0.0), "0"});
        } else {
            const double c = static_cast<double>(rc.L) / rc.K;
            w.rows.push_back(
                {m, fmt(ergodic_rate_asymptotic(c, cfg.p_t, cfg.sigma2)), fmt(0.0), "0"});
        }
    }
    write_output(rc.out, w.render());
    return 0;
}

// ---------------------------------------------------------------------------
// fig1: outage probability vs transmit power, one column set per antenna count

int run_fig1(const RunConfig& rc) {
    const std::vector<double> pts = make_grid(parse_grid(rc.grid));
    const std::vector<int> Ls = parse_int_list(rc.L_list, "L_list");
    const QuadratureSpec q = rc.qspec();

    TableWriter w = make_table(rc);
    w.add_meta("K", std::to_string(rc.K));
    w.add_meta("sigma2", fmt(rc.sigma2));
    w.add_meta("gamma", fmt(rc.gamma));
    w.add_meta("grid", rc.grid);
    w.add_meta("pt_unit", rc.pt_unit);
    w.add_meta("L_list", rc.L_list);
    add_mc_meta(w, rc);
    add_quad_meta(w, rc);

    w.columns.push_back(rc.pt_unit == "db" ? "pt_db" : "pt");
    for (int L : Ls) {
        const std::string tag = "_L" + std::to_string(L);
        w.columns.push_back("outage_exact" + tag);
        w.columns.push_back("outage_exact_err" + tag);
        w.columns.push_back("outage_beta" + tag);
        w.columns.push_back("outage_beta_err" + tag);
        w.columns.push_back("outage_mc" + tag);
    }

    // One power-independent sample batch per antenna count serves the whole
    // power sweep.
    std::vector<mc::SigIntBatch> batches;
    for (int L : Ls) batches.push_back(mc::sample_sig_int(L, rc.K, rc.mcspec()));

    std::size_t attempts = 0, failures = 0;
    for (double p : pts) {
        const double linear = rc.to_linear(p);
        std::vector<std::string> row{fmt(p)};
        for (std::size_t li = 0; li < Ls.size(); ++li) {
            const SystemConfig cfg = rc.sys(Ls[li], linear);
            double v = kNaN, e = kInf;
            ++attempts;
            try {
                InversionResult det;
                v = sinr_cdf_exact_at(rc.gamma, cfg, q, &det);
                e = det.error_estimate;
            } catch (const budget_error&) {
                ++failures;
            } catch (const accuracy_error&) {
                ++failures;
            }
            row.push_back(fmt(v));
            row.push_back(fmt(e));
            v = kNaN;
            e = kInf;
            ++attempts;
            try {
                v = sinr_cdf_beta_approx_at(rc.gamma, cfg, q);
                e = q.abs_tol;
            } catch (const budget_error&) {
                ++failures;
            } catch (const accuracy_error&) {
                ++failures;
            }
            row.push_back(fmt(v));
            row.push_back(fmt(e));
            const auto& b = batches[li];
            const double scale = linear / rc.K;
            std::uint64_t below = 0;
            for (std::size_t j = 0; j < b.signal.size(); ++j) {
                const double sinr =
                    scale * b.signal[j] / (rc.sigma2 + scale * b.interference[j]);
                if (sinr <= rc.gamma) ++below;
            }
            row.push_back(fmt(static_cast<double>(below) / b.signal.size()));
        }
        w.rows.push_back(std::move(row));
    }
    write_output(rc.out, w.render());
    return analytic_exit(attempts, failures);
}

// ---------------------------------------------------------------------------
// fig2: two files — convergence of 1/((K-1) SINR) to its high-power limit
// (left) and of SINR/L to its large-antenna limit (right)

std::pair<std::string, std::string> fig2_paths(const std::string& base) {
    std::string stem = base, ext;
    const std::size_t slash = base.find_last_of('/');
    const std::size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        stem = base.substr(0, dot);
        ext = base.substr(dot);
    }
    return {stem + "_left" + ext, stem + "_right" + ext};
}

int run_fig2(const RunConfig& rc) {
    const std::vector<double> xs_left = make_grid(parse_grid(rc.grid_left));
    const std::vector<double> xs_right = make_grid(parse_grid(rc.grid_right));
    const std::vector<double> pt_values = parse_double_list(rc.pt_list, "pt_list");
    const std::vector<int> Ls = parse_int_list(rc.L_list, "L_list");
    const QuadratureSpec q = rc.qspec();
    if (rc.out.empty()) throw std::domain_error("fig2 requires --out (writes two files)");
    const auto [left_path, right_path] = fig2_paths(rc.out);

    const auto common_meta = [&](TableWriter& w) {
        w.add_meta("L", std::to_string(rc.L));
        w.add_meta("K", std::to_string(rc.K));
        w.add_meta("pt", fmt(rc.pt));
        w.add_meta("pt_unit", rc.pt_unit);
        w.add_meta("sigma2", fmt(rc.sigma2));
        w.add_meta("pt_list", rc.pt_list);
        w.add_meta("L_list", rc.L_list);
        w.add_meta("grid_left", rc.grid_left);
        w.add_meta("grid_right", rc.grid_right);
        add_quad_meta(w, rc);
    };

    bool any_ok = false;

    // Left: CDF of 1/((K-1) SINR) at fixed L for each power, plus the
    // power-independent limit curve.
    TableWriter wl = make_table(rc);
    common_meta(wl);
    wl.add_meta("panel", "left");
    wl.columns.push_back("x");
    for (double p : pt_values) {
        wl.columns.push_back("cdf_pt" + fmt(p));
        wl.columns.push_back("cdf_pt" + fmt(p) + "_err");
    }
    wl.columns.push_back("limit");
    for (double x : xs_left) {
        std::vector<std::string> row{fmt(x)};
        for (double p : pt_values) {
            const SystemConfig cfg = rc.sys(rc.L, rc.to_linear(p));
            double v = kNaN, e = kInf;
            try {
                v = scaled_inverse_sinr_cdf_at(x, cfg, q, false);
                e = q.abs_tol;
                any_ok = true;
            } catch (const budget_error&) {
            } catch (const accuracy_error&) {
            }
            row.push_back(fmt(v));
            row.push_back(fmt(e));
        }
        double lim = kNaN;
        try {
            const SystemConfig cfg = rc.sys(rc.L, rc.to_linear(pt_values.front()));
            lim = scaled_inverse_sinr_cdf_at(x, cfg, q, true);
            any_ok = true;
        } catch (const budget_error&) {
        } catch (const accuracy_error&) {
        }
        row.push_back(fmt(lim));
        wl.rows.push_back(std::move(row));
    }
    write_output(left_path, wl.render());

    // Right: CDF of SINR/L at fixed power for each antenna count, plus the
    // antenna-independent limit curve.
    TableWriter wr = make_table(rc);
    common_meta(wr);
    wr.add_meta("panel", "right");
    wr.columns.push_back("x");
    for (int L : Ls) {
        wr.columns.push_back("cdf_L" + std::to_string(L));
        wr.columns.push_back("cdf_L" + std::to_string(L) + "_err");
    }
    wr.columns.push_back("massive_limit");
    for (double x : xs_right) {
        std::vector<std::string> row{fmt(x)};
        for (int L : Ls) {
            const SystemConfig cfg = rc.sys(L, rc.linear_pt());
            double v = kNaN, e = kInf;
            try {
                InversionResult det;
                v = sinr_cdf_exact_at(L * x, cfg, q, &det);
                e = det.error_estimate;
                any_ok = true;
            } catch (const budget_error&) {
            } catch (const accuracy_error&) {
            }
            row.push_back(fmt(v));
            row.push_back(fmt(e));
        }
        const SystemConfig cfg = rc.sys(Ls.front(), rc.linear_pt());
        row.push_back(fmt(massive_limit_cdf_at(x, cfg)));
        wr.rows.push_back(std::move(row));
    }
    write_output(right_path, wr.render());

    if (!any_ok) {
        std::cerr << "error: every analytic point failed its numerical budget\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// fig3: ergodic rate vs transmit power, per antenna count

int run_fig3(const RunConfig& rc) {
    const std::vector<double> pts = make_grid(parse_grid(rc.grid));
    const std::vector<int> Ls = parse_int_list(rc.L_list, "L_list");

    TableWriter w = make_table(rc);
    w.add_meta("K", std::to_string(rc.K));
    w.add_meta("sigma2", fmt(rc.sigma2));
    w.add_meta("grid", rc.grid);
    w.add_meta("pt_unit", rc.pt_unit);
    w.add_meta("L_list", rc.L_list);
    add_mc_meta(w, rc);

    w.columns.push_back(rc.pt_unit == "db" ? "pt_db" : "pt");
    for (int L : Ls) {
        const std::string tag = "_L" + std::to_string(L);
        w.columns.push_back("rate_mc" + tag);
        w.columns.push_back("rate_mc_se" + tag);
        w.columns.push_back("rate_robust" + tag);
        w.columns.push_back("rate_jensen" + tag);
        w.columns.push_back("rate_asymptotic" + tag);
    }

    std::vector<mc::SigIntBatch> batches;
    for (int L : Ls) batches.push_back(mc::sample_sig_int(L, rc.K, rc.mcspec()));

    for (double p : pts) {
        const double linear = rc.to_linear(p);
        std::vector<std::string> row{fmt(p)};
        for (std::size_t li = 0; li < Ls.size(); ++li) {
            const SystemConfig cfg = rc.sys(Ls[li], linear);
            const RateEstimate est = ergodic_rate_from_sig_int(batches[li], cfg);
            row.push_back(fmt(est.mean));
            row.push_back(fmt(est.std_error));
            row.push_back(fmt(ergodic_rate_robust(cfg)));
            row.push_back(fmt(ergodic_rate_jensen(cfg)));
            const double c = static_cast<double>(Ls[li]) / rc.K;
            row.push_back(fmt(ergodic_rate_asymptotic(c, linear, rc.sigma2)));
        }
        w.rows.push_back(std::move(row));
    }
    write_output(rc.out, w.render());
    return 0;
}

// ---------------------------------------------------------------------------
// selftest

struct SelfTest {
    int passed = 0, failed = 0;

    void report(bool ok, const std::string& name, const std::string& detail) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        (ok ? passed : failed)++;
    }
};

int run_selftest(const RunConfig& rc) {
    SelfTest st;
    const QuadratureSpec q = rc.qspec();

    // --- special-function identities ---
    {
        double worst = 0.0;
        for (int k = 0; k <= 22; ++k) {
            const auto r = quad::gk15([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
            worst = std::max(worst, std::abs(r.value - 1.0 / (k + 1)));
        }
        st.report(worst < 1e-14, "quadrature panel exact on polynomials to degree 22",
                  "max err=" + fmt(worst));
    }
    {
        double worst = 0.0;
        const std::pair<int, double> cases[] = {{3, 2.0}, {8, 5.0}, {64, 70.0}};
        for (const auto& [n, x] : cases) {
            const double lhs = regularized_upper_gamma_int(n + 1, x);
            const double rhs = regularized_upper_gamma_int(n, x) +
                               std::exp(n * std::log(x) - x - ln_gamma(n + 1));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        st.report(worst < 1e-12, "incomplete-gamma recurrence", "max err=" + fmt(worst));
    }
    {
        const cplx z(2.0, 3.0);
        const cplx lhs = lower_incomplete_gamma_int(5, z);
        const cplx rhs = 4.0 * lower_incomplete_gamma_int(4, z) -
                         std::pow(z, 4) * std::exp(-z);
        const double rel = std::abs(lhs - rhs) / std::abs(lhs);
        st.report(rel < 1e-10, "complex incomplete-gamma recurrence", "rel err=" + fmt(rel));
    }
    {
        const cplx z(2.0, 2.0);
        const cplx lhs = bessel_k_int(5, z);
        const cplx rhs = bessel_k_int(3, z) + (8.0 / z) * bessel_k_int(4, z);
        const double rel = std::abs(lhs - rhs) / std::abs(lhs);
        st.report(rel < 1e-10, "Bessel-K recurrence", "rel err=" + fmt(rel));
    }
    {
        const cplx got = cf_interference_single(2.0, 2);
        const cplx it(0.0, 2.0);
        const cplx want = (std::exp(it) - 1.0) / it;
        const double err = std::abs(got - want);
        st.report(err < 1e-13, "interference CF collapses to uniform CF at L=2",
                  "err=" + fmt(err));
    }

    // --- known-CF inversion round trips ---
    {
        double worst = 0.0;
        const CfHandle cf_exp = [](double t) { return 1.0 / (1.0 - cplx(0.0, t)); };
        for (double z : {0.5, 1.0, 3.0}) {
            const double got = gil_pelaez_cdf(z, cf_exp, q).value;
            worst = std::max(worst, std::abs(got - (-std::expm1(-z))));
        }
        const CfHandle cf_g3 = [](double t) { return ipow(1.0 / (1.0 - cplx(0.0, t)), 3); };
        for (double z : {1.0, 3.0, 6.0}) {
            const double got = gil_pelaez_cdf(z, cf_g3, q).value;
            worst = std::max(worst, std::abs(got - regularized_lower_gamma_int(3, z)));
        }
        const double pdf_got = fourier_pdf(2.0, cf_g3, q).value;
        worst = std::max(worst, std::abs(pdf_got - 2.0 * std::exp(-2.0)));
        st.report(worst < 1e-7, "closed-form CF inversion round trips", "max err=" + fmt(worst));
    }

    // --- reduced-budget error path ---
    {
        QuadratureSpec tiny = q;
        tiny.max_panels = 5;
        bool threw = false;
        try {
            const SystemConfig cfg = rc.sys(8, 10.0);
            const CfHandle cf = [cfg](double t) { return cf_denominator(t, cfg); };
            (void)gil_pelaez_cdf(1.0, cf, tiny);
        } catch (const budget_error&) {
            threw = true;
        }
        st.report(threw, "exhausted panel budget raises the budget error",
                  threw ? "budget_error thrown" : "no error raised");
    }

    // --- Monte Carlo distributional validations ---
    const std::uint64_t n_ks = 100000;
    {
        mc::Xoshiro256pp rng(rc.seed);
        const int L = 8;
        SystemConfig two_user;
        two_user.L = L;
        two_user.K = 2;
        std::vector<double> xs(n_ks);
        for (auto& x : xs) {
            const mc::ChannelMatrix chan = mc::sample_channel(two_user, rng);
            double dre = 0, dim = 0, nrm_a = 0, nrm_b = 0;
            for (int j = 0; j < L; ++j) {
                const auto a = chan.h[j], b = chan.h[L + j];
                dre += a.real() * b.real() + a.imag() * b.imag();
                dim += a.imag() * b.real() - a.real() * b.imag();
                nrm_a += std::norm(a);
                nrm_b += std::norm(b);
            }
            x = (dre * dre + dim * dim) / (nrm_a * nrm_b);
        }
        const double d = mc::ks_statistic(
            xs, [L](double x) { return x <= 0 ? 0.0 : x >= 1 ? 1.0
                                       : 1.0 - std::pow(1.0 - x, L - 1); });
        const double crit = mc::ks_critical_value(n_ks, 0.001);
        st.report(d < crit, "single interference term matches its closed-form law",
                  "KS=" + fmt(d) + ", crit=" + fmt(crit));
    }
    {
        SystemConfig cfg = rc.sys(8, 10.0);
        mc::McSpec a;
        a.n_samples = n_ks;
        a.seed = rc.seed;
        a.shards = rc.shards;
        mc::McSpec b = a;
        b.seed = rc.seed + 0x9e3779b97f4a7c15ULL;
        const double d = mc::two_sample_ks(mc::sample_sinr_direct(cfg, a),
                                           mc::sample_sinr_decomposed(cfg, b));
        const double crit = mc::two_sample_ks_critical_value(n_ks, n_ks, 0.001);
        st.report(d < crit, "direct and decomposed sampling agree in distribution",
                  "KS=" + fmt(d) + ", crit=" + fmt(crit));
    }

    // --- cross-method consistency ---
    {
        const SystemConfig cfg = rc.sys(8, 10.0);
        double worst = 0.0;
        bool all_ok = true;
        const auto grid = log_grid(0.1 * cfg.L / cfg.K, 10.0 * cfg.L / cfg.K, 21);
        for (double g : grid) {
            try {
                worst = std::max(worst, std::abs(sinr_cdf_beta_approx_at(g, cfg, q) -
                                                 sinr_cdf_exact_at(g, cfg, q)));
            } catch (const std::runtime_error&) {
                all_ok = false;
            }
        }
        st.report(all_ok && worst < 1e-2, "interference-averaged approximation tracks exact CDF",
                  "sup dist=" + fmt(worst));
    }

    // --- analytic CDF vs empirical CDF: the central cross-validation ---
    {
        const SystemConfig cfg = rc.sys(8, 10.0);
        mc::McSpec ms = rc.mcspec();
        const mc::SigIntBatch batch = mc::sample_sig_int(cfg.L, cfg.K, ms);
        const std::vector<double> sinr = mc::sinr_from_sig_int(batch, cfg);
        const std::vector<double> grid = default_gamma_grid(cfg, 50);
        const std::vector<double> emp = mc::empirical_cdf(sinr, grid);
        const double band = mc::dkw_halfwidth(ms.n_samples, 0.01);
        double worst = 0.0;
        bool failed_eval = false;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double reference = kNaN;
            try {
                if (rc.negative_control) {
                    // Debug branch flip: deliberately corrupts the noise-term
                    // CF square root; the check below must then fail.
                    const CfHandle cf = [&cfg](double t) {
                        return cf_denominator(t, cfg, SqrtBranch::flipped);
                    };
                    reference = 1.0 - gil_pelaez_cdf(1.0 / grid[i], cf, q).value;
                } else {
                    reference = sinr_cdf_exact_at(grid[i], cfg, q);
                }
                worst = std::max(worst, std::abs(reference - emp[i]));
            } catch (const std::runtime_error&) {
                failed_eval = true;
            }
        }
        const bool ok = !failed_eval && worst <= band;
        st.report(ok, "analytic CDF lies in the 99% confidence band of the empirical CDF",
                  "sup dist=" + fmt(worst) + ", band=" + fmt(band) +
                      (failed_eval ? ", some points failed to evaluate" : "") +
                      (rc.negative_control ? ", negative control active" : ""));
    }

    std::cout << "selftest: " << st.passed << "/" << (st.passed + st.failed)
              << " checks passed\n";
    return st.failed == 0 ? 0 : 3;
}

// ---------------------------------------------------------------------------

void add_common_options(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--L", rc.L, "transmit antenna count (>= 2)");
    sub->add_option("--K", rc.K, "user count (>= 1)");
    sub->add_option("--pt", rc.pt, "total transmit power, in --pt-unit");
    sub->add_option("--pt-unit", rc.pt_unit, "power unit: linear or db")
        ->check(CLI::IsMember({"linear", "db"}));
    sub->add_option("--sigma2", rc.sigma2, "noise variance (> 0)");
    sub->add_option("--samples", rc.samples, "Monte Carlo sample count");
    sub->add_option("--seed", rc.seed, "Monte Carlo seed");
    sub->add_option("--shards", rc.shards, "worker threads (0 = hardware)");
    sub->add_option("--abs-tol", rc.abs_tol, "inversion absolute tolerance");
    sub->add_option("--rel-tol", rc.rel_tol, "inversion relative tolerance");
    sub->add_option("--max-panels", rc.max_panels, "inversion panel budget");
    sub->add_option("--truncation-tol", rc.truncation_tol, "tail truncation threshold");
    sub->add_option("--t-min", rc.t_min, "lower end of the frequency integration");
    sub->add_option("--config", rc.config_path,
                    "key = value config file (output files work); flags override");
    sub->add_option("--out", rc.out, "output file (default: stdout, or <cmd>.csv for figures)");
}

int dispatch(const RunConfig& rc) {
    if (rc.subcommand == "cdf") return run_distribution(rc, CurveKind::cdf, false);
    if (rc.subcommand == "pdf") return run_distribution(rc, CurveKind::pdf, false);
    if (rc.subcommand == "outage") return run_distribution(rc, CurveKind::cdf, true);
    if (rc.subcommand == "rate") return run_rate(rc);
    if (rc.subcommand == "fig1") return run_fig1(rc);
    if (rc.subcommand == "fig2") return run_fig2(rc);
    if (rc.subcommand == "fig3") return run_fig3(rc);
    if (rc.subcommand == "selftest") return run_selftest(rc);
    throw std::domain_error("unknown subcommand '" + rc.subcommand + "'");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig rc;
    try {
        if (argc > 1 && argv[1][0] != '-') rc.subcommand = argv[1];
        apply_command_defaults(rc);
        // Config file first (flags parsed afterwards override it).
        for (int i = 1; i < argc; ++i) {
            const std::string a = argv[i];
            if (a == "--config" && i + 1 < argc) {
                apply_config_file(rc, argv[i + 1]);
                break;
            }
            if (a.rfind("--config=", 0) == 0) {
                apply_config_file(rc, a.substr(9));
                break;
            }
        }

        CLI::App app{"Exact SINR distribution and ergodic rate under matched-filter "
                     "precoding over Rayleigh fading"};
        app.require_subcommand(0, 1);

        CLI::App* c_cdf = app.add_subcommand("cdf", "SINR CDF over a grid");
        add_common_options(c_cdf, rc);
        c_cdf->add_option("--grid", rc.grid, "start:stop:points:lin|log");
        c_cdf->add_option("--methods", rc.methods,
                          "comma list of exact,beta_approx,high_snr_beta,monte_carlo");

        CLI::App* c_pdf = app.add_subcommand("pdf", "SINR PDF over a grid");
        add_common_options(c_pdf, rc);
        c_pdf->add_option("--grid", rc.grid, "start:stop:points:lin|log");
        c_pdf->add_option("--methods", rc.methods, "comma list (exact)");

        CLI::App* c_outage = app.add_subcommand("outage", "outage probability at one threshold");
        add_common_options(c_outage, rc);
        c_outage->add_option("--gamma", rc.gamma, "SINR threshold");
        c_outage->add_option("--methods", rc.methods,
                             "comma list of exact,beta_approx,high_snr_beta,monte_carlo");

        CLI::App* c_rate = app.add_subcommand("rate", "ergodic rate estimates");
        add_common_options(c_rate, rc);
        c_rate->add_option("--methods", rc.methods, "comma list of mc,robust,jensen,asymptotic");

        CLI::App* c_fig1 = app.add_subcommand(
            "fig1", "outage vs power data (analytic exact, approximation, Monte Carlo)");
        add_common_options(c_fig1, rc);
        c_fig1->add_option("--gamma", rc.gamma, "SINR threshold");
        c_fig1->add_option("--grid", rc.grid, "power grid start:stop:points:lin|log, in --pt-unit");
        c_fig1->add_option("--L-list", rc.L_list, "comma list of antenna counts");

        CLI::App* c_fig2 = app.add_subcommand(
            "fig2", "limit-convergence CDF data (two files: _left and _right)");
        add_common_options(c_fig2, rc);
        c_fig2->add_option("--grid-left", rc.grid_left, "x grid for the power-limit panel");
        c_fig2->add_option("--grid-right", rc.grid_right, "x grid for the antenna-limit panel");
        c_fig2->add_option("--pt-list", rc.pt_list, "comma list of powers (left panel)");
        c_fig2->add_option("--L-list", rc.L_list, "comma list of antenna counts (right panel)");

        CLI::App* c_fig3 = app.add_subcommand(
            "fig3", "ergodic rate vs power data (Monte Carlo and analytic estimates)");
        add_common_options(c_fig3, rc);
        c_fig3->add_option("--grid", rc.grid, "power grid start:stop:points:lin|log, in --pt-unit");
        c_fig3->add_option("--L-list", rc.L_list, "comma list of antenna counts");

        CLI::App* c_selftest =
            app.add_subcommand("selftest", "invariant suite; nonzero exit on any failure");
        add_common_options(c_selftest, rc);
        c_selftest->add_flag("--negative-control", rc.negative_control,
                             "flip the noise-CF square-root branch; the distribution "
                             "cross-check must then fail (exit 3)");

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 1;
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 1;
        }
        return dispatch(rc);
    } catch (const budget_error& e) {
        std::cerr << "numerical budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const accuracy_error& e) {
        std::cerr << "accuracy failure: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

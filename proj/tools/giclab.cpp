#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "giclab.h"

namespace {

using json = nlohmann::json;

struct CliError {
    int exit_code;
    std::string code;
    std::string message;
};

[[noreturn]] void config_error(const std::string& message) { throw CliError{2, "config", message}; }

void check(giclab_status s) {
    if (s == GICLAB_OK) return;
    const int exit_code = (s == GICLAB_E_CONFIG || s == GICLAB_E_INVALID_ARGUMENT) ? 2 : 1;
    throw CliError{exit_code, giclab_status_string(s), giclab_last_error()};
}

using DistPtr = std::unique_ptr<giclab_dist, decltype(&giclab_dist_free)>;
using CodebookPtr = std::unique_ptr<giclab_codebook, decltype(&giclab_codebook_free)>;

struct Grid {
    double start = 0.0;
    double stop = 0.0;
    int points = 0;

    double at(int i) const { return points == 1 ? start : start + (stop - start) * i / (points - 1); }
};

Grid parse_grid(const std::string& text) {
    Grid g;
    std::istringstream in(text);
    std::string a, b, c, extra;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c, ':') ||
        std::getline(in, extra)) {
        config_error("grid '" + text + "' must look like start:stop:points");
    }
    try {
        std::size_t pos = 0;
        g.start = std::stod(a, &pos);
        if (pos != a.size()) throw std::invalid_argument(a);
        g.stop = std::stod(b, &pos);
        if (pos != b.size()) throw std::invalid_argument(b);
        g.points = std::stoi(c, &pos);
        if (pos != c.size()) throw std::invalid_argument(c);
    } catch (const std::logic_error&) {
        config_error("grid '" + text + "' has a malformed number");
    }
    return g;
}

void validate_grid(const Grid& g) {
    if (!std::isfinite(g.start) || !std::isfinite(g.stop)) config_error("grid bounds must be finite");
    if (g.start > g.stop) config_error("grid start must be <= stop");
    if (g.points < 2) config_error("grid needs at least 2 points");
    if (g.start < 0.0) config_error("grid start must be >= 0");
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Flags {
    std::optional<std::string> config, units, output, manifest, dist, grid, regime, method, g, estimator, codebook;
    std::optional<double> snr, snr1, snr2, a, b, gamma, snr_max, tol, rate, budget;
    std::optional<int> threads, grid_points, n, quad_order;
    std::optional<std::uint64_t> seed, samples, m, codebook_seed;
    bool deterministic = false;
    bool table = false;
};

class Context {
public:
    Flags flags;
    json config = json::object();
    json resolved = json::object();
    std::string command;

    void load_config() {
        if (!flags.config) return;
        std::ifstream in(*flags.config);
        if (!in) config_error("cannot read config file '" + *flags.config + "'");
        try {
            config = json::parse(in);
        } catch (const json::parse_error& e) {
            config_error("config file '" + *flags.config + "' is not valid JSON: " + e.what());
        }
        if (!config.is_object()) config_error("config file must hold a JSON object");
    }

    const json* lookup(const std::string& key) const {
        for (const auto& k : {key, dashed(key)}) {
            auto it = config.find(k);
            if (it != config.end() && !it->is_null()) return &*it;
        }
        return nullptr;
    }

    template <class T>
    std::optional<T> find(const std::optional<T>& flag, const std::string& key) {
        std::optional<T> v = flag;
        if (!v) {
            if (const json* j = lookup(key)) {
                try {
                    v = j->get<T>();
                } catch (const json::exception& e) {
                    config_error("config field '" + key + "': " + e.what());
                }
            }
        }
        if (v) resolved[key] = *v;
        return v;
    }

    template <class T>
    T get(const std::optional<T>& flag, const std::string& key, const T& fallback) {
        auto v = find(flag, key);
        if (!v) {
            resolved[key] = fallback;
            return fallback;
        }
        return *v;
    }

    template <class T>
    T require(const std::optional<T>& flag, const std::string& key) {
        auto v = find(flag, key);
        if (!v) config_error("missing required parameter --" + dashed(key));
        return *v;
    }

    std::string units() {
        auto u = get(flags.units, "units", std::string(flags.table ? "bits" : "nats"));
        if (u != "nats" && u != "bits") config_error("units must be 'nats' or 'bits'");
        return u;
    }

    double unit_scale() {
        return units() == "bits" ? 1.0 / std::log(2.0) : 1.0;
    }

    int threads() {
        if (flags.threads) {
            resolved["threads"] = *flags.threads;
            return *flags.threads;
        }
        if (const char* env = std::getenv("GICLAB_THREADS"); env && *env) {
            try {
                std::size_t pos = 0;
                const int t = std::stoi(env, &pos);
                if (pos != std::string(env).size()) throw std::invalid_argument(env);
                resolved["threads"] = t;
                return t;
            } catch (const std::logic_error&) {
                config_error(std::string("GICLAB_THREADS='") + env + "' is not an integer");
            }
        }
        return get(std::optional<int>{}, "threads", 0);
    }

    DistPtr distribution(const std::string& key, const std::string& fallback) {
        std::string text = fallback;
        if (flags.dist) {
            text = *flags.dist;
        } else if (const json* j = lookup(key)) {
            text = j->is_string() ? j->get<std::string>() : j->dump();
        }
        giclab_dist* raw = nullptr;
        check(giclab_dist_parse(text.c_str(), &raw));
        DistPtr d(raw, giclab_dist_free);
        char* spec = nullptr;
        check(giclab_dist_to_json(d.get(), &spec));
        resolved[key] = json::parse(spec);
        giclab_string_free(spec);
        return d;
    }

    Grid grid(const std::string& fallback) {
        Grid g;
        if (flags.grid) {
            g = parse_grid(*flags.grid);
        } else if (const json* j = lookup("grid")) {
            if (j->is_string()) {
                g = parse_grid(j->get<std::string>());
            } else if (j->is_object()) {
                try {
                    g.start = j->at("start").get<double>();
                    g.stop = j->at("stop").get<double>();
                    g.points = j->at("points").get<int>();
                } catch (const json::exception& e) {
                    config_error(std::string("config field 'grid': ") + e.what());
                }
            } else {
                config_error("config field 'grid' must be a string or an object");
            }
        } else {
            g = parse_grid(fallback);
        }
        validate_grid(g);
        resolved["grid"] = {{"start", g.start}, {"stop", g.stop}, {"points", g.points}};
        return g;
    }

    // --snr gives a single point, otherwise a grid.
    std::vector<double> abscissae(const std::string& fallback) {
        if (auto s = find(flags.snr, "snr")) return {*s};
        const Grid g = grid(fallback);
        std::vector<double> xs;
        for (int i = 0; i < g.points; ++i) xs.push_back(g.at(i));
        return xs;
    }

    giclab_quadrature quadrature() {
        giclab_quadrature q;
        giclab_quadrature_default(&q);
        if (const json* j = lookup("quadrature")) {
            try {
                q.order = j->value("order", q.order);
                q.adaptive_refine = j->value("adaptive_refine", q.adaptive_refine != 0) ? 1 : 0;
                q.abs_tol = j->value("abs_tol", q.abs_tol);
            } catch (const json::exception& e) {
                config_error(std::string("config field 'quadrature': ") + e.what());
            }
        }
        if (flags.quad_order) q.order = *flags.quad_order;
        resolved["quadrature"] = {{"order", q.order}, {"adaptive_refine", q.adaptive_refine != 0},
                                  {"abs_tol", q.abs_tol}};
        return q;
    }

    giclab_interference_params params(bool need_b = false) {
        giclab_interference_params p;
        p.snr1 = require(flags.snr1, "snr1");
        p.snr2 = require(flags.snr2, "snr2");
        p.a = require(flags.a, "a");
        p.b = need_b ? require(flags.b, "b") : get(flags.b, "b", 0.0);
        return p;
    }

    giclab_mc_options mc_options() {
        giclab_mc_options o;
        giclab_mc_options_default(&o);
        o.seed = get(flags.seed, "seed", o.seed);
        o.samples = get(flags.samples, "samples", o.samples);
        o.threads = threads();
        return o;
    }

    CodebookPtr codebook(std::uint64_t seed) {
        const auto kind = get(flags.codebook, "codebook", std::string("random"));
        const int n = require(flags.n, "n");
        if (n < 1) config_error("--n must be >= 1");
        giclab_codebook* raw = nullptr;
        if (kind == "antipodal") {
            if (n != 1) config_error("the antipodal codebook has n = 1");
            const double words[] = {1.0, -1.0};
            check(giclab_codebook_from_words(1, words, 2, 0, 1, &raw));
        } else if (kind == "random") {
            const auto cb_seed = get(flags.codebook_seed, "codebook_seed", seed);
            double rate = 0.0;
            if (auto m = find(flags.m, "m")) {
                if (*m < 2) config_error("--m must be >= 2");
                rate = std::log(static_cast<double>(*m)) / n;
                resolved["rate"] = rate;
            } else {
                rate = require(flags.rate, "rate");
            }
            check(giclab_codebook_random(static_cast<std::size_t>(n), rate, cb_seed, &raw));
        } else {
            config_error("codebook must be 'random' or 'antipodal'");
        }
        CodebookPtr cb(raw, giclab_codebook_free);
        resolved["codebook_m"] = giclab_codebook_m(cb.get());
        return cb;
    }

    void emit(const std::string& text) {
        auto path = get(flags.output, "output", std::string("-"));
        if (path == "-") {
            std::cout << text << std::flush;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) config_error("cannot write output file '" + path + "'");
        out << text;
        if (!out) config_error("failed writing output file '" + path + "'");
    }

    void stamp(json& j) const {
        if (!flags.deterministic) j["timestamp"] = utc_timestamp();
    }

    void write_manifest() {
        auto path = find(flags.manifest, "manifest");
        if (!path) return;
        json m = {{"command", command}, {"version", giclab_version()}, {"parameters", resolved}};
        stamp(m);
        std::ofstream out(*path, std::ios::binary);
        if (!out) config_error("cannot write manifest file '" + *path + "'");
        out << m.dump(2) << '\n';
    }

    std::string json_text(json j) const {
        stamp(j);
        return j.dump(2) + "\n";
    }

private:
    static std::string dashed(std::string key) {
        for (char& c : key) {
            if (c == '_') c = '-';
        }
        return key;
    }
};

struct CurveRow {
    double x;
    double y;
    std::string kind;
};

std::string curve_text(const std::vector<CurveRow>& rows, bool table) {
    std::string out;
    if (table) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%14s %20s  %s\n", "x", "y", "kind");
        out += buf;
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%14.6g %20.12g  %s\n", r.x, r.y, r.kind.c_str());
            out += buf;
        }
        return out;
    }
    out = "x,y,kind\n";
    for (const auto& r : rows) out += fmt(r.x) + "," + fmt(r.y) + "," + r.kind + "\n";
    return out;
}

struct QuantityRow {
    std::string quantity;
    giclab_mc_estimate e;
};

std::string quantity_text(const std::vector<QuantityRow>& rows) {
    std::string out = "quantity,value,stderr,samples,seed\n";
    for (const auto& r : rows) {
        out += r.quantity + "," + fmt(r.e.value) + "," + fmt(r.e.std_error) + "," + std::to_string(r.e.samples) +
               "," + std::to_string(r.e.seed) + "\n";
    }
    return out;
}

json pair_json(const giclab_rate_pair& r, double scale) { return json::array({r.rx * scale, r.rz * scale}); }

int cmd_mmse(Context& ctx) {
    auto d = ctx.distribution("dist", "gaussian");
    const auto q = ctx.quadrature();
    std::vector<CurveRow> rows;
    for (double snr : ctx.abscissae("0:10:101")) {
        double v = 0.0;
        check(giclab_mmse(d.get(), snr, &q, &v));
        rows.push_back({snr, v, "mmse"});
    }
    ctx.emit(curve_text(rows, ctx.flags.table));
    return 0;
}

int cmd_mi(Context& ctx) {
    auto d = ctx.distribution("dist", "gaussian");
    const auto q = ctx.quadrature();
    const auto method = ctx.get(ctx.flags.method, "method", std::string("auto"));
    using MiFn = giclab_status (*)(const giclab_dist*, double, const giclab_quadrature*, double*);
    MiFn fn = nullptr;
    if (method == "auto") fn = giclab_mutual_information;
    else if (method == "integrated") fn = giclab_mutual_information_integrated;
    else if (method == "direct") fn = giclab_mutual_information_direct;
    else config_error("method must be auto, integrated or direct");
    const double scale = ctx.unit_scale();
    const std::string kind = "mutual_information_" + ctx.units();
    std::vector<CurveRow> rows;
    for (double snr : ctx.abscissae("0:10:101")) {
        double v = 0.0;
        check(fn(d.get(), snr, &q, &v));
        rows.push_back({snr, v * scale, kind});
    }
    ctx.emit(curve_text(rows, ctx.flags.table));
    return 0;
}

int cmd_good_code(Context& ctx) {
    const double design = ctx.require(ctx.flags.snr, "snr");
    const Grid g = ctx.grid("0:2:201");
    const double scale = ctx.unit_scale();
    const std::string kind = "mutual_information_" + ctx.units();
    std::vector<CurveRow> rows;
    for (int i = 0; i < g.points; ++i) {
        double v = 0.0;
        check(giclab_good_code_mi(design, g.at(i), &v));
        rows.push_back({g.at(i), v * scale, kind});
    }
    for (int i = 0; i < g.points; ++i) {
        double v = 0.0;
        check(giclab_good_code_mmse(design, g.at(i), &v));
        rows.push_back({g.at(i), v, "mmse"});
    }
    ctx.emit(curve_text(rows, ctx.flags.table));
    return 0;
}

int cmd_interference(Context& ctx) {
    auto z = ctx.distribution("dist", "gaussian");
    const auto p = ctx.params();
    const auto q = ctx.quadrature();
    const Grid g = ctx.grid("0:1:101");
    const double scale = ctx.unit_scale();
    const std::string u = ctx.units();
    std::vector<CurveRow> mi, deriv, mse;
    for (int i = 0; i < g.points; ++i) {
        const double gamma = g.at(i);
        double v = 0.0;
        check(giclab_interference_mi(z.get(), gamma, &p, &q, &v));
        mi.push_back({gamma, v * scale, "interference_mi_" + u});
        if (gamma < 1.0) {
            check(giclab_interference_mi_derivative(z.get(), gamma, &p, &q, &v));
            deriv.push_back({gamma, v * scale, "interference_mi_derivative_" + u});
            check(giclab_mmse_w(z.get(), gamma, &p, &q, &v));
            mse.push_back({gamma, v, "mmse_w"});
        }
    }
    mi.insert(mi.end(), deriv.begin(), deriv.end());
    mi.insert(mi.end(), mse.begin(), mse.end());
    ctx.emit(curve_text(mi, ctx.flags.table));
    return 0;
}

int cmd_corners(Context& ctx) {
    const auto regime = ctx.require(ctx.flags.regime, "regime");
    const bool need_b = regime != "z";
    const auto p = ctx.params(need_b);
    const double scale = ctx.unit_scale();
    json out = {{"regime", regime}, {"units", ctx.units()},
                {"params", {{"snr1", p.snr1}, {"snr2", p.snr2}, {"a", p.a}, {"b", p.b}}}};
    if (regime == "z") {
        giclab_rate_pair c;
        check(giclab_corner_point_z(&p, &c));
        double threshold = 0.0;
        check(giclab_zero_mmse_threshold(&p, &threshold));
        out["corner"] = pair_json(c, scale);
        out["zero_mmse_threshold"] = threshold;
    } else if (regime == "weak") {
        giclab_rate_pair first, second;
        check(giclab_corner_points_weak(&p, &first, &second));
        out["corner"] = pair_json(second, scale);
        out["corners"] = json::array({pair_json(first, scale), pair_json(second, scale)});
    } else if (regime == "mixed") {
        giclab_rate_pair corner, mac;
        check(giclab_corner_point_mixed(&p, &corner, &mac));
        out["corner"] = pair_json(corner, scale);
        out["mac_bound"] = pair_json(mac, scale);
        int exists = 0;
        double lo = 0.0, hi = 0.0;
        check(giclab_tin_b_interval(&p, &exists, &lo, &hi));
        out["tin_b_interval"] = exists ? json::array({lo, hi}) : json(nullptr);
    } else {
        config_error("regime must be z, weak or mixed");
    }
    ctx.emit(ctx.json_text(out));
    return 0;
}

int report_verdict(Context& ctx, const json& report) {
    ctx.emit(ctx.json_text(report));
    if (report.at("pass").get<bool>()) return 0;
    throw CliError{1, "verification_failed", ctx.command + " did not meet its tolerance"};
}

int cmd_verify_immse(Context& ctx) {
    auto d = ctx.distribution("dist", "gaussian");
    const auto q = ctx.quadrature();
    const double snr_max = ctx.get(ctx.flags.snr_max, "snr_max", 10.0);
    const int grid = ctx.get(ctx.flags.grid_points, "grid_points", 100);
    const double tol = ctx.get(ctx.flags.tol, "tol", 1e-4);
    giclab_immse_report r;
    std::vector<giclab_immse_point> pts(grid > 1 ? static_cast<std::size_t>(grid - 1) : 0);
    check(giclab_verify_immse(d.get(), snr_max, grid, tol, &q, &r, pts.data(), pts.size()));
    json points = json::array();
    for (std::size_t i = 0; i < r.count && i < pts.size(); ++i) {
        points.push_back({{"snr", pts[i].snr}, {"derivative", pts[i].derivative},
                          {"half_mmse", pts[i].half_mmse}, {"abs_error", pts[i].abs_error}});
    }
    json out = {{"check", "immse"},          {"pass", r.pass != 0},   {"max_abs_error", r.max_abs_error},
                {"worst_snr", r.worst_snr},  {"tolerance", r.tolerance}, {"step", r.step},
                {"units", "nats"},           {"points", points}};
    return report_verdict(ctx, out);
}

int cmd_verify_chain_rule(Context& ctx) {
    auto z = ctx.distribution("dist", "gaussian");
    const auto p = ctx.params();
    const double gamma = ctx.get(ctx.flags.gamma, "gamma", 1.0);
    const double tol = ctx.get(ctx.flags.tol, "tol", 1e-9);
    giclab_chain_rule_report r;
    check(giclab_chain_rule_check(z.get(), gamma, &p, tol, &r));
    const double scale = ctx.unit_scale();
    json out = {{"check", "chain-rule"},
                {"pass", r.pass != 0},
                {"gamma", gamma},
                {"via_interference", r.via_interference * scale},
                {"via_joint", r.via_joint * scale},
                {"gap", r.gap * scale},
                {"tolerance", r.tolerance},
                {"units", ctx.units()}};
    return report_verdict(ctx, out);
}

int cmd_verify_spectrum(Context& ctx) {
    const int n = ctx.require(ctx.flags.n, "n");
    const double gamma = ctx.require(ctx.flags.gamma, "gamma");
    const double budget = ctx.get(ctx.flags.budget, "budget", 1.0);
    const double tol = ctx.get(ctx.flags.tol, "tol", 1e-6);
    if (n < 2 || n > 64) config_error("--n must lie in [2, 64]");
    std::vector<double> lambda(static_cast<std::size_t>(n));
    check(giclab_max_trace_mmse_spectrum(n, gamma, budget, lambda.data()));
    double worst = 0.0;
    for (double l : lambda) worst = std::max(worst, std::abs(l - budget));
    json out = {{"check", "spectrum"}, {"pass", worst <= tol}, {"n", n},          {"gamma", gamma},
                {"budget", budget},     {"spectrum", lambda}, {"max_deviation", worst}, {"tolerance", tol}};
    return report_verdict(ctx, out);
}

int cmd_simulate_mmse(Context& ctx) {
    const auto o = ctx.mc_options();
    auto cb = ctx.codebook(o.seed);
    const double snr = ctx.require(ctx.flags.snr, "snr");
    giclab_mc_estimate e;
    check(giclab_empirical_mmse_x(cb.get(), snr, &o, &e));
    ctx.emit(quantity_text({{"mmse_x", e}}));
    return 0;
}

int cmd_simulate_gap(Context& ctx) {
    const auto o = ctx.mc_options();
    auto cb = ctx.codebook(o.seed);
    const double snr = ctx.require(ctx.flags.snr, "snr");
    giclab_estimator_report r;
    check(giclab_estimator_gap(cb.get(), snr, &o, &r));
    ctx.emit(quantity_text({{"mmse_opt", r.mmse_opt}, {"mse_bitwise_linear", r.mse_bitwise_linear}, {"gap", r.gap}}));
    return 0;
}

int cmd_simulate_decomposition(Context& ctx) {
    const auto o = ctx.mc_options();
    auto cb = ctx.codebook(o.seed);
    auto z = ctx.distribution("dist", "gaussian");
    const auto p = ctx.params();
    const double gamma = ctx.require(ctx.flags.gamma, "gamma");
    const auto est = ctx.get(ctx.flags.estimator, "estimator", std::string("gaussian-approx"));
    giclab_z_estimator kind = GICLAB_Z_GAUSSIAN_APPROX;
    if (est == "exact") kind = GICLAB_Z_EXACT;
    else if (est != "gaussian-approx") config_error("estimator must be gaussian-approx or exact");
    giclab_decomposition_report r;
    check(giclab_w_decomposition(cb.get(), z.get(), gamma, &p, &o, kind, &r));
    const giclab_mc_estimate limit{r.limit_total, 0.0, 0, o.seed};
    ctx.emit(quantity_text({{"total", r.total},
                            {"term1", r.term1},
                            {"term2", r.term2},
                            {"cross1", r.cross1},
                            {"cross2", r.cross2},
                            {"residual", r.residual},
                            {"limit_total", limit}}));
    return 0;
}

int cmd_simulate_orthogonality(Context& ctx) {
    const auto o = ctx.mc_options();
    auto cb = ctx.codebook(o.seed);
    const double snr = ctx.require(ctx.flags.snr, "snr");
    const auto which = ctx.get(ctx.flags.g, "g", std::string("all"));
    const auto est = ctx.get(ctx.flags.estimator, "estimator", std::string("optimal"));
    giclab_estimator kind = GICLAB_EST_OPTIMAL;
    if (est == "linear") kind = GICLAB_EST_BITWISE_LINEAR;
    else if (est != "optimal") config_error("estimator must be optimal or linear");
    const std::vector<std::pair<std::string, giclab_test_function>> all = {
        {"identity", GICLAB_G_IDENTITY}, {"square", GICLAB_G_SQUARE}, {"clipped-cube", GICLAB_G_CLIPPED_CUBE}};
    std::vector<QuantityRow> rows;
    for (const auto& [name, g] : all) {
        if (which != "all" && which != name) continue;
        giclab_mc_estimate e;
        check(giclab_orthogonality_residual(cb.get(), snr, g, &o, kind, &e));
        rows.push_back({"orthogonality_" + name, e});
    }
    if (rows.empty()) config_error("g must be identity, square, clipped-cube or all");
    ctx.emit(quantity_text(rows));
    return 0;
}

void print_error(const CliError& e) {
    json report = {{"error", {{"code", e.code}, {"message", e.message}, {"exit_code", e.exit_code}}}};
    std::cerr << report.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"I-MMSE toolkit for the two-user Gaussian interference channel"};
    app.set_version_flag("--version", giclab_version());
    app.require_subcommand(1);

    Context ctx;
    Flags& f = ctx.flags;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON config file; flags override its fields");
        sub->add_option("--units", f.units, "nats or bits");
        sub->add_option("--output,-o", f.output, "output path, '-' for stdout");
        sub->add_option("--manifest", f.manifest, "write a JSON run manifest here");
        sub->add_option("--quad-order", f.quad_order, "starting Gauss-Hermite order");
        sub->add_flag("--deterministic", f.deterministic, "omit timestamps");
    };
    auto channel = [&](CLI::App* sub) {
        sub->add_option("--snr1", f.snr1, "snr of the intended user");
        sub->add_option("--snr2", f.snr2, "snr of the interferer");
        sub->add_option("--a", f.a, "cross gain at receiver 1, 0 < a < 1");
        sub->add_option("--b", f.b, "cross gain at receiver 2");
    };
    auto monte_carlo = [&](CLI::App* sub) {
        sub->add_option("--seed", f.seed, "RNG seed");
        sub->add_option("--samples", f.samples, "Monte Carlo samples");
        sub->add_option("--threads", f.threads, "worker cap, 0 = all cores (env GICLAB_THREADS)");
        sub->add_option("--n", f.n, "blocklength");
        sub->add_option("--m", f.m, "codeword count");
        sub->add_option("--rate", f.rate, "rate in nats, m = round(exp(rate*n))");
        sub->add_option("--codebook", f.codebook, "random or antipodal");
        sub->add_option("--codebook-seed", f.codebook_seed, "codebook seed (defaults to --seed)");
    };
    std::function<int(Context&)> handler;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                    int (*fn)(Context&)) {
        auto* sub = parent->add_subcommand(name, help);
        common(sub);
        sub->callback([&handler, &ctx, &app, fn, sub, parent] {
            handler = fn;
            ctx.command = parent == &app ? sub->get_name() : parent->get_name() + " " + sub->get_name();
        });
        return sub;
    };

    auto* mmse = leaf(&app, "mmse", "MMSE curve of a scalar input", cmd_mmse);
    mmse->add_option("--dist", f.dist, "preset name or JSON distribution");
    mmse->add_option("--snr", f.snr, "single snr");
    mmse->add_option("--grid", f.grid, "start:stop:points");
    mmse->add_flag("--table", f.table, "aligned text instead of CSV");

    auto* mi = leaf(&app, "mi", "mutual information curve of a scalar input", cmd_mi);
    mi->add_option("--dist", f.dist, "preset name or JSON distribution");
    mi->add_option("--snr", f.snr, "single snr");
    mi->add_option("--grid", f.grid, "start:stop:points");
    mi->add_option("--method", f.method, "auto, integrated or direct");
    mi->add_flag("--table", f.table, "aligned text instead of CSV");

    auto* good = leaf(&app, "good-code", "MI and MMSE of a good code versus gamma", cmd_good_code);
    good->add_option("--snr", f.snr, "design snr");
    good->add_option("--grid", f.grid, "gamma grid start:stop:points");
    good->add_flag("--table", f.table, "aligned text instead of CSV");

    auto* inter = leaf(&app, "interference", "interference MI, its derivative and mmse_w versus gamma",
                       cmd_interference);
    inter->add_option("--dist", f.dist, "interferer input distribution");
    inter->add_option("--grid", f.grid, "gamma grid start:stop:points");
    inter->add_flag("--table", f.table, "aligned text instead of CSV");
    channel(inter);

    auto* corners = leaf(&app, "corners", "corner points of the capacity region", cmd_corners);
    corners->add_option("--regime", f.regime, "z, weak or mixed");
    channel(corners);

    auto* verify = app.add_subcommand("verify", "numerical self-checks");
    verify->require_subcommand(1);
    auto* vi = leaf(verify, "immse", "finite-difference check of dI/dsnr = mmse/2", cmd_verify_immse);
    vi->add_option("--dist", f.dist, "preset name or JSON distribution");
    vi->add_option("--snr-max", f.snr_max, "largest snr");
    vi->add_option("--grid-points", f.grid_points, "grid size, >= 10");
    vi->add_option("--tol", f.tol, "pass threshold");
    auto* vc = leaf(verify, "chain-rule", "chain-rule consistency of the interference MI", cmd_verify_chain_rule);
    vc->add_option("--dist", f.dist, "interferer distribution (gaussian)");
    vc->add_option("--gamma", f.gamma, "gamma in [0, 1]");
    vc->add_option("--tol", f.tol, "pass threshold");
    channel(vc);
    auto* vs = leaf(verify, "spectrum", "max-trace MMSE spectrum is uniform", cmd_verify_spectrum);
    vs->add_option("--n", f.n, "dimension, 2..64");
    vs->add_option("--gamma", f.gamma, "gamma > 0");
    vs->add_option("--budget", f.budget, "per-component trace budget");
    vs->add_option("--tol", f.tol, "uniformity threshold");

    auto* simulate = app.add_subcommand("simulate", "finite-blocklength Monte Carlo");
    simulate->require_subcommand(1);
    auto* sm = leaf(simulate, "mmse", "codeword MMSE with exact posteriors", cmd_simulate_mmse);
    sm->add_option("--snr", f.snr, "gamma*snr");
    monte_carlo(sm);
    auto* sg = leaf(simulate, "gap", "optimal versus bit-wise linear estimator", cmd_simulate_gap);
    sg->add_option("--snr", f.snr, "gamma*snr");
    monte_carlo(sg);
    auto* sd = leaf(simulate, "decomposition", "MSE decomposition of the w estimator", cmd_simulate_decomposition);
    sd->add_option("--dist", f.dist, "interferer distribution");
    sd->add_option("--gamma", f.gamma, "gamma in (0, 1)");
    sd->add_option("--estimator", f.estimator, "gaussian-approx or exact");
    channel(sd);
    monte_carlo(sd);
    auto* so = leaf(simulate, "orthogonality", "E[(x - xhat) g(y)] for test functions g",
                    cmd_simulate_orthogonality);
    so->add_option("--snr", f.snr, "gamma*snr");
    so->add_option("--g", f.g, "identity, square, clipped-cube or all");
    so->add_option("--estimator", f.estimator, "optimal or linear");
    monte_carlo(so);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error({2, "config", e.what()});
        return 2;
    }

    giclab_set_warning_callback(
        [](const char* message, void*) { std::cerr << json{{"warning", message}}.dump() << '\n'; }, nullptr);
    try {
        ctx.load_config();
        const int rc = handler(ctx);
        ctx.write_manifest();
        return rc;
    } catch (const CliError& e) {
        try {
            ctx.write_manifest();
        } catch (const CliError&) {
        }
        print_error(e);
        return e.exit_code;
    } catch (const std::exception& e) {
        print_error({1, "internal", e.what()});
        return 1;
    }
}

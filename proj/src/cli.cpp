#include "sparse_smooth/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparse_smooth/arith.hpp"
#include "sparse_smooth/characters.hpp"
#include "sparse_smooth/construct.hpp"
#include "sparse_smooth/cyclotomic.hpp"
#include "sparse_smooth/digits.hpp"
#include "sparse_smooth/smoothcount.hpp"
#include "sparse_smooth/survey.hpp"

namespace sparse_smooth::cli {

namespace {

using json = nlohmann::ordered_json;
using u64 = std::uint64_t;

enum class Format { text, json, csv };

struct RunConfig {
    std::string subcommand;
    Format format = Format::text;
    std::string output_path;
    u64 seed = 1;
    unsigned threads = 0;
    arith::FactorEffort effort{};

    // construct-*
    double alpha = 1.0;
    unsigned r = 3;
    unsigned max_r = 6;
    bool no_certify = false;
    bool emit_value = false;
    // fermat-factor
    u64 k = 15;
    bool minus = false;
    // psi
    bool exact = false, ratio = false, trend = false;
    u64 x = 0, y = 0;
    double c = 2.0;
    double a_param = 2.0;
    std::vector<u64> xs;
    // survey
    unsigned n = 16;
    std::optional<double> theta;
    // chars-*
    unsigned n0 = 8, m = 0;
    u64 s = 0;
    std::string sigma;
    // entropy
    std::optional<double> gamma;
    bool want_theta0 = false;
};

struct Output {
    json params = json::object();
    json result = json::object();
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    std::optional<std::string> text;  // overrides the generic text rendering
    int exit_code = kExitOk;
};

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string dec(const ArbInt& v) { return v.get_str(); }

json factor_json(const arith::Factorization& f) {
    json out = json::object();
    json fs = json::array();
    for (const auto& pp : f.factors) fs.push_back({{"prime", dec(pp.prime)}, {"exponent", pp.exponent}});
    out["factors"] = std::move(fs);
    out["complete"] = f.complete;
    out["cofactor"] = dec(f.cofactor);
    return out;
}

std::string factor_text(const arith::Factorization& f) {
    std::string s;
    for (const auto& pp : f.factors) {
        if (!s.empty()) s += " * ";
        s += dec(pp.prime);
        if (pp.exponent > 1) s += "^" + std::to_string(pp.exponent);
    }
    if (!f.complete) s += (s.empty() ? "" : " * ") + std::string("[") + dec(f.cofactor) + "]";
    return s.empty() ? "1" : s;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return num(v.get<double>());
    if (v.is_null()) return "-";
    return v.dump();
}

void render_text(const json& obj, std::ostream& os, const std::string& indent = "") {
    for (const auto& [key, v] : obj.items()) {
        if (v.is_object()) {
            os << indent << key << ":\n";
            render_text(v, os, indent + "  ");
        } else if (v.is_array() && !v.empty() && v.front().is_object()) {
            os << indent << key << ":\n";
            for (const auto& row : v) {
                os << indent << " ";
                for (const auto& [rk, rv] : row.items())
                    os << ' ' << rk << '=' << (rv.is_structured() ? rv.dump() : scalar_text(rv));
                os << '\n';
            }
        } else if (v.is_array()) {
            os << indent << key << ':';
            for (const auto& e : v) os << ' ' << scalar_text(e);
            os << '\n';
        } else {
            os << indent << key << ": " << scalar_text(v) << '\n';
        }
    }
}

json effort_json(const arith::FactorEffort& e) {
    return {{"trial_bound", e.trial_bound}, {"rho_iterations", e.rho_iterations}, {"rho_attempts", e.rho_attempts}};
}

// ---- subcommands ----------------------------------------------------------

Output do_construct(const RunConfig& cfg, construct::Kind kind) {
    construct::ConstructOptions opts;
    opts.effort = cfg.effort;
    opts.max_r = cfg.max_r;
    opts.certify = !cfg.no_certify;

    Output o;
    construct::ConstructionReport rep;
    switch (kind) {
        case construct::Kind::theorem2:
            o.params = {{"alpha", cfg.alpha}, {"r", cfg.r}};
            rep = construct::construct_theorem2(cfg.alpha, cfg.r, opts);
            break;
        case construct::Kind::theorem3:
            o.params = {{"alpha", cfg.alpha}, {"r", cfg.r}};
            rep = construct::construct_theorem3(cfg.alpha, cfg.r, opts);
            break;
        case construct::Kind::balanced:
            o.params = {{"r", cfg.r}};
            rep = construct::construct_balanced(cfg.r, opts);
            break;
    }
    o.params["max_r"] = cfg.max_r;
    o.params["certify"] = opts.certify;
    if (opts.certify) o.params["effort"] = effort_json(cfg.effort);

    json& res = o.result;
    res["kind"] = std::string(construct::kind_name(rep.kind));
    if (kind != construct::Kind::balanced) res["alpha"] = rep.alpha;
    res["r"] = rep.r;
    res["k"] = dec(rep.k);
    if (kind == construct::Kind::balanced) res["k2"] = dec(rep.k2);
    res["ell"] = dec(rep.ell);
    res["n_bits"] = rep.n_bits;
    res["ones"] = rep.ones;
    res["zeros"] = rep.zeros;
    res["sparsity_bound"] = rep.sparsity_bound;
    res["binomial_log_sum"] = rep.binomial_log_sum;
    res["digit_ceiling"] = rep.digit_ceiling;
    res["degenerate"] = rep.degenerate;
    res["value"] = (cfg.emit_value || rep.n_bits <= 4096) ? json(dec(rep.value)) : json(nullptr);
    if (opts.certify) {
        json cert;
        cert["largest_prime_found"] = dec(rep.largest_prime_found);
        cert["smoothness_complete"] = rep.smoothness_complete;
        cert["log_y_target"] = rep.log_y_target ? json(*rep.log_y_target) : json(nullptr);
        std::optional<double> ex;
        if (rep.smoothness_complete && rep.log_y_target) ex = construct::smoothness_exponent(rep);
        cert["smoothness_exponent"] = ex ? json(*ex) : json(nullptr);
        res["certificate"] = std::move(cert);
        if (!rep.smoothness_complete) o.exit_code = kExitIncomplete;
    } else {
        res["certificate"] = nullptr;
    }

    for (const auto& [key, v] : res.items()) {
        if (key == "certificate" && v.is_object()) {
            for (const auto& [ck, cv] : v.items()) {
                o.csv_header.push_back(ck);
            }
        } else {
            o.csv_header.push_back(key);
        }
    }
    std::vector<std::string> row;
    for (const auto& [key, v] : res.items()) {
        if (key == "certificate" && v.is_object()) {
            for (const auto& [ck, cv] : v.items()) row.push_back(cv.is_null() ? "" : scalar_text(cv));
        } else {
            row.push_back(v.is_null() ? "" : (v.is_number_float() ? v.dump() : scalar_text(v)));
        }
    }
    o.csv_rows.push_back(std::move(row));
    return o;
}

Output do_fermat(const RunConfig& cfg) {
    Output o;
    o.params = {{"k", cfg.k}, {"sign", cfg.minus ? "minus" : "plus"}, {"effort", effort_json(cfg.effort)}};
    const auto f = cfg.minus ? cyclotomic::mersenne_like_factor(cfg.k, cfg.effort)
                             : cyclotomic::fermat_like_factor(cfg.k, cfg.effort);
    json& res = o.result;
    res["k"] = f.k;
    res["expression"] = "2^" + std::to_string(f.k) + (f.plus ? "+1" : "-1");
    res["value"] = dec(f.value());
    json pieces = json::array();
    for (const auto& p : f.pieces) {
        json pj = {{"index", p.d}, {"sign", p.sign}, {"magnitude", dec(p.magnitude)}};
        pj.update(factor_json(p.factors));
        pieces.push_back(std::move(pj));
    }
    res["pieces"] = std::move(pieces);
    res.update(factor_json(f.merged));
    res["largest_prime"] = dec(f.merged.largest_prime());
    res["smoothness_complete"] = f.merged.complete;
    res["reassembles"] = f.merged.reassemble() == f.value();
    if (!f.merged.complete) o.exit_code = kExitIncomplete;

    o.text = res["expression"].get<std::string>() + " = " + factor_text(f.merged) + "\n";
    o.csv_header = {"prime", "exponent", "certified"};
    for (const auto& pp : f.merged.factors) o.csv_rows.push_back({dec(pp.prime), std::to_string(pp.exponent), "true"});
    if (!f.merged.complete) o.csv_rows.push_back({dec(f.merged.cofactor), "1", "false"});
    return o;
}

Output do_psi(const RunConfig& cfg) {
    const int modes = int(cfg.exact) + int(cfg.ratio) + int(cfg.trend);
    if (modes != 1) throw std::invalid_argument("psi: choose exactly one of --exact, --ratio, --trend");
    Output o;
    if (cfg.exact) {
        o.params = {{"mode", "exact"}, {"x", cfg.x}, {"y", cfg.y}};
        const u64 v = smoothcount::psi_exact(cfg.x, cfg.y);
        o.result = {{"x", cfg.x}, {"y", cfg.y}, {"psi", v}};
        o.text = std::to_string(v) + "\n";
        o.csv_header = {"x", "y", "psi"};
        o.csv_rows.push_back({std::to_string(cfg.x), std::to_string(cfg.y), std::to_string(v)});
    } else if (cfg.ratio) {
        o.params = {{"mode", "ratio"}, {"x", cfg.x}, {"c", cfg.c}, {"A", cfg.a_param}};
        const auto r = smoothcount::psi_ratio_check(cfg.x, cfg.c, cfg.a_param);
        o.result = {{"x", r.x},         {"cx", r.cx},         {"y", r.y},
                    {"psi_x", r.psi_x}, {"psi_cx", r.psi_cx}, {"observed", r.observed},
                    {"predicted", r.predicted}};
        o.csv_header = {"x", "cx", "y", "psi_x", "psi_cx", "observed", "predicted"};
        o.csv_rows.push_back({std::to_string(r.x), std::to_string(r.cx), std::to_string(r.y), std::to_string(r.psi_x),
                              std::to_string(r.psi_cx), json(r.observed).dump(), json(r.predicted).dump()});
    } else {
        if (cfg.xs.empty()) throw std::invalid_argument("psi --trend: --xs needs at least one value");
        o.params = {{"mode", "trend"}, {"xs", cfg.xs}, {"A", cfg.a_param}};
        const auto ex = smoothcount::psi_exponent_trend(cfg.xs, cfg.a_param);
        json rows = json::array();
        o.csv_header = {"x", "y", "exponent"};
        for (std::size_t i = 0; i < ex.size(); ++i) {
            const u64 y = smoothcount::log_power_bound(cfg.xs[i], cfg.a_param);
            rows.push_back({{"x", cfg.xs[i]}, {"y", y}, {"exponent", ex[i]}});
            o.csv_rows.push_back({std::to_string(cfg.xs[i]), std::to_string(y), json(ex[i]).dump()});
        }
        o.result = {{"A", cfg.a_param}, {"limit", 1.0 - 1.0 / cfg.a_param}, {"rows", std::move(rows)}};
    }
    return o;
}

Output do_survey(const RunConfig& cfg) {
    Output o;
    o.params = {{"n", cfg.n}, {"A", cfg.a_param}, {"theta", cfg.theta ? json(*cfg.theta) : json(nullptr)}};
    survey::SurveyResult sr;
    if (cfg.theta) {
        sr = survey::survey_theorem1(cfg.n, cfg.a_param, *cfg.theta, cfg.threads);
    } else {
        if (!(cfg.a_param > 1.0)) throw std::invalid_argument("survey: A must exceed 1");
        const auto y = static_cast<u64>(std::floor(std::pow(static_cast<long double>(cfg.n), cfg.a_param)));
        sr = survey::survey_window(cfg.n, y, cfg.threads);
        sr.a_param = cfg.a_param;
    }
    json& res = o.result;
    res["n"] = sr.n;
    res["A"] = sr.a_param;
    res["theta"] = sr.theta ? json(*sr.theta) : json(nullptr);
    res["theta0"] = digits::theta0(cfg.a_param).theta0;
    res["y"] = sr.y;
    res["population"] = sr.population;
    res["max_zeros"] = sr.max_zeros;
    res["witness"] = sr.population ? json(sr.argmax) : json(nullptr);
    res["predicted_zeros"] = sr.predicted_zeros ? json(*sr.predicted_zeros) : json(nullptr);
    res["claim_holds"] = sr.claim_holds ? json(*sr.claim_holds) : json(nullptr);
    res["zero_histogram"] = sr.zero_histogram;
    o.csv_header = {"zeros", "count"};
    for (std::size_t z = 0; z < sr.zero_histogram.size(); ++z)
        o.csv_rows.push_back({std::to_string(z), std::to_string(sr.zero_histogram[z])});
    return o;
}

u64 char_index(const characters::CharacterIndex& chi) {
    return (u64{chi.sign_part} << (chi.modulus_exp - 2)) + chi.power_part;
}

Output do_chars_scan(const RunConfig& cfg) {
    Output o;
    o.params = {{"n0", cfg.n0}, {"m", cfg.m}, {"s", cfg.s}};
    const auto rep = characters::scan_short_sums(cfg.n0, cfg.m, cfg.s, cfg.threads);
    json& res = o.result;
    res["n0"] = rep.n0;
    res["m"] = rep.m;
    res["s"] = rep.s;
    res["principal_sum"] = rep.principal_sum;
    res["full_period_sums_vanish"] = rep.full_period_sums_vanish;
    res["bound"] = rep.rows.empty() ? 0.0 : rep.rows.front().bound;
    res["max_ratio"] = rep.max_ratio;
    res["argmax"] = {{"index", char_index(rep.argmax)},
                     {"sign_part", rep.argmax.sign_part},
                     {"power_part", rep.argmax.power_part}};
    json rows = json::array();
    o.csv_header = {"index", "abs_sum", "bound", "ratio"};
    for (const auto& row : rep.rows) {
        rows.push_back({{"index", char_index(row.chi)}, {"abs_sum", row.abs_sum}, {"ratio", row.ratio}});
        o.csv_rows.push_back({std::to_string(char_index(row.chi)), json(row.abs_sum).dump(), json(row.bound).dump(),
                              json(row.ratio).dump()});
    }
    res["rows"] = std::move(rows);
    json summary = res;
    summary.erase("rows");
    std::ostringstream os;
    render_text(summary, os);
    o.text = os.str();
    return o;
}

Output do_chars_count(const RunConfig& cfg) {
    Output o;
    const std::string sigma = cfg.sigma.empty() ? std::string(cfg.m, '0') : cfg.sigma;
    o.params = {{"n", cfg.n}, {"A", cfg.a_param}, {"n0", cfg.n0}, {"m", cfg.m}, {"sigma", sigma}};
    const auto pc = characters::count_prescribed_products(cfg.n, cfg.a_param, cfg.n0, cfg.m, sigma);
    json& res = o.result;
    res["n"] = pc.n;
    res["A"] = pc.a_param;
    res["n0"] = pc.n0;
    res["m"] = pc.m;
    res["s"] = pc.s;
    res["y"] = pc.y;
    res["w_lo"] = pc.w_lo;
    res["w_hi"] = pc.w_hi;
    res["w_size"] = pc.w_size;
    res["total"] = pc.total;
    res["main_term"] = pc.main_term;
    res["total_over_main"] = pc.total_over_main;
    res["odd_main_term"] = pc.odd_main_term;
    res["total_over_odd_main"] = pc.total_over_odd_main;
    res["identity_ok"] = pc.identity_ok;
    json samples = json::array();
    for (const auto& smp : pc.samples) {
        samples.push_back({{"k", smp.k},
                           {"brute", smp.brute},
                           {"via_characters", smp.via_characters},
                           {"rel_error", smp.rel_error},
                           {"exact_match", smp.exact_match ? json(*smp.exact_match) : json(nullptr)}});
    }
    res["samples"] = std::move(samples);
    res["t"] = pc.t;
    o.csv_header = {"k", "T"};
    for (std::size_t i = 0; i < pc.t.size(); ++i) o.csv_rows.push_back({std::to_string(i), std::to_string(pc.t[i])});
    return o;
}

Output do_lemmas(const RunConfig& cfg) {
    Output o;
    survey::LemmaBatteryConfig bc;
    bc.seed = cfg.seed;
    o.params = {{"seed", bc.seed},
                {"height_n_max", bc.height_n_max},
                {"subadditivity_pairs", bc.subadditivity_pairs},
                {"subadditivity_bits", bc.subadditivity_bits},
                {"log_binomial_n_max", bc.log_binomial_n_max},
                {"mertens_x", bc.mertens_x},
                {"tau_n_max", bc.tau_n_max},
                {"phi_r_max", bc.phi_r_max}};
    const auto checks = survey::run_lemma_battery(bc);
    json rows = json::array();
    bool all = true;
    o.csv_header = {"name", "passed", "asserted", "detail"};
    std::string text;
    for (const auto& c : checks) {
        rows.push_back({{"name", c.name}, {"passed", c.passed}, {"asserted", c.asserted}, {"detail", c.detail}});
        o.csv_rows.push_back({c.name, c.passed ? "true" : "false", c.asserted ? "true" : "false", c.detail});
        if (c.asserted && !c.passed) all = false;
        text += std::string(c.passed ? "PASS " : (c.asserted ? "FAIL " : "INFO ")) + c.name + ": " + c.detail + "\n";
    }
    o.result = {{"all_passed", all}, {"checks", std::move(rows)}};
    o.text = text;
    if (!all) o.exit_code = kExitCheckFailed;
    return o;
}

Output do_entropy(const RunConfig& cfg) {
    if (cfg.gamma.has_value() == cfg.want_theta0)
        throw std::invalid_argument("entropy: choose exactly one of --gamma or --theta0");
    Output o;
    o.csv_header = {"quantity", "value"};
    if (cfg.gamma) {
        o.params = {{"gamma", *cfg.gamma}};
        const double h = digits::binary_entropy(*cfg.gamma);
        o.result = {{"gamma", *cfg.gamma}, {"entropy", h}};
        o.text = num(h) + "\n";
        o.csv_rows.push_back({"entropy", json(h).dump()});
    } else {
        o.params = {{"A", cfg.a_param}};
        const auto t = digits::theta0(cfg.a_param);
        o.result = {{"A", t.a_param}, {"theta0", t.theta0}, {"tolerance", t.tolerance},
                    {"target", (t.a_param - 1) / (t.a_param + 1)}};
        o.text = num(t.theta0) + "\n";
        o.csv_rows.push_back({"theta0", json(t.theta0).dump()});
    }
    return o;
}

void emit(const RunConfig& cfg, const Output& o, std::ostream& os) {
    switch (cfg.format) {
        case Format::json: {
            json doc;
            doc["meta"] = {{"version", std::string(kVersion)}, {"subcommand", cfg.subcommand}, {"params", o.params}};
            doc["result"] = o.result;
            os << doc.dump(2) << '\n';
            break;
        }
        case Format::csv: {
            auto line = [&](const std::vector<std::string>& row) {
                for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
                os << "\r\n";
            };
            line(o.csv_header);
            for (const auto& r : o.csv_rows) line(r);
            break;
        }
        case Format::text:
            if (o.text)
                os << *o.text;
            else
                render_text(o.result, os);
            break;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Sparse smooth numbers: constructions, counts and checks", "sparse-smooth"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string format_name = "text";
    app.add_option("--format", format_name, "Output format: text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--output", cfg.output_path, "Write results to this file instead of stdout");
    app.add_option("--seed", cfg.seed, "Seed for randomized sweeps");
    app.add_option("--threads", cfg.threads, "Worker threads (0 = automatic); output does not depend on it");
    app.add_option("--trial-bound", cfg.effort.trial_bound, "Trial division bound for factoring");
    app.add_option("--rho-iterations", cfg.effort.rho_iterations, "Pollard rho iterations per attempt");
    app.add_option("--rho-attempts", cfg.effort.rho_attempts, "Pollard rho attempts per composite");

    auto construct_opts = [&](CLI::App* sub, bool with_alpha) {
        if (with_alpha) sub->add_option("--alpha", cfg.alpha, "Density parameter")->required();
        sub->add_option("--r", cfg.r, "Number of primes in the odd primorial")->required();
        sub->add_option("--max-r", cfg.max_r, "Refuse r above this");
        sub->add_flag("--no-certify", cfg.no_certify, "Skip factoring the base");
        sub->add_flag("--emit-value", cfg.emit_value, "Always print N in full");
    };
    auto* t2 = app.add_subcommand("construct-t2", "Sparse smooth power (2^k+1)^ell, ell ~ alpha k log 2");
    construct_opts(t2, true);
    auto* t3 = app.add_subcommand("construct-t3", "Sparse smooth power (2^k+1)^ell, ell ~ k^(alpha/(2-alpha))");
    construct_opts(t3, true);
    auto* bal = app.add_subcommand("construct-balanced", "Balanced smooth number (2^k1+1)(2^k2-1)");
    construct_opts(bal, false);

    auto* ff = app.add_subcommand("fermat-factor", "Factor 2^k+1 (k odd) through cyclotomic values");
    ff->add_option("--k", cfg.k, "Odd exponent")->required();
    ff->add_flag("--minus", cfg.minus, "Factor 2^k-1 instead");

    auto* psi = app.add_subcommand("psi", "Count smooth integers");
    psi->add_flag("--exact", cfg.exact, "Psi(x, y)");
    psi->add_flag("--ratio", cfg.ratio, "Psi(cx, y)/Psi(x, y) at y = floor(log^A x)");
    psi->add_flag("--trend", cfg.trend, "log Psi(x, log^A x)/log x over --xs");
    psi->add_option("--x", cfg.x, "Upper limit");
    psi->add_option("--y", cfg.y, "Smoothness bound");
    psi->add_option("--c", cfg.c, "Ratio multiplier");
    psi->add_option("--A", cfg.a_param, "Exponent A");
    psi->add_option("--xs", cfg.xs, "Upper limits for --trend");

    auto* sv = app.add_subcommand("survey", "Exhaustive zero-count survey of odd n^A-smooth n-bit integers");
    sv->add_option("--n", cfg.n, "Bit length")->required();
    sv->add_option("--A", cfg.a_param, "Exponent A")->required();
    sv->add_option("--theta", cfg.theta, "Compare the maximum against the zero bound at theta");

    auto* cs = app.add_subcommand("chars-scan", "Short character sums modulo 2^n0 for every character");
    cs->add_option("--n0", cfg.n0, "Modulus exponent")->required();
    cs->add_option("--m", cfg.m, "Interval length is 2^(n0-m)")->required();
    cs->add_option("--s", cfg.s, "Interval start is s 2^(n0-m)");

    auto* cc = app.add_subcommand("chars-count", "Count products w1 w2 with prescribed top bits");
    cc->add_option("--n", cfg.n, "Bit length")->required();
    cc->add_option("--A", cfg.a_param, "Exponent A")->required();
    cc->add_option("--n0", cfg.n0, "Modulus exponent")->required();
    cc->add_option("--m", cfg.m, "Number of prescribed bits")->required();
    cc->add_option("--sigma", cfg.sigma, "Prescribed bits, most significant first (default all zero)");

    app.add_subcommand("lemmas", "Run the supporting-lemma check battery");

    auto* en = app.add_subcommand("entropy", "Binary entropy or the zero-density threshold");
    en->add_option("--gamma", cfg.gamma, "Evaluate H(gamma)");
    en->add_flag("--theta0", cfg.want_theta0, "Solve H(theta) = (A-1)/(A+1)");
    en->add_option("--A", cfg.a_param, "Exponent A for --theta0");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        err << app.help();
        return kExitUsage;
    }

    cfg.format = format_name == "json" ? Format::json : format_name == "csv" ? Format::csv : Format::text;
    cfg.subcommand = app.get_subcommands().front()->get_name();
    Output o;
    try {
        const std::string& sc = cfg.subcommand;
        if (sc == "construct-t2")
            o = do_construct(cfg, construct::Kind::theorem2);
        else if (sc == "construct-t3")
            o = do_construct(cfg, construct::Kind::theorem3);
        else if (sc == "construct-balanced")
            o = do_construct(cfg, construct::Kind::balanced);
        else if (sc == "fermat-factor")
            o = do_fermat(cfg);
        else if (sc == "psi")
            o = do_psi(cfg);
        else if (sc == "survey")
            o = do_survey(cfg);
        else if (sc == "chars-scan")
            o = do_chars_scan(cfg);
        else if (sc == "chars-count")
            o = do_chars_count(cfg);
        else if (sc == "lemmas")
            o = do_lemmas(cfg);
        else
            o = do_entropy(cfg);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (cfg.output_path.empty()) {
        emit(cfg, o, out);
    } else {
        std::ofstream file(cfg.output_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << cfg.output_path << '\n';
            return kExitUsage;
        }
        emit(cfg, o, file);
    }
    return o.exit_code;
}

}  // namespace sparse_smooth::cli

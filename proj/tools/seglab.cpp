#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "seglab/acceptance.hpp"
#include "seglab/almgren.hpp"
#include "seglab/blowdown.hpp"
#include "seglab/elliptic.hpp"
#include "seglab/grid.hpp"
#include "seglab/profile.hpp"
#include "seglab/profiles1d.hpp"
#include "seglab/spectral.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace seglab;

// exit codes: 0 ok, 2 non-convergence, 3 config error (verify: 1 on
// criterion failure)
constexpr int kOk = 0, kVerifyFail = 1, kNotConverged = 2, kConfigError = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown field '" + it.key() + "'");
}

std::string fnv1a_hex(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Ctx {
    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed = 1;
    int threads = 1;  // reserved; all commands run single-threaded

    json config;
    std::string hash;

    void load(bool config_required) {
        if (config_path.empty()) {
            if (config_required) throw ConfigError("--config is required for this command");
            config = json::object();
        } else {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config: " + config_path);
            try {
                config = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config parse error: ") + e.what());
            }
        }
        hash = fnv1a_hex(config.dump() + "#" + std::to_string(seed));
    }

    std::string artifact(const std::string& command, const std::string& ext,
                         const std::string& suffix = "") const {
        return out_dir + "/" + command + "-" + hash + suffix + "." + ext;
    }

    void write(const std::string& path, const std::string& body) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << body;
    }
};

PolarGrid2D parse_grid(const json& j, const std::string& where) {
    require_keys(j, {"n_r", "n_theta", "r_max"}, where);
    return PolarGrid2D(j.value("n_r", 128), j.value("n_theta", 144),
                       j.value("r_max", 1.0));
}

BoundarySpec parse_boundary(const json& j) {
    require_keys(j, {"kind", "d", "theta0", "assignment", "amplitude", "trace"},
                 "boundary");
    BoundarySpec bc;
    std::string kind = j.value("kind", "profile");
    if (kind == "profile") {
        bc.kind = BoundarySpec::Kind::profile;
        bc.d = j.value("d", 1.0);
        bc.theta0 = j.value("theta0", 0.0);
        if (j.contains("assignment")) bc.assignment = j["assignment"].get<std::vector<int>>();
    } else if (kind == "explicit") {
        bc.kind = BoundarySpec::Kind::explicit_trace;
        if (!j.contains("trace")) throw ConfigError("boundary: explicit kind needs 'trace'");
        bc.trace = j["trace"].get<std::vector<std::vector<double>>>();
    } else {
        throw ConfigError("boundary: kind must be 'profile' or 'explicit'");
    }
    bc.amplitude = j.value("amplitude", 1.0);
    return bc;
}

SolveConfig parse_solve_config(const json& j) {
    SolveConfig cfg;
    cfg.beta = j.value("beta", 50.0);
    if (j.contains("beta_schedule"))
        cfg.beta_schedule = j["beta_schedule"].get<std::vector<double>>();
    cfg.tol_grad = j.value("tol_grad", 1e-4);
    cfg.max_iter = j.value("max_iter", 100000);
    if (j.contains("step_rule")) {
        const json& s = j["step_rule"];
        require_keys(s, {"kind", "omega"}, "step_rule");
        std::string kind = s.value("kind", "backtracking");
        if (kind == "fixed")
            cfg.step_rule = {StepRule::Kind::fixed, s.value("omega", 1.0)};
        else if (kind == "backtracking")
            cfg.step_rule.kind = StepRule::Kind::backtracking;
        else
            throw ConfigError("step_rule: kind must be 'fixed' or 'backtracking'");
    }
    if (j.contains("seeds"))
        for (const json& s : j["seeds"]) {
            require_keys(s, {"component", "r", "theta", "width", "amplitude"}, "seed");
            cfg.seeds.push_back({s.value("component", 0), s.value("r", 0.5),
                                 s.value("theta", 0.0), s.value("width", 0.1),
                                 s.value("amplitude", 0.1)});
        }
    return cfg;
}

MultiField load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open field csv: " + path);
    return read_field_csv(in);
}

int cmd_solve(Ctx& ctx) {
    require_keys(ctx.config,
                 {"grid", "k", "boundary", "beta", "beta_schedule", "tol_grad",
                  "max_iter", "step_rule", "seeds"},
                 "solve");
    PolarGrid2D g = parse_grid(ctx.config.value("grid", json::object()), "grid");
    int k = ctx.config.value("k", 2);
    BoundarySpec bc = parse_boundary(ctx.config.value("boundary", json::object()));
    SolveConfig cfg = parse_solve_config(ctx.config);
    auto [u, rep] = solve_dirichlet(g, k, bc, cfg);
    ctx.write(ctx.artifact("solve", "json"), rep.to_json() + "\n");
    std::ostringstream csv;
    write_field_csv(u, csv);
    ctx.write(ctx.artifact("solve", "csv"), csv.str());
    std::cout << ctx.artifact("solve", "json") << "\n";
    return rep.converged ? kOk : kNotConverged;
}

int cmd_almgren(Ctx& ctx) {
    require_keys(ctx.config,
                 {"field_csv", "profile", "beta", "radii", "radii_list",
                  "doubling_d", "acf"},
                 "almgren");
    MultiField u = [&]() {
        if (ctx.config.contains("field_csv"))
            return load_field(ctx.config["field_csv"].get<std::string>());
        const json& p = ctx.config.value("profile", json::object());
        require_keys(p, {"grid", "d", "k", "assignment", "theta0", "amplitude"},
                     "profile");
        PolarGrid2D g = parse_grid(p.value("grid", json::object()), "profile.grid");
        double d = p.value("d", 1.0);
        int k = p.value("k", 2);
        std::vector<int> asg = p.contains("assignment")
                                   ? p["assignment"].get<std::vector<int>>()
                                   : default_assignment(d, k);
        return make_profile_field(g, d, k, asg, p.value("theta0", 0.0),
                                  p.value("amplitude", 1.0));
    }();
    double beta = ctx.config.value("beta", 1.0);
    std::vector<double> radii;
    if (ctx.config.contains("radii_list")) {
        radii = ctx.config["radii_list"].get<std::vector<double>>();
    } else {
        const json& rj = ctx.config.value("radii", json::object());
        require_keys(rj, {"lo", "hi", "per_octave"}, "radii");
        radii = node_radii_geometric(u.grid(), rj.value("lo", 0.1 * u.grid().r_max),
                                     rj.value("hi", 0.9 * u.grid().r_max),
                                     rj.value("per_octave", 8));
    }
    AlmgrenTrace t = frequency_trace(u, beta, radii);
    std::ostringstream csv;
    write_trace_csv(t, csv);
    ctx.write(ctx.artifact("almgren", "csv"), csv.str());

    ordered_json out;
    out["max_violation"] = t.max_violation();
    out["truncated"] = t.truncated;
    if (t.radii.size() >= 10) {
        GrowthRate gr = growth_rate(t);
        out["d_hat"] = gr.d_hat;
        out["plateau_quality"] = gr.plateau_quality;
        out["low_confidence"] = gr.low_confidence;
    }
    if (ctx.config.contains("doubling_d")) {
        DoublingReport db =
            check_doubling(t, ctx.config["doubling_d"].get<double>(), 1e-2);
        out["doubling"] = {{"pass_lower", db.pass_i},
                           {"pass_upper", db.pass_ii},
                           {"worst_margin_lower", db.worst_margin_i},
                           {"worst_margin_upper", db.worst_margin_ii},
                           {"pairs", db.pairs}};
    }
    if (ctx.config.contains("acf")) {
        const json& aj = ctx.config["acf"];
        require_keys(aj, {"group", "q"}, "acf");
        auto group = aj.value("group", std::vector<int>{});
        AcfDiagnostics acf =
            acf_diagnostics(u, beta, group, aj.value("q", 1.9), radii);
        std::ostringstream acsv;
        write_acf_csv(acf, acsv);
        ctx.write(ctx.artifact("almgren", "csv", "-acf"), acsv.str());
        out["acf"] = {{"monotone_from", acf.monotone_from(1e-3)},
                      {"worst_upper_bound_margin", acf.worst_upper_bound_margin()}};
    }
    ctx.write(ctx.artifact("almgren", "json"), out.dump(2) + "\n");
    std::cout << ctx.artifact("almgren", "json") << "\n";
    return kOk;
}

int cmd_blowdown(Ctx& ctx) {
    require_keys(ctx.config, {"field_csv", "d", "beta", "R_list", "target"},
                 "blowdown");
    if (!ctx.config.contains("field_csv")) throw ConfigError("blowdown: field_csv required");
    MultiField u = load_field(ctx.config["field_csv"].get<std::string>());
    double d = ctx.config.value("d", 1.0);
    double beta = ctx.config.value("beta", 1.0);
    auto R_list = ctx.config.value("R_list", std::vector<double>{0.5});
    PolarGrid2D target = ctx.config.contains("target")
                             ? parse_grid(ctx.config["target"], "target")
                             : u.grid();
    BlowdownFamily fam = blowdown_family(u, R_list, target, beta);

    ordered_json out;
    out["R_skipped"] = fam.R_skipped;
    ordered_json fits = ordered_json::array();
    for (size_t i = 0; i < fam.members.size(); ++i) {
        ProfileFit fit = classify_profile(fam.members[i], d);
        ordered_json jf = json::parse(fit.to_json());
        jf["R"] = fam.R_used[i];
        double H = compute_H(u, fam.R_used[i]);
        jf["segregation_residual"] =
            segregation_residual(fam.members[i], H * fam.R_used[i] * fam.R_used[i]);
        fits.push_back(std::move(jf));
    }
    out["fits"] = std::move(fits);
    if (!fam.members.empty()) {
        VanishingReport van = vanishing_diagnostic(fam.members);
        out["vanishing"] = {{"min_boundary_mass", van.min_boundary_mass},
                            {"vanishing", van.vanishing},
                            {"threshold", van.threshold}};
    }
    ctx.write(ctx.artifact("blowdown", "json"), out.dump(2) + "\n");
    std::cout << ctx.artifact("blowdown", "json") << "\n";
    return kOk;
}

int cmd_partition(Ctx& ctx) {
    require_keys(ctx.config,
                 {"arcs", "arcs_equal", "lunes", "mask_file", "optimize", "sphere"},
                 "partition");
    ordered_json out;
    std::vector<double> lam;
    int dim = 2;
    if (ctx.config.contains("arcs") || ctx.config.contains("arcs_equal") ||
        ctx.config.contains("optimize")) {
        ArcPartition p;
        if (ctx.config.contains("arcs")) {
            for (const auto& ab : ctx.config["arcs"])
                p.arcs.emplace_back(ab.at(0).get<double>(), ab.at(1).get<double>());
        } else if (ctx.config.contains("arcs_equal")) {
            require_keys(ctx.config["arcs_equal"], {"k"}, "arcs_equal");
            int k = ctx.config["arcs_equal"].value("k", 2);
            if (k < 1) throw ConfigError("arcs_equal: k must be positive");
            for (int i = 0; i < k; ++i)
                p.arcs.emplace_back(2.0 * M_PI * i / k, 2.0 * M_PI * (i + 1) / k);
        } else {
            const json& oj = ctx.config["optimize"];
            require_keys(oj, {"k", "n_starts"}, "optimize");
            auto [best, val] =
                optimize_arcs(oj.value("k", 2), oj.value("n_starts", 8), ctx.seed);
            p = best;
            out["optimized_value"] = val;
        }
        p.validate();
        for (auto [a, b] : p.arcs) lam.push_back(lambda1_arc(b - a));
        ordered_json arcs = ordered_json::array();
        for (auto [a, b] : p.arcs) arcs.push_back({a, b});
        out["arcs"] = std::move(arcs);
    } else if (ctx.config.contains("lunes") || ctx.config.contains("mask_file")) {
        dim = 3;
        json sj = ctx.config.value("sphere", json::object());
        require_keys(sj, {"n_phi", "n_lam"}, "sphere");
        SphereGrid sg(sj.value("n_phi", 128), sj.value("n_lam", 192));
        std::vector<SphereDomain> parts;
        if (ctx.config.contains("lunes"))
            for (double a : ctx.config["lunes"].get<std::vector<double>>())
                parts.push_back(SphereDomain::make_lune(a));
        if (ctx.config.contains("mask_file")) {
            std::ifstream in(ctx.config["mask_file"].get<std::string>());
            if (!in) throw ConfigError("cannot open mask_file");
            std::vector<bool> mask;
            std::string line;
            while (std::getline(in, line))
                if (!line.empty()) mask.push_back(line[0] == '1');
            parts.push_back(SphereDomain::make_mask(std::move(mask)));
        }
        lam = {};
        for (const auto& dom : parts)
            lam.push_back(dom.kind == SphereDomain::Kind::lune
                              ? lambda1_lune(dom.alpha)
                              : lambda1_masked(sg, dom.mask));
        out["partition_value_check"] = partition_value(parts, sg);
    } else {
        throw ConfigError("partition: provide arcs, arcs_equal, lunes, mask_file, or optimize");
    }
    double pv = *std::max_element(lam.begin(), lam.end());
    double bv = 0.0;
    for (double l : lam) bv += gamma_exponent(l, dim);
    bv *= 2.0 / static_cast<double>(lam.size());
    out["lambda1_per_part"] = lam;
    out["partition_value"] = pv;
    out["beta_value"] = bv;
    out["gamma_of_value"] = gamma_exponent(pv, dim);
    ctx.write(ctx.artifact("partition", "json"), out.dump(2) + "\n");
    std::cout << ctx.artifact("partition", "json") << "\n";
    return kOk;
}

int cmd_profile1d(Ctx& ctx) {
    require_keys(ctx.config, {"a", "X", "tol", "h"}, "profile1d");
    OdeTrajectory t =
        find_profile(ctx.config.value("a", 1.0), ctx.config.value("X", 20.0),
                     ctx.config.value("tol", 1e-6), ctx.config.value("h", 1e-3));
    std::ostringstream csv;
    write_trajectory_csv(t, csv);
    ctx.write(ctx.artifact("profile1d", "csv"), csv.str());
    ordered_json out;
    out["m"] = t.m;
    out["b"] = t.b;
    out["symmetry_defect"] = t.symmetry_defect;
    out["x_switch"] = t.x_switch;
    ctx.write(ctx.artifact("profile1d", "json"), out.dump(2) + "\n");
    std::cout << ctx.artifact("profile1d", "json") << "\n";
    return kOk;
}

int cmd_decay(Ctx& ctx) {
    require_keys(ctx.config, {"K_list", "A", "r", "dim"}, "decay");
    auto K_list = ctx.config.value("K_list", std::vector<double>{1.0, 4.0, 9.0, 16.0});
    double A = ctx.config.value("A", 1.0);
    double r = ctx.config.value("r", 5.0);
    int dim = ctx.config.value("dim", 1);
    std::ostringstream csv;
    csv << "K,A,r,sup_Br\n";
    std::vector<double> vals;
    char buf[128];
    for (double K : K_list) {
        DecayResult res = decay_experiment(K, A, r, dim);
        vals.push_back(res.sup_Br);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", K, A, r, res.sup_Br);
        csv << buf;
    }
    ctx.write(ctx.artifact("decay", "csv"), csv.str());
    ordered_json out;
    out["sup_Br"] = vals;
    if (K_list.size() >= 2) out["slope_fit"] = decay_slope_fit(K_list, A, r, dim);
    ctx.write(ctx.artifact("decay", "json"), out.dump(2) + "\n");
    std::cout << ctx.artifact("decay", "json") << "\n";
    return kOk;
}

int cmd_verify(Ctx& ctx) {
    auto results = run_acceptance(std::cout);
    ctx.write(ctx.artifact("verify", "json"), acceptance_report_json(results) + "\n");
    std::cout << ctx.artifact("verify", "json") << "\n";
    for (const auto& r : results)
        if (!r.pass()) return kVerifyFail;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the competitive elliptic system"};
    app.require_subcommand(1);

    Ctx ctx;
    for (const char* name : {"solve", "almgren", "blowdown", "partition",
                             "profile1d", "decay", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", ctx.config_path, "JSON config path");
        sub->add_option("--out", ctx.out_dir, "output directory");
        sub->add_option("--seed", ctx.seed, "RNG seed");
        sub->add_option("--threads", ctx.threads, "thread count (default 1)");
    }

    CLI11_PARSE(app, argc, argv);
    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        ctx.load(cmd != "verify");
        if (cmd == "solve") return cmd_solve(ctx);
        if (cmd == "almgren") return cmd_almgren(ctx);
        if (cmd == "blowdown") return cmd_blowdown(ctx);
        if (cmd == "partition") return cmd_partition(ctx);
        if (cmd == "profile1d") return cmd_profile1d(ctx);
        if (cmd == "decay") return cmd_decay(ctx);
        if (cmd == "verify") return cmd_verify(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotConverged;
    }
    return kConfigError;
}

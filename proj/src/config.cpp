#include "sibif/config.hpp"

#include "sibif/error.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sibif {

namespace {

struct Ctx {
    std::string origin;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw std::invalid_argument(origin + ": " + msg);
    }

    void only(const YAML::Node& node, const std::string& where,
              std::initializer_list<const char*> keys) const
    {
        if (!node.IsMap()) {
            fail(where + " must be a mapping");
        }
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& kv : node) {
            const auto k = kv.first.as<std::string>();
            if (!allowed.count(k)) {
                fail("unknown key '" + k + "' in " + where);
            }
        }
    }

    template <class T>
    void get(const YAML::Node& node, const char* key, T& out, const std::string& where) const
    {
        if (const auto v = node[key]) {
            try {
                out = v.as<T>();
            } catch (const YAML::Exception&) {
                fail("bad value for " + where + "." + key);
            }
        }
    }
};

WeightDescriptor read_weight(const YAML::Node& node, const Ctx& c)
{
    std::string spec;
    if (node.IsScalar()) {
        spec = node.as<std::string>();
    } else if (node.IsMap()) {
        c.only(node, "weight", {"kind", "n", "mu", "c"});
        if (!node["kind"]) {
            c.fail("weight.kind is required");
        }
        const auto kind = node["kind"].as<std::string>();
        const char* param = kind == "sin" ? "n" : kind == "musin" ? "mu" : "c";
        if (!node[param]) {
            c.fail(std::string("weight.") + param + " is required for kind " + kind);
        }
        spec = kind + ":" + node[param].as<std::string>();
    } else {
        c.fail("weight must be a mapping or a kind:value string");
    }
    try {
        return parse_weight_spec(spec);
    } catch (const std::exception& e) {
        c.fail(std::string("weight: ") + e.what());
    }
}

void read_newton(const YAML::Node& n, NewtonConfig& cfg, const Ctx& c, const std::string& where)
{
    c.only(n, where, {"tol", "max_iter", "damping_min"});
    c.get(n, "tol", cfg.tol_newton, where);
    c.get(n, "max_iter", cfg.max_iter, where);
    c.get(n, "damping_min", cfg.damping_min, where);
}

std::vector<BumpCode> read_codes(const YAML::Node& n, const WeightDescriptor& w, const Ctx& c)
{
    if (n.IsScalar() && n.as<std::string>() == "all") {
        return nonzero_codes(w);
    }
    if (!n.IsSequence()) {
        c.fail("codes must be 'all' or a list of codes");
    }
    std::vector<BumpCode> out;
    for (const auto& e : n) {
        out.push_back(BumpCode{e.as<std::string>()});
    }
    return out;
}

AppConfig parse_impl(const std::string& text, const Ctx& c)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        c.fail(std::string("YAML parse error: ") + e.what());
    }
    if (!root.IsMap()) {
        c.fail("top level must be a mapping");
    }
    c.only(root, "config",
           {"weight", "grid", "continuation", "newton", "parabolic", "seeds", "probes",
            "campaign", "output", "svg", "evolve"});

    AppConfig app;
    auto& cfg = app.campaign;
    if (!root["weight"]) {
        c.fail("weight is required");
    }
    cfg.weight = read_weight(root["weight"], c);

    if (const auto g = root["grid"]) {
        c.only(g, "grid", {"n_interior"});
        c.get(g, "n_interior", cfg.n_interior, "grid");
    }
    if (const auto n = root["continuation"]) {
        c.only(n, "continuation",
               {"ds_init", "ds_min", "ds_max", "lambda_min", "lambda_max", "max_steps",
                "u_scale", "corrector_max_iter", "max_turn_cos", "event_lambda_tol",
                "snapshot_every"});
        auto& k = cfg.continuation;
        c.get(n, "ds_init", k.ds_init, "continuation");
        c.get(n, "ds_min", k.ds_min, "continuation");
        c.get(n, "ds_max", k.ds_max, "continuation");
        c.get(n, "lambda_min", k.lambda_min, "continuation");
        c.get(n, "lambda_max", k.lambda_max, "continuation");
        c.get(n, "max_steps", k.max_steps, "continuation");
        c.get(n, "u_scale", k.u_scale, "continuation");
        c.get(n, "corrector_max_iter", k.corrector_max_iter, "continuation");
        c.get(n, "max_turn_cos", k.max_turn_cos, "continuation");
        c.get(n, "event_lambda_tol", k.event_lambda_tol, "continuation");
        c.get(n, "snapshot_every", k.snapshot_every, "continuation");
    }
    if (const auto n = root["newton"]) {
        read_newton(n, cfg.continuation.newton, c, "newton");
        cfg.parabolic.newton = cfg.continuation.newton;
    }
    if (const auto n = root["parabolic"]) {
        c.only(n, "parabolic",
               {"dt", "steady_tol", "t_max", "blowup_threshold", "growth_limit", "tol_pos",
                "snapshot_every"});
        auto& p = cfg.parabolic;
        c.get(n, "dt", p.dt, "parabolic");
        c.get(n, "steady_tol", p.steady_tol, "parabolic");
        c.get(n, "t_max", p.t_max, "parabolic");
        c.get(n, "blowup_threshold", p.blowup_threshold, "parabolic");
        c.get(n, "growth_limit", p.growth_limit, "parabolic");
        c.get(n, "tol_pos", p.tol_pos, "parabolic");
        c.get(n, "snapshot_every", p.snapshot_every, "parabolic");
    }

    if (const auto s = root["seeds"]) {
        if (s.IsSequence()) {
            for (const auto& e : s) {
                c.only(e, "seeds[]", {"code", "lambda"});
                if (!e["code"] || !e["lambda"]) {
                    c.fail("each seed needs code and lambda");
                }
                cfg.seeds.push_back({BumpCode{e["code"].as<std::string>()},
                                     e["lambda"].as<double>()});
            }
        } else {
            c.only(s, "seeds", {"lambda", "codes"});
            if (!s["lambda"]) {
                c.fail("seeds.lambda is required");
            }
            const double lambda = s["lambda"].as<double>();
            const auto codes = s["codes"] ? read_codes(s["codes"], cfg.weight, c)
                                          : nonzero_codes(cfg.weight);
            for (const auto& code : codes) {
                cfg.seeds.push_back({code, lambda});
            }
        }
    }
    if (const auto p = root["probes"]) {
        if (!p.IsSequence()) {
            c.fail("probes must be a list");
        }
        for (const auto& e : p) {
            cfg.probes.push_back(e.as<double>());
        }
    }
    if (const auto n = root["campaign"]) {
        c.only(n, "campaign", {"max_branches"});
        c.get(n, "max_branches", cfg.max_branches, "campaign");
    }
    if (const auto n = root["output"]) {
        c.only(n, "output", {"dir", "csv", "svg", "snapshots"});
        c.get(n, "dir", cfg.output_dir, "output");
        c.get(n, "csv", cfg.write_csv, "output");
        c.get(n, "svg", cfg.write_svg, "output");
        c.get(n, "snapshots", cfg.write_snapshots, "output");
    }
    if (const auto n = root["svg"]) {
        c.only(n, "svg", {"lambda_min", "lambda_max", "uprime_min", "uprime_max"});
        for (auto [key, slot] : {std::pair{"lambda_min", &cfg.axes.lambda_min},
                                 std::pair{"lambda_max", &cfg.axes.lambda_max},
                                 std::pair{"uprime_min", &cfg.axes.uprime_min},
                                 std::pair{"uprime_max", &cfg.axes.uprime_max}}) {
            if (n[key]) {
                *slot = n[key].as<double>();
            }
        }
    }
    if (const auto n = root["evolve"]) {
        c.only(n, "evolve", {"codes", "lambda", "t_end"});
        if (n["codes"]) {
            app.evolve.codes = read_codes(n["codes"], cfg.weight, c);
        }
        if (n["lambda"]) {
            app.evolve.lambda = n["lambda"].as<double>();
            app.evolve.has_lambda = true;
        }
        c.get(n, "t_end", app.evolve.t_end, "evolve");
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        c.fail(e.what());
    }
    return app;
}

} // namespace

AppConfig parse_config(const std::string& text, const std::string& origin)
{
    const Ctx c{origin};
    try {
        return parse_impl(text, c);
    } catch (const YAML::Exception& e) {
        c.fail(std::string("bad value: ") + e.what());
    }
}

AppConfig load_config(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot read config " + path.string());
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path.string());
}

} // namespace sibif

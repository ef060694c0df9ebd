// Command-line driver: campaigns, bifurcation directions, parabolic runs.

#include "sibif/config.hpp"
#include "sibif/diagram.hpp"
#include "sibif/discretization.hpp"
#include "sibif/error.hpp"
#include "sibif/export.hpp"
#include "sibif/parabolic.hpp"
#include "sibif/spectral.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace sibif;

namespace {

constexpr int kOk = 0;
constexpr int kFatal = 1;
constexpr int kPartial = 2;

struct Overrides {
    std::string out;
    std::optional<std::size_t> grid;
    std::optional<bool> svg;
    bool snapshots = false;
};

AppConfig load(const std::string& path, const Overrides& o)
{
    auto app = load_config(path);
    auto& c = app.campaign;
    if (!o.out.empty()) {
        c.output_dir = o.out;
    }
    if (o.grid) {
        c.n_interior = *o.grid;
    }
    if (o.svg) {
        c.write_svg = *o.svg;
    }
    if (o.snapshots) {
        c.write_snapshots = true;
    }
    c.validate();
    return app;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) {
        throw IoError("cannot write " + path.string());
    }
}

int cmd_run(const std::string& config, const Overrides& o)
{
    const auto app = load(config, o);
    const auto& c = app.campaign;
    const auto d = run_campaign(c);
    const fs::path dir = c.output_dir;
    fs::create_directories(dir);
    if (c.write_csv) {
        export_csv(d, dir, {c.write_snapshots, c.continuation.snapshot_every});
    }
    if (c.write_svg) {
        export_svg(d, dir / "diagram.svg", c.axes);
    }
    const auto summary = report_summary(d);
    write_text(dir / "summary.txt", summary);
    std::cout << summary;
    return d.failures.empty() ? kOk : kPartial;
}

int cmd_census(const std::string& config, double lambda, const Overrides& o)
{
    auto app = load(config, o);
    app.campaign.probes = {lambda};
    app.campaign.validate();
    const auto d = run_campaign(app.campaign);
    const auto& census = d.census.front();
    std::printf("lambda=%.12g: %zu positive solutions\n", census.lambda, census.entries.size());
    std::printf("%-10s %18s %18s %6s\n", "type", "uprime0", "max_u", "branch");
    for (const auto& e : census.entries) {
        const double mx = *std::max_element(e.point.u.begin(), e.point.u.end());
        std::printf("%-10s %18.10g %18.10g %6d\n", type_label(e.point).c_str(), e.point.uprime0,
                    mx, e.branch_id);
    }
    return d.failures.empty() ? kOk : kPartial;
}

int cmd_d1d2(const std::string& spec, int panels)
{
    const auto w = parse_weight_spec(spec);
    const auto d = bifurcation_direction(w, panels);
    std::printf("weight: %s\n", describe(w).c_str());
    std::printf("D1 = %.12g\n", d.d1);
    if (d.d2) {
        std::printf("D2 = %.12g\n", *d.d2);
    }
    std::printf("bifurcation from (pi^2, 0) is %s\n", direction_label(d).c_str());
    return kOk;
}

int cmd_evolve(const std::string& config, const Overrides& o)
{
    const auto app = load(config, o);
    const auto& c = app.campaign;
    const auto grid = build_grid(c.n_interior);
    const auto weight = sample_weight(c.weight, grid);
    double lambda = app.evolve.lambda;
    if (!app.evolve.has_lambda) {
        if (!c.probes.empty()) {
            lambda = c.probes.front();
        } else if (!c.seeds.empty()) {
            lambda = c.seeds.front().lambda;
        } else {
            throw std::invalid_argument(config + ": evolve needs evolve.lambda, a probe or a seed");
        }
    }
    auto codes = app.evolve.codes.empty() ? nonzero_codes(c.weight) : app.evolve.codes;
    auto pcfg = c.parabolic;
    if (c.write_snapshots && pcfg.snapshot_every <= 0) {
        pcfg.snapshot_every = 100;
    }
    const fs::path dir = c.output_dir;
    fs::create_directories(dir);

    int status = kOk;
    std::printf("lambda=%.12g\n", lambda);
    for (const auto& code : codes) {
        std::vector<double> u0;
        try {
            u0 = build_subsolution(make_subsolution_spec(code, lambda, weight, grid, pcfg), grid);
        } catch (const Error& e) {
            std::printf("%s: subsolution failed: %s\n", code.digits.c_str(), e.what());
            status = kPartial;
            continue;
        }
        std::vector<Snapshot> snaps;
        std::vector<double> final_u;
        try {
            if (app.evolve.t_end > 0) {
                const auto s = evolve_until(u0, lambda, app.evolve.t_end, weight, grid, pcfg,
                                            pcfg.snapshot_every > 0 ? &snaps : nullptr);
                final_u = s.u;
                std::printf("%s: t=%.6g max_u=%.10g monotone_violation=%.3g\n",
                            code.digits.c_str(), s.t,
                            *std::max_element(s.u.begin(), s.u.end()), s.monotone_violation);
            } else {
                auto r = evolve_to_steady(u0, lambda, weight, grid, pcfg);
                snaps = std::move(r.snapshots);
                final_u = r.point.u;
                std::printf("%s: steady %s at t=%.6g u'(0)=%.10g monotone_violation=%.3g\n",
                            code.digits.c_str(), type_label(r.point).c_str(), r.t_final,
                            r.point.uprime0, r.monotone_violation);
            }
        } catch (const BlowUp& e) {
            std::printf("%s: blow-up at t=%.6g\n", code.digits.c_str(), e.time);
            status = kPartial;
            continue;
        } catch (const Error& e) {
            std::printf("%s: %s\n", code.digits.c_str(), e.what());
            status = kPartial;
            continue;
        }
        const auto path = dir / ("evolve_" + code.digits + ".csv");
        std::ofstream f(path);
        f << "x,u0,u\n";
        char buf[96];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", grid.nodes[i], u0[i],
                          final_u[i]);
            f << buf;
        }
        if (!f) {
            throw IoError("cannot write " + path.string());
        }
        if (c.write_snapshots && !snaps.empty()) {
            const auto spath = dir / ("evolve_" + code.digits + "_snapshots.csv");
            std::ofstream g(spath);
            g << "t,u...\n";
            for (const auto& s : snaps) {
                std::snprintf(buf, sizeof buf, "%.12g", s.t);
                g << buf;
                for (double v : s.u) {
                    std::snprintf(buf, sizeof buf, ",%.12g", v);
                    g << buf;
                }
                g << "\n";
            }
            if (!g) {
                throw IoError("cannot write " + spath.string());
            }
        }
    }
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bifurcation diagrams of -u'' = lambda u + a(x) u^2, u(0) = u(1) = 0"};
    app.require_subcommand(1);

    Overrides o;
    std::string config;
    std::string spec;
    double lambda = 0.0;
    int panels = kDefaultPanels;
    std::size_t grid = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config, "YAML config")->required();
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--grid", grid, "interior grid nodes");
        sub->add_flag("--snapshots", o.snapshots, "write u-vector snapshots");
    };

    auto* run = app.add_subcommand("run", "run a campaign and write CSV, SVG and summary");
    add_common(run);
    auto* svg_on = run->add_flag("--svg", "write diagram.svg");
    auto* svg_off = run->add_flag("--no-svg", "skip diagram.svg");
    svg_on->excludes(svg_off);

    auto* d1d2 = app.add_subcommand("d1d2", "bifurcation direction at (pi^2, 0)");
    d1d2->add_option("weight", spec, "sin:2, musin:4.5 or {\"kind\":\"sin\",\"n\":2}")
        ->required();
    d1d2->add_option("--panels", panels, "minimum Simpson panels");

    auto* evolve = app.add_subcommand("evolve", "parabolic flow from bump-code subsolutions");
    add_common(evolve);

    auto* census = app.add_subcommand("census", "positive solutions at one lambda");
    add_common(census);
    census->add_option("--lambda", lambda, "probe lambda")->required();

    CLI11_PARSE(app, argc, argv);
    if (grid > 0) {
        o.grid = grid;
    }
    if (*svg_on) {
        o.svg = true;
    }
    if (*svg_off) {
        o.svg = false;
    }

    try {
        if (*run) {
            return cmd_run(config, o);
        }
        if (*d1d2) {
            return cmd_d1d2(spec, panels);
        }
        if (*evolve) {
            return cmd_evolve(config, o);
        }
        if (*census) {
            return cmd_census(config, lambda, o);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sibif: %s\n", e.what());
        return kFatal;
    }
    return kFatal;
}

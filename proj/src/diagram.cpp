#include "sibif/diagram.hpp"

#include "sibif/discretization.hpp"
#include "sibif/error.hpp"
#include "sibif/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sibif {

void CampaignConfig::validate() const
{
    continuation.validate();
    parabolic.validate();
    if (n_interior < 3) {
        throw std::invalid_argument("grid: n_interior must be at least 3");
    }
    const auto positive_count = [&] {
        std::size_t c = 0;
        for (const auto& iv : sign_intervals(weight)) {
            c += iv.sign > 0 ? 1 : 0;
        }
        return c;
    }();
    for (const auto& s : seeds) {
        if (s.code.digits.size() != positive_count ||
            s.code.digits.find_first_not_of("01") != std::string::npos) {
            throw std::invalid_argument("seed code '" + s.code.digits + "' is not valid for " +
                                        describe(weight));
        }
    }
    for (double p : probes) {
        if (p < continuation.lambda_min || p > continuation.lambda_max) {
            throw std::invalid_argument("probe lambda " + std::to_string(p) +
                                        " outside the lambda window");
        }
    }
    if (max_branches < 2) {
        throw std::invalid_argument("max_branches must be at least 2");
    }
}

std::string type_label(const SolutionPoint& p)
{
    std::string s = p.bump_code ? p.bump_code->digits : std::string("?");
    if (p.type_ambiguous) {
        s += "?";
    }
    if (p.morse_index) {
        s += "(" + std::to_string(*p.morse_index) + ")";
    }
    return s;
}

std::optional<BumpCode> settled_code(const Branch& branch)
{
    for (auto it = branch.points.rbegin(); it != branch.points.rend(); ++it) {
        if (it->bump_code && !it->type_ambiguous) {
            return it->bump_code;
        }
    }
    return std::nullopt;
}

std::vector<BumpCode> nonzero_codes(const WeightDescriptor& weight)
{
    std::size_t s = 0;
    for (const auto& iv : sign_intervals(weight)) {
        s += iv.sign > 0 ? 1 : 0;
    }
    std::vector<BumpCode> out;
    for (std::size_t c = 1; c < (std::size_t{1} << s); ++c) {
        BumpCode code;
        for (std::size_t i = 0; i < s; ++i) {
            code.digits.push_back(((c >> (s - 1 - i)) & 1) ? '1' : '0');
        }
        out.push_back(code);
    }
    return out;
}

bool same_solution(const SolutionPoint& a, const SolutionPoint& b)
{
    const double sa = std::max(std::abs(a.uprime0), std::abs(b.uprime0));
    const bool slope_equal = std::abs(a.uprime0 - b.uprime0) <= 1e-3 * std::max(sa, 1e-12);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        diff = std::max(diff, std::abs(a.u[i] - b.u[i]));
        scale = std::max({scale, std::abs(a.u[i]), std::abs(b.u[i])});
    }
    const bool vector_equal = diff <= 1e-3 * std::max(scale, 1e-12);
    return slope_equal && vector_equal;
}

namespace {

double rel_distance(std::span<const double> a, std::span<const double> b)
{
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    }
    return scale > 0.0 ? diff / scale : diff;
}

// Newton at fixed lambda from every crossing of lambda by the branch polyline.
std::vector<SolutionPoint> crossings(const Branch& br, double lambda, const Weight& weight,
                                     const Grid& grid, const NewtonConfig& newton)
{
    std::vector<SolutionPoint> out;
    for (std::size_t k = 0; k + 1 < br.points.size(); ++k) {
        const auto& a = br.points[k];
        const auto& b = br.points[k + 1];
        if ((a.lambda - lambda) * (b.lambda - lambda) > 0.0 || a.lambda == b.lambda) {
            continue;
        }
        const double t = (lambda - a.lambda) / (b.lambda - a.lambda);
        std::vector<double> u(a.u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] = (1.0 - t) * a.u[i] + t * b.u[i];
        }
        try {
            out.push_back(newton_solve(lambda, u, weight, grid, newton));
        } catch (const Error&) {
        }
    }
    return out;
}

bool is_positive(const SolutionPoint& p)
{
    const double umax = kernels::max_abs(p.u);
    const double umin = *std::min_element(p.u.begin(), p.u.end());
    return umax > 1e-3 && umin >= -1e-6 * umax;
}

} // namespace

bool lies_on_branch(const SolutionPoint& point, const Branch& branch, const Weight& weight,
                    const Grid& grid, const NewtonConfig& newton, double rel_tol)
{
    for (const auto& q : branch.points) {
        if (q.lambda == point.lambda && rel_distance(q.u, point.u) < rel_tol) {
            return true;
        }
    }
    for (const auto& q : crossings(branch, point.lambda, weight, grid, newton)) {
        if (rel_distance(q.u, point.u) < rel_tol) {
            return true;
        }
    }
    return false;
}

Branch trace_both_ways(const SolutionPoint& start, const Weight& weight, const Grid& grid,
                       const ContinuationConfig& cfg)
{
    Branch fwd = trace_branch(start, +1, weight, grid, cfg);
    Branch bwd = trace_branch(start, -1, weight, grid, cfg);
    Branch out;
    const std::size_t nb = bwd.points.size();
    for (std::size_t k = nb; k-- > 1;) {
        out.points.push_back(std::move(bwd.points[k]));
        Tangent t = std::move(bwd.tangents[k]);
        for (auto& v : t.du) {
            v = -v;
        }
        t.dlambda = -t.dlambda;
        out.tangents.push_back(std::move(t));
    }
    for (auto& ev : bwd.events) {
        ev.step_index = nb - 2 - ev.step_index;
        std::swap(ev.morse_before, ev.morse_after);
        for (auto& v : ev.tangent.du) {
            v = -v;
        }
        ev.tangent.dlambda = -ev.tangent.dlambda;
        out.events.push_back(std::move(ev));
    }
    std::reverse(out.events.begin(), out.events.end());
    const std::size_t offset = out.points.size();
    for (std::size_t k = 0; k < fwd.points.size(); ++k) {
        out.points.push_back(std::move(fwd.points[k]));
        out.tangents.push_back(std::move(fwd.tangents[k]));
    }
    for (auto& ev : fwd.events) {
        ev.step_index += offset;
        out.events.push_back(std::move(ev));
    }
    out.stop = fwd.stop;
    if (bwd.stop == StopReason::Stalled || fwd.stop == StopReason::Stalled) {
        out.stop = StopReason::Stalled;
        out.failure = !fwd.failure.empty() ? fwd.failure : bwd.failure;
    } else if (!bwd.failure.empty() || !fwd.failure.empty()) {
        out.failure = !fwd.failure.empty() ? fwd.failure : bwd.failure;
    }
    return out;
}

Census build_census(const BifurcationDiagram& diagram, double lambda, const Weight& weight,
                    const Grid& grid)
{
    Census c;
    c.lambda = lambda;
    for (const auto& br : diagram.branches) {
        if (br.provenance.kind == ProvenanceKind::Trivial) {
            continue;
        }
        for (auto& p : crossings(br, lambda, weight, grid, diagram.continuation.newton)) {
            if (!is_positive(p)) {
                continue;
            }
            const bool dup = std::any_of(c.entries.begin(), c.entries.end(),
                                         [&](const CensusEntry& e) { return same_solution(e.point, p); });
            if (dup) {
                continue;
            }
            annotate(p, weight, grid);
            c.entries.push_back({std::move(p), br.id});
        }
    }
    std::sort(c.entries.begin(), c.entries.end(), [](const CensusEntry& a, const CensusEntry& b) {
        return a.point.uprime0 > b.point.uprime0;
    });
    return c;
}

void count_components(BifurcationDiagram& diagram, const Weight& weight, const Grid& grid)
{
    const std::size_t nb = diagram.branches.size();
    std::vector<int> parent(nb);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
    auto trivial = [&](std::size_t i) {
        return diagram.branches[i].provenance.kind == ProvenanceKind::Trivial;
    };
    for (std::size_t i = 0; i < nb; ++i) {
        const auto& pv = diagram.branches[i].provenance;
        if (pv.kind == ProvenanceKind::Switched && pv.parent_branch >= 0 &&
            !trivial(static_cast<std::size_t>(pv.parent_branch))) {
            unite(static_cast<int>(i), pv.parent_branch);
        }
    }
    const auto& newton = diagram.continuation.newton;
    for (std::size_t i = 0; i < nb; ++i) {
        if (trivial(i)) {
            continue;
        }
        for (const auto& ev : diagram.branches[i].events) {
            for (std::size_t j = 0; j < nb; ++j) {
                if (j == i || trivial(j) || find(static_cast<int>(i)) == find(static_cast<int>(j))) {
                    continue;
                }
                if (lies_on_branch(ev.location, diagram.branches[j], weight, grid, newton)) {
                    unite(static_cast<int>(i), static_cast<int>(j));
                }
            }
        }
    }
    diagram.component_of.assign(nb, -1);
    std::vector<int> label(nb, -1);
    int count = 0;
    for (std::size_t i = 0; i < nb; ++i) {
        if (trivial(i)) {
            continue;
        }
        const auto r = static_cast<std::size_t>(find(static_cast<int>(i)));
        if (label[r] < 0) {
            label[r] = count++;
        }
        diagram.component_of[i] = label[r];
    }
    diagram.components = count;
}

namespace {

// Same-solution test used for deduplication: Newton from the branch must
// reproduce the point itself, not just land near it.
constexpr double kSameSolutionTol = 1e-6;

bool on_any_branch(const SolutionPoint& p, const std::vector<Branch>& branches,
                   const Weight& weight, const Grid& grid, const NewtonConfig& newton)
{
    for (const auto& br : branches) {
        if (br.provenance.kind == ProvenanceKind::Trivial) {
            continue;
        }
        if (lies_on_branch(p, br, weight, grid, newton, kSameSolutionTol)) {
            return true;
        }
    }
    return false;
}

struct Pending {
    int branch;
    int event;
};

} // namespace

BifurcationDiagram run_campaign(const CampaignConfig& cfg)
{
    cfg.validate();
    const auto grid = build_grid(cfg.n_interior);
    const auto weight = sample_weight(cfg.weight, grid);
    auto ccfg = cfg.continuation;

    BifurcationDiagram d;
    d.weight = cfg.weight;
    d.n_interior = cfg.n_interior;
    d.continuation = ccfg;
    d.direction = bifurcation_direction(cfg.weight);

    auto add_branch = [&](Branch br) {
        br.id = static_cast<int>(d.branches.size());
        if (br.stop == StopReason::Stalled) {
            d.failures.push_back("branch " + std::to_string(br.id) + " stalled: " + br.failure);
        }
        d.branches.push_back(std::move(br));
        return d.branches.back().id;
    };

    // (1) trivial branch and the shot onto C+ at sigma_1
    {
        auto tcfg = ccfg;
        tcfg.ds_init = ccfg.ds_max;
        SolutionPoint zero = make_point(ccfg.lambda_min, std::vector<double>(grid.size(), 0.0),
                                        weight, grid);
        Branch triv = trace_branch(zero, +1, weight, grid, tcfg);
        triv.provenance.kind = ProvenanceKind::Trivial;
        add_branch(std::move(triv));
    }
    const double sigma1 = discrete_dirichlet_eigenvalue(grid.h, 1);
    const Branch& triv = d.branches[0];
    const BranchPointEvent* shot = nullptr;
    for (const auto& ev : triv.events) {
        if (ev.kind == EventKind::SimpleBifurcation && std::abs(ev.location.lambda - sigma1) < 0.5) {
            shot = &ev;
        }
    }
    if (!shot) {
        d.failures.push_back("no bifurcation from u = 0 found near sigma_1");
        count_components(d, weight, grid);
        return d;
    }
    int cplus = -1;
    try {
        const auto sw = branch_switch(*shot, weight, grid, ccfg);
        for (std::size_t k = 0; k < sw.points.size(); ++k) {
            const auto& p = sw.points[k];
            if (*std::min_element(p.u.begin(), p.u.end()) >= 0.0 && kernels::max_abs(p.u) > 0.0) {
                Branch br = trace_branch(p, +1, weight, grid, ccfg, sw.directions[k]);
                br.provenance.kind = ProvenanceKind::FromZero;
                br.provenance.sigma = shot->location.lambda;
                cplus = add_branch(std::move(br));
                break;
            }
        }
    } catch (const Error& e) {
        d.failures.push_back(std::string("shooting onto C+ failed: ") + e.what());
    }
    if (cplus < 0) {
        d.failures.push_back("C+ could not be started");
        count_components(d, weight, grid);
        return d;
    }

    // (3) branch switching at every simple bifurcation, breadth first
    std::vector<SolutionPoint> switched_at;
    auto process_switches = [&](std::size_t first_branch) {
        std::vector<Pending> queue;
        for (std::size_t b = first_branch; b < d.branches.size(); ++b) {
            for (std::size_t e = 0; e < d.branches[b].events.size(); ++e) {
                queue.push_back({static_cast<int>(b), static_cast<int>(e)});
            }
        }
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const auto [b, e] = queue[q];
            const auto ev = d.branches[static_cast<std::size_t>(b)].events[static_cast<std::size_t>(e)];
            if (ev.kind != EventKind::SimpleBifurcation) {
                continue;
            }
            const bool seen = std::any_of(switched_at.begin(), switched_at.end(), [&](const SolutionPoint& s) {
                return std::abs(s.lambda - ev.location.lambda) < 1e-2 &&
                       rel_distance(s.u, ev.location.u) < 1e-2;
            });
            if (seen) {
                continue;
            }
            switched_at.push_back(ev.location);
            SwitchResult sw;
            try {
                sw = branch_switch(ev, weight, grid, ccfg);
            } catch (const Error& err) {
                d.failures.push_back("branch " + std::to_string(b) + " event " + std::to_string(e) +
                                     ": " + err.what());
                continue;
            }
            for (std::size_t k = 0; k < sw.points.size(); ++k) {
                if (static_cast<int>(d.branches.size()) >= cfg.max_branches) {
                    d.failures.push_back("max_branches reached");
                    return;
                }
                if (on_any_branch(sw.points[k], d.branches, weight, grid, ccfg.newton)) {
                    continue;
                }
                Branch br = trace_branch(sw.points[k], +1, weight, grid, ccfg, sw.directions[k]);
                br.provenance.kind = ProvenanceKind::Switched;
                br.provenance.parent_branch = b;
                br.provenance.parent_event = e;
                br.provenance.direction = sw.signs[k];
                const int id = add_branch(std::move(br));
                for (std::size_t j = 0; j < d.branches[static_cast<std::size_t>(id)].events.size(); ++j) {
                    queue.push_back({id, static_cast<int>(j)});
                }
            }
        }
    };
    process_switches(static_cast<std::size_t>(cplus));

    // (4) seeded folds: Newton in parallel, drop represented seeds, trace the
    // rest in parallel, then drop duplicates in seed order
    const std::size_t ns = cfg.seeds.size();
    std::vector<std::optional<SolutionPoint>> seeded(ns);
    std::vector<std::string> seed_error(ns);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t s = 0; s < ns; ++s) {
        try {
            const auto u0 = seed_multibump(cfg.seeds[s].code, cfg.seeds[s].lambda, weight, grid,
                                           cfg.parabolic);
            auto p = newton_solve(cfg.seeds[s].lambda, u0, weight, grid, ccfg.newton);
            if (!is_positive(p)) {
                throw NonPositive("seed " + cfg.seeds[s].code.digits + " converged to a non-positive solution");
            }
            annotate(p, weight, grid);
            seeded[s] = std::move(p);
        } catch (const std::exception& e) {
            seed_error[s] = e.what();
        }
    }
    std::vector<std::size_t> todo;
    for (std::size_t s = 0; s < ns; ++s) {
        if (!seeded[s]) {
            d.failures.push_back("seed " + cfg.seeds[s].code.digits + ": " + seed_error[s]);
            continue;
        }
        if (!on_any_branch(*seeded[s], d.branches, weight, grid, ccfg.newton)) {
            todo.push_back(s);
        }
    }
    std::vector<Branch> traced(todo.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < todo.size(); ++t) {
        traced[t] = trace_both_ways(*seeded[todo[t]], weight, grid, ccfg);
    }
    const std::size_t first_seeded = d.branches.size();
    for (std::size_t t = 0; t < todo.size(); ++t) {
        const auto& p = *seeded[todo[t]];
        bool dup = false;
        for (std::size_t b = first_seeded; b < d.branches.size() && !dup; ++b) {
            dup = lies_on_branch(p, d.branches[b], weight, grid, ccfg.newton, kSameSolutionTol);
        }
        if (dup || static_cast<int>(d.branches.size()) >= cfg.max_branches) {
            continue;
        }
        traced[t].provenance.kind = ProvenanceKind::Seeded;
        traced[t].provenance.code = cfg.seeds[todo[t]].code.digits;
        traced[t].provenance.seed_lambda = cfg.seeds[todo[t]].lambda;
        add_branch(std::move(traced[t]));
    }
    process_switches(first_seeded);

    for (std::size_t b = 0; b < d.branches.size(); ++b) {
        for (std::size_t e = 0; e < d.branches[b].events.size(); ++e) {
            d.events.push_back({static_cast<int>(b), static_cast<int>(e)});
        }
    }

    // (5) census
    for (double lambda : cfg.probes) {
        d.census.push_back(build_census(d, lambda, weight, grid));
    }
    count_components(d, weight, grid);
    return d;
}

std::vector<TypeTransition> type_transitions(const Branch& branch)
{
    std::vector<TypeTransition> out;
    const auto& pts = branch.points;
    if (pts.empty()) {
        return out;
    }
    // segment boundaries: [0, k0], [k0+1, k1], ...
    std::vector<std::size_t> starts{0};
    for (const auto& ev : branch.events) {
        starts.push_back(ev.step_index + 1);
    }
    starts.push_back(pts.size());
    auto settled = [&](std::size_t from, std::size_t to, bool forward) -> const SolutionPoint* {
        // first non-ambiguous point walking from one end of [from, to) inward
        if (from >= to) {
            return nullptr;
        }
        for (std::size_t i = 0; i < to - from; ++i) {
            const auto& p = forward ? pts[from + i] : pts[to - 1 - i];
            if (!p.type_ambiguous && p.bump_code && p.morse_index) {
                return &p;
            }
        }
        return nullptr;
    };
    for (std::size_t e = 0; e < branch.events.size(); ++e) {
        const auto* before = settled(starts[e], starts[e + 1], true);
        const auto* after = settled(starts[e + 1], starts[e + 2], false);
        if (!before || !after) {
            continue;
        }
        TypeTransition t;
        t.from = type_label(*before);
        t.to = type_label(*after);
        if (*before->morse_index > *after->morse_index) {
            std::swap(t.from, t.to);
        }
        t.across = branch.events[e].kind;
        t.lambda = branch.events[e].location.lambda;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace sibif

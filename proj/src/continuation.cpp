#include "sibif/continuation.hpp"

#include "sibif/error.hpp"
#include "sibif/kernels.hpp"
#include "sibif/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sibif {

void ContinuationConfig::validate() const
{
    if (!(ds_min > 0.0 && ds_min <= ds_init && ds_init <= ds_max)) {
        throw std::invalid_argument("ContinuationConfig: need 0 < ds_min <= ds_init <= ds_max");
    }
    if (!(lambda_min < lambda_max)) {
        throw std::invalid_argument("ContinuationConfig: need lambda_min < lambda_max");
    }
    if (max_steps < 1 || corrector_max_iter < 1) {
        throw std::invalid_argument("ContinuationConfig: max_steps and corrector_max_iter must be positive");
    }
    newton.validate();
}

double ContinuationConfig::metric_weight(const Grid& grid) const
{
    return u_scale > 0.0 ? u_scale : 1.0 / static_cast<double>(grid.size());
}

std::string to_string(EventKind k)
{
    return k == EventKind::Fold ? "Fold" : "SimpleBifurcation";
}

std::string to_string(StopReason r)
{
    switch (r) {
    case StopReason::LambdaWindow: return "lambda_window";
    case StopReason::MaxSteps: return "max_steps";
    case StopReason::ClosedLoop: return "closed_loop";
    case StopReason::LeftPositiveCone: return "left_positive_cone";
    case StopReason::ReachedZero: return "reached_zero";
    case StopReason::Stalled: return "stalled";
    }
    return "unknown";
}

std::string to_string(const Provenance& p)
{
    switch (p.kind) {
    case ProvenanceKind::Trivial: return "trivial";
    case ProvenanceKind::FromZero: return "from_zero sigma=" + std::to_string(p.sigma);
    case ProvenanceKind::Seeded:
        return "seeded code=" + p.code + " lambda=" + std::to_string(p.seed_lambda);
    case ProvenanceKind::Switched:
        return "switched parent=" + std::to_string(p.parent_branch) +
               " event=" + std::to_string(p.parent_event) +
               " side=" + (p.direction > 0 ? std::string("+") : std::string("-"));
    }
    return "unknown";
}

double metric_dot(const Tangent& a, const Tangent& b, double u_scale)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.du.size(); ++i) {
        s += a.du[i] * b.du[i];
    }
    return u_scale * s + a.dlambda * b.dlambda;
}

namespace {

double metric_norm(const Tangent& t, double w)
{
    return std::sqrt(metric_dot(t, t, w));
}

void normalize(Tangent& t, double w)
{
    const double n = metric_norm(t, w);
    for (auto& v : t.du) {
        v /= n;
    }
    t.dlambda /= n;
}

double metric_distance(const SolutionPoint& a, const SolutionPoint& b, double w)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        const double d = a.u[i] - b.u[i];
        s += d * d;
    }
    const double dl = a.lambda - b.lambda;
    return std::sqrt(w * s + dl * dl);
}

std::vector<double> scaled_u(std::span<const double> u, double h2)
{
    std::vector<double> b(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        b[i] = -h2 * u[i];
    }
    return b;
}

} // namespace

Tangent extended_tangent(const SolutionPoint& point, const Tangent& prev, const Weight& weight,
                         const Grid& grid, const ContinuationConfig& cfg)
{
    const double w = cfg.metric_weight(grid);
    const double h2 = grid.h * grid.h;
    const auto t = jacobian(point.lambda, point.u, weight, grid).scaled(h2);
    const auto b = scaled_u(point.u, h2);
    std::vector<double> c(prev.du.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = w * prev.du[i];
    }
    const std::vector<double> f(point.u.size(), 0.0);
    auto sol = bordered_solve(t, b, c, prev.dlambda, f, 1.0);
    Tangent out{std::move(sol.x), sol.y};
    normalize(out, w);
    if (metric_dot(out, prev, w) < 0.0) {
        for (auto& v : out.du) {
            v = -v;
        }
        out.dlambda = -out.dlambda;
    }
    return out;
}

SolutionPoint plane_corrector(const std::vector<double>& u_pred, double lambda_pred,
                              const Tangent& normal, const Weight& weight, const Grid& grid,
                              const ContinuationConfig& cfg)
{
    const double w = cfg.metric_weight(grid);
    const double h2 = grid.h * grid.h;
    const std::size_t n = grid.size();
    std::vector<double> u = u_pred;
    double lambda = lambda_pred;
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = w * normal.du[i];
    }
    double norm = residual_norm(lambda, u, weight, grid);
    const double first = norm;
    int growth = 0;
    for (int it = 0; it <= cfg.corrector_max_iter; ++it) {
        if (norm <= cfg.newton.tol_newton) {
            return make_point(lambda, std::move(u), weight, grid);
        }
        if (it == cfg.corrector_max_iter) {
            break;
        }
        auto r = residual(lambda, u, weight, grid);
        for (auto& v : r) {
            v *= -h2;
        }
        double g = normal.dlambda * (lambda - lambda_pred);
        for (std::size_t i = 0; i < n; ++i) {
            g += c[i] * (u[i] - u_pred[i]);
        }
        const auto t = jacobian(lambda, u, weight, grid).scaled(h2);
        const auto b = scaled_u(u, h2);
        BorderedSolution d;
        try {
            d = bordered_solve(t, b, c, normal.dlambda, r, -g);
        } catch (const SingularBordered& e) {
            throw StepFailed(std::string("corrector: ") + e.what());
        }
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += d.x[i];
        }
        lambda += d.y;
        const double next = residual_norm(lambda, u, weight, grid);
        if (!std::isfinite(next) || next > 1e3 * std::max(first, cfg.newton.tol_newton)) {
            throw StepFailed("corrector diverged");
        }
        growth = next > norm ? growth + 1 : 0;
        if (growth >= 2) {
            throw StepFailed("corrector residual increasing");
        }
        norm = next;
    }
    throw StepFailed("corrector: no convergence in " + std::to_string(cfg.corrector_max_iter) +
                     " iterations");
}

SolutionPoint arclength_step(const SolutionPoint& point, const Tangent& tangent, double ds,
                             const Weight& weight, const Grid& grid, const ContinuationConfig& cfg)
{
    std::vector<double> u(point.u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = point.u[i] + ds * tangent.du[i];
    }
    return plane_corrector(u, point.lambda + ds * tangent.dlambda, tangent, weight, grid, cfg);
}

void annotate(SolutionPoint& point, const Weight& weight, const Grid& grid)
{
    point.morse_index = morse_count(point.lambda, point.u, weight, grid);
    const auto c = classify(point.u, weight, grid);
    point.bump_code = c.code;
    point.type_ambiguous = c.ambiguous;
}

namespace {

struct Probe {
    SolutionPoint point;
    Tangent tangent;
};

Probe probe(const SolutionPoint& a, const Tangent& ta, double s, const Weight& weight,
            const Grid& grid, const ContinuationConfig& cfg)
{
    Probe p;
    p.point = arclength_step(a, ta, s, weight, grid, cfg);
    p.tangent = extended_tangent(p.point, ta, weight, grid, cfg);
    annotate(p.point, weight, grid);
    return p;
}

BranchPointEvent refine_fold(const SolutionPoint& a, const Tangent& ta, const SolutionPoint& b,
                             const Tangent& tb, double ds, const Weight& weight, const Grid& grid,
                             const ContinuationConfig& cfg)
{
    double lo = 0.0;
    double hi = ds;
    double lam_lo = a.lambda;
    double lam_hi = b.lambda;
    double tl_lo = ta.dlambda;
    double tl_hi = tb.dlambda;
    try {
        for (int it = 0; it < 60; ++it) {
            if (std::abs(lam_hi - lam_lo) <= cfg.event_lambda_tol && hi - lo <= 0.05 * ds) {
                break;
            }
            const double mid = 0.5 * (lo + hi);
            const auto p = probe(a, ta, mid, weight, grid, cfg);
            if ((p.tangent.dlambda > 0.0) == (ta.dlambda > 0.0)) {
                lo = mid;
                lam_lo = p.point.lambda;
                tl_lo = p.tangent.dlambda;
            } else {
                hi = mid;
                lam_hi = p.point.lambda;
                tl_hi = p.tangent.dlambda;
            }
        }
    } catch (const Error&) {
        // keep the bracket reached so far
    }
    double s = 0.5 * (lo + hi);
    if (tl_lo != tl_hi) {
        s = lo + (hi - lo) * tl_lo / (tl_lo - tl_hi);
    }
    BranchPointEvent ev;
    ev.kind = EventKind::Fold;
    try {
        auto p = probe(a, ta, s, weight, grid, cfg);
        ev.location = std::move(p.point);
        ev.tangent = std::move(p.tangent);
    } catch (const Error&) {
        ev.location = b;
        ev.tangent = tb;
    }
    return ev;
}

BranchPointEvent refine_bifurcation(const SolutionPoint& a, const Tangent& ta,
                                    const SolutionPoint& b, const Tangent& tb, double ds,
                                    const Weight& weight, const Grid& grid,
                                    const ContinuationConfig& cfg)
{
    double lo = 0.0;
    double hi = ds;
    double lam_lo = a.lambda;
    double lam_hi = b.lambda;
    std::optional<Probe> best_lo;
    std::optional<Probe> best_hi;
    try {
        for (int it = 0; it < 80 && std::abs(lam_hi - lam_lo) > cfg.event_lambda_tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            auto p = probe(a, ta, mid, weight, grid, cfg);
            if (*p.point.morse_index == *a.morse_index) {
                lo = mid;
                lam_lo = p.point.lambda;
                best_lo = std::move(p);
            } else {
                hi = mid;
                lam_hi = p.point.lambda;
                best_hi = std::move(p);
            }
        }
    } catch (const Error&) {
    }
    BranchPointEvent ev;
    ev.kind = EventKind::SimpleBifurcation;
    try {
        auto p = probe(a, ta, 0.5 * (lo + hi), weight, grid, cfg);
        ev.location = std::move(p.point);
        ev.tangent = std::move(p.tangent);
    } catch (const Error&) {
        const auto& fallback = best_lo ? *best_lo : (best_hi ? *best_hi : Probe{b, tb});
        ev.location = fallback.point;
        ev.tangent = fallback.tangent;
    }
    return ev;
}

} // namespace

std::vector<BranchPointEvent> detect_events(const SolutionPoint& a, const Tangent& ta,
                                            const SolutionPoint& b, const Tangent& tb, double ds,
                                            std::size_t step_index, const Weight& weight,
                                            const Grid& grid, const ContinuationConfig& cfg)
{
    if (!a.morse_index || !b.morse_index) {
        throw std::invalid_argument("detect_events: points must carry a Morse index");
    }
    const bool fold = (ta.dlambda > 0.0) != (tb.dlambda > 0.0) && ta.dlambda != 0.0 &&
                      tb.dlambda != 0.0;
    const int dm = *b.morse_index - *a.morse_index;
    std::vector<BranchPointEvent> out;
    if (!fold && dm == 0) {
        return out;
    }
    if (fold && std::abs(dm) != 1) {
        throw AmbiguousEvent("fold and index change " + std::to_string(dm) + " in one step");
    }
    if (!fold && dm % 2 == 0) {
        throw AmbiguousEvent("index change " + std::to_string(dm) + " without a fold");
    }
    auto ev = fold ? refine_fold(a, ta, b, tb, ds, weight, grid, cfg)
                   : refine_bifurcation(a, ta, b, tb, ds, weight, grid, cfg);
    ev.step_index = step_index;
    ev.morse_before = *a.morse_index;
    ev.morse_after = *b.morse_index;
    out.push_back(std::move(ev));
    return out;
}

Branch trace_branch(const SolutionPoint& start, int direction, const Weight& weight,
                    const Grid& grid, const ContinuationConfig& cfg,
                    const std::optional<Tangent>& guess)
{
    cfg.validate();
    const double w = cfg.metric_weight(grid);
    Branch br;
    SolutionPoint first = start;
    annotate(first, weight, grid);
    Tangent g;
    if (guess) {
        g = *guess;
    } else {
        g.du.assign(grid.size(), 0.0);
        g.dlambda = direction >= 0 ? 1.0 : -1.0;
    }
    Tangent tan = extended_tangent(first, g, weight, grid, cfg);
    br.points.push_back(std::move(first));
    br.tangents.push_back(tan);

    double ds = cfg.ds_init;
    int easy = 0;
    double farthest = 0.0;
    bool check_cone = kernels::max_abs(start.u) > 0.0;
    while (true) {
        if (static_cast<int>(br.points.size()) > cfg.max_steps) {
            br.stop = StopReason::MaxSteps;
            break;
        }
        const auto& cur = br.points.back();
        const auto& tcur = br.tangents.back();
        SolutionPoint next;
        Tangent tnext;
        std::vector<BranchPointEvent> events;
        try {
            next = arclength_step(cur, tcur, ds, weight, grid, cfg);
            tnext = extended_tangent(next, tcur, weight, grid, cfg);
            if (metric_dot(tnext, tcur, w) < cfg.max_turn_cos) {
                throw StepFailed("tangent turned too far");
            }
            annotate(next, weight, grid);
            try {
                events = detect_events(cur, tcur, next, tnext, ds, br.points.size() - 1, weight,
                                       grid, cfg);
            } catch (const AmbiguousEvent& e) {
                if (0.5 * ds >= cfg.ds_min) {
                    throw;
                }
                br.failure = std::string("unresolved: ") + e.what();
            }
        } catch (const Error& e) {
            ds *= 0.5;
            easy = 0;
            if (ds < cfg.ds_min) {
                br.stop = StopReason::Stalled;
                br.failure = e.what();
                break;
            }
            continue;
        }
        for (auto& ev : events) {
            br.events.push_back(std::move(ev));
        }
        br.points.push_back(std::move(next));
        br.tangents.push_back(std::move(tnext));
        if (++easy >= 4) {
            ds = std::min(2.0 * ds, cfg.ds_max);
            easy = 0;
        }

        const auto& p = br.points.back();
        if (p.lambda < cfg.lambda_min || p.lambda > cfg.lambda_max) {
            br.stop = StopReason::LambdaWindow;
            break;
        }
        if (check_cone) {
            const double umax = kernels::max_abs(p.u);
            const double umin = *std::min_element(p.u.begin(), p.u.end());
            if (umin < -1e-3 * umax) {
                br.stop = StopReason::LeftPositiveCone;
                break;
            }
            if (umax < 1e-3 * std::max(1.0, kernels::max_abs(start.u)) &&
                kernels::max_abs(start.u) > 2e-3) {
                br.stop = StopReason::ReachedZero;
                break;
            }
        }
        const double dist = metric_distance(p, br.points.front(), w);
        farthest = std::max(farthest, dist);
        if (farthest > 30.0 * ds && dist < 10.0 * ds) {
            br.stop = StopReason::ClosedLoop;
            break;
        }
    }
    return br;
}

std::vector<double> kernel_vector(const SolutionPoint& point, const Weight& weight,
                                  const Grid& grid)
{
    auto t = jacobian(point.lambda, point.u, weight, grid).scaled(grid.h * grid.h);
    const std::size_t n = grid.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = 1.0 + grid.nodes[i];
    }
    for (int it = 0; it < 6; ++it) {
        std::vector<double> x;
        try {
            x = pivoted_solve(t, v);
        } catch (const SingularJacobian&) {
            for (auto& d : t.diag) {
                d += 1e-14;
            }
            x = pivoted_solve(t, v);
        }
        const double m = kernels::max_abs(x);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = x[i] / m;
        }
    }
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(v[i]) > std::abs(v[imax]) * (1.0 + 1e-9)) {
            imax = i;
        }
    }
    if (v[imax] < 0.0) {
        for (auto& x : v) {
            x = -x;
        }
    }
    return v;
}

SwitchResult branch_switch(const BranchPointEvent& event, const Weight& weight, const Grid& grid,
                           const ContinuationConfig& cfg)
{
    if (event.kind != EventKind::SimpleBifurcation) {
        throw std::invalid_argument("branch_switch needs a SimpleBifurcation event");
    }
    const double w = cfg.metric_weight(grid);
    const auto& x0 = event.location;
    const auto& tau = event.tangent;
    Tangent psi{kernel_vector(x0, weight, grid), 0.0};
    const double proj = metric_dot(psi, tau, w);
    for (std::size_t i = 0; i < psi.du.size(); ++i) {
        psi.du[i] -= proj * tau.du[i];
    }
    psi.dlambda -= proj * tau.dlambda;
    normalize(psi, w);

    const double delta0 = std::max(1e-3 * kernels::max_abs(x0.u), 2e-3);
    SwitchResult out;
    for (int sign : {1, -1}) {
        bool done = false;
        std::string why;
        for (double delta : {delta0, 10.0 * delta0}) {
            std::vector<double> u(x0.u.size());
            for (std::size_t i = 0; i < u.size(); ++i) {
                u[i] = x0.u[i] + sign * delta * psi.du[i];
            }
            const double lam = x0.lambda + sign * delta * psi.dlambda;
            try {
                auto p = plane_corrector(u, lam, psi, weight, grid, cfg);
                Tangent dir = psi;
                if (sign < 0) {
                    for (auto& v : dir.du) {
                        v = -v;
                    }
                    dir.dlambda = -dir.dlambda;
                }
                const auto tp = extended_tangent(p, dir, weight, grid, cfg);
                if (std::abs(metric_dot(tp, tau, w)) > 0.9 ||
                    metric_distance(p, x0, w) < 0.5 * delta) {
                    why = "corrector returned to the parent branch";
                    continue;
                }
                annotate(p, weight, grid);
                out.points.push_back(std::move(p));
                out.directions.push_back(tp);
                out.signs.push_back(sign);
                done = true;
                break;
            } catch (const Error& e) {
                why = e.what();
            }
        }
        if (!done) {
            throw SwitchFailed("branch_switch at lambda = " + std::to_string(x0.lambda) +
                               ", side " + std::to_string(sign) + ": " + why);
        }
    }
    return out;
}

std::vector<double> seed_multibump(const BumpCode& code, double lambda, const Weight& weight,
                                   const Grid& grid, const ParabolicConfig& cfg)
{
    return build_subsolution(make_subsolution_spec(code, lambda, weight, grid, cfg), grid);
}

} // namespace sibif

#include "sibif/export.hpp"

#include "sibif/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace sibif {

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fixed(double v, int digits = 2)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    // "-0.00" and "0.00" must not depend on the sign of a rounding residue
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') {
        s.erase(0, 1);
    }
    return s;
}

std::string code_of(const SolutionPoint& p)
{
    return p.bump_code ? p.bump_code->digits : std::string();
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return f;
}

void finish(std::ofstream& f, const std::filesystem::path& path)
{
    f.flush();
    if (!f) {
        throw IoError("write failed for " + path.string());
    }
}

std::string branch_file(int id, const char* suffix)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "branch_%03d%s.csv", id, suffix);
    return buf;
}

} // namespace

void write_branch_csv(const BifurcationDiagram& diagram, const Branch& branch, std::ostream& os)
{
    const auto& c = diagram.continuation;
    os << "# weight: " << to_json(diagram.weight) << "\n";
    os << "# grid: n_interior=" << diagram.n_interior << "\n";
    os << "# continuation: ds_init=" << num(c.ds_init) << " ds_min=" << num(c.ds_min)
       << " ds_max=" << num(c.ds_max) << " lambda_window=[" << num(c.lambda_min) << ","
       << num(c.lambda_max) << "] max_steps=" << c.max_steps
       << " tol_newton=" << num(c.newton.tol_newton) << "\n";
    os << "# provenance: " << to_string(branch.provenance) << "\n";
    os << "# stop: " << to_string(branch.stop);
    if (!branch.failure.empty()) {
        os << " (" << branch.failure << ")";
    }
    os << "\n";
    os << "branch_id,step,lambda,uprime0,morse,code,residual_norm\n";
    for (std::size_t k = 0; k < branch.points.size(); ++k) {
        const auto& p = branch.points[k];
        os << branch.id << "," << k << "," << num(p.lambda) << "," << num(p.uprime0) << ","
           << (p.morse_index ? *p.morse_index : -1) << "," << code_of(p) << ","
           << num(p.residual_norm) << "\n";
    }
}

void write_branch_snapshots(const Branch& branch, int every, std::ostream& os)
{
    every = std::max(every, 1);
    os << "# provenance: " << to_string(branch.provenance) << "\n";
    os << "step,lambda,u...\n";
    const std::size_t n = branch.points.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (k % static_cast<std::size_t>(every) != 0 && k + 1 != n) {
            continue;
        }
        const auto& p = branch.points[k];
        os << k << "," << num(p.lambda);
        for (double v : p.u) {
            os << "," << num(v);
        }
        os << "\n";
    }
}

void write_events_csv(const BifurcationDiagram& diagram, std::ostream& os)
{
    os << "kind,lambda,uprime0,branch_id,step,morse_before,morse_after,code\n";
    for (const auto& ref : diagram.events) {
        const auto& e = diagram.branches[ref.branch_id].events[ref.event_index];
        os << to_string(e.kind) << "," << num(e.location.lambda) << ","
           << num(e.location.uprime0) << "," << ref.branch_id << "," << e.step_index << ","
           << e.morse_before << "," << e.morse_after << "," << code_of(e.location) << "\n";
    }
}

void write_census_csv(const BifurcationDiagram& diagram, std::ostream& os)
{
    os << "lambda,rank,uprime0,max_u,morse,code,branch_id\n";
    for (const auto& c : diagram.census) {
        for (std::size_t r = 0; r < c.entries.size(); ++r) {
            const auto& e = c.entries[r];
            const double mx = e.point.u.empty()
                                  ? 0.0
                                  : *std::max_element(e.point.u.begin(), e.point.u.end());
            os << num(c.lambda) << "," << r << "," << num(e.point.uprime0) << "," << num(mx)
               << "," << (e.point.morse_index ? *e.point.morse_index : -1) << ","
               << code_of(e.point) << "," << e.branch_id << "\n";
        }
    }
}

void export_csv(const BifurcationDiagram& diagram, const std::filesystem::path& dir,
                const ExportOptions& options)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    for (const auto& b : diagram.branches) {
        const auto path = dir / branch_file(b.id, "");
        auto f = open_out(path);
        write_branch_csv(diagram, b, f);
        finish(f, path);
        if (options.snapshots) {
            const auto upath = dir / branch_file(b.id, "_u");
            auto g = open_out(upath);
            write_branch_snapshots(b, options.snapshot_every, g);
            finish(g, upath);
        }
    }
    {
        const auto path = dir / "events.csv";
        auto f = open_out(path);
        write_events_csv(diagram, f);
        finish(f, path);
    }
    {
        const auto path = dir / "census.csv";
        auto f = open_out(path);
        write_census_csv(diagram, f);
        finish(f, path);
    }
}

std::vector<BranchRow> read_branch_csv(std::istream& is)
{
    std::vector<BranchRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 7) {
            throw IoError("malformed branch row: " + line);
        }
        BranchRow r;
        r.branch_id = std::stoi(f[0]);
        r.step = std::stoi(f[1]);
        r.lambda = std::stod(f[2]);
        r.uprime0 = std::stod(f[3]);
        r.morse = std::stoi(f[4]);
        r.code = f[5];
        r.residual_norm = std::stod(f[6]);
        rows.push_back(r);
    }
    return rows;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

double nice_step(double span)
{
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

struct Frame {
    double l0, l1, v0, v1;
    double x(double l) const { return kLeft + (l - l0) / (l1 - l0) * (kWidth - kLeft - kRight); }
    double y(double v) const
    {
        return kHeight - kBottom - (v - v0) / (v1 - v0) * (kHeight - kTop - kBottom);
    }
};

Frame make_frame(const BifurcationDiagram& d, const SvgAxes& axes)
{
    double l0 = std::numeric_limits<double>::infinity(), l1 = -l0;
    double v0 = 0.0, v1 = 0.0;
    for (const auto& b : d.branches) {
        for (const auto& p : b.points) {
            l0 = std::min(l0, p.lambda);
            l1 = std::max(l1, p.lambda);
            v0 = std::min(v0, p.uprime0);
            v1 = std::max(v1, p.uprime0);
        }
    }
    if (!std::isfinite(l0)) {
        l0 = d.continuation.lambda_min;
        l1 = d.continuation.lambda_max;
    }
    Frame f{axes.lambda_min.value_or(l0), axes.lambda_max.value_or(l1),
            axes.uprime_min.value_or(v0), axes.uprime_max.value_or(v1)};
    if (!(f.l1 > f.l0)) {
        f.l0 -= 1.0;
        f.l1 += 1.0;
    }
    if (!(f.v1 > f.v0)) {
        f.v0 -= 1.0;
        f.v1 += 1.0;
    }
    if (!axes.uprime_max) {
        f.v1 += 0.05 * (f.v1 - f.v0);
    }
    return f;
}

void ticks(std::ostream& os, const Frame& f)
{
    const double sx = nice_step(f.l1 - f.l0);
    for (double t = std::ceil(f.l0 / sx) * sx; t <= f.l1 + 1e-9 * sx; t += sx) {
        const double x = f.x(t);
        os << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(kHeight - kBottom) << "\" x2=\""
           << fixed(x) << "\" y2=\"" << fixed(kHeight - kBottom + 5) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(kHeight - kBottom + 20)
           << "\" text-anchor=\"middle\" font-size=\"12\">" << num(std::abs(t) < 1e-9 * sx ? 0 : t)
           << "</text>\n";
    }
    const double sy = nice_step(f.v1 - f.v0);
    for (double t = std::ceil(f.v0 / sy) * sy; t <= f.v1 + 1e-9 * sy; t += sy) {
        const double y = f.y(t);
        os << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(y) << "\" x2=\""
           << fixed(kLeft) << "\" y2=\"" << fixed(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(y + 4)
           << "\" text-anchor=\"end\" font-size=\"12\">" << num(std::abs(t) < 1e-9 * sy ? 0 : t)
           << "</text>\n";
    }
}

void marker(std::ostream& os, EventKind kind, double x, double y)
{
    if (kind == EventKind::Fold) {
        os << "<circle class=\"fold\" cx=\"" << fixed(x) << "\" cy=\"" << fixed(y)
           << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
    } else {
        os << "<rect class=\"branch-point\" x=\"" << fixed(x - 4) << "\" y=\"" << fixed(y - 4)
           << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"black\"/>\n";
    }
}

} // namespace

std::string render_svg(const BifurcationDiagram& diagram, const SvgAxes& axes)
{
    const Frame f = make_frame(diagram, axes);
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    os << "<title>" << describe(diagram.weight) << "</title>\n";
    os << "<defs><clipPath id=\"plot\"><rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop)
       << "\" width=\"" << fixed(kWidth - kLeft - kRight) << "\" height=\""
       << fixed(kHeight - kTop - kBottom) << "\"/></clipPath></defs>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"white\"/>\n";
    os << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\""
       << fixed(kWidth - kLeft - kRight) << "\" height=\"" << fixed(kHeight - kTop - kBottom)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    ticks(os, f);
    os << "<text x=\"" << fixed((kLeft + kWidth - kRight) / 2) << "\" y=\""
       << fixed(kHeight - 15) << "\" text-anchor=\"middle\" font-size=\"14\">λ</text>\n";
    os << "<text x=\"20\" y=\"" << fixed((kTop + kHeight - kBottom) / 2)
       << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
       << fixed((kTop + kHeight - kBottom) / 2) << ")\">u′(0)</text>\n";

    os << "<g clip-path=\"url(#plot)\">\n";
    for (const auto& b : diagram.branches) {
        if (b.points.empty()) {
            continue;
        }
        if (b.provenance.kind == ProvenanceKind::Trivial) {
            os << "<line class=\"trivial\" x1=\"" << fixed(f.x(b.points.front().lambda))
               << "\" y1=\"" << fixed(f.y(0.0)) << "\" x2=\"" << fixed(f.x(b.points.back().lambda))
               << "\" y2=\"" << fixed(f.y(0.0)) << "\" stroke=\"gray\"/>\n";
            continue;
        }
        const int comp = static_cast<std::size_t>(b.id) < diagram.component_of.size()
                             ? diagram.component_of[b.id]
                             : -1;
        const char* color = kPalette[(comp < 0 ? 0 : comp) % 8];
        if (b.points.size() == 1) {
            const auto& p = b.points.front();
            os << "<circle class=\"branch\" data-branch=\"" << b.id << "\" cx=\""
               << fixed(f.x(p.lambda)) << "\" cy=\"" << fixed(f.y(p.uprime0))
               << "\" r=\"2\" fill=\"" << color << "\"/>\n";
            continue;
        }
        os << "<polyline class=\"branch\" data-branch=\"" << b.id << "\" fill=\"none\" stroke=\""
           << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < b.points.size(); ++k) {
            os << (k ? " " : "") << fixed(f.x(b.points[k].lambda)) << ","
               << fixed(f.y(b.points[k].uprime0));
        }
        os << "\"/>\n";
    }
    for (const auto& ref : diagram.events) {
        const auto& e = diagram.branches[ref.branch_id].events[ref.event_index];
        marker(os, e.kind, f.x(e.location.lambda), f.y(e.location.uprime0));
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

void export_svg(const BifurcationDiagram& diagram, const std::filesystem::path& path,
                const SvgAxes& axes)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
        }
    }
    auto f = open_out(path);
    f << render_svg(diagram, axes);
    finish(f, path);
}

std::string direction_label(const BifurcationDirection& d)
{
    // d2 is only present when d1 was declared zero
    const double v = d.d2 ? *d.d2 : d.d1;
    if (v == 0.0) {
        return "undetermined";
    }
    return v > 0 ? "supercritical" : "subcritical";
}

std::string report_summary(const BifurcationDiagram& diagram)
{
    std::ostringstream os;
    os << "weight: " << describe(diagram.weight) << "\n";
    os << "grid: n_interior=" << diagram.n_interior << "\n";
    os << "D1 = " << num(diagram.direction.d1);
    if (diagram.direction.d2) {
        os << ", D2 = " << num(*diagram.direction.d2);
    }
    os << " (" << direction_label(diagram.direction) << ")\n\n";

    for (const auto& b : diagram.branches) {
        os << "branch " << b.id << " [" << to_string(b.provenance) << "] " << b.points.size()
           << " points";
        if (!b.points.empty()) {
            os << ", lambda " << fixed(b.points.front().lambda, 4) << " .. "
               << fixed(b.points.back().lambda, 4);
        }
        os << ", stop " << to_string(b.stop);
        if (static_cast<std::size_t>(b.id) < diagram.component_of.size() &&
            diagram.component_of[b.id] >= 0) {
            os << ", component " << diagram.component_of[b.id];
        }
        os << "\n";
        if (!b.failure.empty()) {
            os << "  note: " << b.failure << "\n";
        }
        for (const auto& e : b.events) {
            os << "  " << to_string(e.kind) << " at lambda=" << fixed(e.location.lambda, 4)
               << " u'(0)=" << fixed(e.location.uprime0, 4) << " morse " << e.morse_before
               << " -> " << e.morse_after << "\n";
        }
        if (b.provenance.kind == ProvenanceKind::Trivial) {
            continue;
        }
        for (const auto& t : type_transitions(b)) {
            os << "  " << t.from << " -> " << t.to << " across " << to_string(t.across)
               << " at lambda=" << fixed(t.lambda, 4) << "\n";
        }
    }

    os << "\ncensus:\n";
    if (diagram.census.empty()) {
        os << "  (no probes)\n";
    }
    for (const auto& c : diagram.census) {
        os << "  lambda=" << num(c.lambda) << ": " << c.entries.size() << " solutions\n";
        for (const auto& e : c.entries) {
            os << "    " << type_label(e.point) << "  u'(0)=" << fixed(e.point.uprime0, 6)
               << "  branch " << e.branch_id << "\n";
        }
    }
    os << "\ncomponents: " << diagram.components << "\n";
    if (!diagram.failures.empty()) {
        os << "\nfailures:\n";
        for (const auto& f : diagram.failures) {
            os << "  " << f << "\n";
        }
    }
    return os.str();
}

} // namespace sibif

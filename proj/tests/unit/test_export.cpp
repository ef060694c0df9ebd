#include "sibif/config.hpp"
#include "sibif/error.hpp"
#include "sibif/export.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sibif;
namespace fs = std::filesystem;

namespace {

CampaignConfig sin1()
{
    CampaignConfig c;
    c.weight = SinWeight{1};
    c.n_interior = 399;
    c.continuation.ds_init = 0.01;
    c.continuation.ds_max = 2.0;
    c.continuation.lambda_min = -100.0;
    c.continuation.lambda_max = 20.0;
    c.seeds = {{BumpCode{"10"}, -21.0}, {BumpCode{"11"}, -21.0}};
    c.probes = {-21.0};
    return c;
}

const BifurcationDiagram& sin1_diagram()
{
    static const auto d = run_campaign(sin1());
    return d;
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("sibif_test_" + name);
    fs::remove_all(p);
    return p;
}

int count(const std::string& text, const std::string& needle)
{
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

std::vector<std::string> data_lines(const std::string& text)
{
    std::istringstream is(text);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '#') {
            out.push_back(line);
        }
    }
    return out;
}

} // namespace

TEST_CASE("branch CSV round trip keeps 12 significant digits")
{
    const auto& d = sin1_diagram();
    const auto& b = d.branches.at(1);
    std::stringstream ss;
    write_branch_csv(d, b, ss);
    const auto rows = read_branch_csv(ss);
    REQUIRE(rows.size() == b.points.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& p = b.points[i];
        CHECK(rows[i].branch_id == b.id);
        CHECK(rows[i].step == static_cast<int>(i));
        CHECK(std::abs(rows[i].lambda - p.lambda) <= 1e-11 * std::max(std::abs(p.lambda), 1.0));
        CHECK(std::abs(rows[i].uprime0 - p.uprime0) <=
              1e-11 * std::max(std::abs(p.uprime0), 1.0));
        CHECK(rows[i].morse == p.morse_index.value_or(-1));
    }
}

TEST_CASE("malformed branch rows are rejected")
{
    std::istringstream is("# weight\nbranch_id,step,lambda\n1,2,3\n");
    CHECK_THROWS_AS(read_branch_csv(is), IoError);
}

TEST_CASE("empty diagram writes header-only files")
{
    BifurcationDiagram d;
    d.weight = SinWeight{1};
    std::ostringstream ev;
    std::ostringstream ce;
    write_events_csv(d, ev);
    write_census_csv(d, ce);
    CHECK(data_lines(ev.str()) ==
          std::vector<std::string>{"kind,lambda,uprime0,branch_id,step,morse_before,morse_after,code"});
    CHECK(data_lines(ce.str()) ==
          std::vector<std::string>{"lambda,rank,uprime0,max_u,morse,code,branch_id"});
}

TEST_CASE("Sin{1} events: one fold near lambda = 12.1")
{
    const auto& d = sin1_diagram();
    std::ostringstream os;
    write_events_csv(d, os);
    const auto lines = data_lines(os.str());
    int folds = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].rfind("Fold,", 0) == 0) {
            const double lambda = std::stod(lines[i].substr(5));
            CHECK(lambda >= 11.9);
            CHECK(lambda <= 12.3);
            ++folds;
        }
    }
    CHECK(folds == 1);
}

TEST_CASE("export_csv writes one file per branch")
{
    const auto& d = sin1_diagram();
    const auto dir = scratch("csv");
    export_csv(d, dir, {true, 5});
    for (const auto& b : d.branches) {
        char name[32];
        std::snprintf(name, sizeof name, "branch_%03d.csv", b.id);
        CHECK(fs::exists(dir / name));
        std::snprintf(name, sizeof name, "branch_%03d_u.csv", b.id);
        CHECK(fs::exists(dir / name));
    }
    CHECK(fs::exists(dir / "events.csv"));
    CHECK(fs::exists(dir / "census.csv"));
    fs::remove_all(dir);
}

TEST_CASE("SVG: deterministic, one polyline per non-trivial branch")
{
    const auto& d = sin1_diagram();
    const auto svg = render_svg(d);
    CHECK(svg == render_svg(d));
    CHECK(count(svg, "<svg") == 1);
    CHECK(count(svg, "</svg>") == 1);
    int lines = 0;
    int dots = 0;
    for (const auto& b : d.branches) {
        if (b.provenance.kind == ProvenanceKind::Trivial) {
            continue;
        }
        (b.points.size() > 1 ? lines : dots) += 1;
    }
    CHECK(count(svg, "<polyline class=\"branch\"") == lines);
    CHECK(count(svg, "<circle class=\"branch\"") == dots);
    CHECK(count(svg, "<line class=\"trivial\"") == 1);
    CHECK(count(svg, "class=\"fold\"") == 1);
}

TEST_CASE("single-point branch is drawn as a marker")
{
    auto d = sin1_diagram();
    Branch lone;
    lone.id = static_cast<int>(d.branches.size());
    lone.points = {d.branches.at(1).points.front()};
    d.branches.push_back(lone);
    d.component_of.push_back(0);
    const auto svg = render_svg(d);
    CHECK(count(svg, "<circle class=\"branch\"") >= 1);
}

TEST_CASE("write failures name the path")
{
    const auto dir = scratch("io");
    fs::create_directories(dir);
    const auto blocker = dir / "file";
    std::ofstream(blocker) << "x";
    try {
        export_csv(sin1_diagram(), blocker / "sub");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find((blocker / "sub").string()) != std::string::npos);
    }
    CHECK_THROWS_AS(export_svg(sin1_diagram(), blocker / "d.svg"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("config parsing")
{
    const auto app = parse_config(R"(
weight: {kind: sin, n: 2}
grid: {n_interior: 199}
seeds: {lambda: -60, codes: all}
probes: [-30]
)");
    CHECK(app.campaign.n_interior == 199);
    CHECK(app.campaign.seeds.size() == 7);
    CHECK(app.campaign.seeds.front().lambda == -60.0);

    const auto s = parse_config("weight: \"musin:3.9\"\nseeds: [{code: \"101\", lambda: -30}]\n");
    CHECK(std::holds_alternative<MuSinWeight>(s.campaign.weight));

    CHECK_THROWS_AS(parse_config("weight: {kind: sin, n: 1}\ngird: {n_interior: 9}\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config("weight: {kind: sin, n: 1}\nseeds: [{code: \"12\", lambda: 0}]\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config("weight: {kind: sin, n: 1}\nseeds: [{code: \"101\", lambda: 0}]\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config("weight: [unbalanced\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_config("/nonexistent/sibif.yaml"), IoError);
    try {
        parse_config("bogus: 1\n", "my.yaml");
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("my.yaml") != std::string::npos);
    }
}

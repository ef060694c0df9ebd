#pragma once

#include "sibif/diagram.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sibif {

struct ExportOptions {
    bool snapshots = false;  // sidecar u-vector files
    int snapshot_every = 10; // K
};

/// branch_<id>.csv per branch, events.csv, census.csv and, with snapshots,
/// branch_<id>_u.csv. Creates dir. Throws IoError naming the failing path.
void export_csv(const BifurcationDiagram& diagram, const std::filesystem::path& dir,
                const ExportOptions& options = {});

void write_branch_csv(const BifurcationDiagram& diagram, const Branch& branch, std::ostream& os);
void write_branch_snapshots(const Branch& branch, int every, std::ostream& os);
void write_events_csv(const BifurcationDiagram& diagram, std::ostream& os);
void write_census_csv(const BifurcationDiagram& diagram, std::ostream& os);

/// One data row of a branch file.
struct BranchRow {
    int branch_id = -1;
    int step = 0;
    double lambda = 0.0;
    double uprime0 = 0.0;
    int morse = -1;
    std::string code;
    double residual_norm = 0.0;
};

/// Parses a branch file written by write_branch_csv ('#' lines skipped).
std::vector<BranchRow> read_branch_csv(std::istream& is);

/// Standalone SVG of the (lambda, u'(0)) diagram.
std::string render_svg(const BifurcationDiagram& diagram, const SvgAxes& axes = {});
void export_svg(const BifurcationDiagram& diagram, const std::filesystem::path& path,
                const SvgAxes& axes = {});

std::string report_summary(const BifurcationDiagram& diagram);

/// "supercritical", "subcritical" or "undetermined".
std::string direction_label(const BifurcationDirection& d);

} // namespace sibif

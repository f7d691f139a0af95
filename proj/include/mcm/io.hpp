#pragma once

#include "mcm/bounds.hpp"
#include "mcm/density.hpp"
#include "mcm/nets.hpp"
#include "mcm/probe.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mcm {

using Json = nlohmann::json;

// CSV files are comma separated with a header row and LF line endings.
// Decimal renderings carry 15 significant digits; exact fractions ride
// alongside wherever a value is rational.

void write_text_file(const std::string& path, const std::string& content);

std::string levels_csv(const DensitySpec& spec);

std::string raster_csv(const std::vector<Rat>& grid, int m);

// P2 (ASCII) PGM, 16-bit maxval, values mapped linearly from
// [min_value, max_value] to [0, 65535]. The mapping goes in the sidecar.
std::string raster_pgm(const std::vector<Rat>& grid, int m, const Rat& min_value, const Rat& max_value);
Json raster_sidecar(const DensitySpec& spec, int m, int depth, const std::string& mode,
                    const Rat& min_value, const Rat& max_value);

std::string points_csv(const std::vector<Vec2d>& points);
std::string gridmap_csv(const GridMap& map);

Json witness_json(const BoundWitness& witness);
Json validation_json(const ValidationReport& report);
Json constraint_json(const ConstraintReport& report);
Json net_json(const Net& net);
Json bilipschitz_json(const BilipschitzReport& report);
Json replay_json(const ReplayDiagnostics& diag);

std::string replay_table_csv(const ReplayDiagnostics& diag);

}  // namespace mcm

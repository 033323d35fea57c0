#pragma once

#include <json.hpp>
#include <string>

#include "arw/experiments.hpp"
#include "arw/grid.hpp"
#include "arw/kacrice.hpp"
#include "arw/nodal.hpp"

namespace arw {

using json = nlohmann::json;

json frequency_set_json(const FrequencySet& fs, bool with_orbits);

json eigenfunction_json(const Eigenfunction& f);
Eigenfunction eigenfunction_from_json(const json& j);

json nodal_estimate_json(const NodalEstimate& est);
json kernel_estimate_json(const KernelEstimate& est);
json second_moment_json(const SecondMomentResult& res);
json experiment_record_json(const ExperimentRecord& rec, const std::string& csv_path);

// Binary grid file: one JSON header line, then size^dim little-endian doubles
// in row-major order.
void write_grid_binary(const std::string& path, const Grid& g);
Grid read_grid_binary(const std::string& path);
void write_grid_csv(const std::string& path, const Grid& g);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// One histogram panel of Z/sqrt(E) per energy.
std::string histogram_svg(const ExperimentRecord& rec);

}  // namespace arw

// io.hpp: JSON, CSV and PGM encodings of boundsim artifacts.
//
// CSV floats use 12 significant digits with '.' as decimal separator,
// independent of the locale.

#pragma once

#include "boundsim/expsim.hpp"
#include "boundsim/mubs.hpp"
#include "boundsim/search.hpp"
#include "boundsim/simplex.hpp"
#include "boundsim/witness.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace boundsim::io {

using nlohmann::json;

std::string fmt(double v);

/// {"dim": n, "re": [[...]], "im": [[...]]}
json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

/// bases -> vectors -> [re, im] pairs
json to_json(const MubFamily& fam);
json to_json(const MubReport& rep);
json to_json(const SimplexCoeffs& c);
json to_json(const FamilyParams& p);
json to_json(const Labeling& l);
json to_json(const CorrelationReport& rep);
json to_json(const OptimizationResult& r);

/// {"sigma": [[...], ...], "conjugate_bob": true}
Labeling labeling_from_json(const json& j);

/// "k,l,c" header then one row per coefficient.
std::string coeffs_csv(const SimplexCoeffs& c);
SimplexCoeffs parse_coeffs_csv(std::string_view text);

/// q1,q2,class,witness,min_pt_eig,i,j,physical,ppt
std::string grid_csv(const ClassifiedGrid& grid);
/// Binary P5, one pixel per cell, q2 increasing upwards. Gray levels:
/// unphysical 0, free entangled 85, undetected 170, bound entangled 255.
std::string pgm(const ClassifiedGrid& grid);
std::string horodecki_csv(const std::vector<HorodeckiRow>& rows);
std::string trace_csv(const std::vector<TraceEntry>& trace);
std::string variants_csv(const std::vector<SimplexVariant>& variants, const std::vector<double>& min_pt_eig,
                         const std::vector<double>& witness);

/// setting,basis,i,j,count_0_0,...,mixed
std::string mcp_counts_csv(const std::vector<CountRecord>& records, int d);
/// setting,a,b,count
std::string tomography_counts_csv(const std::vector<double>& counts, const TomographySet& set);
std::vector<double> parse_tomography_counts_csv(std::string_view text);

/// InvalidConfig when the file cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace boundsim::io

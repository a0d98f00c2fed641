#pragma once

#include "pnflab/brunn_minkowski.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pnf::cli {

// Mini-grammar shared by flags and config files:
//   body     disc:R | ball:R | ellipse:a,b | ellipsoid:a,b,c | random:seed=S,amp=A,r=R | table:PATH
//   density  lebesgue | gaussian:s | cauchy:alpha | poly:c@i,j,k+c@i,j,k
//   function one | const:c | cos:k | sin:k | ylm:l,m | random:seed=S,K=k | table:PATH
//   test fn  lin:b1,b2[,b3] | quad:a11,a12,...,ann (row-major, symmetrized) | sq
// Random specs without seed= take the run seed so that nothing depends on ambient state.

double parse_number(const std::string& text, const std::string& what);
long long parse_integer(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

GridPtr make_grid(int dim, int M, int level);
SupportBody parse_body(const std::string& text, const GridPtr& grid, std::uint64_t seed);
Density parse_density(const std::string& text);
BoundaryFunction parse_function(const std::string& text, const DirectionGrid& grid,
                                std::uint64_t seed);
TestFunction parse_test_function(const std::string& text, int dim);
ExtensionSpec parse_extension(const std::string& text, const GridPtr& grid, std::uint64_t seed);

// Flat `key = value` text; `#` starts a comment. Duplicate keys are a Config error.
std::map<std::string, std::string> parse_config_text(const std::string& text);
// Canonical serialization: sorted `key=value` lines.
std::string canonical_config(const std::map<std::string, std::string>& cfg);

}  // namespace pnf::cli

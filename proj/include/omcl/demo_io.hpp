#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "omcl/types.hpp"

namespace omcl {

// Catalog file: one JSON document {"name", "objects", "locations"} with
// identifiers listed in index order.
EnvironmentCatalog parse_catalog(const std::string& text);
std::string serialize_catalog(const EnvironmentCatalog& catalog);
EnvironmentCatalog load_catalog(const std::filesystem::path& path);
void save_catalog(const EnvironmentCatalog& catalog, const std::filesystem::path& path);

// Demonstration records are line-delimited JSON, one demonstration per line:
//   {"catalog_ref", "label"?, "sample_rate",
//    "motion": [[positions, quaternions], ...] x K,
//    "objects": [["0100...", ...], ...] x M,
//    "location": [i, ...]}
// Positions are [x,y,z] triples, quaternions [w,x,y,z] (scalar first);
// object bit vectors are '0'/'1' strings indexed like the catalog.
//
// Quaternions are canonicalized to a non-negative scalar part on ingestion;
// serialize(parse(x)) then re-parses to a field-wise identical value, floats
// bit-exact.
Demonstration parse_demonstration(const std::string& record,
                                  const EnvironmentCatalog& catalog);
std::string serialize_demonstration(const Demonstration& d,
                                    const EnvironmentCatalog& catalog);

std::vector<Demonstration> load_demonstrations(const std::filesystem::path& path,
                                               const EnvironmentCatalog& catalog);
void save_demonstrations(const std::vector<Demonstration>& demos,
                         const EnvironmentCatalog& catalog,
                         const std::filesystem::path& path);

} // namespace omcl

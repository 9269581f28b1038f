#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tritile/flux.hpp"
#include "tritile/height.hpp"
#include "tritile/tiling.hpp"

namespace tritile {

/// Malformed or inconsistent input document.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

Json region_to_json(const Region& r);
RegionPtr region_from_json(const Json& j);

/// {"region": ..., "dimers": [[[wx,wy,wz],[bx,by,bz]], ...]}, dimers sorted by
/// white-cell coordinates.
Json tiling_to_json(const Tiling& t);
/// Uses `region` when given (the embedded region must then match it),
/// otherwise builds the region from the document.
Tiling tiling_from_json(const Json& j, const RegionPtr& region = nullptr);

std::string serialize_tiling(const Tiling& t);
Tiling deserialize_tiling(const std::string& text, const RegionPtr& region = nullptr);

/// Dimer between two lattice points, using the region's representative step.
Dimer dimer_between(const Region& r, const Vec3& white, const Vec3& black);

Json surface_to_json(const DiscreteSurface& s);
DiscreteSurface surface_from_json(const Json& j, const RegionPtr& region);

/// {"flux": [...], "modulus": m, "twist": k or null}.
Json invariant_report(const Tiling& t);

/// {"vertices": [{"id","color"}], "edges": [{"id","black","white","left","right"}],
///  "faces": [{"id","infinity"}]}.
Json coquad_to_json(const CoquadSurface& s);
CoquadSurface coquad_from_json(const Json& j);

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace tritile

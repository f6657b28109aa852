#pragma once

// Procedural test models standing in for scanned meshes. All of them are
// free of proper rotational symmetry, so a registration has one correct
// answer, and all are returned scaled into [0,1]^3 with the longest side 1.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tivreg/geometry.hpp"

namespace tivreg {

/// "blob", "spiral", "hand", "bracket".
const std::vector<std::string>& shape_names();

/// `n` surface samples of the named shape. Throws Error(InvalidArgument) for an unknown name.
PointCloud make_shape(std::string_view name, std::size_t n, std::uint64_t seed);

/// Uniform scale + offset so the cloud spans [0,1] on its longest axis.
PointCloud fit_unit_cube(const PointCloud& cloud);

}  // namespace tivreg

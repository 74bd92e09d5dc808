// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ddrom/blocks.hpp"
#include "ddrom/spectral.hpp"

namespace ddrom
{

using Json = nlohmann::json;

// Malformed or inconsistent file contents.
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path &path);
void write_json_file(const std::filesystem::path &path, const Json &doc);

/// {"rows": r, "cols": c, "data": [[re, im], ...]} with data row-major.
Json matrix_to_json(const CMatrix &a);
CMatrix matrix_from_json(const Json &j);

Json vector_to_json(const RVector &v);
RVector vector_from_json(const Json &j);

/// {"rows": r, "cols": c, "triplets": [[row, col, value], ...]}
Json sparse_to_json(const RSparse &a);

Json blocks_to_json(const DataBlocks &blocks);
DataBlocks blocks_from_json(const Json &j);

/// Nodal values on an nx x ny grid, node index j * nx + i.
Json field_to_json(const Grid &grid, const RVector &values);
RVector field_from_json(const Json &j, Index &nx, Index &ny);

Json operators_to_json(const DiscreteOperators &ops);
Json tridiagonal_to_json(const BlockTridiagonal &t);
Json subspace_to_json(const StableSubspace &s);

}  // namespace ddrom

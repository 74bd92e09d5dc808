// SPDX-License-Identifier: Apache-2.0

#include "ddrom/json_io.hpp"

#include <fstream>

namespace ddrom
{

namespace
{

const Json &field(const Json &j, const char *key)
{
  if (!j.is_object() || !j.contains(key))
  {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

void expect_format(const Json &j, const std::string &format)
{
  const std::string got = field(j, "format").get<std::string>();
  if (got != format)
  {
    throw FormatError("expected format '" + format + "', found '" + got + "'");
  }
}

Json matrices_to_json(const std::vector<CMatrix> &family)
{
  Json arr = Json::array();
  for (const auto &a : family)
  {
    arr.push_back(matrix_to_json(a));
  }
  return arr;
}

std::vector<CMatrix> matrices_from_json(const Json &arr, std::size_t count, Index m)
{
  if (!arr.is_array() || arr.size() != count)
  {
    throw FormatError("expected " + std::to_string(count) + " blocks");
  }
  std::vector<CMatrix> out;
  for (const auto &item : arr)
  {
    CMatrix a = matrix_from_json(item);
    if (a.rows() != m || a.cols() != m)
    {
      throw FormatError("block is not " + std::to_string(m) + "x" + std::to_string(m));
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  }
  try
  {
    return Json::parse(in);
  }
  catch (const Json::parse_error &e)
  {
    throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path &path, const Json &doc)
{
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << doc.dump(1) << '\n';
  if (!out)
  {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

Json matrix_to_json(const CMatrix &a)
{
  Json data = Json::array();
  for (Index r = 0; r < a.rows(); ++r)
  {
    for (Index c = 0; c < a.cols(); ++c)
    {
      data.push_back({a(r, c).real(), a(r, c).imag()});
    }
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const Json &j)
{
  const Index rows = field(j, "rows").get<Index>();
  const Index cols = field(j, "cols").get<Index>();
  const Json &data = field(j, "data");
  if (rows < 0 || cols < 0 || !data.is_array() ||
      data.size() != static_cast<std::size_t>(rows * cols))
  {
    throw FormatError("matrix data does not match its " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " shape");
  }
  CMatrix a(rows, cols);
  std::size_t t = 0;
  for (Index r = 0; r < rows; ++r)
  {
    for (Index c = 0; c < cols; ++c)
    {
      const Json &e = data[t++];
      if (!e.is_array() || e.size() != 2)
      {
        throw FormatError("complex entry must be a [re, im] pair");
      }
      a(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return a;
}

Json vector_to_json(const RVector &v)
{
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

RVector vector_from_json(const Json &j)
{
  if (!j.is_array())
  {
    throw FormatError("expected a numeric array");
  }
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const RVector>(v.data(), static_cast<Index>(v.size()));
}

Json sparse_to_json(const RSparse &a)
{
  Json trip = Json::array();
  for (Index c = 0; c < a.outerSize(); ++c)
  {
    for (RSparse::InnerIterator it(a, c); it; ++it)
    {
      trip.push_back({it.row(), it.col(), it.value()});
    }
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"triplets", trip}};
}

Json blocks_to_json(const DataBlocks &blocks)
{
  return {{"format", "ddrom.data_blocks"},
          {"version", 1},
          {"n", blocks.n},
          {"m", blocks.m},
          {"k", blocks.k},
          {"d", matrices_to_json(blocks.d)},
          {"dkd", matrices_to_json(blocks.dkd)},
          {"c", matrices_to_json(blocks.c)},
          {"b", matrices_to_json(blocks.b)}};
}

DataBlocks blocks_from_json(const Json &j)
{
  expect_format(j, "ddrom.data_blocks");
  const Index n = field(j, "n").get<Index>();
  const Index m = field(j, "m").get<Index>();
  if (n < 1 || m < 1)
  {
    throw FormatError("block counts must be positive");
  }
  DataBlocks blocks;
  blocks.n = n;
  blocks.m = m;
  blocks.k = field(j, "k").get<std::vector<double>>();
  if (static_cast<Index>(blocks.k.size()) != n)
  {
    throw FormatError("expected " + std::to_string(n) + " wavenumbers");
  }
  const auto sn = static_cast<std::size_t>(n);
  blocks.d = matrices_from_json(field(j, "d"), sn, m);
  blocks.dkd = matrices_from_json(field(j, "dkd"), sn, m);
  blocks.c = matrices_from_json(field(j, "c"), sn, m);
  blocks.b = matrices_from_json(field(j, "b"), sn * sn, m);
  return blocks;
}

Json field_to_json(const Grid &grid, const RVector &values)
{
  if (values.size() != grid.num_nodes())
  {
    throw std::invalid_argument("field has " + std::to_string(values.size()) +
                                " values for " + std::to_string(grid.num_nodes()) + " nodes");
  }
  return {{"format", "ddrom.field"},
          {"nx", grid.nx()},
          {"ny", grid.ny()},
          {"values", vector_to_json(values)}};
}

RVector field_from_json(const Json &j, Index &nx, Index &ny)
{
  expect_format(j, "ddrom.field");
  nx = field(j, "nx").get<Index>();
  ny = field(j, "ny").get<Index>();
  RVector v = vector_from_json(field(j, "values"));
  if (v.size() != nx * ny)
  {
    throw FormatError("field has " + std::to_string(v.size()) + " values for a " +
                      std::to_string(nx) + "x" + std::to_string(ny) + " grid");
  }
  return v;
}

Json operators_to_json(const DiscreteOperators &ops)
{
  Json sources = Json::array();
  for (Index s = 0; s < ops.sources.cols(); ++s)
  {
    sources.push_back(vector_to_json(ops.sources.col(s)));
  }
  return {{"format", "ddrom.operators"},
          {"laplace", sparse_to_json(ops.laplace)},
          {"potential", sparse_to_json(ops.potential)},
          {"mass", sparse_to_json(ops.mass)},
          {"boundary", sparse_to_json(ops.boundary)},
          {"sources", sources}};
}

Json tridiagonal_to_json(const BlockTridiagonal &t)
{
  return {{"format", "ddrom.block_tridiagonal"},
          {"m", t.m},
          {"steps", t.steps()},
          {"alpha", matrices_to_json(t.alpha)},
          {"beta", matrices_to_json(t.beta)},
          {"T", matrix_to_json(t.assemble())}};
}

Json subspace_to_json(const StableSubspace &s)
{
  return {{"format", "ddrom.stable_subspace"},
          {"m", s.m},
          {"n", s.n},
          {"r", s.r},
          {"spectrum", vector_to_json(s.spectrum)},
          {"Z", matrix_to_json(s.Z)}};
}

}  // namespace ddrom

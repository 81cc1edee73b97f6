#include "helmfci/cli/slice.hpp"

#include <cstdio>
#include <fstream>
#include "helmfci/core/error.hpp"
#include "json.hpp"

namespace helmfci::cli
{

Slice extract_slice(ConstVectorView field, const Grid3 &grid, int axis, int index)
{
  blas::require_same_size(field.size(), grid.size(), "slice field");
  const auto n = grid.dims();
  if (axis < 0 || axis > 2)
  {
    throw ConfigurationError("slice axis must be 0, 1 or 2");
  }
  if (index < 0 || index >= n[axis])
  {
    throw ConfigurationError("slice index " + std::to_string(index) + " outside [0, " +
                             std::to_string(n[axis] - 1) + "]");
  }
  const int a_axis = axis == 0 ? 1 : 0;
  const int b_axis = axis == 2 ? 1 : 2;
  Slice s;
  s.axis = axis;
  s.index = index;
  s.dims = {n[a_axis], n[b_axis]};
  const std::size_t count = std::size_t(s.dims[0]) * s.dims[1];
  s.re.resize(count);
  s.im.resize(count);
  s.abs.resize(count);
  std::array<int, 3> i{};
  i[axis] = index;
  for (int b = 0; b < s.dims[1]; b++)
  {
    for (int a = 0; a < s.dims[0]; a++)
    {
      i[a_axis] = a;
      i[b_axis] = b;
      const Complex v = field[grid.index(i[0], i[1], i[2])];
      const std::size_t k = std::size_t(b) * s.dims[0] + a;
      s.re[k] = static_cast<float>(v.real());
      s.im[k] = static_cast<float>(v.imag());
      s.abs[k] = static_cast<float>(std::abs(v));
    }
  }
  return s;
}

std::vector<std::filesystem::path> export_slice(ConstVectorView field, const Grid3 &grid, int axis,
                                                int index, const std::filesystem::path &path,
                                                SliceFormat format)
{
  const Slice s = extract_slice(field, grid, axis, index);
  if (format == SliceFormat::Csv)
  {
    std::ofstream out(path);
    if (!out)
    {
      throw IoError("cannot write " + path.string());
    }
    out << "a,b,re,im,abs\n";
    char line[160];
    for (int b = 0; b < s.dims[1]; b++)
    {
      for (int a = 0; a < s.dims[0]; a++)
      {
        const std::size_t k = std::size_t(b) * s.dims[0] + a;
        std::snprintf(line, sizeof line, "%d,%d,%.9g,%.9g,%.9g\n", a, b, s.re[k], s.im[k], s.abs[k]);
        out << line;
      }
    }
    if (!out)
    {
      throw IoError("write failed on " + path.string());
    }
    return {path};
  }

  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw IoError("cannot write " + path.string());
  }
  for (const auto *plane : {&s.re, &s.im, &s.abs})
  {
    out.write(reinterpret_cast<const char *>(plane->data()),
              static_cast<std::streamsize>(plane->size() * sizeof(float)));
  }
  if (!out)
  {
    throw IoError("write failed on " + path.string());
  }
  const auto sidecar = std::filesystem::path(path.string() + ".json");
  std::ofstream meta(sidecar);
  meta << nlohmann::json{{"dims", s.dims},
                         {"axis", s.axis},
                         {"index", s.index},
                         {"dtype", "float32"},
                         {"planes", {"re", "im", "abs"}},
                         {"order", "a fastest"}}
              .dump(2)
       << "\n";
  if (!meta)
  {
    throw IoError("cannot write " + sidecar.string());
  }
  return {path, sidecar};
}

Slice read_raw_slice(const std::filesystem::path &path)
{
  const auto sidecar = std::filesystem::path(path.string() + ".json");
  std::ifstream meta(sidecar);
  if (!meta)
  {
    throw IoError("cannot open " + sidecar.string());
  }
  Slice s;
  try
  {
    const auto j = nlohmann::json::parse(meta);
    s.dims = j.at("dims").get<std::array<int, 2>>();
    s.axis = j.at("axis").get<int>();
    s.index = j.at("index").get<int>();
  }
  catch (const nlohmann::json::exception &e)
  {
    throw IoError("malformed slice sidecar " + sidecar.string() + ": " + e.what());
  }
  const std::size_t count = std::size_t(s.dims[0]) * s.dims[1];
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw IoError("cannot open " + path.string());
  }
  for (auto *plane : {&s.re, &s.im, &s.abs})
  {
    plane->resize(count);
    in.read(reinterpret_cast<char *>(plane->data()), static_cast<std::streamsize>(count * sizeof(float)));
  }
  if (!in || in.peek() != std::char_traits<char>::eof())
  {
    throw IoError("size of " + path.string() + " does not match its sidecar");
  }
  return s;
}

}  // namespace helmfci::cli

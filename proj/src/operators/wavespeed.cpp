#include "helmfci/operators/wavespeed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <json.hpp>
#include "helmfci/core/error.hpp"

namespace helmfci
{

static_assert(std::endian::native == std::endian::little,
              "raw wavespeed I/O assumes a little-endian host");

WavespeedModel WavespeedModel::uniform(const Grid3 &grid)
{
  return {grid, std::vector<double>(grid.size(), grid.l_min)};
}

WavespeedModel WavespeedModel::from_wavespeed(const Grid3 &grid, std::span<const double> speed)
{
  if (speed.size() != grid.size())
  {
    throw ModelError("wavespeed array has " + std::to_string(speed.size()) +
                     " entries, grid has " + std::to_string(grid.size()));
  }
  const double c_min = *std::min_element(speed.begin(), speed.end());
  if (!(c_min > 0.0))
  {
    throw ModelError("wavespeed must be positive");
  }
  WavespeedModel model{grid, std::vector<double>(speed.size())};
  for (std::size_t i = 0; i < speed.size(); i++)
  {
    model.sampling_rate[i] = grid.l_min * speed[i] / c_min;
  }
  model.validate();
  return model;
}

WavespeedModel WavespeedModel::eight_anomaly(const Grid3 &grid, double contrast)
{
  if (!(contrast >= 1.0))
  {
    throw ModelError("anomaly contrast must be >= 1");
  }
  const auto dims = grid.dims();
  int min_dim = 0;
  for (int n : dims)
  {
    if (n > 1)
    {
      min_dim = (min_dim == 0) ? n : std::min(min_dim, n);
    }
  }
  const double radius = min_dim / 8.0;
  auto centres = [&](int axis) -> std::array<double, 2>
  {
    const int n = dims[axis];
    if (n == 1)
    {
      return {0.0, 0.0};
    }
    return {n / 4.0, 3.0 * n / 4.0};
  };
  const auto c1 = centres(0), c2 = centres(1), c3 = centres(2);

  WavespeedModel model = uniform(grid);
  for (int i3 = 0; i3 < grid.n3; i3++)
  {
    for (int i2 = 0; i2 < grid.n2; i2++)
    {
      for (int i1 = 0; i1 < grid.n1; i1++)
      {
        bool inside = false;
        for (double x : c1)
        {
          for (double y : c2)
          {
            for (double z : c3)
            {
              const double d2 = (i1 - x) * (i1 - x) + (i2 - y) * (i2 - y) + (i3 - z) * (i3 - z);
              inside = inside || d2 <= radius * radius;
            }
          }
        }
        if (inside)
        {
          model.sampling_rate[grid.index(i1, i2, i3)] = contrast * grid.l_min;
        }
      }
    }
  }
  return model;
}

void WavespeedModel::validate() const
{
  if (sampling_rate.size() != grid.size())
  {
    throw ModelError("sampling-rate array does not match the grid");
  }
  // l_min is the minimum by definition; allow rounding from the c_i / c_min conversion.
  const double floor = grid.l_min * (1.0 - 1e-12);
  double smallest = sampling_rate.empty() ? grid.l_min : sampling_rate.front();
  for (std::size_t i = 0; i < sampling_rate.size(); i++)
  {
    const double l = sampling_rate[i];
    if (!std::isfinite(l) || l < floor)
    {
      throw ModelError("sampling rate at index " + std::to_string(i) + " is " +
                       std::to_string(l) + ", below l_min = " + std::to_string(grid.l_min));
    }
    smallest = std::min(smallest, l);
  }
  // float32 inputs round c_min; 1e-6 covers that.
  if (smallest > grid.l_min * (1.0 + 1e-6))
  {
    throw ModelError("minimum sampling rate " + std::to_string(smallest) +
                     " differs from l_min = " + std::to_string(grid.l_min));
  }
}

WavespeedSidecar read_sidecar(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw IoError("cannot open sidecar " + path.string());
  }
  nlohmann::json j;
  try
  {
    in >> j;
  }
  catch (const nlohmann::json::exception &e)
  {
    throw ModelError("malformed sidecar " + path.string() + ": " + e.what());
  }
  WavespeedSidecar s;
  try
  {
    s.dims = j.at("dims").get<std::array<int, 3>>();
    s.dtype = j.at("dtype").get<std::string>();
    s.c_min = j.at("c_min").get<double>();
    s.c_max = j.at("c_max").get<double>();
    if (j.contains("spacing"))
    {
      s.spacing = j.at("spacing").get<std::array<double, 3>>();
    }
  }
  catch (const nlohmann::json::exception &e)
  {
    throw ModelError("sidecar " + path.string() + ": " + e.what());
  }
  if (s.dtype != "float32" && s.dtype != "float64")
  {
    throw ModelError("sidecar dtype must be float32 or float64, got " + s.dtype);
  }
  if (!(s.c_min > 0.0) || s.c_max < s.c_min)
  {
    throw ModelError("sidecar requires 0 < c_min <= c_max");
  }
  return s;
}

void write_sidecar(const std::filesystem::path &path, const WavespeedSidecar &s)
{
  nlohmann::json j = {{"dims", s.dims},
                      {"dtype", s.dtype},
                      {"c_min", s.c_min},
                      {"c_max", s.c_max},
                      {"spacing", s.spacing}};
  std::ofstream out(path);
  if (!out)
  {
    throw IoError("cannot write sidecar " + path.string());
  }
  out << j.dump(2) << "\n";
}

std::vector<double> read_wavespeed_raw(const std::filesystem::path &raw,
                                       const WavespeedSidecar &sidecar)
{
  const std::size_t n =
      std::size_t(sidecar.dims[0]) * std::size_t(sidecar.dims[1]) * std::size_t(sidecar.dims[2]);
  const std::size_t width = sidecar.dtype == "float32" ? 4 : 8;
  std::ifstream in(raw, std::ios::binary);
  if (!in)
  {
    throw IoError("cannot open wavespeed file " + raw.string());
  }
  const auto bytes = std::filesystem::file_size(raw);
  if (bytes != n * width)
  {
    throw ModelError("wavespeed file " + raw.string() + " has " + std::to_string(bytes) +
                     " bytes, expected " + std::to_string(n * width));
  }
  std::vector<char> buffer(bytes);
  in.read(buffer.data(), static_cast<std::streamsize>(bytes));
  if (!in)
  {
    throw IoError("short read on " + raw.string());
  }
  std::vector<double> speed(n);
  for (std::size_t i = 0; i < n; i++)
  {
    if (width == 4)
    {
      float v;
      std::memcpy(&v, buffer.data() + 4 * i, 4);
      speed[i] = v;
    }
    else
    {
      std::memcpy(&speed[i], buffer.data() + 8 * i, 8);
    }
  }
  return speed;
}

void write_wavespeed_raw(const std::filesystem::path &raw, const WavespeedSidecar &sidecar,
                         std::span<const double> speed)
{
  std::ofstream out(raw, std::ios::binary);
  if (!out)
  {
    throw IoError("cannot write wavespeed file " + raw.string());
  }
  for (double v : speed)
  {
    if (sidecar.dtype == "float32")
    {
      const float f = static_cast<float>(v);
      out.write(reinterpret_cast<const char *>(&f), 4);
    }
    else
    {
      out.write(reinterpret_cast<const char *>(&v), 8);
    }
  }
}

WavespeedModel load_wavespeed_model(const std::filesystem::path &raw,
                                    const std::filesystem::path &sidecar_path, double l_min)
{
  const auto sidecar = read_sidecar(sidecar_path);
  const auto speed = read_wavespeed_raw(raw, sidecar);
  Grid3 grid{sidecar.dims[0], sidecar.dims[1], sidecar.dims[2], l_min};
  WavespeedModel model{grid, std::vector<double>(speed.size())};
  for (std::size_t i = 0; i < speed.size(); i++)
  {
    if (!(speed[i] >= sidecar.c_min * (1.0 - 1e-6)))
    {
      throw ModelError("wavespeed " + std::to_string(speed[i]) + " at index " +
                       std::to_string(i) + " is below the sidecar c_min");
    }
    model.sampling_rate[i] = std::max(l_min, l_min * speed[i] / sidecar.c_min);
  }
  model.validate();
  return model;
}

}  // namespace helmfci

#include "helmfci/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include "helmfci/core/error.hpp"

namespace helmfci::cli
{

using nlohmann::json;

std::string_view to_string(Subcommand s)
{
  switch (s)
  {
  case Subcommand::Solve:
    return "solve";
  case Subcommand::Tune:
    return "tune";
  case Subcommand::Spectrum:
    return "spectrum";
  case Subcommand::BenchShifted:
    return "bench-shifted";
  case Subcommand::Scale:
    return "scale";
  }
  return "unknown";
}

namespace
{

// Walks one JSON object, remembering which keys were consumed so the rest can be
// reported as unknown.
class Reader
{
public:
  Reader(const json &j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object())
    {
      throw SchemaError(path_.empty() ? "/" : path_, "expected an object");
    }
  }

  std::string at(const std::string &key) const { return path_ + "/" + key; }

  const json *find(const std::string &key)
  {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  template <class T>
  void get(const std::string &key, T &out)
  {
    if (const json *v = find(key))
    {
      out = convert<T>(*v, at(key));
    }
  }

  template <class T>
  void get_in(const std::string &key, T &out, T lo, T hi)
  {
    get(key, out);
    if (!(out >= lo && out <= hi))
    {
      throw SchemaError(at(key), "value out of range [" + json(lo).dump() + ", " + json(hi).dump() + "]");
    }
  }

  std::optional<Reader> child(const std::string &key)
  {
    if (const json *v = find(key))
    {
      return Reader(*v, at(key));
    }
    return std::nullopt;
  }

  void finish() const
  {
    for (const auto &item : j_.items())
    {
      if (!seen_.count(item.key()))
      {
        throw SchemaError(at(item.key()), "unknown key");
      }
    }
  }

  template <class T>
  static T convert(const json &v, const std::string &path)
  {
    if constexpr (std::is_same_v<T, bool>)
    {
      if (!v.is_boolean())
      {
        throw SchemaError(path, "expected a boolean");
      }
      return v.get<bool>();
    }
    else if constexpr (std::is_integral_v<T>)
    {
      if (!v.is_number_integer())
      {
        throw SchemaError(path, "expected an integer");
      }
      if constexpr (std::is_unsigned_v<T>)
      {
        if (v.is_number_unsigned())
        {
          return v.get<T>();
        }
        if (v.get<long long>() < 0)
        {
          throw SchemaError(path, "expected a non-negative integer");
        }
      }
      return v.get<T>();
    }
    else if constexpr (std::is_floating_point_v<T>)
    {
      if (!v.is_number())
      {
        throw SchemaError(path, "expected a number");
      }
      const double d = v.get<double>();
      if (!std::isfinite(d))
      {
        throw SchemaError(path, "expected a finite number");
      }
      return d;
    }
    else if constexpr (std::is_same_v<T, std::string>)
    {
      if (!v.is_string())
      {
        throw SchemaError(path, "expected a string");
      }
      return v.get<std::string>();
    }
    else if constexpr (std::is_same_v<T, Complex>)
    {
      if (!v.is_array() || v.size() != 2)
      {
        throw SchemaError(path, "expected [re, im]");
      }
      return {convert<double>(v[0], path + "/0"), convert<double>(v[1], path + "/1")};
    }
    else
    {
      // std::vector<U> or std::array<U, N>
      if (!v.is_array())
      {
        throw SchemaError(path, "expected an array");
      }
      T out{};
      if constexpr (requires { out.push_back(out[0]); })
      {
        for (std::size_t i = 0; i < v.size(); i++)
        {
          out.push_back(convert<typename T::value_type>(v[i], path + "/" + std::to_string(i)));
        }
      }
      else
      {
        if (v.size() != out.size())
        {
          throw SchemaError(path, "expected " + std::to_string(out.size()) + " entries");
        }
        for (std::size_t i = 0; i < out.size(); i++)
        {
          out[i] = convert<typename T::value_type>(v[i], path + "/" + std::to_string(i));
        }
      }
      return out;
    }
  }

private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class E>
E choose(Reader &r, const std::string &key, E current,
         const std::vector<std::pair<std::string, E>> &options)
{
  const json *v = r.find(key);
  if (!v)
  {
    return current;
  }
  const auto s = Reader::convert<std::string>(*v, r.at(key));
  for (const auto &[name, value] : options)
  {
    if (name == s)
    {
      return value;
    }
  }
  std::string allowed;
  for (const auto &o : options)
  {
    allowed += (allowed.empty() ? "" : ", ") + o.first;
  }
  throw SchemaError(r.at(key), "expected one of " + allowed + ", got \"" + s + "\"");
}

template <class E>
std::string name_of(E value, const std::vector<std::pair<std::string, E>> &options)
{
  for (const auto &[name, v] : options)
  {
    if (v == value)
    {
      return name;
    }
  }
  return "unknown";
}

const std::vector<std::pair<std::string, Subcommand>> kSubcommands{
    {"solve", Subcommand::Solve},
    {"tune", Subcommand::Tune},
    {"spectrum", Subcommand::Spectrum},
    {"bench-shifted", Subcommand::BenchShifted},
    {"scale", Subcommand::Scale}};
const std::vector<std::pair<std::string, Discretization>> kDiscretizations{
    {"spectral", Discretization::Spectral}, {"fd7", Discretization::Fd7}};
const std::vector<std::pair<std::string, Formulation>> kFormulations{
    {"single", Formulation::Single}, {"doubled", Formulation::Doubled}};
const std::vector<std::pair<std::string, DampingSign>> kSigns{
    {"lower", DampingSign::LowerHalfPlane}, {"upper", DampingSign::UpperHalfPlane}};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json complex_list(const std::vector<Complex> &zs)
{
  json a = json::array();
  for (Complex z : zs)
  {
    a.push_back(complex_json(z));
  }
  return a;
}

void read_grid(Reader &r, RunConfig &c)
{
  r.get("grid", c.grid);
  for (int k = 0; k < 3; k++)
  {
    if (c.grid[k] < 1)
    {
      throw SchemaError(r.at("grid") + "/" + std::to_string(k), "grid dimensions must be positive");
    }
  }
  const json *lmin = r.find("l_min");
  const json *freq = r.find("frequency");
  if (lmin)
  {
    c.l_min = Reader::convert<double>(*lmin, r.at("l_min"));
    if (!(c.l_min > 2.0))
    {
      throw SchemaError(r.at("l_min"), "sampling rate must exceed 2");
    }
  }
  if (freq)
  {
    const double f = Reader::convert<double>(*freq, r.at("frequency"));
    if (!(f > 0.0))
    {
      throw SchemaError(r.at("frequency"), "frequency must be positive");
    }
    if (lmin && std::abs(c.grid[0] / c.l_min - f) > 1e-9 * f)
    {
      throw SchemaError(r.at("frequency"), "inconsistent with grid[0] / l_min = " +
                                               std::to_string(c.grid[0] / c.l_min));
    }
    if (!lmin)
    {
      c.l_min = c.grid[0] / f;
      if (!(c.l_min > 2.0))
      {
        throw SchemaError(r.at("frequency"), "implies a sampling rate <= 2");
      }
    }
  }
  c.frequency = c.grid[0] / c.l_min;
}

}  // namespace

RunConfig parse_run_config(const json &input)
{
  const json &j = input.contains("config") && input.contains("manifest_version") ? input["config"] : input;
  RunConfig c;
  Reader r(j, "");
  c.subcommand = choose(r, "subcommand", c.subcommand, kSubcommands);
  c.discretization = choose(r, "discretization", c.discretization, kDiscretizations);
  c.formulation = choose(r, "formulation", c.formulation, kFormulations);
  c.damping_sign = choose(r, "damping_sign", c.damping_sign, kSigns);
  read_grid(r, c);

  if (auto m = r.child("model"))
  {
    m->get("kind", c.model.kind);
    if (c.model.kind != "uniform" && c.model.kind != "eight_anomaly" && c.model.kind != "file")
    {
      throw SchemaError(m->at("kind"), "expected one of uniform, eight_anomaly, file");
    }
    m->get_in("contrast", c.model.contrast, 1.0, 1e6);
    m->finish();
  }
  if (auto s = r.child("sponge"))
  {
    s->get_in("width", c.sponge_width, -1, 1 << 20);
    s->get_in("strength", c.sponge_strength, 0.0, 1e6);
    s->finish();
  }
  if (auto k = r.child("contour"))
  {
    k->get_in("count", c.contour.count, 2, 256);
    k->get_in("t", c.contour.t, 1e-6, 1.0);
    k->get_in("eps", c.contour.eps, 0.0, 1e6);
    k->get_in("eps_coefficient", c.contour.eps_coefficient, 1e-12, 1e9);
    k->finish();
  }
  if (auto t = r.child("tolerances"))
  {
    t->get_in("outer_tol", c.outer_tol, 1e-15, 0.999);
    t->get_in("outer_max_its", c.outer_max_its, 0, 1 << 20);
    t->get_in("outer_restart", c.outer_restart, 1, 10000);
    t->get("refinement", c.refinement);
    t->get_in("node_reduction", c.node_reduction, 1e-15, 0.999);
    t->get_in("node_max_sweeps", c.node_max_sweeps, 1, 1 << 24);
    t->get_in("inner_its", c.inner_its, 0, 10000);
    t->get_in("q_max", c.q_max, 1, kMaxPolyDegree);
    t->get("warm_start", c.warm_start);
    t->finish();
  }
  r.get_in("threads", c.threads, 1, 1024);
  if (auto s = r.child("seeds"))
  {
    s->get("rhs", c.seed);
    s->finish();
  }
  if (auto s = r.child("source"))
  {
    s->get("kind", c.source.kind);
    if (c.source.kind != "point" && c.source.kind != "random")
    {
      throw SchemaError(s->at("kind"), "expected one of point, random");
    }
    if (const json *p = s->find("position"))
    {
      c.source.position = Reader::convert<std::array<int, 3>>(*p, s->at("position"));
      for (int k = 0; k < 3; k++)
      {
        if ((*c.source.position)[k] < 0 || (*c.source.position)[k] >= c.grid[k])
        {
          throw SchemaError(s->at("position") + "/" + std::to_string(k), "outside the grid");
        }
      }
    }
    s->finish();
  }
  if (auto t = r.child("tune"))
  {
    if (auto b = t->child("box"))
    {
      b->get("b1", c.tune.box.b1);
      b->get("b2", c.tune.box.b2);
      b->get_in("depth", c.tune.box.depth, 0.0, 1e12);
      if (!(c.tune.box.b1 <= c.tune.box.b2))
      {
        throw SchemaError(b->at("b2"), "b2 must not be below b1");
      }
      b->finish();
    }
    t->get("shifts", c.tune.shifts);
    t->get_in("q_max", c.tune.q_max, 1, kMaxPolyDegree);
    t->get_in("target", c.tune.target, 1e-300, 0.999);
    t->get_in("delta_step", c.tune.delta_step, 0.0, 1e6);
    t->finish();
  }
  if (auto b = r.child("bench"))
  {
    b->get_in("n", c.bench.n, 2, 4096);
    b->get_in("l_min", c.bench.l_min, 2.0 + 1e-12, 1e6);
    b->get("spectrum_tops", c.bench.spectrum_tops);
    for (std::size_t i = 0; i < c.bench.spectrum_tops.size(); i++)
    {
      if (!(c.bench.spectrum_tops[i] > -1.0))
      {
        throw SchemaError(b->at("spectrum_tops") + "/" + std::to_string(i), "must exceed -1");
      }
    }
    b->get("shifts", c.bench.shifts);
    b->get_in("reduction", c.bench.reduction, 1e-300, 0.999);
    b->get_in("q_max", c.bench.q_max, 1, kMaxPolyDegree);
    b->finish();
  }
  if (auto s = r.child("scale"))
  {
    s->get("sizes", c.scale_sizes);
    for (std::size_t i = 0; i < c.scale_sizes.size(); i++)
    {
      if (c.scale_sizes[i] < 2)
      {
        throw SchemaError(s->at("sizes") + "/" + std::to_string(i), "sizes must be >= 2");
      }
    }
    s->finish();
  }
  if (const json *sl = r.find("slices"))
  {
    if (!sl->is_array())
    {
      throw SchemaError(r.at("slices"), "expected an array");
    }
    for (std::size_t i = 0; i < sl->size(); i++)
    {
      Reader e((*sl)[i], r.at("slices") + "/" + std::to_string(i));
      SliceConfig s;
      e.get_in("axis", s.axis, 0, 2);
      e.get_in("index", s.index, -1, c.grid[s.axis] - 1);
      e.get("format", s.format);
      if (s.format != "csv" && s.format != "raw")
      {
        throw SchemaError(e.at("format"), "expected csv or raw");
      }
      e.finish();
      c.slices.push_back(s);
    }
  }
  if (auto p = r.child("paths"))
  {
    std::string s;
    if (const json *v = p->find("model_in"))
    {
      c.model_in = Reader::convert<std::string>(*v, p->at("model_in"));
    }
    if (const json *v = p->find("model_sidecar"))
    {
      c.model_sidecar = Reader::convert<std::string>(*v, p->at("model_sidecar"));
    }
    if (const json *v = p->find("output_dir"))
    {
      c.output_dir = Reader::convert<std::string>(*v, p->at("output_dir"));
    }
    p->finish();
  }
  if (auto rep = r.child("report"))
  {
    rep->get("wall_time", c.wall_time);
    rep->finish();
  }
  r.finish();

  if (c.model.kind == "file" && !c.model_in)
  {
    throw SchemaError("/paths/model_in", "required when model.kind is \"file\"");
  }
  if (c.model.kind != "file" && c.model_in)
  {
    throw SchemaError("/paths/model_in", "only used when model.kind is \"file\"");
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw IoError("cannot open config " + path.string());
  }
  json j;
  try
  {
    j = json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

json to_json(const RunConfig &c)
{
  json j;
  j["subcommand"] = name_of(c.subcommand, kSubcommands);
  j["discretization"] = name_of(c.discretization, kDiscretizations);
  j["formulation"] = name_of(c.formulation, kFormulations);
  j["damping_sign"] = name_of(c.damping_sign, kSigns);
  j["grid"] = c.grid;
  j["l_min"] = c.l_min;
  j["frequency"] = c.frequency;
  j["model"] = {{"kind", c.model.kind}, {"contrast", c.model.contrast}};
  j["sponge"] = {{"width", c.sponge_width}, {"strength", c.sponge_strength}};
  j["contour"] = {{"count", c.contour.count},
                  {"t", c.contour.t},
                  {"eps", c.contour.eps},
                  {"eps_coefficient", c.contour.eps_coefficient}};
  j["tolerances"] = {{"outer_tol", c.outer_tol},
                     {"outer_max_its", c.outer_max_its},
                     {"outer_restart", c.outer_restart},
                     {"refinement", c.refinement},
                     {"node_reduction", c.node_reduction},
                     {"node_max_sweeps", c.node_max_sweeps},
                     {"inner_its", c.inner_its},
                     {"q_max", c.q_max},
                     {"warm_start", c.warm_start}};
  j["threads"] = c.threads;
  j["seeds"] = {{"rhs", c.seed}};
  j["source"] = {{"kind", c.source.kind},
                 {"position", c.source.position ? json(*c.source.position) : json(nullptr)}};
  j["tune"] = {{"box", {{"b1", c.tune.box.b1}, {"b2", c.tune.box.b2}, {"depth", c.tune.box.depth}}},
               {"shifts", complex_list(c.tune.shifts)},
               {"q_max", c.tune.q_max},
               {"target", c.tune.target},
               {"delta_step", c.tune.delta_step}};
  j["bench"] = {{"n", c.bench.n},
                {"l_min", c.bench.l_min},
                {"spectrum_tops", c.bench.spectrum_tops},
                {"shifts", complex_list(c.bench.shifts)},
                {"reduction", c.bench.reduction},
                {"q_max", c.bench.q_max}};
  j["scale"] = {{"sizes", c.scale_sizes}};
  json slices = json::array();
  for (const auto &s : c.slices)
  {
    slices.push_back({{"axis", s.axis}, {"index", s.index}, {"format", s.format}});
  }
  j["slices"] = slices;
  j["paths"] = {{"model_in", c.model_in ? json(c.model_in->string()) : json(nullptr)},
                {"model_sidecar", c.model_sidecar ? json(c.model_sidecar->string()) : json(nullptr)},
                {"output_dir", c.output_dir.string()}};
  j["report"] = {{"wall_time", c.wall_time}};
  return j;
}

}  // namespace helmfci::cli

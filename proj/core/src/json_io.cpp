#include "lightray/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

#include "lightray/errors.hpp"

namespace lightray {

using nlohmann::json;

std::string index_key(std::span<const int> idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(idx[i]);
  }
  return out;
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw SchemaError(where.empty() ? key : where + "." + key, "unknown field");
  }
}

namespace {

int get_int(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw SchemaError(where + "." + key, "missing");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw SchemaError(where + "." + key, "expected an integer");
  return v.get<int>();
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where, "expected a number");
  return v.get<double>();
}

std::vector<int> parse_key(const std::string& key, int axes, int rank, const std::string& where) {
  std::vector<int> idx;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      idx.push_back(v);
    } catch (const std::exception&) {
      throw SchemaError(where, "malformed index key '" + key + "'");
    }
  }
  if (rank == 0 && key.empty()) return idx;
  if (static_cast<int>(idx.size()) != rank)
    throw SchemaError(where, "index key '" + key + "' needs " + std::to_string(rank) + " entries");
  for (int v : idx)
    if (v < 0 || v >= axes) throw SchemaError(where, "index key '" + key + "' out of range");
  std::sort(idx.begin(), idx.end());
  return idx;
}

template <typename T>
SymTensor<T> tensor_from_components(const json& comps, int axes, int rank, const std::string& where) {
  if (!comps.is_object()) throw SchemaError(where, "expected an object of index keys");
  SymTensor<T> t(axes, rank);
  std::vector<bool> seen(t.size(), false);
  for (const auto& [key, value] : comps.items()) {
    const std::string field = where + "." + key;
    const auto idx = parse_key(key, axes, rank, field);
    const std::size_t pos = t.table().offset(idx);
    if (seen[pos]) throw SchemaError(field, "duplicate component after canonicalisation");
    seen[pos] = true;
    if constexpr (std::is_same_v<T, double>) {
      t[pos] = get_number(value, field);
    } else {
      if (value.is_number()) {
        t[pos] = value.template get<double>();
      } else if (value.is_array() && value.size() == 2) {
        t[pos] = T(get_number(value[0], field), get_number(value[1], field));
      } else {
        throw SchemaError(field, "expected a number or [re, im]");
      }
    }
  }
  return t;
}

template <typename T>
json components_json(const SymTensor<T>& t) {
  json comps = json::object();
  for (std::size_t pos = 0; pos < t.size(); ++pos) {
    if (t[pos] == T(0)) continue;
    const std::string key = index_key(t.table().index(pos));
    if constexpr (std::is_same_v<T, double>)
      comps[key] = t[pos];
    else
      comps[key] = json::array({t[pos].real(), t[pos].imag()});
  }
  return comps;
}

template <typename T>
SymTensor<T> tensor_from_json(const json& j, const std::string& where) {
  require_keys(j, {"n", "m", "components"}, where);
  const int n = get_int(j, "n", where), m = get_int(j, "m", where);
  if (n < 1 || n > kMaxAxes - 1) throw SchemaError(where + ".n", "must be in 1..8");
  if (m < 0 || m > 16) throw SchemaError(where + ".m", "must be in 0..16");
  if (!j.contains("components")) throw SchemaError(where + ".components", "missing");
  return tensor_from_components<T>(j.at("components"), n + 1, m, where + ".components");
}

}  // namespace

json tensor_to_json(const RealTensor& t) { return {{"n", t.n()}, {"m", t.rank()}, {"components", components_json(t)}}; }
json tensor_to_json(const ComplexTensor& t) {
  return {{"n", t.n()}, {"m", t.rank()}, {"components", components_json(t)}};
}

RealTensor real_tensor_from_json(const json& j, const std::string& where) { return tensor_from_json<double>(j, where); }
ComplexTensor complex_tensor_from_json(const json& j, const std::string& where) {
  return tensor_from_json<std::complex<double>>(j, where);
}

json phantom_to_json(const PhantomField& f) {
  json terms = json::array();
  for (const auto& t : f.terms) {
    json centre = json::array();
    for (int i = 0; i < t.center.size(); ++i) centre.push_back(t.center(i));
    terms.push_back({{"coeff", components_json(t.coeff)}, {"center", centre}, {"sigma", t.sigma}});
  }
  return {{"version", kPhantomVersion}, {"n", f.n}, {"m", f.m}, {"c", f.c}, {"terms", terms}};
}

PhantomField phantom_from_json(const json& j, const std::string& where) {
  require_keys(j, {"version", "n", "m", "c", "terms"}, where);
  if (j.contains("version") && j.at("version") != kPhantomVersion)
    throw SchemaError(where + ".version", "unsupported phantom version");
  PhantomField f;
  f.n = get_int(j, "n", where);
  f.m = get_int(j, "m", where);
  if (f.n < 1 || f.n > kMaxAxes - 1) throw SchemaError(where + ".n", "must be in 1..8");
  if (f.m < 0 || f.m > 8) throw SchemaError(where + ".m", "must be in 0..8");
  f.c = j.contains("c") ? get_number(j.at("c"), where + ".c") : 1.0;
  if (!(f.c > 0.0)) throw SchemaError(where + ".c", "must be positive");
  if (!j.contains("terms") || !j.at("terms").is_array()) throw SchemaError(where + ".terms", "expected an array");
  int idx = 0;
  for (const auto& tj : j.at("terms")) {
    const std::string tw = where + ".terms[" + std::to_string(idx++) + "]";
    require_keys(tj, {"coeff", "center", "sigma"}, tw);
    GaussianTerm term;
    if (!tj.contains("coeff")) throw SchemaError(tw + ".coeff", "missing");
    term.coeff = tensor_from_components<double>(tj.at("coeff"), f.n + 1, f.m, tw + ".coeff");
    term.center = Vec::Zero(f.n + 1);
    if (tj.contains("center")) {
      const json& cj = tj.at("center");
      if (!cj.is_array() || static_cast<int>(cj.size()) != f.n + 1)
        throw SchemaError(tw + ".center", "expected " + std::to_string(f.n + 1) + " numbers");
      for (int i = 0; i <= f.n; ++i) term.center(i) = get_number(cj[i], tw + ".center");
    }
    if (!tj.contains("sigma")) throw SchemaError(tw + ".sigma", "missing");
    term.sigma = get_number(tj.at("sigma"), tw + ".sigma");
    if (!(term.sigma > 0.0)) throw SchemaError(tw + ".sigma", "must be positive");
    f.terms.push_back(std::move(term));
  }
  if (f.terms.empty()) throw SchemaError(where + ".terms", "needs at least one term");
  return f;
}

}  // namespace lightray

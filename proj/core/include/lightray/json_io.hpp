#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "lightray/phantom.hpp"
#include "lightray/tensor.hpp"

namespace lightray {

// "0,1,1" style key of a canonical multi-index.
std::string index_key(std::span<const int> idx);

// {"n", "m", "components": {"0,1": value}}; complex values as [re, im].
// Zero components are omitted on output; keys are canonicalised on input.
nlohmann::json tensor_to_json(const RealTensor& t);
nlohmann::json tensor_to_json(const ComplexTensor& t);
RealTensor real_tensor_from_json(const nlohmann::json& j, const std::string& where = "tensor");
ComplexTensor complex_tensor_from_json(const nlohmann::json& j, const std::string& where = "tensor");

inline constexpr int kPhantomVersion = 1;

// {"version", "n", "m", "c", "terms": [{"coeff": {...}, "center": [...], "sigma": s}]},
// where "coeff" holds a component map as above. Throws SchemaError.
nlohmann::json phantom_to_json(const PhantomField& f);
PhantomField phantom_from_json(const nlohmann::json& j, const std::string& where = "phantom");

// Rejects keys outside `allowed` with a SchemaError naming the field.
void require_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where);

}  // namespace lightray

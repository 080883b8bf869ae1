#pragma once

#include <stdexcept>
#include <string>

namespace lightray {

enum class GeometryFault {
  not_spacelike,
  degenerate_axis,
  outside_patch,
  parallel_axis,
  degenerate_family,
};

const char* to_string(GeometryFault fault);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(GeometryFault fault, const std::string& detail)
      : std::runtime_error(std::string(to_string(fault)) + ": " + detail), fault_(fault) {}
  GeometryFault fault() const { return fault_; }

 private:
  GeometryFault fault_;
};

// Malformed phantom/tensor/config documents. `field` names the offending key path.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& field, const std::string& detail)
      : std::runtime_error(field + ": " + detail), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace lightray

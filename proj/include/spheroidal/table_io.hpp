#pragma once

// Coefficient-table document:
//   { "m": 1, "N": 3,
//     "energy": ["0/1", "-1/1", ...],
//     "orders": [ {"n": 1, "a": {}, "b": {"1": "-1/2"}}, ... ] }
// Rationals are always "num/den" strings, never floating point.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "spheroidal/recurrence.hpp"

namespace spheroidal {

struct CoefficientDocument {
  int m = 0;
  int order = 0;
  EnergySeries energy;
  std::vector<WnTable> orders;

  friend bool operator==(const CoefficientDocument&, const CoefficientDocument&) = default;
};

CoefficientDocument make_document(const SeriesState& state);

nlohmann::ordered_json to_json(const CoefficientDocument& doc);
/// Throws std::invalid_argument on malformed input.
CoefficientDocument document_from_json(const nlohmann::json& j);

void write_document(std::ostream& os, const CoefficientDocument& doc);
CoefficientDocument read_document(std::istream& is);

/// One row per coefficient: kind,n,k,value with kind in {energy,a,b}.
void write_document_csv(std::ostream& os, const CoefficientDocument& doc);

}  // namespace spheroidal

#include "spheroidal/table_io.hpp"

#include <istream>
#include <ostream>

namespace spheroidal {

namespace {

nlohmann::ordered_json coeff_object(const CoeffMap& map) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [k, v] : map.entries()) obj[std::to_string(k)] = v.str();
  return obj;
}

CoeffMap coeff_map_from(const nlohmann::json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("coefficient map must be an object");
  CoeffMap map;
  for (const auto& [key, value] : obj.items()) {
    if (!value.is_string()) throw std::invalid_argument("coefficient '" + key + "' must be a \"num/den\" string");
    std::size_t used = 0;
    int k = std::stoi(key, &used);
    if (used != key.size()) throw std::invalid_argument("coefficient index '" + key + "' is not an integer");
    map.set(k, Rational::parse(value.get<std::string>()));
  }
  return map;
}

}  // namespace

CoefficientDocument make_document(const SeriesState& state) {
  return CoefficientDocument{state.params().m(), state.current_order(), state.energy(), state.orders()};
}

nlohmann::ordered_json to_json(const CoefficientDocument& doc) {
  nlohmann::ordered_json j;
  j["m"] = doc.m;
  j["N"] = doc.order;
  j["energy"] = nlohmann::ordered_json::array();
  for (const auto& e : doc.energy.coeffs) j["energy"].push_back(e.str());
  j["orders"] = nlohmann::ordered_json::array();
  for (const auto& w : doc.orders) {
    nlohmann::ordered_json o;
    o["n"] = w.n;
    o["a"] = coeff_object(w.a);
    o["b"] = coeff_object(w.b);
    j["orders"].push_back(std::move(o));
  }
  return j;
}

CoefficientDocument document_from_json(const nlohmann::json& j) {
  try {
    CoefficientDocument doc;
    doc.m = j.at("m").get<int>();
    doc.order = j.at("N").get<int>();
    for (const auto& e : j.at("energy")) doc.energy.coeffs.push_back(Rational::parse(e.get<std::string>()));
    for (const auto& o : j.at("orders")) {
      WnTable w;
      w.n = o.at("n").get<int>();
      w.a = coeff_map_from(o.at("a"));
      w.b = coeff_map_from(o.at("b"));
      doc.orders.push_back(std::move(w));
    }
    if (doc.energy.size() != doc.order + 1 || static_cast<int>(doc.orders.size()) != doc.order) {
      throw std::invalid_argument("energy/orders lengths do not match N");
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed coefficient document: ") + e.what());
  }
}

void write_document(std::ostream& os, const CoefficientDocument& doc) { os << to_json(doc).dump(2) << '\n'; }

CoefficientDocument read_document(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed coefficient document: ") + e.what());
  }
  return document_from_json(j);
}

void write_document_csv(std::ostream& os, const CoefficientDocument& doc) {
  os << "# m=" << doc.m << " N=" << doc.order << '\n';
  os << "kind,n,k,value\n";
  for (int n = 0; n < doc.energy.size(); ++n) os << "energy," << n << ",0," << doc.energy[n] << '\n';
  for (const auto& w : doc.orders) {
    for (const auto& [k, v] : w.a.entries()) os << "a," << w.n << ',' << k << ',' << v << '\n';
    for (const auto& [k, v] : w.b.entries()) os << "b," << w.n << ',' << k << ',' << v << '\n';
  }
}

}  // namespace spheroidal

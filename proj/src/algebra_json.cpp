#include "natred/algebra_json.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include "natred/errors.hpp"

namespace natred {

namespace {

using nlohmann::json;

int read_index(const json& rec, const char* key, int bound, const std::string& kind) {
  if (!rec.contains(key) || !rec.at(key).is_number_integer()) {
    throw DomainError("algebra json: bracket record of kind " + kind + " needs integer '" + key + "'");
  }
  const int v = rec.at(key).get<int>();
  if (v < 0 || v >= bound) {
    throw DomainError("algebra json: index '" + std::string(key) + "' = " + std::to_string(v) +
                      " out of range for kind " + kind);
  }
  return v;
}

int read_dim(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number_integer()) {
    throw DomainError(std::string("algebra json: missing integer '") + key + "'");
  }
  return doc.at(key).get<int>();
}

}  // namespace

ReductiveAlgebra algebra_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw DomainError("algebra json: top level must be an object");
  }
  const int n = read_dim(doc, "dim_m");
  const int q = read_dim(doc, "dim_k");
  if (n < 1 || q < 0) {
    throw DomainError("algebra json: need dim_m >= 1 and dim_k >= 0");
  }
  auto tables = ReductiveAlgebra::Tables::zeros(n, q);

  if (doc.contains("metric_m")) {
    const json& metric = doc.at("metric_m");
    if (!metric.is_array() || metric.size() != static_cast<std::size_t>(n * n)) {
      throw DomainError("algebra json: metric_m must be an array of dim_m*dim_m numbers");
    }
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const json& x = metric.at(static_cast<std::size_t>(r * n + c));
        if (!x.is_number()) throw DomainError("algebra json: metric_m entries must be numbers");
        tables.metric_m(r, c) = x.get<double>();
      }
    }
  }

  // (kind, i, j, k) -> value, with each record stored exactly as given.
  std::map<std::tuple<std::string, int, int, int>, double> given;
  if (doc.contains("brackets")) {
    const json& list = doc.at("brackets");
    if (!list.is_array()) throw DomainError("algebra json: brackets must be an array");
    for (const json& rec : list) {
      if (!rec.is_object() || !rec.contains("kind") || !rec.at("kind").is_string()) {
        throw DomainError("algebra json: each bracket record needs a string 'kind'");
      }
      const std::string kind = rec.at("kind").get<std::string>();
      int bi = 0, bj = 0, bk = 0;
      if (kind == "mm_m") {
        bi = n, bj = n, bk = n;
      } else if (kind == "mm_k") {
        bi = n, bj = n, bk = q;
      } else if (kind == "km") {
        bi = q, bj = n, bk = n;
      } else if (kind == "kk") {
        bi = q, bj = q, bk = q;
      } else {
        throw DomainError("algebra json: unknown bracket kind '" + kind + "'");
      }
      const int i = read_index(rec, "i", bi, kind);
      const int j = read_index(rec, "j", bj, kind);
      const int k = read_index(rec, "k", bk, kind);
      if (!rec.contains("value") || !rec.at("value").is_number()) {
        throw DomainError("algebra json: bracket record needs a numeric 'value'");
      }
      const double value = rec.at("value").get<double>();
      if (!std::isfinite(value)) throw DomainError("algebra json: non-finite bracket value");
      const auto key = std::make_tuple(kind, i, j, k);
      if (auto it = given.find(key); it != given.end() && it->second != value) {
        throw DomainError("algebra json: conflicting duplicate entry for " + kind);
      }
      given[key] = value;
    }
  }

  for (const auto& [key, value] : given) {
    const auto& [kind, i, j, k] = key;
    const bool antisymmetric = kind != "km";
    if (antisymmetric) {
      if (i == j && value != 0.0) {
        throw DomainError("algebra json: nonzero diagonal entry in antisymmetric kind " + kind);
      }
      if (auto it = given.find(std::make_tuple(kind, j, i, k)); it != given.end()) {
        const double sum = value + it->second;
        if (std::abs(sum) > 1e-12 * std::max(1.0, std::abs(value))) {
          throw DomainError("algebra json: entries (" + std::to_string(i) + "," + std::to_string(j) + ") and (" +
                            std::to_string(j) + "," + std::to_string(i) + ") of kind " + kind +
                            " are not antisymmetric");
        }
      }
    }
    if (kind == "mm_m") {
      tables.mm_m_at(i, j, k) = value;
      tables.mm_m_at(j, i, k) = -value;
    } else if (kind == "mm_k") {
      tables.mm_k_at(i, j, k) = value;
      tables.mm_k_at(j, i, k) = -value;
    } else if (kind == "kk") {
      tables.kk_at(i, j, k) = value;
      tables.kk_at(j, i, k) = -value;
    } else {
      tables.km_at(i, j, k) = value;
    }
  }
  return ReductiveAlgebra(std::move(tables));
}

ReductiveAlgebra algebra_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open algebra file '" + path + "'");
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw DomainError("algebra file '" + path + "' is not valid JSON: " + e.what());
  }
  return algebra_from_json(doc);
}

json algebra_to_json(const ReductiveAlgebra& alg) {
  const int n = alg.dim_m();
  const int q = alg.dim_k();
  json doc;
  doc["dim_m"] = n;
  doc["dim_k"] = q;
  json metric = json::array();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) metric.push_back(alg.metric()(r, c));
  }
  doc["metric_m"] = metric;

  json list = json::array();
  auto emit = [&](const char* kind, int i, int j, int k, double v) {
    if (v != 0.0) list.push_back({{"kind", kind}, {"i", i}, {"j", j}, {"k", k}, {"value", v}});
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = 0; k < n; ++k) emit("mm_m", i, j, k, alg.mm_m(i, j, k));
      for (int a = 0; a < q; ++a) emit("mm_k", i, j, a, alg.mm_k(i, j, a));
    }
  }
  for (int a = 0; a < q; ++a) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) emit("km", a, j, k, alg.km(a, j, k));
    }
  }
  for (int a = 0; a < q; ++a) {
    for (int b = a + 1; b < q; ++b) {
      for (int c = 0; c < q; ++c) emit("kk", a, b, c, alg.kk(a, b, c));
    }
  }
  doc["brackets"] = list;
  return doc;
}

}  // namespace natred

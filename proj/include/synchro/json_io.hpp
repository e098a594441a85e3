#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "synchro/automaton.hpp"
#include "synchro/bit_matrix.hpp"
#include "synchro/config.hpp"
#include "synchro/matrix_set.hpp"
#include "synchro/primitivity.hpp"

namespace synchro::json_io {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw InvalidInput("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("missing field \"") + key + "\"");
  return *it;
}

inline std::size_t index(const Json& j, std::size_t bound, const char* what) {
  if (!j.is_number_integer() ||
      (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw InvalidInput(std::string(what) + " must be a nonnegative integer");
  }
  const auto v = j.get<std::uint64_t>();
  if (v >= bound) {
    throw InvalidInput(std::string(what) + " " + std::to_string(v) +
                       " out of range [0, " + std::to_string(bound) + ")");
  }
  return static_cast<std::size_t>(v);
}

inline std::size_t dimension(const Json& j) {
  const Json& n = field(j, "n");
  if (!n.is_number_integer() || n.get<long long>() <= 0) {
    throw InvalidInput("\"n\" must be a positive integer");
  }
  const auto v = static_cast<std::size_t>(n.get<long long>());
  check_dimension(v);
  return v;
}

inline std::vector<State> state_list(const Json& j, std::size_t bound,
                                     const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array");
  std::vector<State> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(static_cast<State>(index(x, bound, what)));
  return out;
}

}  // namespace detail

inline Json to_json(const BinaryMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n(); ++i) rows.push_back(m.row_support(i));
  return Json{{"n", m.n()}, {"rows", std::move(rows)}};
}

inline BinaryMatrix matrix_from_json(const Json& j) {
  const std::size_t n = detail::dimension(j);
  const Json& rows = detail::field(j, "rows");
  if (!rows.is_array() || rows.size() != n) {
    throw InvalidInput("\"rows\" must be an array of n rows");
  }
  BinaryMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cols = detail::state_list(rows[i], n, "column index");
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (k > 0 && cols[k] <= cols[k - 1]) {
        throw InvalidInput("row " + std::to_string(i) +
                           " column indices must be strictly ascending");
      }
      m.set(i, cols[k]);
    }
  }
  return m;
}

inline Json to_json(const GeneratorMeta& meta) {
  Json structures = Json::array();
  for (const auto& st : meta.structures) {
    Json sigmas = Json::array();
    for (const auto& s : st.sigmas) {
      sigmas.push_back(s ? Json(*s) : Json(nullptr));
    }
    structures.push_back(Json{{"excluded", st.excluded},
                              {"q", st.q},
                              {"block_of", st.block_of},
                              {"sigmas", std::move(sigmas)}});
  }
  Json out{{"structures", std::move(structures)}};
  if (meta.perturbation) {
    out["perturbation"] = Json{{"matrix", meta.perturbation->matrix},
                               {"row", meta.perturbation->row},
                               {"col", meta.perturbation->col}};
  }
  return out;
}

inline GeneratorMeta meta_from_json(const Json& j, std::size_t n, std::size_t m) {
  GeneratorMeta meta;
  const Json& structures = detail::field(j, "structures");
  if (!structures.is_array()) throw InvalidInput("\"structures\" must be an array");
  for (const auto& sj : structures) {
    RecordedStructure st;
    st.excluded = detail::index(detail::field(sj, "excluded"), m, "excluded");
    st.q = detail::index(detail::field(sj, "q"), n + 1, "q");
    st.block_of = detail::state_list(detail::field(sj, "block_of"), st.q, "block");
    if (st.block_of.size() != n) throw InvalidInput("block_of must have n entries");
    const Json& sigmas = detail::field(sj, "sigmas");
    if (!sigmas.is_array() || sigmas.size() != m) {
      throw InvalidInput("sigmas must have one entry per matrix");
    }
    for (const auto& s : sigmas) {
      if (s.is_null()) {
        st.sigmas.emplace_back(std::nullopt);
      } else {
        st.sigmas.emplace_back(detail::state_list(s, st.q, "block"));
      }
    }
    meta.structures.push_back(std::move(st));
  }
  if (auto it = j.find("perturbation"); it != j.end() && !it->is_null()) {
    meta.perturbation = Perturbation{
        detail::index(detail::field(*it, "matrix"), m, "matrix"),
        detail::index(detail::field(*it, "row"), n, "row"),
        detail::index(detail::field(*it, "col"), n, "col")};
  }
  return meta;
}

inline Json to_json(const MatrixSet& s) {
  Json matrices = Json::array();
  for (const auto& m : s) matrices.push_back(to_json(m));
  Json out{{"n", s.n()}, {"matrices", std::move(matrices)}};
  if (s.meta()) out["meta"] = to_json(*s.meta());
  return out;
}

inline MatrixSet set_from_json(const Json& j) {
  const std::size_t n = detail::dimension(j);
  const Json& mj = detail::field(j, "matrices");
  if (!mj.is_array() || mj.empty()) {
    throw InvalidInput("\"matrices\" must be a nonempty array");
  }
  std::vector<BinaryMatrix> ms;
  for (const auto& x : mj) {
    ms.push_back(matrix_from_json(x));
    if (ms.back().n() != n) throw DimensionError("matrix dimension differs from n");
  }
  std::optional<GeneratorMeta> meta;
  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    meta = meta_from_json(*it, n, ms.size());
  }
  return MatrixSet(std::move(ms), std::move(meta));
}

inline Json to_json(const Automaton& a) {
  return Json{{"n", a.n()}, {"letters", a.letters()}};
}

inline Automaton automaton_from_json(const Json& j) {
  const std::size_t n = detail::dimension(j);
  const Json& lj = detail::field(j, "letters");
  if (!lj.is_array()) throw InvalidInput("\"letters\" must be an array");
  std::vector<Letter> letters;
  for (const auto& x : lj) {
    letters.push_back(detail::state_list(x, n, "state"));
    if (letters.back().size() != n) throw InvalidInput("letter must have n images");
  }
  return Automaton(n, std::move(letters));
}

inline Json to_json(const PrimitivityVerdict& v) {
  Json witness = nullptr;
  if (v.unreachable) {
    witness = Json{{"unreachable", {v.unreachable->first, v.unreachable->second}}};
  } else if (v.structure) {
    witness = Json{{"block_of", v.structure->partition.labels()},
                   {"sigmas", v.structure->sigmas}};
  }
  return Json{{"class", to_string(v.cls)}, {"witness", std::move(witness)}};
}

/// Parses a whole stream, mapping syntax errors to InvalidInput.
inline Json parse(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace synchro::json_io

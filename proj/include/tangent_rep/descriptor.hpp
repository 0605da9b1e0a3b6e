#pragma once

// Representation descriptor documents (JSON):
//
//   {
//     "name": "optional label",
//     "group": {"kind": "SpecialOrthogonal", "dim": 3},
//     "target_dim": 3,
//     "map": {"kind": "named", "name": "so3_standard"}
//         | {"kind": "generators", "generator_images": [M_1, ..., M_k]},
//     "differential": [D_1, ..., D_k]          (optional)
//   }
//
// Matrices are row-major, either flat arrays of target_dim^2 numbers or
// arrays of rows. Generator images are dPhi of algebra_basis(group) in order;
// a generator map realizes Phi(exp(sum t_k B_k)) = exp(sum t_k dPhi(B_k)).
// Product groups list their parts under "factors".

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalog.hpp"
#include "prolongation.hpp"
#include "rep_algebra.hpp"

namespace tangent_rep {

/// The descriptor parsed but its homomorphism check failed.
class HomomorphismRejected : public DescriptorError {
 public:
  HomomorphismRejected(const std::string& what, CheckReport report)
      : DescriptorError(what), report_(std::move(report)) {}
  const CheckReport& report() const { return report_; }

 private:
  CheckReport report_;
};

struct LoadOptions {
  int samples = 50;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

namespace descriptor_detail {

using nlohmann::json;

inline const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw DescriptorError(std::string("descriptor: missing field '") + key + "'");
  return doc.at(key);
}

inline int positive_int(const json& value, const char* what) {
  if (!value.is_number_integer() || value.get<long long>() < 1 || value.get<long long>() > 64)
    throw DescriptorError(std::string("descriptor: ") + what + " must be an integer in [1, 64]");
  return value.get<int>();
}

inline GroupSpec parse_group(const json& g) {
  const auto& kind_field = require(g, "kind");
  if (!kind_field.is_string()) throw DescriptorError("descriptor: group.kind must be a string");
  const GroupKind kind = parse_kind(kind_field.get<std::string>());
  if (kind == GroupKind::Product) {
    const auto& factors = require(g, "factors");
    if (!factors.is_array() || factors.empty()) throw DescriptorError("descriptor: product needs a non-empty factors list");
    std::vector<GroupSpec> parts;
    for (const auto& f : factors) parts.push_back(parse_group(f));
    GroupSpec spec = GroupSpec::product(std::move(parts));
    if (g.contains("dim") && positive_int(g.at("dim"), "group.dim") != spec.dim)
      throw DescriptorError("descriptor: product dim disagrees with its factors");
    return spec;
  }
  const int dim = kind == GroupKind::Circle && !g.contains("dim") ? 2 : positive_int(require(g, "dim"), "group.dim");
  try {
    return GroupSpec::make(kind, dim);
  } catch (const DimensionError& e) {
    throw DescriptorError(std::string("descriptor: ") + e.what());
  }
}

inline Matrix parse_matrix(const json& m, int n) {
  Matrix out(n, n);
  if (!m.is_array()) throw DescriptorError("descriptor: matrix must be an array");
  std::vector<double> flat;
  for (const auto& row : m) {
    if (row.is_array()) {
      if (row.size() != static_cast<std::size_t>(n)) throw DescriptorError("descriptor: matrix row has wrong length");
      for (const auto& x : row) {
        if (!x.is_number()) throw DescriptorError("descriptor: matrix entries must be numbers");
        flat.push_back(x.get<double>());
      }
    } else if (row.is_number()) {
      flat.push_back(row.get<double>());
    } else {
      throw DescriptorError("descriptor: matrix entries must be numbers");
    }
  }
  if (flat.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw DescriptorError("descriptor: matrix must have " + std::to_string(n * n) + " entries");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = flat[static_cast<std::size_t>(i * n + j)];
  if (!out.allFinite()) throw DescriptorError("descriptor: non-finite matrix entry");
  return out;
}

inline std::vector<Matrix> parse_matrix_list(const json& list, std::size_t count, int n, const char* what) {
  if (!list.is_array() || list.size() != count)
    throw DescriptorError(std::string("descriptor: ") + what + " must list " + std::to_string(count) +
                          " matrices, one per algebra basis element");
  std::vector<Matrix> out;
  for (const auto& m : list) out.push_back(parse_matrix(m, n));
  return out;
}

/// Linear map on the Lie algebra given by its values on algebra_basis.
inline Representation::DifferentialFn linear_extension(std::vector<Matrix> images) {
  return [images = std::move(images)](const AlgebraElement& b) -> Matrix {
    const auto c = b.coordinates();
    Matrix out = Matrix::Zero(images.front().rows(), images.front().cols());
    for (std::size_t k = 0; k < images.size(); ++k) out += c[k] * images[k];
    return out;
  };
}

}  // namespace descriptor_detail

/// Builds a Representation from a parsed descriptor and runs
/// check_homomorphism on it. Throws DescriptorError for malformed documents
/// and HomomorphismRejected when the check fails.
inline Representation load_representation(const nlohmann::json& doc, const LoadOptions& options = {}) {
  using namespace descriptor_detail;
  if (!doc.is_object()) throw DescriptorError("descriptor: top level must be an object");
  const GroupSpec group = parse_group(require(doc, "group"));
  const int n = positive_int(require(doc, "target_dim"), "target_dim");
  const auto& map = require(doc, "map");
  const auto& map_kind = require(map, "kind");
  if (!map_kind.is_string()) throw DescriptorError("descriptor: map.kind must be a string");
  const std::size_t basis_size = algebra_basis(group).size();

  Representation rep;
  if (map_kind == "named") {
    const auto& name = require(map, "name");
    if (!name.is_string()) throw DescriptorError("descriptor: map.name must be a string");
    try {
      rep = catalog_lookup(name.get<std::string>()).rep;
    } catch (const UnknownRepresentation& e) {
      throw DescriptorError(std::string("descriptor: ") + e.what());
    }
    if (!(rep.group == group) || rep.target_dim != n)
      throw DescriptorError("descriptor: group or target_dim disagrees with named map '" + rep.name + "'");
  } else if (map_kind == "generators") {
    auto images = parse_matrix_list(require(map, "generator_images"), basis_size, n, "map.generator_images");
    rep.name = "generators";
    rep.group = group;
    rep.target_dim = n;
    rep.apply_fn = [images](const GroupElement& a) -> Matrix {
      const auto coords = mat_log(a).coordinates();
      Matrix x = Matrix::Zero(images.front().rows(), images.front().cols());
      for (std::size_t k = 0; k < images.size(); ++k) x += coords[k] * images[k];
      return mat_exp(x);
    };
    rep.differential_fn = linear_extension(std::move(images));
  } else {
    throw DescriptorError("descriptor: map.kind must be \"named\" or \"generators\"");
  }
  if (doc.contains("differential"))
    rep.differential_fn = linear_extension(parse_matrix_list(doc.at("differential"), basis_size, n, "differential"));
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) throw DescriptorError("descriptor: name must be a string");
    rep.name = doc.at("name").get<std::string>();
  }

  CheckReport hom;
  try {
    hom = check_homomorphism(rep, options.samples, options.seed, options.tol);
  } catch (const MembershipError& e) {
    throw DescriptorError(std::string("descriptor: cannot evaluate map: ") + e.what());
  }
  if (!hom.passed())
    throw HomomorphismRejected("descriptor '" + rep.name + "' is not a homomorphism: residual " +
                                   std::to_string(hom.max_residual) + " at sample " +
                                   std::to_string(hom.witness ? hom.witness->sample_index.value_or(-1) : -1),
                               hom);
  return rep;
}

inline Representation load_representation_text(const std::string& text, const LoadOptions& options = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DescriptorError(std::string("descriptor: ") + e.what());
  }
  return load_representation(doc, options);
}

inline Representation load_representation_file(const std::string& path, const LoadOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw DescriptorError("descriptor: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_representation_text(buffer.str(), options);
}

}  // namespace tangent_rep

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qlat/com.hpp"
#include "qlat/convex_set.hpp"
#include "qlat/error.hpp"
#include "qlat/lambda_tau.hpp"
#include "qlat/maxent.hpp"
#include "qlat/separability.hpp"

namespace qlat {

using Json = nlohmann::json;

/// Malformed or inconsistent input document.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Matrices are arrays of rows; each entry is a number or [re, im].
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const HermitianOperator& h);
HermitianOperator hermitian_from_json(const Json& j, const Tolerances& tol = default_tolerances());

/// {"dim": d, "matrix": [...]} plus "dims": [d1, d2] for composite states.
Json to_json(const DensityMatrix& rho, const std::optional<BipartiteDims>& dims = std::nullopt);
DensityMatrix density_from_json(const Json& j, std::optional<BipartiteDims>* dims = nullptr,
                                const Tolerances& tol = default_tolerances());

/// {"dims": [...]?, "generators": [state...]}.
Json to_json(const StatePolytope& p);
StatePolytope polytope_from_json(const Json& j, const Tolerances& tol = default_tolerances());

/// {"dim": d, "basis": [hermitian...]}.
Json to_json(const HermitianSubspace& s);
HermitianSubspace subspace_from_json(const Json& j, const Tolerances& tol = default_tolerances());

Json to_json(const SeparableDecomposition& d);
SeparableDecomposition decomposition_from_json(const Json& j, const Tolerances& tol = default_tolerances());

/// {"observables": [...], "targets": [...]}.
Json constraints_to_json(const std::vector<MeanValueConstraint>& c);
std::vector<MeanValueConstraint> constraints_from_json(const Json& j, const Tolerances& tol = default_tolerances());
Json to_json(const MaxEntSolution& s);

Json to_json(const Witness& w);
Json to_json(const ProductOptimum& p);
Json to_json(const ConvexModel& m);

/// {"verdict", "method", "witness", "violation", "seed", "iterations"} plus
/// method-specific detail.
Json certificate(const std::string& method, Verdict v, std::uint64_t seed, int iterations,
                 const std::optional<Witness>& w = std::nullopt);

Json to_json(const Tolerances& t);
/// Overrides the fields present in `j`.
Tolerances tolerances_from_json(const Json& j, Tolerances base = {});

/// 64-bit FNV-1a, as a 16-digit hex string.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace qlat

#pragma once

#include "hem/einstein.hpp"
#include "hem/laurent.hpp"
#include "hem/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace hem {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// {"ell", "equations": [{"terms": [{"exp", "coeff"}]}]}, terms in lexicographic order.
Json system_to_json(const RationalSystem& sys);
Json system_to_json(const ComplexSystem& sys);
RationalSystem rational_system_from_json(const Json& j);
ComplexSystem complex_system_from_json(const Json& j);
/// True when every coefficient in the document is rational.
bool json_system_is_rational(const Json& j);

/// {"ell", "b", "d", "L": [{"ijk": 1-based sorted, "value"}]}.
Json params_to_json(const SpaceParameters& p);
SpaceParameters params_from_json(const Json& j);

/// Complex numbers are [re, im] pairs.
Json solution_to_json(const Solution& s);
Solution solution_from_json(const Json& j);
/// Path accounting and solutions; wall time is left out so reruns are byte-identical.
Json report_to_json(const SolveReport& r);
SolveReport report_from_json(const Json& j);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string input_hash(std::string_view bytes);

/// Tool name, version, seed and input hash stamped into every artifact.
Json artifact_header(std::uint64_t seed, const std::string& hash);

/// Deterministic dump: two-space indent, trailing newline.
std::string dump(const Json& j);

} // namespace hem

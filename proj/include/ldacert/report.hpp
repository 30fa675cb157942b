#pragma once

#include <string>

#include <json.hpp>

#include "ldacert/certificate.hpp"

namespace ldacert {

using Json = nlohmann::ordered_json;

// Serializes with every floating-point value at 17 significant digits;
// non-finite values become null.
std::string dump_json(const Json& j, int indent = 2);

Json functionals_json(const FunctionalSet& F);
Json params_json(const CertParams& P);
Json constants_json(const CertParams& P);
Json certificate_json(const Certificate& c);
Json scaling_json(const ScalingResult& s, const CertParams& P);

}  // namespace ldacert

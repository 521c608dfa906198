#pragma once

#include <json.hpp>

#include "dmkit/truncated_hom.hpp"

namespace dmkit {

using json = nlohmann::json;

/// Scalar shorthand: a bare integer k is the scalar k*1; an array lists the
/// polynomial-basis coefficients (constant term first, missing ones zero).
WittScalar scalar_from_json(const RingPtr& ring, const json& j);
json scalar_to_json(const WittScalar& x);

/// Expects {"p", "n", "N", "c", "d", "a": [c+1 scalars], "b": [d scalars]}.
/// precision_override replaces N when set.
CyclicPresentation presentation_from_json(const json& j,
                                          std::optional<int> precision_override = {});
json presentation_to_json(const CyclicPresentation& psi);

json polygon_to_json(const NewtonPolygon& nu);
json report_to_json(const InvariantReport& r);
json profile_to_json(const GammaProfile& prof);

}  // namespace dmkit

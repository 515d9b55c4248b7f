#pragma once
// JSON encoding of verdicts, witnesses and certificates. Splittings and trees
// are embedded in the text grammar so a certificate can be re-checked alone.

#include "json.hpp"

#include "gw/classify.hpp"

namespace harness {

using nlohmann::json;

json factor_json(const gw::Presentation& p, const gw::FactorElement& x);
gw::FactorElement factor_from_json(const json& j, const gw::Presentation& p);

json collapse_json(const gw::Presentation& p, const gw::CollapseDesc& d);
gw::CollapseDesc collapse_from_json(const json& j, const gw::Presentation& p);

json evidence_json(const gw::EllipticEvidence& e);
gw::EllipticEvidence evidence_from_json(const json& j, const gw::PresPtr& p);

json witness_json(const gw::AdjacencyWitness& w);
gw::AdjacencyWitness witness_from_json(const json& j, const gw::PresPtr& p);

json bounds_json(const gw::ProjectionBounds& b);

json moves_json(const gw::ReductionResult& r);
json reduction_json(const gw::ReductionResult& r);

json simplicity_json(const gw::SimplicityVerdict& v);
json quadratic_json(const gw::QuadraticityVerdict& q);
json cutpair_json(const gw::CutPairSearch& s);
json extract_json(const gw::ExtractResult& r);

json certificate_json(const gw::PathCertificate& c, const gw::GrushkoTree& T0, const gw::GrushkoTree& T1);
struct LoadedCertificate {
  gw::PathCertificate cert;
  gw::GrushkoTree T0, T1;
};
LoadedCertificate certificate_from_json(const json& j);

}  // namespace harness

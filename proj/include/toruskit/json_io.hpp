#pragma once

#include <json.hpp>

#include "toruskit/bundles.hpp"
#include "toruskit/fourier.hpp"
#include "toruskit/hodge.hpp"
#include "toruskit/moduli_path.hpp"
#include "toruskit/torus_core.hpp"
#include "toruskit/twistor.hpp"

namespace toruskit {

using Json = nlohmann::ordered_json;

// Matrices are row-major arrays of rows. Real entries are numbers (or "p/q"
// strings on input), complex entries are [re, im] pairs, exact entries are
// "p/q" strings. Indices (blocks, dzbar, basis vectors) are 1-based.

Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j);
Json cmat_to_json(const CMat& m);
CMat cmat_from_json(const Json& j);
Json cvec_to_json(const CVec& v);
CVec cvec_from_json(const Json& j);
Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);

/// {"type": "torus", "backend": "f64" | "rational", "n", "periods"}.
Json torus_to_json(const MarkedTorus& t);
MarkedTorus torus_from_json(const Json& j);

Json metric_to_json(const Metric& g);
Metric metric_from_json(const Json& j);
Json structure_to_json(const ComplexStructure& s);
/// Accepts a structure document or a torus document (induced structure).
ComplexStructure structure_from_json(const Json& j);
Json frame_to_json(const IsotropicFrame& f);
IsotropicFrame frame_from_json(const Json& j);
Json twistor_point_to_json(const TwistorPoint& p);
TwistorPoint twistor_point_from_json(const Json& j);

/// {"type": "multivector", "dim", "degree", "terms": [{indices, re, im}]}.
Json multivector_to_json(const MultiVector& w);
MultiVector multivector_from_json(const Json& j);

Json genericity_report_to_json(const GenericityReport& r);
GenericityReport genericity_report_from_json(const Json& j);

/// {"type": "chain", "structures", "metrics", "residual", "hops", "strategy"}.
Json chain_to_json(const Chain& c);
Chain chain_from_json(const Json& j);

/// {"type": "ext_class", "n", "blocks": [{phases, rank}], "forms": {"i,j": [n matrices]}}.
Json ext_class_to_json(const ExtClass& nu);
ExtClass ext_class_from_json(const Json& j);

/// {"type": "fourier_form", "n", "degree", "rank",
///  "modes": [{"m": [...], "terms": [{"subset": [...], "matrix"}]}]}.
Json fourier_form_to_json(const FourierForm& f);
FourierForm fourier_form_from_json(const Json& j);

/// Reads a whole file; throws InvalidInput when it is missing or not JSON.
Json read_json_file(const std::string& path);

}  // namespace toruskit

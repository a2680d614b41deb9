#pragma once

#include <string>

#include <json.hpp>

#include "kit/homotopy.hpp"
#include "kit/hopf.hpp"

namespace kit {

using json = nlohmann::json;

// throws Error("IoError") / Error("BadJson")
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string dump_report(const json& j);

json complex_to_json(const ArrowPresentation& p);
// throws AxiomError
ArrowPresentation complex_from_json(const json& j);
// preset name, or a path to a complex JSON file
ArrowPresentation load_complex(const std::string& ref);

// complex numbers as [re, im]; plain reals are accepted on input
json cplx_to_json(cplx z);
cplx cplx_from_json(const json& j);
json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);

json hopf_to_json(const HopfData& h);
// recomputes the sparse tables and the Haar integral
HopfData hopf_from_json(const json& j);
HopfData load_hopf(const std::string& ref);

// {"base_arrow", "word"} or {"start", "arrows"}
json coded_curve_to_json(const CodedCurve& c);
json op_curve_to_json(const OpCurve& c);
OpCurve curve_from_json(const ArrowPresentation& p, const json& j);

json plan_to_json(const MovePlan& plan);
MovePlan plan_from_json(const json& j);

}  // namespace kit

#ifndef QFORM_JSON_IO_HPP
#define QFORM_JSON_IO_HPP

#include <json.hpp>

#include "qform/composition.hpp"
#include "qform/form.hpp"

namespace qform {

using json = nlohmann::ordered_json;

// Coefficients are JSON numbers when they fit in 64 bits, decimal strings
// beyond that (PF always serializes as a string).
json i128_to_json(i128 v);
i128 i128_from_json(const json& j);

json form_to_json(const Form& f);
Form form_from_json(const json& j);

json map_to_json(const UnimodularMap& u);
UnimodularMap map_from_json(const json& j);

json context_to_json(const CompositionContext& ctx);
CompositionContext context_from_json(const json& j);

void save_context(const CompositionContext& ctx, const std::string& path);
CompositionContext load_context(const std::string& path);

json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

}  // namespace qform

#endif

#include "qform/json_io.hpp"

#include <fstream>

namespace qform {

json i128_to_json(i128 v) {
    if (v >= i128(INT64_MIN) && v <= i128(INT64_MAX)) return json(i64(v));
    return json(to_string(v));
}

i128 i128_from_json(const json& j) {
    if (j.is_number_integer()) return i128(j.get<i64>());
    if (j.is_string()) return parse_i128(j.get<std::string>());
    throw std::invalid_argument("expected integer or decimal string");
}

json form_to_json(const Form& f) {
    return json::array({i128_to_json(f.a), i128_to_json(f.b), i128_to_json(f.c)});
}

Form form_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("form must be a JSON triple [a,b,c]");
    return {i128_from_json(j[0]), i128_from_json(j[1]), i128_from_json(j[2])};
}

json map_to_json(const UnimodularMap& u) {
    return json::array(
        {i128_to_json(u.p), i128_to_json(u.q), i128_to_json(u.r), i128_to_json(u.s)});
}

UnimodularMap map_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4)
        throw std::invalid_argument("substitution must be a JSON quadruple");
    return {i128_from_json(j[0]), i128_from_json(j[1]), i128_from_json(j[2]),
            i128_from_json(j[3])};
}

namespace {

json rep_to_json(const ClassRepresentative& e) {
    json j;
    j["form"] = form_to_json(e.form);
    j["prime"] = i128_to_json(e.prime);
    j["map"] = map_to_json(e.from_reduced);
    j["reduced"] = form_to_json(e.reduced);
    return j;
}

ClassRepresentative rep_from_json(const json& j) {
    ClassRepresentative e;
    e.form = form_from_json(j.at("form"));
    e.prime = i128_from_json(j.at("prime"));
    e.from_reduced = map_from_json(j.at("map"));
    e.reduced = form_from_json(j.at("reduced"));
    return e;
}

}  // namespace

json context_to_json(const CompositionContext& ctx) {
    json j;
    j["schema"] = "qform-context-v1";
    j["F"] = form_to_json(ctx.F);
    j["Delta"] = i128_to_json(ctx.Delta);
    // SF and SFstar are plain form triples; the construction evidence
    // (represented prime plus the substitution from the reduced form) sits in
    // the parallel witness arrays.
    json sf = json::array(), sfw = json::array();
    for (const auto& e : ctx.SF) {
        sf.push_back(form_to_json(e.form));
        sfw.push_back(rep_to_json(e));
    }
    j["SF"] = std::move(sf);
    json sfstar = json::array(), sfstarw = json::array();
    for (const auto& list : ctx.SFstar) {
        json l = json::array(), lw = json::array();
        for (const auto& e : list) {
            l.push_back(form_to_json(e.form));
            lw.push_back(rep_to_json(e));
        }
        sfstar.push_back(std::move(l));
        sfstarw.push_back(std::move(lw));
    }
    j["SFstar"] = std::move(sfstar);
    j["B"] = i128_to_json(ctx.B);
    j["QF"] = i128_to_json(ctx.QF);
    json qf = json::array();
    for (i128 v : ctx.Qfstar) qf.push_back(i128_to_json(v));
    j["Qfstar"] = std::move(qf);
    j["CF"] = ctx.CF;
    j["PF"] = to_string(ctx.PF);
    j["witnesses"] = json{{"SF", std::move(sfw)}, {"SFstar", std::move(sfstarw)}};
    return j;
}

CompositionContext context_from_json(const json& j) {
    if (j.value("schema", "") != "qform-context-v1")
        throw std::invalid_argument("not a qform context file");
    CompositionContext ctx;
    ctx.F = form_from_json(j.at("F"));
    ctx.Delta = i128_from_json(j.at("Delta"));
    const json& w = j.at("witnesses");
    for (const auto& e : w.at("SF")) ctx.SF.push_back(rep_from_json(e));
    for (const auto& l : w.at("SFstar")) {
        std::vector<ClassRepresentative> list;
        for (const auto& e : l) list.push_back(rep_from_json(e));
        ctx.SFstar.push_back(std::move(list));
    }
    // The plain triples must agree with the witnessed entries.
    const json& sf = j.at("SF");
    if (sf.size() != ctx.SF.size())
        throw std::invalid_argument("context SF/witness length mismatch");
    for (size_t i = 0; i < ctx.SF.size(); ++i)
        if (form_from_json(sf[i]) != ctx.SF[i].form)
            throw std::invalid_argument("context SF/witness form mismatch");
    ctx.B = i128_from_json(j.at("B"));
    ctx.QF = i128_from_json(j.at("QF"));
    for (const auto& v : j.at("Qfstar")) ctx.Qfstar.push_back(i128_from_json(v));
    ctx.CF = j.at("CF").get<i64>();
    ctx.PF = parse_u128(j.at("PF").get<std::string>());
    verify_context(ctx);
    return ctx;
}

void save_context(const CompositionContext& ctx, const std::string& path) {
    save_json_file(context_to_json(ctx), path);
}

CompositionContext load_context(const std::string& path) {
    return context_from_json(load_json_file(path));
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open: " + path);
    json j;
    in >> j;
    return j;
}

void save_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace qform

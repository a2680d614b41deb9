#include "kit/io.hpp"

#include <filesystem>
#include <fstream>

namespace kit {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error("BadJson", path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("IoError", "write failed for '" + path + "'");
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

json complex_to_json(const ArrowPresentation& p) {
    return {{"name", p.name()}, {"n_arrows", p.size()}, {"t0", p.perm(0)}, {"t2", p.perm(2)}};
}

ArrowPresentation complex_from_json(const json& j) {
    try {
        const int n = j.at("n_arrows").get<int>();
        const Perm t0 = j.at("t0").get<Perm>();
        const Perm t2 = j.at("t2").get<Perm>();
        return new_presentation(n, t0, t2, j.value("name", std::string("complex")));
    } catch (const json::exception& e) {
        throw Error("BadJson", std::string("complex: ") + e.what());
    }
}

ArrowPresentation load_complex(const std::string& ref) {
    if (std::filesystem::exists(ref)) return complex_from_json(read_json_file(ref));
    return preset(ref);
}

json cplx_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw Error("BadJson", "expected a number or an [re, im] pair");
}

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cplx_to_json(v(i)));
    return a;
}

Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw Error("BadJson", "expected an array of coordinates");
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(i) = cplx_from_json(j[i]);
    return v;
}

namespace {

json flat(const std::vector<cplx>& a) {
    json out = json::array();
    for (cplx z : a) out.push_back(cplx_to_json(z));
    return out;
}

json flat(const Mat& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(cplx_to_json(m(r, c)));
    return out;
}

std::vector<cplx> read_flat(const json& j, const char* key, size_t n) {
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != n)
        throw Error("BadJson", std::string("hopf: '") + key + "' needs " + std::to_string(n) + " entries");
    std::vector<cplx> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = cplx_from_json(a[i]);
    return out;
}

Mat read_matrix(const json& j, const char* key, int d) {
    const auto e = read_flat(j, key, static_cast<size_t>(d) * d);
    Mat m(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = e[r * d + c];
    return m;
}

}  // namespace

json hopf_to_json(const HopfData& h) {
    return {{"label", h.label},          {"dim", h.dim},
            {"mult", flat(h.mult)},      {"comult", flat(h.comult)},
            {"unit", vec_to_json(h.unit)}, {"counit", vec_to_json(h.counit)},
            {"antipode", flat(h.antipode)}, {"star", flat(h.star)}};
}

HopfData hopf_from_json(const json& j) {
    try {
        HopfData h;
        h.dim = j.at("dim").get<int>();
        const int d = h.dim;
        if (d <= 0) throw Error("BadJson", "hopf: dim must be positive");
        h.label = j.value("label", std::string("hopf"));
        const size_t d3 = static_cast<size_t>(d) * d * d;
        h.mult = read_flat(j, "mult", d3);
        h.comult = read_flat(j, "comult", d3);
        const auto u = read_flat(j, "unit", d), c = read_flat(j, "counit", d);
        h.unit = Eigen::Map<const Vec>(u.data(), d);
        h.counit = Eigen::Map<const Vec>(c.data(), d);
        h.antipode = read_matrix(j, "antipode", d);
        h.star = read_matrix(j, "star", d);
        h.index();
        h.haar = compute_haar(h);
        return h;
    } catch (const json::exception& e) {
        throw Error("BadJson", std::string("hopf: ") + e.what());
    }
}

HopfData load_hopf(const std::string& ref) {
    if (std::filesystem::exists(ref)) return hopf_from_json(read_json_file(ref));
    return hopf_preset(ref);
}

json coded_curve_to_json(const CodedCurve& c) { return {{"base_arrow", c.base}, {"word", word_string(c.word)}}; }

json op_curve_to_json(const OpCurve& c) { return {{"start", c.start}, {"arrows", c.arrows}}; }

OpCurve curve_from_json(const ArrowPresentation& p, const json& j) {
    try {
        OpCurve c;
        if (j.contains("word")) {
            c = decode(p, CodedCurve{j.at("base_arrow").get<int>(), parse_word(j.at("word").get<std::string>())});
        } else {
            c.start = j.at("start").get<int>();
            c.arrows = j.at("arrows").get<std::vector<int>>();
        }
        if (c.start < 0 || c.start >= p.size() || !is_valid_curve(p, c))
            throw Error("BadCurve", "not an opcurve on " + p.name());
        return c;
    } catch (const json::exception& e) {
        throw Error("BadJson", std::string("curve: ") + e.what());
    }
}

json plan_to_json(const MovePlan& plan) {
    json moves = json::array();
    for (const auto& m : plan.moves)
        moves.push_back({{"kind", move_kind_name(m.kind)}, {"pos", m.pos}, {"arrow", m.arrow}, {"right", m.right}});
    return {{"moves", moves}, {"support", plan.support}, {"proper_throughout", plan.proper_throughout}};
}

MovePlan plan_from_json(const json& j) {
    try {
        MovePlan plan;
        for (const auto& m : j.at("moves"))
            plan.moves.push_back({parse_move_kind(m.at("kind").get<std::string>()), m.at("pos").get<int>(),
                                  m.at("arrow").get<int>(), m.value("right", false)});
        plan.support = j.value("support", std::vector<int>{});
        plan.proper_throughout = j.value("proper_throughout", true);
        return plan;
    } catch (const json::exception& e) {
        throw Error("BadJson", std::string("plan: ") + e.what());
    }
}

}  // namespace kit

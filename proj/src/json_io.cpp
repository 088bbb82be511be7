#include <graded/json_io.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace graded {

namespace {

Json p_to_json(const PNorm &p) {
    if (p.is_inf())
        return Json("inf");
    return Json(p.value());
}

PNorm p_from_json(const Json &j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf")
            return PNorm::inf();
        throw std::invalid_argument("p must be a number or \"inf\"");
    }
    if (!j.is_number())
        throw std::invalid_argument("p must be a number or \"inf\"");
    return PNorm::finite(j.get<double>());
}

Vec vec_from_json(const Json &j, const char *what) {
    if (!j.is_array())
        throw std::invalid_argument(std::string(what) + " must be an array");
    Vec out;
    out.reserve(j.size());
    for (const Json &t : j) {
        if (!t.is_number())
            throw std::invalid_argument(std::string(what) +
                                        " must hold numbers only");
        out.push_back(t.get<double>());
    }
    return out;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Vec csv_row(const std::string &line, const std::string &path) {
    Vec row;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &pos);
        } catch (const std::exception &) {
            throw std::invalid_argument("bad number in " + path + ": " + cell);
        }
        while (pos < cell.size() &&
               std::isspace(static_cast<unsigned char>(cell[pos])))
            ++pos;
        if (pos != cell.size())
            throw std::invalid_argument("bad number in " + path + ": " + cell);
        row.push_back(v);
    }
    if (row.empty())
        throw std::invalid_argument("empty row in " + path);
    return row;
}

bool type_matches(const Json &doc, const std::string &name) {
    if (name == "object")
        return doc.is_object();
    if (name == "array")
        return doc.is_array();
    if (name == "string")
        return doc.is_string();
    if (name == "number")
        return doc.is_number();
    if (name == "integer")
        return doc.is_number_integer() || doc.is_number_unsigned();
    if (name == "boolean")
        return doc.is_boolean();
    if (name == "null")
        return doc.is_null();
    throw std::invalid_argument("unknown schema type: " + name);
}

bool schema_at(const Json &doc, const Json &schema, const std::string &path,
               std::string *err) {
    const auto fail = [&](const std::string &why) {
        if (err)
            *err = path + ": " + why;
        return false;
    };

    if (const auto it = schema.find("type"); it != schema.end()) {
        bool ok = false;
        if (it->is_array()) {
            for (const Json &t : *it)
                ok = ok || type_matches(doc, t.get<std::string>());
        } else {
            ok = type_matches(doc, it->get<std::string>());
        }
        if (!ok)
            return fail("type mismatch");
    }
    if (const auto it = schema.find("enum"); it != schema.end()) {
        bool ok = false;
        for (const Json &t : *it)
            ok = ok || doc == t;
        if (!ok)
            return fail("value not in enum");
    }
    if (doc.is_object()) {
        if (const auto it = schema.find("required"); it != schema.end())
            for (const Json &key : *it)
                if (!doc.contains(key.get<std::string>()))
                    return fail("missing required key " +
                                key.get<std::string>());
        const auto props = schema.find("properties");
        if (props != schema.end())
            for (const auto &[key, sub] : props->items())
                if (doc.contains(key) &&
                    !schema_at(doc.at(key), sub, path + "." + key, err))
                    return false;
        if (const auto it = schema.find("additionalProperties");
            it != schema.end() && it->is_boolean() && !it->get<bool>()) {
            for (const auto &[key, value] : doc.items()) {
                (void)value;
                if (props == schema.end() || !props->contains(key))
                    return fail("unexpected key " + key);
            }
        }
    }
    if (doc.is_array()) {
        if (const auto it = schema.find("items"); it != schema.end()) {
            int i = 0;
            for (const Json &elem : doc) {
                if (!schema_at(elem, *it,
                               path + "[" + std::to_string(i) + "]", err))
                    return false;
                ++i;
            }
        }
    }
    return true;
}

}  // namespace

Json to_json(const NormSpec &n) {
    Json j;
    switch (n.kind()) {
    case NormKind::lp:
        j["kind"] = "lp";
        j["p"] = p_to_json(n.p());
        break;
    case NormKind::weighted_lp:
        j["kind"] = "weighted_lp";
        j["p"] = p_to_json(n.p());
        j["w"] = n.weights();
        break;
    case NormKind::atomic:
        j["kind"] = "atomic";
        j["atoms"] = n.atoms();
        break;
    }
    return j;
}

NormSpec norm_spec_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw std::invalid_argument("norm spec needs a string \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "lp") {
        if (!j.contains("p"))
            throw std::invalid_argument("lp spec needs \"p\"");
        return NormSpec::lp(p_from_json(j.at("p")));
    }
    if (kind == "weighted_lp") {
        if (!j.contains("p") || !j.contains("w"))
            throw std::invalid_argument("weighted_lp spec needs \"p\", \"w\"");
        return NormSpec::weighted_lp(p_from_json(j.at("p")),
                                     vec_from_json(j.at("w"), "w"));
    }
    if (kind == "atomic") {
        if (!j.contains("atoms") || !j.at("atoms").is_array())
            throw std::invalid_argument("atomic spec needs \"atoms\"");
        std::vector<Vec> atoms;
        for (const Json &a : j.at("atoms"))
            atoms.push_back(vec_from_json(a, "atom"));
        return NormSpec::atomic(std::move(atoms));
    }
    throw std::invalid_argument("unknown norm kind: " + kind);
}

Json index_set_to_json(const IndexSet &K) {
    std::vector<int> shifted;
    shifted.reserve(static_cast<std::size_t>(K.size()));
    for (const int i : K.members())
        shifted.push_back(i + 1);
    return Json(shifted);
}

Json to_json(const NormSequenceReport &rep) {
    return Json{{"values", rep.values},
                {"stationary_from", rep.stationary_from},
                {"monotone_ok", rep.monotone_ok}};
}

Json to_json(const PropertyWitness &w) {
    Json vectors = Json::array();
    for (const auto &[name, v] : w.vectors)
        vectors.push_back(Json{{"name", name}, {"values", v}});
    Json sets = Json::array();
    for (const auto &[name, members] : w.index_sets) {
        std::vector<int> shifted;
        shifted.reserve(members.size());
        for (const int i : members)
            shifted.push_back(i + 1);
        sets.push_back(Json{{"name", name}, {"indices", shifted}});
    }
    return Json{{"vectors", vectors},
                {"index_sets", sets},
                {"note", w.note},
                {"margin", w.margin}};
}

Json to_json(const PropertyReport &r) {
    return Json{{"property", r.property},
                {"verdict", to_string(r.verdict)},
                {"trials", r.trials},
                {"seed", r.seed},
                {"witness", r.witness ? to_json(*r.witness) : Json(nullptr)},
                {"margin", r.margin}};
}

Json to_json(const GradednessVerdict &v) {
    return Json{{"direction", to_string(v.direction)},
                {"strict", v.strict},
                {"holds_for_vector", v.holds_for_vector},
                {"l0_true", v.l0_true},
                {"l0_recovered", v.l0_recovered},
                {"sequence", to_json(v.sequence)},
                {"x", v.x}};
}

NormSpec parse_source(const std::string &text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("source needs the form kind:args, got: " +
                                    text);
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    const auto parse_p = [](const std::string &s) {
        if (s == "inf")
            return PNorm::inf();
        std::size_t pos = 0;
        double p = 0.0;
        try {
            p = std::stod(s, &pos);
        } catch (const std::exception &) {
            throw std::invalid_argument("bad exponent: " + s);
        }
        if (pos != s.size())
            throw std::invalid_argument("bad exponent: " + s);
        return PNorm::finite(p);
    };
    if (kind == "lp")
        return NormSpec::lp(parse_p(rest));
    if (kind == "wlp") {
        const std::size_t split = rest.find(':');
        if (split == std::string::npos)
            throw std::invalid_argument("wlp needs wlp:p:[w...], got: " +
                                        text);
        return NormSpec::weighted_lp(parse_p(rest.substr(0, split)),
                                     parse_vector(rest.substr(split + 1)));
    }
    if (kind == "atomic") {
        Json atoms;
        try {
            atoms = rest.starts_with("@")
                        ? load_json_file(rest.substr(1))
                        : Json::parse(rest);
        } catch (const Json::exception &e) {
            throw std::invalid_argument(std::string("bad atom list: ") +
                                        e.what());
        }
        if (!atoms.is_array())
            throw std::invalid_argument("atom list must be an array");
        std::vector<Vec> parsed;
        for (const Json &a : atoms)
            parsed.push_back(vec_from_json(a, "atom"));
        return NormSpec::atomic(std::move(parsed));
    }
    throw std::invalid_argument("unknown source kind: " + kind);
}

Vec parse_vector(const std::string &text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception &e) {
        throw std::invalid_argument(std::string("bad vector: ") + e.what());
    }
    return vec_from_json(j, "vector");
}

std::vector<Vec> load_vectors(const std::string &path) {
    const std::string text = read_file(path);
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw std::invalid_argument("empty vector file: " + path);
    if (text[first] == '[') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::exception &e) {
            throw std::invalid_argument(std::string("bad JSON in ") + path +
                                        ": " + e.what());
        }
        if (!j.is_array() || j.empty())
            throw std::invalid_argument("vector file must hold a nonempty "
                                        "array: " +
                                        path);
        std::vector<Vec> out;
        if (j.front().is_array()) {
            for (const Json &row : j)
                out.push_back(vec_from_json(row, "vector"));
        } else {
            out.push_back(vec_from_json(j, "vector"));
        }
        return out;
    }
    std::vector<Vec> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        out.push_back(csv_row(line, path));
    }
    if (out.empty())
        throw std::invalid_argument("no vectors in " + path);
    return out;
}

Json load_json_file(const std::string &path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::exception &e) {
        throw std::invalid_argument(std::string("bad JSON in ") + path +
                                    ": " + e.what());
    }
}

bool matches_schema(const Json &doc, const Json &schema, std::string *err) {
    return schema_at(doc, schema, "$", err);
}

Json sequence_report_json(const NormSpec &source, const Vec &x, double tol) {
    const NormSequenceReport topk = topk_sequence(source, x);
    const NormSequenceReport ksup =
        ksupport_sequence(source, x, KSupportMethod::automatic, tol);
    return Json{{"x", x},
                {"source", to_json(source)},
                {"topk", topk.values},
                {"ksupport", ksup.values},
                {"stationary_from", topk.stationary_from},
                {"l0", l0(x)}};
}

Json gradedness_report_json(const NormSpec &source, const Vec &x,
                            GradedDirection direction, bool strict,
                            int trials, std::uint64_t seed, double tol) {
    const int d = static_cast<int>(x.size());
    Json dc = Json::array();
    for (int k = 0; k <= d; ++k)
        dc.push_back(dc_level_membership(source, x, k));
    const GradednessVerdict verdict =
        classify_gradedness(source, d, direction, strict, trials, seed, tol);
    return Json{{"source", to_json(source)},
                {"x", x},
                {"l0", l0(x)},
                {"l0_topk", l0_from_topk(source, x)},
                {"l0_ksupport", l0_from_ksupport(source, x, tol)},
                {"dc", dc},
                {"verdict", to_json(verdict)}};
}

}  // namespace graded

#include "qct/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qct/error.hpp"

namespace qct {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw Error(Errc::invalid_input, std::string("malformed JSON in ") + what);
    return j;
}

double as_number(const json& j, const char* what) {
    if (!j.is_number()) throw Error(Errc::invalid_input, std::string(what) + " must be a number");
    return j.get<double>();
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(Errc::invalid_input, "cannot read " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::invalid_input, "cannot write " + path);
    os << content;
}

LoadedModel load_model_json(const std::string& text, bool negate) {
    const json j = parse_json(text, "model file");
    const double sign = negate ? -1.0 : 1.0;
    const double offset = sign * (j.contains("offset") ? as_number(j["offset"], "offset") : 0.0);

    if (j.contains("terms")) {
        HuboModel h;
        h.offset = offset;
        if (j.contains("vartype") && j["vartype"] != "BINARY")
            throw Error(Errc::invalid_input, "higher-order models must be BINARY");
        for (const auto& term : j["terms"]) {
            if (!term.contains("vars") || !term.contains("coeff"))
                throw Error(Errc::invalid_input, "each term needs \"vars\" and \"coeff\"");
            std::vector<std::string> vars;
            for (const auto& v : term["vars"]) vars.push_back(v.get<std::string>());
            h.add_term(std::move(vars), sign * as_number(term["coeff"], "coeff"));
        }
        if (j.contains("linear"))
            for (const auto& [v, bias] : j["linear"].items())
                h.add_term({v}, sign * as_number(bias, "bias"));
        if (j.contains("quadratic"))
            for (const auto& [key, w] : j["quadratic"].items()) {
                const auto comma = key.find(',');
                if (comma == std::string::npos)
                    throw Error(Errc::invalid_input, "quadratic key '" + key + "' needs 'a,b'");
                h.add_term({key.substr(0, comma), key.substr(comma + 1)},
                           sign * as_number(w, "weight"));
            }
        LoadedModel out;
        out.hubo = std::move(h);
        return out;
    }

    QuadraticModel m;
    if (!j.contains("vartype")) throw Error(Errc::invalid_input, "model needs \"vartype\"");
    const std::string vt = j["vartype"].get<std::string>();
    if (vt == "SPIN")
        m.vartype = Vartype::spin;
    else if (vt == "BINARY")
        m.vartype = Vartype::binary;
    else
        throw Error(Errc::invalid_input, "vartype must be SPIN or BINARY");
    m.offset = offset;
    if (j.contains("linear"))
        for (const auto& [v, bias] : j["linear"].items()) {
            validate_input_variable_name(v);
            m.add_linear(v, sign * as_number(bias, "bias"));
        }
    if (j.contains("quadratic"))
        for (const auto& [key, w] : j["quadratic"].items()) {
            const auto comma = key.find(',');
            if (comma == std::string::npos)
                throw Error(Errc::invalid_input, "quadratic key '" + key + "' needs 'a,b'");
            const std::string a = key.substr(0, comma), b = key.substr(comma + 1);
            validate_input_variable_name(a);
            validate_input_variable_name(b);
            m.add_quadratic(a, b, sign * as_number(w, "weight"));
        }
    LoadedModel out;
    out.quadratic = std::move(m);
    return out;
}

std::string model_to_json(const QuadraticModel& model) {
    json j;
    j["vartype"] = model.vartype == Vartype::spin ? "SPIN" : "BINARY";
    j["offset"] = model.offset;
    json lin = json::object();
    for (const auto& [v, h] : model.linear) lin[v] = h;
    j["linear"] = std::move(lin);
    json quad = json::object();
    for (const auto& [p, w] : model.quadratic) quad[p.first + "," + p.second] = w;
    j["quadratic"] = std::move(quad);
    return j.dump(2) + "\n";
}

std::string hubo_to_json(const HuboModel& model) {
    json j;
    j["vartype"] = "BINARY";
    j["offset"] = model.offset;
    json terms = json::array();
    for (const auto& [vars, coeff] : model.terms)
        terms.push_back({{"vars", vars}, {"coeff", coeff}});
    j["terms"] = std::move(terms);
    return j.dump(2) + "\n";
}

CouplingGraph load_coupling_json(const std::string& text) {
    const json j = parse_json(text, "coupling graph");
    if (!j.contains("nodes") || !j["nodes"].is_number_integer())
        throw Error(Errc::invalid_input, "coupling graph needs integer \"nodes\"");
    CouplingGraph g(j["nodes"].get<int>());
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() < 2)
            throw Error(Errc::invalid_input, "each edge needs [a, b] or [a, b, kind]");
        EdgeKind kind = EdgeKind::sym;
        if (e.size() >= 3) {
            const std::string k = e[2].get<std::string>();
            if (k == "uni")
                kind = EdgeKind::uni;
            else if (k == "sym")
                kind = EdgeKind::sym;
            else
                throw Error(Errc::invalid_input, "edge kind must be \"uni\" or \"sym\"");
        }
        g.add_edge(e[0].get<int>(), e[1].get<int>(), kind);
    }
    return g;
}

std::string coupling_to_json(const CouplingGraph& graph) {
    json j;
    j["nodes"] = graph.num_nodes;
    json edges = json::array();
    for (const auto& [pair, kind] : graph.edges())
        edges.push_back(json::array(
            {pair.first, pair.second, kind == EdgeKind::sym ? "sym" : "uni"}));
    j["edges"] = std::move(edges);
    return j.dump(2) + "\n";
}

HardwareGraph load_hardware_json(const std::string& text) {
    const json j = parse_json(text, "hardware graph");
    HardwareGraph g;
    if (j.contains("nodes")) {
        if (j["nodes"].is_number_integer()) {
            for (int n = 0; n < j["nodes"].get<int>(); ++n) g.add_node(n);
        } else if (j["nodes"].is_array()) {
            for (const auto& n : j["nodes"]) g.add_node(n.get<int>());
        } else {
            throw Error(Errc::invalid_input, "\"nodes\" must be a count or a list");
        }
    }
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() < 2)
            throw Error(Errc::invalid_input, "each edge needs [a, b]");
        g.add_edge(e[0].get<int>(), e[1].get<int>());
    }
    return g;
}

std::string hardware_to_json(const HardwareGraph& graph) {
    json j;
    j["nodes"] = graph.nodes;
    json edges = json::array();
    for (const auto& [a, b] : graph.edges) edges.push_back(json::array({a, b}));
    j["edges"] = std::move(edges);
    return j.dump(2) + "\n";
}

Embedding load_embedding_json(const std::string& text) {
    const json j = parse_json(text, "embedding");
    Embedding emb;
    for (const auto& [var, chain] : j.items()) {
        if (!chain.is_array()) throw Error(Errc::invalid_input, "chains must be node lists");
        std::vector<int> nodes;
        for (const auto& n : chain) nodes.push_back(n.get<int>());
        emb[var] = std::move(nodes);
    }
    return emb;
}

std::string embedding_to_json(const Embedding& emb) {
    json j = json::object();
    for (const auto& [var, chain] : emb) j[var] = chain;
    return j.dump(2) + "\n";
}

Mat load_unitary_json(const std::string& text) {
    const json j = parse_json(text, "unitary file");
    if (!j.contains("dim") || !j.contains("entries"))
        throw Error(Errc::invalid_input, "unitary file needs \"dim\" and \"entries\"");
    const int dim = j["dim"].get<int>();
    const auto& entries = j["entries"];
    if (dim < 1 || static_cast<int>(entries.size()) != dim * dim)
        throw Error(Errc::invalid_input, "\"entries\" must hold dim*dim [re, im] pairs");
    Mat u(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            const auto& e = entries[static_cast<size_t>(r * dim + c)];
            if (!e.is_array() || e.size() != 2)
                throw Error(Errc::invalid_input, "each entry must be [re, im]");
            u(r, c) = cxd(as_number(e[0], "re"), as_number(e[1], "im"));
        }
    return u;
}

std::string unitary_to_json(const Mat& u) {
    json j;
    j["dim"] = static_cast<int>(u.rows());
    json entries = json::array();
    for (Eigen::Index r = 0; r < u.rows(); ++r)
        for (Eigen::Index c = 0; c < u.cols(); ++c)
            entries.push_back(json::array({u(r, c).real(), u(r, c).imag()}));
    j["entries"] = std::move(entries);
    return j.dump() + "\n";
}

std::string samples_to_jsonl(const SampleSet& samples) {
    std::ostringstream os;
    for (const Sample& r : samples.records) {
        json j;
        json a = json::object();
        for (const auto& [v, val] : r.assignment) a[v] = val;
        j["assignment"] = std::move(a);
        j["energy"] = r.energy;
        j["occurrences"] = r.occurrences;
        j["chain_break_fraction"] = r.chain_break_fraction;
        os << j.dump() << "\n";
    }
    return os.str();
}

SampleSet load_samples_jsonl(const std::string& text) {
    SampleSet out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const json j = parse_json(line, "samples line");
        Sample r;
        for (const auto& [v, val] : j.at("assignment").items()) r.assignment[v] = val.get<int>();
        r.energy = j.value("energy", 0.0);
        r.occurrences = j.value("occurrences", 1L);
        r.chain_break_fraction = j.value("chain_break_fraction", 0.0);
        if (r.occurrences < 1)
            throw Error(Errc::invalid_input, "occurrences must be >= 1 (line " +
                                                 std::to_string(lineno) + ")");
        out.records.push_back(std::move(r));
    }
    return out;
}

std::string layout_to_json(const Layout& layout) {
    json j = json::object();
    for (const auto& [v, p] : layout.map) j[std::to_string(v)] = p;
    return j.dump();
}

}  // namespace qct

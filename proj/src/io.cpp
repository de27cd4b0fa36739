#include "stw/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stw {

LabeledInstance load_instance(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    int n = 0, m = 0;
    int edges_seen = 0;
    LabeledInstance inst;
    auto fail = [&](const std::string& msg) {
        throw Error("instance parse error at line " + std::to_string(lineno) + ": " + msg);
    };
    auto check_v = [&](int v) {
        if (!header) fail("vertex line before header");
        if (v < 1 || v > n) fail("vertex index out of range");
        return v - 1;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line[0] == 'c') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "p") {
            std::string fmt;
            ls >> fmt >> n >> m;
            if (!ls || fmt != "grl" || n < 0 || m < 0) fail("malformed header");
            if (header) fail("duplicate header");
            header = true;
            inst = LabeledInstance(n);
        } else if (tag == "e") {
            int u, v;
            ls >> u >> v;
            if (!ls) fail("malformed edge line");
            u = check_v(u);
            v = check_v(v);
            if (u == v) fail("loop edge");
            if (inst.graph.has_edge(u, v)) fail("duplicate edge");
            inst.graph.add_edge(u, v);
            ++edges_seen;
        } else if (tag == "vw") {
            int v;
            long long w;
            ls >> v >> w;
            if (!ls) fail("malformed vertex weight line");
            if (w < 0) fail("negative weight");
            inst.weight[check_v(v)] = w;
        } else if (tag == "vs") {
            int v;
            ls >> v;
            if (!ls) fail("malformed s-vertex line");
            inst.s_vertices.insert(check_v(v));
        } else if (tag == "vt") {
            int v;
            ls >> v;
            if (!ls) fail("malformed terminal line");
            inst.terminals.insert(check_v(v));
        } else if (tag == "es") {
            int u, v;
            ls >> u >> v;
            if (!ls) fail("malformed s-edge line");
            u = check_v(u);
            v = check_v(v);
            if (!inst.graph.has_edge(u, v)) fail("s-edge not present (declare e lines first)");
            inst.add_s_edge(u, v);
        } else if (tag == "vf") {
            int v;
            ls >> v;
            if (!ls) fail("malformed forced-keep line");
            inst.forced_keep.insert(check_v(v));
        } else {
            fail("unknown line tag '" + tag + "'");
        }
    }
    if (!header) {
        lineno = 0;
        fail("missing header");
    }
    if (edges_seen != m) {
        lineno = 0;
        fail("header declares " + std::to_string(m) + " edges, found " +
             std::to_string(edges_seen));
    }
    return inst;
}

std::string serialize_instance(const LabeledInstance& inst) {
    std::ostringstream os;
    os << "p grl " << inst.n() << " " << inst.graph.edge_count() << "\n";
    for (auto [u, v] : inst.graph.edges()) os << "e " << u + 1 << " " << v + 1 << "\n";
    for (int v = 0; v < inst.n(); ++v)
        if (inst.weight[v] != 1) os << "vw " << v + 1 << " " << inst.weight[v] << "\n";
    inst.s_vertices.for_each([&](int v) { os << "vs " << v + 1 << "\n"; });
    inst.terminals.for_each([&](int v) { os << "vt " << v + 1 << "\n"; });
    for (auto [u, v] : inst.s_edges) os << "es " << u + 1 << " " << v + 1 << "\n";
    inst.forced_keep.for_each([&](int v) { os << "vf " << v + 1 << "\n"; });
    return os.str();
}

LabeledInstance load_instance_file(const std::string& path) {
    return load_instance(read_file(path));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

std::string ResultRecord::to_text() const {
    std::ostringstream os;
    os << "problem: " << problem << "\n";
    os << "status: " << status << "\n";
    if (status == "optimal" || status == "budget-exceeded") {
        os << "optimum_weight: " << optimum_weight << "\n";
        os << "deletion_set:";
        for (int v : deletion_vertices) os << " " << v + 1;
        for (auto [u, v] : deletion_edges) os << " " << u + 1 << "-" << v + 1;
        os << "\n";
    }
    if (budget) os << "budget: " << *budget << "\n";
    if (decomposition_width_used >= 0)
        os << "decomposition_width_used: " << decomposition_width_used << "\n";
    os << "dp_nodes: " << dp_nodes << "\n";
    os << "max_classes_per_bag: " << max_classes_per_bag << "\n";
    os << "wall_seconds: " << wall_seconds << "\n";
    if (!message.empty()) os << "message: " << message << "\n";
    return os.str();
}

std::string ResultRecord::to_json() const {
    nlohmann::json j;
    j["problem"] = problem;
    j["status"] = status;
    j["optimum_weight"] = optimum_weight;
    {
        std::vector<int> dv;
        for (int v : deletion_vertices) dv.push_back(v + 1);
        j["deletion_vertices"] = dv;
        std::vector<std::vector<int>> de;
        for (auto [u, v] : deletion_edges) de.push_back({u + 1, v + 1});
        j["deletion_edges"] = de;
    }
    if (budget) j["budget"] = *budget;
    j["decomposition_width_used"] = decomposition_width_used;
    j["stats"] = {{"dp_nodes", dp_nodes},
                  {"max_classes_per_bag", max_classes_per_bag},
                  {"wall_seconds", wall_seconds}};
    if (!message.empty()) j["message"] = message;
    return j.dump(2) + "\n";
}

std::string sidecar_json(const GeneratedInstance& gen, const std::string& instance_file,
                         const std::string& witness_file, uint64_t seed) {
    nlohmann::json j;
    j["problem"] = problem_name(gen.problem);
    j["budget"] = gen.budget;
    j["k"] = gen.k;
    j["m"] = gen.m;
    j["seed"] = seed;
    j["gadget_variants"] = gen.gadget_variants;
    j["instance_file"] = instance_file;
    if (!witness_file.empty()) {
        j["witness_file"] = witness_file;
        j["width_constant"] = gen.width_constant;
    }
    if (gen.planted_deletion) {
        std::vector<int> pv;
        gen.planted_deletion->for_each([&](int v) { pv.push_back(v + 1); });
        j["planted_deletion"] = pv;
    }
    if (gen.planted_edge_deletion) {
        std::vector<std::vector<int>> pe;
        for (auto [u, v] : *gen.planted_edge_deletion) pe.push_back({u + 1, v + 1});
        j["planted_edge_deletion"] = pe;
    }
    if (!gen.notes.empty()) j["notes"] = gen.notes;
    return j.dump(2) + "\n";
}

}  // namespace stw

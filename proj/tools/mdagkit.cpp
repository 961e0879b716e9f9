// mdagkit — command-line front end for the mDAG toolkit.
//
// Exit codes: 0 success (msep/esep: separated), 1 connected / check failed,
// 2 domain error, 64 usage error, 66 unreadable input file; classify maps its
// result to 10..13 (DAG_EQUIVALENT, INEQUALITY_ONLY, NONDAG_CI, NESTED).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdagkit/mdagkit.hpp"

using json = nlohmann::json;
using namespace mdagkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConnected = 1;
constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;
constexpr int kExitFile = 66;

struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

MDag load_graph(const std::string& path) { return MDag::parse(read_file(path)); }

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : csv) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

json names_json(const MDag& g, VSet s) {
    json arr = json::array();
    for (int v : s) arr.push_back(g.name(v));
    return arr;
}

json witness_json(const MDag& g, const NestedWitness& w) {
    json sigma = json::array();
    for (int v : w.sigma) sigma.push_back(g.name(v));
    return {{"type", "nested"},
            {"sigma", sigma},
            {"a", names_json(g, w.a)},
            {"b", names_json(g, w.b)},
            {"c", names_json(g, w.c)}};
}

json report_json(const MDag& g, const ClassificationReport& rep) {
    json witnesses = json::array();
    for (const auto& w : rep.nested) witnesses.push_back(witness_json(g, w));
    for (const auto& w : rep.pag_bidirected)
        witnesses.push_back(
            {{"type", "pag_bidirected_edge"}, {"x", g.name(w.x)}, {"y", g.name(w.y)}});
    for (const auto& w : rep.collider_paths)
        witnesses.push_back({{"type", "collider_path"},
                             {"path", {g.name(w.v0), g.name(w.v1), g.name(w.v2), g.name(w.v3)}},
                             {"shape", shape_name(w.shape)}});
    for (const auto& w : rep.discriminating_paths) {
        json path = json::array();
        for (int v : w.path) path.push_back(g.name(v));
        witnesses.push_back({{"type", "discriminating_path"},
                             {"path", path},
                             {"vertex", g.name(w.discriminated)}});
    }
    for (const auto& w : rep.chsh)
        witnesses.push_back({{"type", "chsh"},
                             {"a", g.name(w.a)},
                             {"b", g.name(w.b)},
                             {"c", g.name(w.c)},
                             {"d", g.name(w.d)},
                             {"bound", 2},
                             {"reduced", w.reduced},
                             {"shape", shape_name(w.source_shape)}});
    for (const auto& w : rep.fritz)
        witnesses.push_back({{"type", "fritz_triangle"},
                             {"vertices", {g.name(w.x), g.name(w.y), g.name(w.z)}}});
    for (const auto& w : rep.esep)
        witnesses.push_back({{"type", "esep"},
                             {"a", names_json(g, w.a)},
                             {"b", names_json(g, w.b)},
                             {"c", names_json(g, w.c)},
                             {"del", names_json(g, w.d)}});
    json out{{"schema", 1},
             {"class", class_tag_name(rep.tag)},
             {"decided", rep.decided},
             {"witnesses", witnesses}};
    if (rep.equivalent_dag) out["equivalent_dag"] = rep.equivalent_dag->serialize();
    return out;
}

json distribution_json(const DiscreteDistribution& p) {
    return {{"schema", 1}, {"vars", p.vars}, {"cards", p.cards}, {"probs", p.p}};
}

// ---------------------------------------------------------------------------

struct Options {
    std::string file;
    std::string a_csv, b_csv, c_csv, del_csv, keep_csv, vertex, roles_csv, fix_vertex;
    std::string cards_csv = "2";
    bool json_out = false;
    bool witness = false;
    bool list_members = false;
    bool check_msep = false;
    bool example1 = false;
    std::uint64_t seed = 0;
    int seeds = 1;
    double tol = 1e-9;
    int max_edges = 12;
    std::string gallery_dir;
};

int run_validate(const Options& opt) {
    MDag g = load_graph(opt.file);  // parse already validates
    auto bad = g.validate();
    if (opt.json_out) {
        std::cout << json{{"schema", 1}, {"ok", bad.empty()}, {"violations", bad}}.dump(2)
                  << "\n";
    } else if (bad.empty()) {
        std::cout << "ok\n";
    }
    return bad.empty() ? kExitOk : kExitDomain;
}

int run_msep(const Options& opt, bool esep) {
    MDag g = load_graph(opt.file);
    VSet a = g.set_of(split_list(opt.a_csv));
    VSet b = g.set_of(split_list(opt.b_csv));
    VSet c = g.set_of(split_list(opt.c_csv));
    VSet d = g.set_of(split_list(opt.del_csv));
    bool separated = esep ? e_separated(g, a, b, c, d) : m_separated(g, a, b, c);
    if (opt.json_out) {
        json out{{"schema", 1}, {"separated", separated}};
        if (!separated && opt.witness && d.empty()) {
            if (auto path = find_open_path(g, a, b, c)) out["witness"] = path->edges;
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (separated ? "separated" : "connected") << "\n";
        if (!separated && opt.witness && d.empty()) {
            if (auto path = find_open_path(g, a, b, c)) {
                std::cout << "open path:";
                for (const auto& e : path->edges) std::cout << "  " << e;
                std::cout << "\n";
            }
        }
    }
    return separated ? kExitOk : kExitConnected;
}

int run_project(const Options& opt) {
    MDag g = load_graph(opt.file);
    std::cout << latent_project(g, split_list(opt.keep_csv)).serialize();
    return kExitOk;
}

int run_canonical(const Options& opt) {
    MDag g = load_graph(opt.file);
    CanonicalDag canon = canonical_dag(g);
    for (const auto& [latent, face] : canon.latents) {
        std::cout << "# latent " << latent << " replaces face";
        for (const auto& m : face) std::cout << ' ' << m;
        std::cout << '\n';
    }
    std::cout << canon.graph.serialize();
    return kExitOk;
}

int run_mag(const Options& opt) {
    std::cout << mag_project(load_graph(opt.file)).serialize();
    return kExitOk;
}

int run_pag(const Options& opt) {
    MDag g = load_graph(opt.file);
    MarkedMixedGraph pag = build_pag(g, opt.max_edges);
    std::cout << "vertices";
    for (const auto& n : pag.vertex_names()) std::cout << ' ' << n;
    std::cout << '\n';
    for (const auto& [e, marks] : pag.edges())
        std::cout << "mark " << pag.name(e.first) << ' ' << pag.name(e.second) << ' '
                  << mark_name(marks.first) << ' ' << mark_name(marks.second) << '\n';
    return kExitOk;
}

int run_class(const Options& opt) {
    MDag g = load_graph(opt.file);
    EquivalenceClass cls = enumerate_class(mag_project(g), opt.max_edges);
    std::cout << "members: " << cls.members.size() << "\n";
    if (opt.list_members) {
        for (std::size_t i = 0; i < cls.members.size(); ++i) {
            std::cout << "-- member " << i << "\n";
            std::cout << cls.members[i].serialize();
        }
    }
    return kExitOk;
}

int run_fix(const Options& opt) {
    MDag g = load_graph(opt.file);
    std::cout << fix_graph(g, opt.vertex).serialize();
    return kExitOk;
}

int run_nested(const Options& opt) {
    MDag g = load_graph(opt.file);
    json arr = json::array();
    for (const auto& w : find_nested_constraints(g)) arr.push_back(witness_json(g, w));
    std::cout << json{{"schema", 1}, {"witnesses", arr}}.dump(2) << "\n";
    return kExitOk;
}

int run_classify(const Options& opt) {
    MDag g = load_graph(opt.file);
    ClassificationReport rep = classify(g, opt.max_edges);
    if (opt.json_out) {
        std::cout << report_json(g, rep).dump(2) << "\n";
    } else {
        std::cout << "class: " << class_tag_name(rep.tag) << "\n";
        std::cout << "decided: " << (rep.decided ? "true" : "false") << "\n";
        for (const auto& w : rep.nested) std::cout << "witness: " << emit_witness(g, w) << "\n";
        for (const auto& w : rep.pag_bidirected)
            std::cout << "witness: invariant bidirected PAG edge " << g.name(w.x) << " <-> "
                      << g.name(w.y) << "\n";
        for (const auto& w : rep.chsh) std::cout << "witness: " << emit_witness(g, w) << "\n";
        for (const auto& w : rep.fritz) std::cout << "witness: " << emit_witness(g, w) << "\n";
        for (const auto& w : rep.esep) std::cout << "witness: " << emit_witness(g, w) << "\n";
        if (rep.equivalent_dag)
            std::cout << "equivalent DAG:\n" << rep.equivalent_dag->serialize();
    }
    return 10 + static_cast<int>(rep.tag);
}

int run_oracle_sample(const Options& opt) {
    MDag g = load_graph(opt.file);
    auto card_items = split_list(opt.cards_csv);
    std::vector<int> cards;
    if (card_items.size() == 1)
        cards.assign(g.size(), std::stoi(card_items[0]));
    else
        for (const auto& c : card_items) cards.push_back(std::stoi(c));
    if (static_cast<int>(cards.size()) != g.size())
        throw DomainError("--cards needs one value or one per vertex");

    if (!opt.check_msep) {
        DiscreteDistribution p = sample_marginal(g, cards, opt.seed);
        std::cout << distribution_json(p).dump(2) << "\n";
        return kExitOk;
    }

    // verify the global Markov property on every sampled model
    int failures = 0;
    for (int s = 0; s < opt.seeds; ++s) {
        DiscreteDistribution p = sample_marginal(g, cards, opt.seed + s);
        bool ok = true;
        for_each_subset(g.all(), [&](VSet a) {
            if (a.empty() || !ok) return;
            for_each_subset(g.all() - a, [&](VSet b) {
                if (b.empty() || b.lowest() < a.lowest() || !ok) return;
                for_each_subset(g.all() - a - b, [&](VSet c) {
                    if (!ok || !m_separated(g, a, b, c)) return;
                    if (!ci_holds(p, g.names_of(a), g.names_of(b), g.names_of(c), opt.tol))
                        ok = false;
                });
            });
        });
        std::cout << "seed " << opt.seed + s << ": " << (ok ? "ok" : "FAIL") << "\n";
        if (!ok) ++failures;
    }
    std::cout << (failures == 0 ? "all seeds consistent" : "inconsistencies found") << "\n";
    return failures == 0 ? kExitOk : kExitConnected;
}

int run_oracle_chsh(const Options& opt) {
    auto roles = split_list(opt.roles_csv);
    if (roles.size() != 4) throw DomainError("--roles needs four vertex names a,b,c,d");
    if (opt.example1) {
        DiscreteDistribution p = example1_distribution();
        double v = chsh_value(p, roles[0], roles[1], roles[2], roles[3]);
        std::cout << "chsh " << v << "\n";
        return kExitOk;
    }
    MDag g = load_graph(opt.file);
    std::vector<int> cards(g.size(), 2);
    double worst = 0;
    for (int s = 0; s < opt.seeds; ++s) {
        DiscreteDistribution p = sample_marginal(g, cards, opt.seed + s);
        double v = chsh_value(p, roles[0], roles[1], roles[2], roles[3]);
        if (std::abs(v) > std::abs(worst)) worst = v;
        std::cout << "seed " << opt.seed + s << ": chsh " << v << "\n";
    }
    std::cout << "extreme " << worst << "\n";
    return std::abs(worst) <= 2.0 + opt.tol ? kExitOk : kExitConnected;
}

int run_oracle_verma(const Options& opt) {
    MDag g = load_graph(opt.file);
    int v = g.index_of(opt.fix_vertex);
    auto a = split_list(opt.a_csv);
    auto b = split_list(opt.b_csv);
    auto c = split_list(opt.c_csv);
    std::vector<int> cards(g.size(), 2);
    std::vector<double> qv(2, 0.5);
    int failures = 0;
    for (int s = 0; s < opt.seeds; ++s) {
        DiscreteDistribution p = sample_marginal(g, cards, opt.seed + s);
        DiscreteDistribution fixed = fix_distribution(p, g, v, qv);
        bool ok = ci_holds(fixed, a, b, c, opt.tol);
        std::cout << "seed " << opt.seed + s << ": " << (ok ? "ok" : "FAIL") << "\n";
        if (!ok) ++failures;
    }
    std::cout << (failures == 0 ? "constraint holds on all seeds" : "constraint violated")
              << "\n";
    return failures == 0 ? kExitOk : kExitConnected;
}

// Gallery runner: every *.mdag file in the directory needs a sidecar
// <stem>.expect.json listing the checks to run against it.
int run_gallery(const Options& opt) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(opt.gallery_dir))
        throw FileError("not a directory: '" + opt.gallery_dir + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(opt.gallery_dir))
        if (entry.path().extension() == ".mdag") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    int failed = 0;
    for (const auto& path : files) {
        fs::path sidecar = path;
        sidecar.replace_extension(".expect.json");
        std::string label = path.filename().string();
        if (!fs::exists(sidecar)) throw FileError("missing sidecar for '" + label + "'");
        json expect;
        try {
            expect = json::parse(read_file(sidecar.string()));
        } catch (const json::exception& e) {
            throw FileError("corrupted sidecar '" + sidecar.filename().string() +
                            "': " + e.what());
        }
        std::vector<std::string> problems;
        try {
            MDag g = load_graph(path.string());
            if (expect.contains("class")) {
                ClassificationReport rep = classify(g, opt.max_edges);
                if (std::string(class_tag_name(rep.tag)) != expect["class"])
                    problems.push_back("class " + std::string(class_tag_name(rep.tag)) +
                                       " != " + expect["class"].get<std::string>());
            }
            for (const auto& q : expect.value("msep", json::array())) {
                bool sep = m_separated(g, q["a"].get<std::vector<std::string>>(),
                                       q["b"].get<std::vector<std::string>>(),
                                       q.value("c", std::vector<std::string>{}));
                if (sep != q["separated"].get<bool>()) problems.push_back("msep mismatch");
            }
            for (const auto& q : expect.value("esep", json::array())) {
                bool sep = e_separated(g, q["a"].get<std::vector<std::string>>(),
                                       q["b"].get<std::vector<std::string>>(),
                                       q.value("c", std::vector<std::string>{}),
                                       q["del"].get<std::vector<std::string>>());
                if (sep != q["separated"].get<bool>()) problems.push_back("esep mismatch");
            }
            if (expect.contains("nested_contains")) {
                auto witnesses = find_nested_constraints(g);
                for (const auto& q : expect["nested_contains"]) {
                    NestedWitness want;
                    for (const auto& n : q["sigma"]) want.sigma.push_back(g.index_of(n));
                    want.a = g.set_of(q["a"].get<std::vector<std::string>>());
                    want.b = g.set_of(q["b"].get<std::vector<std::string>>());
                    want.c = g.set_of(q["c"].get<std::vector<std::string>>());
                    bool found = false;
                    for (const auto& w : witnesses)
                        if (w == want ||
                            (w.sigma == want.sigma && w.a == want.b && w.b == want.a &&
                             w.c == want.c))
                            found = true;
                    if (!found) problems.push_back("nested witness missing");
                }
            }
            for (const auto& q : expect.value("fritz_contains", json::array())) {
                auto triangles = find_fritz_triangles(g);
                VSet want = g.set_of(q.get<std::vector<std::string>>());
                bool found = false;
                for (const auto& t : triangles)
                    if ((VSet{t.x, t.y, t.z}) == want) found = true;
                if (!found) problems.push_back("fritz triangle missing");
            }
        } catch (const std::exception& e) {
            problems.push_back(e.what());
        }
        if (problems.empty()) {
            std::cout << "PASS " << label << "\n";
        } else {
            std::cout << "FAIL " << label << ":";
            for (const auto& p : problems) std::cout << " " << p << ";";
            std::cout << "\n";
            ++failed;
        }
    }
    std::cout << files.size() - failed << "/" << files.size() << " passed\n";
    return failed == 0 ? kExitOk : kExitConnected;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mdagkit — marginal DAG models: separation, projections, fixing, "
                 "Markov equivalence and constraint witnesses"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    Options opt;
    app.add_flag("--json", opt.json_out, "JSON output where supported");
    app.add_option("--seed", opt.seed, "base RNG seed");
    app.add_option("--tol", opt.tol, "numeric tolerance");
    app.add_option("--max-edges", opt.max_edges, "edge cap for class enumeration");

    auto add_file = [&](CLI::App* cmd) {
        cmd->add_option("file", opt.file, "graph file")->required();
    };

    auto* validate = app.add_subcommand("validate", "check graph invariants");
    add_file(validate);

    auto* msep = app.add_subcommand("msep", "m-separation query");
    add_file(msep);
    msep->add_option("--a", opt.a_csv, "source set")->required();
    msep->add_option("--b", opt.b_csv, "target set")->required();
    msep->add_option("--c", opt.c_csv, "conditioning set");
    msep->add_flag("--witness", opt.witness, "print one open path when connected");

    auto* esep = app.add_subcommand("esep", "e-separation query");
    add_file(esep);
    esep->add_option("--a", opt.a_csv, "source set")->required();
    esep->add_option("--b", opt.b_csv, "target set")->required();
    esep->add_option("--c", opt.c_csv, "conditioning set");
    esep->add_option("--del", opt.del_csv, "deletion set");
    esep->add_flag("--witness", opt.witness, "print one open path when connected");

    auto* project = app.add_subcommand("project", "latent projection");
    add_file(project);
    project->add_option("--keep", opt.keep_csv, "vertices to keep")->required();

    auto* canonical = app.add_subcommand("canonical", "canonical DAG");
    add_file(canonical);

    auto* mag = app.add_subcommand("mag", "maximal ancestral projection");
    add_file(mag);

    auto* pag = app.add_subcommand("pag", "partial ancestral graph");
    add_file(pag);

    auto* cls = app.add_subcommand("class", "Markov equivalence class");
    add_file(cls);
    cls->add_flag("--list-members", opt.list_members, "print every class member");

    auto* fix = app.add_subcommand("fix", "fix a vertex");
    add_file(fix);
    fix->add_option("--vertex", opt.vertex, "vertex to fix")->required();

    auto* nested = app.add_subcommand("nested", "nested constraint witnesses");
    add_file(nested);

    auto* classify_cmd = app.add_subcommand("classify", "model class decision");
    add_file(classify_cmd);

    auto* oracle = app.add_subcommand("oracle", "exact discrete-distribution oracle");
    oracle->require_subcommand(1);
    auto* sample = oracle->add_subcommand("sample", "sample marginal models");
    sample->add_option("file", opt.file, "graph file")->required();
    sample->add_option("--cards", opt.cards_csv, "cardinalities (one value or per vertex)");
    sample->add_option("--seeds", opt.seeds, "number of seeds");
    sample->add_flag("--check-msep", opt.check_msep, "verify the global Markov property");
    auto* chsh = oracle->add_subcommand("chsh", "CHSH functional of sampled models");
    chsh->add_option("file", opt.file, "graph file");
    chsh->add_option("--roles", opt.roles_csv, "settings/outcomes a,b,c,d")->required();
    chsh->add_option("--seeds", opt.seeds, "number of seeds");
    chsh->add_flag("--example1", opt.example1, "evaluate the worked CHSH distribution");
    auto* verma = oracle->add_subcommand("verma", "nested constraint through fixing");
    verma->add_option("file", opt.file, "graph file")->required();
    verma->add_option("--fix", opt.fix_vertex, "vertex to fix")->required();
    verma->add_option("--a", opt.a_csv, "first set")->required();
    verma->add_option("--b", opt.b_csv, "second set")->required();
    verma->add_option("--c", opt.c_csv, "conditioning set");
    verma->add_option("--seeds", opt.seeds, "number of seeds");

    auto* gallery = app.add_subcommand("gallery", "run expectation sidecars over a directory");
    gallery->add_option("dir", opt.gallery_dir, "directory of .mdag files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(validate)) return run_validate(opt);
        if (app.got_subcommand(msep)) return run_msep(opt, false);
        if (app.got_subcommand(esep)) return run_msep(opt, true);
        if (app.got_subcommand(project)) return run_project(opt);
        if (app.got_subcommand(canonical)) return run_canonical(opt);
        if (app.got_subcommand(mag)) return run_mag(opt);
        if (app.got_subcommand(pag)) return run_pag(opt);
        if (app.got_subcommand(cls)) return run_class(opt);
        if (app.got_subcommand(fix)) return run_fix(opt);
        if (app.got_subcommand(nested)) return run_nested(opt);
        if (app.got_subcommand(classify_cmd)) return run_classify(opt);
        if (app.got_subcommand(oracle)) {
            if (oracle->got_subcommand(sample)) return run_oracle_sample(opt);
            if (oracle->got_subcommand(chsh)) return run_oracle_chsh(opt);
            if (oracle->got_subcommand(verma)) return run_oracle_verma(opt);
        }
        if (app.got_subcommand(gallery)) return run_gallery(opt);
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFile;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}

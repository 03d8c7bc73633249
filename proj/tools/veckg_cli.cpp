// veckg: batch front end for viewpoint-enabled event-centric knowledge graphs.
//
// Exit codes: 0 = success, 1 = inconsistency / incompatibility / rejected
// mutation, 2 = usage or parse error. `--json` switches every report to a
// schema-versioned JSON document; VECKG_COLOR=1 turns on ANSI styling for
// the text reports.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "veckg/config.hpp"
#include "veckg/consistency.hpp"
#include "veckg/fusion.hpp"
#include "veckg/rdf_io.hpp"

using json = nlohmann::ordered_json;
using namespace veckg;

namespace {

bool color_enabled() {
    const char* env = std::getenv("VECKG_COLOR");
    return env != nullptr && std::string(env) == "1";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::InvalidConfig, "cannot open graph file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Workspace {
    std::string taxonomy_path, hierarchy_path, graph_path;
    std::shared_ptr<const Taxonomy> taxonomy;
    std::shared_ptr<const ViewpointHierarchy> hierarchy;
    std::optional<Graph> graph;

    // All three files must parse before any command runs.
    void open() {
        taxonomy = load_taxonomy_file(taxonomy_path);
        hierarchy = load_hierarchy_file(hierarchy_path);
        graph = parse(read_file(graph_path), taxonomy, hierarchy);
    }

    void save() const {
        std::ofstream out(graph_path, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::InvalidConfig, "cannot write graph file '" + graph_path + "'");
        materialize(*graph, out);
    }
};

// Splits on whitespace, keeping "quoted strings" (with \" and \\ escapes)
// as single tokens tagged as literals.
struct TripleToken {
    std::string text;
    bool quoted = false;
};

std::vector<TripleToken> tokenize_triple(const std::string& text) {
    std::vector<TripleToken> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        TripleToken tok;
        if (text[i] == '"') {
            tok.quoted = true;
            ++i;
            bool closed = false;
            while (i < text.size()) {
                if (text[i] == '\\' && i + 1 < text.size()) {
                    tok.text += text[i + 1];
                    i += 2;
                } else if (text[i] == '"') {
                    ++i;
                    closed = true;
                    break;
                } else {
                    tok.text += text[i++];
                }
            }
            if (!closed) fail(ErrorCode::InvalidPattern, "unterminated quote in: " + text);
        } else {
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
                tok.text += text[i++];
        }
        out.push_back(std::move(tok));
    }
    return out;
}

Term make_object(const Graph& g, const TripleToken& tok) {
    if (tok.quoted) return Term::literal(tok.text);
    if (g.has_event(tok.text)) return Term::event(tok.text);
    return Term::entity(tok.text);
}

json evidence_json(const IncompatibilityEvidence& e) {
    json j;
    j["kind"] = to_string(e.kind);
    j["claim_a"] = e.claim_a;
    j["claim_b"] = e.claim_b;
    j["constraint"] = e.constraint_id;
    j["viewpoints"] = e.viewpoints;
    j["explanation"] = e.explanation;
    return j;
}

int emit_mutation(const Graph& g, const MutationResult& r, bool as_json) {
    if (as_json) {
        json j;
        j["schema"] = "veckg.mutation/1";
        j["status"] = [&] {
            switch (r.status) {
                case MutationStatus::Ok: return "ok";
                case MutationStatus::NotPermissible: return "not_permissible";
                case MutationStatus::Incompatible: return "incompatible";
                case MutationStatus::CascadeRequired: return "cascade_required";
                case MutationStatus::DanglingInverseRole: return "dangling_inverse_role";
                case MutationStatus::NotFound: return "not_found";
            }
            return "unknown";
        }();
        j["victims"] = json::array();
        for (const auto& v : r.victims) j["victims"].push_back(g.display(v));
        j["absorbed"] = json::array();
        for (const auto& a : r.absorbed) j["absorbed"].push_back(g.display(a));
        j["evidence"] = json::array();
        for (const auto& e : r.evidence) j["evidence"].push_back(evidence_json(e));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << r.message() << "\n";
        for (const auto& v : r.victims) std::cout << "  removed: " << g.display(v) << "\n";
        for (const auto& a : r.absorbed) std::cout << "  absorbed: " << g.display(a) << "\n";
    }
    return r.ok() ? 0 : 1;
}

int cmd_check(Workspace& ws, bool as_json, bool lint) {
    ConsistencyReport report = check_graph(*ws.graph);
    if (as_json) {
        json j = json::parse(report.to_json());
        if (lint) {
            j["lint"] = json::array();
            for (const auto& e : fact_claim_lint(*ws.graph))
                j["lint"].push_back(evidence_json(e));
            j["incomplete_events"] = ws.graph->incomplete_events();
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << report.to_text(color_enabled());
        if (lint) {
            for (const auto& e : fact_claim_lint(*ws.graph))
                std::cout << "lint: " << e.explanation << "\n";
            for (const auto& ev : ws.graph->incomplete_events())
                std::cout << "lint: event " << ev << " is missing a time or location attribute\n";
        }
    }
    return report.overall ? 0 : 1;
}

int cmd_insert(Workspace& ws, const std::string& triple_text,
               const std::string& viewpoint, bool cascade, bool as_json) {
    auto tokens = tokenize_triple(triple_text);
    if (tokens.size() != 3)
        fail(ErrorCode::InvalidPattern, "--triple expects '<s> <p> <o>', got: " + triple_text);
    Graph& g = *ws.graph;
    const Taxonomy& tax = g.taxonomy();

    // `insert --triple "E event_type war"` (no viewpoint) registers an event.
    if (tokens[1].text == "event_type" && viewpoint.empty() && !tokens[2].quoted) {
        g.add_event(tokens[0].text, tokens[2].text);
        ws.save();
        if (as_json)
            std::cout << json{{"schema", "veckg.mutation/1"}, {"status", "ok"}}.dump(2) << "\n";
        else
            std::cout << "registered event " << tokens[0].text << " : " << tokens[2].text << "\n";
        return 0;
    }

    auto pred = tax.find(tokens[1].text);
    if (!pred) fail(ErrorCode::UnknownPredicate, "no predicate named '" + tokens[1].text + "'");

    Triple t;
    t.subject = tokens[0].text;
    t.predicate = *pred;
    t.object = make_object(g, tokens[2]);
    PredicateKind kind = tax.kind(*pred);
    if (kind == PredicateKind::Attribution || kind == PredicateKind::NegatedAttribution)
        t.viewpoint = viewpoint.empty() ? kAll : g.hierarchy().require(viewpoint);
    else if (!viewpoint.empty())
        fail(ErrorCode::KindViolation,
             "'" + tokens[1].text + "' is not an attribution; facts take no viewpoint");

    Transaction tx{{TxOp::Kind::Insert, t}};
    MutationResult r = g.apply(tx, cascade ? CascadePolicy::DeleteConflicting : CascadePolicy::None);
    if (r.ok()) ws.save();
    return emit_mutation(g, r, as_json);
}

int cmd_delete(Workspace& ws, const std::string& triple_text,
               const std::string& viewpoint, bool as_json) {
    auto tokens = tokenize_triple(triple_text);
    if (tokens.size() != 3)
        fail(ErrorCode::InvalidPattern, "--triple expects '<s> <p> <o>', got: " + triple_text);
    Graph& g = *ws.graph;
    auto pred = g.taxonomy().find(tokens[1].text);
    if (!pred) fail(ErrorCode::UnknownPredicate, "no predicate named '" + tokens[1].text + "'");

    Triple t;
    t.subject = tokens[0].text;
    t.predicate = *pred;
    t.object = make_object(g, tokens[2]);
    if (!viewpoint.empty()) t.viewpoint = g.hierarchy().require(viewpoint);
    PredicateKind kind = g.taxonomy().kind(*pred);
    if (!t.viewpoint &&
        (kind == PredicateKind::Attribution || kind == PredicateKind::NegatedAttribution))
        t.viewpoint = kAll;

    MutationResult r = g.remove(t);
    if (r.ok()) ws.save();
    return emit_mutation(g, r, as_json);
}

int cmd_query(Workspace& ws, const std::string& pattern_text, bool no_refine,
              bool no_shortcut, bool as_json) {
    QueryPattern q = parse_pattern(pattern_text);
    if (no_refine) q.refine = false;
    FusionResult r = query(*ws.graph, q, !no_shortcut);
    if (as_json)
        std::cout << r.to_json(*ws.graph) << "\n";
    else
        std::cout << r.to_text(*ws.graph, color_enabled());
    return r.verdict == Verdict::Consistent ? 0 : 1;
}

int cmd_stance(Workspace& ws, const std::string& ballot_path, const std::string& node,
               bool as_json) {
    Ballot ballot = load_ballot_file(ballot_path);
    ViewpointId v = ws.hierarchy->require(node);
    const ConsensusConfig& cfg = ws.hierarchy->config_for(v);
    Stance stance = group_stance(ballot, cfg);
    double phi = consensus_measure(ballot, cfg);
    if (as_json) {
        json j;
        j["schema"] = "veckg.stance/1";
        j["node"] = ws.hierarchy->label(v);
        j["stance"] = stance == Stance::Valid ? "valid" : "invalid";
        j["measure"] = phi;
        j["theta"] = cfg.theta;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (stance == Stance::Valid ? "VALID" : "INVALID") << " (phi=" << phi
                  << ", theta=" << cfg.theta << ")\n";
    }
    return 0;
}

int cmd_materialize(Workspace& ws, const std::string& out_path, bool as_json) {
    std::string text = materialize(*ws.graph);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::InvalidConfig, "cannot write '" + out_path + "'");
        out << text;
        if (!as_json) std::cout << "wrote " << out_path << "\n";
    }
    if (as_json) {
        json j;
        j["schema"] = "veckg.materialize/1";
        j["out"] = out_path;
        j["text"] = text;
        std::cout << j.dump(2) << "\n";
    } else if (out_path.empty()) {
        std::cout << text;
    }
    return 0;
}

const Triple& resolve_claim(const std::map<std::string, Triple>& labels, const std::string& id) {
    auto it = labels.find(id);
    if (it == labels.end())
        fail(ErrorCode::UnknownPredicate, "no claim labelled '" + id +
                                              "' (see `materialize` for current labels)");
    return it->second;
}

int cmd_explain(Workspace& ws, const std::string& id_a, const std::string& id_b, bool as_json) {
    const Graph& g = *ws.graph;
    auto labels = claim_labels(g);
    const Triple& a = resolve_claim(labels, id_a);
    const Triple& b = resolve_claim(labels, id_b);
    auto evidence = contradicts(a, b, g);
    if (as_json) {
        json j;
        j["schema"] = "veckg.explain/1";
        j["claim_a"] = g.display(a);
        j["claim_b"] = g.display(b);
        j["compatible"] = !evidence.has_value();
        j["evidence"] = evidence ? evidence_json(*evidence) : json(nullptr);
        std::cout << j.dump(2) << "\n";
    } else if (evidence) {
        std::cout << "contradiction: " << evidence->explanation << "\n";
    } else {
        std::cout << "compatible: " << g.display(a) << " / " << g.display(b) << "\n";
    }
    return evidence ? 1 : 0;
}

int cmd_viewpoints(Workspace& ws, const std::string& id, bool as_json) {
    const Graph& g = *ws.graph;
    auto labels = claim_labels(g);
    const Triple& claim = resolve_claim(labels, id);
    std::vector<std::string> where;
    for (ViewpointId v : g.hierarchy().validity_set(*claim.viewpoint))
        if (g.valid_at(claim, v)) where.push_back(g.hierarchy().label(v));
    if (as_json) {
        json j;
        j["schema"] = "veckg.viewpoints/1";
        j["claim"] = g.display(claim);
        j["attributed_to"] = g.hierarchy().label(*claim.viewpoint);
        j["valid_at"] = where;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << g.display(claim) << " is valid at:";
        for (const auto& label : where) std::cout << " " << label;
        std::cout << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"veckg: viewpoint-enabled event-centric knowledge graphs"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags (--json, ...) may follow the subcommand

    Workspace ws;
    app.add_option("--taxonomy", ws.taxonomy_path, "taxonomy config")->required();
    app.add_option("--hierarchy", ws.hierarchy_path, "viewpoint hierarchy config")->required();
    app.add_option("--graph", ws.graph_path, "graph file (.vkg)")->required();
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    auto* check = app.add_subcommand("check", "per-viewpoint consistency report");
    bool lint = false;
    check->add_flag("--lint", lint, "also report advisory findings");

    std::string triple_text, viewpoint;
    bool cascade = false;
    auto* insert = app.add_subcommand("insert", "admit a fact or claim");
    insert->add_option("--triple", triple_text, "'<s> <p> <o>' (quote literals)")->required();
    insert->add_option("--viewpoint", viewpoint, "attribution viewpoint (claims only)");
    insert->add_flag("--cascade", cascade, "delete conflicting descendant claims");

    auto* del = app.add_subcommand("delete", "remove a fact or claim");
    del->add_option("--triple", triple_text, "'<s> <p> <o>'")->required();
    del->add_option("--viewpoint", viewpoint, "attribution viewpoint (claims only)");

    std::string pattern_text;
    bool no_refine = false, no_shortcut = false;
    auto* qry = app.add_subcommand("query", "fuse matching triples at a viewpoint");
    qry->add_option("pattern", pattern_text, "'<s> <p> <o> @ <viewpoint>' with ?vars")->required();
    qry->add_flag("--no-refine", no_refine, "exact predicate match only");
    qry->add_flag("--no-shortcut", no_shortcut, "disable the hierarchy skip rule");

    std::string ballot_path, node{kAllLabel};
    auto* stance = app.add_subcommand("stance", "aggregate a ballot into a group stance");
    stance->add_option("--ballot", ballot_path, "file of 'member stance' lines")->required();
    stance->add_option("--node", node, "hierarchy node whose consensus config applies");

    std::string out_path;
    auto* mat = app.add_subcommand("materialize", "serialize the graph (singleton properties)");
    mat->add_option("--out", out_path, "output file (default: stdout)");

    std::string id_a, id_b;
    auto* explain = app.add_subcommand("explain", "evidence for a claim pair");
    explain->add_option("a", id_a, "claim id (e.g. has_occupier#1)")->required();
    explain->add_option("b", id_b, "claim id")->required();

    std::string claim_id;
    auto* vps = app.add_subcommand("viewpoints", "where a claim is valid");
    vps->add_option("--claim", claim_id, "claim id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ws.open();
        if (check->parsed()) return cmd_check(ws, as_json, lint);
        if (insert->parsed()) return cmd_insert(ws, triple_text, viewpoint, cascade, as_json);
        if (del->parsed()) return cmd_delete(ws, triple_text, viewpoint, as_json);
        if (qry->parsed()) return cmd_query(ws, pattern_text, no_refine, no_shortcut, as_json);
        if (stance->parsed()) return cmd_stance(ws, ballot_path, node, as_json);
        if (mat->parsed()) return cmd_materialize(ws, out_path, as_json);
        if (explain->parsed()) return cmd_explain(ws, id_a, id_b, as_json);
        if (vps->parsed()) return cmd_viewpoints(ws, claim_id, as_json);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::InconsistentGraph ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

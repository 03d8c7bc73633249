// Python bindings: a thin, string-oriented surface over the engine. Reports
// come back as JSON strings (same schema as the CLI's --json output) so the
// Python side stays dependency-free.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "veckg/config.hpp"
#include "veckg/consistency.hpp"
#include "veckg/fusion.hpp"
#include "veckg/rdf_io.hpp"

namespace py = pybind11;
using namespace veckg;

namespace {

std::shared_ptr<const Taxonomy> taxonomy_from_text(const std::string& text) {
    std::istringstream in(text);
    return load_taxonomy(in);
}

std::shared_ptr<const ViewpointHierarchy> hierarchy_from_text(const std::string& text) {
    std::istringstream in(text);
    return load_hierarchy(in);
}

Term object_term(const Graph& g, const std::string& text, bool literal) {
    if (literal) return Term::literal(text);
    if (g.has_event(text)) return Term::event(text);
    return Term::entity(text);
}

Triple make_triple(const Graph& g, const std::string& s, const std::string& p,
                   const std::string& o, const std::optional<std::string>& viewpoint,
                   bool literal) {
    Triple t;
    t.subject = s;
    auto pred = g.taxonomy().find(p);
    if (!pred) fail(ErrorCode::UnknownPredicate, "no predicate named '" + p + "'");
    t.predicate = *pred;
    t.object = object_term(g, o, literal);
    PredicateKind kind = g.taxonomy().kind(*pred);
    bool attribution =
        kind == PredicateKind::Attribution || kind == PredicateKind::NegatedAttribution;
    if (viewpoint)
        t.viewpoint = g.hierarchy().require(*viewpoint);
    else if (attribution)
        t.viewpoint = kAll;
    return t;
}

py::dict mutation_dict(const Graph& g, const MutationResult& r) {
    py::dict out;
    out["ok"] = r.ok();
    out["message"] = r.message();
    py::list victims, absorbed, evidence;
    for (const auto& v : r.victims) victims.append(g.display(v));
    for (const auto& a : r.absorbed) absorbed.append(g.display(a));
    for (const auto& e : r.evidence) evidence.append(e.explanation);
    out["victims"] = victims;
    out["absorbed"] = absorbed;
    out["evidence"] = evidence;
    return out;
}

} // namespace

PYBIND11_MODULE(_veckg, m) {
    m.doc() = "viewpoint-enabled event-centric knowledge graphs";

    static py::exception<Error> engine_error(m, "EngineError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(engine_error.ptr(), e.what());
        }
    });

    py::class_<Taxonomy, std::shared_ptr<Taxonomy>>(m, "Taxonomy");
    py::class_<ViewpointHierarchy, std::shared_ptr<ViewpointHierarchy>>(m, "Hierarchy");

    m.def("load_taxonomy", [](const std::string& text) {
        return std::const_pointer_cast<Taxonomy>(taxonomy_from_text(text));
    });
    m.def("load_hierarchy", [](const std::string& text) {
        return std::const_pointer_cast<ViewpointHierarchy>(hierarchy_from_text(text));
    });

    py::class_<Graph>(m, "Graph")
        .def(py::init([](std::shared_ptr<Taxonomy> t, std::shared_ptr<ViewpointHierarchy> h) {
            return Graph(std::const_pointer_cast<const Taxonomy>(t),
                         std::const_pointer_cast<const ViewpointHierarchy>(h));
        }))
        .def("add_event", [](Graph& g, const std::string& id,
                             const std::string& type) { g.add_event(id, type); })
        .def(
            "insert",
            [](Graph& g, const std::string& s, const std::string& p, const std::string& o,
               const std::optional<std::string>& viewpoint, bool literal, bool cascade) {
                Transaction tx{{TxOp::Kind::Insert, make_triple(g, s, p, o, viewpoint, literal)}};
                return mutation_dict(
                    g, g.apply(tx, cascade ? CascadePolicy::DeleteConflicting
                                           : CascadePolicy::None));
            },
            py::arg("subject"), py::arg("predicate"), py::arg("object"),
            py::arg("viewpoint") = std::nullopt, py::arg("literal") = false,
            py::arg("cascade") = false)
        .def(
            "remove",
            [](Graph& g, const std::string& s, const std::string& p, const std::string& o,
               const std::optional<std::string>& viewpoint, bool literal) {
                return mutation_dict(g, g.remove(make_triple(g, s, p, o, viewpoint, literal)));
            },
            py::arg("subject"), py::arg("predicate"), py::arg("object"),
            py::arg("viewpoint") = std::nullopt, py::arg("literal") = false)
        .def("check", [](const Graph& g) { return check_graph(g).to_json(); })
        .def("consistent", [](const Graph& g) { return check_graph(g).overall; })
        .def(
            "query",
            [](const Graph& g, const std::string& pattern, bool shortcut) {
                return query(g, parse_pattern(pattern), shortcut).to_json(g);
            },
            py::arg("pattern"), py::arg("shortcut") = true)
        .def("materialize", [](const Graph& g) { return materialize(g); })
        .def("triples_for",
             [](const Graph& g, const std::string& viewpoint) {
                 std::vector<std::string> out;
                 for (const Triple& t : g.triples_for(g.hierarchy().require(viewpoint)))
                     out.push_back(g.display(t));
                 return out;
             })
        .def("incomplete_events", &Graph::incomplete_events)
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; });

    m.def("parse",
          [](const std::string& text, std::shared_ptr<Taxonomy> t,
             std::shared_ptr<ViewpointHierarchy> h) {
              return parse(text, std::const_pointer_cast<const Taxonomy>(t),
                           std::const_pointer_cast<const ViewpointHierarchy>(h));
          });

    m.def(
        "group_stance",
        [](const std::map<std::string, std::string>& ballot,
           const std::map<std::string, double>& weights, double theta) {
            Ballot b;
            for (const auto& [member, stance] : ballot) {
                auto parsed = parse_raw_stance(stance);
                if (!parsed)
                    fail(ErrorCode::InvalidConfig, "bad stance '" + stance + "' for " + member);
                b.stances[member] = *parsed;
            }
            ConsensusConfig cfg;
            cfg.weights = weights;
            cfg.theta = theta;
            cfg.validate();
            return py::make_tuple(group_stance(b, cfg) == Stance::Valid ? "valid" : "invalid",
                                  consensus_measure(b, cfg));
        },
        py::arg("ballot"), py::arg("weights") = std::map<std::string, double>{},
        py::arg("theta") = 0.5);
}

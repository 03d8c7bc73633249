#include "veckg/rdf_io.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "veckg/consistency.hpp"

namespace veckg {

namespace {

struct LabeledClaim {
    std::string label;
    Triple claim;
    bool reified; // false for claims at ALL, which stay plain on the wire
};

// Canonical claim labeling: sort by display coordinates, then number per
// base predicate. The same walk drives serialization and the CLI's claim
// ids, so `has_occupier#1` means the same statement everywhere.
std::vector<LabeledClaim> label_claims(const Graph& g) {
    const Taxonomy& tax = g.taxonomy();
    const ViewpointHierarchy& h = g.hierarchy();

    std::vector<const Triple*> claims;
    for (const Triple& c : g.claims()) claims.push_back(&c);
    std::sort(claims.begin(), claims.end(), [&](const Triple* a, const Triple* b) {
        auto key = [&](const Triple* t) {
            return std::tuple<const std::string&, const std::string&, std::string, const std::string&>(
                t->subject, tax.name(t->predicate), to_display(t->object),
                h.label(*t->viewpoint));
        };
        return key(a) < key(b);
    });

    std::map<std::string, int> reified_counters;
    std::map<std::string, int> all_counters;
    std::vector<LabeledClaim> out;
    out.reserve(claims.size());
    for (const Triple* c : claims) {
        const std::string& pred = tax.name(c->predicate);
        LabeledClaim lc;
        lc.claim = *c;
        lc.reified = *c->viewpoint != kAll;
        if (lc.reified)
            lc.label = pred + "#" + std::to_string(++reified_counters[pred]);
        else
            lc.label = pred + "@ALL#" + std::to_string(++all_counters[pred]);
        out.push_back(std::move(lc));
    }
    return out;
}

std::vector<std::string> render_lines(const Graph& g) {
    const Taxonomy& tax = g.taxonomy();
    const ViewpointHierarchy& h = g.hierarchy();
    std::vector<std::string> lines;

    for (const auto& [id, rec] : g.events())
        lines.push_back(id + " event_type " + tax.event_type_name(rec.base_type) + " .");

    for (const Triple& f : g.facts())
        lines.push_back(f.subject + " " + tax.name(f.predicate) + " " + to_display(f.object) +
                        " .");

    for (const LabeledClaim& lc : label_claims(g)) {
        const Triple& c = lc.claim;
        if (!lc.reified) {
            // Valid in ALL: no reification necessary. Transformed
            // attributions revert to their source predicate — except event
            // typing, whose source name is the event-registration predicate.
            auto src = tax.transform_source(c.predicate);
            if (tax.is_event_typing(c.predicate)) src.reset();
            const std::string& pred = src ? tax.name(*src) : tax.name(c.predicate);
            lines.push_back(c.subject + " " + pred + " " + to_display(c.object) + " .");
            continue;
        }
        const std::string& pred = tax.name(c.predicate);
        lines.push_back(c.subject + " " + lc.label + " " + to_display(c.object) + " .");
        lines.push_back(lc.label + " " + std::string(kAccToVp) + " " + h.label(*c.viewpoint) +
                        " .");
        lines.push_back(lc.label + " " + std::string(kSingletonPropertyOf) + " " + pred + " .");
    }

    std::sort(lines.begin(), lines.end());
    return lines;
}

} // namespace

std::map<std::string, Triple> claim_labels(const Graph& g) {
    std::map<std::string, Triple> out;
    for (const LabeledClaim& lc : label_claims(g)) out.emplace(lc.label, lc.claim);
    return out;
}

std::string materialize(const Graph& g, const MaterializeOptions& opts) {
    ConsistencyReport report = check_graph(g);
    if (!report.overall) {
        std::string why = "graph is not viewpoint-consistent";
        for (const auto& verdict : report.per_viewpoint) {
            if (!verdict.evidence.empty()) {
                why += ": " + verdict.evidence.front().explanation;
                break;
            }
        }
        fail(ErrorCode::InconsistentGraph, why);
    }
    std::string out;
    if (!opts.base_iri.empty()) out += "BASE <" + opts.base_iri + ">\n";
    for (const std::string& line : render_lines(g)) {
        out += line;
        out += '\n';
    }
    return out;
}

void materialize(const Graph& g, std::ostream& out, const MaterializeOptions& opts) {
    out << materialize(g, opts);
}

// --- parsing -----------------------------------------------------------

namespace {

struct WireToken {
    std::string text;
    bool quoted = false;
};

[[noreturn]] void syntax_error(std::size_t lineno, const std::string& message) {
    fail(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": " + message);
}

[[noreturn]] void vocab_error(std::size_t lineno, const std::string& message) {
    fail(ErrorCode::UnknownVocabulary, "line " + std::to_string(lineno) + ": " + message);
}

std::vector<WireToken> tokenize(const std::string& line, std::size_t lineno) {
    std::vector<WireToken> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '"') {
            std::string lit;
            ++i;
            bool closed = false;
            while (i < line.size()) {
                char c = line[i++];
                if (c == '\\' && i < line.size()) {
                    lit += line[i++];
                } else if (c == '"') {
                    closed = true;
                    break;
                } else {
                    lit += c;
                }
            }
            if (!closed) syntax_error(lineno, "unterminated literal");
            tokens.push_back(WireToken{std::move(lit), true});
        } else {
            std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            tokens.push_back(WireToken{line.substr(start, i - start), false});
        }
    }
    return tokens;
}

struct Row {
    std::size_t lineno;
    WireToken subject;
    WireToken predicate;
    WireToken object;
};

bool is_singleton_name(const std::string& token, std::string* base = nullptr,
                       std::string* index = nullptr) {
    auto hash = token.find('#');
    if (hash == std::string::npos || hash == 0 || hash + 1 >= token.size()) return false;
    for (std::size_t i = hash + 1; i < token.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
    if (base) *base = token.substr(0, hash);
    if (index) *index = token.substr(hash + 1);
    return true;
}

struct SingletonParts {
    std::optional<std::pair<std::size_t, Row>> statement; // lineno + full row
    std::optional<std::pair<std::size_t, std::string>> base;
    std::optional<std::pair<std::size_t, std::string>> viewpoint;
};

} // namespace

Graph parse(const std::string& text, std::shared_ptr<const Taxonomy> taxonomy,
            std::shared_ptr<const ViewpointHierarchy> hierarchy) {
    Graph g(taxonomy, hierarchy);
    const Taxonomy& tax = *taxonomy;
    const ViewpointHierarchy& h = *hierarchy;

    std::vector<Row> rows;
    {
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::size_t first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            if (line[first] == '#') continue;
            if (line.compare(first, 5, "BASE ") == 0) continue; // metadata only
            auto tokens = tokenize(line, lineno);
            if (tokens.size() != 4 || tokens.back().quoted || tokens.back().text != ".")
                syntax_error(lineno, "expected '<subject> <predicate> <object> .'");
            if (tokens[0].quoted || tokens[1].quoted)
                syntax_error(lineno, "subject and predicate cannot be literals");
            rows.push_back(Row{lineno, tokens[0], tokens[1], tokens[2]});
        }
    }

    // First pass: event registrations, so objects and claim subjects can be
    // classified regardless of line order.
    std::vector<Row> rest;
    for (const Row& row : rows) {
        if (row.predicate.text == "event_type" && !is_singleton_name(row.subject.text)) {
            if (row.object.quoted) syntax_error(row.lineno, "event type must be a token");
            if (!tax.find_event_type(row.object.text))
                vocab_error(row.lineno, "unknown event type '" + row.object.text + "'");
            g.add_event(row.subject.text, row.object.text);
            continue;
        }
        rest.push_back(row);
    }

    auto object_term = [&](const WireToken& tok, std::size_t lineno) -> Term {
        if (tok.quoted) {
            try {
                return Term::literal(tok.text);
            } catch (const Error& e) {
                syntax_error(lineno, e.what());
            }
        }
        if (g.has_event(tok.text)) return Term::event(tok.text);
        return Term::entity(tok.text);
    };

    std::map<std::string, SingletonParts> singletons;
    auto once = [&](auto& slot, std::size_t lineno, auto value, const std::string& what,
                    const std::string& name) {
        if (slot)
            fail(ErrorCode::DanglingSingleton,
                 "line " + std::to_string(lineno) + ": duplicate " + what + " for '" + name + "'");
        slot.emplace(lineno, std::move(value));
    };

    for (const Row& row : rest) {
        if (row.predicate.text == kSingletonPropertyOf) {
            std::string base;
            if (!is_singleton_name(row.subject.text, &base))
                syntax_error(row.lineno, "'" + row.subject.text + "' is not a singleton name");
            if (row.object.quoted || row.object.text != base)
                syntax_error(row.lineno, "singleton '" + row.subject.text +
                                             "' must point back to its base predicate '" + base +
                                             "'");
            if (!tax.find(base)) vocab_error(row.lineno, "unknown predicate '" + base + "'");
            once(singletons[row.subject.text].base, row.lineno, base, "singleton_property_of",
                 row.subject.text);
            continue;
        }
        if (row.predicate.text == kAccToVp) {
            if (!is_singleton_name(row.subject.text))
                syntax_error(row.lineno, "'" + row.subject.text + "' is not a singleton name");
            if (row.object.quoted) syntax_error(row.lineno, "viewpoint must be a token");
            if (!h.find(row.object.text))
                vocab_error(row.lineno, "unknown viewpoint '" + row.object.text + "'");
            once(singletons[row.subject.text].viewpoint, row.lineno, row.object.text, "acc_to_vp",
                 row.subject.text);
            continue;
        }
        if (is_singleton_name(row.predicate.text)) {
            if (is_singleton_name(row.subject.text))
                syntax_error(row.lineno, "singleton nodes cannot be statement subjects");
            once(singletons[row.predicate.text].statement, row.lineno, row, "statement",
                 row.predicate.text);
            continue;
        }
        if (is_singleton_name(row.subject.text))
            syntax_error(row.lineno, "unexpected predicate '" + row.predicate.text +
                                         "' on singleton node '" + row.subject.text + "'");

        // Plain triple: a fact, or an unreified claim valid in ALL.
        auto pred = tax.find(row.predicate.text);
        if (!pred) vocab_error(row.lineno, "unknown predicate '" + row.predicate.text + "'");
        if (!g.has_event(row.subject.text))
            vocab_error(row.lineno, "unknown event '" + row.subject.text + "'");
        Term obj = object_term(row.object, row.lineno);
        PredicateKind kind = tax.kind(*pred);
        if (kind == PredicateKind::Regular || kind == PredicateKind::Parameterized) {
            g.insert_unchecked(Triple{row.subject.text, *pred, std::move(obj), std::nullopt});
        } else {
            if (tax.is_event_typing(*pred) && (obj.is_literal() || !tax.find_event_type(obj.lexical)))
                vocab_error(row.lineno, "unknown event type " + to_display(obj));
            g.insert_unchecked(Triple{row.subject.text, *pred, std::move(obj), kAll});
        }
    }

    for (const auto& [name, parts] : singletons) {
        std::string missing;
        if (!parts.statement) missing = "its statement triple";
        else if (!parts.base) missing = "a singleton_property_of triple";
        else if (!parts.viewpoint) missing = "an acc_to_vp triple";
        if (!missing.empty())
            fail(ErrorCode::DanglingSingleton, "singleton '" + name + "' is missing " + missing);

        const Row& stmt = parts.statement->second;
        PredicateId pred = tax.require(parts.base->second);
        PredicateKind kind = tax.kind(pred);
        if (kind != PredicateKind::Attribution && kind != PredicateKind::NegatedAttribution)
            vocab_error(stmt.lineno,
                        "'" + parts.base->second + "' is not an attribution and cannot be reified");
        if (!g.has_event(stmt.subject.text))
            vocab_error(stmt.lineno, "unknown event '" + stmt.subject.text + "'");
        Term obj = object_term(stmt.object, stmt.lineno);
        if (tax.is_event_typing(pred) && (obj.is_literal() || !tax.find_event_type(obj.lexical)))
            vocab_error(stmt.lineno, "unknown event type " + to_display(obj));
        ViewpointId vp = h.require(parts.viewpoint->second);
        g.insert_unchecked(Triple{stmt.subject.text, pred, std::move(obj), vp});
    }
    return g;
}

Graph parse_stream(std::istream& in, std::shared_ptr<const Taxonomy> taxonomy,
                   std::shared_ptr<const ViewpointHierarchy> hierarchy) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), std::move(taxonomy), std::move(hierarchy));
}

std::vector<DiffEntry> diff(const Graph& a, const Graph& b) {
    std::vector<std::string> la = render_lines(a);
    std::vector<std::string> lb = render_lines(b);
    std::vector<DiffEntry> out;
    std::vector<std::string> only;
    std::set_difference(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(only));
    for (auto& line : only) out.push_back(DiffEntry{DiffEntry::Side::Left, std::move(line)});
    only.clear();
    std::set_difference(lb.begin(), lb.end(), la.begin(), la.end(), std::back_inserter(only));
    for (auto& line : only) out.push_back(DiffEntry{DiffEntry::Side::Right, std::move(line)});
    return out;
}

} // namespace veckg

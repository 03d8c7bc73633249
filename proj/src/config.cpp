#include "veckg/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

namespace veckg {

namespace {

std::string trim(const std::string& s) {
    std::size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    std::size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

// Line-oriented `[SECTION]` walker. A header may carry content after the
// bracket; `#` lines are comments.
void walk_sections(std::istream& in,
                   const std::function<void(const std::string&, const std::string&)>& on_line) {
    std::string line;
    std::string section;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t[0] == '[') {
            auto close = t.find(']');
            if (close == std::string::npos)
                fail(ErrorCode::InvalidConfig, "unterminated section header: " + t);
            section = t.substr(1, close - 1);
            std::string inline_content = trim(t.substr(close + 1));
            if (!inline_content.empty()) on_line(section, inline_content);
            continue;
        }
        if (section.empty())
            fail(ErrorCode::InvalidConfig, "content before the first section header: " + t);
        on_line(section, t);
    }
}

} // namespace

// --- taxonomy -----------------------------------------------------------

std::shared_ptr<const Taxonomy> load_taxonomy(std::istream& in) {
    TaxonomyBuilder builder;

    auto parse_kind = [](const std::string& token) {
        std::string k = lower(token);
        if (k == "regular") return PredicateKind::Regular;
        if (k == "parameterized") return PredicateKind::Parameterized;
        if (k == "attribution") return PredicateKind::Attribution;
        fail(ErrorCode::InvalidConfig, "unknown predicate kind '" + token + "'");
    };

    auto declare = [&](const std::string& line) {
        auto tokens = split_ws(line);
        if (tokens.size() < 2 || tokens.size() > 3)
            fail(ErrorCode::InvalidConfig, "expected 'name kind [types|*]', got: " + line);
        const std::string& name = tokens[0];
        PredicateKind kind = parse_kind(tokens[1]);

        // Naming conventions wire up the transformations: `attrib_X` over a
        // regular X is its transformation, `not_X` over an attribution X its
        // negation. Anything else is an ordinary registration.
        if (kind == PredicateKind::Attribution && name.starts_with("attrib_")) {
            if (auto base = builder.find(name.substr(7));
                base && builder.kind(*base) == PredicateKind::Regular) {
                builder.transform_regular(*base);
                return;
            }
        }
        if (kind == PredicateKind::Attribution && name.starts_with("not_")) {
            if (auto base = builder.find(name.substr(4));
                base && builder.kind(*base) == PredicateKind::Attribution) {
                builder.negate_predicate(*base);
                return;
            }
        }

        std::vector<std::string> types;
        if (tokens.size() == 3 && tokens[2] != "*") types = split_on(tokens[2], ',');
        builder.register_predicate(name, kind, types);
    };

    auto refine = [&](const std::string& line) {
        static const std::regex re(R"(^(\S+)\s*>\s*(\S+)\s*@\s*(\S+)$)");
        std::smatch m;
        if (!std::regex_match(line, m, re))
            fail(ErrorCode::InvalidConfig, "expected 'parent > child @ type', got: " + line);
        auto parent = builder.find(m[1].str());
        auto child = builder.find(m[2].str());
        if (!parent) fail(ErrorCode::UnknownPredicate, "no predicate named '" + m[1].str() + "'");
        if (!child) fail(ErrorCode::UnknownPredicate, "no predicate named '" + m[2].str() + "'");
        builder.add_refinement(*parent, *child, m[3].str());
    };

    auto constrain = [&](const std::string& line) {
        static const std::regex re(R"(^(\S+)\s+(\S+)\s+(\S+)(?:\s*@\s*(\S+))?$)");
        std::smatch m;
        if (!std::regex_match(line, m, re))
            fail(ErrorCode::InvalidConfig, "expected 'XOR|INV a b [@ type]', got: " + line);
        std::string op = lower(m[1].str());
        ConstraintKind kind;
        if (op == "xor")
            kind = ConstraintKind::MutualExclusion;
        else if (op == "inv")
            kind = ConstraintKind::InverseRole;
        else
            fail(ErrorCode::InvalidConfig, "unknown constraint '" + m[1].str() + "'");
        auto left = builder.find(m[2].str());
        auto right = builder.find(m[3].str());
        if (!left) fail(ErrorCode::UnknownPredicate, "no predicate named '" + m[2].str() + "'");
        if (!right) fail(ErrorCode::UnknownPredicate, "no predicate named '" + m[3].str() + "'");
        std::optional<std::string> scope;
        if (m[4].matched) scope = m[4].str();
        builder.add_constraint(kind, *left, *right, scope);
    };

    auto rule = [&](const std::string& line) {
        static const std::regex re(
            R"(^INCOMPAT\s*\(\s*(\?\S+)\s+(\S+)\s+(\?\S+)\s*\)\s*\(\s*(\?\S+)\s+(\S+)\s+(\?\S+)\s*\)(?:\s*@\s*(\S+))?$)");
        std::smatch m;
        if (!std::regex_match(line, m, re))
            fail(ErrorCode::InvalidConfig,
                 "expected 'INCOMPAT (?s p ?o) (?s q ?o) [@ type]', got: " + line);
        auto pa = builder.find(m[2].str());
        auto pb = builder.find(m[5].str());
        if (!pa) fail(ErrorCode::UnknownPredicate, "no predicate named '" + m[2].str() + "'");
        if (!pb) fail(ErrorCode::UnknownPredicate, "no predicate named '" + m[5].str() + "'");
        std::optional<std::string> scope;
        if (m[7].matched) scope = m[7].str();
        builder.add_rule(m[1].str(), *pa, m[3].str(), m[4].str(), *pb, m[6].str(), scope);
    };

    auto permit = [&](const std::string& line) {
        auto parts = split_on(line, ':');
        if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
            fail(ErrorCode::InvalidConfig, "expected 'type : vp1,vp2|*', got: " + line);
        if (parts[1] == "*") {
            builder.permit_all(parts[0]);
        } else {
            builder.permit(parts[0], split_on(parts[1], ','));
        }
    };

    walk_sections(in, [&](const std::string& section, const std::string& line) {
        if (section == "PREDICATES")
            declare(line);
        else if (section == "REFINEMENTS")
            refine(line);
        else if (section == "CONSTRAINTS")
            constrain(line);
        else if (section == "RULES")
            rule(line);
        else if (section == "PERMIT")
            permit(line);
        else
            fail(ErrorCode::InvalidConfig, "unknown taxonomy section [" + section + "]");
    });

    return std::make_shared<const Taxonomy>(builder.freeze());
}

std::shared_ptr<const Taxonomy> load_taxonomy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidConfig, "cannot open taxonomy config '" + path + "'");
    return load_taxonomy(in);
}

// --- hierarchy ----------------------------------------------------------

std::shared_ptr<const ViewpointHierarchy> load_hierarchy(std::istream& in) {
    std::optional<Variant> variant;
    std::vector<std::string> nodes;
    std::vector<std::pair<std::string, std::string>> arcs;
    std::optional<double> global_theta;
    std::map<std::string, double> node_thetas;
    std::map<std::string, double> global_weights;
    std::map<std::string, std::map<std::string, double>> node_weights;

    auto parse_weights = [](const std::string& text) {
        std::map<std::string, double> out;
        for (const std::string& item : split_on(text, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                fail(ErrorCode::InvalidConfig, "expected 'member=weight', got: " + item);
            std::string member = trim(item.substr(0, eq));
            std::string value = trim(item.substr(eq + 1));
            try {
                out[member] = std::stod(value);
            } catch (const std::exception&) {
                fail(ErrorCode::InvalidConfig, "bad weight '" + value + "' for '" + member + "'");
            }
        }
        return out;
    };

    walk_sections(in, [&](const std::string& section, const std::string& line) {
        if (section == "VARIANT") {
            std::string v = lower(line);
            if (v == "wtah")
                variant = Variant::WTAH;
            else if (v == "vph")
                variant = Variant::VPH;
            else
                fail(ErrorCode::InvalidConfig, "variant must be WTAH or VPH, got: " + line);
        } else if (section == "NODES") {
            for (const std::string& chunk : split_ws(line))
                for (const std::string& label : split_on(chunk, ','))
                    if (!label.empty()) nodes.push_back(label);
        } else if (section == "ARCS") {
            static const std::regex re(R"(^(\S+)\s*>\s*(\S+)$)");
            std::smatch m;
            if (!std::regex_match(line, m, re))
                fail(ErrorCode::InvalidConfig, "expected 'parent > child', got: " + line);
            arcs.emplace_back(m[1].str(), m[2].str());
        } else if (section == "THETA") {
            auto parts = split_on(line, ':');
            try {
                if (parts.size() == 1) {
                    global_theta = std::stod(parts[0]);
                } else if (parts.size() == 2) {
                    node_thetas[parts[0]] = std::stod(parts[1]);
                } else {
                    fail(ErrorCode::InvalidConfig, "expected 'value' or 'node : value'");
                }
            } catch (const Error&) {
                throw;
            } catch (const std::exception&) {
                fail(ErrorCode::InvalidConfig, "bad theta in: " + line);
            }
        } else if (section == "WEIGHTS") {
            auto colon = line.find(':');
            if (colon == std::string::npos)
                fail(ErrorCode::InvalidConfig, "expected 'node : member=w,...', got: " + line);
            std::string node = trim(line.substr(0, colon));
            auto weights = parse_weights(line.substr(colon + 1));
            if (node == "*")
                global_weights = std::move(weights);
            else
                node_weights[node] = std::move(weights);
        } else {
            fail(ErrorCode::InvalidConfig, "unknown hierarchy section [" + section + "]");
        }
    });

    if (!variant) fail(ErrorCode::InvalidConfig, "hierarchy config needs a [VARIANT] section");

    ConsensusConfig global;
    global.weights = std::move(global_weights);
    if (global_theta) global.theta = *global_theta;

    // Node overrides start from the global config so a lone theta or weight
    // line does not silently reset the other half.
    std::map<std::string, ConsensusConfig> overrides;
    for (const auto& [node, theta] : node_thetas) {
        auto [it, _] = overrides.try_emplace(node, global);
        it->second.theta = theta;
    }
    for (const auto& [node, weights] : node_weights) {
        auto [it, _] = overrides.try_emplace(node, global);
        it->second.weights = weights;
    }

    return std::make_shared<const ViewpointHierarchy>(
        ViewpointHierarchy::build(nodes, arcs, *variant, std::move(global), std::move(overrides)));
}

std::shared_ptr<const ViewpointHierarchy> load_hierarchy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidConfig, "cannot open hierarchy config '" + path + "'");
    return load_hierarchy(in);
}

// --- ballots --------------------------------------------------------------

Ballot load_ballot(std::istream& in, const std::string& fact_label) {
    Ballot ballot;
    ballot.fact = fact_label;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto tokens = split_ws(t);
        if (tokens.size() != 2)
            fail(ErrorCode::InvalidConfig,
                 "ballot line " + std::to_string(lineno) + ": expected 'member stance'");
        auto stance = parse_raw_stance(tokens[1]);
        if (!stance)
            fail(ErrorCode::InvalidConfig, "ballot line " + std::to_string(lineno) +
                                               ": stance must be valid|invalid|neutral");
        if (!ballot.stances.emplace(tokens[0], *stance).second)
            fail(ErrorCode::InvalidConfig,
                 "ballot line " + std::to_string(lineno) + ": duplicate member '" + tokens[0] + "'");
    }
    return ballot;
}

Ballot load_ballot_file(const std::string& path, const std::string& fact_label) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidConfig, "cannot open ballot file '" + path + "'");
    return load_ballot(in, fact_label);
}

} // namespace veckg

#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>

#include "veckg/hierarchy.hpp"
#include "veckg/taxonomy.hpp"

namespace veckg {

/// Sectioned plain-text taxonomy config:
///   [PREDICATES]  name kind type1,type2|*
///   [REFINEMENTS] parent > child @ type
///   [CONSTRAINTS] XOR|INV a b [@ type]
///   [RULES]       INCOMPAT (?s p ?o) (?s q ?o) [@ type]
///   [PERMIT]      type : vp1,vp2|*
/// Declaring `attrib_X attribution ...` over a regular X is the transform;
/// `not_X attribution ...` over an attribution X is the negation.
std::shared_ptr<const Taxonomy> load_taxonomy(std::istream& in);
std::shared_ptr<const Taxonomy> load_taxonomy_file(const std::string& path);

/// Hierarchy config:
///   [VARIANT] WTAH|VPH
///   [NODES]   labels (ALL optional; inserted above the sources if absent)
///   [ARCS]    parent > child
///   [THETA]   0.6            or  node : 0.6
///   [WEIGHTS] node : m1=2,m2=1
std::shared_ptr<const ViewpointHierarchy> load_hierarchy(std::istream& in);
std::shared_ptr<const ViewpointHierarchy> load_hierarchy_file(const std::string& path);

/// Ballot file: one `member stance` pair per line; stance is
/// valid|invalid|neutral (case-insensitive).
Ballot load_ballot(std::istream& in, const std::string& fact_label = "");
Ballot load_ballot_file(const std::string& path, const std::string& fact_label = "");

} // namespace veckg

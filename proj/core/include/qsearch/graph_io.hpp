#pragma once

#include <iosfwd>
#include <string>

#include "qsearch/graph.hpp"

namespace qsearch {

// Edge-list text format:
//
//   n m
//   u v          (m lines, 0-indexed)
//   # label u <text>   (optional, trailing)
//
// write_edge_list emits edges as u < v in lexicographic order and labels in
// vertex order, so reading then writing a canonical file is byte-stable.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);

Graph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const Graph& g);

}  // namespace qsearch

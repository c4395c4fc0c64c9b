#include "qsearch/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "qsearch/error.hpp"

namespace qsearch {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("edge list line " + std::to_string(line_no) + ": " + what);
  };

  std::size_t n = 0, m = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream hs(line);
    if (!(hs >> n >> m)) throw fail("expected header `n m`");
    std::string extra;
    if (hs >> extra) throw fail("unexpected token '" + extra + "' in header");
    have_header = true;
  }
  if (!have_header) throw ParseError("edge list: missing header `n m`");

  std::vector<Edge> edges;
  edges.reserve(m);
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::istringstream ls(t.substr(1));
      std::string keyword;
      std::size_t v = 0;
      if (!(ls >> keyword) || keyword != "label") continue;  // plain comment
      if (!(ls >> v)) throw fail("label line needs a vertex id");
      if (v >= n) throw fail("label for vertex " + std::to_string(v) + " out of range");
      std::string text;
      std::getline(ls, text);
      text = trim(text);
      if (text.empty()) throw fail("empty label");
      if (labels.empty()) labels.resize(n);
      labels[v] = text;
      continue;
    }
    if (!labels.empty()) throw fail("edge after label lines");
    std::istringstream es(t);
    long long u = -1, v = -1;
    if (!(es >> u >> v)) throw fail("expected `u v`");
    std::string extra;
    if (es >> extra) throw fail("unexpected token '" + extra + "'");
    if (u < 0 || v < 0 || std::size_t(u) >= n || std::size_t(v) >= n) {
      throw fail("endpoint out of range 0.." + std::to_string(n == 0 ? 0 : n - 1));
    }
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  if (edges.size() != m) {
    throw ParseError("edge list: header announces " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  }
  try {
    return Graph(n, edges, std::move(labels));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("edge list: ") + e.what());
  }
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const auto edges = g.edges();
  out << g.order() << ' ' << edges.size() << '\n';
  for (const Edge& e : edges) out << e.u << ' ' << e.v << '\n';
  if (g.has_labels()) {
    for (Vertex v = 0; v < g.order(); ++v) {
      if (!g.label(v).empty()) out << "# label " << v << ' ' << g.label(v) << '\n';
    }
  }
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

void save_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write graph file '" + path + "'");
  write_edge_list(out, g);
}

}  // namespace qsearch

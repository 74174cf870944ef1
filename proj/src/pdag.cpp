#include <algorithm>

#include "tempodag/discovery.hpp"
#include "tempodag/error.hpp"

namespace tempodag {

Pdag::Pdag(std::vector<std::string> names) : names_(std::move(names)), marks_(names_.size() * names_.size(), Mark::None) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (!by_name_.emplace(names_[i], i).second) fail(ErrorCode::DuplicateVariable, "duplicate node '" + names_[i] + "'");
}

std::size_t Pdag::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) fail(ErrorCode::UnknownVariable, "no graph node named '" + name + "'");
  return it->second;
}

void Pdag::add_undirected(std::size_t a, std::size_t b) {
  if (a == b) fail(ErrorCode::SameVariable, "self-loop on '" + names_.at(a) + "'");
  set(a, b, Mark::Undirected, Mark::Undirected);
}

void Pdag::orient(std::size_t from, std::size_t to) {
  if (from == to) fail(ErrorCode::SameVariable, "self-loop on '" + names_.at(from) + "'");
  set(from, to, Mark::Tail, Mark::Head);
}

void Pdag::remove(std::size_t a, std::size_t b) { set(a, b, Mark::None, Mark::None); }

std::vector<std::size_t> Pdag::adjacents(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < names_.size(); ++u)
    if (u != v && adjacent(v, u)) out.push_back(u);
  return out;
}

std::vector<std::pair<std::string, std::string>> Pdag::directed_edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t a = 0; a < names_.size(); ++a)
    for (std::size_t b = 0; b < names_.size(); ++b)
      if (directed(a, b)) out.emplace_back(names_[a], names_[b]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::string, std::string>> Pdag::undirected_edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t a = 0; a < names_.size(); ++a)
    for (std::size_t b = a + 1; b < names_.size(); ++b)
      if (undirected(a, b)) out.emplace_back(std::min(names_[a], names_[b]), std::max(names_[a], names_[b]));
  std::sort(out.begin(), out.end());
  return out;
}

bool Pdag::directed_part_acyclic() const {
  const std::size_t n = names_.size();
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (directed(a, b)) ++indegree[b];
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t u = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t c = 0; c < n; ++c)
      if (directed(u, c) && --indegree[c] == 0) ready.push_back(c);
  }
  return seen == n;
}

std::vector<VStructure> find_v_structures(const Skeleton& skeleton) {
  const Pdag& g = skeleton.graph;
  std::vector<VStructure> out;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const auto adj = g.adjacents(c);
    for (std::size_t i = 0; i < adj.size(); ++i)
      for (std::size_t j = i + 1; j < adj.size(); ++j) {
        std::size_t a = adj[i], b = adj[j];
        if (g.adjacent(a, b)) continue;
        if (g.names()[b] < g.names()[a]) std::swap(a, b);
        const NamePair key{g.names()[a], g.names()[b]};
        auto it = skeleton.separating_sets.find(key);
        const bool in_sep = it != skeleton.separating_sets.end() &&
                            std::find(it->second.begin(), it->second.end(), g.names()[c]) != it->second.end();
        if (!in_sep) out.push_back({g.names()[a], g.names()[c], g.names()[b]});
      }
  }
  std::sort(out.begin(), out.end(), [](const VStructure& x, const VStructure& y) {
    return std::tie(x.collider, x.left, x.right) < std::tie(y.collider, y.left, y.right);
  });
  return out;
}

Pdag apply_meek_rules(Pdag g) {
  const std::size_t n = g.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b || !g.undirected(a, b)) continue;
        bool orient = false;
        for (std::size_t c = 0; c < n && !orient; ++c) {
          if (c == a || c == b) continue;
          // R1: c -> a - b, c and b nonadjacent.
          if (g.directed(c, a) && !g.adjacent(c, b)) orient = true;
          // R2: a -> c -> b with a - b.
          if (g.directed(a, c) && g.directed(c, b)) orient = true;
        }
        // R3: a - c -> b, a - d -> b, c and d nonadjacent.
        for (std::size_t c = 0; c < n && !orient; ++c) {
          if (c == a || c == b || !g.undirected(a, c) || !g.directed(c, b)) continue;
          for (std::size_t d = c + 1; d < n && !orient; ++d) {
            if (d == a || d == b || !g.undirected(a, d) || !g.directed(d, b)) continue;
            if (!g.adjacent(c, d)) orient = true;
          }
        }
        // R4: c -> d -> b with a adjacent to c and d, c and b nonadjacent.
        for (std::size_t c = 0; c < n && !orient; ++c) {
          if (c == a || c == b || !g.adjacent(a, c) || g.adjacent(c, b)) continue;
          for (std::size_t d = 0; d < n && !orient; ++d) {
            if (d == a || d == b || d == c) continue;
            if (g.directed(c, d) && g.directed(d, b) && g.adjacent(a, d)) orient = true;
          }
        }
        if (orient) {
          g.orient(a, b);
          changed = true;
        }
      }
  }
  return g;
}

Pdag orient(const Skeleton& skeleton) {
  Pdag g = skeleton.graph;
  for (const auto& v : find_v_structures(skeleton)) {
    const std::size_t a = g.index_of(v.left), c = g.index_of(v.collider), b = g.index_of(v.right);
    for (std::size_t tail : {a, b}) {
      if (g.directed(c, tail))
        fail(ErrorCode::ConflictingOrientations,
             "edge " + g.names()[tail] + " - " + g.names()[c] + " is oriented both " + g.names()[c] + " -> " +
                 g.names()[tail] + " and " + g.names()[tail] + " -> " + g.names()[c] + " by v-structures");
      g.orient(tail, c);
    }
  }
  return apply_meek_rules(std::move(g));
}

}  // namespace tempodag

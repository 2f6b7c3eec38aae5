#pragma once

#include "shatterlab/bitvec.hpp"
#include "shatterlab/caps.hpp"
#include "shatterlab/rational.hpp"
#include "shatterlab/set_system.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace shatterlab {

// Simple undirected graph on [n] (symmetric, irreflexive adjacency).
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t vertex_count);
    Graph(std::size_t vertex_count, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    std::size_t vertex_count() const noexcept { return adj_.size(); }
    bool adjacent(std::size_t u, std::size_t v) const { return adj_.at(u).test(v); }
    void add_edge(std::size_t u, std::size_t v);
    const BitVec& neighbors(std::size_t v) const { return adj_.at(v); }
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

    Graph induced(const std::vector<std::size_t>& vertices) const;

    static Graph complete(std::size_t n);
    static Graph empty(std::size_t n);
    static Graph path(std::size_t n);
    static Graph random(std::size_t n, double p, std::uint64_t seed);

    friend bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }

private:
    std::vector<BitVec> adj_;
};

// Neighborhood set system: universe = vertices, one set N(v) per vertex.
SetSystem neighborhood_system(const Graph& G);

// Binary-string-indexed labeling of vertices. Node "" is the root; the child
// "eta0" is nonadjacent to eta's vertex and "eta1" adjacent.
class TypeTree {
public:
    TypeTree() = default;
    explicit TypeTree(std::map<std::string, std::size_t> labels) : labels_(std::move(labels)) {}

    const std::map<std::string, std::size_t>& labels() const noexcept { return labels_; }
    bool contains(const std::string& eta) const { return labels_.count(eta) != 0; }
    std::size_t at(const std::string& eta) const { return labels_.at(eta); }
    std::size_t size() const noexcept { return labels_.size(); }

    // Number of levels: max |eta| + 1, zero for the empty tree.
    std::size_t height() const;
    std::size_t nodes_at_level(std::size_t level) const;

    void insert(std::string eta, std::size_t vertex) { labels_[std::move(eta)] = vertex; }

    friend bool operator==(const TypeTree&, const TypeTree&) = default;

private:
    std::map<std::string, std::size_t> labels_;
};

// Inserts vertices in `order`: each descends from the root, branching 1 at an
// adjacent node and 0 at a nonadjacent one, and takes the first free position.
TypeTree build_type_tree(const Graph& G, const std::vector<std::size_t>& order);
TypeTree build_type_tree(const Graph& G);
std::vector<std::size_t> random_order(std::size_t n, std::uint64_t seed);

struct TypeTreeValidation {
    bool ok = true;
    std::string message;
    // Offending nodes: (eta, child) for condition (1), (eta, eta', eta'') for (2).
    std::vector<std::string> nodes;
};

// Checks closure under initial segments, that each vertex of G labels exactly
// one node, and the two type-tree conditions. With `require_all_vertices`
// false the tree may label a subset of the vertices.
TypeTreeValidation validate_type_tree(const Graph& G, const TypeTree& tree, bool require_all_vertices = true);

// True iff `tree` is the full binary tree 2^{<height}.
bool is_full(const TypeTree& tree, std::size_t height);

struct TreeRankResult {
    std::size_t lower = 0;
    std::size_t upper = 0;
    bool exact = false;
    std::size_t value() const { return lower; }
};

// Largest t such that some vertex subset carries a full binary type tree of
// height t. Exact for at most caps.tree_rank_vertices vertices; otherwise a
// budgeted search lower bound and the neighborhood thicket bound.
TreeRankResult tree_rank(const Graph& G, const Caps& caps = {});
// Full type tree of height t, if one exists (exhaustive; same cap).
std::optional<TypeTree> find_full_type_tree(const Graph& G, std::size_t t, const Caps& caps = {});

struct CliqueIndependent {
    std::vector<std::size_t> clique;
    std::vector<std::size_t> independent;
    std::string branch;
};

// Along a deepest branch, ancestors left by a 1-step are adjacent to every
// later node and ancestors left by a 0-step nonadjacent.
CliqueIndependent extract_clique_or_independent(const TypeTree& tree);

struct HeightBoundReport {
    bool applicable = false;
    std::string reason;
    std::size_t n = 0, t = 0, h = 0;
    bool rank_exact = false;
    BigInt lhs;  // (h - 1)^t
    BigInt rhs;  // n * (t - 2)!
    bool pass = true;
};

// h >= (n (t - 2)!)^{1/t} + 1 checked as (h - 1)^t >= n (t - 2)!, for the
// graph's tree rank t when t >= 2 and h >= 2t. When the rank is only bounded,
// every candidate t in [lower, upper] meeting the hypotheses must pass.
HeightBoundReport check_height_bound(const Graph& G, const TypeTree& tree, const Caps& caps = {});
HeightBoundReport check_height_bound(const Graph& G, const TypeTree& tree, const TreeRankResult& rank);

}  // namespace shatterlab

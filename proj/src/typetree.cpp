#include "shatterlab/typetree.hpp"

#include "shatterlab/dims.hpp"
#include "shatterlab/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

namespace shatterlab {

Graph::Graph(std::size_t vertex_count) : adj_(vertex_count, BitVec(vertex_count)) {}

Graph::Graph(std::size_t vertex_count, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : Graph(vertex_count) {
    for (const auto& [u, v] : edges) add_edge(u, v);
}

void Graph::add_edge(std::size_t u, std::size_t v) {
    const std::size_t n = vertex_count();
    if (u >= n || v >= n)
        throw InputError("edge [" + std::to_string(u) + "," + std::to_string(v) + "] has a vertex outside [0," +
                         std::to_string(n) + ")");
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    adj_[u].set(v);
    adj_[v].set(u);
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < vertex_count(); ++u)
        for (std::size_t v = u + 1; v < vertex_count(); ++v)
            if (adj_[u].test(v)) out.emplace_back(u, v);
    return out;
}

Graph Graph::induced(const std::vector<std::size_t>& vertices) const {
    Graph g(vertices.size());
    for (std::size_t a = 0; a < vertices.size(); ++a)
        for (std::size_t b = a + 1; b < vertices.size(); ++b)
            if (adjacent(vertices[a], vertices[b])) g.add_edge(a, b);
    return g;
}

Graph Graph::complete(std::size_t n) {
    Graph g(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph Graph::empty(std::size_t n) { return Graph(n); }

Graph Graph::path(std::size_t n) {
    Graph g(n);
    for (std::size_t u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
    return g;
}

Graph Graph::random(std::size_t n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("edge probability must be in [0, 1]");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    Graph g(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}

SetSystem neighborhood_system(const Graph& G) {
    std::vector<BitVec> sets;
    for (std::size_t v = 0; v < G.vertex_count(); ++v) sets.push_back(G.neighbors(v));
    return SetSystem(G.vertex_count(), std::move(sets), "neighborhoods");
}

// ---------------------------------------------------------------- TypeTree

std::size_t TypeTree::height() const {
    std::size_t h = 0;
    for (const auto& [eta, _] : labels_) h = std::max(h, eta.size() + 1);
    return h;
}

std::size_t TypeTree::nodes_at_level(std::size_t level) const {
    std::size_t c = 0;
    for (const auto& [eta, _] : labels_)
        if (eta.size() == level) ++c;
    return c;
}

TypeTree build_type_tree(const Graph& G, const std::vector<std::size_t>& order) {
    const std::size_t n = G.vertex_count();
    if (order.size() != n) throw InputError("insertion order must list every vertex once");
    std::vector<bool> seen(n, false);
    for (auto v : order) {
        if (v >= n || seen[v]) throw InputError("insertion order must be a permutation of the vertices");
        seen[v] = true;
    }
    TypeTree tree;
    for (auto v : order) {
        std::string eta;
        while (tree.contains(eta)) eta += G.adjacent(v, tree.at(eta)) ? '1' : '0';
        tree.insert(std::move(eta), v);
    }
    return tree;
}

TypeTree build_type_tree(const Graph& G) {
    std::vector<std::size_t> order(G.vertex_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return build_type_tree(G, order);
}

std::vector<std::size_t> random_order(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

namespace {

TypeTreeValidation reject(std::string message, std::vector<std::string> nodes = {}) {
    return TypeTreeValidation{false, std::move(message), std::move(nodes)};
}

std::string quoted(const std::string& eta) { return "\"" + eta + "\""; }

}  // namespace

TypeTreeValidation validate_type_tree(const Graph& G, const TypeTree& tree, bool require_all_vertices) {
    const std::size_t n = G.vertex_count();
    std::vector<bool> used(n, false);
    for (const auto& [eta, v] : tree.labels()) {
        if (eta.find_first_not_of("01") != std::string::npos) return reject("node " + quoted(eta) + " is not binary", {eta});
        if (v >= n) return reject("node " + quoted(eta) + " labeled with unknown vertex " + std::to_string(v), {eta});
        if (used[v]) return reject("vertex " + std::to_string(v) + " labels more than one node", {eta});
        used[v] = true;
        if (!eta.empty() && !tree.contains(eta.substr(0, eta.size() - 1)))
            return reject("node " + quoted(eta) + " has no parent", {eta});
    }
    if (require_all_vertices)
        for (std::size_t v = 0; v < n; ++v)
            if (!used[v]) return reject("vertex " + std::to_string(v) + " is not in the tree");

    // Condition (1): the branch digit of a child is its adjacency to the parent.
    for (const auto& [eta, v] : tree.labels()) {
        if (eta.empty()) continue;
        const std::string parent = eta.substr(0, eta.size() - 1);
        const bool want = eta.back() == '1';
        if (G.adjacent(tree.at(parent), v) != want)
            return reject("condition (1) fails at " + quoted(parent) + " -> " + quoted(eta), {parent, eta});
    }
    // Condition (2): given (1), a_eta ~ a_delta must equal delta's digit at |eta|.
    for (const auto& [delta, v] : tree.labels())
        for (std::size_t m = 0; m + 1 < delta.size(); ++m) {
            const std::string eta = delta.substr(0, m);
            if (G.adjacent(tree.at(eta), v) != (delta[m] == '1')) {
                const std::string mid = delta.substr(0, m + 1);
                return reject("condition (2) fails at " + quoted(eta) + ", " + quoted(mid) + ", " + quoted(delta),
                              {eta, mid, delta});
            }
        }
    return {};
}

bool is_full(const TypeTree& tree, std::size_t height) {
    if (height >= 63) return false;
    if (tree.size() != (std::size_t{1} << height) - 1) return false;
    for (const auto& [eta, _] : tree.labels())
        if (eta.size() >= height) return false;
    return true;  // prefix-closed set of the right size below the height is everything
}

// --------------------------------------------------------------- tree rank

namespace {

// full(P, t): some v in P roots a full type tree of height t inside P.
class RankSearch {
public:
    RankSearch(const Graph& G, std::uint64_t budget) : budget_(budget) {
        for (std::size_t v = 0; v < G.vertex_count(); ++v) {
            std::uint64_t m = 0;
            for (auto u : G.neighbors(v).indices()) m |= std::uint64_t{1} << u;
            nbr_.push_back(m);
        }
    }

    // nullopt when the call budget ran out.
    std::optional<bool> full(std::uint64_t P, std::size_t t) {
        if (t == 0) return true;
        if (t == 1) return P != 0;
        if (t >= 64 || static_cast<std::size_t>(std::popcount(P)) < (std::size_t{1} << t) - 1) return false;
        if (memo_.size() <= t) memo_.resize(t + 1);
        if (auto it = memo_[t].find(P); it != memo_[t].end()) return it->second;
        if (calls_++ >= budget_) return std::nullopt;
        bool found = false;
        for (std::uint64_t rest = P; rest && !found; rest &= rest - 1) {
            const auto v = static_cast<std::size_t>(std::countr_zero(rest));
            const std::uint64_t others = P & ~(std::uint64_t{1} << v);
            const auto left = full(others & ~nbr_[v], t - 1);
            if (!left) return std::nullopt;
            if (!*left) continue;
            const auto right = full(others & nbr_[v], t - 1);
            if (!right) return std::nullopt;
            found = *right;
        }
        memo_[t][P] = found;
        return found;
    }

    void build(std::uint64_t P, std::size_t t, const std::string& prefix, TypeTree& out) {
        if (t == 0) return;
        for (std::uint64_t rest = P; rest; rest &= rest - 1) {
            const auto v = static_cast<std::size_t>(std::countr_zero(rest));
            const std::uint64_t others = P & ~(std::uint64_t{1} << v);
            if (full(others & ~nbr_[v], t - 1).value_or(false) && full(others & nbr_[v], t - 1).value_or(false)) {
                out.insert(prefix, v);
                build(others & ~nbr_[v], t - 1, prefix + "0", out);
                build(others & nbr_[v], t - 1, prefix + "1", out);
                return;
            }
        }
    }

private:
    std::vector<std::uint64_t> nbr_;
    std::vector<std::unordered_map<std::uint64_t, bool>> memo_;
    std::uint64_t budget_;
    std::uint64_t calls_ = 0;
};

std::size_t floor_log2(std::size_t v) {
    std::size_t r = 0;
    while (v >>= 1) ++r;
    return r;
}

std::uint64_t vertex_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

constexpr std::uint64_t kUncappedBudget = ~std::uint64_t{0};
constexpr std::uint64_t kCappedBudget = 2'000'000;

}  // namespace

TreeRankResult tree_rank(const Graph& G, const Caps& caps) {
    const std::size_t n = G.vertex_count();
    TreeRankResult r;
    if (n == 0) {
        r.exact = true;
        return r;
    }
    // A full tree of height t has 2^t - 1 vertices.
    r.upper = floor_log2(n + 1);
    if (n <= caps.vc_universe) {
        const RankValue k = thicket_dimension(neighborhood_system(G));
        r.upper = std::min<std::size_t>(r.upper, static_cast<std::size_t>(k.value()) + 1);
    }
    if (n > 64) {
        r.lower = 1;
        r.exact = r.lower == r.upper;
        return r;
    }
    const bool capped = n > caps.tree_rank_vertices;
    RankSearch search(G, capped ? kCappedBudget : kUncappedBudget);
    r.lower = 1;
    r.exact = true;
    for (std::size_t t = 2; t <= r.upper; ++t) {
        const auto ok = search.full(vertex_mask(n), t);
        if (!ok) {
            r.exact = false;
            break;
        }
        if (!*ok) {
            r.upper = t - 1;
            break;
        }
        r.lower = t;
    }
    if (r.lower == r.upper) r.exact = true;
    return r;
}

std::optional<TypeTree> find_full_type_tree(const Graph& G, std::size_t t, const Caps& caps) {
    const std::size_t n = G.vertex_count();
    if (n > caps.tree_rank_vertices || n > 64) throw ResourceError("tree_rank_vertices", caps.tree_rank_vertices, n);
    TypeTree out;
    if (t == 0) return out;
    RankSearch search(G, kUncappedBudget);
    if (!search.full(vertex_mask(n), t).value_or(false)) return std::nullopt;
    search.build(vertex_mask(n), t, "", out);
    return out;
}

CliqueIndependent extract_clique_or_independent(const TypeTree& tree) {
    CliqueIndependent r;
    if (tree.size() == 0) return r;
    const std::string* deepest = nullptr;
    for (const auto& [eta, _] : tree.labels())
        if (!deepest || eta.size() > deepest->size()) deepest = &eta;
    r.branch = *deepest;
    for (std::size_t m = 0; m < r.branch.size(); ++m) {
        const std::size_t v = tree.at(r.branch.substr(0, m));
        (r.branch[m] == '1' ? r.clique : r.independent).push_back(v);
    }
    r.clique.push_back(tree.at(r.branch));
    r.independent.push_back(tree.at(r.branch));
    return r;
}

// ------------------------------------------------------------ height bound

HeightBoundReport check_height_bound(const Graph& G, const TypeTree& tree, const Caps& caps) {
    return check_height_bound(G, tree, tree_rank(G, caps));
}

HeightBoundReport check_height_bound(const Graph& G, const TypeTree& tree, const TreeRankResult& rank) {
    HeightBoundReport rep;
    rep.n = G.vertex_count();
    rep.h = tree.height();
    rep.rank_exact = rank.exact;
    rep.t = rank.lower;
    const std::size_t lo = rank.lower, hi = rank.exact ? rank.lower : rank.upper;
    bool any = false;
    for (std::size_t t = lo; t <= hi; ++t) {
        if (t < 2 || rep.h < 2 * t) continue;
        BigInt fact = 1;
        for (std::size_t i = 2; i + 2 <= t; ++i) fact *= i;
        const BigInt lhs = ipow(BigInt(rep.h - 1), t);
        const BigInt rhs = BigInt(rep.n) * fact;
        if (!any || lhs < rhs) {
            rep.t = t;
            rep.lhs = lhs;
            rep.rhs = rhs;
        }
        if (lhs < rhs) rep.pass = false;
        any = true;
    }
    rep.applicable = any;
    if (!any) {
        rep.reason = rank.exact ? "hypotheses not met: need t >= 2 and h >= 2t (t = " + std::to_string(rank.lower) +
                                      ", h = " + std::to_string(rep.h) + ")"
                                : "hypotheses not met for any t in [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "] (h = " + std::to_string(rep.h) + ")";
        rep.pass = true;
    }
    return rep;
}

}  // namespace shatterlab

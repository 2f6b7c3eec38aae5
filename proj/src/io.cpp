#include "shatterlab/io.hpp"

#include "shatterlab/errors.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace shatterlab::io {

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& ptr, const std::string& msg) {
    throw InputError(source + ":" + (ptr.empty() ? "/" : ptr) + ": " + msg);
}

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const Json& need(const Json& j, const std::string& key, const std::string& src, const std::string& ptr) {
    if (!j.is_object()) fail(src, ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(src, ptr, "missing field \"" + key + "\"");
    return *it;
}

std::uint64_t as_uint(const Json& v, const std::string& src, const std::string& ptr) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
        fail(src, ptr, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

double as_real(const Json& v, const std::string& src, const std::string& ptr) {
    if (!v.is_number()) fail(src, ptr, "expected a number");
    return v.get<double>();
}

std::string as_string(const Json& v, const std::string& src, const std::string& ptr) {
    if (!v.is_string()) fail(src, ptr, "expected a string");
    return v.get<std::string>();
}

const Json& as_array(const Json& v, const std::string& src, const std::string& ptr) {
    if (!v.is_array()) fail(src, ptr, "expected an array");
    return v;
}

Rational as_rational(const Json& v, const std::string& src, const std::string& ptr) {
    try {
        if (v.is_number_integer()) return Rational(v.get<long long>());
        if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const InputError& e) {
        fail(src, ptr, e.what());
    }
    fail(src, ptr, "expected a rational as a \"p/q\" string");
}

RationalVector as_rational_vector(const Json& v, const std::string& src, const std::string& ptr) {
    RationalVector out;
    const Json& a = as_array(v, src, ptr);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_rational(a[i], src, at(ptr, i)));
    return out;
}

template <class F>
auto rethrow_at(const std::string& src, const std::string& ptr, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ResourceError&) {
        throw;
    } catch (const InputError& e) {
        fail(src, ptr, e.what());
    }
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into line and column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        if (auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
        throw InputError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

// ------------------------------------------------------------ set systems

SetSystem set_system_from_json(const Json& j, const std::string& src) {
    const std::size_t n = as_uint(need(j, "universe", src, ""), src, "/universe");
    const Json& sets = as_array(need(j, "sets", src, ""), src, "/sets");
    std::vector<BitVec> bits;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const std::string ptr = at("/sets", i);
        const std::string s = as_string(sets[i], src, ptr);
        if (s.size() != n)
            fail(src, ptr, "set has length " + std::to_string(s.size()) + ", universe is " + std::to_string(n));
        bits.push_back(rethrow_at(src, ptr, [&] { return BitVec::from_string(s); }));
    }
    std::string name;
    if (auto it = j.find("name"); it != j.end()) name = as_string(*it, src, "/name");
    return SetSystem(n, std::move(bits), std::move(name));
}

Json to_json(const SetSystem& F) {
    Json j;
    j["universe"] = F.universe_size();
    j["sets"] = Json::array();
    for (const auto& s : F.sets()) j["sets"].push_back(s.to_string());
    if (!F.name().empty()) j["name"] = F.name();
    return j;
}

// --------------------------------------------------------------- geometry

PointArrangement arrangement_from_json(const Json& j, const std::string& src) {
    const std::size_t r = as_uint(need(j, "r", src, ""), src, "/r");
    std::vector<RationalVector> points;
    const Json& pts = as_array(need(j, "points", src, ""), src, "/points");
    for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(as_rational_vector(pts[i], src, at("/points", i)));
    std::vector<Halfspace> hs;
    const Json& hj = as_array(need(j, "halfspaces", src, ""), src, "/halfspaces");
    for (std::size_t i = 0; i < hj.size(); ++i) {
        const std::string ptr = at("/halfspaces", i);
        hs.push_back(Halfspace{as_rational_vector(need(hj[i], "normal", src, ptr), src, at(ptr, "normal")),
                               as_rational(need(hj[i], "offset", src, ptr), src, at(ptr, "offset"))});
    }
    return rethrow_at(src, "", [&] { return PointArrangement(r, std::move(points), std::move(hs)); });
}

Json to_json(const PointArrangement& arr) {
    Json j;
    j["r"] = arr.dimension();
    j["points"] = Json::array();
    for (const auto& p : arr.points()) {
        Json row = Json::array();
        for (const auto& c : p) row.push_back(format_rational(c));
        j["points"].push_back(row);
    }
    j["halfspaces"] = Json::array();
    for (const auto& h : arr.halfspaces()) {
        Json row;
        row["normal"] = Json::array();
        for (const auto& c : h.normal) row["normal"].push_back(format_rational(c));
        row["offset"] = format_rational(h.offset);
        j["halfspaces"].push_back(row);
    }
    return j;
}

std::vector<Line> lines_from_json(const Json& j, const std::string& src) {
    const Json& a = as_array(need(j, "lines", src, ""), src, "/lines");
    std::vector<Line> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto v = as_rational_vector(a[i], src, at("/lines", i));
        if (v.size() != 3) fail(src, at("/lines", i), "a line is [a, b, c] for a x + b y = c");
        out.push_back(Line{v[0], v[1], v[2]});
    }
    return out;
}

Json to_json(const std::vector<Line>& lines) {
    Json j;
    j["lines"] = Json::array();
    for (const auto& l : lines)
        j["lines"].push_back(Json::array({format_rational(l.a), format_rational(l.b), format_rational(l.c)}));
    return j;
}

// ------------------------------------------------------------------ graphs

Graph graph_from_json(const Json& j, const std::string& src) {
    const std::size_t n = as_uint(need(j, "vertices", src, ""), src, "/vertices");
    Graph g(n);
    const Json& edges = as_array(need(j, "edges", src, ""), src, "/edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string ptr = at("/edges", i);
        const Json& e = as_array(edges[i], src, ptr);
        if (e.size() != 2) fail(src, ptr, "an edge is a pair [u, v]");
        const auto u = as_uint(e[0], src, at(ptr, 0)), v = as_uint(e[1], src, at(ptr, 1));
        rethrow_at(src, ptr, [&] {
            g.add_edge(u, v);
            return 0;
        });
    }
    return g;
}

Json to_json(const Graph& G) {
    Json j;
    j["vertices"] = G.vertex_count();
    j["edges"] = Json::array();
    for (const auto& [u, v] : G.edges()) j["edges"].push_back(Json::array({u, v}));
    return j;
}

TypeTree type_tree_from_json(const Json& j, const std::string& src) {
    if (!j.is_object()) fail(src, "", "a type tree is an object mapping binary strings to vertices");
    std::map<std::string, std::size_t> labels;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string ptr = "/" + it.key();
        if (it.key().find_first_not_of("01") != std::string::npos) fail(src, ptr, "node names must be binary strings");
        labels[it.key()] = as_uint(it.value(), src, ptr);
    }
    return TypeTree(std::move(labels));
}

Json to_json(const TypeTree& tree) {
    Json j = Json::object();
    for (const auto& [eta, v] : tree.labels()) j[eta] = v;
    return j;
}

// ------------------------------------------------------------------ spaces

ProbSpace prob_space_from_json(const Json& j, const std::string& src) {
    const std::size_t N = as_uint(need(j, "points", src, ""), src, "/points");
    const auto w = as_rational_vector(need(j, "weights", src, ""), src, "/weights");
    if (w.size() != N)
        fail(src, "/weights", std::to_string(w.size()) + " weights for " + std::to_string(N) + " points");
    return rethrow_at(src, "/weights", [&] { return ProbSpace(w); });
}

Json to_json(const ProbSpace& space) {
    Json j;
    j["points"] = space.size();
    j["weights"] = Json::array();
    for (const auto& w : space.weights()) j["weights"].push_back(format_rational(w));
    return j;
}

// ------------------------------------------------------------ ban problems

namespace {

BanShape shape_from(const Json& j, const std::string& src, unsigned default_j = 2) {
    BanShape s;
    s.n = static_cast<unsigned>(as_uint(need(j, "n", src, ""), src, "/n"));
    s.k = static_cast<unsigned>(as_uint(need(j, "k", src, ""), src, "/k"));
    s.j = default_j;
    if (auto it = j.find("j"); it != j.end()) s.j = static_cast<unsigned>(as_uint(*it, src, "/j"));
    return s;
}

std::uint64_t opt_uint(const Json& j, const std::string& key, std::uint64_t dflt, const std::string& src) {
    auto it = j.find(key);
    return it == j.end() ? dflt : as_uint(*it, src, "/" + key);
}

RelaxedBanProblem from_generator(const Json& j, const std::string& src, const Caps& caps) {
    const std::string g = as_string(j["generator"], src, "/generator");
    auto run = [&](auto&& make) -> RelaxedBanProblem {
        return rethrow_at(src, "", [&]() -> RelaxedBanProblem { return make(); });
    };
    if (g == "parity") {
        const auto n = static_cast<unsigned>(as_uint(need(j, "n", src, ""), src, "/n"));
        return run([&] { return parity_problem(n).relaxed(); });
    }
    if (g == "from_vc") {
        const SetSystem F = set_system_from_json(need(j, "system", src, ""), src + ":/system");
        const auto m = static_cast<unsigned>(as_uint(need(j, "m", src, ""), src, "/m"));
        return run([&] { return from_vc(F, m, caps).relaxed(); });
    }
    if (g == "from_element_tree") {
        const SetSystem F = set_system_from_json(need(j, "system", src, ""), src + ":/system");
        const auto s = static_cast<unsigned>(opt_uint(j, "s", 1, src));
        const auto h = as_uint(need(j, "height", src, ""), src, "/height");
        const auto m = static_cast<unsigned>(as_uint(need(j, "m", src, ""), src, "/m"));
        const auto seed = opt_uint(j, "seed", 0, src);
        return run([&] {
            return from_element_tree(ElementTree::random(s, h, F.universe_size(), seed), F, m, caps).relaxed();
        });
    }
    if (g == "random" || g == "random_dense") {
        const BanShape shape = shape_from(j, src);
        const auto seed = opt_uint(j, "seed", 0, src);
        if (g == "random") {
            const double density = j.contains("density") ? as_real(j["density"], src, "/density") : 0.5;
            return run([&] { return random_problem(shape, density, seed).relaxed(); });
        }
        const auto keep = opt_uint(j, "keep", 1, src);
        return run([&] { return random_dense_problem(shape, keep, seed).relaxed(); });
    }
    if (g == "hitting") {
        const BanShape shape = shape_from(j, src);
        return run([&] {
            const auto hit = min_subcube_hitting(shape.n, shape.k, caps);
            return problem_from_hitting_set(shape.n, shape.k, hit.set).relaxed();
        });
    }
    if (g == "from_type_tree") {
        const Graph G = graph_from_json(need(j, "graph", src, ""), src + ":/graph");
        const auto t = static_cast<unsigned>(as_uint(need(j, "t", src, ""), src, "/t"));
        TypeTree tree = j.contains("tree") ? type_tree_from_json(j["tree"], src + ":/tree") : build_type_tree(G);
        std::optional<unsigned> length;
        if (j.contains("length")) length = static_cast<unsigned>(as_uint(j["length"], src, "/length"));
        return run([&] { return from_type_tree(G, tree, t, length, caps).relaxed(); });
    }
    fail(src, "/generator", "unknown generator \"" + g + "\"");
}

}  // namespace

RelaxedBanProblem relaxed_ban_problem_from_json(const Json& j, const std::string& src, const Caps& caps) {
    if (!j.is_object()) fail(src, "", "expected an object");
    if (j.contains("generator")) return from_generator(j, src, caps);
    const BanShape shape = shape_from(j, src);
    // Validate the shape first so the table size below is meaningful.
    rethrow_at(src, "", [&] { return RelaxedBanProblem(shape, {}, ""); });
    const SubsetIndex subsets(shape.n, shape.k);
    const std::uint64_t contexts = shape.contexts();
    const std::uint64_t total = subsets.size() * contexts;
    if (total > (std::uint64_t{1} << (caps.sequence_log2 + 2)))
        throw ResourceError("sequence_log2", caps.sequence_log2, 64);
    std::vector<BitVec> entries(total);
    std::vector<bool> have(total, false);
    const Json& bans = as_array(need(j, "bans", src, ""), src, "/bans");
    for (std::size_t i = 0; i < bans.size(); ++i) {
        const std::string ptr = at("/bans", i);
        const Json& S = as_array(need(bans[i], "S", src, ptr), src, at(ptr, "S"));
        std::uint64_t mask = 0;
        std::int64_t prev = -1;
        for (std::size_t q = 0; q < S.size(); ++q) {
            const auto p = as_uint(S[q], src, at(at(ptr, "S"), q));
            if (p >= shape.n) fail(src, at(at(ptr, "S"), q), "position " + std::to_string(p) + " >= n");
            if (static_cast<std::int64_t>(p) <= prev) fail(src, at(ptr, "S"), "positions must be strictly ascending");
            prev = static_cast<std::int64_t>(p);
            mask |= std::uint64_t{1} << p;
        }
        if (S.size() != shape.k) fail(src, at(ptr, "S"), "S must have exactly k = " + std::to_string(shape.k) + " positions");
        const std::size_t idx = subsets.index_of(mask);
        const std::string X = as_string(need(bans[i], "X", src, ptr), src, at(ptr, "X"));
        if (X.size() != shape.n - shape.k) fail(src, at(ptr, "X"), "X must have length n - k");
        const auto x = rethrow_at(src, at(ptr, "X"), [&] { return sequence_from_string(X, shape.j); });
        const std::size_t e = idx * contexts + x;
        if (have[e]) fail(src, ptr, "duplicate entry for this (S, X)");
        have[e] = true;
        BitVec b(shape.patterns());
        const Json& banned = as_array(need(bans[i], "banned", src, ptr), src, at(ptr, "banned"));
        for (std::size_t q = 0; q < banned.size(); ++q) {
            const std::string zp = at(at(ptr, "banned"), q);
            const std::string Z = as_string(banned[q], src, zp);
            if (Z.size() != shape.k) fail(src, zp, "banned pattern must have length k");
            b.set(rethrow_at(src, zp, [&] { return sequence_from_string(Z, shape.j); }));
        }
        entries[e] = std::move(b);
    }
    for (std::size_t e = 0; e < total; ++e)
        if (!have[e]) {
            std::string S;
            for (auto p : subsets.positions(e / contexts)) S += (S.empty() ? "" : ",") + std::to_string(p);
            fail(src, "/bans", "missing entry for S = [" + S + "], X = \"" +
                                   sequence_to_string(e % contexts, shape.n - shape.k, shape.j) + "\"");
        }
    return RelaxedBanProblem::from_entries(shape, std::move(entries), "file");
}

BanProblem ban_problem_from_json(const Json& j, const std::string& src, const Caps& caps) {
    auto relaxed = relaxed_ban_problem_from_json(j, src, caps);
    return rethrow_at(src, "/bans", [&] { return BanProblem(std::move(relaxed), caps); });
}

Json to_json(const RelaxedBanProblem& f, const Caps& caps) {
    f.materialize(caps);
    Json j;
    j["n"] = f.n();
    j["k"] = f.k();
    j["j"] = f.j();
    j["bans"] = Json::array();
    const auto& sub = f.subsets();
    for (std::size_t i = 0; i < sub.size(); ++i)
        for (std::uint64_t x = 0; x < f.shape().contexts(); ++x) {
            Json e;
            e["S"] = sub.positions(i);
            e["X"] = sequence_to_string(x, f.n() - f.k(), f.j());
            e["banned"] = Json::array();
            for (std::uint64_t z = 0; z < f.shape().patterns(); ++z)
                if (f.banned(i, x, z)) e["banned"].push_back(sequence_to_string(z, f.k(), f.j()));
            j["bans"].push_back(std::move(e));
        }
    return j;
}

Json to_json(const HereditaryWitness& w, const BanShape& shape) {
    Json j;
    j["S"] = w.S;
    j["assignments"] = Json::array();
    for (const auto& [z, x] : w.assignments) {
        Json a;
        a["Z"] = sequence_to_string(z, shape.k, shape.j);
        a["X"] = sequence_to_string(x, shape.n - shape.k, shape.j);
        j["assignments"].push_back(std::move(a));
    }
    return j;
}

// ----------------------------------------------------------------- reports

Json to_json(const BoundAuditReport& report) {
    Json arr = Json::array();
    for (const auto& row : report.rows) {
        Json r;
        r["bound"] = row.bound;
        r["params"] = Json::object();
        for (const auto& [k, v] : row.params) r["params"][k] = v;
        r["lhs"] = row.lhs;
        r["rhs"] = row.rhs;
        r["pass"] = row.pass;
        arr.push_back(std::move(r));
    }
    return arr;
}

std::string to_csv(const BoundAuditReport& report) {
    std::string out = "bound,params,lhs,rhs,pass\n";
    for (const auto& row : report.rows) {
        std::string params;
        for (const auto& [k, v] : row.params) params += (params.empty() ? "" : ";") + k + "=" + v;
        out += row.bound + "," + params + "," + row.lhs + "," + row.rhs + "," + (row.pass ? "true" : "false") + "\n";
    }
    return out;
}

std::string format_real(long double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", x);
    return buf;
}

Json to_json(const ExperimentReport& r) {
    Json j;
    j["experiment"] = r.experiment;
    j["mode"] = r.mode;
    j["n"] = r.n;
    j["epsilon"] = format_rational(r.epsilon);
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["exceedances"] = r.exceedances;
    j["empirical"] = format_rational(r.empirical);
    j["bound"] = format_real(r.bound);
    j["raw_bound"] = format_real(r.raw_bound);
    j["slack"] = format_real(r.slack);
    j["vacuous"] = r.vacuous;
    if (r.experiment == "vcthm") {
        j["rho"] = r.rho.str();
        j["rho_source"] = r.rho_source;
    }
    j["pass"] = r.pass;
    return j;
}

std::string trials_csv(const ExperimentReport& r) {
    std::string out = "trial,n,epsilon,deviation,exceeded\n";
    const std::string eps = format_rational(r.epsilon);
    for (const auto& row : r.rows)
        out += std::to_string(row.trial) + "," + std::to_string(r.n) + "," + eps + "," + format_rational(row.deviation) +
               "," + (row.exceeded ? "1" : "0") + "\n";
    return out;
}

}  // namespace shatterlab::io

#include "shatterlab/cli.hpp"

#include "shatterlab/banseq.hpp"
#include "shatterlab/dims.hpp"
#include "shatterlab/errors.hpp"
#include "shatterlab/geometry.hpp"
#include "shatterlab/io.hpp"
#include "shatterlab/thicketvc.hpp"
#include "shatterlab/typetree.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <limits>
#include <optional>
#include <ostream>

namespace shatterlab::cli {

using io::Json;

namespace {

struct Globals {
    std::string format = "json";
    std::uint64_t seed = 0;
    std::optional<std::size_t> cap;
    bool quiet = false;
    unsigned threads = 1;

    Caps caps() const { return cap ? Caps::with_override(*cap) : Caps::from_env(); }
    bool csv() const { return format == "csv"; }
};

struct Options {
    std::string file, kind = "vc", tree_file, space_file, system_file, graph_file, set_bits, epsilon = "1/10";
    std::string generator, mode = "tree", validate_file, arrangement_file, name;
    unsigned s = 1, r = 1, k = 2, j = 2, m = 1, t = 2;
    std::size_t n = 0, d = 0, height = 1, trials = 1000, uniform = 0, random_lines = 0, keep = 1;
    double density = 0.5, p = 0.5;
    bool inject_false_bound = false, random_order = false, witness = false;
    std::optional<std::size_t> length;
};

Json number_or_string(const BigInt& v) {
    if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max())) return static_cast<std::uint64_t>(v);
    return v.str();
}

Json rank_json(const RankValue& v) {
    if (v.is_neg_inf()) return "-inf";
    return v.value();
}

void emit(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

SetSystem load_system(const std::string& path) { return io::set_system_from_json(io::read_json_file(path), path); }

Graph load_graph(const std::string& path) { return io::graph_from_json(io::read_json_file(path), path); }

ProbSpace load_space(const Options& o) {
    if (!o.space_file.empty()) return io::prob_space_from_json(io::read_json_file(o.space_file), o.space_file);
    if (o.uniform > 0) return ProbSpace::uniform(o.uniform);
    throw InputError("give a probability space with --space FILE or --uniform N");
}

BitVec parse_subset(const std::string& bits, std::size_t N) {
    if (bits.size() != N)
        throw InputError("--set has length " + std::to_string(bits.size()) + ", space has " + std::to_string(N) +
                         " points");
    try {
        return BitVec::from_string(bits);
    } catch (const InputError& e) {
        throw InputError(std::string("--set: ") + e.what());
    }
}

TypeTree tree_for(const Graph& G, const Options& o, const Globals& g) {
    if (!o.tree_file.empty()) {
        TypeTree tree = io::type_tree_from_json(io::read_json_file(o.tree_file), o.tree_file);
        if (auto v = validate_type_tree(G, tree); !v.ok) throw InputError(o.tree_file + ": " + v.message);
        return tree;
    }
    if (o.random_order) return build_type_tree(G, random_order(G.vertex_count(), g.seed));
    return build_type_tree(G);
}

// ------------------------------------------------------------------- sys

int sys_dim(const Options& o, const Globals& g, std::ostream& out) {
    const SetSystem F = load_system(o.file);
    const Caps caps = g.caps();
    Json j;
    if (o.kind == "vc")
        j["dimension"] = rank_json(vc_dimension(F, caps));
    else if (o.kind == "thicket")
        j["dimension"] = rank_json(thicket_dimension(F));
    else if (o.kind == "op")
        j["dimension"] = rank_json(op_rank(F, o.s, caps));
    else {
        j["profile"] = Json::array();
        for (const auto& v : rank_profile(F, o.s, caps)) j["profile"].push_back(rank_json(v));
    }
    if (g.csv()) {
        if (j.contains("dimension")) {
            out << "dimension\n" << (j["dimension"].is_string() ? j["dimension"].get<std::string>() : j["dimension"].dump()) << '\n';
        } else {
            out << "r,rank\n";
            for (std::size_t i = 0; i < j["profile"].size(); ++i) {
                const auto& v = j["profile"][i];
                out << i + 1 << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
            }
        }
    } else {
        emit(out, j);
    }
    return kOk;
}

int sys_shatter(const Options& o, const Globals& g, std::ostream& out) {
    const SetSystem F = load_system(o.file);
    const Caps caps = g.caps();
    std::uint64_t v = 0;
    if (o.kind == "vc") {
        if (o.n > F.universe_size()) throw InputError("--n exceeds the universe size");
        v = vc_shatter_function(F, o.n, caps);
    } else if (o.kind == "thicket") {
        v = thicket_shatter(F, o.n);
    } else {
        v = op_shatter(F, o.s, o.n, caps);
    }
    if (g.csv())
        out << "shatter\n" << v << '\n';
    else
        emit(out, Json{{"shatter", v}});
    return kOk;
}

int sys_audit(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const SetSystem F = load_system(o.file);
    BoundAuditReport report = audit_bounds(F, o.s, o.r, o.n, g.caps());
    if (o.inject_false_bound) report.rows.push_back(BoundRow{"injected_false_bound", {}, "1", "0", "<=", false});
    if (g.csv())
        out << io::to_csv(report);
    else
        emit(out, io::to_json(report));
    for (const auto* row : report.failures()) err << "FAIL " << row->bound << ": " << row->lhs << " > " << row->rhs << '\n';
    return report.all_pass() ? kOk : kVerificationFailed;
}

int sys_gen(const Options& o, const Globals&, std::ostream& out) {
    SetSystem F;
    if (o.kind == "powerset")
        F = gen::powerset(o.n);
    else if (o.kind == "singletons_with_empty")
        F = gen::singletons_with_empty(o.n);
    else if (o.kind == "thresholds")
        F = gen::thresholds(o.n);
    else if (o.kind == "intervals")
        F = gen::intervals(o.n);
    else if (o.kind == "all_subsets_of_size_at_most")
        F = gen::all_subsets_of_size_at_most(o.n, o.d);
    else if (o.kind == "halfspace_incidence" || o.kind == "halfspace_dual") {
        if (o.arrangement_file.empty()) throw InputError("--arrangement FILE is required for " + o.kind);
        const auto arr = io::arrangement_from_json(io::read_json_file(o.arrangement_file), o.arrangement_file);
        F = o.kind == "halfspace_incidence" ? halfspace_incidence(arr) : halfspace_dual(arr);
    } else {
        throw InputError("unknown set-system kind \"" + o.kind + "\"");
    }
    if (!o.name.empty()) F.set_name(o.name);
    emit(out, io::to_json(F));
    return kOk;
}

// ------------------------------------------------------------------- ban

BanProblem load_problem(const std::string& path, const Caps& caps) {
    return io::ban_problem_from_json(io::read_json_file(path), path, caps);
}

int ban_solve(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const Caps caps = g.caps();
    const BanProblem f = load_problem(o.file, caps);
    const SolveResult res = solutions(f, caps);
    const BigInt trivial = trivial_upper_bound(f.shape());
    const bool ok = BigInt(res.solutions.size()) <= trivial;
    if (g.csv()) {
        for (auto c : res.solutions) out << sequence_to_string(c, f.n(), f.j()) << '\n';
    } else {
        Json j;
        j["n"] = f.n();
        j["k"] = f.k();
        j["j"] = f.j();
        j["solution_count"] = res.solutions.size();
        j["banned_count"] = res.banned;
        j["trivial_upper_bound"] = number_or_string(trivial);
        j["solutions"] = Json::array();
        for (auto c : res.solutions) j["solutions"].push_back(sequence_to_string(c, f.n(), f.j()));
        emit(out, j);
    }
    if (!ok) err << "FAIL solution count exceeds (j^k - 1) j^(n-k)\n";
    return ok ? kOk : kVerificationFailed;
}

int ban_hereditary(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const Caps caps = g.caps();
    const BanProblem f = load_problem(o.file, caps);
    const MainTheoremReport rep = verify_main_theorem(f, caps);
    bool ok = rep.pass();
    Json j;
    j["hereditary"] = rep.hereditary;
    j["independent"] = is_independent(f, caps);
    if (rep.witness) {
        const bool valid = validate_witness(f, *rep.witness);
        ok = ok && valid;
        j["witness"] = io::to_json(*rep.witness, f.shape());
        j["witness_valid"] = valid;
        if (!valid) err << "FAIL witness does not satisfy the first-difference condition\n";
    } else {
        j["witness"] = nullptr;
    }
    j["solutions"] = rep.solutions;
    j["bound"] = number_or_string(rep.bound);
    j["within_bound"] = rep.within_bound;
    if (g.csv())
        out << "hereditary,solutions,bound,within_bound\n"
            << (rep.hereditary ? "true" : "false") << ',' << rep.solutions << ',' << rep.bound.str() << ','
            << (rep.within_bound ? "true" : "false") << '\n';
    else
        emit(out, j);
    if (rep.hereditary && !rep.within_bound) err << "FAIL hereditary problem exceeds the solution bound\n";
    return ok ? kOk : kVerificationFailed;
}

int ban_reduce(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const Caps caps = g.caps();
    const BanProblem f = load_problem(o.file, caps);
    if (o.kind == "hat") {
        emit(out, io::to_json(reduce_hat(f), caps));
        return kOk;
    }
    if (o.kind == "prime") {
        emit(out, io::to_json(reduce_prime(f), caps));
        return kOk;
    }
    if (o.kind != "counting") throw InputError("--kind must be hat, prime or counting");
    const CountingReport rep = check_counting_inequality(f, caps);
    Json j;
    j["banned"] = rep.banned;
    j["banned_hat"] = rep.banned_hat;
    j["banned_prime"] = rep.banned_prime;
    j["prime_defined"] = rep.prime_defined;
    j["j"] = rep.j;
    j["holds"] = rep.holds;
    if (g.csv())
        out << "banned,banned_hat,banned_prime,j,holds\n"
            << rep.banned << ',' << rep.banned_hat << ',' << rep.banned_prime << ',' << rep.j << ','
            << (rep.holds ? "true" : "false") << '\n';
    else
        emit(out, j);
    if (!rep.holds) err << "FAIL B(f) < B(hat) + (j - 1) B(prime)\n";
    return rep.holds ? kOk : kVerificationFailed;
}

int ban_maxsol(const Options& o, const Globals& g, std::ostream& out) {
    const auto hit = min_subcube_hitting(static_cast<unsigned>(o.n), o.k, g.caps());
    const std::uint64_t max = (std::uint64_t{1} << o.n) - hit.min_size;
    if (g.csv()) {
        out << "max_solutions,min_hitting\n" << max << ',' << hit.min_size << '\n';
    } else {
        Json j;
        j["max_solutions"] = max;
        j["min_hitting"] = hit.min_size;
        emit(out, j);
    }
    return kOk;
}

int ban_gen(const Options& o, const Globals& g, std::ostream& out) {
    const Caps caps = g.caps();
    Json spec;
    if (!o.file.empty()) {
        spec = io::read_json_file(o.file);
    } else {
        if (o.generator.empty()) throw InputError("give --generator NAME or a generator FILE");
        spec["generator"] = o.generator;
        spec["n"] = o.n;
        spec["k"] = o.k;
        spec["j"] = o.j;
        spec["m"] = o.m;
        spec["s"] = o.s;
        spec["t"] = o.t;
        spec["height"] = o.height;
        spec["density"] = o.density;
        spec["keep"] = o.keep;
        spec["seed"] = g.seed;
        if (o.length) spec["length"] = *o.length;
        if (!o.system_file.empty()) spec["system"] = io::read_json_file(o.system_file);
        if (!o.graph_file.empty()) spec["graph"] = io::read_json_file(o.graph_file);
        if (!o.tree_file.empty()) spec["tree"] = io::read_json_file(o.tree_file);
    }
    const auto f = io::ban_problem_from_json(spec, o.file.empty() ? "generator" : o.file, caps);
    emit(out, io::to_json(f.relaxed(), caps));
    return kOk;
}

// ----------------------------------------------------------------- graph

int graph_typetree(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const Graph G = load_graph(o.file);
    if (!o.validate_file.empty()) {
        const TypeTree tree = io::type_tree_from_json(io::read_json_file(o.validate_file), o.validate_file);
        const auto v = validate_type_tree(G, tree);
        Json j;
        j["valid"] = v.ok;
        j["message"] = v.message;
        j["nodes"] = v.nodes;
        emit(out, j);
        if (!v.ok) err << "FAIL " << v.message << '\n';
        return v.ok ? kOk : kVerificationFailed;
    }
    const TypeTree tree = tree_for(G, o, g);
    const auto v = validate_type_tree(G, tree);
    if (!v.ok) {
        err << "FAIL built tree is invalid: " << v.message << '\n';
        return kVerificationFailed;
    }
    emit(out, io::to_json(tree));
    return kOk;
}

int graph_treerank(const Options& o, const Globals& g, std::ostream& out) {
    const Graph G = load_graph(o.file);
    const Caps caps = g.caps();
    const auto r = tree_rank(G, caps);
    Json j;
    j["tree_rank"] = r.value();
    j["lower"] = r.lower;
    j["upper"] = r.upper;
    j["exact"] = r.exact;
    if (o.witness && r.exact && G.vertex_count() <= caps.tree_rank_vertices) {
        if (auto tree = find_full_type_tree(G, r.value(), caps)) j["witness"] = io::to_json(*tree);
    }
    if (g.csv())
        out << "tree_rank,lower,upper,exact\n"
            << r.value() << ',' << r.lower << ',' << r.upper << ',' << (r.exact ? "true" : "false") << '\n';
    else
        emit(out, j);
    return kOk;
}

int graph_extract(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const Graph G = load_graph(o.file);
    const TypeTree tree = tree_for(G, o, g);
    const auto ci = extract_clique_or_independent(tree);
    bool clique_ok = true, indep_ok = true;
    for (std::size_t a = 0; a < ci.clique.size(); ++a)
        for (std::size_t b = a + 1; b < ci.clique.size(); ++b) clique_ok = clique_ok && G.adjacent(ci.clique[a], ci.clique[b]);
    for (std::size_t a = 0; a < ci.independent.size(); ++a)
        for (std::size_t b = a + 1; b < ci.independent.size(); ++b)
            indep_ok = indep_ok && !G.adjacent(ci.independent[a], ci.independent[b]);
    const std::size_t h = tree.height();
    const bool big_enough = 2 * std::max(ci.clique.size(), ci.independent.size()) >= h;
    Json j;
    j["height"] = h;
    j["branch"] = ci.branch;
    j["clique"] = ci.clique;
    j["independent"] = ci.independent;
    j["clique_valid"] = clique_ok;
    j["independent_valid"] = indep_ok;
    j["size_at_least_half_height"] = big_enough;
    emit(out, j);
    const bool ok = clique_ok && indep_ok && big_enough;
    if (!ok) err << "FAIL extracted sets do not verify\n";
    return ok ? kOk : kVerificationFailed;
}

int graph_heightcheck(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const Graph G = load_graph(o.file);
    const TypeTree tree = tree_for(G, o, g);
    const auto rep = check_height_bound(G, tree, g.caps());
    Json j;
    j["applicable"] = rep.applicable;
    if (!rep.applicable) j["reason"] = rep.reason;
    j["n"] = rep.n;
    j["t"] = rep.t;
    j["h"] = rep.h;
    j["rank_exact"] = rep.rank_exact;
    if (rep.applicable) {
        j["lhs"] = rep.lhs.str();
        j["rhs"] = rep.rhs.str();
    }
    j["pass"] = rep.pass;
    emit(out, j);
    if (!rep.pass) err << "FAIL (h - 1)^t < n (t - 2)!\n";
    return rep.pass ? kOk : kVerificationFailed;
}

int graph_gen(const Options& o, const Globals& g, std::ostream& out) {
    Graph G;
    if (o.kind == "random")
        G = Graph::random(o.n, o.p, g.seed);
    else if (o.kind == "complete")
        G = Graph::complete(o.n);
    else if (o.kind == "empty")
        G = Graph::empty(o.n);
    else if (o.kind == "path")
        G = Graph::path(o.n);
    else
        throw InputError("unknown graph kind \"" + o.kind + "\"");
    emit(out, io::to_json(G));
    return kOk;
}

// -------------------------------------------------------------------- mc

ExperimentConfig config_from(const Options& o, const Globals& g) {
    ExperimentConfig c;
    c.n = o.n;
    c.epsilon = parse_rational(o.epsilon);
    c.trials = o.trials;
    c.seed = g.seed;
    c.threads = g.threads;
    return c;
}

int report_out(const ExperimentReport& rep, const Globals& g, std::ostream& out, std::ostream& err) {
    if (g.csv())
        out << io::trials_csv(rep);
    else
        emit(out, io::to_json(rep));
    if (!g.quiet)
        err << rep.experiment << ": " << rep.exceedances << "/" << rep.trials << " exceedances, bound "
            << io::format_real(rep.bound) << (rep.vacuous ? " (vacuous)" : "") << '\n';
    if (!rep.pass) err << "FAIL empirical rate exceeds bound + slack\n";
    return rep.pass ? kOk : kVerificationFailed;
}

int mc_weaklaw(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const ProbSpace space = load_space(o);
    const BitVec S = parse_subset(o.set_bits, space.size());
    if (o.mode != "tree" && o.mode != "tuple") throw InputError("--mode must be tree or tuple");
    const auto rep = run_weak_law(space, S, config_from(o, g), o.mode == "tree" ? SampleMode::Tree : SampleMode::Tuple);
    return report_out(rep, g, out, err);
}

int mc_vcthm(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const ProbSpace space = load_space(o);
    if (o.system_file.empty()) throw InputError("--system FILE is required");
    const SetSystem F = load_system(o.system_file);
    return report_out(run_vc_theorem(space, F, config_from(o, g)), g, out, err);
}

int mc_expect(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    const ProbSpace space = load_space(o);
    const BitVec S = parse_subset(o.set_bits, space.size());
    const Rational e = exact_expectation(space, S, o.n, g.caps());
    const Rational mu = space.measure(S);
    Json j;
    j["expectation"] = format_rational(e);
    j["measure"] = format_rational(mu);
    j["equal"] = e == mu;
    emit(out, j);
    if (e != mu) err << "FAIL expectation differs from the measure\n";
    return e == mu ? kOk : kVerificationFailed;
}

// ------------------------------------------------------------------ geom

int geom_regions(const Options& o, const Globals& g, std::ostream& out) {
    const BigInt v = region_count_general_position(o.r, o.n);
    if (g.csv())
        out << "regions\n" << v.str() << '\n';
    else
        emit(out, Json{{"regions", number_or_string(v)}});
    return kOk;
}

int geom_cells(const Options& o, const Globals& g, std::ostream& out, std::ostream& err) {
    std::vector<Line> lines;
    if (!o.file.empty())
        lines = io::lines_from_json(io::read_json_file(o.file), o.file);
    else
        lines = gen::random_general_position_lines(o.random_lines, g.seed);
    const BigInt cells = line_arrangement_cells(lines);
    const BigInt expected = region_count_general_position(2, lines.size());
    Json j;
    j["lines"] = lines.size();
    j["cells"] = number_or_string(cells);
    j["expected"] = number_or_string(expected);
    j["match"] = cells == expected;
    emit(out, j);
    if (cells != expected) err << "FAIL cell count differs from sum_{i<=2} C(s,i)\n";
    return cells == expected ? kOk : kVerificationFailed;
}

// Index of the first argument CLI11 left unconsumed.
std::optional<std::size_t> position_of(const std::vector<std::string>& args, const std::string& token) {
    auto it = std::find(args.begin(), args.end(), token);
    if (it == args.end()) return std::nullopt;
    return static_cast<std::size_t>(it - args.begin()) + 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Globals g;
    Options o;
    CLI::App app{"Exact set-system dimensions, banned sequence problems, type trees and test-tree experiments",
                 "shatterlab"};
    app.fallthrough();
    app.allow_extras();
    app.require_subcommand(1);
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", g.seed, "Seed for every random choice");
    app.add_option("--cap", g.cap, "Override every size cap (also SHATTERLAB_CAP)");
    app.add_flag("--quiet", g.quiet, "Suppress diagnostics on stderr");
    app.add_option("--threads", g.threads, "Worker threads for Monte Carlo trials (0 = all cores)");

    auto group = [&](const std::string& name, const std::string& desc) {
        auto* sub = app.add_subcommand(name, desc);
        sub->require_subcommand(1);
        return sub;
    };
    auto file_arg = [&](CLI::App* c, bool required = true) {
        auto* opt = c->add_option("file", o.file, "Input file");
        if (required) opt->required();
    };

    // sys
    auto* sys = group("sys", "Set systems: dimensions, shatter functions, bound audits, generators");
    auto* sys_dim_c = sys->add_subcommand("dim", "VC, thicket or op_s dimension");
    sys_dim_c->add_option("--kind", o.kind)->check(CLI::IsMember({"vc", "thicket", "op", "profile"}));
    sys_dim_c->add_option("--s", o.s)->check(CLI::PositiveNumber);
    file_arg(sys_dim_c);
    auto* sys_shatter_c = sys->add_subcommand("shatter", "Shatter function value at height n");
    sys_shatter_c->add_option("--kind", o.kind)->check(CLI::IsMember({"vc", "thicket", "op"}));
    sys_shatter_c->add_option("--s", o.s)->check(CLI::PositiveNumber);
    sys_shatter_c->add_option("--n", o.n)->required();
    file_arg(sys_shatter_c);
    auto* sys_audit_c = sys->add_subcommand("audit", "Check every shatter-function bound for heights 0..n");
    sys_audit_c->add_option("--s", o.s)->required()->check(CLI::PositiveNumber);
    sys_audit_c->add_option("--r", o.r)->required()->check(CLI::PositiveNumber);
    sys_audit_c->add_option("--n", o.n)->required();
    sys_audit_c->add_flag("--inject-false-bound", o.inject_false_bound, "Append a failing row (tests the exit path)");
    file_arg(sys_audit_c);
    auto* sys_gen_c = sys->add_subcommand("gen", "Emit a generated set system");
    sys_gen_c->add_option("--kind", o.kind)->required();
    sys_gen_c->add_option("--n", o.n);
    sys_gen_c->add_option("--d", o.d);
    sys_gen_c->add_option("--arrangement", o.arrangement_file);
    sys_gen_c->add_option("--name", o.name);

    // ban
    auto* ban = group("ban", "Banned sequence problems");
    auto* ban_solve_c = ban->add_subcommand("solve", "Enumerate solutions");
    file_arg(ban_solve_c);
    auto* ban_her_c = ban->add_subcommand("hereditary", "Hereditary check with witness and solution bound");
    file_arg(ban_her_c);
    auto* ban_reduce_c = ban->add_subcommand("reduce", "hat / prime reductions and the counting inequality");
    ban_reduce_c->add_option("--kind", o.kind)->required()->check(CLI::IsMember({"hat", "prime", "counting"}));
    file_arg(ban_reduce_c);
    auto* ban_maxsol_c = ban->add_subcommand("maxsol", "Maximum solutions of a binary k-fold problem of length n");
    ban_maxsol_c->add_option("--n", o.n)->required();
    ban_maxsol_c->add_option("--k", o.k)->required();
    auto* ban_gen_c = ban->add_subcommand("gen", "Emit an explicit problem from a generator");
    ban_gen_c->add_option("--generator", o.generator);
    ban_gen_c->add_option("--n", o.n);
    ban_gen_c->add_option("--k", o.k);
    ban_gen_c->add_option("--j", o.j);
    ban_gen_c->add_option("--m", o.m);
    ban_gen_c->add_option("--s", o.s);
    ban_gen_c->add_option("--t", o.t);
    ban_gen_c->add_option("--height", o.height);
    ban_gen_c->add_option("--density", o.density);
    ban_gen_c->add_option("--keep", o.keep);
    ban_gen_c->add_option("--length", o.length);
    ban_gen_c->add_option("--system", o.system_file);
    ban_gen_c->add_option("--graph", o.graph_file);
    ban_gen_c->add_option("--tree", o.tree_file);
    file_arg(ban_gen_c, false);

    // graph
    auto* graph = group("graph", "Graphs and type trees");
    auto* g_tt = graph->add_subcommand("typetree", "Build (or --validate) a type tree");
    g_tt->add_flag("--random-order", o.random_order, "Insert vertices in a seeded random order");
    g_tt->add_option("--validate", o.validate_file, "Type tree file to validate");
    file_arg(g_tt);
    auto* g_rank = graph->add_subcommand("treerank", "Tree rank (exact up to the vertex cap)");
    g_rank->add_flag("--witness", o.witness, "Include a full type tree of that height");
    file_arg(g_rank);
    auto* g_ex = graph->add_subcommand("extract", "Clique or independent set from a deepest branch");
    g_ex->add_option("--tree", o.tree_file);
    g_ex->add_flag("--random-order", o.random_order);
    file_arg(g_ex);
    auto* g_hc = graph->add_subcommand("heightcheck", "Check (h-1)^t >= n (t-2)!");
    g_hc->add_option("--tree", o.tree_file);
    g_hc->add_flag("--random-order", o.random_order);
    file_arg(g_hc);
    auto* g_gen = graph->add_subcommand("gen", "Emit a generated graph");
    g_gen->add_option("--kind", o.kind)->required()->check(CLI::IsMember({"random", "complete", "empty", "path"}));
    g_gen->add_option("--n", o.n)->required();
    g_gen->add_option("--p", o.p);

    // mc
    auto* mc = group("mc", "Test-tree Monte Carlo experiments");
    auto space_opts = [&](CLI::App* c) {
        c->add_option("--space", o.space_file, "Probability space file");
        c->add_option("--uniform", o.uniform, "Uniform space on N points");
    };
    auto* mc_wl = mc->add_subcommand("weaklaw", "Weak law of large numbers audit");
    space_opts(mc_wl);
    mc_wl->add_option("--set", o.set_bits, "Subset as a bit string")->required();
    mc_wl->add_option("--n", o.n)->required();
    mc_wl->add_option("--epsilon", o.epsilon)->required();
    mc_wl->add_option("--trials", o.trials);
    mc_wl->add_option("--mode", o.mode)->check(CLI::IsMember({"tree", "tuple"}));
    auto* mc_vc = mc->add_subcommand("vcthm", "Uniform deviation audit against 8 rho(n) exp(-n eps^2/32)");
    space_opts(mc_vc);
    mc_vc->add_option("--system", o.system_file)->required();
    mc_vc->add_option("--n", o.n)->required();
    mc_vc->add_option("--epsilon", o.epsilon)->required();
    mc_vc->add_option("--trials", o.trials);
    auto* mc_ex = mc->add_subcommand("expect", "Exact expectation of the test estimate");
    space_opts(mc_ex);
    mc_ex->add_option("--set", o.set_bits)->required();
    mc_ex->add_option("--n", o.n)->required();

    // geom
    auto* geom = group("geom", "Hyperplane arrangements");
    auto* geom_reg = geom->add_subcommand("regions", "sum_{i<=r} C(s,i)");
    geom_reg->add_option("--r", o.r)->required();
    geom_reg->add_option("--s", o.n)->required();
    auto* geom_cells_c = geom->add_subcommand("cells", "Cell count of a line arrangement");
    geom_cells_c->add_option("--random", o.random_lines, "Use S seeded general-position lines");
    file_arg(geom_cells_c, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        std::vector<std::string> extras = app.remaining(true);
        if (!extras.empty()) {
            const auto pos = position_of(args, extras.front());
            err << "error: argument " << (pos ? std::to_string(*pos) : std::string("?")) << " ('" << extras.front()
                << "'): unrecognized\n";
            return kInvalidInput;
        }
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        if (sys_dim_c->parsed()) return sys_dim(o, g, out);
        if (sys_shatter_c->parsed()) return sys_shatter(o, g, out);
        if (sys_audit_c->parsed()) return sys_audit(o, g, out, err);
        if (sys_gen_c->parsed()) return sys_gen(o, g, out);
        if (ban_solve_c->parsed()) return ban_solve(o, g, out, err);
        if (ban_her_c->parsed()) return ban_hereditary(o, g, out, err);
        if (ban_reduce_c->parsed()) return ban_reduce(o, g, out, err);
        if (ban_maxsol_c->parsed()) return ban_maxsol(o, g, out);
        if (ban_gen_c->parsed()) return ban_gen(o, g, out);
        if (g_tt->parsed()) return graph_typetree(o, g, out, err);
        if (g_rank->parsed()) return graph_treerank(o, g, out);
        if (g_ex->parsed()) return graph_extract(o, g, out, err);
        if (g_hc->parsed()) return graph_heightcheck(o, g, out, err);
        if (g_gen->parsed()) return graph_gen(o, g, out);
        if (mc_wl->parsed()) return mc_weaklaw(o, g, out, err);
        if (mc_vc->parsed()) return mc_vcthm(o, g, out, err);
        if (mc_ex->parsed()) return mc_expect(o, g, out, err);
        if (geom_reg->parsed()) return geom_regions(o, g, out);
        if (geom_cells_c->parsed()) return geom_cells(o, g, out, err);
        err << "error: no command given\n";
        return kInvalidInput;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kResourceCap;
    } catch (const TreeRankExceeded& e) {
        emit(out, Json{{"counterexample", io::to_json(e.counterexample())}});
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
}

}  // namespace shatterlab::cli

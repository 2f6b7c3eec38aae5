// One line per acceptance criterion; exit status 1 if any criterion fails.

#include "oracles.hpp"
#include "shatterlab/banseq.hpp"
#include "shatterlab/cli.hpp"
#include "shatterlab/dims.hpp"
#include "shatterlab/geometry.hpp"
#include "shatterlab/io.hpp"
#include "shatterlab/thicketvc.hpp"
#include "shatterlab/typetree.hpp"
#include "zoo.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using namespace shatterlab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

struct CliResult {
    int code;
    std::string out, err;
};

CliResult cli_run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "shatterlab_acceptance";
    std::filesystem::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p) << content;
    return p.string();
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// ------------------------------------------------------------------- AC1

Outcome ac1() {
    Outcome o;
    for (unsigned n = 1; n <= 10; ++n) {
        const auto file = temp_file("parity" + std::to_string(n) + ".json",
                                    R"({"generator":"parity","n":)" + std::to_string(n) + "}");
        auto solve = cli_run({"ban", "solve", file});
        o.require(solve.code == 0, "ban solve failed for n = " + std::to_string(n));
        if (solve.code != 0) continue;
        auto sj = io::parse_json(solve.out, "solve");
        o.require(sj["solution_count"] == (std::uint64_t{1} << (n - 1)),
                  "n = " + std::to_string(n) + ": " + sj["solution_count"].dump() + " solutions");

        auto her = cli_run({"ban", "hereditary", file});
        o.require(her.code == 0, "ban hereditary failed for n = " + std::to_string(n));
        if (her.code != 0) continue;
        auto hj = io::parse_json(her.out, "hereditary");
        if (n == 1) {
            // A 1-fold problem of length 1 has k = n: its one ban set is nonempty, so it is hereditary.
            o.require(hj["hereditary"] == true, "n = 1 reported as not hereditary");
        } else {
            o.require(hj["hereditary"] == false, "n = " + std::to_string(n) + " reported hereditary");
            o.require(hj["witness_valid"] == true, "n = " + std::to_string(n) + ": witness rejected");
        }
    }
    if (o.pass) o.detail = "2^(n-1) solutions for n = 1..10; not hereditary with a valid witness for n = 2..10 (n = 1 has k = n)";
    return o;
}

// ------------------------------------------------------------------- AC2

Outcome ac2() {
    Outcome o;
    auto r = cli_run({"ban", "maxsol", "--n", "4", "--k", "2"});
    o.require(r.code == 0, "exit code " + std::to_string(r.code));
    if (r.code == 0) {
        auto j = io::parse_json(r.out, "maxsol");
        o.require(j["min_hitting"] == 5, "min hitting " + j["min_hitting"].dump());
        o.require(j["max_solutions"] == 11, "max solutions " + j["max_solutions"].dump());
        if (o.pass) o.detail = r.out.substr(0, r.out.find('\n'));
    }
    return o;
}

// ------------------------------------------------------------------- AC3

Outcome ac3() {
    Outcome o;
    std::mt19937_64 rng(0xAC3);
    std::size_t from_vc_count = 0, from_tree_count = 0, random_count = 0, rejected = 0, tight = 0;
    auto audit = [&](const RelaxedBanProblem& f, const std::string& origin) {
        auto rep = verify_main_theorem(f);
        o.require(rep.hereditary, origin + " problem is not hereditary");
        o.require(rep.within_bound, origin + " problem exceeds the bound: " + std::to_string(rep.solutions) + " > " +
                                        rep.bound.str());
        tight += BigInt(rep.solutions) == rep.bound;
    };
    while (from_vc_count < 350) {
        const std::size_t u = 1 + rng() % 10;
        auto F = zoo::random_family(u, 1 + rng() % 12, rng());
        const auto vc = vc_dimension(F);
        const unsigned m = vc.is_neg_inf() ? 1 : static_cast<unsigned>(vc.value()) + 1;
        if (m > 4 || m > u) continue;
        audit(from_vc(F, m).relaxed(), "from_vc");
        ++from_vc_count;
    }
    while (from_tree_count < 300) {
        const std::size_t u = 1 + rng() % 6;
        const std::size_t h = 1 + rng() % 10;
        auto F = zoo::random_family(u, 1 + rng() % 10, rng());
        const auto th = thicket_dimension(F);
        const unsigned m = th.is_neg_inf() ? 1 : static_cast<unsigned>(th.value()) + 1;
        if (m > 4 || m > h) continue;
        auto T = ElementTree::random(1, h, u, rng());
        audit(from_element_tree(T, F, m).relaxed(), "from_element_tree");
        ++from_tree_count;
    }
    while (random_count < 350) {
        const unsigned j = 2 + static_cast<unsigned>(rng() % 2);
        const unsigned n = 1 + static_cast<unsigned>(rng() % (j == 2 ? 10 : 7));
        const unsigned k = 1 + static_cast<unsigned>(rng() % std::min(n, 4u));
        const BanShape shape{n, k, j};
        const std::uint64_t keep = 1 + rng() % std::max<std::uint64_t>(1, shape.patterns() / 4);
        if (keep >= shape.patterns()) continue;
        auto f = random_dense_problem(shape, keep, rng());
        if (!is_hereditary(f).hereditary) {
            ++rejected;
            continue;
        }
        audit(f.relaxed(), "random");
        ++random_count;
    }
    if (o.pass)
        o.detail = "1000 hereditary problems (" + std::to_string(from_vc_count) + " from_vc, " +
                   std::to_string(from_tree_count) + " from_element_tree, " + std::to_string(random_count) +
                   " filtered random, " + std::to_string(rejected) + " rejected by the filter); " +
                   std::to_string(tight) + " meet the bound with equality";
    return o;
}

// ------------------------------------------------------------------- AC4

Outcome ac4() {
    Outcome o;
    std::mt19937_64 rng(0xAC4);
    std::size_t hereditary = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
        const unsigned j = 2 + static_cast<unsigned>(rng() % 2);
        const unsigned n = 2 + static_cast<unsigned>(rng() % (j == 2 ? 7 : 5));
        const unsigned k = 2 + static_cast<unsigned>(rng() % std::min(n - 1, 3u));
        const BanShape shape{n, k, j};
        BanProblem f = (i % 2 == 0) ? random_problem(shape, 0.15 + 0.1 * static_cast<double>(rng() % 7), rng())
                                    : random_dense_problem(shape, 1 + rng() % (shape.patterns() - 1), rng());
        auto c = check_counting_inequality(f);
        o.require(c.holds, "B = " + std::to_string(c.banned) + " < " + std::to_string(c.banned_hat) + " + " +
                               std::to_string(j - 1) + " * " + std::to_string(c.banned_prime) + " (problem " +
                               std::to_string(i) + ")");
        if (i % 10 == 0) hereditary += is_hereditary(f).hereditary;
    }
    if (o.pass)
        o.detail = "1000 problems with k >= 2, j in {2,3}; " + std::to_string(hereditary) +
                   " of 100 sampled are hereditary";
    return o;
}

// ------------------------------------------------------------------- AC5, AC6

std::vector<SetSystem> corpus() {
    auto c = zoo::fixtures();
    for (auto& F : zoo::random_corpus(200, 0xAC5)) c.push_back(F);
    return c;
}

Outcome ac5() {
    Outcome o;
    const auto C = corpus();
    for (const auto& F : C) {
        const auto vc = vc_dimension(F);
        const auto th = thicket_dimension(F);
        o.require(op_rank(F, 1) == th, F.name() + ": op_rank(F,1) != thicket dimension");
        if (!F.empty()) o.require(th >= vc, F.name() + ": thicket < VC");
        for (unsigned r = 1; r <= 3; ++r) {
            const bool zero = op_rank(F, r) == RankValue::of(0);
            const bool predicted = !F.empty() && vc < RankValue::of(static_cast<int>(r));
            o.require(zero == predicted, F.name() + ": op_rank zero test fails for r = " + std::to_string(r));
        }
    }
    if (o.pass) o.detail = std::to_string(C.size()) + " families, r = 1..3";
    return o;
}

Outcome ac6() {
    Outcome o;
    const auto C = corpus();
    std::size_t rows = 0, recurrence_rows = 0, tight_families = 0;
    for (const auto& F : C) {
        const std::size_t n = std::min<std::size_t>(8, std::max<std::size_t>(F.universe_size(), 1));
        for (unsigned s = 1; s <= 3; ++s)
            for (unsigned r = 1; r <= 3; ++r) {
                auto rep = audit_bounds(F, s, r, n);
                rows += rep.rows.size();
                for (const auto* bad : rep.failures())
                    o.require(false, F.name() + ": " + bad->bound + " " + bad->lhs + " > " + bad->rhs);
                for (const auto& row : rep.rows) recurrence_rows += row.bound == "op_shatter_recurrence";
            }
        if (F.name().rfind("all_subsets_of_size_at_most", 0) == 0) {
            auto rep = audit_bounds(F, 1, 1, F.universe_size());
            bool all_equal = true;
            std::size_t seen = 0;
            for (const auto& row : rep.rows)
                if (row.bound == "sauer_shelah_vc") {
                    ++seen;
                    all_equal &= row.lhs == row.rhs;
                }
            o.require(seen > 0 && all_equal, F.name() + ": VC bound is not tight");
            ++tight_families;
        }
    }
    o.require(recurrence_rows > 0, "no op_shatter_recurrence rows were produced");
    o.require(tight_families > 0, "no all_subsets_of_size_at_most fixtures in the corpus");
    if (o.pass)
        o.detail = std::to_string(rows) + " rows over " + std::to_string(C.size()) + " families, s, r <= 3, n <= 8; " +
                   std::to_string(tight_families) + " families tight";
    return o;
}

// ------------------------------------------------------------------- AC7

Outcome ac7() {
    Outcome o;
    std::vector<SetSystem> small;
    for (const auto& F : zoo::fixtures())
        if (F.universe_size() <= 4) small.push_back(F);
    for (std::uint64_t seed = 0; seed < 40; ++seed)
        small.push_back(zoo::random_family(1 + seed % 4, 1 + (seed * 7) % 16, 0xAC7 + seed));
    std::size_t comparisons = 0;
    for (const auto& F : small) {
        for (std::size_t h = 0; h <= 3; ++h) {
            const auto brute = oracle::max_leaves(F, 1, h);
            o.require(thicket_shatter(F, h) == brute, F.name() + ": thicket shatter differs at height " +
                                                          std::to_string(h));
            o.require(op_shatter(F, 1, h) == brute, F.name() + ": op_1 shatter differs at height " + std::to_string(h));
            comparisons += 2;
        }
        o.require(std::min(thicket_dimension(F), RankValue::of(3)) == oracle::tree_dimension(F, 1, 3),
                  F.name() + ": thicket dimension differs");
        ++comparisons;
        if (F.universe_size() <= 3) {
            for (std::size_t h = 0; h <= 2; ++h) {
                o.require(op_shatter(F, 2, h) == oracle::max_leaves(F, 2, h),
                          F.name() + ": op_2 shatter differs at height " + std::to_string(h));
                ++comparisons;
            }
            o.require(op_rank(F, 2) == oracle::tree_dimension(F, 2, 2), F.name() + ": op_2 rank differs");
        }
    }
    std::mt19937_64 rng(0xAC77);
    std::size_t problems = 0, hereditary = 0;
    while (problems < 400) {
        const unsigned n = 1 + static_cast<unsigned>(rng() % 6);
        const unsigned k = 1 + static_cast<unsigned>(rng() % std::min(n, 3u));
        const BanShape shape{n, k, 2};
        BanProblem f = rng() % 2 ? random_problem(shape, 0.2 + 0.2 * static_cast<double>(rng() % 3), rng())
                                 : random_dense_problem(shape, 1 + rng() % (shape.patterns() - 1), rng());
        const auto fast = is_hereditary(f);
        const bool brute = oracle::hereditary(f);
        o.require(fast.hereditary == brute, "hereditary checkers disagree on problem " + std::to_string(problems));
        if (fast.witness) o.require(validate_witness(f, *fast.witness), "invalid witness");
        hereditary += brute;
        ++problems;
    }
    if (o.pass)
        o.detail = std::to_string(comparisons) + " shatter/dimension comparisons; " + std::to_string(problems) +
                   " hereditary comparisons (" + std::to_string(hereditary) + " hereditary)";
    return o;
}

// ------------------------------------------------------------------- AC8

Outcome ac8() {
    Outcome o;
    std::size_t arrangements = 0;
    for (std::size_t s = 0; s <= 8; ++s)
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            auto lines = gen::random_general_position_lines(s, 0xAC8 + 100 * s + seed);
            o.require(line_arrangement_cells(lines) == region_count_general_position(2, s),
                      "cells differ for s = " + std::to_string(s));
            ++arrangements;
        }
    o.require(region_count_general_position(2, 3) == 7, "(2,3) != 7");
    o.require(region_count_general_position(3, 3) == 8, "(3,3) != 8");
    if (o.pass) o.detail = std::to_string(arrangements) + " arrangements with s <= 8; (2,3) -> 7, (3,3) -> 8";
    return o;
}

// ------------------------------------------------------------------- AC9

Outcome ac9() {
    Outcome o;
    std::mt19937_64 rng(0xAC9);
    std::size_t applicable = 0, exact = 0, bounded = 0;
    for (std::size_t i = 0; i < 500; ++i) {
        const std::size_t n = 1 + rng() % 60;
        const double p = static_cast<double>(1 + rng() % 19) / 20.0;
        const Graph G = Graph::random(n, p, rng());
        const TypeTree T = build_type_tree(G, random_order(n, rng()));
        const auto v = validate_type_tree(G, T);
        o.require(v.ok, "graph " + std::to_string(i) + ": " + v.message);
        const std::size_t h = T.height();
        const auto ci = extract_clique_or_independent(T);
        for (std::size_t a = 0; a < ci.clique.size(); ++a)
            for (std::size_t b = a + 1; b < ci.clique.size(); ++b)
                o.require(G.adjacent(ci.clique[a], ci.clique[b]), "graph " + std::to_string(i) + ": clique broken");
        for (std::size_t a = 0; a < ci.independent.size(); ++a)
            for (std::size_t b = a + 1; b < ci.independent.size(); ++b)
                o.require(!G.adjacent(ci.independent[a], ci.independent[b]),
                          "graph " + std::to_string(i) + ": independent set broken");
        o.require(2 * std::max(ci.clique.size(), ci.independent.size()) >= h,
                  "graph " + std::to_string(i) + ": extracted set below ceil(h/2)");
        const auto rank = tree_rank(G);
        o.require(n > 18 || rank.exact, "graph " + std::to_string(i) + ": rank not exact below the cap");
        (rank.exact ? exact : bounded)++;
        const auto rep = check_height_bound(G, T, rank);
        o.require(rep.pass, "graph " + std::to_string(i) + ": (h-1)^t = " + rep.lhs.str() + " < n (t-2)! = " +
                                rep.rhs.str());
        applicable += rep.applicable;
    }
    o.require(applicable > 0, "no instance met t >= 2 and h >= 2t");
    if (o.pass)
        o.detail = "500 graphs (n <= 60); " + std::to_string(applicable) + " met the hypotheses; rank exact on " +
                   std::to_string(exact) + ", bounded on " + std::to_string(bounded);
    return o;
}

// ------------------------------------------------------------------- AC10

Outcome ac10() {
    Outcome o;
    const auto space = ProbSpace::uniform(64);
    BitVec half(64);
    for (std::size_t i = 0; i < 32; ++i) half.set(i);
    o.require(space.measure(half) == Rational(1, 2), "mu(S) != 1/2");
    std::ostringstream cells;
    std::uint64_t seed = 0xAC10;
    for (std::size_t n : {50, 100, 200})
        for (Rational eps : {Rational(1, 10), Rational(1, 5)}) {
            ExperimentConfig cfg;
            cfg.n = n;
            cfg.epsilon = eps;
            cfg.trials = 2000;
            cfg.seed = seed++;
            cfg.threads = worker_count();
            const auto rep = run_weak_law(space, half, cfg);
            const long double limit = rep.bound + rep.slack + kBoundGuard;
            o.require(rep.pass, "n = " + std::to_string(n) + ", eps = " + format_rational(eps) + ": " +
                                    std::to_string(rep.exceedances) + "/2000 exceeds " + io::format_real(limit));
            cells << " " << n << "/" << format_rational(eps) << ":" << rep.exceedances;
        }
    std::size_t exact_checks = 0;
    for (std::size_t N = 1; N <= 4; ++N) {
        const auto u = ProbSpace::uniform(N);
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << N); ++m) {
            BitVec S(N);
            for (std::size_t i = 0; i < N; ++i)
                if ((m >> i) & 1u) S.set(i);
            for (std::size_t n = 1; n <= 4; ++n) {
                o.require(exact_expectation(u, S, n) == u.measure(S), "exact expectation differs from mu(S)");
                ++exact_checks;
            }
        }
    }
    const ProbSpace skew({Rational(1, 2), Rational(1, 3), Rational(1, 6)});
    for (std::uint64_t m = 0; m < 8; ++m) {
        BitVec S(3);
        for (std::size_t i = 0; i < 3; ++i)
            if ((m >> i) & 1u) S.set(i);
        o.require(exact_expectation(skew, S, 5) == skew.measure(S), "exact expectation differs on a skewed space");
        ++exact_checks;
    }
    if (o.pass)
        o.detail = "exceedances (n/eps:count)" + cells.str() + "; " + std::to_string(exact_checks) +
                   " exact expectations equal mu(S)";
    return o;
}

// ------------------------------------------------------------------- AC11

Outcome ac11() {
    Outcome o;
    const auto F = gen::thresholds(3);
    o.require(thicket_dimension(F) == RankValue::of(2), "fixture does not have thicket dimension 2");
    ExperimentConfig cfg;
    cfg.n = 5000;
    cfg.epsilon = Rational(1, 2);
    cfg.trials = 10000;
    cfg.seed = 0xAC11;
    cfg.threads = worker_count();
    const auto rep = run_vc_theorem(ProbSpace::uniform(3), F, cfg);
    o.require(rep.raw_bound < 1e-6L, "bound " + io::format_real(rep.raw_bound) + " is not below 1e-6");
    o.require(rep.exceedances == 0, std::to_string(rep.exceedances) + " exceedances");
    o.require(rep.pass, "report does not pass");
    if (o.pass)
        o.detail = "bound " + io::format_real(rep.raw_bound) + " (rho " + rep.rho_source + " = " + rep.rho.str() +
                   "), 0/10000 exceedances";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3},   {"AC4", ac4},   {"AC5", ac5},  {"AC6", ac6},
        {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%-5s %s  %s (%.2fs)\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}

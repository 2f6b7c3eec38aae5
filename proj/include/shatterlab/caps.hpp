#pragma once

#include <cstddef>
#include <optional>

namespace shatterlab {

// Size limits for exhaustive operations. A single override value (CLI `--cap`
// or SHATTERLAB_CAP) replaces every size limit below; the expectation
// enumeration limit is not a size and is never overridden.
struct Caps {
    std::size_t vc_universe = 20;       // subsets enumerated for VC / pi
    std::size_t op_universe = 12;       // op-rank / psi search (s <= 3)
    std::size_t tree_rank_vertices = 18;
    std::size_t sequence_log2 = 22;     // j^n <= 2^sequence_log2 for ban problems
    std::size_t hitting_length = 6;     // min_subcube_hitting exact search
    std::size_t expectation_paths = 1'000'000;

    static Caps with_override(std::size_t n) {
        Caps c;
        c.vc_universe = c.op_universe = c.tree_rank_vertices = c.sequence_log2 = c.hitting_length = n;
        return c;
    }

    // Reads SHATTERLAB_CAP; defaults when unset or unparsable.
    static Caps from_env();
};

std::optional<std::size_t> cap_override_from_env();

}  // namespace shatterlab

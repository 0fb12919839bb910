#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "provfaas/oracle/reference.hpp"
#include "provfaas/partition.hpp"

namespace provfaas::oracle {

// One randomized cross-check: an optimized path replayed against its
// reference implementation over seeded instances. Shared by the CLI oracle
// subcommands and the acceptance suite.
struct CheckResult {
    std::string name;
    std::uint64_t runs = 0;
    std::vector<std::uint64_t> failing_seeds;
    bool ok() const { return failing_seeds.empty(); }
};

// locality_filter vs depth-limited BFS on random graphs with random active
// sets and K in {1,2,3}.
CheckResult check_locality(std::uint64_t runs, std::size_t max_nodes, std::uint64_t base_seed);

// Incremental packing bookkeeping: after every insertion, the maintained
// covered-edge count of the changed bin must equal a from-scratch recount.
// `marginal` overrides the marginal function (fault-injection hook).
CheckResult check_packing_bookkeeping(std::uint64_t runs, std::size_t max_nodes, std::uint64_t base_seed,
                                      const MarginalFn& marginal = {});

// Packing validity: capacity respected by every non-oversize bin under both
// strict settings, every seed placed exactly once, seed balls covered.
CheckResult check_packing_validity(std::uint64_t runs, std::size_t max_nodes, std::uint64_t base_seed);

// Heuristic bin count >= exhaustive optimal on instances with <= 8 seeds.
CheckResult check_packing_optimal(std::uint64_t runs, std::uint64_t base_seed);

// Partitioned inference vs monolithic forward: bitwise equality on seed
// embeddings, and f32-engine vs double dense reference within tolerance.
CheckResult check_gnn_equivalence(std::uint64_t runs, std::size_t nodes, std::uint64_t base_seed);

// latency_stats vs Welford streaming reference within 1e-9.
CheckResult check_stats(std::uint64_t runs, std::uint64_t base_seed);

// Embedding-stage scheduling independence across random unit budgets.
CheckResult check_featurize_schedule(std::uint64_t runs, std::size_t nodes, std::uint64_t base_seed);

}  // namespace provfaas::oracle

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tritile/io.hpp"
#include "tritile/moves.hpp"

namespace tritile {

/// Bad command-line input; `position` is the offending argument index.
class UsageError : public std::runtime_error {
public:
    UsageError(int position, const std::string& what) : std::runtime_error(what), position_(position) {}
    int position() const noexcept { return position_; }

private:
    int position_;
};

/// "box L M N", "torus a b c" or "file PATH" (region JSON). `first` is the
/// argument index of tokens[0], used in error positions.
RegionPtr parse_region_spec(const std::vector<std::string>& tokens, int first = 1);

/// Torus with x period 4: columns (fixed y, z) whose x = 0 cell is black pair
/// x as {0,1},{2,3}; the others pair {1,2},{3,0}.
Tiling mixed_column_tiling(const RegionPtr& torus);

/// Base tiling along the first axis of even extent.
Tiling default_base_tiling(const RegionPtr& region);

struct WalkConfig {
    RegionPtr region;
    MoveSet moves = MoveSet::flip_trit;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
};

struct WalkResult {
    std::uint64_t steps_taken = 0;
    bool frozen = false;               // stopped at a tiling with no available move
    std::size_t distinct_visited = 0;  // including the start
    std::int64_t final_label = 0;      // start twist + sum of trit signs along the walk
    /// Twist of every tiling on the trajectory (start included); boxes only.
    std::map<std::int64_t, std::uint64_t> twist_histogram;
    std::vector<std::int64_t> flux;    // constant along the walk; empty for boxes
    std::uint64_t final_hash = 0;
};

/// Uniform choice among the available moves at each step (rng() % count),
/// mt19937_64 seeded with cfg.seed.
WalkResult random_walk(const WalkConfig& cfg, const Tiling& start);

/// End point of a seeded walk from `start`.
Tiling walk_to(const Tiling& start, MoveSet moves, std::uint64_t steps, std::uint64_t seed);

/// Per-property tally for a verification suite.
struct PropertyResult {
    explicit PropertyResult(std::string name = {}) : property(std::move(name)) {}

    std::string property;
    std::uint64_t checked = 0;
    std::uint64_t failed = 0;
    std::vector<std::string> failures;  // first few, in check order
    bool passed() const { return checked > 0 && failed == 0; }
};

struct SuiteResult {
    std::string suite;
    std::vector<PropertyResult> properties;
    bool passed() const;
    Json to_json() const;
};

SuiteResult verify_euler(std::uint64_t seed, int tilings = 100, int surfaces_per_tiling = 3);
SuiteResult verify_twist();
SuiteResult verify_refine(std::uint64_t seed, int torus_samples = 10);
SuiteResult verify_heightfn();

/// {"region", "moves", "num_tilings", "components": [{"size","min_twist","max_twist"}]},
/// components sorted by size (descending), then by smallest member index.
Json components_report(const RegionPtr& region, MoveSet moves);

/// Component report together with the graph it was computed from.
struct ComponentSummary {
    std::size_t size = 0;
    std::optional<std::int64_t> min_twist;
    std::optional<std::int64_t> max_twist;
};
std::vector<ComponentSummary> summarize_components(const MoveGraph& g);

}  // namespace tritile

#pragma once

// Overlapping colonies on a square grid.
//
// Two countries each place non-overlapping rectangular colonies, hash every
// covered cell through a shared PositionHash, and compare level-n
// encryptions of their colonies. The recovered values map back to candidate
// cells; because colonies are rectangles of a known minimum size, candidates
// that cannot be part of such a rectangle are filtered out.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nsum/encrypt.hpp"
#include "nsum/omega_map.hpp"
#include "nsum/rect.hpp"

namespace nsum {

struct World {
    std::uint32_t world_dim = 50;
    std::uint32_t min_dim = 5;
    std::uint32_t max_dim = 10;
    std::vector<Rect> colonies;
};

// True when the two colonies overlap or touch (the placement rule keeps at
// least one free cell between colonies of one country).
bool colonies_conflict(const Rect& a, const Rect& b);

// Rejection-samples `n_colonies` mutually non-conflicting rectangles with
// lower corners in [1, world_dim - max_dim] and sides in [min_dim, max_dim].
// Throws ResourceLimitError after `max_attempts` total draws.
World random_world(std::size_t n_colonies, std::uint32_t world_dim, std::uint32_t min_dim, std::uint32_t max_dim,
                   std::uint64_t seed, std::uint64_t max_attempts = 1'000'000);

// One flag per cell; cell (x, y) sits at x + world_dim * y, the same
// linearization used for grid indices.
class CandidateGrid {
public:
    explicit CandidateGrid(std::uint32_t world_dim = 0);

    std::uint32_t world_dim() const { return dim_; }
    std::size_t cell_count() const { return flags_.size(); }

    bool at(std::uint32_t x, std::uint32_t y) const { return flags_[index(x, y)] != 0; }
    void set(std::uint32_t x, std::uint32_t y, bool value = true) { flags_[index(x, y)] = value ? 1 : 0; }

    // Flags the cell of grid index g (x = g mod dim, y = g div dim). Returns
    // false for indices past the last cell.
    bool set_grid_index(std::uint64_t g);

    std::size_t count() const;
    // Every flag of this grid is also set in `other`.
    bool subset_of(const CandidateGrid& other) const;
    // Cells flagged here but not in `other`.
    std::size_t count_outside(const CandidateGrid& other) const;

    std::span<const std::uint8_t> flags() const { return flags_; }

    friend bool operator==(const CandidateGrid&, const CandidateGrid&) = default;

private:
    std::size_t index(std::uint32_t x, std::uint32_t y) const { return std::size_t{x} + std::size_t{dim_} * y; }

    std::uint32_t dim_;
    std::vector<std::uint8_t> flags_;
};

// Resolves, encrypts and indexes a world's colonies ("1".."N").
struct EncryptedWorld {
    PrivateSet set;
    Encryption encryption;
};
EncryptedWorld encrypt_world(const World& world, const PositionHash& hash, unsigned level, unsigned workers = 1);

// Flags the cells whose hash the comparison recovers from `mine`'s side.
CandidateGrid psi_overlap(const EncryptedWorld& mine, const EncryptedSet& their_encrypted, const PositionHash& hash);
CandidateGrid psi_overlap(const World& mine, const EncryptedSet& their_encrypted, const PositionHash& hash,
                          unsigned level);

enum class FilterMode {
    // Survivors lie in an all-flagged min_dim x min_dim square.
    strict_square,
    // Survivors lie in an all-flagged a x b rectangle with a * b >= min_dim.
    relaxed_area,
};

CandidateGrid geometric_filter(const CandidateGrid& grid, std::uint32_t min_dim,
                               FilterMode mode = FilterMode::strict_square);

// Cells covered by some colony of `a` and some colony of `b`.
CandidateGrid true_intersection(const World& a, const World& b);

// Cells covered by any colony of the world.
CandidateGrid colony_cells(const World& world);

// Per colony: flagged cells inside it over its area.
std::vector<double> shape_score(const World& world, const CandidateGrid& filtered);

// Binary PGM, flagged cells black, row y = 0 at the top.
void write_pgm(std::ostream& out, const CandidateGrid& grid);

// "x,y,flagged_raw,flagged_filtered,truth" per cell.
void write_cell_csv(std::ostream& out, const CandidateGrid& raw, const CandidateGrid& filtered,
                    const CandidateGrid& truth);

}  // namespace nsum

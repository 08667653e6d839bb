#include "nsum/shapes.hpp"

#include <algorithm>
#include <ostream>
#include <random>

#include "nsum/compare.hpp"
#include "nsum/error.hpp"

namespace nsum {

namespace {

void require_same_dim(const CandidateGrid& a, const CandidateGrid& b) {
    if (a.world_dim() != b.world_dim()) throw PreconditionError("grids have different dimensions");
}

// (dim + 1)^2 summed-area table of a grid's flags.
std::vector<std::uint32_t> prefix_sums(const CandidateGrid& grid) {
    const std::uint32_t dim = grid.world_dim();
    const std::size_t stride = std::size_t{dim} + 1;
    std::vector<std::uint32_t> sums(stride * stride, 0);
    for (std::uint32_t y = 0; y < dim; ++y) {
        for (std::uint32_t x = 0; x < dim; ++x) {
            sums[(y + 1) * stride + x + 1] = (grid.at(x, y) ? 1u : 0u) + sums[y * stride + x + 1] +
                                             sums[(y + 1) * stride + x] - sums[y * stride + x];
        }
    }
    return sums;
}

// Marks every cell of every all-flagged w x h window.
void mark_full_windows(const CandidateGrid& grid, const std::vector<std::uint32_t>& sums, std::uint32_t w,
                       std::uint32_t h, std::vector<std::int32_t>& cover) {
    const std::uint32_t dim = grid.world_dim();
    if (w > dim || h > dim) return;
    const std::size_t stride = std::size_t{dim} + 1;
    const std::uint32_t full = w * h;
    for (std::uint32_t y = 0; y + h <= dim; ++y) {
        for (std::uint32_t x = 0; x + w <= dim; ++x) {
            const std::uint32_t inside = sums[(y + h) * stride + x + w] - sums[y * stride + x + w] -
                                         sums[(y + h) * stride + x] + sums[y * stride + x];
            if (inside != full) continue;
            // 2-D difference array over the window.
            cover[y * stride + x] += 1;
            cover[y * stride + x + w] -= 1;
            cover[(y + h) * stride + x] -= 1;
            cover[(y + h) * stride + x + w] += 1;
        }
    }
}

}  // namespace

bool colonies_conflict(const Rect& a, const Rect& b) {
    return a.x + a.width >= b.x && a.y <= b.y + b.height && a.y + a.height >= b.y && a.x <= b.x + b.width;
}

World random_world(std::size_t n_colonies, std::uint32_t world_dim, std::uint32_t min_dim, std::uint32_t max_dim,
                   std::uint64_t seed, std::uint64_t max_attempts) {
    if (min_dim < 1 || min_dim > max_dim) throw PreconditionError("colony sizes need 1 <= min_dim <= max_dim");
    if (max_dim + 1 > world_dim) throw PreconditionError("world is too small for colonies of size max_dim");

    World world{world_dim, min_dim, max_dim, {}};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> corner(1, world_dim - max_dim);
    std::uniform_int_distribution<std::uint32_t> side(min_dim, max_dim);
    std::uint64_t attempts = 0;
    while (world.colonies.size() < n_colonies) {
        if (++attempts > max_attempts) {
            throw ResourceLimitError("could not place " + std::to_string(n_colonies) + " colonies in a " +
                                     std::to_string(world_dim) + "x" + std::to_string(world_dim) +
                                     " world after " + std::to_string(max_attempts) +
                                     " attempts; use fewer colonies or a larger world");
        }
        Rect r;
        r.x = corner(rng);
        r.y = corner(rng);
        r.width = side(rng);
        r.height = side(rng);
        const bool clear = std::none_of(world.colonies.begin(), world.colonies.end(),
                                        [&](const Rect& other) { return colonies_conflict(r, other); });
        if (clear) world.colonies.push_back(r);
    }
    return world;
}

CandidateGrid::CandidateGrid(std::uint32_t world_dim)
    : dim_(world_dim), flags_(std::size_t{world_dim} * world_dim, 0) {}

bool CandidateGrid::set_grid_index(std::uint64_t g) {
    if (g >= flags_.size()) return false;
    flags_[g] = 1;
    return true;
}

std::size_t CandidateGrid::count() const {
    return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

bool CandidateGrid::subset_of(const CandidateGrid& other) const {
    require_same_dim(*this, other);
    return count_outside(other) == 0;
}

std::size_t CandidateGrid::count_outside(const CandidateGrid& other) const {
    require_same_dim(*this, other);
    std::size_t n = 0;
    for (std::size_t i = 0; i < flags_.size(); ++i) n += (flags_[i] && !other.flags_[i]) ? 1 : 0;
    return n;
}

EncryptedWorld encrypt_world(const World& world, const PositionHash& hash, unsigned level, unsigned workers) {
    if (hash.world_dim() != world.world_dim) throw PreconditionError("position hash and world differ in size");
    const ElementMap omega = colony_omega(world.colonies, hash);
    EncryptedWorld out;
    for (const auto& [id, values] : omega.entries()) out.set.add(id, values);
    out.encryption = workers > 1 ? encrypt_parallel(out.set, level, workers) : encrypt(out.set, level);
    return out;
}

CandidateGrid psi_overlap(const EncryptedWorld& mine, const EncryptedSet& their_encrypted, const PositionHash& hash) {
    const auto common = intersect_keys(mine.encryption.encrypted, their_encrypted);
    const OmegaSet recovered = recover(common, mine.encryption.index);
    CandidateGrid grid(hash.world_dim());
    for (Value v : recovered) {
        if (auto g = hash.grid_index(v)) grid.set_grid_index(*g);
    }
    return grid;
}

CandidateGrid psi_overlap(const World& mine, const EncryptedSet& their_encrypted, const PositionHash& hash,
                          unsigned level) {
    return psi_overlap(encrypt_world(mine, hash, level), their_encrypted, hash);
}

CandidateGrid geometric_filter(const CandidateGrid& grid, std::uint32_t min_dim, FilterMode mode) {
    if (min_dim < 1) throw PreconditionError("min_dim must be at least 1");
    const std::uint32_t dim = grid.world_dim();
    const std::size_t stride = std::size_t{dim} + 1;
    const auto sums = prefix_sums(grid);
    std::vector<std::int32_t> cover(stride * stride, 0);

    if (mode == FilterMode::strict_square) {
        mark_full_windows(grid, sums, min_dim, min_dim, cover);
    } else {
        // Any all-flagged rectangle of area >= m contains an all-flagged
        // a x ceil(m / a) window around each of its cells, for some a <= m.
        for (std::uint32_t a = 1; a <= min_dim; ++a) {
            mark_full_windows(grid, sums, a, (min_dim + a - 1) / a, cover);
        }
    }

    CandidateGrid out(dim);
    std::vector<std::int32_t> acc(stride * stride, 0);
    for (std::uint32_t y = 0; y < dim; ++y) {
        for (std::uint32_t x = 0; x < dim; ++x) {
            const std::size_t i = y * stride + x;
            acc[(y + 1) * stride + x + 1] =
                cover[i] + acc[y * stride + x + 1] + acc[(y + 1) * stride + x] - acc[y * stride + x];
            if (acc[(y + 1) * stride + x + 1] > 0) out.set(x, y);
        }
    }
    return out;
}

CandidateGrid colony_cells(const World& world) {
    CandidateGrid grid(world.world_dim);
    for (const Rect& r : world.colonies) {
        for (std::uint32_t i = 0; i < r.width; ++i) {
            for (std::uint32_t j = 0; j < r.height; ++j) {
                if (r.x + i < world.world_dim && r.y + j < world.world_dim) grid.set(r.x + i, r.y + j);
            }
        }
    }
    return grid;
}

CandidateGrid true_intersection(const World& a, const World& b) {
    if (a.world_dim != b.world_dim) throw PreconditionError("worlds have different dimensions");
    const CandidateGrid ca = colony_cells(a);
    const CandidateGrid cb = colony_cells(b);
    CandidateGrid out(a.world_dim);
    for (std::uint32_t y = 0; y < a.world_dim; ++y) {
        for (std::uint32_t x = 0; x < a.world_dim; ++x) {
            if (ca.at(x, y) && cb.at(x, y)) out.set(x, y);
        }
    }
    return out;
}

std::vector<double> shape_score(const World& world, const CandidateGrid& filtered) {
    if (filtered.world_dim() != world.world_dim) throw PreconditionError("grid and world differ in size");
    std::vector<double> scores;
    for (const Rect& r : world.colonies) {
        std::size_t black = 0;
        for (std::uint32_t i = 0; i < r.width; ++i) {
            for (std::uint32_t j = 0; j < r.height; ++j) black += filtered.at(r.x + i, r.y + j) ? 1 : 0;
        }
        scores.push_back(static_cast<double>(black) / static_cast<double>(r.area()));
    }
    return scores;
}

void write_pgm(std::ostream& out, const CandidateGrid& grid) {
    const std::uint32_t dim = grid.world_dim();
    out << "P5\n" << dim << ' ' << dim << "\n255\n";
    for (std::uint32_t y = 0; y < dim; ++y) {
        for (std::uint32_t x = 0; x < dim; ++x) out.put(grid.at(x, y) ? '\0' : static_cast<char>(255));
    }
}

void write_cell_csv(std::ostream& out, const CandidateGrid& raw, const CandidateGrid& filtered,
                    const CandidateGrid& truth) {
    require_same_dim(raw, filtered);
    require_same_dim(raw, truth);
    out << "x,y,flagged_raw,flagged_filtered,truth\n";
    for (std::uint32_t y = 0; y < raw.world_dim(); ++y) {
        for (std::uint32_t x = 0; x < raw.world_dim(); ++x) {
            out << x << ',' << y << ',' << raw.at(x, y) << ',' << filtered.at(x, y) << ',' << truth.at(x, y) << '\n';
        }
    }
}

}  // namespace nsum

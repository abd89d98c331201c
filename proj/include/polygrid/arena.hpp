#ifndef POLYGRID_ARENA_HPP
#define POLYGRID_ARENA_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "polygrid/error.hpp"

namespace polygrid {

// Ordered set of distinct variable names; index <-> name is a bijection.
// Immutable once built, shared by every polynomial over it.
class VarArena {
public:
    VarArena() = default;
    explicit VarArena(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            auto [it, fresh] = index_.emplace(names_[i], i);
            require(fresh, errc::bad_argument, "duplicate variable name '" + names_[i] + "'");
        }
    }

    std::size_t count() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    bool has(const std::string& n) const { return index_.count(n) != 0; }
    std::size_t index_of(const std::string& n) const {
        auto it = index_.find(n);
        require(it != index_.end(), errc::bad_argument, "unknown variable '" + n + "'");
        return it->second;
    }

    bool same_names(const VarArena& o) const { return names_ == o.names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
};

using ArenaPtr = std::shared_ptr<const VarArena>;

inline ArenaPtr make_arena(std::vector<std::string> names) {
    return std::make_shared<const VarArena>(std::move(names));
}

// Numbered variables x1..xn, the CLI-facing convention.
inline ArenaPtr make_arena_xn(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return make_arena(std::move(names));
}

inline bool compatible(const ArenaPtr& a, const ArenaPtr& b) {
    return a == b || (a && b && a->same_names(*b));
}

inline void require_compatible(const ArenaPtr& a, const ArenaPtr& b) {
    require(compatible(a, b), errc::arena_mismatch, "operands live in different variable arenas");
}

// A lambda-partition of the variable list into contiguous blocks of sizes
// lambda_1..lambda_m; block i covers indices [offset(i), offset(i)+lambda(i)).
class BlockPartition {
public:
    BlockPartition() = default;
    explicit BlockPartition(std::vector<std::size_t> lambda) : lambda_(std::move(lambda)) {
        require(!lambda_.empty(), errc::bad_argument, "empty partition");
        offsets_.resize(lambda_.size());
        std::size_t off = 0;
        for (std::size_t i = 0; i < lambda_.size(); ++i) {
            require(lambda_[i] > 0, errc::bad_argument, "partition blocks must be positive");
            offsets_[i] = off;
            off += lambda_[i];
        }
        total_ = off;
    }

    std::size_t blocks() const { return lambda_.size(); }
    std::size_t lambda(std::size_t i) const { return lambda_.at(i); }
    const std::vector<std::size_t>& lambdas() const { return lambda_; }
    std::size_t offset(std::size_t i) const { return offsets_.at(i); }
    std::size_t total() const { return total_; }

    std::size_t block_of(std::size_t var_index) const {
        require(var_index < total_, errc::bad_argument, "variable index outside partition");
        std::size_t b = std::upper_bound(offsets_.begin(), offsets_.end(), var_index) -
                        offsets_.begin();
        return b - 1;
    }

    void bind_check(const VarArena& arena) const {
        require(total_ == arena.count(), errc::dimension_mismatch,
                "partition covers " + std::to_string(total_) + " variables but arena has " +
                    std::to_string(arena.count()));
    }

    friend bool operator==(const BlockPartition& a, const BlockPartition& b) {
        return a.lambda_ == b.lambda_;
    }

private:
    std::vector<std::size_t> lambda_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
};

} // namespace polygrid

#endif

#ifndef POLYGRID_ERROR_HPP
#define POLYGRID_ERROR_HPP

#include <stdexcept>
#include <string>

namespace polygrid {

// Library errors carry a kind so the CLI can map them to exit codes.
enum class errc {
    arena_mismatch,
    dimension_mismatch,
    bad_argument,
    syntax,
    budget_exceeded,
    degenerate,   // e.g. perturbed resultant identically zero
    internal,
};

class error : public std::runtime_error {
public:
    error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    errc kind() const { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) { throw error(kind, what); }

inline void require(bool cond, errc kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace polygrid

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace sswm {

// Bad user input: malformed config files, unknown keys, unknown preset or
// quantity names. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed input that the numerics cannot honor: grids too coarse for the
// requested feature scale, degenerate or non power-of-two lattices, resource
// caps, overdamped dressing, probe points outside a transform's reach.
// CLI exit code 3.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation broke one of its own guarantees: a non-finite sample, a field
// fed to a consumer expecting a different quantity, an absorption sign flip.
// CLI exit code 4.
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_precondition = 3;
inline constexpr int exit_invariant = 4;

}

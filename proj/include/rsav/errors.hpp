#ifndef RSAV_ERRORS_HPP
#define RSAV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rsav {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad grid construction (odd/too-small extents, nonpositive lengths)
struct GridError : Error { using Error::Error; };

// operands live on different grids / mismatched variable counts
struct ShapeError : Error { using Error::Error; };

// unknown model name or parameter outside the model's catalog
struct CatalogError : Error { using Error::Error; };

// auxiliary-variable radicand not strictly positive
struct QvarError : Error { using Error::Error; };

// resolvent or coupling system not solvable (nonpositive multiplier, singular matrix)
struct SolverError : Error { using Error::Error; };

// non-finite state, or a wired energy-law assertion tripped
struct DivergenceError : Error { using Error::Error; };

// config file syntax / unknown key / failed validation
struct ConfigError : Error { using Error::Error; };

// file read/write failure
struct IoError : Error { using Error::Error; };

} // namespace rsav

#endif

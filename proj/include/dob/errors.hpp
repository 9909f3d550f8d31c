#pragma once

#include <stdexcept>
#include <string>

namespace dob {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed polygon, rates out of range, bad options.
struct InvalidInput : Error {
    using Error::Error;
};

/// The map was applied to a point on (or within eps of) the singular set.
struct SingularHit : Error {
    explicit SingularHit(const std::string& what, int step_ = -1) : Error(what), step(step_) {}
    int step;
};

/// The map was applied to a point of the (closed) table.
struct InsidePolygon : Error {
    using Error::Error;
};

struct WrongStrip : Error {
    using Error::Error;
};

struct NotRegular : Error {
    using Error::Error;
};

struct AtBifurcation : Error {
    explicit AtBifurcation(const std::string& what, int index_ = 0) : Error(what), index(index_) {}
    int index;
};

struct NoReturn : Error {
    using Error::Error;
};

struct UndefinedWinding : Error {
    using Error::Error;
};

struct Degenerate : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    using Error::Error;
};

struct PieceBudgetExceeded : BudgetExceeded {
    using BudgetExceeded::BudgetExceeded;
};

}  // namespace dob

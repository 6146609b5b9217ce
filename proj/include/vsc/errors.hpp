#ifndef VSC_ERRORS_HPP
#define VSC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vsc {

// Caller passed arguments that violate an operation's preconditions.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An internal structural invariant failed (e.g. a formal map without identity linear part).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// A requested coefficient lies beyond the truncation of the series it was asked of.
struct BoundError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A denominator that is not a product of linear forms in the residue variable.
struct RepresentationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The radius profile cannot decide whether a pole lies inside its contour.
class IndecisivePole : public std::runtime_error {
public:
    IndecisivePole(std::string form, std::string lower, std::string upper, std::string radius)
        : std::runtime_error("indecisive pole at root of " + form + ": modulus in [" + lower + ", "
                             + upper + "] straddles radius " + radius),
          form_(std::move(form)), lower_(std::move(lower)), upper_(std::move(upper)),
          radius_(std::move(radius))
    {
    }

    const std::string &form() const { return form_; }
    const std::string &lower() const { return lower_; }
    const std::string &upper() const { return upper_; }
    const std::string &radius() const { return radius_; }

private:
    std::string form_, lower_, upper_, radius_;
};

} // namespace vsc

#endif

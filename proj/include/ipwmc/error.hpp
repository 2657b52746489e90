#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ipwmc {

enum class Errc {
    domain,            // argument outside its mathematical domain
    division_hazard,   // zero probability attached to an observed unit
    empty_sample,      // no responding units / zero normalizer
    degenerate_mix,    // zero denominator in a lambda mixture
    degenerate_weights,
    degenerate_grid,
    invalid_survival,  // survival function is not monotone
    support_violation, // semiparametric row with no positive entry
    configuration,
    io,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace ipwmc

#include "ipwmc/error.hpp"

namespace ipwmc {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::domain: return "domain";
    case Errc::division_hazard: return "division_hazard";
    case Errc::empty_sample: return "empty_sample";
    case Errc::degenerate_mix: return "degenerate_mix";
    case Errc::degenerate_weights: return "degenerate_weights";
    case Errc::degenerate_grid: return "degenerate_grid";
    case Errc::invalid_survival: return "invalid_survival";
    case Errc::support_violation: return "support_violation";
    case Errc::configuration: return "configuration";
    case Errc::io: return "io";
    }
    return "unknown";
}

} // namespace ipwmc

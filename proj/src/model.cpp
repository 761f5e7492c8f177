#include "fads/model.hpp"

#include <cmath>
#include <string>

namespace fads {

void validate(const ModelParams& p) {
    const double m = kParamBoundaryMargin;
    if (!(std::isfinite(p.alpha) && std::isfinite(p.epsilon)))
        throw ValidationError("alpha and epsilon must be finite");
    if (!(p.alpha > 0.5 + m))
        throw ValidationError("alpha=" + std::to_string(p.alpha) +
                              " violates alpha > 1/2");
    if (!(p.alpha < 1.0 - m))
        throw ValidationError("alpha=" + std::to_string(p.alpha) +
                              " violates alpha < 1");
    if (!(p.epsilon > m))
        throw ValidationError("epsilon=" + std::to_string(p.epsilon) +
                              " violates epsilon > 0");
    const double cap = p.alpha * (1.0 - p.alpha);
    if (!(p.epsilon < cap - m))
        throw ValidationError("epsilon=" + std::to_string(p.epsilon) +
                              " violates epsilon < alpha*(1-alpha)=" +
                              std::to_string(cap));
}

DerivedConstants derive_constants(const ModelParams& p) {
    validate(p);
    const double a = p.alpha, e = p.epsilon;
    DerivedConstants c{};
    c.c_alpha = std::log(a / (1.0 - a));
    c.c_u = std::log((1.0 - a) * (a - e) / (a * (1.0 - a - e)));
    c.cascade_cap = std::log(1.0 - 2.0 * a * (1.0 - a)) /
                    std::log(std::abs(1.0 - 2.0 * e));
    c.cascade_cap_floor = static_cast<std::int64_t>(std::floor(c.cascade_cap));
    c.mean_gap_bound = 1.0 + c.cascade_cap / (2.0 * a * (1.0 - a));
    return c;
}

}  // namespace fads

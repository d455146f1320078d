#include "cev/params.hpp"

#include "cev/errors.hpp"

#include <string>

namespace cev {

void validate(const CevParams& p) {
    if (!(p.s0 > 0.0))
        throw validation_error("s0 must be > 0, got " + std::to_string(p.s0));
    if (!(p.sigma >= 0.0))
        throw validation_error("sigma must be >= 0, got " + std::to_string(p.sigma));
    if (!(p.beta > 0.0))
        throw validation_error("beta must be > 0, got " + std::to_string(p.beta));
    if (!(p.r >= 0.0))
        throw validation_error("r must be >= 0, got " + std::to_string(p.r));
    if (!(p.q >= 0.0))
        throw validation_error("q must be >= 0, got " + std::to_string(p.q));
}

void validate_for_tree(const CevParams& p) {
    validate(p);
    if (!(p.sigma > 0.0))
        throw validation_error("tree requires sigma > 0");
    if (p.beta > 2.0)
        throw validation_error(
            "beta > 2 is supported by the closed-form pricer only; "
            "the lattice requires 0 < beta <= 2");
    if (p.q != 0.0)
        throw validation_error("the lattice requires q = 0; "
                               "use the closed-form pricer for q > 0");
}

} // namespace cev

#include "kacres/errors.hpp"
#include "kacres/moves.hpp"
#include "kacres/resolution.hpp"

namespace kacres {

FunctionsByDegree enumerate_allowable(const WeightDiagram& mu, int max_degree)
{
    if (max_degree < 0)
        throw DomainError("max degree must be nonnegative");
    auto labelled = resolve_with_functions(mu, max_degree);
    FunctionsByDegree out;
    for (auto& term : labelled.terms)
        out[term.degree] = std::move(term.functions);
    return out;
}

} // namespace kacres

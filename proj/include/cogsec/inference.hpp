#ifndef COGSEC_INFERENCE_HPP
#define COGSEC_INFERENCE_HPP

#include <span>
#include <vector>

#include "cogsec/encoder.hpp"
#include "cogsec/grid.hpp"

namespace cogsec {

struct BeliefState {
  MassFunction prior;
  MassFunction posterior;
};

MassFunction uniform_prior(const Grid& grid);

// posterior ∝ prior · likelihood. Falls back to log-space products when any
// factor is below 1e-300. Throws DegenerateEvidence on disjoint supports.
MassFunction bayes_update(const MassFunction& prior, const Likelihood& like);

// Chained updates; each posterior becomes the next prior. Returns every
// intermediate posterior, so result.back() is the final belief.
std::vector<MassFunction> sequential_update(const MassFunction& prior0, std::span<const Likelihood> likes);

}  // namespace cogsec

#endif  // COGSEC_INFERENCE_HPP

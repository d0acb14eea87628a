#pragma once

#include <string>
#include <vector>

namespace volta {

// --------------------------------------------------------------------------
// Convergence classification of a nondecreasing partial-sum sequence sampled
// at doubling checkpoints:
//  - convergent    an honest Cauchy-increment test: the last three doubling
//                  increments are each < conv_rel, relative to the current sum;
//  - divergent     the last doubling still adds > div_rel relative;
//  - inconclusive  everything in between (the gray zone is reported, not
//                  guessed away).
// Nonfinite sums classify as divergent.
// --------------------------------------------------------------------------
enum class Classification { Convergent, Divergent, Inconclusive };

std::string to_string(Classification c);

Classification classify_partial_sums(const std::vector<double>& sums,
                                     double conv_rel = 1e-6, double div_rel = 0.1);

}  // namespace volta

#pragma once

#include <span>

namespace spendtraits {

// Probability that a random positive outscores a random negative, ties
// counted 1/2 (Mann-Whitney). Throws when only one class is present.
double auc(std::span<const double> scores, std::span<const int> labels);

// Smallest threshold t such that the fraction of scores strictly above t is
// at most `target_rate`. Candidates are one value below the minimum score and
// the distinct scores themselves. Throws on constant scores.
double choose_threshold(std::span<const double> scores, double target_rate);

// Pearson correlation; returns false via *ok when either side has zero variance.
double pearson_correlation(std::span<const double> a, std::span<const double> b, bool* ok);

}  // namespace spendtraits

#pragma once

#include "tsera/sera.hpp"

namespace tsera {

/// Benjamini-Hochberg step-up: reject the k_hat smallest p-values,
/// k_hat = max{k : p_(k) <= alpha k / M}.
DecisionSet bh_decide(const Vector& p, double alpha);

}  // namespace tsera

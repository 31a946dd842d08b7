#pragma once

#include <string>
#include <vector>

#include "corpus.hpp"

namespace euds {

struct EvalResult {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    size_t train_count = 0;
    size_t val_count = 0;
};

/// Deterministic bag-of-words linear classifier: multinomial count features
/// with add-1 smoothing set the initial weights, then a fixed number of
/// full-batch refinement epochs. No randomness anywhere, so identical inputs
/// give identical metrics. Validation labels missing from the training set
/// are reported through `warnings` and scored as never-predictable.
EvalResult proxy_train_eval(const Dataset& train, const Dataset& val,
                            std::vector<std::string>* warnings = nullptr);

} // namespace euds

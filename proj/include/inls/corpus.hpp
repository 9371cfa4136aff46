#pragma once

#include <string>

#include "inls/grid.hpp"

namespace inls {

/// Frozen test-function corpus (version v1): 20 closed-form generators the
/// equivalence-constant fits and the split regressions are calibrated on.
/// Members are deterministic functions of the grid; changing any generator
/// invalidates every fitted constant in the test suite.
inline constexpr int kCorpusSize = 20;
inline constexpr const char* kCorpusVersion = "v1";

SpectralField corpus_member(const GridSpec& g, int id);
std::string corpus_label(int id);

}  // namespace inls

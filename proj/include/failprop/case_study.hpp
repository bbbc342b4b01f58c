#pragma once

#include <string>
#include <vector>

#include "failprop/checker.hpp"
#include "failprop/model.hpp"

namespace failprop {

// Executable encodings of the LPV guidance architecture: the baseline
// dual-constellation design and the hardened variant with RNAV and
// baro-altimeter backup sources. Shipped alongside the equivalent
// .fprop files; a regression test keeps both in sync.

Model baseline_lpv_model();
Model hardened_lpv_model();

struct CorpusEntry {
    std::string model_id;  // "baseline" or "hardened"
    std::string assertion; // "model_structure" or a declared assertion name
    Outcome expected = Outcome::Holds;
    std::string description;
};

// The full verdict table for both models: structural check, the three
// safety assertions and the seven attack assertions, with the expected
// outcome of each.
std::vector<CorpusEntry> corpus();

} // namespace failprop

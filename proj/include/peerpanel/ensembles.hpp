#pragma once

#include <span>
#include <string>
#include <vector>

#include "peerpanel/labels.hpp"
#include "peerpanel/pipeline.hpp"

namespace peerpanel::ensembles {

/// Most frequent label; ties go to the lower ordinal (more conservative).
/// Throws PreconditionError on empty input.
DecisionLabel majority_vote(std::span<const DecisionLabel> labels);

/// Mean ordinal rounded half-down (toward reject), mapped back to a label.
DecisionLabel average_decision(std::span<const DecisionLabel> labels);

/// Metareview over only the listed personas' reviews (and their
/// post-rebuttal responses). Throws UnknownPersona for a persona without a
/// pre-rebuttal review in the record.
MetaReview meta_over_subset(ReviewEngine& engine, const PipelineRecord& record,
                            const Manuscript& m, const std::vector<std::string>& subset,
                            Trace* trace = nullptr);

}  // namespace peerpanel::ensembles

#pragma once

#include "mblborn/datasets.hpp"
#include "mblborn/objectives.hpp"
#include "mblborn/trainer.hpp"

namespace mblborn {

/// Index of the stored distribution (m in 0..M) with the smallest exact MMD
/// to `corrupted`; ties pick the smallest m.
int find_closest_quench(const TrainingTrace& trace, const Pattern& corrupted,
                        const GramMatrix& K);

struct RetrievalResult {
  Pattern retrieved;
  int m_star = 0;
};

/// Associative retrieval: embeds the corrupted pattern (visible amplitudes
/// sqrt(xi) tensored with `hidden_init`), replays the trace's stored quench
/// unitaries from the closest checkpoint m*+1 .. M, and reads back the
/// visible distribution. m* = M reduces to the embedding round trip.
RetrievalResult retrieve(const TrainingTrace& trace, const Pattern& corrupted,
                         const PureState& hidden_init);

}  // namespace mblborn

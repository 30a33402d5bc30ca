#pragma once

#include "balance_assist/experiment.hpp"

#include <optional>
#include <string>

namespace balance_assist {

/// Span shaded in the plot: the first exit episode, [t_out, t_in] or
/// [t_out, t_fail] on failed trials.
struct EpisodeSpan {
  double t0 = 0.0, t1 = 0.0;
};

std::optional<EpisodeSpan> plot_episode_span(const TrialLog& log);

/// Four stacked panels over time: CoP vs DZ bounds, interaction forces,
/// EE/reference sagittal positions, elbow angle; the exit episode is shaded.
/// Throws on an empty log or unwritable path.
void render_trial_svg(const TrialLog& log, const std::string& path);

}  // namespace balance_assist

#pragma once

#include <string>
#include <vector>

#include "routersim/harness.hpp"

namespace routersim::plot {

enum class PlotKind {
    Rate,        // delivered-pair rate vs m, one series per (architecture, L)
    Infidelity,  // 1 - fidelity vs m, one series per (architecture, L)
    Ratio,       // router/routerless rate ratio vs m, one series per L
};

// Parses "rate" | "infidelity" | "ratio"; throws std::invalid_argument otherwise.
PlotKind parse_plot_kind(const std::string& name);

// Renders a deterministic standalone SVG document from sweep rows. For
// PlotKind::Ratio every (m, L) point must be present for both architectures;
// otherwise std::invalid_argument is thrown.
std::string render_plot(const std::vector<harness::SummaryRow>& rows, PlotKind kind);

}  // namespace routersim::plot

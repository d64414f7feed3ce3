#ifndef DRBENCH_PLOT_HPP
#define DRBENCH_PLOT_HPP

#include <string>
#include <utility>
#include <vector>

#include "drbench/metrics.hpp"
#include "drbench/types.hpp"

namespace drbench {

/// One curve with a +-1 std band.
struct BandSeries {
  std::string label;
  std::vector<Real> x;
  std::vector<Real> mean;
  std::vector<Real> std;
};

/// Line panel with shaded bands. Output depends only on the inputs, so equal
/// data gives byte-identical files.
std::string band_panel_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<BandSeries>& series);

struct ConsumptionPanel {
  long step = 0;
  /// (series label, demand at `step`)
  std::vector<std::pair<std::string, DemandProfile>> demands;
};

/// Grouped hourly demand bars per checkpoint, one panel per checkpoint, with
/// the grid schedule drawn as a step line on a secondary axis. Every bar
/// carries its exact value in a data-value attribute.
std::string consumption_svg(const std::vector<ConsumptionPanel>& panels,
                            const GridPriceSchedule& grid);

/// Reads each CSV and extracts the demand rows at `steps`. Throws
/// std::runtime_error naming the available step range when a step is
/// missing from a file.
std::vector<ConsumptionPanel> load_consumption_panels(const std::vector<std::string>& csv_paths,
                                                      const std::vector<long>& steps);

}  // namespace drbench

#endif  // DRBENCH_PLOT_HPP

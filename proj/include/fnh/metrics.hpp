#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fnh/types.hpp"

namespace fnh {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t unknown = 0;
  std::size_t total = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& other);
  friend ConfusionCounts operator+(ConfusionCounts lhs, const ConfusionCounts& rhs) {
    lhs += rhs;
    return lhs;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

struct SampleOutcome {
  std::string sample_id;
  bool truth = false;
  Label label = Label::Unknown;
};

// Confusion accounting. Original mode compares against the per-sample ground
// truth; All-True targets True (False responses are false negatives);
// All-False targets False (True responses are false positives).
ConfusionCounts tally(PromptMode mode, const std::vector<std::pair<bool, Label>>& records);
ConfusionCounts tally(PromptMode mode, const std::vector<SampleOutcome>& outcomes);

// count / (total - unknown): the ratio among valid (non-Unknown) predictions.
// Undefined (throws) when every prediction was Unknown.
double ratio_valid(std::size_t count, const ConfusionCounts& counts);

// fn / (tp + fn) and fp / (tn + fp). Zero denominators throw rather than
// report a perfect score.
double fn_rate(const ConfusionCounts& counts);
double fp_rate(const ConfusionCounts& counts);

struct HistogramSeries {
  Label predicted_label = Label::Unknown;
  std::vector<double> bin_edges;        // nbins + 1 edges over [0, 1]
  std::vector<std::size_t> bin_counts;  // half-open [lo, hi), last bin closed
};

struct HistogramReport {
  HistogramSeries true_series;
  HistogramSeries false_series;
  std::size_t excluded = 0;  // Unknown or confidence-free predictions
};

// Bins True/False predictions that carry confidence into equal-width bins
// over [0,1]. bin_width must divide 1 evenly.
HistogramReport histogram(const std::vector<Prediction>& predictions, double bin_width = 0.1);

struct SplitReport {
  ConfusionCounts all;
  ConfusionCounts parametric;
  ConfusionCounts counterfactual;
};

// Per-split confusion plus the elementwise-sum aggregate. Every outcome must
// have a split label; a missing one throws naming the sample id.
SplitReport split_report(PromptMode mode, const std::vector<SampleOutcome>& outcomes,
                         const std::map<std::string, SplitKind>& splits);

// CSV renderers for report files.
std::string confusion_csv(const std::vector<std::pair<std::string, ConfusionCounts>>& rows);
std::string ratios_csv(const std::vector<std::pair<std::string, ConfusionCounts>>& rows);
std::string histogram_csv(const HistogramSeries& series);

}  // namespace fnh

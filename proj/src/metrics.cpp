#include "fnh/metrics.hpp"

#include <cmath>
#include <sstream>

#include "fnh/errors.hpp"

namespace fnh {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  tp += other.tp;
  tn += other.tn;
  fp += other.fp;
  fn += other.fn;
  unknown += other.unknown;
  total += other.total;
  return *this;
}

ConfusionCounts tally(PromptMode mode, const std::vector<std::pair<bool, Label>>& records) {
  ConfusionCounts counts;
  counts.total = records.size();
  for (const auto& [truth, label] : records) {
    if (label == Label::Unknown) {
      ++counts.unknown;
      continue;
    }
    switch (mode) {
      case PromptMode::Original:
        if (truth) {
          label == Label::True ? ++counts.tp : ++counts.fn;
        } else {
          label == Label::False ? ++counts.tn : ++counts.fp;
        }
        break;
      case PromptMode::AllTrue:
        // Target answer is always True; False responses are false negatives.
        label == Label::True ? ++counts.tp : ++counts.fn;
        break;
      case PromptMode::AllFalse:
        // Target answer is always False; True responses are false positives.
        label == Label::False ? ++counts.tn : ++counts.fp;
        break;
    }
  }
  return counts;
}

ConfusionCounts tally(PromptMode mode, const std::vector<SampleOutcome>& outcomes) {
  std::vector<std::pair<bool, Label>> records;
  records.reserve(outcomes.size());
  for (const SampleOutcome& outcome : outcomes) records.emplace_back(outcome.truth, outcome.label);
  return tally(mode, records);
}

double ratio_valid(std::size_t count, const ConfusionCounts& counts) {
  if (counts.total <= counts.unknown) {
    throw MetricsError("ratio over valid predictions is undefined: no valid predictions");
  }
  return static_cast<double>(count) / static_cast<double>(counts.total - counts.unknown);
}

double fn_rate(const ConfusionCounts& counts) {
  std::size_t denom = counts.tp + counts.fn;
  if (denom == 0) throw MetricsError("fn_rate undefined: tp + fn = 0");
  return static_cast<double>(counts.fn) / static_cast<double>(denom);
}

double fp_rate(const ConfusionCounts& counts) {
  std::size_t denom = counts.tn + counts.fp;
  if (denom == 0) throw MetricsError("fp_rate undefined: tn + fp = 0");
  return static_cast<double>(counts.fp) / static_cast<double>(denom);
}

HistogramReport histogram(const std::vector<Prediction>& predictions, double bin_width) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) {
    throw ConfigError("bin width must lie in (0, 1]");
  }
  double bins_exact = 1.0 / bin_width;
  int nbins = static_cast<int>(std::llround(bins_exact));
  if (std::abs(bins_exact - nbins) > 1e-9) {
    throw ConfigError("bin width must divide 1 evenly");
  }

  HistogramReport report;
  report.true_series.predicted_label = Label::True;
  report.false_series.predicted_label = Label::False;
  for (HistogramSeries* series : {&report.true_series, &report.false_series}) {
    series->bin_counts.assign(static_cast<std::size_t>(nbins), 0);
    series->bin_edges.resize(static_cast<std::size_t>(nbins) + 1);
    for (int i = 0; i <= nbins; ++i) {
      series->bin_edges[static_cast<std::size_t>(i)] = i == nbins ? 1.0 : i * bin_width;
    }
  }

  for (const Prediction& prediction : predictions) {
    if (prediction.label == Label::Unknown || !prediction.confidence.has_value()) {
      ++report.excluded;
      continue;
    }
    double c = *prediction.confidence;
    int bin = c >= 1.0 ? nbins - 1 : static_cast<int>(c / bin_width);
    if (bin >= nbins) bin = nbins - 1;
    HistogramSeries& series =
        prediction.label == Label::True ? report.true_series : report.false_series;
    ++series.bin_counts[static_cast<std::size_t>(bin)];
  }
  return report;
}

SplitReport split_report(PromptMode mode, const std::vector<SampleOutcome>& outcomes,
                         const std::map<std::string, SplitKind>& splits) {
  std::vector<SampleOutcome> parametric;
  std::vector<SampleOutcome> counterfactual;
  for (const SampleOutcome& outcome : outcomes) {
    auto it = splits.find(outcome.sample_id);
    if (it == splits.end()) {
      throw MetricsError("missing split label for sample \"" + outcome.sample_id + "\"");
    }
    (it->second == SplitKind::Parametric ? parametric : counterfactual).push_back(outcome);
  }

  SplitReport report;
  report.parametric = tally(mode, parametric);
  report.counterfactual = tally(mode, counterfactual);
  report.all = report.parametric + report.counterfactual;
  return report;
}

std::string confusion_csv(const std::vector<std::pair<std::string, ConfusionCounts>>& rows) {
  std::ostringstream out;
  out << "split,tp,tn,fp,fn,unknown,total\n";
  for (const auto& [name, c] : rows) {
    out << name << ',' << c.tp << ',' << c.tn << ',' << c.fp << ',' << c.fn << ',' << c.unknown
        << ',' << c.total << '\n';
  }
  return out.str();
}

std::string ratios_csv(const std::vector<std::pair<std::string, ConfusionCounts>>& rows) {
  std::ostringstream out;
  out << "split,metric,value\n";
  auto emit = [&out](const std::string& split, const char* metric, double value) {
    out << split << ',' << metric << ',' << value << '\n';
  };
  for (const auto& [name, c] : rows) {
    if (c.total > c.unknown) {
      emit(name, "fn_ratio_valid", ratio_valid(c.fn, c));
      emit(name, "fp_ratio_valid", ratio_valid(c.fp, c));
    }
    if (c.total > 0) {
      emit(name, "unknown_ratio", static_cast<double>(c.unknown) / static_cast<double>(c.total));
    }
    if (c.tp + c.fn > 0) emit(name, "fn_rate", fn_rate(c));
    if (c.tn + c.fp > 0) emit(name, "fp_rate", fp_rate(c));
  }
  return out.str();
}

std::string histogram_csv(const HistogramSeries& series) {
  std::ostringstream out;
  out << "label,bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < series.bin_counts.size(); ++i) {
    out << to_string(series.predicted_label) << ',' << series.bin_edges[i] << ','
        << series.bin_edges[i + 1] << ',' << series.bin_counts[i] << '\n';
  }
  return out.str();
}

}  // namespace fnh

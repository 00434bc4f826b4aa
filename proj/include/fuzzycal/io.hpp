#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fuzzycal/corrector.hpp"
#include "fuzzycal/dataset.hpp"
#include "fuzzycal/errors.hpp"
#include "fuzzycal/membership.hpp"
#include "fuzzycal/metrics.hpp"
#include "fuzzycal/solver.hpp"
#include "fuzzycal/version.hpp"

namespace fuzzycal {

enum class FileFormat { Csv, Jsonl };

/// Picks the format from the file extension; anything other than .csv or
/// .jsonl is an error so a typo cannot silently select the wrong parser.
inline FileFormat infer_format(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    return FileFormat::Csv;
  }
  if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0) {
    return FileFormat::Jsonl;
  }
  throw DataError("cannot infer file format from extension: " + path);
}

namespace detail_io {

inline constexpr double kRowSumTolerance = 1e-6;

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw DataError("line " + std::to_string(line_no) + ": not a number: '" +
                    std::string(token) + "'");
  }
  return value;
}

inline int parse_int(std::string_view token, std::size_t line_no) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw DataError("line " + std::to_string(line_no) + ": not an integer: '" +
                    std::string(token) + "'");
  }
  return value;
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

/// Validates one parsed row and appends it, renormalizing when the sum is
/// within tolerance of 1.
inline void append_row(LabeledProbabilities& data, int label, std::vector<double>& row,
                       std::size_t line_no) {
  double sum = 0.0;
  for (double v : row) {
    if (std::isnan(v) || std::isinf(v)) {
      throw DataError("line " + std::to_string(line_no) + ": non-finite probability");
    }
    if (v < 0.0) {
      throw DataError("line " + std::to_string(line_no) + ": negative probability");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    throw DataError("line " + std::to_string(line_no) + ": row sums to " +
                    format_double(sum) + ", outside 1 +/- 1e-6");
  }
  if (label < 0 || static_cast<std::size_t>(label) >= data.n_classes) {
    throw DataError("line " + std::to_string(line_no) + ": label " + std::to_string(label) +
                    " out of range [0, " + std::to_string(data.n_classes) + ")");
  }
  for (double v : row) {
    data.probs.push_back(v / sum);
  }
  data.labels.push_back(label);
}

}  // namespace detail_io

inline LabeledProbabilities load_dataset(std::istream& in, FileFormat format,
                                         const std::string& source) {
  LabeledProbabilities data;
  data.source = source;
  std::string line;
  std::size_t line_no = 0;

  if (format == FileFormat::Csv) {
    if (!std::getline(in, line)) {
      throw DataError(source + ": empty file");
    }
    ++line_no;
    const auto header = detail_io::split_csv(line);
    if (header.size() < 3 || header[0] != "label") {
      throw DataError(source + ": expected header 'label,p0,p1,...'");
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
      if (header[i] != "p" + std::to_string(i - 1)) {
        throw DataError(source + ": bad header column '" + std::string(header[i]) +
                        "', expected 'p" + std::to_string(i - 1) + "'");
      }
    }
    data.n_classes = header.size() - 1;

    std::vector<double> row(data.n_classes);
    while (std::getline(in, line)) {
      ++line_no;
      if (detail_io::trim(line).empty()) {
        continue;
      }
      const auto fields = detail_io::split_csv(line);
      if (fields.size() != data.n_classes + 1) {
        throw DataError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(data.n_classes + 1) + " fields, got " +
                        std::to_string(fields.size()));
      }
      const int label = detail_io::parse_int(fields[0], line_no);
      for (std::size_t i = 0; i < data.n_classes; ++i) {
        row[i] = detail_io::parse_double(fields[i + 1], line_no);
      }
      detail_io::append_row(data, label, row, line_no);
    }
  } else {
    std::vector<double> row;
    while (std::getline(in, line)) {
      ++line_no;
      if (detail_io::trim(line).empty()) {
        continue;
      }
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError("line " + std::to_string(line_no) + ": " + e.what());
      }
      if (!obj.is_object() || !obj.contains("label") || !obj.contains("probs")) {
        throw DataError("line " + std::to_string(line_no) +
                        ": expected an object with 'label' and 'probs'");
      }
      if (!obj["label"].is_number_integer()) {
        throw DataError("line " + std::to_string(line_no) + ": 'label' must be an integer");
      }
      const auto& probs = obj["probs"];
      if (!probs.is_array() || probs.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": 'probs' must be a non-empty array");
      }
      if (data.n_classes == 0) {
        data.n_classes = probs.size();
      } else if (probs.size() != data.n_classes) {
        throw DataError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(data.n_classes) + " probabilities, got " +
                        std::to_string(probs.size()));
      }
      row.clear();
      for (const auto& v : probs) {
        if (!v.is_number()) {
          throw DataError("line " + std::to_string(line_no) + ": non-numeric probability");
        }
        row.push_back(v.get<double>());
      }
      detail_io::append_row(data, obj["label"].get<int>(), row, line_no);
    }
  }

  if (data.labels.empty()) {
    throw DataError(source + ": no data rows");
  }
  if (data.n_classes < 2) {
    throw DataError(source + ": need at least 2 classes");
  }
  return data;
}

inline LabeledProbabilities load_dataset(const std::string& path, FileFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  return load_dataset(in, format, path);
}

inline LabeledProbabilities load_dataset(const std::string& path) {
  return load_dataset(path, infer_format(path));
}

inline void save_dataset(const LabeledProbabilities& data, std::ostream& out,
                         FileFormat format) {
  if (format == FileFormat::Csv) {
    out << "label";
    for (std::size_t c = 0; c < data.n_classes; ++c) {
      out << ",p" << c;
    }
    out << '\n';
    for (std::size_t m = 0; m < data.num_rows(); ++m) {
      out << data.labels[m];
      for (double v : data.row(m)) {
        out << ',' << detail_io::format_double(v);
      }
      out << '\n';
    }
  } else {
    for (std::size_t m = 0; m < data.num_rows(); ++m) {
      nlohmann::json obj;
      obj["label"] = data.labels[m];
      obj["probs"] = std::vector<double>(data.row(m).begin(), data.row(m).end());
      out << obj.dump() << '\n';
    }
  }
}

inline void save_dataset(const LabeledProbabilities& data, const std::string& path,
                         FileFormat format) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  save_dataset(data, out, format);
}

inline void save_dataset(const LabeledProbabilities& data, const std::string& path) {
  save_dataset(data, path, infer_format(path));
}

/// Uniform subsample without replacement; the surviving rows keep their
/// original relative order. Returns the input unchanged when k >= M.
inline LabeledProbabilities subsample_rows(const LabeledProbabilities& data, std::size_t k,
                                           std::uint64_t seed) {
  if (k < 1) {
    throw std::invalid_argument("subsample size must be at least 1");
  }
  if (k >= data.num_rows()) {
    return data;
  }
  std::vector<std::size_t> indices(data.num_rows());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    indices[i] = i;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + detail::uniform_below(rng, indices.size() - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(k);
  std::sort(indices.begin(), indices.end());

  LabeledProbabilities out;
  out.n_classes = data.n_classes;
  out.class_names = data.class_names;
  out.source = data.source + " (subsample " + std::to_string(k) + ")";
  out.labels.reserve(k);
  out.probs.reserve(k * data.n_classes);
  for (std::size_t idx : indices) {
    out.labels.push_back(data.labels[idx]);
    const auto row = data.row(idx);
    out.probs.insert(out.probs.end(), row.begin(), row.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Selection files
// ---------------------------------------------------------------------------

inline void save_selection(const Selection& selection, std::ostream& out) {
  validate_selection(selection);
  const SelectionProvenance prov = selection.provenance.value_or(SelectionProvenance{
      ObjectiveConfig{}.alpha, ObjectiveConfig{}.beta, ObjectiveConfig{}.lambda, 0,
      all_function_ids()});
  nlohmann::json obj;
  obj["version"] = kSelectionFormatVersion;
  obj["num_classes"] = selection.functions.size();
  obj["functions"] = selection.functions;
  obj["alpha"] = prov.alpha;
  obj["beta"] = prov.beta;
  obj["lambda"] = prov.lambda;
  obj["seed"] = prov.seed;
  obj["allowed"] = prov.allowed;
  obj["tool_version"] = kToolVersion;
  out << obj.dump(2) << '\n';
}

inline void save_selection(const Selection& selection, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  save_selection(selection, out);
}

inline Selection load_selection(std::istream& in, const std::string& source) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(source + ": " + e.what());
  }
  if (!obj.is_object()) {
    throw DataError(source + ": expected a JSON object");
  }
  if (!obj.contains("version") || !obj["version"].is_number_integer()) {
    throw DataError(source + ": missing integer 'version'");
  }
  if (obj["version"].get<int>() != kSelectionFormatVersion) {
    throw DataError(source + ": unsupported selection file version " +
                    std::to_string(obj["version"].get<int>()) + ", expected " +
                    std::to_string(kSelectionFormatVersion));
  }
  for (const char* key : {"num_classes", "functions", "alpha", "beta", "lambda", "seed",
                          "allowed"}) {
    if (!obj.contains(key)) {
      throw DataError(source + ": missing field '" + std::string(key) + "'");
    }
  }

  Selection selection;
  selection.functions = obj["functions"].get<std::vector<int>>();
  if (selection.functions.size() != obj["num_classes"].get<std::size_t>()) {
    throw DataError(source + ": 'functions' length does not match 'num_classes'");
  }
  SelectionProvenance prov;
  prov.alpha = obj["alpha"].get<double>();
  prov.beta = obj["beta"].get<double>();
  prov.lambda = obj["lambda"].get<double>();
  prov.seed = obj["seed"].get<std::uint64_t>();
  prov.allowed = obj["allowed"].get<std::vector<int>>();
  selection.provenance = std::move(prov);

  try {
    validate_selection(selection);
    detail::validate_allowed(selection.provenance->allowed);
  } catch (const std::invalid_argument& e) {
    throw DataError(source + ": " + e.what());
  }
  return selection;
}

inline Selection load_selection(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  return load_selection(in, path);
}

// ---------------------------------------------------------------------------
// Predictions and traces
// ---------------------------------------------------------------------------

inline void save_predictions(const CorrectionResult& result, std::ostream& out) {
  out << "prediction,fallback\n";
  for (std::size_t m = 0; m < result.predictions.size(); ++m) {
    out << result.predictions[m] << ',' << static_cast<int>(result.fallback_rows[m]) << '\n';
  }
}

inline void save_predictions(const CorrectionResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  save_predictions(result, out);
}

/// Line-delimited JSON records, one per annealing step.
inline void write_trace(const SolveTrace& trace, std::ostream& out) {
  for (const TraceStep& s : trace.steps) {
    nlohmann::json obj;
    obj["step"] = s.step;
    obj["temperature"] = s.temperature;
    obj["proposed_energy"] = s.proposed_energy;
    obj["accepted"] = s.accepted;
    obj["best_energy"] = s.best_energy;
    out << obj.dump() << '\n';
  }
}

inline void write_trace(const SolveTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  write_trace(trace, out);
}

// ---------------------------------------------------------------------------
// Evaluation report
// ---------------------------------------------------------------------------

inline constexpr std::size_t kNumBuckets = 5;

inline constexpr std::array<const char*, kNumBuckets> kBucketLabels{
    "[0.0,0.2]", "(0.2,0.4]", "(0.4,0.6]", "(0.6,0.8]", "(0.8,1.0]"};

/// First bucket is closed on both sides, the rest are half-open from the
/// left, so p = 0.2 lands in the first bucket, p = 0.4 in the second, etc.
inline std::size_t bucket_index(double p) {
  if (p <= 0.2) return 0;
  if (p <= 0.4) return 1;
  if (p <= 0.6) return 2;
  if (p <= 0.8) return 3;
  return 4;
}

struct BucketCell {
  std::size_t count = 0;
  std::optional<double> accuracy_before;
  std::optional<double> accuracy_after;
};

/// Per class, instances of that ground-truth class grouped by the class's
/// original probability.
struct BucketReport {
  std::vector<std::array<BucketCell, kNumBuckets>> per_class;
};

struct Exemplar {
  std::size_t row = 0;
  int label = 0;
  std::vector<double> original;
  int original_prediction = 0;
  std::vector<double> corrected;
  int corrected_prediction = 0;
  bool fallback = false;
};

struct Report {
  std::size_t num_rows = 0;
  std::size_t num_classes = 0;
  std::string source;
  std::vector<std::string> class_names;
  ObjectiveConfig objective;
  EnergyBreakdown before;
  EnergyBreakdown after;
  Selection selection;
  std::size_t fallback_count = 0;
  BucketReport buckets;
  std::vector<Exemplar> exemplars;
};

/// Builds the full before/after evaluation of a selection on a dataset. The
/// objective weights come from the selection's provenance when present.
/// Exemplars prefer rows whose prediction was flipped by the correction.
inline Report emit_report(const LabeledProbabilities& data, const Selection& selection,
                          std::size_t exemplar_count = 5) {
  if (selection.functions.size() != data.n_classes) {
    throw std::invalid_argument("selection size does not match dataset class count");
  }
  validate_shape(data);

  Report report;
  report.num_rows = data.num_rows();
  report.num_classes = data.n_classes;
  report.source = data.source;
  report.class_names = data.class_names;
  report.selection = selection;
  if (selection.provenance.has_value()) {
    report.objective = ObjectiveConfig{selection.provenance->alpha, selection.provenance->beta,
                                       selection.provenance->lambda};
  }

  const std::vector<int> raw = raw_predictions(data);
  const CorrectionResult corrected = correct_dataset(data, selection);
  report.before = evaluate_predictions(raw, data.labels, data.n_classes, report.objective);
  report.after =
      evaluate_predictions(corrected.predictions, data.labels, data.n_classes, report.objective);
  report.fallback_count = corrected.fallback_count;

  // range buckets over each class's original probability, ground truth only
  report.buckets.per_class.resize(data.n_classes);
  std::vector<std::array<std::size_t, kNumBuckets>> correct_before(
      data.n_classes, std::array<std::size_t, kNumBuckets>{});
  std::vector<std::array<std::size_t, kNumBuckets>> correct_after(
      data.n_classes, std::array<std::size_t, kNumBuckets>{});
  for (std::size_t m = 0; m < data.num_rows(); ++m) {
    const int y = data.labels[m];
    const std::size_t b = bucket_index(data.row(m)[static_cast<std::size_t>(y)]);
    auto& cell = report.buckets.per_class[static_cast<std::size_t>(y)][b];
    ++cell.count;
    if (raw[m] == y) {
      ++correct_before[static_cast<std::size_t>(y)][b];
    }
    if (corrected.predictions[m] == y) {
      ++correct_after[static_cast<std::size_t>(y)][b];
    }
  }
  for (std::size_t c = 0; c < data.n_classes; ++c) {
    for (std::size_t b = 0; b < kNumBuckets; ++b) {
      auto& cell = report.buckets.per_class[c][b];
      if (cell.count > 0) {
        cell.accuracy_before =
            static_cast<double>(correct_before[c][b]) / static_cast<double>(cell.count);
        cell.accuracy_after =
            static_cast<double>(correct_after[c][b]) / static_cast<double>(cell.count);
      }
    }
  }

  // exemplars: flipped rows first, then leading rows to fill up
  auto add_exemplar = [&](std::size_t m) {
    Exemplar e;
    e.row = m;
    e.label = data.labels[m];
    e.original.assign(data.row(m).begin(), data.row(m).end());
    e.original_prediction = raw[m];
    e.corrected.assign(corrected.corrected.begin() + static_cast<std::ptrdiff_t>(m * data.n_classes),
                       corrected.corrected.begin() + static_cast<std::ptrdiff_t>((m + 1) * data.n_classes));
    e.corrected_prediction = corrected.predictions[m];
    e.fallback = corrected.fallback_rows[m] != 0;
    report.exemplars.push_back(std::move(e));
  };
  for (std::size_t m = 0; m < data.num_rows() && report.exemplars.size() < exemplar_count; ++m) {
    if (corrected.predictions[m] != raw[m]) {
      add_exemplar(m);
    }
  }
  for (std::size_t m = 0; m < data.num_rows() && report.exemplars.size() < exemplar_count; ++m) {
    if (corrected.predictions[m] == raw[m]) {
      add_exemplar(m);
    }
  }
  return report;
}

inline nlohmann::json breakdown_to_json(const EnergyBreakdown& b) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& c : b.per_class) {
    nlohmann::json entry;
    entry["support"] = c.support;
    if (c.accuracy.has_value()) {
      entry["accuracy"] = *c.accuracy;
    } else {
      entry["accuracy"] = nullptr;
    }
    per_class.push_back(std::move(entry));
  }
  return nlohmann::json{{"accuracy", b.z_acc},
                        {"cobias", b.z_cobias},
                        {"extreme_penalty", b.z_extreme},
                        {"energy", b.energy},
                        {"per_class", std::move(per_class)}};
}

inline nlohmann::json report_to_json(const Report& report) {
  nlohmann::json obj;
  obj["rows"] = report.num_rows;
  obj["classes"] = report.num_classes;
  obj["source"] = report.source;
  if (!report.class_names.empty()) {
    obj["class_names"] = report.class_names;
  }
  obj["objective"] = {{"alpha", report.objective.alpha},
                      {"beta", report.objective.beta},
                      {"lambda", report.objective.lambda}};
  obj["before"] = breakdown_to_json(report.before);
  obj["after"] = breakdown_to_json(report.after);

  nlohmann::json functions = nlohmann::json::array();
  for (std::size_t c = 0; c < report.selection.functions.size(); ++c) {
    const MembershipFunction& fn = describe(report.selection.functions[c]);
    functions.push_back({{"class", c},
                         {"id", fn.id},
                         {"name", fn.name},
                         {"short_form", fn.short_form},
                         {"a", fn.a},
                         {"b", fn.b},
                         {"c", fn.c}});
  }
  obj["selection"] = std::move(functions);
  obj["fallback_count"] = report.fallback_count;

  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& cls : report.buckets.per_class) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t b = 0; b < kNumBuckets; ++b) {
      nlohmann::json cell;
      cell["range"] = kBucketLabels[b];
      cell["count"] = cls[b].count;
      cell["accuracy_before"] =
          cls[b].accuracy_before.has_value() ? nlohmann::json(*cls[b].accuracy_before) : nullptr;
      cell["accuracy_after"] =
          cls[b].accuracy_after.has_value() ? nlohmann::json(*cls[b].accuracy_after) : nullptr;
      row.push_back(std::move(cell));
    }
    buckets.push_back(std::move(row));
  }
  obj["buckets"] = std::move(buckets);

  nlohmann::json exemplars = nlohmann::json::array();
  for (const Exemplar& e : report.exemplars) {
    exemplars.push_back({{"row", e.row},
                         {"label", e.label},
                         {"original", e.original},
                         {"original_prediction", e.original_prediction},
                         {"corrected", e.corrected},
                         {"corrected_prediction", e.corrected_prediction},
                         {"fallback", e.fallback}});
  }
  obj["exemplars"] = std::move(exemplars);
  return obj;
}

inline void save_report(const Report& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  out << report_to_json(report).dump(2) << '\n';
}

namespace detail_io {

inline std::string class_label(const Report& report, std::size_t c) {
  if (c < report.class_names.size()) {
    return report.class_names[c];
  }
  return "class " + std::to_string(c);
}

inline std::string pct(std::optional<double> v) {
  if (!v.has_value()) {
    return "-";
  }
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << *v * 100.0 << '%';
  return os.str();
}

}  // namespace detail_io

/// Human-readable rendering of the same report.
inline void render_report(const Report& report, std::ostream& out) {
  using detail_io::pct;
  out << "dataset: " << report.source << " (" << report.num_rows << " rows, "
      << report.num_classes << " classes)\n";
  out << "objective: alpha=" << report.objective.alpha << " beta=" << report.objective.beta
      << " lambda=" << report.objective.lambda << "\n\n";

  out << "            accuracy   COBias    extreme   energy\n";
  std::ostringstream before_line, after_line;
  before_line << "  before    " << std::left << std::setw(11) << pct(report.before.z_acc)
              << std::setw(10) << pct(report.before.z_cobias) << std::setw(10)
              << detail_io::format_double(report.before.z_extreme)
              << detail_io::format_double(report.before.energy);
  after_line << "  after     " << std::left << std::setw(11) << pct(report.after.z_acc)
             << std::setw(10) << pct(report.after.z_cobias) << std::setw(10)
             << detail_io::format_double(report.after.z_extreme)
             << detail_io::format_double(report.after.energy);
  out << before_line.str() << '\n' << after_line.str() << "\n\n";

  out << "per-class:\n";
  for (std::size_t c = 0; c < report.num_classes; ++c) {
    const MembershipFunction& fn = describe(report.selection.functions[c]);
    out << "  " << std::left << std::setw(12) << detail_io::class_label(report, c)
        << " acc " << std::setw(7) << pct(report.before.per_class[c].accuracy) << " -> "
        << std::setw(7) << pct(report.after.per_class[c].accuracy) << "  via f" << fn.id << " ("
        << fn.short_form << ")\n";
  }
  out << "\nfallback rows: " << report.fallback_count << "\n\n";

  out << "range buckets (count, before -> after):\n";
  for (std::size_t c = 0; c < report.num_classes; ++c) {
    out << "  " << detail_io::class_label(report, c) << ":\n";
    for (std::size_t b = 0; b < kNumBuckets; ++b) {
      const BucketCell& cell = report.buckets.per_class[c][b];
      out << "    " << kBucketLabels[b] << "  " << std::setw(6) << cell.count << "  "
          << pct(cell.accuracy_before) << " -> " << pct(cell.accuracy_after) << '\n';
    }
  }

  if (!report.exemplars.empty()) {
    out << "\nexemplars:\n";
    for (const Exemplar& e : report.exemplars) {
      out << "  row " << e.row << " (label " << detail_io::class_label(report, static_cast<std::size_t>(e.label))
          << "): [";
      for (std::size_t i = 0; i < e.original.size(); ++i) {
        out << (i ? ", " : "") << detail_io::format_double(e.original[i]);
      }
      out << "] pred " << e.original_prediction << " -> [";
      for (std::size_t i = 0; i < e.corrected.size(); ++i) {
        out << (i ? ", " : "") << detail_io::format_double(e.corrected[i]);
      }
      out << "] pred " << e.corrected_prediction;
      if (e.fallback) {
        out << " (fallback)";
      }
      out << '\n';
    }
  }
}

}  // namespace fuzzycal

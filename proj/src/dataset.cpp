#include "followme/dataset.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "followme/errors.hpp"

namespace followme {

namespace {

using json = nlohmann::json;

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ParseError("read_csv: bad numeric field '" + std::string(field) + "' at line " +
                         std::to_string(line),
                     line);
  }
  return value;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

}  // namespace

void Dataset::validate() const {
  const double dt = 1.0 / rate_hz;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double gap = samples[i].obs.t - samples[i - 1].obs.t;
    if (!(gap > 0.0)) {
      throw ValidationError("Dataset: non-monotonic timestamps at sample " + std::to_string(i));
    }
    if (std::abs(gap - dt) > 1e-9) {
      throw ValidationError("Dataset: timestamp spacing " + std::to_string(gap) +
                            " deviates from 1/rate_hz at sample " + std::to_string(i));
    }
  }
}

int feature_dim(InputConfig cfg) {
  return cfg == InputConfig::kRangesAndAngles ? 4 : 2;
}

std::string to_string(InputConfig cfg) {
  switch (cfg) {
    case InputConfig::kRangesOnly: return "ranges";
    case InputConfig::kAnglesOnly: return "angles";
    case InputConfig::kRangesAndAngles: return "all";
  }
  return "all";
}

InputConfig input_config_from_string(const std::string& name) {
  if (name == "ranges") return InputConfig::kRangesOnly;
  if (name == "angles") return InputConfig::kAnglesOnly;
  if (name == "all") return InputConfig::kRangesAndAngles;
  throw Error("unknown input config '" + name + "' (expected ranges|angles|all)");
}

Eigen::VectorXd select_inputs(const UwbObservation& obs, InputConfig cfg) {
  switch (cfg) {
    case InputConfig::kRangesOnly: {
      Eigen::VectorXd x(2);
      x << obs.r1, obs.r2;
      return x;
    }
    case InputConfig::kAnglesOnly: {
      Eigen::VectorXd x(2);
      x << obs.a1, obs.a2;
      return x;
    }
    case InputConfig::kRangesAndAngles: {
      Eigen::VectorXd x(4);
      x << obs.r1, obs.r2, obs.a1, obs.a2;
      return x;
    }
  }
  throw Error("select_inputs: unreachable");
}

std::vector<Window> make_windows(const Dataset& ds, InputConfig cfg, int window_len, int stride) {
  if (window_len < 1 || stride < 1) {
    throw Error("make_windows: window_len and stride must be >= 1");
  }
  const std::size_t n = ds.size();
  if (n < static_cast<std::size_t>(window_len)) {
    throw InsufficientData("make_windows: dataset has " + std::to_string(n) +
                           " samples, need at least " + std::to_string(window_len));
  }
  const std::size_t count = (n - window_len) / stride + 1;
  const int dim = feature_dim(cfg);
  std::vector<Window> windows;
  windows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t begin = k * stride;
    Window w;
    w.features.resize(window_len, dim);
    for (int row = 0; row < window_len; ++row) {
      w.features.row(row) = select_inputs(ds.samples[begin + row].obs, cfg).transpose();
    }
    w.target = ds.samples[begin + window_len - 1].action;
    windows.push_back(std::move(w));
  }
  return windows;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double train_fraction,
                                          std::size_t min_partition) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw Error("split_dataset: train_fraction must lie strictly inside (0, 1)");
  }
  const std::size_t n = ds.size();
  const auto n_train = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(n)));
  const std::size_t n_test = n - n_train;
  if (n_train < min_partition || n_test < min_partition) {
    throw InsufficientData("split_dataset: partition sizes " + std::to_string(n_train) + "/" +
                           std::to_string(n_test) + " below minimum " +
                           std::to_string(min_partition));
  }
  Dataset train{{ds.samples.begin(), ds.samples.begin() + n_train}, ds.rate_hz, ds.meta};
  Dataset test{{ds.samples.begin() + n_train, ds.samples.end()}, ds.rate_hz, ds.meta};
  return {std::move(train), std::move(test)};
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("write_csv: cannot open " + path.string() + " for writing");
  }
  out << "t,r1,r2,a1,a2,v,omega\n";
  for (const DemoSample& s : ds.samples) {
    out << format_double(s.obs.t) << ',' << format_double(s.obs.r1) << ','
        << format_double(s.obs.r2) << ',' << format_double(s.obs.a1) << ','
        << format_double(s.obs.a2) << ',' << format_double(s.action.v) << ','
        << format_double(s.action.omega) << '\n';
  }
  if (!out) {
    throw IoError("write_csv: write to " + path.string() + " failed");
  }

  json meta;
  meta["format_version"] = 1;
  meta["rate_hz"] = ds.rate_hz;
  meta["seed"] = ds.meta.seed;
  meta["scenario"] = ds.meta.scenario;
  meta["gains"] = ds.meta.gains;
  std::ofstream meta_out(sidecar_path(path), std::ios::binary);
  if (!meta_out) {
    throw IoError("write_csv: cannot open sidecar " + sidecar_path(path).string());
  }
  meta_out << meta.dump(2) << '\n';
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("read_csv: cannot open " + path.string());
  }
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw ParseError("read_csv: empty file (missing header)", 1);
  }
  ++line_no;
  if (line == "t,r1,r2,a1,a2,v,omega\r") line.pop_back();
  if (line != "t,r1,r2,a1,a2,v,omega") {
    throw ParseError("read_csv: unexpected header '" + line + "'", line_no);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string_view, 7> fields;
    std::size_t field_count = 0;
    std::size_t start = 0;
    const std::string_view view(line);
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::string_view field =
          comma == std::string_view::npos ? view.substr(start) : view.substr(start, comma - start);
      if (field_count < fields.size()) fields[field_count] = field;
      ++field_count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field_count != 7) {
      throw ParseError("read_csv: expected 7 fields, got " + std::to_string(field_count) +
                           " at line " + std::to_string(line_no),
                       line_no);
    }
    DemoSample s;
    s.obs.t = parse_double(fields[0], line_no);
    s.obs.r1 = parse_double(fields[1], line_no);
    s.obs.r2 = parse_double(fields[2], line_no);
    s.obs.a1 = parse_double(fields[3], line_no);
    s.obs.a2 = parse_double(fields[4], line_no);
    s.action.v = parse_double(fields[5], line_no);
    s.action.omega = parse_double(fields[6], line_no);
    ds.samples.push_back(s);
  }

  const std::filesystem::path meta_path = sidecar_path(path);
  bool have_rate = false;
  if (std::filesystem::exists(meta_path)) {
    std::ifstream meta_in(meta_path, std::ios::binary);
    json meta = json::parse(meta_in, nullptr, /*allow_exceptions=*/false);
    if (meta.is_discarded()) {
      throw ParseError("read_csv: sidecar " + meta_path.string() + " is not valid JSON", 0);
    }
    if (meta.contains("rate_hz")) {
      ds.rate_hz = meta["rate_hz"].get<double>();
      have_rate = true;
    }
    if (meta.contains("seed")) ds.meta.seed = meta["seed"].get<std::uint64_t>();
    if (meta.contains("scenario")) ds.meta.scenario = meta["scenario"].get<std::string>();
    if (meta.contains("gains")) {
      ds.meta.gains = meta["gains"].get<std::map<std::string, double>>();
    }
  }
  if (!have_rate && ds.samples.size() >= 2) {
    ds.rate_hz = 1.0 / (ds.samples[1].obs.t - ds.samples[0].obs.t);
  }

  for (std::size_t i = 1; i < ds.samples.size(); ++i) {
    if (!(ds.samples[i].obs.t > ds.samples[i - 1].obs.t)) {
      throw ValidationError("read_csv: non-monotonic timestamps at row " + std::to_string(i + 1));
    }
  }
  return ds;
}

FeatureScaler FeatureScaler::fit(const Eigen::MatrixXd& features_by_row) {
  FeatureScaler s;
  s.mean = features_by_row.colwise().mean();
  const Eigen::MatrixXd centered = features_by_row.rowwise() - s.mean.transpose();
  s.stddev = (centered.array().square().colwise().mean()).sqrt();
  for (Eigen::Index i = 0; i < s.stddev.size(); ++i) {
    if (s.stddev[i] < 1e-12) s.stddev[i] = 1.0;
  }
  return s;
}

Eigen::VectorXd FeatureScaler::apply(const Eigen::VectorXd& x) const {
  return (x - mean).cwiseQuotient(stddev);
}

Eigen::MatrixXd FeatureScaler::apply_rows(const Eigen::MatrixXd& features_by_row) const {
  return (features_by_row.rowwise() - mean.transpose()).array().rowwise() /
         stddev.transpose().array();
}

}  // namespace followme

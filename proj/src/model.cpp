#include "followme/model.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "followme/errors.hpp"

namespace followme {

namespace {

using json = nlohmann::json;

constexpr int kFormatVersion = 1;

json tensor_to_json(const Eigen::MatrixXd& m) {
  json t;
  t["shape"] = {m.rows(), m.cols()};
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c));
    }
  }
  t["data"] = data;
  return t;
}

Eigen::MatrixXd tensor_from_json(const json& t) {
  if (!t.contains("shape") || !t.contains("data")) {
    throw CorruptModel("model file: tensor missing shape/data");
  }
  const auto shape = t["shape"].get<std::vector<Eigen::Index>>();
  if (shape.size() != 2) {
    throw CorruptModel("model file: tensor shape must have 2 entries");
  }
  const auto data = t["data"].get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != shape[0] * shape[1]) {
    throw CorruptModel("model file: tensor data length does not match shape");
  }
  Eigen::MatrixXd m(shape[0], shape[1]);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < shape[0]; ++r) {
    for (Eigen::Index c = 0; c < shape[1]; ++c) {
      m(r, c) = data[k++];
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return tensor_to_json(Eigen::MatrixXd(v));
}

Eigen::VectorXd vector_from_json(const json& t) {
  const Eigen::MatrixXd m = tensor_from_json(t);
  if (m.cols() != 1 && m.rows() != 1 && m.size() != 0) {
    throw CorruptModel("model file: expected a vector tensor");
  }
  Eigen::VectorXd v(m.size());
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      v[static_cast<Eigen::Index>(k++)] = m(r, c);
    }
  }
  return v;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMlp: return "mlp";
    case ModelKind::kLstm: return "lstm";
    case ModelKind::kSvr: return "svr";
  }
  return "mlp";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "mlp") return ModelKind::kMlp;
  if (name == "lstm") return ModelKind::kLstm;
  if (name == "svr") return ModelKind::kSvr;
  throw Error("unknown model kind '" + name + "' (expected mlp|lstm|svr)");
}

Eigen::Vector2d policy_raw_output(const Model& model, std::span<const UwbObservation> history) {
  if (history.empty()) {
    throw Error("policy_predict: empty observation history");
  }
  const auto featurize = [&](const UwbObservation& obs) {
    Eigen::VectorXd x = select_inputs(obs, model.input_config);
    return model.scaler ? model.scaler->apply(x) : x;
  };

  switch (model.kind) {
    case ModelKind::kMlp:
      return mlp_forward(std::get<MlpParams>(model.params), featurize(history.back()));
    case ModelKind::kSvr:
      return svr_predict(std::get<SvrParams>(model.params), featurize(history.back()));
    case ModelKind::kLstm: {
      const int w = model.window_len;
      Eigen::MatrixXd window(w, model.feature_dim());
      const std::size_t n = history.size();
      for (int row = 0; row < w; ++row) {
        // rows beyond the available history repeat the oldest observation
        const std::size_t pad = static_cast<std::size_t>(w) - std::min<std::size_t>(w, n);
        const std::size_t idx =
            static_cast<std::size_t>(row) < pad ? 0
                                                : n - (static_cast<std::size_t>(w) -
                                                       static_cast<std::size_t>(row));
        window.row(row) = featurize(history[idx]).transpose();
      }
      return lstm_forward(std::get<LstmParams>(model.params), window);
    }
  }
  throw Error("policy_raw_output: unreachable");
}

Twist policy_predict(const Model& model, std::span<const UwbObservation> history,
                     InputConfig cfg) {
  if (cfg != model.input_config) {
    throw ShapeMismatch("policy_predict: requested input config '" + to_string(cfg) +
                        "' does not match the model's '" + to_string(model.input_config) + "'");
  }
  const Eigen::Vector2d raw = policy_raw_output(model, history);
  return clamp_twist({raw[0], raw[1]});
}

void save_model(const Model& model, const std::filesystem::path& path) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = to_string(model.kind);
  doc["input_config"] = to_string(model.input_config);
  doc["window_len"] = model.window_len;
  if (model.scaler) {
    doc["scaler"] = {{"mean", vector_to_json(model.scaler->mean)},
                     {"stddev", vector_to_json(model.scaler->stddev)}};
  } else {
    doc["scaler"] = nullptr;
  }

  json tensors;
  json hyper;
  switch (model.kind) {
    case ModelKind::kMlp: {
      const auto& p = std::get<MlpParams>(model.params);
      hyper["hidden"] = p.hidden;
      hyper["input_dim"] = p.input_dim;
      hyper["activation"] = "tanh";
      tensors["W1"] = tensor_to_json(p.w1());
      tensors["b1"] = vector_to_json(p.b1());
      tensors["W2"] = tensor_to_json(p.w2());
      tensors["b2"] = vector_to_json(p.b2());
      break;
    }
    case ModelKind::kLstm: {
      const auto& p = std::get<LstmParams>(model.params);
      hyper["hidden"] = p.hidden;
      hyper["input_dim"] = p.input_dim;
      tensors["Wx"] = tensor_to_json(p.wx());
      tensors["Wh"] = tensor_to_json(p.wh());
      tensors["b"] = vector_to_json(p.b());
      tensors["Wy"] = tensor_to_json(p.wy());
      tensors["by"] = vector_to_json(p.by());
      break;
    }
    case ModelKind::kSvr: {
      const auto& p = std::get<SvrParams>(model.params);
      hyper["input_dim"] = p.input_dim;
      hyper["kernel"] = p.hyper.kernel == KernelKind::kRbf ? "rbf" : "linear";
      hyper["gamma"] = p.hyper.gamma;
      hyper["C"] = p.hyper.C;
      hyper["epsilon"] = p.hyper.epsilon;
      for (int out = 0; out < 2; ++out) {
        const auto& m = p.outputs[static_cast<std::size_t>(out)];
        const std::string suffix = std::to_string(out);
        tensors["support_vectors_" + suffix] = tensor_to_json(m.support_vectors);
        tensors["coeffs_" + suffix] = vector_to_json(m.coeffs);
        tensors["bias_" + suffix] = vector_to_json(Eigen::VectorXd::Constant(1, m.bias));
      }
      break;
    }
  }
  doc["hyperparameters"] = hyper;
  doc["tensors"] = tensors;

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("save_model: cannot open " + path.string() + " for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("save_model: write to " + path.string() + " failed");
  }
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("load_model: cannot open " + path.string());
  }
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw CorruptModel("load_model: " + path.string() + " is not valid JSON (truncated?)");
  }
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw CorruptModel("load_model: missing format_version");
  }
  if (doc["format_version"].get<int>() != kFormatVersion) {
    throw CorruptModel("load_model: unsupported format_version " +
                       std::to_string(doc["format_version"].get<int>()) + " (expected " +
                       std::to_string(kFormatVersion) + ")");
  }
  for (const char* key : {"kind", "input_config", "window_len", "hyperparameters", "tensors"}) {
    if (!doc.contains(key)) {
      throw CorruptModel(std::string("load_model: missing field '") + key + "'");
    }
  }

  Model model;
  model.kind = model_kind_from_string(doc["kind"].get<std::string>());
  model.input_config = input_config_from_string(doc["input_config"].get<std::string>());
  model.window_len = doc["window_len"].get<int>();
  if (doc.contains("scaler") && !doc["scaler"].is_null()) {
    FeatureScaler s;
    s.mean = vector_from_json(doc["scaler"]["mean"]);
    s.stddev = vector_from_json(doc["scaler"]["stddev"]);
    model.scaler = std::move(s);
  }

  const json& hyper = doc["hyperparameters"];
  const json& tensors = doc["tensors"];
  const auto require = [&](const char* name) -> const json& {
    if (!tensors.contains(name)) {
      throw CorruptModel(std::string("load_model: missing tensor '") + name + "'");
    }
    return tensors[name];
  };

  const int dim = feature_dim(model.input_config);
  if (model.scaler && (model.scaler->mean.size() != dim || model.scaler->stddev.size() != dim)) {
    throw CorruptModel("load_model: scaler dimension disagrees with input_config");
  }
  switch (model.kind) {
    case ModelKind::kMlp: {
      MlpParams p = MlpParams::zeros(hyper["input_dim"].get<int>(), hyper["hidden"].get<int>());
      if (p.input_dim != dim) {
        throw CorruptModel("load_model: MLP input_dim disagrees with input_config");
      }
      const Eigen::MatrixXd w1 = tensor_from_json(require("W1"));
      const Eigen::MatrixXd w2 = tensor_from_json(require("W2"));
      const Eigen::VectorXd b1 = vector_from_json(require("b1"));
      const Eigen::VectorXd b2 = vector_from_json(require("b2"));
      if (w1.rows() != p.hidden || w1.cols() != p.input_dim || w2.rows() != 2 ||
          w2.cols() != p.hidden || b1.size() != p.hidden || b2.size() != 2) {
        throw CorruptModel("load_model: MLP tensor shapes corrupted");
      }
      p.w1() = w1;
      p.b1() = b1;
      p.w2() = w2;
      p.b2() = b2;
      model.params = std::move(p);
      break;
    }
    case ModelKind::kLstm: {
      LstmParams p = LstmParams::zeros(hyper["input_dim"].get<int>(), hyper["hidden"].get<int>());
      if (p.input_dim != dim) {
        throw CorruptModel("load_model: LSTM input_dim disagrees with input_config");
      }
      const Eigen::MatrixXd wx = tensor_from_json(require("Wx"));
      const Eigen::MatrixXd wh = tensor_from_json(require("Wh"));
      const Eigen::MatrixXd wy = tensor_from_json(require("Wy"));
      const Eigen::VectorXd b = vector_from_json(require("b"));
      const Eigen::VectorXd by = vector_from_json(require("by"));
      if (wx.rows() != 4LL * p.hidden || wx.cols() != p.input_dim ||
          wh.rows() != 4LL * p.hidden || wh.cols() != p.hidden || wy.rows() != 2 ||
          wy.cols() != p.hidden || b.size() != 4LL * p.hidden || by.size() != 2) {
        throw CorruptModel("load_model: LSTM tensor shapes corrupted");
      }
      p.wx() = wx;
      p.wh() = wh;
      p.b() = b;
      p.wy() = wy;
      p.by() = by;
      model.params = std::move(p);
      break;
    }
    case ModelKind::kSvr: {
      SvrParams p;
      p.input_dim = hyper["input_dim"].get<int>();
      if (p.input_dim != dim) {
        throw CorruptModel("load_model: SVR input_dim disagrees with input_config");
      }
      p.hyper.kernel =
          hyper["kernel"].get<std::string>() == "linear" ? KernelKind::kLinear : KernelKind::kRbf;
      p.hyper.gamma = hyper["gamma"].get<double>();
      p.hyper.C = hyper["C"].get<double>();
      p.hyper.epsilon = hyper["epsilon"].get<double>();
      for (int out = 0; out < 2; ++out) {
        const std::string suffix = std::to_string(out);
        auto& m = p.outputs[static_cast<std::size_t>(out)];
        m.support_vectors = tensor_from_json(require(("support_vectors_" + suffix).c_str()));
        m.coeffs = vector_from_json(require(("coeffs_" + suffix).c_str()));
        const Eigen::VectorXd bias = vector_from_json(require(("bias_" + suffix).c_str()));
        if (bias.size() != 1 || m.support_vectors.rows() != m.coeffs.size() ||
            (m.support_vectors.rows() > 0 && m.support_vectors.cols() != p.input_dim)) {
          throw CorruptModel("load_model: SVR tensor shapes corrupted");
        }
        m.bias = bias[0];
      }
      model.params = std::move(p);
      break;
    }
  }
  return model;
}

}  // namespace followme

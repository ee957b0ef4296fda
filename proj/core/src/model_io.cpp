#include "bayesnid/model_io.hpp"

#include <json.hpp>

#include "bayesnid/error.hpp"

namespace bayesnid {

namespace {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m) {
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = m.data();
  return out;
}

Matrix matrix_from_json(const Json& j, const char* name) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols) {
    throw Error(ErrorCode::InvariantViolation,
                std::string(name) + " declares " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " but holds " + std::to_string(data.size()) +
                    " values");
  }
  return Matrix(rows, cols, std::move(data));
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
  Json doc;
  doc["version"] = kModelFormatVersion;
  doc["variant"] = std::string(to_string(model.variant));
  doc["class_names"] = model.class_names;
  doc["feature_count"] = model.feature_count;
  doc["log_prior"] = model.priors.log_prior;
  doc["doc_counts"] = model.priors.doc_counts;
  doc["total_count"] = model.priors.total_count;

  Json params = Json::object();
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GaussianParams>) {
          params["mean"] = matrix_to_json(p.mean);
          params["variance"] = matrix_to_json(p.variance);
          params["var_floor"] = p.var_floor;
        } else if constexpr (std::is_same_v<P, MultinomialParams>) {
          params["log_cond_prob"] = matrix_to_json(p.log_cond_prob);
          params["alpha"] = p.alpha;
        } else {
          params["cond_prob"] = matrix_to_json(p.cond_prob);
          params["binarize_threshold_policy"] = std::string(to_string(p.binarize_threshold_policy));
        }
      },
      model.params);
  doc["params"] = std::move(params);
  return doc.dump(2) + "\n";
}

TrainedModel deserialize_model(std::string_view document) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }

  TrainedModel model;
  try {
    if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "model document is not an object");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorCode::VersionMismatch, "model format version " + std::to_string(version) +
                                                  ", expected " +
                                                  std::to_string(kModelFormatVersion));
    }
    model.variant = variant_from_string(doc.at("variant").get<std::string>());
    model.class_names = doc.at("class_names").get<std::vector<std::string>>();
    model.feature_count = doc.at("feature_count").get<std::size_t>();
    model.priors.log_prior = doc.at("log_prior").get<std::vector<double>>();
    model.priors.doc_counts = doc.at("doc_counts").get<std::vector<std::size_t>>();
    model.priors.total_count = doc.at("total_count").get<std::size_t>();

    const Json& params = doc.at("params");
    switch (model.variant) {
      case Variant::gaussian: {
        GaussianParams p;
        p.mean = matrix_from_json(params.at("mean"), "mean");
        p.variance = matrix_from_json(params.at("variance"), "variance");
        p.var_floor = params.at("var_floor").get<double>();
        model.params = std::move(p);
        break;
      }
      case Variant::multinomial: {
        MultinomialParams p;
        p.log_cond_prob = matrix_from_json(params.at("log_cond_prob"), "log_cond_prob");
        p.alpha = params.at("alpha").get<double>();
        model.params = std::move(p);
        break;
      }
      case Variant::bernoulli: {
        BernoulliParams p;
        p.cond_prob = matrix_from_json(params.at("cond_prob"), "cond_prob");
        p.binarize_threshold_policy =
            binarize_policy_from_string(params.at("binarize_threshold_policy").get<std::string>());
        model.params = std::move(p);
        break;
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }

  model.validate();
  return model;
}

}  // namespace bayesnid

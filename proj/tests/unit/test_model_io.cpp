#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bayesnid/error.hpp"
#include "bayesnid/model_io.hpp"
#include "fixtures.hpp"

using namespace bayesnid;

namespace {

ErrorCode deserialize_code(const std::string& doc) {
  try {
    deserialize_model(doc);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

TrainedModel sample_model(Variant v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto inst = fixtures::random_instance(rng, v);
  return fit(v, fixtures::to_dataset(inst, fixtures::tag_for(v)));
}

}  // namespace

class ModelRoundTrip : public ::testing::TestWithParam<Variant> {};

TEST_P(ModelRoundTrip, BitExact) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto model = sample_model(GetParam(), seed);
    const auto text = serialize_model(model);
    const auto back = deserialize_model(text);
    EXPECT_EQ(back.variant, model.variant);
    EXPECT_EQ(back.class_names, model.class_names);
    EXPECT_EQ(back.feature_count, model.feature_count);
    EXPECT_EQ(back.priors.log_prior, model.priors.log_prior);
    EXPECT_EQ(back.priors.doc_counts, model.priors.doc_counts);
    EXPECT_EQ(back.priors.total_count, model.priors.total_count);
    switch (model.variant) {
      case Variant::gaussian: {
        const auto& a = std::get<GaussianParams>(model.params);
        const auto& b = std::get<GaussianParams>(back.params);
        EXPECT_EQ(a.mean, b.mean);
        EXPECT_EQ(a.variance, b.variance);
        EXPECT_EQ(a.var_floor, b.var_floor);
        break;
      }
      case Variant::multinomial: {
        const auto& a = std::get<MultinomialParams>(model.params);
        const auto& b = std::get<MultinomialParams>(back.params);
        EXPECT_EQ(a.log_cond_prob, b.log_cond_prob);
        EXPECT_EQ(a.alpha, b.alpha);
        break;
      }
      case Variant::bernoulli: {
        const auto& a = std::get<BernoulliParams>(model.params);
        const auto& b = std::get<BernoulliParams>(back.params);
        EXPECT_EQ(a.cond_prob, b.cond_prob);
        EXPECT_EQ(a.binarize_threshold_policy, b.binarize_threshold_policy);
        break;
      }
    }
    EXPECT_EQ(serialize_model(back), text);
  }
}

INSTANTIATE_TEST_SUITE_P(AllVariants, ModelRoundTrip,
                         ::testing::Values(Variant::gaussian, Variant::multinomial, Variant::bernoulli),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(ModelIo, CondProbOutOfRangeIsInvariantViolation) {
  auto doc = nlohmann::json::parse(serialize_model(sample_model(Variant::bernoulli, 3)));
  doc["params"]["cond_prob"]["data"][0] = 1.5;
  EXPECT_EQ(deserialize_code(doc.dump()), ErrorCode::InvariantViolation);
}

TEST(ModelIo, ClassNameCountMismatchIsInvariantViolation) {
  auto doc = nlohmann::json::parse(serialize_model(sample_model(Variant::gaussian, 4)));
  doc["class_names"].push_back("extra");
  EXPECT_EQ(deserialize_code(doc.dump()), ErrorCode::InvariantViolation);
}

TEST(ModelIo, WrongVersionIsRejected) {
  auto doc = nlohmann::json::parse(serialize_model(sample_model(Variant::multinomial, 5)));
  doc["version"] = kModelFormatVersion + 1;
  EXPECT_EQ(deserialize_code(doc.dump()), ErrorCode::VersionMismatch);
}

TEST(ModelIo, MalformedDocuments) {
  EXPECT_EQ(deserialize_code("not json"), ErrorCode::MalformedDocument);
  EXPECT_EQ(deserialize_code("[]"), ErrorCode::MalformedDocument);
  auto doc = nlohmann::json::parse(serialize_model(sample_model(Variant::gaussian, 6)));
  doc.erase("params");
  EXPECT_EQ(deserialize_code(doc.dump()), ErrorCode::MalformedDocument);
  doc = nlohmann::json::parse(serialize_model(sample_model(Variant::gaussian, 6)));
  doc["variant"] = "svm";
  EXPECT_EQ(deserialize_code(doc.dump()), ErrorCode::MalformedDocument);
}

TEST(ModelIo, NegativeVarianceRejected) {
  auto doc = nlohmann::json::parse(serialize_model(sample_model(Variant::gaussian, 8)));
  doc["params"]["variance"]["data"][0] = -1.0;
  EXPECT_EQ(deserialize_code(doc.dump()), ErrorCode::InvariantViolation);
}

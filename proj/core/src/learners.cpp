// Copyright 2026 The litscreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "litscreen/learners.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "litscreen/error.hpp"
#include "models.hpp"

namespace litscreen {
namespace {

constexpr std::pair<ModelFamily, std::string_view> kFamilies[] = {
    {ModelFamily::kLinear, "linear"}, {ModelFamily::kGnb, "gnb"},
    {ModelFamily::kCnb, "cnb"},       {ModelFamily::kSvm, "svm"},
    {ModelFamily::kExtraTrees, "extratrees"}, {ModelFamily::kGbdt, "gbdt"},
};

}  // namespace

std::string_view family_name(ModelFamily family) {
  for (const auto& [f, name] : kFamilies) {
    if (f == family) return name;
  }
  return "unknown";
}

ModelFamily parse_family(std::string_view name) {
  for (const auto& [f, n] : kFamilies) {
    if (n == name) return f;
  }
  throw Error("unknown model family '" + std::string(name) + "' (expected linear, gnb, cnb, svm, extratrees or gbdt)");
}

const std::map<std::string, double>& ModelSpec::defaults(ModelFamily family) {
  static const std::map<std::string, double> linear = {
      {"l2", 1e-4}, {"iterations", 500}, {"tolerance", 1e-8}, {"class_weight", 0}};
  static const std::map<std::string, double> gnb = {{"var_smoothing", 1e-9}, {"class_weight", 0}};
  static const std::map<std::string, double> cnb = {{"alpha", 1.0}, {"class_weight", 0}};
  static const std::map<std::string, double> svm = {
      {"l2", 1e-4}, {"epochs", 30}, {"eta0", 0.1}, {"class_weight", 0}};
  static const std::map<std::string, double> extratrees = {
      {"trees", 300}, {"min_leaf", 1}, {"max_depth", 0}, {"class_weight", 0}};
  static const std::map<std::string, double> gbdt = {
      {"trees", 300}, {"max_depth", 6}, {"learning_rate", 0.1}, {"max_bins", 255},
      {"min_leaf", 20}, {"l2", 1.0},    {"min_hessian", 1e-3},  {"class_weight", 0}};
  switch (family) {
    case ModelFamily::kLinear: return linear;
    case ModelFamily::kGnb: return gnb;
    case ModelFamily::kCnb: return cnb;
    case ModelFamily::kSvm: return svm;
    case ModelFamily::kExtraTrees: return extratrees;
    case ModelFamily::kGbdt: break;
  }
  return gbdt;
}

std::map<std::string, double> ModelSpec::resolved() const {
  auto out = defaults(family);
  for (const auto& [name, value] : hyperparameters) {
    auto it = out.find(name);
    if (it == out.end()) {
      throw Error("unknown hyperparameter '" + name + "' for model family " + std::string(family_name(family)));
    }
    if (!std::isfinite(value)) throw Error("hyperparameter '" + name + "' must be finite");
    it->second = value;
  }
  return out;
}

double ModelSpec::param(std::string_view name) const {
  const auto all = resolved();
  auto it = all.find(std::string(name));
  if (it == all.end()) {
    throw Error("unknown hyperparameter '" + std::string(name) + "' for model family " +
                std::string(family_name(family)));
  }
  return it->second;
}

Scorer train(const ModelSpec& spec, const FeatureMatrix& X, std::span<const int> y) {
  if (X.rows() != y.size()) {
    throw Error("training matrix has " + std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) +
                " labels");
  }
  if (X.rows() == 0) throw Error("cannot train on an empty matrix");
  if (auto bad = X.first_non_finite_row()) {
    throw Error("training matrix row " + std::to_string(*bad) + " holds a NaN or infinite feature value");
  }
  detail::TrainingSet data{X, y, {}, 0};
  for (int label : y) {
    if (label != 0 && label != 1) throw Error("training labels must be 0 or 1");
    data.positives += static_cast<std::size_t>(label);
  }
  const std::size_t negatives = y.size() - data.positives;
  if ((data.positives == 0 || negatives == 0) && spec.family != ModelFamily::kExtraTrees) {
    throw Error("model family " + std::string(family_name(spec.family)) +
                " needs both classes in the training labels");
  }
  data.weights.assign(y.size(), 1.0);
  if (spec.param("class_weight") != 0.0 && data.positives > 0 && negatives > 0) {
    const double n = static_cast<double>(y.size());
    const double w_pos = n / (2.0 * static_cast<double>(data.positives));
    const double w_neg = n / (2.0 * static_cast<double>(negatives));
    for (std::size_t i = 0; i < y.size(); ++i) data.weights[i] = y[i] ? w_pos : w_neg;
  }

  Scorer scorer;
  scorer.spec_ = spec;
  scorer.features_ = X.column_names();
  switch (spec.family) {
    case ModelFamily::kLinear: scorer.model_ = detail::train_linear(spec, data); break;
    case ModelFamily::kGnb: scorer.model_ = detail::train_gnb(spec, data); break;
    case ModelFamily::kCnb: scorer.model_ = detail::train_cnb(spec, data); break;
    case ModelFamily::kSvm: scorer.model_ = detail::train_svm(spec, data); break;
    case ModelFamily::kExtraTrees: scorer.model_ = detail::train_extra_trees(spec, data); break;
    case ModelFamily::kGbdt: scorer.model_ = detail::train_gbdt(spec, data); break;
  }
  return scorer;
}

std::vector<double> Scorer::score_batch(const FeatureMatrix& X) const {
  if (!model_) throw Error("scorer is not trained");
  std::vector<double> out;
  if (X.rows() == 0) return out;
  const FeatureMatrix aligned = X.aligned_to(features_);
  out.reserve(aligned.rows());
  for (std::size_t r = 0; r < aligned.rows(); ++r) {
    const double s = model_->score(aligned.row(r));
    if (!std::isfinite(s)) throw Error("model produced a non-finite score for row " + std::to_string(r));
    out.push_back(s);
  }
  return out;
}

void Scorer::save(std::ostream& out) const {
  if (!model_) throw Error("scorer is not trained");
  detail::json j;
  j["format"] = "litscreen-model";
  j["version"] = kModelFormatVersion;
  j["family"] = std::string(family_name(spec_.family));
  j["seed"] = spec_.seed;
  j["hyperparameters"] = spec_.resolved();
  j["features"] = features_;
  j["model"] = model_->to_json();
  out << j.dump() << '\n';
}

Scorer Scorer::load(std::istream& in) {
  detail::json j;
  try {
    j = detail::json::parse(in);
  } catch (const detail::json::exception& e) {
    throw Error(std::string("model file is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != "litscreen-model") throw Error("not a litscreen model file");
  if (j.value("version", 0) != kModelFormatVersion) {
    throw Error("unsupported model format version " + j.value("version", detail::json()).dump());
  }
  try {
    Scorer s;
    s.spec_.family = parse_family(j.at("family").get<std::string>());
    s.spec_.seed = j.at("seed").get<std::uint64_t>();
    s.spec_.hyperparameters = j.at("hyperparameters").get<std::map<std::string, double>>();
    s.features_ = j.at("features").get<std::vector<std::string>>();
    const auto& m = j.at("model");
    switch (s.spec_.family) {
      case ModelFamily::kLinear: s.model_ = detail::load_linear(m); break;
      case ModelFamily::kGnb: s.model_ = detail::load_gnb(m); break;
      case ModelFamily::kCnb: s.model_ = detail::load_cnb(m); break;
      case ModelFamily::kSvm: s.model_ = detail::load_svm(m); break;
      case ModelFamily::kExtraTrees: s.model_ = detail::load_extra_trees(m); break;
      case ModelFamily::kGbdt: s.model_ = detail::load_gbdt(m); break;
    }
    return s;
  } catch (const detail::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

namespace detail {

json tree_to_json(const std::vector<TreeNode>& nodes) {
  json f = json::array(), t = json::array(), l = json::array(), r = json::array(), v = json::array();
  for (const auto& n : nodes) {
    f.push_back(n.feature);
    t.push_back(n.threshold);
    l.push_back(n.left);
    r.push_back(n.right);
    v.push_back(n.value);
  }
  return json{{"feature", f}, {"threshold", t}, {"left", l}, {"right", r}, {"value", v}};
}

std::vector<TreeNode> tree_from_json(const json& j) {
  const auto f = j.at("feature").get<std::vector<std::int32_t>>();
  const auto t = j.at("threshold").get<std::vector<double>>();
  const auto l = j.at("left").get<std::vector<std::int32_t>>();
  const auto r = j.at("right").get<std::vector<std::int32_t>>();
  const auto v = j.at("value").get<std::vector<double>>();
  if (f.empty() || t.size() != f.size() || l.size() != f.size() || r.size() != f.size() || v.size() != f.size()) {
    throw Error("malformed tree in model file");
  }
  std::vector<TreeNode> nodes(f.size());
  const auto n = static_cast<std::int32_t>(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    nodes[i] = TreeNode{f[i], t[i], l[i], r[i], v[i]};
    if (f[i] >= 0 && (l[i] <= static_cast<std::int32_t>(i) || r[i] <= static_cast<std::int32_t>(i) || l[i] >= n || r[i] >= n)) {
      throw Error("malformed tree in model file");
    }
  }
  return nodes;
}

}  // namespace detail
}  // namespace litscreen

// Copyright 2026 The GSP Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsp/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gsp {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("parse error: ") + e.what());
  }
}

Vector read_vector(const json& doc, const std::string& field, int n) {
  if (!doc.contains(field)) {
    throw std::invalid_argument("parse error: missing \"" + field + "\" field");
  }
  const json& arr = doc.at(field);
  if (!arr.is_array()) {
    throw std::invalid_argument("parse error: \"" + field + "\" must be an array");
  }
  if (n >= 0 && static_cast<int>(arr.size()) != n) {
    throw std::invalid_argument("parse error: \"" + field + "\" must have length n");
  }
  Vector v(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (!arr[k].is_number()) {
      throw std::invalid_argument("parse error: \"" + field + "\" must hold numbers");
    }
    v[k] = arr[k].get<double>();
  }
  return v;
}

int read_n(const json& doc) {
  if (!doc.contains("n")) {
    throw std::invalid_argument("parse error: missing \"n\" field");
  }
  if (!doc.at("n").is_number_integer()) {
    throw std::invalid_argument("parse error: \"n\" must be an integer");
  }
  return doc.at("n").get<int>();
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (int k = 0; k < v.size(); ++k) arr.push_back(v[k]);
  return arr;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

}  // namespace

AuctionInstance instance_from_json(const std::string& text) {
  const json doc = parse(text);
  const int n = read_n(doc);
  AuctionInstance instance{read_vector(doc, "alphas", n),
                           read_vector(doc, "valuations", n),
                           read_vector(doc, "gammas", n)};
  validate_instance(instance);
  return instance;
}

std::string instance_to_json(const AuctionInstance& instance) {
  json doc;
  doc["n"] = instance.n();
  doc["alphas"] = vector_to_json(instance.alphas);
  doc["valuations"] = vector_to_json(instance.valuations);
  doc["gammas"] = vector_to_json(instance.gammas);
  return doc.dump(2) + "\n";
}

JointDistribution distribution_from_json(const std::string& text) {
  const json doc = parse(text);
  const int n = read_n(doc);
  JointDistribution dist;
  dist.alphas = read_vector(doc, "alphas", n);
  if (!doc.contains("support")) {
    throw std::invalid_argument("parse error: missing \"support\" field");
  }
  for (const json& point : doc.at("support")) {
    if (!point.contains("prob") || !point.at("prob").is_number()) {
      throw std::invalid_argument("parse error: support point needs a \"prob\" number");
    }
    dist.support.push_back({point.at("prob").get<double>(),
                            read_vector(point, "valuations", n),
                            read_vector(point, "gammas", n)});
  }
  validate_distribution(dist);
  return dist;
}

std::string distribution_to_json(const JointDistribution& dist) {
  json doc;
  doc["n"] = dist.n();
  doc["alphas"] = vector_to_json(dist.alphas);
  json support = json::array();
  for (const auto& point : dist.support) {
    json p;
    p["prob"] = point.prob;
    p["valuations"] = vector_to_json(point.valuations);
    p["gammas"] = vector_to_json(point.gammas);
    support.push_back(p);
  }
  doc["support"] = support;
  return doc.dump(2) + "\n";
}

AuctionInstance load_instance(const std::string& path) {
  return instance_from_json(read_file(path));
}

void save_instance(const AuctionInstance& instance, const std::string& path) {
  validate_instance(instance);
  write_file(path, instance_to_json(instance));
}

JointDistribution load_distribution(const std::string& path) {
  return distribution_from_json(read_file(path));
}

void save_distribution(const JointDistribution& dist, const std::string& path) {
  validate_distribution(dist);
  write_file(path, distribution_to_json(dist));
}

AuctionInstance resolve_instance(const std::string& name_or_path) {
  if (name_or_path == "poa2" || name_or_path == "poa3") {
    return reference_instance(name_or_path).first;
  }
  return load_instance(name_or_path);
}

}  // namespace gsp

// Copyright 2026 The coopee Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coopee/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace coopee {
namespace {

using nlohmann::json;

std::string indexed(const char* field, Eigen::Index i) {
  std::ostringstream out;
  out << field << '[' << i << ']';
  return out.str();
}

std::string indexed(const char* field, Eigen::Index i, Eigen::Index j) {
  std::ostringstream out;
  out << field << '[' << i << "][" << j << ']';
  return out.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

void require_shape(const Eigen::MatrixXd& m, int rows, int cols, const char* field) {
  std::ostringstream out;
  out << field << " must be " << rows << "x" << cols << ", got " << m.rows() << "x" << m.cols();
  require(m.rows() == rows && m.cols() == cols, out.str());
}

void require_size(const Eigen::VectorXd& v, int size, const char* field) {
  std::ostringstream out;
  out << field << " must have length " << size << ", got " << v.size();
  require(v.size() == size, out.str());
}

void require_positive(const Eigen::MatrixXd& m, const char* field) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      require(std::isfinite(m(i, j)) && m(i, j) > 0.0, indexed(field, i, j) + " must be > 0");
}

void require_positive(const Eigen::VectorXd& v, const char* field) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    require(std::isfinite(v(i)) && v(i) > 0.0, indexed(field, i) + " must be > 0");
}

void require_nonnegative(const Eigen::MatrixXd& m, const char* field) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      require(std::isfinite(m(i, j)) && m(i, j) >= 0.0, indexed(field, i, j) + " must be >= 0");
}

void require_positive(double v, const char* field) {
  require(std::isfinite(v) && v > 0.0, std::string(field) + " must be > 0");
}

const json& member(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw InvalidInput(std::string("missing key '") + key + "'");
  return *it;
}

double number(const json& doc, const char* key) {
  const json& v = member(doc, key);
  if (!v.is_number()) throw InvalidInput(std::string(key) + " must be a number");
  return v.get<double>();
}

int integer(const json& doc, const char* key) {
  const json& v = member(doc, key);
  if (!v.is_number_integer() && !(v.is_number() && std::floor(v.get<double>()) == v.get<double>()))
    throw InvalidInput(std::string(key) + " must be an integer");
  return static_cast<int>(v.get<double>());
}

Eigen::MatrixXd matrix(const json& doc, const char* key) {
  const json& v = member(doc, key);
  if (!v.is_array()) throw InvalidInput(std::string(key) + " must be an array of arrays");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = rows > 0 && v[0].is_array() ? static_cast<Eigen::Index>(v[0].size()) : 0;
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InvalidInput(indexed(key, i) + " must be an array of length " + std::to_string(cols));
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) throw InvalidInput(indexed(key, i, j) + " must be a number");
      out(i, j) = x.get<double>();
    }
  }
  return out;
}

Eigen::VectorXd vector(const json& doc, const char* key) {
  const json& v = member(doc, key);
  if (!v.is_array()) throw InvalidInput(std::string(key) + " must be an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const json& x = v[static_cast<std::size_t>(i)];
    if (!x.is_number()) throw InvalidInput(indexed(key, i) + " must be a number");
    out(i) = x.get<double>();
  }
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

double ScenarioConfig::snr_threshold() const { return std::exp2(rate / bandwidth) - 1.0; }

void validate(const ScenarioConfig& c) {
  require(c.users >= 1, "M must be >= 1");
  require(c.relays >= c.users, "N must be >= M");
  require(c.periods >= 1, "K must be >= 1");
  require_positive(c.bandwidth, "B");
  require_positive(c.rate, "alpha0");
  require_positive(c.slot, "T");
  require_positive(c.p_max, "p_max");
  require(std::isfinite(c.eta) && c.eta > 0.0 && c.eta <= 1.0, "eta must be in (0, 1]");
  require(std::isfinite(c.fading_m) && c.fading_m >= 0.5, "m must be >= 0.5");
  require(std::isfinite(c.pr_out_0) && c.pr_out_0 > 0.0 && c.pr_out_0 < 1.0,
          "pr_out_0 must be in (0, 1)");

  require_shape(c.omega_h, c.users, c.relays, "omega_h");
  require_shape(c.d_h, c.users, c.relays, "d_h");
  require_shape(c.beta_h, c.users, c.relays, "beta_h");
  require_shape(c.n0_h, c.users, c.relays, "N0_h");
  require_size(c.omega_g, c.relays, "omega_g");
  require_size(c.d_g, c.relays, "d_g");
  require_size(c.beta_g, c.relays, "beta_g");
  require_size(c.n0_g, c.relays, "N0_g");
  require_shape(c.arrivals, c.users, c.periods, "arrivals");
  require_size(c.initial_energy, c.users, "Eu_0");

  require_positive(c.omega_h, "omega_h");
  require_positive(c.d_h, "d_h");
  require_positive(c.beta_h, "beta_h");
  require_positive(c.n0_h, "N0_h");
  require_positive(c.omega_g, "omega_g");
  require_positive(c.d_g, "d_g");
  require_positive(c.beta_g, "beta_g");
  require_positive(c.n0_g, "N0_g");
  require_nonnegative(c.arrivals, "arrivals");
  for (Eigen::Index i = 0; i < c.initial_energy.size(); ++i)
    require(std::isfinite(c.initial_energy(i)) && c.initial_energy(i) >= 0.0,
            indexed("Eu_0", i) + " must be >= 0");
}

ScenarioConfig scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidInput("scenario document must be a JSON object");
  ScenarioConfig c;
  c.users = integer(doc, "M");
  c.relays = integer(doc, "N");
  c.periods = integer(doc, "K");
  c.bandwidth = number(doc, "B");
  c.rate = number(doc, "alpha0");
  c.slot = number(doc, "T");
  c.p_max = number(doc, "p_max");
  c.eta = number(doc, "eta");
  c.fading_m = number(doc, "m");
  c.omega_h = matrix(doc, "omega_h");
  c.d_h = matrix(doc, "d_h");
  c.beta_h = matrix(doc, "beta_h");
  c.n0_h = matrix(doc, "N0_h");
  c.omega_g = vector(doc, "omega_g");
  c.d_g = vector(doc, "d_g");
  c.beta_g = vector(doc, "beta_g");
  c.n0_g = vector(doc, "N0_g");
  c.arrivals = matrix(doc, "arrivals");
  c.pr_out_0 = number(doc, "pr_out_0");
  if (doc.contains("Eu_0")) {
    c.initial_energy = vector(doc, "Eu_0");
  } else {
    c.initial_energy = Eigen::VectorXd::Zero(std::max(c.users, 0));
  }
  validate(c);
  return c;
}

json scenario_to_json(const ScenarioConfig& c) {
  json doc;
  doc["M"] = c.users;
  doc["N"] = c.relays;
  doc["K"] = c.periods;
  doc["B"] = c.bandwidth;
  doc["alpha0"] = c.rate;
  doc["T"] = c.slot;
  doc["p_max"] = c.p_max;
  doc["eta"] = c.eta;
  doc["m"] = c.fading_m;
  doc["omega_h"] = to_json(c.omega_h);
  doc["d_h"] = to_json(c.d_h);
  doc["beta_h"] = to_json(c.beta_h);
  doc["N0_h"] = to_json(c.n0_h);
  doc["omega_g"] = to_json(c.omega_g);
  doc["d_g"] = to_json(c.d_g);
  doc["beta_g"] = to_json(c.beta_g);
  doc["N0_g"] = to_json(c.n0_g);
  doc["arrivals"] = to_json(c.arrivals);
  doc["pr_out_0"] = c.pr_out_0;
  doc["Eu_0"] = to_json(c.initial_energy);
  return doc;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw InvalidInput("'" + path + "': " + e.what());
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  return scenario_from_json(load_json_file(path));
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw InvalidInput("override must look like key=value: '" + std::string(assignment) + "'");
  const std::string path(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));

  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    throw InvalidInput("override value for '" + path + "' is not valid JSON: '" + text + "'");
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string segment = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (segment.empty()) throw InvalidInput("empty segment in override key '" + path + "'");
    const bool last = dot == std::string::npos;
    if (node->is_array()) {
      std::size_t index = 0;
      try {
        std::size_t used = 0;
        index = std::stoul(segment, &used);
        if (used != segment.size()) throw std::invalid_argument(segment);
      } catch (const std::exception&) {
        throw InvalidInput("override key '" + path + "': '" + segment + "' is not an array index");
      }
      if (index >= node->size())
        throw InvalidInput("override key '" + path + "': index " + segment + " out of range");
      node = &(*node)[index];
    } else if (node->is_object()) {
      if (!node->contains(segment) && !(last && node == &doc))
        throw InvalidInput("override key '" + path + "': unknown field '" + segment + "'");
      node = &(*node)[segment];
    } else {
      throw InvalidInput("override key '" + path + "' descends into a scalar");
    }
    if (last) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

ScenarioConfig shift_relays(const ScenarioConfig& config, double delta) {
  ScenarioConfig out = config;
  out.d_h.array() += delta;
  out.d_g.array() -= delta;
  for (Eigen::Index j = 0; j < out.d_g.size(); ++j)
    if (!(out.d_g(j) > 0.0))
      throw InvalidInput("relay shift " + std::to_string(delta) + " m leaves " + indexed("d_g", j) +
                         " non-positive");
  for (Eigen::Index i = 0; i < out.d_h.rows(); ++i)
    for (Eigen::Index j = 0; j < out.d_h.cols(); ++j)
      if (!(out.d_h(i, j) > 0.0))
        throw InvalidInput("relay shift leaves " + indexed("d_h", i, j) + " non-positive");
  return out;
}

}  // namespace coopee

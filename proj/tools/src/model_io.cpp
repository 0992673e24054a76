#include "tuning/cli/model_io.hpp"

#include "tuning/errors.hpp"

#include <fstream>
#include <sstream>

namespace tuning::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

const json& require(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) bad(std::string("missing key \"") + key + "\"");
  return *it;
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + ": expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

Vector parse_vector(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_array()) bad(std::string("\"") + key + "\": expected an array");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    std::ostringstream where;
    where << "\"" << key << "\"[" << k << "]";
    out[static_cast<Eigen::Index>(k)] = number_at(v[k], where.str());
  }
  return out;
}

Matrix parse_matrix(const json& doc, const char* key, std::size_t rows, std::size_t cols) {
  const json& v = require(doc, key);
  if (!v.is_array()) bad(std::string("\"") + key + "\": expected an array of rows");
  if (v.size() != rows) {
    std::ostringstream os;
    os << "\"" << key << "\": expected " << rows << " rows, got " << v.size();
    bad(os.str());
  }
  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array() || row.size() != cols) {
      std::ostringstream os;
      os << "\"" << key << "\"[" << i << "]: expected " << cols << " entries";
      bad(os.str());
    }
    for (std::size_t j = 0; j < cols; ++j) {
      std::ostringstream where;
      where << "\"" << key << "\"[" << i << "][" << j << "]";
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          number_at(row[j], where.str());
    }
  }
  return out;
}

std::vector<double> parse_distribution(const json& doc, const char* key) {
  const Vector v = parse_vector(doc, key);
  return {v.data(), v.data() + v.size()};
}

json to_array(const Vector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

json to_rows(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
}

ModelFile parse_model(const json& doc, ModelOptions base) {
  if (!doc.is_object()) bad("model file must be a JSON object");

  const json& tm = require(doc, "time_model");
  if (!tm.is_string()) bad("\"time_model\": expected a string");
  const std::string time_model = tm.get<std::string>();
  if (time_model != "continuous" && time_model != "discrete") {
    bad("\"time_model\": expected \"continuous\" or \"discrete\", got \"" + time_model + "\"");
  }

  std::string name;
  if (const auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) bad("\"name\": expected a string");
    name = it->get<std::string>();
  }
  if (const auto it = doc.find("strict_cost_signs"); it != doc.end()) {
    if (!it->is_boolean()) bad("\"strict_cost_signs\": expected a boolean");
    base.strict_cost_signs = it->get<bool>();
  }

  const json& p00_doc = require(doc, "P00");
  if (!p00_doc.is_array() || p00_doc.empty()) bad("\"P00\": expected a non-empty array of rows");
  const std::size_t n = p00_doc.size();
  const Matrix p00 = parse_matrix(doc, "P00", n, n);
  const Matrix p01 = parse_matrix(doc, "P01", n, kBoundaryCount);

  const auto sized = [&](const char* key) {
    Vector v = parse_vector(doc, key);
    if (static_cast<std::size_t>(v.size()) != n) {
      std::ostringstream os;
      os << "\"" << key << "\": expected " << n << " entries (one per internal state), got "
         << v.size();
      bad(os.str());
    }
    return v;
  };

  ModelParameters params;
  if (time_model == "continuous") {
    params = ContinuousParameters{sized("tau"), sized("c"),   sized("d0"),
                                  sized("d1"),  sized("mu0"), sized("mu1")};
  } else {
    params = DiscreteParameters{sized("c"), sized("d0"), sized("d1")};
  }
  return {std::move(name), TuningModel::from_blocks(p00, p01, std::move(params), base)};
}

ModelFile load_model(const std::filesystem::path& path, ModelOptions base) {
  return parse_model(read_json(path), base);
}

json model_to_json(const TuningModel& model, const std::string& name) {
  json doc;
  if (!name.empty()) doc["name"] = name;
  doc["strict_cost_signs"] = model.options().strict_cost_signs;
  doc["P00"] = to_rows(model.chain().p00());
  doc["P01"] = to_rows(model.chain().p01());
  if (model.time_model() == TimeModel::Continuous) {
    const auto& p = model.continuous();
    doc["time_model"] = "continuous";
    doc["tau"] = to_array(p.tau);
    doc["c"] = to_array(p.c);
    doc["d0"] = to_array(p.d0);
    doc["d1"] = to_array(p.d1);
    doc["mu0"] = to_array(p.mu0);
    doc["mu1"] = to_array(p.mu1);
  } else {
    const auto& p = model.discrete();
    doc["time_model"] = "discrete";
    doc["c"] = to_array(p.c);
    doc["d0"] = to_array(p.d0);
    doc["d1"] = to_array(p.d1);
  }
  return doc;
}

void save_model(const std::filesystem::path& path, const TuningModel& model,
                const std::string& name) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path.string());
  out << model_to_json(model, name).dump(2) << '\n';
}

ControlPolicy parse_policy(const json& doc) {
  if (!doc.is_object()) bad("policy file must be a JSON object");
  return ControlPolicy(parse_distribution(doc, "alpha0"), parse_distribution(doc, "alpha1"));
}

ControlPolicy load_policy(const std::filesystem::path& path) {
  return parse_policy(read_json(path));
}

json policy_to_json(const ControlPolicy& policy) {
  return json{{"alpha0", policy.alpha0()}, {"alpha1", policy.alpha1()}};
}

}  // namespace tuning::cli

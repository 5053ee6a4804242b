#include "idt/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace idt {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("json: complex entries must be [re, im] number pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

ComplexMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw std::invalid_argument("json: " + what + " must have " + std::to_string(rows) + " rows");
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw std::invalid_argument("json: " + what + " row " + std::to_string(r) +
                                  " must have " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[c]);
  }
  return m;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("json: parse error");
  return j;
}

int get_positive_int(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<int>() < 1)
    throw std::invalid_argument("json: missing or invalid \"" + key + "\" field");
  return j[key].get<int>();
}

void check_kind(const json& j, const std::string& kind) {
  if (!j.contains("kind") || j["kind"] != kind)
    throw std::invalid_argument("json: expected object of kind \"" + kind + "\"");
}

}  // namespace

std::string povm_to_json(const Povm& e) {
  json j;
  j["kind"] = "povm";
  j["dim"] = e.dim;
  j["outcomes"] = e.outcomes();
  json effects = json::array();
  for (const ComplexMatrix& eff : e.effects) effects.push_back(matrix_to_json(eff));
  j["effects"] = effects;
  return j.dump(2);
}

Povm povm_from_json(const std::string& text) {
  const json j = parse(text);
  check_kind(j, "povm");
  Povm e;
  e.dim = get_positive_int(j, "dim");
  const int m = get_positive_int(j, "outcomes");
  if (!j.contains("effects") || !j["effects"].is_array() ||
      static_cast<int>(j["effects"].size()) != m)
    throw std::invalid_argument("json: povm needs an \"effects\" array of length \"outcomes\"");
  for (int i = 0; i < m; ++i)
    e.effects.push_back(matrix_from_json(j["effects"][i], e.dim, e.dim,
                                         "effect " + std::to_string(i)));
  e.validate();
  return e;
}

std::string instrument_to_json(const Instrument& inst) {
  json j;
  j["kind"] = "instrument";
  j["dim"] = inst.dim;
  j["outcomes"] = inst.outcomes();
  json branches = json::array();
  for (const ComplexMatrix& b : inst.branch_choi) branches.push_back(matrix_to_json(b));
  j["branches"] = branches;
  return j.dump(2);
}

Instrument instrument_from_json(const std::string& text) {
  const json j = parse(text);
  check_kind(j, "instrument");
  Instrument inst;
  inst.dim = get_positive_int(j, "dim");
  const int m = get_positive_int(j, "outcomes");
  if (!j.contains("branches") || !j["branches"].is_array() ||
      static_cast<int>(j["branches"].size()) != m)
    throw std::invalid_argument(
        "json: instrument needs a \"branches\" array of length \"outcomes\"");
  const int dd = inst.dim * inst.dim;
  for (int i = 0; i < m; ++i)
    inst.branch_choi.push_back(matrix_from_json(j["branches"][i], dd, dd,
                                                "branch " + std::to_string(i)));
  inst.validate();
  return inst;
}

std::string density_to_json(const DensityMatrix& rho) {
  json j;
  j["kind"] = "density";
  j["dim"] = rho.dim;
  j["rho"] = matrix_to_json(rho.rho);
  return j.dump(2);
}

DensityMatrix density_from_json(const std::string& text) {
  const json j = parse(text);
  check_kind(j, "density");
  DensityMatrix rho;
  rho.dim = get_positive_int(j, "dim");
  if (!j.contains("rho"))
    throw std::invalid_argument("json: density needs a \"rho\" matrix");
  rho.rho = matrix_from_json(j["rho"], rho.dim, rho.dim, "rho");
  rho.validate();
  return rho;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << content;
}

}  // namespace idt

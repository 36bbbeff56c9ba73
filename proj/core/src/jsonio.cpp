#include "pzp/jsonio.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pzp/errors.hpp"

namespace pzp {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_array16(std::string& out, const Tensor4& t) {
  out += '[';
  int k = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          if (k++) out += ", ";
          out += num(t(i, j, a, b));
        }
  out += ']';
}

void append_array4(std::string& out, const Mat2& m) {
  out += '[';
  out += num(m(0, 0));
  out += ", ";
  out += num(m(0, 1));
  out += ", ";
  out += num(m(1, 0));
  out += ", ";
  out += num(m(1, 1));
  out += ']';
}

void key16(std::string& out, const char* key, const Tensor4& t) {
  out += "  \"";
  out += key;
  out += "\": ";
  append_array16(out, t);
  out += ",\n";
}

void key4(std::string& out, const char* key, const Mat2& m) {
  out += "  \"";
  out += key;
  out += "\": ";
  append_array4(out, m);
  out += ",\n";
}

nlohmann::json parse(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError("malformed JSON document");
  return j;
}

Tensor4 tensor_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw IoError(std::string("missing key '") + key + "'");
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 16)
    throw IoError(std::string("key '") + key + "' must be an array of 16 numbers");
  Tensor4 t;
  int k = 0;
  for (int i = 0; i < 2; ++i)
    for (int jj = 0; jj < 2; ++jj)
      for (int aa = 0; aa < 2; ++aa)
        for (int b = 0; b < 2; ++b) t(i, jj, aa, b) = a[k++].get<double>();
  return t;
}

Mat2 mat_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw IoError(std::string("missing key '") + key + "'");
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 4)
    throw IoError(std::string("key '") + key + "' must be an array of 4 numbers");
  Mat2 m;
  m << a[0].get<double>(), a[1].get<double>(), a[2].get<double>(), a[3].get<double>();
  return m;
}

double scalar_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw IoError(std::string("missing numeric key '") + key + "'");
  return j[key].get<double>();
}

void append_vector(std::string& out, const char* key, const Eigen::VectorXd& v) {
  out += "  \"";
  out += key;
  out += "\": [";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += num(v[i]);
  }
  out += "],\n";
}

}  // namespace

std::string to_json(const EffectiveTensorsThin& t) {
  std::string out = "{\n";
  key16(out, "R_N_H", t.RN);
  key16(out, "R_M_H", t.RM);
  key4(out, "d_M3_H", t.dM3);
  key4(out, "e_M3_H", t.eM3);
  out += "  \"c_M33_H\": " + num(t.cM33) + ",\n";
  out += "  \"vol_Y1\": " + num(t.vol_Y1) + "\n}\n";
  return out;
}

std::string to_json(const EffectiveTensorsComparable& t) {
  std::string out = "{\n";
  key16(out, "R_MM_H", t.RMM);
  key16(out, "R_MN_H", t.RMN);
  key16(out, "R_NM_H", t.RNM);
  key16(out, "R_NN_H", t.RNN);
  key4(out, "d_MM3_H", t.dMM3);
  key4(out, "d_NM3_H", t.dNM3);
  key4(out, "e_MM3_H", t.eMM3);
  key4(out, "e_MN3_H", t.eMN3);
  out += "  \"c_MM33_H\": " + num(t.cMM33) + ",\n";
  out += "  \"vol_Y1\": " + num(t.vol_Y1) + "\n}\n";
  return out;
}

EffectiveTensorsThin thin_tensors_from_json(const std::string& text) {
  const nlohmann::json j = parse(text);
  EffectiveTensorsThin t;
  t.RN = tensor_from(j, "R_N_H");
  t.RM = tensor_from(j, "R_M_H");
  t.dM3 = mat_from(j, "d_M3_H");
  t.eM3 = mat_from(j, "e_M3_H");
  t.cM33 = scalar_from(j, "c_M33_H");
  t.vol_Y1 = scalar_from(j, "vol_Y1");
  return t;
}

EffectiveTensorsComparable comparable_tensors_from_json(const std::string& text) {
  const nlohmann::json j = parse(text);
  EffectiveTensorsComparable t;
  t.RMM = tensor_from(j, "R_MM_H");
  t.RMN = tensor_from(j, "R_MN_H");
  t.RNM = tensor_from(j, "R_NM_H");
  t.RNN = tensor_from(j, "R_NN_H");
  t.dMM3 = mat_from(j, "d_MM3_H");
  t.dNM3 = mat_from(j, "d_NM3_H");
  t.eMM3 = mat_from(j, "e_MM3_H");
  t.eMN3 = mat_from(j, "e_MN3_H");
  t.cMM33 = scalar_from(j, "c_MM33_H");
  t.vol_Y1 = scalar_from(j, "vol_Y1");
  return t;
}

std::string solution_to_json(const PlateSolution& sol, const PlateMesh& mesh) {
  std::string out = "{\n";
  out += "  \"mesh\": {\"nx\": " + std::to_string(mesh.nx()) +
         ", \"ny\": " + std::to_string(mesh.ny()) + ", \"lx\": " + num(mesh.lx()) +
         ", \"ly\": " + num(mesh.ly()) + "},\n";
  append_vector(out, "ubar", sol.ubar);
  append_vector(out, "u3", sol.u3);
  append_vector(out, "L30", sol.L30);
  out += "  \"max_deflection\": " + num(sol.max_deflection) + ",\n";
  out += "  \"elastic_energy\": " + num(sol.elastic_energy) + ",\n";
  out += "  \"mean_voltage\": " + num(sol.mean_voltage) + ",\n";
  out += "  \"form_value\": " + num(sol.form_value) + ",\n";
  out += "  \"load_value\": " + num(sol.load_value) + "\n}\n";
  return out;
}

std::string solution_to_csv(const PlateSolution& sol, const PlateMesh& mesh) {
  std::string out = "x,y,u1,u2,u3,u3_x,u3_y,u3_xy,L30\n";
  for (int j = 0; j <= mesh.ny(); ++j)
    for (int i = 0; i <= mesh.nx(); ++i) {
      const int n = mesh.node(i, j);
      out += num(mesh.x(i));
      out += ',';
      out += num(mesh.y(j));
      out += ',';
      out += num(sol.ubar[2 * n]);
      out += ',';
      out += num(sol.ubar[2 * n + 1]);
      for (int t = 0; t < 4; ++t) {
        out += ',';
        out += num(sol.u3[4 * n + t]);
      }
      out += ',';
      out += num(sol.L30.size() ? sol.L30[n] : 0.0);
      out += '\n';
    }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace pzp

#include "qcorr/statefile.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qcorr {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  fail(Errc::ValidationError, what + " at " + path);
}

std::complex<double> parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad_field(path, "complex entries must be [re, im] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<int> parse_dims(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad_field(path, "dims must be a nonempty array");
  std::vector<int> dims;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() <= 0)
      bad_field(path + "/" + std::to_string(i), "dims entries must be positive integers");
    dims.push_back(j[i].get<int>());
  }
  return dims;
}

ComplexVector parse_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad_field(path, "expected a nonempty array of [re, im] pairs");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], path + "/" + std::to_string(i));
  return v;
}

ordered_json array_for(const std::complex<double>& z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json vector_to_json(const ComplexVector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(array_for(v(i)));
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

StateVariant parse_state_json(const json& j) {
  if (!j.is_object()) fail(Errc::ValidationError, "state file root must be an object");
  if (!j.contains("kind") || !j["kind"].is_string())
    bad_field("/kind", "missing or non-string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (!j.contains("dims")) bad_field("/dims", "missing 'dims'");
  const auto dims = parse_dims(j["dims"], "/dims");

  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) bad_field("/labels", "labels must be an array of strings");
    for (std::size_t i = 0; i < j["labels"].size(); ++i) {
      if (!j["labels"][i].is_string())
        bad_field("/labels/" + std::to_string(i), "labels must be strings");
      labels.push_back(j["labels"][i].get<std::string>());
    }
  }
  if (!j.contains("data")) bad_field("/data", "missing 'data'");
  const json& data = j["data"];

  if (kind == "pure") {
    try {
      return make_pure(parse_vector(data, "/data"), dims);
    } catch (const Error& e) {
      if (e.code() == Errc::ValidationError) throw;
      fail(Errc::ValidationError, std::string(e.what()) + " at /data");
    }
  }
  if (kind == "density") {
    if (!data.is_array() || data.empty()) bad_field("/data", "density data must be a matrix");
    const auto n = static_cast<Eigen::Index>(data.size());
    ComplexMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto row_path = "/data/" + std::to_string(r);
      if (!data[static_cast<std::size_t>(r)].is_array() ||
          static_cast<Eigen::Index>(data[static_cast<std::size_t>(r)].size()) != n)
        bad_field(row_path, "density rows must all have the matrix dimension");
      for (Eigen::Index c = 0; c < n; ++c)
        m(r, c) = parse_complex(data[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                row_path + "/" + std::to_string(c));
    }
    try {
      return validate_density(m, dims, labels);
    } catch (const Error& e) {
      fail(Errc::ValidationError, std::string(e.what()) + " at /data");
    }
  }
  if (kind == "decomposition") {
    if (dims.size() != 2) bad_field("/dims", "decompositions carry the two party dimensions");
    if (!data.is_array() || data.empty()) bad_field("/data", "decomposition data must be a list");
    std::vector<SeparableTerm> terms;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto term_path = "/data/" + std::to_string(i);
      const json& t = data[i];
      if (!t.is_object() || !t.contains("weight") || !t.contains("psi") || !t.contains("phi"))
        bad_field(term_path, "terms need 'weight', 'psi' and 'phi'");
      if (!t["weight"].is_number()) bad_field(term_path + "/weight", "weight must be a number");
      SeparableTerm term;
      term.weight = t["weight"].get<double>();
      try {
        term.psi = make_pure(parse_vector(t["psi"], term_path + "/psi"), {dims[0]});
        term.phi = make_pure(parse_vector(t["phi"], term_path + "/phi"), {dims[1]});
      } catch (const Error& e) {
        if (e.code() == Errc::ValidationError) throw;
        fail(Errc::ValidationError, std::string(e.what()) + " at " + term_path);
      }
      terms.push_back(std::move(term));
    }
    try {
      return make_decomposition(std::move(terms));
    } catch (const Error& e) {
      fail(Errc::ValidationError, std::string(e.what()) + " at /data");
    }
  }
  bad_field("/kind", "unknown kind '" + kind + "'");
}

StateVariant parse_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
  return parse_state_json(j);
}

nlohmann::ordered_json to_json(const DensityMatrix& rho) {
  ordered_json out;
  out["kind"] = "density";
  out["dims"] = rho.dims;
  out["labels"] = rho.labels;
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < rho.dim(); ++c) row.push_back(array_for(rho.mat(r, c)));
    rows.push_back(std::move(row));
  }
  out["data"] = std::move(rows);
  return out;
}

nlohmann::ordered_json to_json(const PureState& psi) {
  ordered_json out;
  out["kind"] = "pure";
  out["dims"] = psi.dims;
  out["labels"] = default_labels(psi.dims.size());
  out["data"] = vector_to_json(psi.amps);
  return out;
}

nlohmann::ordered_json to_json(const SeparableDecomposition& dec) {
  ordered_json out;
  out["kind"] = "decomposition";
  out["dims"] = ordered_json::array({dec.dim_psi(), dec.dim_phi()});
  out["labels"] = ordered_json::array({"A", "C"});
  ordered_json terms = ordered_json::array();
  for (const auto& t : dec.terms) {
    ordered_json term;
    term["weight"] = t.weight;
    term["psi"] = vector_to_json(t.psi.amps);
    term["phi"] = vector_to_json(t.phi.amps);
    terms.push_back(std::move(term));
  }
  out["data"] = std::move(terms);
  return out;
}

nlohmann::ordered_json to_json(const StateVariant& state) {
  return std::visit([](const auto& s) { return to_json(s); }, state);
}

namespace {

void dump_rec(const ordered_json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
  const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + ordered_json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short numeric arrays (complex pairs, dims) stay on one line
      bool scalars_only = true;
      for (const auto& e : j)
        if (e.is_structured()) scalars_only = false;
      if (scalars_only && j.size() <= 4) {
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          dump_rec(e, out, indent, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(e, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const ordered_json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoError, "cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out) fail(Errc::IoError, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail(Errc::IoError, "cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

}  // namespace qcorr

#include "causent/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "causent/error.hpp"

namespace causent::io {

namespace {

Json rounded(const Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return v > 0 ? Json("inf") : (v < 0 ? Json("-inf") : Json("nan"));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::stod(buf);
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& e : j) out.push_back(rounded(e));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = rounded(it.value());
    return out;
  }
  return j;
}

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + ": expected a number");
  return j.get<double>();
}

int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ValidationError(where + ": expected an integer");
  return j.get<int>();
}

std::vector<double> number_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(where + ": '" + s + "' is not a number");
  }
}

std::pair<std::string, std::string> split_arrow(const std::string& token) {
  const auto pos = token.find("->");
  if (pos == std::string::npos) throw ValidationError("edge '" + token + "' must look like A->B");
  return {trim(token.substr(0, pos)), trim(token.substr(pos + 2))};
}

}  // namespace

std::string canonical_json(const Json& j) { return rounded(j).dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

DiscreteNet net_from_json(const Json& j) {
  const Json& nodes = field(j, "nodes", "model");
  if (!nodes.is_array()) throw ValidationError("model.nodes: expected an array");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "model.nodes[" + std::to_string(i) + "]";
    const Json& name = field(nodes[i], "name", where);
    if (!name.is_string()) throw ValidationError(where + ".name: expected a string");
    for (const auto& n : names)
      if (n == name.get<std::string>()) throw ValidationError(where + ".name: duplicate name '" + n + "'");
    names.push_back(name.get<std::string>());
  }
  std::vector<NetNode> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "model.nodes[" + std::to_string(i) + "]";
    NetNode nd;
    nd.name = names[i];
    nd.card = as_int(field(nodes[i], "card", where), where + ".card");
    const Json& parents = field(nodes[i], "parents", where);
    if (!parents.is_array()) throw ValidationError(where + ".parents: expected an array");
    for (const auto& p : parents) {
      if (!p.is_string()) throw ValidationError(where + ".parents: expected node names");
      const auto it = std::find(names.begin(), names.end(), p.get<std::string>());
      if (it == names.end()) throw ValidationError(where + ".parents: unknown node '" + p.get<std::string>() + "'");
      nd.parents.push_back(static_cast<int>(it - names.begin()));
    }
    const Json& cpt = field(nodes[i], "cpt", where);
    if (!cpt.is_array()) throw ValidationError(where + ".cpt: expected an array of rows");
    for (std::size_t r = 0; r < cpt.size(); ++r) {
      nd.cpt.push_back(number_array(cpt[r], where + ".cpt[" + std::to_string(r) + "]"));
    }
    out.push_back(std::move(nd));
  }
  return DiscreteNet(std::move(out), kFileRowTolerance);
}

Json net_to_json(const DiscreteNet& net) {
  Json nodes = Json::array();
  for (const NetNode& nd : net.nodes()) {
    Json parents = Json::array();
    for (int p : nd.parents) parents.push_back(net.node(p).name);
    nodes.push_back({{"name", nd.name}, {"card", nd.card}, {"parents", parents}, {"cpt", nd.cpt}});
  }
  return {{"nodes", nodes}};
}

KPartition net_partition_from_json(const Json& j, const DiscreteNet& net) {
  KPartition part;
  part.layer.assign(static_cast<std::size_t>(net.size()), 0);
  if (j.is_object() && j.contains("layers")) {
    const Json& layers = j.at("layers");
    if (!layers.is_array()) throw ValidationError("partition.layers: expected an array of name lists");
    part.k = static_cast<int>(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::string where = "partition.layers[" + std::to_string(l) + "]";
      if (!layers[l].is_array()) throw ValidationError(where + ": expected node names");
      for (const auto& name : layers[l]) {
        if (!name.is_string()) throw ValidationError(where + ": expected node names");
        const int v = net.index_of(name.get<std::string>());
        if (part.layer[v] != 0) throw ValidationError(where + ": node '" + name.get<std::string>() + "' listed twice");
        part.layer[v] = static_cast<int>(l) + 1;
      }
    }
  } else if (j.is_object() && j.contains("assignment")) {
    const std::vector<double> a = number_array(j.at("assignment"), "partition.assignment");
    if (static_cast<int>(a.size()) != net.size()) throw ValidationError("partition.assignment: one layer per node required");
    for (std::size_t i = 0; i < a.size(); ++i) {
      part.layer[i] = static_cast<int>(a[i]);
      part.k = std::max(part.k, part.layer[i]);
    }
  } else {
    throw ValidationError("partition: expected a 'layers' or 'assignment' field");
  }
  for (int i = 0; i < net.size(); ++i) {
    if (part.layer[i] < 1) throw ValidationError("partition: node '" + net.node(i).name + "' has no layer");
  }
  return part;
}

LinearSem sem_from_json(const Json& j) {
  const int n = as_int(field(j, "n", "sem"), "sem.n");
  if (n < 1) throw ValidationError("sem.n: must be positive");
  const Json& a = field(j, "A", "sem");
  if (!a.is_array() || static_cast<int>(a.size()) != n) throw ValidationError("sem.A: expected n rows");
  Eigen::MatrixXd mat(n, n);
  for (int i = 0; i < n; ++i) {
    const std::vector<double> row = number_array(a[i], "sem.A[" + std::to_string(i) + "]");
    if (static_cast<int>(row.size()) != n) throw ValidationError("sem.A[" + std::to_string(i) + "]: expected n entries");
    for (int k = 0; k < n; ++k) mat(i, k) = row[k];
  }
  const std::vector<double> nv = number_array(field(j, "noise_vars", "sem"), "sem.noise_vars");
  if (static_cast<int>(nv.size()) != n) throw ValidationError("sem.noise_vars: expected n entries");
  Eigen::VectorXd noise = Eigen::Map<const Eigen::VectorXd>(nv.data(), n);
  Eigen::VectorXd means = Eigen::VectorXd::Zero(n);
  if (j.contains("means")) {
    const std::vector<double> mv = number_array(j.at("means"), "sem.means");
    if (static_cast<int>(mv.size()) != n) throw ValidationError("sem.means: expected n entries");
    means = Eigen::Map<const Eigen::VectorXd>(mv.data(), n);
  }
  std::vector<int> order;
  if (j.contains("order")) {
    for (double v : number_array(j.at("order"), "sem.order")) order.push_back(static_cast<int>(v) - 1);
  }
  std::optional<KPartition> part;
  if (j.contains("partition")) {
    KPartition p;
    for (double v : number_array(j.at("partition"), "sem.partition")) {
      p.layer.push_back(static_cast<int>(v));
      p.k = std::max(p.k, static_cast<int>(v));
    }
    if (static_cast<int>(p.layer.size()) != n) throw ValidationError("sem.partition: expected n entries");
    for (int l : p.layer)
      if (l < 1) throw ValidationError("sem.partition: layers are numbered from 1");
    part = std::move(p);
  }
  return LinearSem(std::move(mat), std::move(noise), std::move(means), std::move(order), std::move(part));
}

EdgeSet parse_edges(const std::string& spec, const DiscreteNet& net) {
  EdgeSet s;
  for (const std::string& tok : split(spec, ',')) {
    if (tok.empty()) continue;
    const auto [a, b] = split_arrow(tok);
    s.insert({net.index_of(a), net.index_of(b)});
  }
  check_edges(net, s);
  return s;
}

EdgeSet parse_index_edges(const std::string& spec, int n) {
  EdgeSet s;
  for (const std::string& tok : split(spec, ',')) {
    if (tok.empty()) continue;
    const auto [a, b] = split_arrow(tok);
    const auto idx = [&](const std::string& t) {
      const double v = parse_double(t, "edge '" + tok + "'");
      if (v != std::floor(v) || v < 1 || v > n) {
        throw ValidationError("edge '" + tok + "': variables are numbered 1.." + std::to_string(n));
      }
      return static_cast<int>(v) - 1;
    };
    s.insert({idx(a), idx(b)});
  }
  return s;
}

std::vector<double> probs_from_json(const Json& j) {
  if (j.is_array()) return number_array(j, "distribution");
  return number_array(field(j, "probs", "distribution"), "distribution.probs");
}

Csv read_csv(std::istream& in, const std::string& source) {
  Csv csv;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line, ',');
    if (!have_header) {
      csv.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != csv.header.size()) {
      throw ValidationError(source + ": line " + std::to_string(line_no) + ": expected " +
                            std::to_string(csv.header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    csv.rows.push_back(std::move(fields));
  }
  if (!have_header) throw ValidationError(source + ": missing header row");
  return csv;
}

Csv read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_csv(in, path);
}

SampleMatrix samples_from_csv(const Csv& csv, const DiscreteNet& net, const std::string& source) {
  std::vector<int> column_of(static_cast<std::size_t>(net.size()), -1);
  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    int v = -1;
    for (int i = 0; i < net.size(); ++i)
      if (net.node(i).name == csv.header[c]) v = i;
    if (v < 0) throw ValidationError(source + ": header column '" + csv.header[c] + "' is not a model node");
    column_of[v] = static_cast<int>(c);
  }
  for (int i = 0; i < net.size(); ++i) {
    if (column_of[i] < 0) throw ValidationError(source + ": no column for node '" + net.node(i).name + "'");
  }
  SampleMatrix m;
  m.rows = csv.rows.size();
  m.cols = static_cast<std::size_t>(net.size());
  m.values.resize(m.rows * m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (int i = 0; i < net.size(); ++i) {
      const std::string& f = csv.rows[r][static_cast<std::size_t>(column_of[i])];
      const std::string where = source + ": data row " + std::to_string(r + 1) + ", column '" + net.node(i).name + "'";
      int v = 0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) throw ValidationError(where + ": expected an integer");
      if (v < 0 || v >= net.node(i).card) throw ValidationError(where + ": value out of range");
      m.values[r * m.cols + static_cast<std::size_t>(i)] = v;
    }
  }
  return m;
}

std::string samples_to_csv(const SampleMatrix& m, const DiscreteNet& net) {
  std::ostringstream os;
  for (int i = 0; i < net.size(); ++i) os << (i ? "," : "") << net.node(i).name;
  os << "\n";
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) os << (c ? "," : "") << m.at(r, c);
    os << "\n";
  }
  return os.str();
}

std::vector<double> numeric_column(const Csv& csv, const std::string& column, const std::string& source) {
  const auto it = std::find(csv.header.begin(), csv.header.end(), column);
  if (it == csv.header.end()) throw ValidationError(source + ": missing column '" + column + "'");
  const auto c = static_cast<std::size_t>(it - csv.header.begin());
  std::vector<double> out;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    out.push_back(parse_double(csv.rows[r][c], source + ": data row " + std::to_string(r + 1) + ", column '" + column + "'"));
  }
  return out;
}

std::vector<double> single_numeric_column(const Csv& csv, const std::string& source) {
  if (csv.header.size() != 1) throw ValidationError(source + ": expected exactly one column");
  return numeric_column(csv, csv.header[0], source);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& tok : split(text, ',')) {
    if (tok.empty()) throw ValidationError("empty entry in number list '" + text + "'");
    out.push_back(parse_double(tok, "number list"));
  }
  return out;
}

}  // namespace causent::io

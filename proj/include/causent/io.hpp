#pragma once

// JSON and CSV formats for nets, SEMs, partitions and samples.

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "causent/discrete_net.hpp"
#include "causent/order.hpp"
#include "causent/sem.hpp"

namespace causent::io {

using Json = nlohmann::json;

inline constexpr double kFileRowTolerance = 1e-9;

// Floats rounded to 12 significant digits, keys sorted, two-space indent.
std::string canonical_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// {"nodes":[{"name":..,"card":..,"parents":[names],"cpt":[[..],..]}, ..]}
// Parents are listed in ascending node order; CPT rows follow that order
// with the first parent most significant.
DiscreteNet net_from_json(const Json& j);
Json net_to_json(const DiscreteNet& net);

// {"layers":[["Z","X"],["Y"]]} or {"assignment":[1,1,2]}.
KPartition net_partition_from_json(const Json& j, const DiscreteNet& net);

// {"n":..,"order":[1-based],"A":[[..]],"noise_vars":[..],"means":[..],
//  "partition":[layer per node]}; "means" are noise means.
LinearSem sem_from_json(const Json& j);

// "A->B,C->D" with node names.
EdgeSet parse_edges(const std::string& spec, const DiscreteNet& net);
// "1->2,2->3" with 1-based indices.
EdgeSet parse_index_edges(const std::string& spec, int n);

// A probability vector: a JSON array or {"probs":[..]}.
std::vector<double> probs_from_json(const Json& j);

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Comma separated, mandatory header row, blank lines skipped.
Csv read_csv(std::istream& in, const std::string& source);
Csv read_csv_file(const std::string& path);

// Columns matched to node names by the header.
SampleMatrix samples_from_csv(const Csv& csv, const DiscreteNet& net, const std::string& source);
std::string samples_to_csv(const SampleMatrix& m, const DiscreteNet& net);

std::vector<double> numeric_column(const Csv& csv, const std::string& column, const std::string& source);
// Values of a file with exactly one column.
std::vector<double> single_numeric_column(const Csv& csv, const std::string& source);

// "1,2,3" -> numbers.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace causent::io

#include "causent/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "causent/divergence.hpp"
#include "causent/entropy_design.hpp"
#include "causent/error.hpp"
#include "causent/influence.hpp"
#include "causent/io.hpp"
#include "causent/order.hpp"
#include "causent/order_enum.hpp"
#include "causent/sem.hpp"
#include "causent/stat_tests.hpp"

namespace causent::cli {

namespace {

using io::Json;

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

// Prefixes validation failures with the file they came from.
template <class F>
auto from_file(const std::string& path, F&& parse) {
  const Json j = io::read_json_file(path);
  try {
    return parse(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

DiscreteNet load_net(const std::string& path) {
  return from_file(path, [](const Json& j) { return io::net_from_json(j); });
}

KPartition load_partition(const std::string& path, const DiscreteNet& net) {
  return from_file(path, [&](const Json& j) { return io::net_partition_from_json(j, net); });
}

Json census_json(const EnumCensus& c) {
  const auto hist = [](const std::map<int, std::uint64_t>& m) {
    Json j = Json::object();
    for (const auto& [k, v] : m) j[std::to_string(k)] = v;
    return j;
  };
  const LowerBoundCheck lb = check_lower_bound(c);
  Json curve = Json::array();
  for (const CurvePoint& p : empirical_entropy_curve(c)) {
    curve.push_back({{"relations", p.relations}, {"d", p.d}, {"entropy", p.entropy}, {"count", p.count}});
  }
  return {{"n", c.n},
          {"total", c.total},
          {"by_relations", hist(c.by_relations)},
          {"by_height", hist(c.by_height)},
          {"by_hasse_edges", hist(c.by_hasse_edges)},
          {"lower_bound",
           {{"holds", lb.holds},
            {"exponent", lb.exponent},
            {"bound", lb.bound},
            {"bipartite_family", lb.bipartite_family},
            {"height_at_most_two", lb.height_at_most_two}}},
          {"curve", curve}};
}

Json design_json(double d, const LayeredDesign& des) {
  Json j = {{"d", d},
            {"k", des.k},
            {"lambdas", des.lambdas},
            {"p", des.p},
            {"objective", des.objective},
            {"density", des.density()},
            {"low_p_branch", des.uses_low_p_branch()}};
  if (d <= 0.1875) {
    const EntropyPoint e = structural_entropy(d);
    j["closed_form"] = e.c;
    j["regime"] = std::string(to_string(e.regime));
  } else {
    j["regime"] = std::string(to_string(EntropyRegime::numeric));
  }
  return j;
}

DivergenceSpec family_from(const std::string& family, double lambda, double beta) {
  if (family == "directed") return DivergenceSpec::directed(beta);
  return parse_family(family, lambda);
}

Json verdict_json(const TestVerdict& v, const DiscreteNet* net) {
  Json nodes = Json::array();
  for (const NodeVerdict& nv : v.per_node) {
    nodes.push_back({{"node", net ? net->node(nv.node).name : std::to_string(nv.node)},
                     {"reject_null", nv.reject_null},
                     {"statistic", nv.statistic},
                     {"threshold", nv.threshold},
                     {"samples_used", nv.samples_used},
                     {"alphabet", nv.alphabet}});
  }
  Json j = {{"reject_null", v.reject_null},
            {"statistic", v.statistic},
            {"threshold", v.threshold},
            {"samples_used", v.samples_used},
            {"per_node", nodes},
            {"warnings", v.warnings}};
  if (!std::isnan(v.p_value)) j["p_value"] = v.p_value;
  return j;
}

std::vector<Edge> read_edge_list(const std::string& path, int& n) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::vector<Edge> edges;
  std::string line;
  int line_no = 0, max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& c : line)
      if (c == ',' || c == '\t') c = ' ';
    std::istringstream is(line);
    long a = 0, b = 0;
    if (!(is >> a)) continue;
    std::string rest;
    if (!(is >> b) || (is >> rest)) {
      throw ValidationError(path + ": line " + std::to_string(line_no) + ": expected two point labels");
    }
    if (a < 1 || b < 1) throw ValidationError(path + ": line " + std::to_string(line_no) + ": labels start at 1");
    edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
    max_label = std::max<int>(max_label, static_cast<int>(std::max(a, b)));
  }
  if (n == 0) n = max_label;
  if (max_label > n) throw ValidationError(path + ": label " + std::to_string(max_label) + " exceeds --n");
  return edges;
}

std::vector<double> dirichlet_row(int card, std::mt19937_64& rng) {
  std::vector<double> row(static_cast<std::size_t>(card));
  double sum = 0.0;
  for (double& v : row) {
    v = -std::log(1.0 - unit_uniform(rng()));
    sum += v;
  }
  for (double& v : row) v /= sum;
  return row;
}

struct Simulated {
  DiscreteNet net;
  KPartition part;
};

Simulated simulate_net(const std::vector<int>& sizes, double p, int card, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NetNode> nodes;
  std::vector<int> first;
  KPartition part;
  part.k = static_cast<int>(sizes.size());
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    first.push_back(static_cast<int>(nodes.size()));
    for (int v = 0; v < sizes[l]; ++v) {
      NetNode nd;
      nd.name = "L" + std::to_string(l + 1) + "_" + std::to_string(v + 1);
      nd.card = card;
      if (l > 0) {
        for (int u = 0; u < sizes[l - 1]; ++u)
          if (unit_uniform(rng()) < p) nd.parents.push_back(first[l - 1] + u);
      }
      nodes.push_back(std::move(nd));
      part.layer.push_back(static_cast<int>(l) + 1);
    }
  }
  for (NetNode& nd : nodes) {
    std::size_t rows = 1;
    for (std::size_t k = 0; k < nd.parents.size(); ++k) rows *= static_cast<std::size_t>(card);
    for (std::size_t r = 0; r < rows; ++r) nd.cpt.push_back(dirichlet_row(card, rng));
  }
  return {DiscreteNet(std::move(nodes)), std::move(part)};
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Structural entropy, causal influence and testing toolkit", "causent"};
    app.require_subcommand(1);
    std::string out_path;
    std::function<void()> action;

    // enumerate
    auto* en = app.add_subcommand("enumerate", "Exhaustive census of labeled strict orders on n points");
    int en_n = 0;
    en->add_option("--n", en_n, "Number of points (0..6)")->required();
    std::string en_by;
    en->add_option("--by", en_by, "Keep only one histogram")->check(CLI::IsMember({"relations", "height", "hasse_edges"}));
    en->add_option("--out", out_path, "Output JSON path");
    en->callback([&] {
      action = [&] {
        Json j = census_json(enumerate_orders(en_n));
        if (!en_by.empty()) {
          for (const char* key : {"relations", "height", "hasse_edges"})
            if (en_by != key) j.erase(std::string("by_") + key);
        }
        emit(out_, out_path, io::canonical_json(j));
      };
    });

    // entropy-curve
    auto* ec = app.add_subcommand("entropy-curve", "Closed-form and optimizer entropy curve as CSV");
    double ec_min = 0.01, ec_max = 0.45;
    int ec_steps = 100, ec_kmax = 0;
    ec->add_option("--dmin", ec_min, "Smallest density");
    ec->add_option("--dmax", ec_max, "Largest density");
    ec->add_option("--steps", ec_steps, "Number of grid points");
    ec->add_option("--kmax", ec_kmax, "Layer budget (default grows with d)");
    ec->add_option("--out", out_path, "Output CSV path");
    ec->callback([&] { action = [&] { entropy_curve(ec_min, ec_max, ec_steps, ec_kmax, out_path); }; });

    // optimize-design
    auto* od = app.add_subcommand("optimize-design", "Maximum-entropy k-layer design for a density");
    double od_d = 0.0;
    int od_kmax = 8;
    od->add_option("--d", od_d, "Comparable-pair density in (0, 1/2)")->required();
    od->add_option("--kmax", od_kmax, "Largest layer count");
    od->add_flag("--json", "JSON output (the only format)");
    od->add_option("--out", out_path, "Output JSON path");
    od->callback([&] {
      action = [&] { emit(out_, out_path, io::canonical_json(design_json(od_d, optimize_design(od_d, od_kmax)))); };
    });

    // density
    auto* de = app.add_subcommand("density", "Comparable-pair density from counts or a relation file");
    double de_rows = 0, de_cols = 0, de_rel = -1, de_n = 0;
    std::string de_file;
    std::size_t de_samples = 0;
    std::uint64_t seed = 0;
    de->add_option("--rows", de_rows, "Bipartite rows");
    de->add_option("--cols", de_cols, "Bipartite columns");
    de->add_option("--relations", de_rel, "Relation count");
    de->add_option("--n", de_n, "Unit count");
    de->add_option("--relations-file", de_file, "Edge list 'a b' per line, 1-based; closed transitively");
    de->add_option("--samples", de_samples, "Estimate from this many sampled pairs instead of counting");
    de->add_option("--seed", seed, "Random seed");
    de->add_option("--out", out_path, "Output JSON path");
    de->callback([&] { action = [&] { density(de_rows, de_cols, de_rel, de_n, de_file, de_samples, seed, out_path); }; });

    // intervene
    auto* iv = app.add_subcommand("intervene", "Sever edges and write the post-intervention model");
    std::string model, edges;
    iv->add_option("--model", model, "Model JSON")->required();
    iv->add_option("--edges", edges, "Edges 'A->B,C->D'")->required();
    iv->add_option("--out", out_path, "Output model JSON path");
    iv->callback([&] {
      action = [&] {
        const DiscreteNet net = load_net(model);
        emit(out_, out_path, io::canonical_json(io::net_to_json(intervene(net, io::parse_edges(edges, net)))));
      };
    });

    // influence
    auto* in = app.add_subcommand("influence", "Causal influence of an edge set");
    std::string family = "kl", partition_path, report = "json";
    double lambda = 1.0, beta = 2.0;
    in->add_option("--model", model, "Model JSON")->required();
    in->add_option("--edges", edges, "Edges 'A->B,C->D'")->required();
    in->add_option("--family", family, "kl|h2|tv|chi2|power|directed");
    in->add_option("--lambda", lambda, "Power-divergence index");
    in->add_option("--beta", beta, "Directed-divergence type");
    in->add_option("--partition", partition_path, "Partition JSON for per-layer grouping");
    in->add_option("--report", report, "Report format (json)")->check(CLI::IsMember({"json"}));
    in->add_option("--out", out_path, "Output JSON path");
    in->callback([&] { action = [&] { influence(model, edges, family, lambda, beta, partition_path, out_path); }; });

    // sem-influence
    auto* si = app.add_subcommand("sem-influence", "Gaussian influence in a linear SEM");
    std::string grouping = "per_target";
    si->add_option("--model", model, "SEM JSON")->required();
    si->add_option("--edges", edges, "Edges '1->2,2->3' (1-based)")->required();
    si->add_option("--family", family, "kl|h2")->check(CLI::IsMember({"kl", "h2"}));
    si->add_option("--grouping", grouping, "per_target|per_edge")->check(CLI::IsMember({"per_target", "per_edge"}));
    si->add_option("--out", out_path, "Output JSON path");
    si->callback([&] { action = [&] { sem_influence(model, edges, family, grouping, out_path); }; });

    // test-influence
    auto* ti = app.add_subcommand("test-influence", "Sample-based test for influence of an edge set");
    double eps = 0.1, delta = 1.0 / 3.0, budget_c = 10.0;
    std::string obs_path, int_path;
    ti->add_option("--model", model, "Model JSON")->required();
    ti->add_option("--partition", partition_path, "Partition JSON")->required();
    ti->add_option("--edges", edges, "Edges 'A->B,C->D'")->required();
    ti->add_option("--eps", eps, "Separation epsilon");
    ti->add_option("--delta", delta, "Error probability");
    ti->add_option("--budget-constant", budget_c, "Sample budget constant C");
    ti->add_option("--obs", obs_path, "Observational samples CSV (sampled from the model if absent)");
    ti->add_option("--int", int_path, "Interventional samples CSV (sampled from the model if absent)");
    ti->add_option("--seed", seed, "Random seed");
    ti->add_option("--out", out_path, "Output JSON path");
    ti->callback([&] {
      action = [&] { test_influence(model, partition_path, edges, eps, delta, budget_c, obs_path, int_path, seed, out_path); };
    });

    // gof
    auto* gf = app.add_subcommand("gof", "Power-divergence goodness-of-fit test");
    std::string counts, counts_file, null_list;
    double alpha = 0.05;
    gf->add_option("--counts", counts, "Observed counts '30,70'");
    gf->add_option("--counts-file", counts_file, "One-column CSV of counts");
    gf->add_option("--null", null_list, "Null probabilities (uniform if absent)");
    gf->add_option("--lambda", lambda, "Power-divergence index");
    gf->add_option("--alpha", alpha, "Significance level");
    gf->add_option("--out", out_path, "Output JSON path");
    gf->callback([&] { action = [&] { gof(counts, counts_file, null_list, lambda, alpha, out_path); }; });

    // ate
    auto* at = app.add_subcommand("ate", "Treatment-effect run test or ERL estimate");
    std::string treat, ctrl, method = "runs", alternative = "two-sided", data;
    at->add_option("--treat", treat, "Treated outcomes, one-column CSV");
    at->add_option("--ctrl", ctrl, "Control outcomes, one-column CSV");
    at->add_option("--method", method, "runs|erl")->check(CLI::IsMember({"runs", "erl"}));
    at->add_option("--alternative", alternative, "two-sided|fewer-runs")->check(CLI::IsMember({"two-sided", "fewer-runs"}));
    at->add_option("--alpha", alpha, "Significance level");
    at->add_option("--data", data, "ERL CSV with y, exposure, exposure_mean, exposure_var");
    at->add_option("--out", out_path, "Output JSON path");
    at->callback([&] { action = [&] { ate(treat, ctrl, method, alternative, alpha, data, out_path); }; });

    // simulate
    auto* sm = app.add_subcommand("simulate", "Random k-partite net and samples");
    std::string layers, out_model, out_samples, out_partition;
    double sim_d = 0.0, sim_p = -1.0;
    int units = 12, card = 2, sim_kmax = 8;
    std::size_t n_samples = 0;
    sm->add_option("--layers", layers, "Layer sizes '3,4,2'");
    sm->add_option("--d", sim_d, "Take layer fractions and p from the optimal design at this density");
    sm->add_option("--units", units, "Node count when sizing layers from --d");
    sm->add_option("--kmax", sim_kmax, "Layer budget for --d");
    sm->add_option("--p", sim_p, "Adjacent-layer edge probability");
    sm->add_option("--card", card, "Alphabet size per node");
    sm->add_option("--samples", n_samples, "Rows to sample");
    sm->add_option("--seed", seed, "Random seed");
    sm->add_option("--out-model", out_model, "Model JSON path");
    sm->add_option("--out-partition", out_partition, "Partition JSON path");
    sm->add_option("--out-samples", out_samples, "Samples CSV path");
    sm->add_option("--out", out_path, "Summary JSON path");
    sm->callback([&] {
      action = [&] {
        simulate(layers, sim_d, units, sim_kmax, sim_p, card, n_samples, seed, out_model, out_partition, out_samples, out_path);
      };
    });

    // order
    auto* od2 = app.add_subcommand("order", "Closure, Hasse diagram and levels of a DAG");
    int ord_n = 0;
    std::string ord_layers, ord_file;
    od2->add_option("--n", ord_n, "Point count (default: largest label)");
    od2->add_option("--edges", edges, "Edges '1->2,2->3' (1-based)");
    od2->add_option("--file", ord_file, "Order JSON with \"covers\" or \"relations\" pairs (1-based)");
    od2->add_option("--layers", ord_layers, "Layer per point '1,1,2' to validate as a k-partition");
    od2->add_option("--out", out_path, "Output JSON path");
    od2->callback([&] { action = [&] { order(ord_n, edges, ord_file, ord_layers, out_path); }; });

    // divergence
    auto* dv = app.add_subcommand("divergence", "Divergence between two distributions");
    std::string p_path, q_path;
    dv->add_option("--family", family, "kl|h2|tv|chi2|power|directed");
    dv->add_option("--lambda", lambda, "Power-divergence index");
    dv->add_option("--beta", beta, "Directed-divergence type");
    dv->add_option("--p", p_path, "First distribution JSON")->required();
    dv->add_option("--q", q_path, "Second distribution JSON")->required();
    dv->add_option("--eps", eps, "Closeness epsilon");
    dv->add_option("--out", out_path, "Output JSON path");
    dv->callback([&] { action = [&] { divergence(family, lambda, beta, p_path, q_path, eps, out_path); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitInvalid;
    }
    try {
      if (action) action();
    } catch (const InsufficientSamples& e) {
      err_ << "insufficient samples: " << e.what() << "\n";
      return kExitInsufficientSamples;
    } catch (const CycleError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitInvalid;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitInvalid;
    }
    return kExitOk;
  }

 private:
  void entropy_curve(double dmin, double dmax, int steps, int kmax, const std::string& path) {
    if (!(dmin > 0.0 && dmax < 0.5 && dmin <= dmax)) throw ValidationError("need 0 < dmin <= dmax < 1/2");
    if (steps < 1) throw ValidationError("--steps must be at least 1");
    std::ostringstream os;
    os << "d,c_closed_form_if_any,c_numeric,k,p\n";
    char buf[160];
    for (int s = 0; s < steps; ++s) {
      const double d = steps == 1 ? dmin : dmin + (dmax - dmin) * s / (steps - 1);
      const LayeredDesign des = optimize_design(d, kmax > 0 ? kmax : default_k_max(d));
      std::string closed;
      if (d <= 0.1875) {
        std::snprintf(buf, sizeof buf, "%.12g", structural_entropy(d).c);
        closed = buf;
      }
      std::snprintf(buf, sizeof buf, "%.12g,%s,%.12g,%d,%.12g\n", d, closed.c_str(), des.objective, des.k, des.p);
      os << buf;
    }
    emit(out_, path, os.str());
  }

  void density(double rows, double cols, double rel, double n, const std::string& file, std::size_t samples,
               std::uint64_t seed, const std::string& path) {
    Json j;
    if (!file.empty()) {
      int points = static_cast<int>(n);
      const std::vector<Edge> edges = read_edge_list(file, points);
      if (points < 1) throw ValidationError(file + ": no relations and no --n");
      const StrictOrder order = transitive_closure(points, edges);
      j = {{"mode", "relations_file"}, {"n", points}, {"relations", order.relation_count()}};
      if (samples > 0) {
        const DensitySample ds = sample_density(order, samples, seed);
        j["d"] = ds.d;
        j["std_error"] = ds.std_error;
        j["samples"] = ds.samples;
        j["exact_d"] = density_square(points, static_cast<double>(order.relation_count()));
      } else {
        j["d"] = density_square(points, static_cast<double>(order.relation_count()));
      }
    } else {
      if (rel < 0) throw ValidationError("--relations is required without --relations-file");
      DensityInput in;
      in.relations = rel;
      in.n_units = n;
      if (rows > 0 || cols > 0) in.bipartite_dims = std::make_pair(rows, cols);
      j = {{"mode", in.bipartite_dims ? "bipartite" : "square"}, {"relations", rel}, {"d", estimate_density(in)}};
    }
    const double d = j["d"].get<double>();
    if (d > 0) j["log10_d"] = std::log10(d);
    emit(out_, path, io::canonical_json(j));
  }

  void influence(const std::string& model, const std::string& edges, const std::string& family, double lambda,
                 double beta, const std::string& partition_path, const std::string& path) {
    const DiscreteNet net = load_net(model);
    const EdgeSet s = io::parse_edges(edges, net);
    const DivergenceSpec spec = family_from(family, lambda, beta);
    InfluenceResult r;
    if (partition_path.empty()) {
      r = causal_influence(net, s, spec);
    } else {
      r = kpartite_aci(net, load_partition(partition_path, net), s, spec);
    }
    Json per_target = Json::object();
    for (const auto& [t, v] : r.per_target) per_target[net.node(t).name] = v;
    Json j = {{"family", spec.name()},
              {"total", r.total},
              {"kind", std::string(to_string(r.kind))},
              {"aci", r.aci},
              {"edge_count", r.edge_count},
              {"per_target", per_target},
              {"term_sum", r.term_sum()}};
    if (!partition_path.empty()) {
      Json per_layer = Json::object();
      for (const auto& [l, v] : r.per_layer) per_layer[std::to_string(l)] = v;
      j["per_layer"] = per_layer;
    }
    emit(out_, path, io::canonical_json(j));
  }

  void sem_influence(const std::string& model, const std::string& edges, const std::string& family,
                     const std::string& grouping, const std::string& path) {
    const LinearSem sem = from_file(model, [](const Json& j) { return io::sem_from_json(j); });
    const EdgeSet s = io::parse_index_edges(edges, sem.size());
    const GaussianDist p = observational_cov(sem);
    const GaussianDist q = intervened_cov(sem, s);
    const bool kl = family == "kl";
    Json j = {{"family", family}, {"divergence", kl ? gaussian_kl(p, q) : gaussian_hellinger_sq(p, q)},
              {"edge_count", s.size()}};
    if (sem.partition()) {
      const InfluenceResult r = sem_kpartite_aci(sem, s, kl ? SemFamily::kl : SemFamily::hellinger_sq,
                                                 grouping == "per_edge" ? SemGrouping::per_edge : SemGrouping::per_target);
      Json per_target = Json::object(), per_layer = Json::object();
      for (const auto& [t, v] : r.per_target) per_target[std::to_string(t + 1)] = v;
      for (const auto& [l, v] : r.per_layer) per_layer[std::to_string(l)] = v;
      j["aci"] = r.aci;
      j["group_sum"] = r.total;
      j["kind"] = std::string(to_string(r.kind));
      j["grouping"] = grouping;
      j["per_target"] = per_target;
      j["per_layer"] = per_layer;
    }
    emit(out_, path, io::canonical_json(j));
  }

  void test_influence(const std::string& model, const std::string& partition_path, const std::string& edges,
                      double eps, double delta, double budget_c, const std::string& obs_path,
                      const std::string& int_path, std::uint64_t seed, const std::string& path) {
    const DiscreteNet net = load_net(model);
    const KPartition part = load_partition(partition_path, net);
    const EdgeSet s = io::parse_edges(edges, net);
    InfluenceTestOptions opt;
    opt.delta = delta;
    opt.hellinger.budget_constant = budget_c;
    TestVerdict v;
    if (obs_path.empty() != int_path.empty()) throw ValidationError("give both --obs and --int, or neither");
    if (obs_path.empty()) {
      v = algorithm2_influence_test(net, part, s, eps, seed, opt);
    } else {
      const SampleMatrix obs = io::samples_from_csv(io::read_csv_file(obs_path), net, obs_path);
      const SampleMatrix itv = io::samples_from_csv(io::read_csv_file(int_path), net, int_path);
      v = algorithm2_influence_test(net, part, s, eps, obs, itv, opt);
    }
    Json j = verdict_json(v, &net);
    j["influence_detected"] = v.reject_null;
    emit(out_, path, io::canonical_json(j));
  }

  void gof(const std::string& counts, const std::string& counts_file, const std::string& null_list, double lambda,
           double alpha, const std::string& path) {
    if (counts.empty() == counts_file.empty()) throw ValidationError("give exactly one of --counts and --counts-file");
    const std::vector<double> c =
        counts.empty() ? io::single_numeric_column(io::read_csv_file(counts_file), counts_file) : io::parse_number_list(counts);
    std::vector<double> null = null_list.empty() ? std::vector<double>(c.size(), 1.0 / static_cast<double>(c.size()))
                                                 : io::parse_number_list(null_list);
    const TestVerdict v = power_divergence_gof(c, null, lambda, alpha);
    Json j = verdict_json(v, nullptr);
    j.erase("per_node");
    j["lambda"] = lambda;
    j["degrees_of_freedom"] = c.size() - 1;
    if (const auto label = power_divergence_label(lambda)) j["label"] = *label;
    emit(out_, path, io::canonical_json(j));
  }

  void ate(const std::string& treat, const std::string& ctrl, const std::string& method, const std::string& alternative,
           double alpha, const std::string& data, const std::string& path) {
    Json j;
    if (method == "runs") {
      if (treat.empty() || ctrl.empty()) throw ValidationError("the run test needs --treat and --ctrl");
      const auto t = io::single_numeric_column(io::read_csv_file(treat), treat);
      const auto c = io::single_numeric_column(io::read_csv_file(ctrl), ctrl);
      const RunTestResult r = ww_ate_run_test(t, c, alpha,
                                              alternative == "two-sided" ? RunAlternative::two_sided : RunAlternative::fewer_runs);
      j = {{"method", "runs"}, {"r", r.r},       {"u", r.u},
           {"v", r.v},         {"expected_r", r.expected_r},
           {"var_r", r.var_r}, {"z", r.z},       {"p_value", r.p_value},
           {"reject_null", r.reject_null},       {"ties", r.ties},
           {"alternative", alternative},         {"warnings", r.warnings}};
    } else {
      if (data.empty()) throw ValidationError("the ERL estimate needs --data");
      const io::Csv csv = io::read_csv_file(data);
      const double tau = erl_estimate(io::numeric_column(csv, "y", data), io::numeric_column(csv, "exposure", data),
                                      io::numeric_column(csv, "exposure_mean", data),
                                      io::numeric_column(csv, "exposure_var", data));
      j = {{"method", "erl"}, {"tau_hat", tau}, {"n", csv.rows.size()}};
    }
    emit(out_, path, io::canonical_json(j));
  }

  void simulate(const std::string& layers, double d, int units, int kmax, double p, int card, std::size_t n_samples,
                std::uint64_t seed, const std::string& out_model, const std::string& out_partition,
                const std::string& out_samples, const std::string& path) {
    if (card < 1) throw ValidationError("--card must be at least 1");
    std::vector<int> sizes;
    Json design;
    if (!layers.empty()) {
      if (d > 0.0) throw ValidationError("give --layers or --d, not both");
      for (double v : io::parse_number_list(layers)) {
        if (v < 1 || v != std::floor(v)) throw ValidationError("layer sizes must be positive integers");
        sizes.push_back(static_cast<int>(v));
      }
      if (p < 0.0) p = 0.5;
    } else {
      if (!(d > 0.0)) throw ValidationError("give --layers or --d");
      if (units < 2) throw ValidationError("--units must be at least 2");
      const LayeredDesign des = optimize_design(d, kmax);
      design = design_json(d, des);
      int placed = 0;
      for (int l = 0; l < des.k; ++l) {
        const int left = units - placed - (des.k - l - 1);
        const int size = l + 1 == des.k ? units - placed
                                        : std::clamp(static_cast<int>(std::lround(des.lambdas[l] * units)), 1, std::max(1, left));
        sizes.push_back(size);
        placed += size;
      }
      if (sizes.back() < 1) throw ValidationError("--units is too small for a " + std::to_string(des.k) + "-layer design");
      if (p < 0.0) p = des.p;
    }
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("--p must lie in [0, 1]");
    const Simulated sim = simulate_net(sizes, p, card, seed);
    Json part_layers = Json::array();
    for (int l = 1; l <= sim.part.k; ++l) {
      Json names = Json::array();
      for (int i = 0; i < sim.net.size(); ++i)
        if (sim.part.layer[i] == l) names.push_back(sim.net.node(i).name);
      part_layers.push_back(names);
    }
    const Json partition = {{"layers", part_layers}};
    if (!out_model.empty()) io::write_text_file(out_model, io::canonical_json(io::net_to_json(sim.net)));
    if (!out_partition.empty()) io::write_text_file(out_partition, io::canonical_json(partition));
    if (n_samples > 0) {
      const std::string csv = io::samples_to_csv(sample(sim.net, n_samples, chunk_seed(seed, 0x5a)), sim.net);
      if (out_samples.empty()) throw ValidationError("--samples needs --out-samples");
      io::write_text_file(out_samples, csv);
    }
    Json summary = {{"layer_sizes", sizes}, {"p", p}, {"nodes", sim.net.size()},
                    {"edges", sim.net.edges().size()}, {"partition", partition}, {"seed", seed}};
    if (!design.is_null()) summary["design"] = design;
    if (out_model.empty()) summary["model"] = io::net_to_json(sim.net);
    emit(out_, path, io::canonical_json(summary));
  }

  void order(int n, const std::string& edges, const std::string& file, const std::string& layers,
             const std::string& path) {
    if (edges.empty() == file.empty()) throw ValidationError("give exactly one of --edges and --file");
    std::vector<Edge> list;
    int max_label = 0;
    if (file.empty()) {
      for (const Edge& e : io::parse_index_edges(edges, 1 << 20)) list.push_back(e);
    } else {
      const Json j = io::read_json_file(file);
      if (!j.is_object() || !j.contains("n")) throw ValidationError(file + ": missing \"n\"");
      n = j.at("n").get<int>();
      const char* key = j.contains("covers") ? "covers" : "relations";
      if (!j.contains(key)) throw ValidationError(file + ": need \"covers\" or \"relations\"");
      for (const Json& pair : j.at(key)) {
        if (!pair.is_array() || pair.size() != 2) throw ValidationError(file + ": each pair must be [a, b]");
        const int a = pair[0].get<int>(), b = pair[1].get<int>();
        if (a < 1 || b < 1) throw ValidationError(file + ": labels start at 1");
        list.emplace_back(a - 1, b - 1);
      }
    }
    for (const Edge& e : list) max_label = std::max({max_label, e.first + 1, e.second + 1});
    if (n == 0) n = max_label;
    if (max_label > n) throw ValidationError("edge label exceeds --n");
    const StrictOrder ord = transitive_closure(n, list);
    const HasseDag dag = transitive_reduction(ord);
    const LevelAssignment lv = compute_levels(ord);
    Json covers = Json::array(), relations = Json::array();
    for (auto [a, b] : dag.covers()) covers.push_back({a + 1, b + 1});
    for (auto [a, b] : ord.relations()) relations.push_back({a + 1, b + 1});
    Json j = {{"n", n},
              {"relation_count", ord.relation_count()},
              {"relations", relations},
              {"d", n > 0 ? density_square(n, static_cast<double>(ord.relation_count())) : 0.0},
              {"covers", covers},
              {"levels", lv.levels},
              {"height", lv.height}};
    if (!layers.empty()) {
      KPartition part;
      for (double v : io::parse_number_list(layers)) {
        part.layer.push_back(static_cast<int>(v));
        part.k = std::max(part.k, static_cast<int>(v));
      }
      const KPartitionReport rep = validate_kpartition(ord, part);
      Json viol = Json::array();
      for (const auto& v : rep.violations) viol.push_back({{"a", v.a + 1}, {"b", v.b + 1}, {"condition", v.condition}});
      j["partition"] = {{"valid", rep.valid}, {"violation_count", rep.violation_count}, {"violations", viol}};
    }
    emit(out_, path, io::canonical_json(j));
  }

  void divergence(const std::string& family, double lambda, double beta, const std::string& p_path,
                  const std::string& q_path, double eps, const std::string& path) {
    const std::vector<double> p = io::probs_from_json(io::read_json_file(p_path));
    const std::vector<double> q = io::probs_from_json(io::read_json_file(q_path));
    const DivergenceSpec spec = family_from(family, lambda, beta);
    const InequalityChain chain = inequality_chain(p, q);
    const ClosenessReport cl = closeness(p, q, eps);
    Json j = {{"family", spec.name()},
              {"value", phi_divergence(spec, p, q)},
              {"inequality_chain",
               {{"tv", chain.tv},
                {"hellinger_dist", chain.hellinger_dist},
                {"sqrt2_hellinger", chain.sqrt2_hellinger},
                {"sqrt_kl", chain.sqrt_kl},
                {"holds", chain.holds}}},
              {"closeness",
               {{"epsilon", cl.epsilon},
                {"one_sided", cl.one_sided},
                {"two_sided", cl.two_sided},
                {"worst_index", cl.worst_index},
                {"worst_ratio", cl.worst_ratio}}}};
    emit(out_, path, io::canonical_json(j));
  }

  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Runner(out, err).run(args);
}

}  // namespace causent::cli

#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace toalift {

namespace {

using nlohmann::json;

json point_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Point point_from(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, std::string(what) + " must be an array");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::Parse, std::string(what) + " must hold numbers");
    p[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return p;
}

std::vector<double> numbers_from(const json& j, const char* what) {
  const Point p = point_from(j, what);
  return {p.data(), p.data() + p.size()};
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  return *it;
}

// RFC 4180 quoting for fields that contain separators.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* axis_name(Eigen::Index i) {
  static const char* names[] = {"x", "y", "z"};
  return names[i];
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

json scenario_to_json(const Scenario& s, const MeasurementSet& m) {
  json stations = json::array();
  for (const auto& st : s.stations()) stations.push_back(point_json(st));
  return {
      {"dim", s.dim()},
      {"stations", std::move(stations)},
      {"truth", point_json(s.truth())},
      {"ranges", std::vector<double>(m.ranges().begin(), m.ranges().end())},
      {"true_ranges", std::vector<double>(m.true_ranges().begin(), m.true_ranges().end())},
      {"sigma", m.sigma()},
  };
}

std::pair<Scenario, MeasurementSet> scenario_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "scenario document must be an object");
  static const char* known[] = {"dim", "stations", "truth", "ranges", "true_ranges", "sigma"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw Error(ErrorCode::Parse, "unknown scenario field '" + key + "'");
  }
  const json& dim = field(j, "dim");
  if (!dim.is_number_integer()) throw Error(ErrorCode::Parse, "dim must be an integer");
  const json& stations_j = field(j, "stations");
  if (!stations_j.is_array()) throw Error(ErrorCode::Parse, "stations must be an array");
  std::vector<Point> stations;
  for (const auto& st : stations_j) stations.push_back(point_from(st, "station"));

  Scenario s(dim.get<int>(), std::move(stations), point_from(field(j, "truth"), "truth"));
  auto exact = j.contains("true_ranges") ? numbers_from(j["true_ranges"], "true_ranges")
                                         : true_ranges(s);
  auto ranges = j.contains("ranges") ? numbers_from(j["ranges"], "ranges") : exact;
  const double sigma = j.contains("sigma") ? j["sigma"].get<double>() : 0.0;
  MeasurementSet m(std::move(ranges), std::move(exact), sigma);
  if (m.size() != s.station_count())
    throw Error(ErrorCode::Parse, "range count does not match station count");
  return {std::move(s), std::move(m)};
}

json solve_result_to_json(const SolveResult& r) {
  json trace = json::array();
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    trace.push_back({{"position", point_json(r.trace[i].position)},
                     {"lambdas", point_json(r.trace[i].lambdas)},
                     {"cost", r.trace_costs.at(i)}});
  }
  json stages = json::array();
  for (const auto& st : r.stages) {
    stages.push_back({{"objective", st.objective},
                      {"termination", to_string(st.reason)},
                      {"iterations", st.iterations},
                      {"function_evals", st.function_evals}});
  }
  return {
      {"final_point",
       {{"position", point_json(r.final_point.position)}, {"lambdas", point_json(r.final_point.lambdas)}}},
      {"final_cost", r.final_cost},
      {"termination", to_string(r.reason)},
      {"iterations", r.iterations},
      {"function_evals", r.function_evals},
      {"clamp_flag", r.clamp_flag},
      {"stages", std::move(stages)},
      {"trace", std::move(trace)},
  };
}

std::string trace_csv(const SolveResult& r) {
  const Eigen::Index dim = r.final_point.position.size();
  Eigen::Index lifts = 0;
  for (const auto& p : r.trace) lifts = std::max(lifts, p.lambdas.size());

  std::ostringstream os;
  os << "iter";
  for (Eigen::Index i = 0; i < dim; ++i) os << ',' << axis_name(i);
  if (lifts == 1) {
    os << ",lambda";
  } else {
    for (Eigen::Index j = 0; j < lifts; ++j) os << ",lambda" << j + 1;
  }
  os << ",cost\n";

  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    const auto& p = r.trace[k];
    os << k;
    for (Eigen::Index i = 0; i < dim; ++i) os << ',' << format_double(p.position[i]);
    for (Eigen::Index j = 0; j < lifts; ++j) {
      os << ',';
      if (j < p.lambdas.size()) os << format_double(p.lambdas[j]);
    }
    os << ',' << format_double(r.trace_costs.at(k)) << '\n';
  }
  return os.str();
}

std::string results_csv(const ExperimentResult& e) {
  std::ostringstream os;
  os << "trial_index,strategy,sigma,error,outlier,termination,iterations\n";
  const auto sigma = format_double(e.config.sigma);
  for (const auto& t : e.trials) {
    for (std::size_t s = 0; s < e.config.strategies.size(); ++s) {
      const auto& o = t.outcomes[s];
      os << t.trial_index << ',' << csv_field(e.config.strategies[s].to_string()) << ',' << sigma << ','
         << format_double(o.error) << ',' << (o.outlier ? 1 : 0) << ',' << to_string(o.reason) << ','
         << o.iterations << '\n';
    }
  }
  return os.str();
}

std::string summary_csv(const ExperimentResult& e) {
  std::ostringstream os;
  os << "strategy,sigma,trials,mean,std,L,mean_no_outliers,std_no_outliers\n";
  for (std::size_t s = 0; s < e.summaries.size(); ++s) {
    const auto& row = e.summaries[s];
    os << csv_field(e.config.strategies[s].to_string()) << ',' << format_double(e.config.sigma) << ','
       << row.trial_count << ',' << format_double(row.mean_error) << ','
       << format_double(row.std_error) << ',' << row.outlier_count << ',';
    if (row.mean_error_no_outliers) os << format_double(*row.mean_error_no_outliers);
    os << ',';
    if (row.std_error_no_outliers) os << format_double(*row.std_error_no_outliers);
    os << '\n';
  }
  return os.str();
}

json summary_json(const ExperimentResult& e) {
  json rows = json::array();
  for (std::size_t s = 0; s < e.summaries.size(); ++s) {
    const auto& row = e.summaries[s];
    json r = {{"strategy", e.config.strategies[s].to_string()},
              {"sigma", e.config.sigma},
              {"trials", row.trial_count},
              {"mean", row.mean_error},
              {"std", row.std_error},
              {"L", row.outlier_count},
              {"mean_no_outliers", nullptr},
              {"std_no_outliers", nullptr}};
    if (row.mean_error_no_outliers) r["mean_no_outliers"] = *row.mean_error_no_outliers;
    if (row.std_error_no_outliers) r["std_no_outliers"] = *row.std_error_no_outliers;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string scatter_csv(const ExperimentResult& e) {
  std::ostringstream os;
  os << "trial_index";
  for (const auto& s : e.config.strategies) os << ',' << csv_field(s.to_string());
  os << '\n';
  for (const auto& t : e.trials) {
    os << t.trial_index;
    for (const auto& o : t.outcomes) os << ',' << format_double(o.error);
    os << '\n';
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

}  // namespace toalift

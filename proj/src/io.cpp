#include "hawkes/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hawkes {

namespace {

std::string format_time(double t) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", t);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("io: cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io: cannot open " + path);
  return in;
}

}  // namespace

void write_events_csv(const std::string& path, const EventSequence& events,
                      const std::vector<double>* marks) {
  if (marks && marks->size() != events.size())
    throw std::invalid_argument("io: mark count must match event count");
  auto out = open_out(path);
  out << "time,mark\n";
  for (std::size_t i = 0; i < events.size(); ++i) {
    out << format_time(events.times()[i]) << ',';
    if (marks) out << format_time((*marks)[i]);
    out << '\n';
  }
}

EventsCsv read_events_csv(const std::string& path) {
  auto in = open_in(path);
  EventsCsv result;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("time", 0) == 0) continue;
    const auto comma = line.find(',');
    const std::string time_str = comma == std::string::npos ? line : line.substr(0, comma);
    try {
      result.times.push_back(std::stod(time_str));
    } catch (const std::exception&) {
      throw std::runtime_error("io: " + path + ": bad time on line " + std::to_string(line_no));
    }
    if (comma != std::string::npos && comma + 1 < line.size()) {
      try {
        result.marks.push_back(std::stod(line.substr(comma + 1)));
      } catch (const std::exception&) {
        throw std::runtime_error("io: " + path + ": bad mark on line " + std::to_string(line_no));
      }
    } else {
      result.marks.push_back(std::nullopt);
    }
  }
  return result;
}

void write_changes_csv(const std::string& path, const lob::PriceChangeSeries& changes) {
  auto out = open_out(path);
  out << "time,change\n";
  for (const auto& e : changes.events)
    out << format_time(e.time) << ',' << format_time(e.change) << '\n';
}

void write_curves_csv(const std::string& path,
                      const std::vector<std::pair<std::string, const StdCurve*>>& curves) {
  auto out = open_out(path);
  out << "window_seconds,std,kind\n";
  for (const auto& [kind, curve] : curves) {
    for (const auto& pt : curve->points)
      out << format_time(pt.window) << ',' << format_time(pt.std) << ',' << kind << '\n';
  }
}

nlohmann::json to_json(const TransitionMatrix& P, const MarkTable& marks) {
  const int n = P.states();
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n; ++j) row.push_back(P(i, j));
    rows.push_back(std::move(row));
  }
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < marks.size(); ++i) a.push_back(marks(i));
  return nlohmann::json{{"n", n}, {"P", std::move(rows)}, {"a", std::move(a)}};
}

nlohmann::json to_json(const lob::StateModel& model, const TransitionMatrix& P) {
  nlohmann::json j = to_json(P, model.marks);
  j["boundaries"] = model.boundary_list();
  return j;
}

nlohmann::json to_json(const LimitParams& params) {
  const auto vec = [](const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  return nlohmann::json{{"a_star", params.a_star}, {"sigma_star", params.sigma_star},
                        {"b", vec(params.b)},      {"g", vec(params.g)},
                        {"v", vec(params.v)},      {"pi", vec(params.pi)}};
}

nlohmann::json to_json(const FitResult& fit) {
  nlohmann::json j{{"lambda", fit.lambda},   {"alpha", fit.alpha},
                   {"beta", fit.beta},       {"loglik", fit.loglik},
                   {"mu_hat", fit.mu_hat},   {"converged", fit.converged},
                   {"supercritical", fit.supercritical},
                   {"evaluations", fit.evaluations}};
  if (std::isnan(fit.expected_unit_arrivals))
    j["expected_unit_arrivals"] = nullptr;
  else
    j["expected_unit_arrivals"] = fit.expected_unit_arrivals;
  return j;
}

MarkModel mark_model_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const auto& rows = j.at("P");
  if (static_cast<int>(rows.size()) != n)
    throw std::runtime_error("io: mark model has " + std::to_string(rows.size()) +
                             " rows, expected " + std::to_string(n));
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw std::runtime_error("io: mark model row " + std::to_string(i) + " has wrong length");
    for (int jj = 0; jj < n; ++jj) P(i, jj) = rows[i][jj].get<double>();
  }
  const auto& a = j.at("a");
  if (static_cast<int>(a.size()) != n)
    throw std::runtime_error("io: mark model value list has wrong length");
  Eigen::VectorXd marks(n);
  for (int i = 0; i < n; ++i) marks(i) = a[i].get<double>();
  return MarkModel{TransitionMatrix(std::move(P)), std::move(marks)};
}

MarkModel read_mark_model(const std::string& path) {
  auto in = open_in(path);
  nlohmann::json j;
  in >> j;
  return mark_model_from_json(j);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace hawkes

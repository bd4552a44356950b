#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/diffusion.hpp"
#include "hawkes/empirical.hpp"
#include "hawkes/lob.hpp"
#include "hawkes/markov.hpp"
#include "hawkes/mle.hpp"
#include "hawkes/process.hpp"

namespace hawkes {

/// `time,mark` CSV with a header row; times carry 12 significant digits, the
/// mark column may be empty.
void write_events_csv(const std::string& path, const EventSequence& events,
                      const std::vector<double>* marks = nullptr);

struct EventsCsv {
  std::vector<double> times;
  std::vector<std::optional<double>> marks;
};

EventsCsv read_events_csv(const std::string& path);

/// `time,change` CSV with a header row.
void write_changes_csv(const std::string& path, const lob::PriceChangeSeries& changes);

/// `window_seconds,std,kind` CSV; one row per curve point, curves appended in
/// order with the given kind labels.
void write_curves_csv(const std::string& path,
                      const std::vector<std::pair<std::string, const StdCurve*>>& curves);

nlohmann::json to_json(const TransitionMatrix& P, const MarkTable& marks);
nlohmann::json to_json(const lob::StateModel& model, const TransitionMatrix& P);
nlohmann::json to_json(const LimitParams& params);
nlohmann::json to_json(const FitResult& fit);

struct MarkModel {
  TransitionMatrix P;
  MarkTable marks;
};

/// Reads the `{"n":…, "P":[[…]], "a":[…]}` schema.
MarkModel mark_model_from_json(const nlohmann::json& j);
MarkModel read_mark_model(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace hawkes

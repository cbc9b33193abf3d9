#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sift/dataset.hpp"
#include "sift/learning.hpp"
#include "sift/selection.hpp"
#include "sift/utility.hpp"
#include "sift/valuation.hpp"

namespace sift {

// Serialization for every artifact the pipeline exchanges. Whole-file
// writers stage to "<path>.tmp" and rename, so a crash never leaves a
// half-written file. Readers throw IoError naming the path.

// JSON Lines, one point per line:
//   {"id":int,"features":[f64],"label":int,"group":int|null}
// read_dataset infers num_classes as max(2, 1 + max label).
void write_dataset(const std::string& path, const Dataset& data);
Dataset read_dataset(const std::string& path);

// {"kind":str,"fraction":f64,"sigma":f64|null,"indices":[int]}
void write_corruption_log(const std::string& path, const CorruptionLog& log);
CorruptionLog read_corruption_log(const std::string& path);

// {"n":int,"entries":[{"mask":[int],"value":f64}],"default":{"kind":str,"params":[f64]}}
// The "default" key is omitted when no default rule is set.
void write_tabular_utility(const std::string& path, const TabularUtility& game);
TabularUtility read_tabular_utility(const std::string& path);

// {"method":str,"n":int,"scores":[f64],"meta":{...}}
void write_scores(const std::string& path, const ScoreVector& scores);
ScoreVector read_scores(const std::string& path);

// {"n":int,"mask":[int],"order":[int],"trace":[f64],"value_calls":int}
void write_selection(const std::string& path, const SelectionResult& result);
SelectionResult read_selection(const std::string& path);

// Utility-sample store: JSON Lines {"mask":[int],"utility":f64}.
// append_sample appends one line and flushes. maybe_read_samples returns
// every complete line ([] when the file does not exist); a truncated final
// line from an interrupted run is dropped silently.
void append_sample(const std::string& path, const UtilitySample& sample);
std::vector<UtilitySample> maybe_read_samples(const std::string& path, int n);

// Model checkpoint, format tag "sift-setregressor-v1": dimensions, layer
// shapes, standardization constants, flat parameter array.
void write_regressor(const std::string& path, const SetRegressor& model);
SetRegressor read_regressor(const std::string& path);

// Shared low-level helpers (also used by the experiment harness and CLI).
void write_text_atomic(const std::string& path, const std::string& text);
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& value);

}  // namespace sift

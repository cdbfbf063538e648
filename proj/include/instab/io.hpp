#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "instab/alpha.hpp"
#include "instab/dynamics.hpp"
#include "instab/operators.hpp"
#include "instab/report.hpp"
#include "instab/spaces.hpp"

namespace instab {

/// Shortest decimal representation that round-trips the double bit-exactly.
std::string format_double(double x);

/// Simple CSV emitter; headers always included, floats via format_double.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);
    const std::string& str() const { return out_; }
    void write_file(const std::string& path) const;

private:
    std::size_t columns_;
    std::string out_;
};

// JSON object forms: {lo, hi, n, values} and {N, values}.
nlohmann::json to_json(const GridFunction1D& f);
nlohmann::json to_json(const SeqVector& u);
GridFunction1D grid_from_json(const nlohmann::json& j);
SeqVector seq_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DiagonalOperator& op);
DiagonalOperator diagonal_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BoundReport& rep);
nlohmann::json to_json(const InstabilityWitness& w);

// CSV forms: (index_or_x, value) for states, (n, norm) for trajectories.
std::string to_csv(const GridFunction1D& f);
std::string to_csv(const SeqVector& u);
std::string trajectory_csv(const Trajectory& traj);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace instab

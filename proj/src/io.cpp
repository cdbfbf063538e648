#include "instab/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace instab {

std::string format_double(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw Error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ += ',';
        out_ += format_double(values[i]);
    }
    out_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ += ',';
        out_ += cells[i];
    }
    out_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const { write_text_file(path, out_); }

nlohmann::json to_json(const GridFunction1D& f) {
    return {{"lo", f.lo}, {"hi", f.hi}, {"n", f.size()}, {"values", f.values}};
}

nlohmann::json to_json(const SeqVector& u) {
    return {{"N", u.size()}, {"values", u.values}};
}

GridFunction1D grid_from_json(const nlohmann::json& j) {
    GridFunction1D f(j.at("lo").get<double>(), j.at("hi").get<double>(),
                     j.at("values").get<std::vector<double>>());
    if (j.at("n").get<std::size_t>() != f.size())
        throw Error("grid_from_json: n does not match values length");
    return f;
}

SeqVector seq_from_json(const nlohmann::json& j) {
    SeqVector u(j.at("values").get<std::vector<double>>());
    if (j.at("N").get<std::size_t>() != u.size())
        throw Error("seq_from_json: N does not match values length");
    return u;
}

nlohmann::json to_json(const DiagonalOperator& op) { return {{"weights", op.weights}}; }

DiagonalOperator diagonal_from_json(const nlohmann::json& j) {
    DiagonalOperator op;
    op.weights = j.at("weights").get<std::vector<double>>();
    return op;
}

nlohmann::json to_json(const BoundReport& rep) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"label", c.label},
                          {"where", c.where},
                          {"observed", c.observed},
                          {"bound", c.bound},
                          {"margin", c.margin},
                          {"sense", c.sense == CheckSense::UpperBound ? "le" : "ge"}});
    }
    nlohmann::json j{{"experiment", rep.experiment},
                     {"checks", std::move(checks)},
                     {"total_checks", rep.total_checks},
                     {"violations", rep.violations},
                     {"worst_margin", rep.worst_margin},
                     {"verdict", verdict_name(rep.verdict)},
                     {"notes", rep.notes}};
    if (rep.worst_set) {
        j["worst_check"] = {{"label", rep.worst_check.label},
                            {"where", rep.worst_check.where},
                            {"observed", rep.worst_check.observed},
                            {"bound", rep.worst_check.bound},
                            {"margin", rep.worst_check.margin}};
    }
    return j;
}

nlohmann::json to_json(const InstabilityWitness& w) {
    return {{"seed", w.seed_name}, {"delta", w.delta},   {"eps", w.eps},
            {"C", w.C},            {"rho", w.rho},       {"n_star", w.n_star},
            {"margin", w.margin},  {"norms", w.norms}};
}

std::string to_csv(const GridFunction1D& f) {
    CsvWriter csv({"index_or_x", "value"});
    for (std::size_t i = 0; i < f.size(); ++i) csv.row({f.x_at(i), f.values[i]});
    return csv.str();
}

std::string to_csv(const SeqVector& u) {
    CsvWriter csv({"index_or_x", "value"});
    for (std::size_t i = 0; i < u.size(); ++i)
        csv.row({static_cast<double>(i), u.values[i]});
    return csv.str();
}

std::string trajectory_csv(const Trajectory& traj) {
    CsvWriter csv({"n", "norm"});
    for (std::size_t n = 0; n < traj.norms.size(); ++n)
        csv.row({static_cast<double>(n), traj.norms[n]});
    return csv.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace instab

#include "socsim/trajectory_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace socsim {

std::string format_double(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

namespace {

double parse_double(const std::string& text, const std::string& path) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw SchemaError("'" + path + "': not a number: '" + text + "'");
    }
    return value;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == '\t') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

std::ifstream open_with_header(const std::string& path, const char* header) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open: " + path);
    std::string first;
    std::getline(in, first);
    if (first != header) {
        throw SchemaError("'" + path + "': expected header '" + std::string(header) + "'");
    }
    return in;
}

} // namespace

void write_trajectory_file(const Trajectory& trajectory, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write: " + path);
    out << kTrajectoryHeader << "\n";
    out << "t\tviews\tlikes\tcomments\tshares\n";
    for (std::size_t i = 0; i < trajectory.engagement.size(); ++i) {
        const auto& vec = trajectory.engagement[i];
        out << (i + 1) << "\t" << format_double(vec.views) << "\t" << format_double(vec.likes)
            << "\t" << format_double(vec.comments) << "\t" << format_double(vec.shares) << "\n";
    }
}

Trajectory read_trajectory_file(const std::string& path) {
    std::ifstream in = open_with_header(path, kTrajectoryHeader);
    std::string line;
    std::getline(in, line);  // column names
    Trajectory trajectory;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 5) {
            throw SchemaError("'" + path + "': expected 5 columns, got " +
                              std::to_string(fields.size()));
        }
        EngagementVector vec;
        vec.views = parse_double(fields[1], path);
        vec.likes = parse_double(fields[2], path);
        vec.comments = parse_double(fields[3], path);
        vec.shares = parse_double(fields[4], path);
        trajectory.engagement.push_back(vec);
    }
    return trajectory;
}

void write_attitudes_file(const Trajectory& trajectory, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write: " + path);
    out << kAttitudesHeader << "\n";
    out << "t";
    for (const auto& id : trajectory.agent_ids) out << "\t" << id;
    out << "\n";
    for (Eigen::Index t = 0; t < trajectory.attitudes.rows(); ++t) {
        out << t;
        for (Eigen::Index i = 0; i < trajectory.attitudes.cols(); ++i) {
            out << "\t" << format_double(trajectory.attitudes(t, i));
        }
        out << "\n";
    }
}

Trajectory read_attitudes_file(const std::string& path) {
    std::ifstream in = open_with_header(path, kAttitudesHeader);
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("'" + path + "': missing column header");
    }
    auto columns = split_tabs(line);
    if (columns.empty() || columns[0] != "t") {
        throw SchemaError("'" + path + "': first column must be t");
    }
    Trajectory trajectory;
    trajectory.agent_ids.assign(columns.begin() + 1, columns.end());

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != columns.size()) {
            throw SchemaError("'" + path + "': ragged row");
        }
        std::vector<double> row;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            row.push_back(parse_double(fields[i], path));
        }
        rows.push_back(std::move(row));
    }
    trajectory.attitudes.resize(static_cast<Eigen::Index>(rows.size()),
                                static_cast<Eigen::Index>(trajectory.agent_ids.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (std::size_t i = 0; i < rows[t].size(); ++i) {
            trajectory.attitudes(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
                rows[t][i];
        }
    }
    return trajectory;
}

void write_run_log(const std::vector<LogRecord>& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write: " + path);
    for (const auto& record : log) {
        nlohmann::json j{{"detail", record.detail}, {"phase", record.phase}, {"t", record.t}};
        out << j.dump() << "\n";
    }
}

} // namespace socsim

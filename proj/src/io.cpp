#include "mmq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mmq/errors.hpp"

namespace mmq {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    return out;
}

json parse_line(const std::string& line, const std::string& path, std::size_t lineno) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(path + ":" + std::to_string(lineno) + ": bad JSON: " + e.what());
    }
}

std::vector<Point> points_from_json(const json& j) {
    std::vector<Point> pts;
    for (const auto& p : j) pts.push_back(p.get<Point>());
    return pts;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

MeasureSample read_ndjson(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw DataError(path + ": empty file, header line expected");
    ++lineno;
    const json header = parse_line(line, path, lineno);
    if (!header.contains("ambient_dim") || !header.contains("ball_radius"))
        throw DataError(path + ": header must declare ambient_dim and ball_radius");
    const std::size_t dim = header.at("ambient_dim").get<std::size_t>();
    const double radius = header.at("ball_radius").get<double>();

    MeasureSample sample;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const json j = parse_line(line, path, lineno);
        try {
            DiscreteMeasure m = make_measure(points_from_json(j.at("points")),
                                             j.at("weights").get<std::vector<double>>(), radius);
            if (m.ambient_dim != dim)
                throw DimensionMismatch(path + ":" + std::to_string(lineno) +
                                        ": measure dimension differs from header");
            sample.measures.push_back(std::move(m));
        } catch (const json::exception& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (sample.measures.empty()) throw EmptySample(path + ": no measures");

    if (header.contains("labels")) {
        sample.labels = header.at("labels").get<std::vector<int>>();
        validate_labels(sample);
    }
    return sample;
}

void write_ndjson(const MeasureSample& sample, const std::string& path) {
    if (sample.measures.empty()) throw EmptySample("write_ndjson: empty sample");
    std::ofstream out = open_out(path);
    json header;
    header["ambient_dim"] = sample.measures[0].ambient_dim;
    double radius = 0.0;
    for (const DiscreteMeasure& m : sample.measures) radius = std::max(radius, m.ball_radius);
    header["ball_radius"] = radius;
    if (sample.labels) header["labels"] = *sample.labels;
    out << header.dump() << "\n";
    for (const DiscreteMeasure& m : sample.measures) {
        json j;
        j["points"] = m.points;
        j["weights"] = m.weights;
        out << j.dump() << "\n";
    }
}

Codebook read_codebook_json(const std::string& path) {
    std::ifstream in = open_in(path);
    json j;
    try {
        in >> j;
        Codebook cb;
        cb.ambient_dim = j.at("ambient_dim").get<std::size_t>();
        cb.ball_radius = j.at("ball_radius").get<double>();
        cb.codepoints = points_from_json(j.at("codepoints"));
        for (const Point& p : cb.codepoints)
            if (p.size() != cb.ambient_dim)
                throw DimensionMismatch(path + ": codepoint dimension differs from header");
        if (cb.codepoints.empty()) throw DataError(path + ": empty codebook");
        return cb;
    } catch (const json::exception& e) {
        throw DataError(path + ": bad codebook JSON: " + e.what());
    }
}

void write_codebook_json(const Codebook& cb, const std::string& path) {
    json j;
    j["ambient_dim"] = cb.ambient_dim;
    j["ball_radius"] = cb.ball_radius;
    j["codepoints"] = cb.codepoints;
    open_out(path) << j.dump(2) << "\n";
}

void write_report_json(const QuantizeReport& report, const std::string& path) {
    json j;
    j["distortion_trace"] = report.distortion_trace;
    j["cell_masses"] = report.cell_masses;
    if (report.min_cell_separation)
        j["min_cell_separation"] = *report.min_cell_separation;
    else
        j["min_cell_separation"] = nullptr;
    j["min_cell_mass"] = report.min_cell_mass;
    j["iterations_run"] = report.iterations_run;
    j["seed"] = report.seed;
    open_out(path) << j.dump(2) << "\n";
}

void write_embedding_csv(const Embedding& e, const std::string& path,
                         const std::vector<int>* labels) {
    if (labels && labels->size() != e.rows.size())
        throw LengthMismatch("write_embedding_csv: label count differs from row count");
    std::ofstream out = open_out(path);
    for (std::size_t j = 0; j < e.width; ++j) out << (j ? "," : "") << "v" << (j + 1);
    if (labels) out << ",label";
    out << "\n";
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        for (std::size_t j = 0; j < e.width; ++j)
            out << (j ? "," : "") << format_double(e.rows[i][j]);
        if (labels) out << "," << (*labels)[i];
        out << "\n";
    }
}

Embedding read_embedding_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty embedding CSV");

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    bool has_label = !header.empty() && header.back() == "label";
    const std::size_t width = header.size() - (has_label ? 1 : 0);
    if (width == 0) throw DataError(path + ": embedding CSV without value columns");

    Embedding e;
    e.width = width;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(lineno) + ": bad number '" + cell +
                                "'");
            }
        }
        if (row.size() != header.size())
            throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(row.size()));
        if (has_label) row.resize(width);
        e.rows.push_back(std::move(row));
    }
    return e;
}

void write_labels_csv(const ClusterLabels& labels, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "cluster\n";
    for (int v : labels.assignments) out << v << "\n";
}

ClusterLabels read_labels_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty labels CSV");
    if (line != "cluster" && line != "label")
        throw DataError(path + ": expected a 'cluster' header");
    std::vector<int> raw;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            raw.push_back(std::stoi(line));
        } catch (const std::exception&) {
            throw DataError(path + ":" + std::to_string(lineno) + ": bad label '" + line + "'");
        }
    }
    return canonicalize(raw);
}

void write_bench_csv(const std::vector<BenchResult>& results, const std::string& path,
                     bool include_timing) {
    std::ofstream out = open_out(path);
    out << "method,sweep_name,sweep_value,rep,nmi,wall_ms\n";
    for (const BenchResult& r : results) {
        for (std::size_t rep = 0; rep < r.nmi_values.size(); ++rep) {
            out << r.method << "," << r.sweep_name << "," << format_double(r.sweep_value) << ","
                << rep << "," << format_double(r.nmi_values[rep]) << ","
                << (include_timing ? format_double(r.wall_ms[rep]) : "0") << "\n";
        }
    }
}

void write_bench_aggregate_csv(const std::vector<BenchResult>& results, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "method,sweep_name,sweep_value,reps,mean,ci95\n";
    for (const BenchResult& r : results) {
        out << r.method << "," << r.sweep_name << "," << format_double(r.sweep_value) << ","
            << r.nmi_values.size() << "," << format_double(r.mean) << "," << format_double(r.ci95)
            << "\n";
    }
}

std::string shattering_certificate_json(const ShatteringCertificate& cert) {
    json j;
    j["check"] = "shattering";
    j["ball_convention"] = "closed";
    j["satisfied"] = cert.satisfied;
    j["p"] = cert.p;
    j["r"] = cert.r;
    j["delta"] = cert.delta;
    json witnesses = json::array();
    for (const ShatteringWitness& w : cert.witnesses)
        witnesses.push_back({{"i1", w.i1},
                             {"i2", w.i2},
                             {"codepoint", w.codepoint},
                             {"direction", w.direction}});
    j["witnesses"] = witnesses;
    json failing = json::array();
    for (const auto& [a, b] : cert.failing_pairs) failing.push_back({{"i1", a}, {"i2", b}});
    j["failing_pairs"] = failing;
    return j.dump(2);
}

std::string concentration_result_json(const ConcentrationResult& res, double w) {
    json j;
    j["check"] = "concentration";
    j["w"] = w;
    j["satisfied"] = res.ok;
    if (res.failing_pair) {
        j["failing_pair"] = {{"i1", res.failing_pair->first}, {"i2", res.failing_pair->second}};
        j["reason"] = res.reason;
    }
    return j.dump(2);
}

std::string kernel_report_json(const KernelCheckReport& report, const std::string& kernel, int p,
                               double delta, double grid_step) {
    json j;
    j["check"] = "kernel";
    j["kernel"] = kernel;
    j["p"] = p;
    j["delta"] = delta;
    j["grid_step"] = grid_step;
    j["bounded"] = report.bounded;
    j["near_one_inside"] = report.near_one_inside;
    j["small_outside"] = report.small_outside;
    j["lipschitz_ok"] = report.lipschitz_ok;
    j["satisfied"] = report.all();
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
    open_out(path) << content;
}

}  // namespace mmq

#pragma once

#include <string>
#include <vector>

#include "mmq/cluster.hpp"
#include "mmq/codebook.hpp"
#include "mmq/measure.hpp"
#include "mmq/quantize.hpp"
#include "mmq/synth.hpp"
#include "mmq/vectorize.hpp"
#include "mmq/verify.hpp"

namespace mmq {

// NDJSON measure file: header line {"ambient_dim": d, "ball_radius": R,
// "labels": [...]?} followed by one {"points": [[...],...], "weights": [...]}
// object per line.
MeasureSample read_ndjson(const std::string& path);
void write_ndjson(const MeasureSample& sample, const std::string& path);

Codebook read_codebook_json(const std::string& path);
void write_codebook_json(const Codebook& cb, const std::string& path);

void write_report_json(const QuantizeReport& report, const std::string& path);

// Embedding CSV: header v1,...,vk (plus a trailing label column when labels
// are given), 17 significant digits.
void write_embedding_csv(const Embedding& e, const std::string& path,
                         const std::vector<int>* labels = nullptr);
Embedding read_embedding_csv(const std::string& path);

// Labels CSV: single "cluster" column.
void write_labels_csv(const ClusterLabels& labels, const std::string& path);
ClusterLabels read_labels_csv(const std::string& path);

// Per-repetition rows: method,sweep_name,sweep_value,rep,nmi,wall_ms. With
// timing suppressed, wall_ms is written as 0 so reruns are byte-identical.
void write_bench_csv(const std::vector<BenchResult>& results, const std::string& path,
                     bool include_timing = true);
// Aggregate rows: method,sweep_name,sweep_value,reps,mean,ci95.
void write_bench_aggregate_csv(const std::vector<BenchResult>& results, const std::string& path);

std::string shattering_certificate_json(const ShatteringCertificate& cert);
std::string concentration_result_json(const ConcentrationResult& res, double w);
std::string kernel_report_json(const KernelCheckReport& report, const std::string& kernel, int p,
                               double delta, double grid_step);

void write_text_file(const std::string& path, const std::string& content);

// Round-trip exact formatting for doubles.
std::string format_double(double v);

}  // namespace mmq

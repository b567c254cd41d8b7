#pragma once

#include "calmet/binned_ece.hpp"
#include "calmet/exact_ece.hpp"
#include "calmet/ls_ece.hpp"
#include "calmet/prediction_set.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace calmet {

enum class FileFormat { csv, jsonl };

FileFormat parse_file_format(const std::string& name); // "csv" | "jsonl"

// Readers validate per-row and report failures as parse_error with
// "<source>:<line>: <reason>".
//
// binary csv:      header "logit,label", label in {0,1}
// binary jsonl:    {"logit": f, "label": i} per line
// multiclass csv:  header "label,p_0,...,p_{k-1}"
// multiclass jsonl:{"label": i, "probs": [..]} per line
// spec csv:        header "mass,true_conditional,predictor"
// smece csv:       header "model,smece", one externally computed value per model
BinaryPredictionSet read_binary(std::istream& in, FileFormat format, const std::string& source);
MulticlassPredictionSet read_multiclass(std::istream& in, FileFormat format,
                                        const std::string& source);
DiscreteDistributionSpec read_spec_csv(std::istream& in, const std::string& source);
std::map<std::string, double> read_smece_csv(std::istream& in, const std::string& source);

BinaryPredictionSet load_binary(const std::string& path, FileFormat format);
MulticlassPredictionSet load_multiclass(const std::string& path, FileFormat format);
DiscreteDistributionSpec load_spec(const std::string& path);
std::map<std::string, double> load_smece(const std::string& path);

// Shortest representation that round-trips the exact double (17 significant
// digits).
std::string format_double(double v);

void write_binary_csv(std::ostream& out, const BinaryPredictionSet& data);
// columns: bin_lo,bin_hi,count,mean_conf,mean_label (absent stats left empty)
void write_reliability_csv(std::ostream& out, const ReliabilityDiagram& diagram);
// columns: t,conf,cond_mean,density
void write_curve_csv(std::ostream& out, const SmoothReliabilityCurve& curve);

} // namespace calmet

#include "calmet/io.hpp"

#include "calmet/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace calmet {

namespace {

std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double_field(const std::string& field, const std::string& source, std::size_t line,
                          const char* what) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw parse_error(where(source, line) + "cannot parse " + what + " from '" + field + "'");
    return value;
}

long parse_int_field(const std::string& field, const std::string& source, std::size_t line,
                     const char* what) {
    long value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw parse_error(where(source, line) + "cannot parse " + what + " from '" + field + "'");
    return value;
}

int parse_binary_label(const std::string& field, const std::string& source, std::size_t line) {
    const long label = parse_int_field(field, source, line, "label");
    if (label != 0 && label != 1)
        throw parse_error(where(source, line) + "label must be 0 or 1, got " + field);
    return static_cast<int>(label);
}

void expect_header(std::istream& in, const std::string& expected, const std::string& source) {
    std::string line;
    if (!std::getline(in, line))
        throw parse_error(source + ":1: missing header (expected '" + expected + "')");
    if (strip_cr(line) != expected)
        throw parse_error(source + ":1: bad header '" + line + "' (expected '" + expected + "')");
}

nlohmann::json parse_json_line(const std::string& line, const std::string& source,
                               std::size_t line_no) {
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object())
        throw parse_error(where(source, line_no) + "line is not a JSON object");
    return obj;
}

BinaryPredictionSet read_binary_csv(std::istream& in, const std::string& source) {
    expect_header(in, "logit,label", source);
    std::vector<double> logits;
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2)
            throw parse_error(where(source, line_no) + "expected 2 fields, got " +
                              std::to_string(fields.size()));
        const double logit = parse_double_field(fields[0], source, line_no, "logit");
        if (!std::isfinite(logit))
            throw parse_error(where(source, line_no) + "logit must be finite");
        logits.push_back(logit);
        labels.push_back(parse_binary_label(fields[1], source, line_no));
    }
    if (logits.empty()) throw parse_error(source + ": no data rows");
    return BinaryPredictionSet(std::move(logits), std::move(labels));
}

BinaryPredictionSet read_binary_jsonl(std::istream& in, const std::string& source) {
    std::vector<double> logits;
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const nlohmann::json obj = parse_json_line(line, source, line_no);
        if (!obj.contains("logit") || !obj["logit"].is_number())
            throw parse_error(where(source, line_no) + "missing numeric 'logit'");
        if (!obj.contains("label") || !obj["label"].is_number_integer())
            throw parse_error(where(source, line_no) + "missing integer 'label'");
        const double logit = obj["logit"].get<double>();
        if (!std::isfinite(logit))
            throw parse_error(where(source, line_no) + "logit must be finite");
        const long label = obj["label"].get<long>();
        if (label != 0 && label != 1)
            throw parse_error(where(source, line_no) + "label must be 0 or 1");
        logits.push_back(logit);
        labels.push_back(static_cast<int>(label));
    }
    if (logits.empty()) throw parse_error(source + ": no data rows");
    return BinaryPredictionSet(std::move(logits), std::move(labels));
}

MulticlassPredictionSet read_multiclass_csv(std::istream& in, const std::string& source) {
    std::string header;
    if (!std::getline(in, header)) throw parse_error(source + ":1: missing header");
    const auto head_fields = split_fields(strip_cr(header));
    if (head_fields.size() < 3 || head_fields[0] != "label")
        throw parse_error(source + ":1: expected header 'label,p_0,...,p_{k-1}'");
    const std::size_t k = head_fields.size() - 1;
    for (std::size_t c = 0; c < k; ++c)
        if (head_fields[c + 1] != "p_" + std::to_string(c))
            throw parse_error(source + ":1: expected probability column 'p_" + std::to_string(c) +
                              "', got '" + head_fields[c + 1] + "'");

    std::vector<std::vector<double>> probs;
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != k + 1)
            throw parse_error(where(source, line_no) + "expected " + std::to_string(k + 1) +
                              " fields, got " + std::to_string(fields.size()));
        const long label = parse_int_field(fields[0], source, line_no, "label");
        if (label < 0 || static_cast<std::size_t>(label) >= k)
            throw parse_error(where(source, line_no) + "label out of range [0, " +
                              std::to_string(k) + ")");
        std::vector<double> row(k);
        double row_sum = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            row[c] = parse_double_field(fields[c + 1], source, line_no, "probability");
            if (!(row[c] >= 0.0) || !(row[c] <= 1.0))
                throw parse_error(where(source, line_no) + "probability outside [0, 1]");
            row_sum += row[c];
        }
        if (std::abs(row_sum - 1.0) > 1e-6)
            throw parse_error(where(source, line_no) + "probabilities sum to " +
                              std::to_string(row_sum) + ", not 1");
        probs.push_back(std::move(row));
        labels.push_back(static_cast<int>(label));
    }
    if (probs.empty()) throw parse_error(source + ": no data rows");
    return MulticlassPredictionSet(std::move(probs), std::move(labels));
}

MulticlassPredictionSet read_multiclass_jsonl(std::istream& in, const std::string& source) {
    std::vector<std::vector<double>> probs;
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const nlohmann::json obj = parse_json_line(line, source, line_no);
        if (!obj.contains("probs") || !obj["probs"].is_array())
            throw parse_error(where(source, line_no) + "missing array 'probs'");
        if (!obj.contains("label") || !obj["label"].is_number_integer())
            throw parse_error(where(source, line_no) + "missing integer 'label'");
        std::vector<double> row;
        double row_sum = 0.0;
        for (const auto& p : obj["probs"]) {
            if (!p.is_number())
                throw parse_error(where(source, line_no) + "non-numeric probability");
            row.push_back(p.get<double>());
            if (!(row.back() >= 0.0) || !(row.back() <= 1.0))
                throw parse_error(where(source, line_no) + "probability outside [0, 1]");
            row_sum += row.back();
        }
        if (std::abs(row_sum - 1.0) > 1e-6)
            throw parse_error(where(source, line_no) + "probabilities sum to " +
                              std::to_string(row_sum) + ", not 1");
        if (!probs.empty() && row.size() != probs.front().size())
            throw parse_error(where(source, line_no) + "ragged probs row");
        const long label = obj["label"].get<long>();
        if (label < 0 || static_cast<std::size_t>(label) >= row.size())
            throw parse_error(where(source, line_no) + "label out of range");
        probs.push_back(std::move(row));
        labels.push_back(static_cast<int>(label));
    }
    if (probs.empty()) throw parse_error(source + ": no data rows");
    return MulticlassPredictionSet(std::move(probs), std::move(labels));
}

std::ifstream open_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open file");
    return in;
}

} // namespace

FileFormat parse_file_format(const std::string& name) {
    if (name == "csv") return FileFormat::csv;
    if (name == "jsonl") return FileFormat::jsonl;
    throw precondition_error("unknown file format '" + name + "' (expected csv or jsonl)");
}

BinaryPredictionSet read_binary(std::istream& in, FileFormat format, const std::string& source) {
    return format == FileFormat::csv ? read_binary_csv(in, source)
                                     : read_binary_jsonl(in, source);
}

MulticlassPredictionSet read_multiclass(std::istream& in, FileFormat format,
                                        const std::string& source) {
    return format == FileFormat::csv ? read_multiclass_csv(in, source)
                                     : read_multiclass_jsonl(in, source);
}

DiscreteDistributionSpec read_spec_csv(std::istream& in, const std::string& source) {
    expect_header(in, "mass,true_conditional,predictor", source);
    std::vector<double> mass, cond, pred;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 3)
            throw parse_error(where(source, line_no) + "expected 3 fields, got " +
                              std::to_string(fields.size()));
        mass.push_back(parse_double_field(fields[0], source, line_no, "mass"));
        cond.push_back(parse_double_field(fields[1], source, line_no, "true_conditional"));
        pred.push_back(parse_double_field(fields[2], source, line_no, "predictor"));
        if (!(mass.back() > 0.0))
            throw parse_error(where(source, line_no) + "mass must be strictly positive");
        for (double v : {cond.back(), pred.back()})
            if (!(v >= 0.0) || !(v <= 1.0))
                throw parse_error(where(source, line_no) + "value outside [0, 1]");
    }
    if (mass.empty()) throw parse_error(source + ": no data rows");
    try {
        return DiscreteDistributionSpec(std::move(mass), std::move(cond), std::move(pred));
    } catch (const precondition_error& e) {
        throw parse_error(source + ": " + e.what());
    }
}

std::map<std::string, double> read_smece_csv(std::istream& in, const std::string& source) {
    expect_header(in, "model,smece", source);
    std::map<std::string, double> values;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2)
            throw parse_error(where(source, line_no) + "expected 2 fields, got " +
                              std::to_string(fields.size()));
        if (fields[0].empty()) throw parse_error(where(source, line_no) + "empty model id");
        const double v = parse_double_field(fields[1], source, line_no, "smece");
        if (!(v >= 0.0) || !(v <= 1.0))
            throw parse_error(where(source, line_no) + "smece outside [0, 1]");
        if (!values.emplace(fields[0], v).second)
            throw parse_error(where(source, line_no) + "duplicate model id '" + fields[0] + "'");
    }
    return values;
}

BinaryPredictionSet load_binary(const std::string& path, FileFormat format) {
    auto in = open_file(path);
    return read_binary(in, format, path);
}

MulticlassPredictionSet load_multiclass(const std::string& path, FileFormat format) {
    auto in = open_file(path);
    return read_multiclass(in, format, path);
}

DiscreteDistributionSpec load_spec(const std::string& path) {
    auto in = open_file(path);
    return read_spec_csv(in, path);
}

std::map<std::string, double> load_smece(const std::string& path) {
    auto in = open_file(path);
    return read_smece_csv(in, path);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_binary_csv(std::ostream& out, const BinaryPredictionSet& data) {
    out << "logit,label\n";
    for (std::size_t i = 0; i < data.size(); ++i)
        out << format_double(data.logits()[i]) << ',' << data.labels()[i] << '\n';
}

void write_reliability_csv(std::ostream& out, const ReliabilityDiagram& diagram) {
    out << "bin_lo,bin_hi,count,mean_conf,mean_label\n";
    for (const ReliabilityBin& bin : diagram.bins) {
        if (bin.lo) out << format_double(*bin.lo);
        out << ',';
        if (bin.hi) out << format_double(*bin.hi);
        out << ',' << bin.count << ',';
        if (bin.mean_conf) out << format_double(*bin.mean_conf);
        out << ',';
        if (bin.mean_label) out << format_double(*bin.mean_label);
        out << '\n';
    }
}

void write_curve_csv(std::ostream& out, const SmoothReliabilityCurve& curve) {
    out << "t,conf,cond_mean,density\n";
    for (std::size_t k = 0; k < curve.t.size(); ++k)
        out << format_double(curve.t[k]) << ',' << format_double(curve.conf[k]) << ','
            << format_double(curve.cond_mean[k]) << ',' << format_double(curve.density[k])
            << '\n';
}

} // namespace calmet

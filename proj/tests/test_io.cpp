#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "calmet/errors.hpp"
#include "calmet/io.hpp"
#include "calmet/rng.hpp"

#include <cstdlib>
#include <sstream>
#include <string>

using namespace calmet;

namespace {

std::string error_text(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const parse_error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("binary csv round trip is byte-exact") {
    Rng rng(RandomSeed{60});
    std::vector<double> logits;
    std::vector<int> labels;
    for (int i = 0; i < 200; ++i) {
        logits.push_back(37.0 * (2.0 * rng.uniform01() - 1.0));
        labels.push_back(static_cast<int>(rng.index(2)));
    }
    logits.push_back(0.1);
    labels.push_back(1);
    const BinaryPredictionSet data(logits, labels);

    std::ostringstream first;
    write_binary_csv(first, data);

    std::istringstream input(first.str());
    const auto parsed = read_binary(input, FileFormat::csv, "mem");
    REQUIRE(parsed.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(parsed.logits()[i] == data.logits()[i]);
        CHECK(parsed.labels()[i] == data.labels()[i]);
    }

    std::ostringstream second;
    write_binary_csv(second, parsed);
    CHECK(second.str() == first.str());
}

TEST_CASE("binary csv parse errors carry line numbers") {
    const auto header = error_text([] {
        std::istringstream in("logit\n1.0,1\n");
        read_binary(in, FileFormat::csv, "f.csv");
    });
    CHECK(header.find("f.csv:1") != std::string::npos);

    const auto ragged = error_text([] {
        std::istringstream in("logit,label\n1.0,1\n0.5\n");
        read_binary(in, FileFormat::csv, "f.csv");
    });
    CHECK(ragged.find("f.csv:3") != std::string::npos);

    const auto bad_label = error_text([] {
        std::istringstream in("logit,label\n1.0,2\n");
        read_binary(in, FileFormat::csv, "f.csv");
    });
    CHECK(bad_label.find("f.csv:2") != std::string::npos);
    CHECK(bad_label.find("label") != std::string::npos);

    const auto bad_float = error_text([] {
        std::istringstream in("logit,label\nabc,1\n");
        read_binary(in, FileFormat::csv, "f.csv");
    });
    CHECK(bad_float.find("f.csv:2") != std::string::npos);

    const auto non_finite = error_text([] {
        std::istringstream in("logit,label\ninf,1\n");
        read_binary(in, FileFormat::csv, "f.csv");
    });
    CHECK(non_finite.find("f.csv:2") != std::string::npos);

    CHECK_THROWS_AS(
        [] {
            std::istringstream in("logit,label\n");
            read_binary(in, FileFormat::csv, "f.csv");
        }(),
        parse_error);
}

TEST_CASE("binary jsonl parsing") {
    std::istringstream good("{\"logit\": 1.5, \"label\": 1}\n{\"logit\": -2.0, \"label\": 0}\n");
    const auto data = read_binary(good, FileFormat::jsonl, "g.jsonl");
    REQUIRE(data.size() == 2);
    CHECK(data.logits()[0] == 1.5);
    CHECK(data.labels()[1] == 0);

    const auto bad = error_text([] {
        std::istringstream in("{\"logit\": 1.5, \"label\": 1}\n{\"logit\": \"x\", \"label\": 0}\n");
        read_binary(in, FileFormat::jsonl, "g.jsonl");
    });
    CHECK(bad.find("g.jsonl:2") != std::string::npos);
}

TEST_CASE("multiclass csv parsing") {
    std::istringstream good("label,p_0,p_1,p_2\n2,0.1,0.2,0.7\n0,0.5,0.25,0.25\n");
    const auto data = read_multiclass(good, FileFormat::csv, "m.csv");
    REQUIRE(data.size() == 2);
    CHECK(data.num_classes() == 3);

    const auto ragged = error_text([] {
        std::istringstream in("label,p_0,p_1\n0,0.5,0.5\n1,0.5\n");
        read_multiclass(in, FileFormat::csv, "m.csv");
    });
    CHECK(ragged.find("m.csv:3") != std::string::npos);

    const auto range = error_text([] {
        std::istringstream in("label,p_0,p_1\n2,0.5,0.5\n");
        read_multiclass(in, FileFormat::csv, "m.csv");
    });
    CHECK(range.find("m.csv:2") != std::string::npos);

    const auto sum = error_text([] {
        std::istringstream in("label,p_0,p_1\n0,0.5,0.6\n");
        read_multiclass(in, FileFormat::csv, "m.csv");
    });
    CHECK(sum.find("m.csv:2") != std::string::npos);
    CHECK(sum.find("sum") != std::string::npos);

    const auto header = error_text([] {
        std::istringstream in("label,q_0,q_1\n0,0.5,0.5\n");
        read_multiclass(in, FileFormat::csv, "m.csv");
    });
    CHECK(header.find("m.csv:1") != std::string::npos);
}

TEST_CASE("multiclass jsonl parsing") {
    std::istringstream good("{\"label\": 1, \"probs\": [0.4, 0.6]}\n");
    const auto data = read_multiclass(good, FileFormat::jsonl, "m.jsonl");
    CHECK(data.num_classes() == 2);

    const auto bad_sum = error_text([] {
        std::istringstream in("{\"label\": 0, \"probs\": [0.4, 0.7]}\n");
        read_multiclass(in, FileFormat::jsonl, "m.jsonl");
    });
    CHECK(bad_sum.find("m.jsonl:1") != std::string::npos);
}

TEST_CASE("spec csv parsing") {
    std::istringstream good("mass,true_conditional,predictor\n0.5,0,0.5\n0.5,1,0.5\n");
    const auto spec = read_spec_csv(good, "s.csv");
    CHECK(spec.size() == 2);

    const auto zero_mass = error_text([] {
        std::istringstream in("mass,true_conditional,predictor\n0.0,0,0.5\n1.0,1,0.5\n");
        read_spec_csv(in, "s.csv");
    });
    CHECK(zero_mass.find("s.csv:2") != std::string::npos);

    // masses not summing to one surface as a file-level parse error
    CHECK_THROWS_AS(
        [] {
            std::istringstream in("mass,true_conditional,predictor\n0.5,0,0.5\n0.6,1,0.5\n");
            read_spec_csv(in, "s.csv");
        }(),
        parse_error);
}

TEST_CASE("smece csv parsing") {
    std::istringstream good("model,smece\nresnet,0.021\nvgg,0.034\n");
    const auto values = read_smece_csv(good, "e.csv");
    REQUIRE(values.size() == 2);
    CHECK(values.at("resnet") == 0.021);

    const auto dup = error_text([] {
        std::istringstream in("model,smece\nresnet,0.021\nresnet,0.03\n");
        read_smece_csv(in, "e.csv");
    });
    CHECK(dup.find("e.csv:3") != std::string::npos);
}

TEST_CASE("format_double round-trips doubles exactly") {
    Rng rng(RandomSeed{61});
    std::vector<double> values{0.1, 1.0 / 3.0, 1e-300, 1e300, 0.0, -0.0, 42.0, 5e-324};
    for (int i = 0; i < 200; ++i)
        values.push_back((2.0 * rng.uniform01() - 1.0) * std::pow(10.0, double(rng.index(60)) - 30.0));
    for (double v : values) {
        const std::string text = format_double(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
}

TEST_CASE("missing files raise parse errors") {
    CHECK_THROWS_AS(load_binary("/nonexistent/file.csv", FileFormat::csv), parse_error);
    CHECK_THROWS_AS(parse_file_format("xml"), precondition_error);
}

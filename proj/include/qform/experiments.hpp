#ifndef QFORM_EXPERIMENTS_HPP
#define QFORM_EXPERIMENTS_HPP

#include <string>

#include "qform/harness.hpp"
#include "qform/json_io.hpp"

namespace qform {

inline constexpr const char* kVersion = "qform 0.1.0";

// One experiment run: everything the runners need, parsed and validated
// from a JSON config.
struct ExperimentConfig {
    std::string experiment;  // theorem1 | corollary2 | level | bilinear | fi-check
    Form F{1, 0, 1};
    i64 X = 100000;
    u64 q = 1;
    i64 a = 0;
    i64 b = 0;
    i64 D = 0;  // 0: use floor(sqrt(X))
    double Y = 0.0, Z = 0.0;
    LambdaSpec lambda;
    u64 pmax = 1000000;
    int chi_index = 0;  // index into characters_mod(q); 0 = principal
    unsigned threads = 1;
    std::vector<i64> grid;  // defaults to {X/100, X/10, X}
    u64 seed = 1;
    std::string ctx_path;  // reuse a saved composition context

    std::vector<i64> x_grid() const;
};

ExperimentConfig parse_config(const json& j);
json config_to_json(const ExperimentConfig& cfg);

// Structured result: ordered quantity -> value map plus the config echo and
// a version stamp. Serialization is byte-stable; no wall-clock data goes in.
struct ExperimentReport {
    std::string experiment;
    json config_echo;
    json results = json::object();

    void put(const std::string& key, double v) { results[key] = v; }
    void put(const std::string& key, i64 v) { results[key] = v; }
    void put(const std::string& key, std::complex<double> v) {
        results[key] = json{{"re", v.real()}, {"im", v.imag()}};
    }

    json to_json() const;
    std::string to_csv() const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const SieveTables& tables);

ExperimentReport theorem1_experiment(const ExperimentConfig& cfg,
                                     const CompositionContext& ctx,
                                     const SieveTables& tables);
ExperimentReport corollary2_experiment(const ExperimentConfig& cfg,
                                       const CompositionContext& ctx,
                                       const SieveTables& tables);
ExperimentReport level_experiment(const ExperimentConfig& cfg,
                                  const CompositionContext& ctx,
                                  const SieveTables& tables);
ExperimentReport bilinear_experiment(const ExperimentConfig& cfg,
                                     const CompositionContext& ctx,
                                     const SieveTables& tables);
// Verifies the two-squares product identity against a_N; any mismatch throws.
ExperimentReport fi_check_experiment(const ExperimentConfig& cfg,
                                     const CompositionContext& ctx,
                                     const SieveTables& tables);

}  // namespace qform

#endif

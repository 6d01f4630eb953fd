#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgelab/contour.hpp"
#include "edgelab/errors.hpp"
#include "edgelab/saddle_lab.hpp"

namespace edgelab {

enum class ExperimentKind {
    RepresentationEquivalence,
    Tau0ClosedForm,
    TraceIdentity,
    BulkLimit,
    EdgeDensity,
    EdgeKernel,
    RefinedD1,
    SaddlePole,
    MaxPrinciple,
    PhiExpansion,
    DensityPointwise,
};

std::string kind_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(const std::string& name);
std::vector<ExperimentKind> all_kinds();

struct ParamPoint {
    int d = 1;
    double tau = 0.0;

    bool operator==(const ParamPoint&) const = default;
};

struct ExperimentSpec {
    std::string name;
    ExperimentKind kind = ExperimentKind::RepresentationEquivalence;
    std::vector<ParamPoint> params;
    std::vector<int> n_grid;
    std::uint64_t seed = 20240917;
    std::map<std::string, double> tolerances;
    int samples = 10;
    int threads = 1;
    std::vector<double> lambda_grid;
    // kind-specific complex inputs: RefinedD1 {u, v}; SaddlePole one pole per n
    std::vector<cplx> points;
    ExpansionForm form = ExpansionForm::Printed;
    // PhiExpansion: "lemma" or "normal"
    std::string variant;
    ContourConfig contour;

    double tol(const std::string& key) const;
    void validate() const;

    bool operator==(const ExperimentSpec& o) const;
};

struct Sample {
    int d = 0;
    double tau = 0.0;
    int n = 0;
    double error = 0.0;
    // natural log of error; finite even where error underflows
    double log_error = 0.0;
    double fitted_exponent = 0.0;
    bool pass = false;
    std::string label;

    bool operator==(const Sample& o) const;
};

struct ConvergenceReport {
    ExperimentSpec experiment;
    std::vector<Sample> samples;
    // worst (largest) per-parameter slope; NaN where no fit applies
    double fitted_exponent = 0.0;
    bool pass = false;
    std::vector<std::string> diagnostics;

    bool operator==(const ConvergenceReport& o) const;
};

class DegenerateFit : public Error {
public:
    using Error::Error;
};

double fit_convergence_rate(std::span<const std::pair<int, double>> samples);
double fit_convergence_rate_log(std::span<const std::pair<int, double>> log_samples);

ConvergenceReport run_experiment(const ExperimentSpec& spec);

std::vector<ExperimentSpec> default_suite();
std::vector<ExperimentSpec> default_specs(ExperimentKind kind);

// Applies a key-value configuration file to the default suite.
std::vector<ExperimentSpec> load_config(const std::string& path);
std::vector<ExperimentSpec> apply_config_text(const std::string& text, std::vector<ExperimentSpec> specs);

enum class ReportFormat { Csv, Json };

std::string emit_report(const std::vector<ConvergenceReport>& reports, ReportFormat format);
std::string emit_report(const ConvergenceReport& report, ReportFormat format);
std::vector<ConvergenceReport> parse_json_report(const std::string& text);

// Accepts "1.5", "-0.2i", "0.3+0.1i", "i", "(re,im)".
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

// Evaluates fn(i) for i in [0, count) on up to `threads` workers; results in index order.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace edgelab

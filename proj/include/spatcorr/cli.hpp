#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spatcorr/classical_corr.hpp"
#include "spatcorr/correspondence.hpp"
#include "spatcorr/data_model.hpp"
#include "spatcorr/elimination.hpp"
#include "spatcorr/error.hpp"
#include "spatcorr/functional_corr.hpp"
#include "spatcorr/surface_fit.hpp"
#include "spatcorr/synthgen.hpp"

namespace spatcorr::cli {

using Json = nlohmann::ordered_json;

// ---- CSV ----------------------------------------------------------------

struct IngestResult {
    SampleTable table;
    std::size_t rejected_rows = 0;
    std::vector<std::string> warnings;
};

/// Reads `id,x,y,<variables...>[,stratum]`. Rows with blank or non-numeric
/// cells are rejected and tallied; missing required columns, duplicate ids
/// and zero surviving rows are errors.
IngestResult parse_csv(std::istream& in, const std::string& source = "<stream>");
IngestResult ingest_csv(const std::string& path);

void write_csv(const SampleTable& table, std::ostream& out);

// ---- Config / flag grammars -------------------------------------------

/// "low=0:30,high=30:70"
Stratification parse_strata(const std::string& text, Axis axis = Axis::Y);
std::vector<std::string> split_list(const std::string& text, char sep = ',');

LandscapeSpec landscape_from_json(const Json& j);
Json landscape_to_json(const LandscapeSpec& spec);

Json field_to_json(const FittedField& field);
Json poly_to_json(const MultiPoly& poly);

// ---- Reports ------------------------------------------------------------

struct InputDigest {
    std::string path;
    std::string sha256;
};

struct RunReport {
    std::string command;
    std::vector<InputDigest> inputs;
    Json parameters = Json::object();
    Json results = Json::object();
    std::vector<std::string> warnings;
    std::string timestamp;  // excluded from reproducibility comparisons
};

std::string sha256_file(const std::string& path);
std::string sha256_hex(std::string_view data);

Json report_to_json(const RunReport& report);
/// JSON with every floating-point number written with 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);
/// Aligned `key  value` lines, one per leaf.
std::string dump_text(const Json& j);

// ---- SVG ----------------------------------------------------------------

/// SVG 1.1 scatter of var_b against var_a, one circle per row, coloured by
/// stratum when a stratification is given. Empty strata are left out of the
/// legend.
std::string render_svg_scatter(const SampleTable& table, const std::string& var_a, const std::string& var_b,
                               const Stratification* strat);
void emit_svg_scatter(const SampleTable& table, const std::string& var_a, const std::string& var_b,
                      const Stratification* strat, const std::string& path);

// ---- Commands -----------------------------------------------------------

struct CorrOptions {
    std::string input;
    std::string var_a, var_b;
    CorrMethod method = CorrMethod::Spearman;
    std::optional<std::string> strata;  // whole table as one stratum if absent
    Axis axis = Axis::Y;
    std::optional<std::string> svg;
};

struct FitCmdOptions {
    std::string input;
    std::string variable;
    int degree = 2;
    FitObjective objective = FitObjective::Ols;
    int cells = 8;
    std::optional<std::string> field_out;
};

struct FcorrOptions {
    std::string input;
    std::string var_a, var_b;
    int degree = 2;
    FitObjective objective = FitObjective::Ols;
    IntegrationMethod method = IntegrationMethod::ExactMonomial;
    int order = 0;
    bool centered = false;
};

struct CoupleOptions {
    std::string input;
    std::vector<std::string> vars;  // c, n, p, m roles in order
    int degree = 1;
};

struct SynthOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

struct ResidualOptions {
    std::string input;
    std::string var_a, var_b;
    BinningSpec bin_a = BinningSpec::equal_width(4);
    BinningSpec bin_b = BinningSpec::equal_width(4);
    ResidualForm form = ResidualForm::Collapsed;
    std::optional<std::string> chain;
    std::optional<int> fit_degree;
};

RunReport run_corr(const CorrOptions& o);
RunReport run_fit(const FitCmdOptions& o);
RunReport run_fcorr(const FcorrOptions& o);
RunReport run_couple(const CoupleOptions& o);
RunReport run_synth(const SynthOptions& o);
RunReport run_residual(const ResidualOptions& o);

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitFormat = 2,
    kExitDegenerate = 3,
    kExitNumerical = 4,
};

int exit_code_for(ErrorKind kind);

/// Full command-line entry point. Reports go to `out` (or --report),
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spatcorr::cli

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "csl/conjecture.hpp"
#include "csl/ensembles.hpp"
#include "csl/json_io.hpp"
#include "csl/nc_poly.hpp"

namespace csl {

enum class SearchMode { kSample, kMinimize };

struct Tolerances {
    double factor_tol = 1e-8;
    double loewner_tol = 0.0;  // 0 selects the relative default
};

struct MinimizeOptions {
    int iterations = 100;
    double step = 1e-5;  // finite-difference step, relative to tuple scale
    int restarts = 1;
    Conjecture conjecture = Conjecture::kSchoenberg;
    Side side = Side::kRight;
};

struct SearchConfig {
    std::size_t d = 2;
    std::size_t n = 2;
    Ensemble ensemble = Ensemble::kGinibre;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    bool center = true;  // subtract the tuple mean at sampling time
    SearchMode mode = SearchMode::kSample;
    Tolerances tolerances;
    MinimizeOptions minimize;
};

Json config_to_json(const SearchConfig& config);
/// Validates field by field; the ParseError message lists every violation.
SearchConfig config_from_json(const Json& j);

enum class TrialStatus { kChecked, kPremiseFailed, kError };
std::string trial_status_name(TrialStatus s);

struct ReportSummary {
    double min_eig = 0.0;
    bool holds = false;
    double tol = 0.0;
};

/// One sampled instance with everything needed to replay it. The fourth-power
/// reports are absent when the instance does not satisfy the centroid-zero
/// hypothesis (possible only with center=false).
struct TrialRecord {
    std::uint64_t trial_index = 0;
    std::uint64_t master_seed = 0;
    TrialStatus status = TrialStatus::kError;
    std::vector<ComplexMatrix> a;
    FactorizationResult factorization;
    std::optional<ReportSummary> reports[3][2];  // [conjecture][side]
    std::string error;
    // minimize mode only
    std::optional<int> restart;
    std::optional<double> objective;
    std::optional<bool> candidate_violation;
};

Json record_to_json(const TrialRecord& rec);

/// Deterministic function of (config, trial_index): sampling, probes and
/// refinement jitter run on streams split from (master_seed, trial_index),
/// in that fixed slot order. Per-trial failures never throw; they are
/// encoded in status.
TrialRecord run_trial(const SearchConfig& config, std::uint64_t trial_index);

struct WorstSlack {
    double min_eig = std::numeric_limits<double>::infinity();
    std::uint64_t trial_index = 0;
    bool any = false;
};

struct CampaignSummary {
    std::uint64_t trials = 0;
    std::uint64_t checked = 0;
    std::uint64_t premise_failed = 0;
    std::uint64_t errors = 0;
    std::uint64_t violations = 0;  // reports with holds=false among checked trials
    WorstSlack worst[3][2];

    void absorb(const TrialRecord& rec);
};

Json summary_to_json(const CampaignSummary& summary);

/// Execute config.trials trials on a worker pool (threads=0: hardware
/// parallelism) and stream them to log_path as JSON Lines: one checksummed
/// header line, then one checksummed record per trial, committed in trial
/// order. Records are a pure function of the config, so the record section
/// is byte-stable across runs and thread counts.
CampaignSummary run_campaign(const SearchConfig& config, const std::string& log_path,
                             unsigned threads = 0);

using ReportEvaluator =
    std::function<InequalityReport(const std::vector<ComplexMatrix>&, const std::vector<ComplexMatrix>&)>;

struct MinimizeResult {
    TrialRecord best;
    bool violation_verified = false;
    std::uint64_t steps_logged = 0;
};

/// Counterexample hunt: finite-difference descent on the target report's
/// min_eig over the real parameters of the a tuple, re-factorizing at every
/// probe point (warm-started from the previous b). Every accepted step is
/// logged. The final best record is appended once more, flagged
/// candidate_violation only when the three-part protocol passes: factor
/// residual within tolerance, min_eig < -1e-6 * scale, and the violation
/// persisting at doubled probe count with the gap re-symmetrized.
///
/// The evaluator parameter exists so a harness can swap in a modified
/// objective (it defaults to the configured conjecture/side); replay only
/// reproduces logs written with the default evaluator.
MinimizeResult minimize_slack(const SearchConfig& config, const std::string& log_path,
                              const ReportEvaluator& evaluator = nullptr);

struct ReplayOutcome {
    bool reproduced = false;
    std::uint64_t records_checked = 0;
    std::int64_t first_divergence = -1;  // record index, -1 when none
    bool version_mismatch = false;
    std::string logged_version;
};

/// Recompute every record from the header config and compare byte-for-byte
/// (canonical form). Checksums are verified first; a truncated or edited
/// line throws ChecksumMismatch.
ReplayOutcome replay(const std::string& log_path);

struct LoggedExperiment {
    Json header;
    std::vector<Json> records;
};

LoggedExperiment read_log(const std::string& log_path);

}  // namespace csl

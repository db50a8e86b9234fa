#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gridforge {

struct ArchiveSpec {
    std::vector<int> dims;
    std::vector<std::array<double, 2>> ranges;

    int cell_count() const;
    void check() const;

    bool operator==(const ArchiveSpec&) const = default;
};

// Uniform per-dimension binning; out-of-range measures clamp to the
// boundary bin. Returns a row-major linear cell index.
int archive_index(const std::vector<double>& measures, const ArchiveSpec& spec);

struct Elite {
    std::vector<float> solution;
    double objective = 0.0;  // value the holding archive keys on
    std::vector<double> measures;
    std::uint64_t env_hash = 0;
    double similarity = 1.0;
    double f_res = 0.0;
    double f_opt = 0.0;

    bool operator==(const Elite&) const = default;
};

enum class AddOutcome { Inserted, Replaced, Rejected };

// Keeps the best solution ever seen per cell; no annealing.
struct ResultArchive {
    ArchiveSpec spec;
    std::map<int, Elite> cells;
};

// Insert into an empty cell, replace on strict objective improvement,
// reject otherwise.
AddOutcome result_add(ResultArchive& archive, const Elite& e);

// Threshold-annealed acceptance for CMA-MAE. Cells without an explicit
// threshold sit at the floor.
struct OptimizationArchive {
    ArchiveSpec spec;
    double learning_rate = 0.01;
    double threshold_floor = 0.0;
    std::map<int, double> thresholds;

    double threshold_at(int cell) const;
};

struct AnnealedAdd {
    bool accepted = false;
    double improvement = 0.0;  // objective minus the pre-update threshold
};

// Accept iff the objective strictly beats the cell threshold; on
// acceptance the threshold moves by the learning rate:
// t' = (1-lr)*t + lr*objective.
AnnealedAdd annealed_add(OptimizationArchive& archive, const Elite& e);

double qd_score(const ResultArchive& archive);
double coverage(const ResultArchive& archive);

// Tabular persistence: a tagged spec header line, a column header, then
// one row per occupied cell ordered by cell index, solutions inline.
// Round-trips exactly.
std::string archive_to_csv(const ResultArchive& archive);
ResultArchive archive_from_csv(const std::string& text);
void save_archive(const ResultArchive& archive, const std::string& path);
ResultArchive load_archive(const std::string& path);

}  // namespace gridforge

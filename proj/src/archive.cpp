#include "gridforge/archive.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gridforge/errors.hpp"
#include "json.hpp"

namespace gridforge {

int ArchiveSpec::cell_count() const {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
}

void ArchiveSpec::check() const {
    if (dims.empty() || dims.size() != ranges.size())
        throw Error(ErrorCode::ConfigInvalid,
                    "archive needs matching dims and ranges");
    for (size_t k = 0; k < dims.size(); ++k) {
        if (dims[k] < 1)
            throw Error(ErrorCode::ConfigInvalid, "archive dims must be positive");
        if (!(ranges[k][0] < ranges[k][1]))
            throw Error(ErrorCode::ConfigInvalid,
                        "archive range lo must be below hi");
    }
}

int archive_index(const std::vector<double>& measures, const ArchiveSpec& spec) {
    if (measures.size() != spec.dims.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "measure vector length does not match archive");
    int index = 0;
    for (size_t k = 0; k < spec.dims.size(); ++k) {
        double lo = spec.ranges[k][0], hi = spec.ranges[k][1];
        double t = (measures[k] - lo) / (hi - lo);
        int bin = static_cast<int>(std::floor(t * spec.dims[k]));
        if (bin < 0) bin = 0;
        if (bin >= spec.dims[k]) bin = spec.dims[k] - 1;
        index = index * spec.dims[k] + bin;
    }
    return index;
}

AddOutcome result_add(ResultArchive& archive, const Elite& e) {
    int cell = archive_index(e.measures, archive.spec);
    auto it = archive.cells.find(cell);
    if (it == archive.cells.end()) {
        archive.cells.emplace(cell, e);
        return AddOutcome::Inserted;
    }
    if (e.objective > it->second.objective) {
        it->second = e;
        return AddOutcome::Replaced;
    }
    return AddOutcome::Rejected;
}

double OptimizationArchive::threshold_at(int cell) const {
    auto it = thresholds.find(cell);
    return it == thresholds.end() ? threshold_floor : it->second;
}

AnnealedAdd annealed_add(OptimizationArchive& archive, const Elite& e) {
    int cell = archive_index(e.measures, archive.spec);
    double t = archive.threshold_at(cell);
    AnnealedAdd out;
    out.improvement = e.objective - t;
    out.accepted = e.objective > t;
    if (out.accepted)
        archive.thresholds[cell] =
            (1.0 - archive.learning_rate) * t + archive.learning_rate * e.objective;
    return out;
}

double qd_score(const ResultArchive& archive) {
    double sum = 0.0;
    for (const auto& [cell, elite] : archive.cells) sum += elite.objective;
    return sum;
}

double coverage(const ResultArchive& archive) {
    return static_cast<double>(archive.cells.size()) / archive.spec.cell_count();
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_float(float v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(v));
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

constexpr const char* kArchiveTag = "# gridforge-archive v1 ";

}  // namespace

std::string archive_to_csv(const ResultArchive& archive) {
    nlohmann::json spec_json;
    spec_json["dims"] = archive.spec.dims;
    spec_json["ranges"] = archive.spec.ranges;
    std::string out = kArchiveTag + spec_json.dump() + "\n";
    out += "cell,measures,objective,f_res,f_opt,similarity,env_hash,solution\n";
    for (const auto& [cell, e] : archive.cells) {
        out += std::to_string(cell);
        out += ',';
        for (size_t k = 0; k < e.measures.size(); ++k) {
            if (k) out += ' ';
            out += fmt_double(e.measures[k]);
        }
        out += ',';
        out += fmt_double(e.objective);
        out += ',';
        out += fmt_double(e.f_res);
        out += ',';
        out += fmt_double(e.f_opt);
        out += ',';
        out += fmt_double(e.similarity);
        out += ',';
        out += std::to_string(e.env_hash);
        out += ',';
        for (size_t k = 0; k < e.solution.size(); ++k) {
            if (k) out += ' ';
            out += fmt_float(e.solution[k]);
        }
        out += '\n';
    }
    return out;
}

ResultArchive archive_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind(kArchiveTag, 0) != 0)
        throw Error(ErrorCode::Io, "missing archive header");
    ResultArchive archive;
    try {
        nlohmann::json spec_json =
            nlohmann::json::parse(line.substr(std::string(kArchiveTag).size()));
        archive.spec.dims = spec_json.at("dims").get<std::vector<int>>();
        archive.spec.ranges =
            spec_json.at("ranges").get<std::vector<std::array<double, 2>>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Io, std::string("bad archive spec: ") + e.what());
    }
    archive.spec.check();
    if (!std::getline(in, line))
        throw Error(ErrorCode::Io, "missing archive column header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 8)
            throw Error(ErrorCode::Io, "archive row needs 8 fields");
        Elite e;
        int cell = std::stoi(fields[0]);
        for (const auto& tok : split(fields[1], ' '))
            if (!tok.empty()) e.measures.push_back(std::stod(tok));
        e.objective = std::stod(fields[2]);
        e.f_res = std::stod(fields[3]);
        e.f_opt = std::stod(fields[4]);
        e.similarity = std::stod(fields[5]);
        e.env_hash = std::stoull(fields[6]);
        for (const auto& tok : split(fields[7], ' '))
            if (!tok.empty()) e.solution.push_back(std::stof(tok));
        archive.cells.emplace(cell, std::move(e));
    }
    return archive;
}

void save_archive(const ResultArchive& archive, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << archive_to_csv(archive);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

ResultArchive load_archive(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return archive_from_csv(buf.str());
}

}  // namespace gridforge

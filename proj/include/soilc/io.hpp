#pragma once

#include "soilc/core.hpp"
#include "soilc/selection.hpp"

#include <map>
#include <string>
#include <vector>

namespace soilc {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double x);

struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Long-format data CSV `year,field,variable,value` plus the companion
// schedule CSV `year,field,treatment`. Field identifiers are 1-based.
FieldSeries ingest(const std::string& data_path, const std::string& schedule_path);

void write_data_csv(const std::string& path, const FieldSeries& data);
void write_schedule_csv(const std::string& path, const ManagementSchedule& schedule);

// Ground-truth latent states, long format `year,field,variable,value`.
void write_truth_csv(const std::string& path, const LatentTrajectory& truth,
                     const ModelSpec& spec);

void write_chain_csv(const std::string& path, const ChainOutput& chain);
// Reads a chain samples CSV back as [sample][param]; header gives names.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_chain_csv(
    const std::string& path);

void write_trajectories_csv(const std::string& path, const std::vector<LatentTrajectory>& trajs,
                            const ModelSpec& spec);
std::vector<LatentTrajectory> read_trajectories_csv(const std::string& path,
                                                    const ModelSpec& spec);

void write_lfo_csv(const std::string& path, const LfoResult& result);

// Flat `key = value` config file; later keys win. Lines starting with '#'
// are comments.
std::map<std::string, std::string> read_config(const std::string& path);

// FNV-1a over the canonicalised key=value lines, for the output manifests.
std::string config_hash(const std::map<std::string, std::string>& config);

}  // namespace soilc

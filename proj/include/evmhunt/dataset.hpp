#pragma once

#include "evmhunt/avp.hpp"
#include "evmhunt/distill.hpp"
#include "evmhunt/hex.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace evmhunt {

struct SampleRecord {
    std::string id;
    ContractBytecode bytecode;
    int label = 0; // ground truth, 1 = vulnerable
    VulnClass vuln_class = VulnClass::Reentrancy;
    std::optional<Eigen::VectorXd> teacher; // h_g^sc when available
};

// Joins <id>.hex files with a labels CSV (header id,vuln_class,label) and
// an optional teacher feature file. Missing bytecode for a labeled id is
// an error listing the ids; unmatched teacher rows are dropped.
std::vector<SampleRecord> load_dataset(const std::string& bytecode_dir,
                                       const std::string& labels_csv,
                                       const std::string& teacher_file = "");

// Teacher file: first non-comment line is the feature dimension, then
// lines "contract_id,v1,...,vD".
std::vector<SourceFeature> load_teacher_features(const std::string& path);

struct SynthConfig {
    int n_pos = 0;
    int n_neg = 0;
    VulnClass vuln_class = VulnClass::Reentrancy;
    int noise_blocks = 8;
    uint64_t seed = 42;
    int teacher_dim = 32;
};

// Positives carry a planted SL->SO->SS chain plus noise blocks; negatives
// never complete a chain. Teacher features are class/label-dependent
// Gaussian clusters. Deterministic under the seed.
std::vector<SampleRecord> synth_dataset(const SynthConfig& config);

// Writes hex files, labels.csv and teacher.txt under dir.
void write_dataset(const std::string& dir, const std::vector<SampleRecord>& samples);

// Stratified by label with a seeded shuffle; second part has ceil(fraction)
// of each label stratum.
std::pair<std::vector<SampleRecord>, std::vector<SampleRecord>>
split_dataset(const std::vector<SampleRecord>& samples, double val_fraction, uint64_t seed);

struct Metrics {
    double accuracy = 0, recall = 0, precision = 0, f1 = 0;
    long tp = 0, fp = 0, tn = 0, fn = 0;
    bool degenerate_precision = false; // no positive predictions
    bool degenerate_recall = false;    // no positive labels

    long total() const { return tp + fp + tn + fn; }
};

Metrics metrics_from_counts(long tp, long fp, long tn, long fn);

} // namespace evmhunt

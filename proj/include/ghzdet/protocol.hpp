#pragma once

#include "ghzdet/state_model.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ghzdet {

/// The two measurement-setting families.
///   Full      n+2 settings: Z basis plus the n+1 equatorial products XY:k
///   Efficient 3 settings: Z basis, XALL, YX
enum class SettingFamilyKind { Full, Efficient };

struct SettingFamily {
  SettingFamilyKind kind;
  int n;
};

/// Ordered setting list of a family. Requires n >= 2.
std::vector<MeasurementSetting> settings(const SettingFamily& family);

/// Weights recombining the n+1 equatorial settings into the real and
/// imaginary parts of the extreme-antidiagonal coherence, together with the
/// complex discrete-Fourier intermediates they reduce from:
///   re_weight(k) =  (-1)^k cos(a_k) / (n+1)
///   im_weight(k) = -(-1)^k sin(a_k) / (n+1),  a_k = k pi/(n+1)
///   dft_plus(k)  = (1 + e^{-i 2 pi k n/(n+1)}) / (n+1)
///   dft_minus(k) = (1 - e^{-i 2 pi k n/(n+1)}) / (n+1)
struct DecompositionCoefficients {
  int n;
  std::vector<double> re_weight;
  std::vector<double> im_weight;
  std::vector<std::complex<double>> dft_plus;
  std::vector<std::complex<double>> dft_minus;
};

DecompositionCoefficients dft_coefficients(int n);

/// Shots for one setting: one sign string per shot, qubit 0 first.
struct ShotRecord {
  MeasurementSetting setting;
  std::uint64_t seed = 0;  // master seed the stream was derived from
  std::vector<std::string> outcomes;
};

/// Draws i.i.d. shots from outcome_distribution(state, setting). The stream
/// is derive_stream_seed(seed, canonical name), so records are byte-identical
/// for identical (state, setting, shots, seed) and independent across
/// settings under one master seed.
ShotRecord sample_shots(const PreparedState& state, const MeasurementSetting& setting,
                        long shots, std::uint64_t seed);

struct ExpectationEntry {
  double value = 0.0;
  double std_error = 0.0;
  long shots = 0;  // 0 marks an exact (closed-form) entry
};

struct DiagonalEstimate {
  double z0 = 0.0, z1 = 0.0, mz = 0.0;
  double z0_err = 0.0, z1_err = 0.0, mz_err = 0.0;
  double sum_err = 0.0;   // std error of z0+z1
  double diff_err = 0.0;  // std error of z0-z1
};

struct CoherenceEstimate {
  bool available = false;
  double re = 0.0, im = 0.0;
  double re_err = 0.0, im_err = 0.0;
};

/// Per-setting expectations plus the Z-basis summary and, when the full
/// family is present, the recombined coherence components.
struct ExpectationSet {
  int n = 0;
  bool exact = false;
  std::map<std::string, ExpectationEntry> values;  // canonical name -> entry
  DiagonalEstimate diag;
  CoherenceEstimate coherence;

  bool has(const std::string& name) const { return values.count(name) != 0; }
  /// Throws an incomplete-data error naming the setting if absent.
  const ExpectationEntry& at(const std::string& name) const;
};

/// Exact-mode expectations: closed-form values, zero errors, shot count 0.
ExpectationSet exact_expectations(const PreparedState& state, const SettingFamily& family);

/// Sample means and Bessel-corrected standard errors per setting; Z-basis
/// records additionally yield string frequencies z0/z1 and the first-qubit
/// sign mean. Records of the same setting are pooled. Throws an
/// incomplete-data error naming the first missing required setting.
ExpectationSet estimate_expectations(std::span<const ShotRecord> records,
                                     const SettingFamily& family);

/// JSONL wire format, one record per line:
///   {"setting": "XY:3", "n": 4, "seed": 7, "outcomes": ["+-+-", ...]}
void write_shot_records(std::ostream& out, std::span<const ShotRecord> records);

/// Parse errors carry 1-based line numbers; all records must share one n.
std::vector<ShotRecord> read_shot_records(std::istream& in);

}  // namespace ghzdet

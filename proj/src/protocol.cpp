#include "ghzdet/protocol.hpp"

#include "ghzdet/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ghzdet {

namespace {

using json = nlohmann::json;

ExpectationEntry mean_entry(double sum, double sum_sq, long count) {
  const double mean = sum / static_cast<double>(count);
  // a single shot has no sample variance; report the worst case for +-1 data
  // so sampled errors are never zero (zero is the exact-mode marker)
  double variance = 1.0;
  if (count > 1) {
    variance = (sum_sq - static_cast<double>(count) * mean * mean) /
               static_cast<double>(count - 1);
    variance = std::max(variance, 0.0);
  }
  return {mean, std::sqrt(variance / static_cast<double>(count)), count};
}

double indicator_std_error(double freq, long count) {
  if (count <= 1) return 0.5;  // worst case for a single indicator draw
  const double variance =
      freq * (1.0 - freq) * static_cast<double>(count) / static_cast<double>(count - 1);
  return std::sqrt(std::max(variance, 0.0) / static_cast<double>(count));
}

}  // namespace

std::vector<MeasurementSetting> settings(const SettingFamily& family) {
  if (family.n < 2) throw std::invalid_argument("settings: need n >= 2");
  std::vector<MeasurementSetting> out;
  out.push_back(MeasurementSetting::z_basis(family.n));
  if (family.kind == SettingFamilyKind::Full) {
    for (int k = 0; k <= family.n; ++k)
      out.push_back(MeasurementSetting::xy_product(family.n, k));
  } else {
    out.push_back(MeasurementSetting::x_all(family.n));
    out.push_back(MeasurementSetting::yx_rest(family.n));
  }
  return out;
}

DecompositionCoefficients dft_coefficients(int n) {
  if (n < 1) throw std::invalid_argument("dft_coefficients: need n >= 1");
  DecompositionCoefficients c{n, {}, {}, {}, {}};
  const double m = n + 1.0;
  for (int k = 0; k <= n; ++k) {
    const double angle = k * M_PI / m;
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    c.re_weight.push_back(sign * std::cos(angle) / m);
    c.im_weight.push_back(-sign * std::sin(angle) / m);
    const std::complex<double> twiddle = std::exp(std::complex<double>(0, -2.0 * M_PI * k * n / m));
    c.dft_plus.push_back((1.0 + twiddle) / m);
    c.dft_minus.push_back((1.0 - twiddle) / m);
  }
  return c;
}

ShotRecord sample_shots(const PreparedState& state, const MeasurementSetting& setting,
                        long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_shots: need at least one shot");
  const OutcomeDistribution dist = outcome_distribution(state, setting);
  const int n = state.n;
  Xoshiro256pp rng(derive_stream_seed(seed, setting.canonical_name()));

  ShotRecord record{setting, seed, {}};
  record.outcomes.reserve(static_cast<std::size_t>(shots));

  std::string buffer(static_cast<std::size_t>(n), '+');
  auto fill_random_signs = [&](int count) {
    // bits come from 64-bit words so the draw count per shot is fixed
    int filled = 0;
    while (filled < count) {
      std::uint64_t word = rng.next();
      for (int b = 0; b < 64 && filled < count; ++b, ++filled)
        buffer[static_cast<std::size_t>(filled)] = (word >> b) & 1 ? '-' : '+';
    }
  };

  if (dist.form() == OutcomeDistribution::Form::SignParity) {
    const double bias = std::clamp(dist.parity_bias(), -1.0, 1.0);
    const double plus_probability = 0.5 * (1.0 + bias);
    for (long s = 0; s < shots; ++s) {
      const bool even_minus_count = rng.next_double() < plus_probability;
      fill_random_signs(n - 1);
      int minus_parity = 0;
      for (int q = 0; q < n - 1; ++q) minus_parity ^= buffer[static_cast<std::size_t>(q)] == '-';
      const bool last_minus = (minus_parity != 0) == even_minus_count;
      buffer[static_cast<std::size_t>(n - 1)] = last_minus ? '-' : '+';
      record.outcomes.push_back(buffer);
    }
  } else {
    const double z0 = dist.all_plus_probability();
    const double z1 = dist.all_minus_probability();
    const std::string all_plus(static_cast<std::size_t>(n), '+');
    const std::string all_minus(static_cast<std::size_t>(n), '-');
    for (long s = 0; s < shots; ++s) {
      const double u = rng.next_double();
      if (u < z0) {
        record.outcomes.push_back(all_plus);
      } else if (u < z0 + z1) {
        record.outcomes.push_back(all_minus);
      } else {
        // uniform over the remaining strings; reject the two special ones
        do {
          fill_random_signs(n);
        } while (buffer == all_plus || buffer == all_minus);
        record.outcomes.push_back(buffer);
      }
    }
  }
  return record;
}

const ExpectationEntry& ExpectationSet::at(const std::string& name) const {
  const auto it = values.find(name);
  if (it == values.end())
    throw std::runtime_error("incomplete data: missing setting " + name);
  return it->second;
}

ExpectationSet exact_expectations(const PreparedState& state, const SettingFamily& family) {
  if (family.n != state.n)
    throw std::invalid_argument("exact_expectations: family/state size mismatch");
  ExpectationSet es;
  es.n = state.n;
  es.exact = true;
  for (const auto& setting : settings(family))
    es.values[setting.canonical_name()] = {expectation_exact(state, setting), 0.0, 0};
  const DiagonalStats d = diagonal_stats(state);
  es.diag = {d.z0, d.z1, d.mz, 0, 0, 0, 0, 0};
  if (family.kind == SettingFamilyKind::Full) {
    const DecompositionCoefficients c = dft_coefficients(state.n);
    es.coherence.available = true;
    for (int k = 0; k <= state.n; ++k) {
      const double v = es.values["XY:" + std::to_string(k)].value;
      es.coherence.re += c.re_weight[static_cast<std::size_t>(k)] * v;
      es.coherence.im += c.im_weight[static_cast<std::size_t>(k)] * v;
    }
  }
  return es;
}

ExpectationSet estimate_expectations(std::span<const ShotRecord> records,
                                     const SettingFamily& family) {
  if (records.empty()) throw std::runtime_error("incomplete data: no shot records");
  const int n = records.front().setting.qubit_count();
  for (const auto& r : records)
    if (r.setting.qubit_count() != n)
      throw std::invalid_argument("estimate_expectations: mixed qubit counts in records");
  if (family.n != n)
    throw std::invalid_argument("estimate_expectations: family/record size mismatch");

  ExpectationSet es;
  es.n = n;
  es.exact = false;

  struct Accumulator {
    double parity_sum = 0.0;
    long count = 0;
    long all_plus = 0, all_minus = 0;
    double first_sign_sum = 0.0;
  };
  std::map<std::string, Accumulator> acc;

  for (const auto& record : records) {
    Accumulator& a = acc[record.setting.canonical_name()];
    for (const auto& outcome : record.outcomes) {
      if (static_cast<int>(outcome.size()) != n)
        throw std::invalid_argument("estimate_expectations: outcome length mismatch");
      int minus_count = 0;
      for (char ch : outcome) minus_count += ch == '-';
      a.parity_sum += minus_count % 2 == 0 ? 1.0 : -1.0;
      a.all_plus += minus_count == 0;
      a.all_minus += minus_count == n;
      a.first_sign_sum += outcome.front() == '-' ? -1.0 : 1.0;
      ++a.count;
    }
  }

  // sign products are +-1, so every squared term is 1
  for (const auto& [name, a] : acc)
    es.values[name] = mean_entry(a.parity_sum, static_cast<double>(a.count), a.count);

  for (const auto& setting : settings(family)) es.at(setting.canonical_name());

  const Accumulator& z = acc.at("Z");
  const double m = static_cast<double>(z.count);
  const double z0 = static_cast<double>(z.all_plus) / m;
  const double z1 = static_cast<double>(z.all_minus) / m;
  const double mz = z.first_sign_sum / m;
  DiagonalEstimate d;
  d.z0 = z0;
  d.z1 = z1;
  d.mz = mz;
  d.z0_err = indicator_std_error(z0, z.count);
  d.z1_err = indicator_std_error(z1, z.count);
  d.mz_err = mean_entry(z.first_sign_sum, m, z.count).std_error;
  if (z.count > 1) {
    // per-shot variables z0_i +- z1_i take values in {0, 1, -1}/{0, 1}
    const double bessel = m / (m - 1.0);
    const double var_sum = std::max((z0 + z1) - (z0 + z1) * (z0 + z1), 0.0) * bessel;
    const double var_diff = std::max((z0 + z1) - (z0 - z1) * (z0 - z1), 0.0) * bessel;
    d.sum_err = std::sqrt(var_sum / m);
    d.diff_err = std::sqrt(var_diff / m);
  } else {
    d.sum_err = 0.5;
    d.diff_err = 1.0;
  }
  es.diag = d;

  if (family.kind == SettingFamilyKind::Full) {
    const DecompositionCoefficients c = dft_coefficients(n);
    es.coherence.available = true;
    double var_re = 0.0, var_im = 0.0;
    for (int k = 0; k <= n; ++k) {
      const ExpectationEntry& e = es.at("XY:" + std::to_string(k));
      const double wr = c.re_weight[static_cast<std::size_t>(k)];
      const double wi = c.im_weight[static_cast<std::size_t>(k)];
      es.coherence.re += wr * e.value;
      es.coherence.im += wi * e.value;
      var_re += wr * wr * e.std_error * e.std_error;
      var_im += wi * wi * e.std_error * e.std_error;
    }
    es.coherence.re_err = std::sqrt(var_re);
    es.coherence.im_err = std::sqrt(var_im);
  }
  return es;
}

void write_shot_records(std::ostream& out, std::span<const ShotRecord> records) {
  for (const auto& record : records) {
    json line;
    line["setting"] = record.setting.canonical_name();
    line["n"] = record.setting.qubit_count();
    line["seed"] = record.seed;
    line["outcomes"] = record.outcomes;
    out << line.dump() << '\n';
  }
}

std::vector<ShotRecord> read_shot_records(std::istream& in) {
  std::vector<ShotRecord> records;
  std::string line;
  long line_number = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json parsed;
    try {
      parsed = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("shot file line " + std::to_string(line_number) +
                               ": malformed JSON (" + e.what() + ")");
    }
    try {
      const int record_n = parsed.at("n").get<int>();
      if (n == -1) n = record_n;
      if (record_n != n)
        throw std::runtime_error("mixed qubit counts (" + std::to_string(record_n) + " vs " +
                                 std::to_string(n) + ")");
      ShotRecord record{
          MeasurementSetting::from_name(parsed.at("setting").get<std::string>(), record_n),
          parsed.at("seed").get<std::uint64_t>(),
          parsed.at("outcomes").get<std::vector<std::string>>()};
      for (const auto& outcome : record.outcomes) {
        if (static_cast<int>(outcome.size()) != record_n)
          throw std::runtime_error("outcome length does not match n");
        for (char ch : outcome)
          if (ch != '+' && ch != '-')
            throw std::runtime_error("outcome strings use '+' and '-' only");
      }
      records.push_back(std::move(record));
    } catch (const json::exception& e) {
      throw std::runtime_error("shot file line " + std::to_string(line_number) +
                               ": missing or ill-typed field (" + e.what() + ")");
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("shot file line " + std::to_string(line_number) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("shot file line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace ghzdet

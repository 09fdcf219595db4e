#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "odmr/geometry.hpp"
#include "odmr/model.hpp"
#include "odmr/random.hpp"

namespace odmr {

struct LorentzianSpec {
  double center = 0.0;
  double hwhm = 0.0;
  double truncation = 50.0;  // draws beyond truncation * hwhm are re-drawn

  void validate() const;
};

// Longitudinal field seen by a center: the 14N hyperfine triplet at
// m * splitting (m = -1, 0, +1), each line broadened by a Lorentzian.
struct HyperfineMixtureSpec {
  double hwhm = 1.96;
  double splitting = 2.3;
  std::array<double, 3> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};  // m = -1, 0, +1
  double truncation = 50.0;

  void validate() const;
};

struct DriveDistribution {
  enum class Kind { constant, uniform };
  Kind kind = Kind::constant;
  double amplitude = 2.0;  // constant case
  double low = 0.0;        // uniform case
  double high = 0.0;

  static DriveDistribution constant(double amplitude) { return {Kind::constant, amplitude, 0, 0}; }
  static DriveDistribution uniform(double low, double high) {
    return {Kind::uniform, 0.0, low, high};
  }
  void validate() const;
};

struct DisorderSpec {
  LorentzianSpec d_dist{2870.0, 0.01};
  LorentzianSpec e1_dist{0.0, 0.73};
  LorentzianSpec e2_dist{0.0, 0.73};
  HyperfineMixtureSpec field_dist;
  DriveDistribution drive_dist;
  // Homogeneous widths, identical for every center.
  double gamma_b = 0.3;
  double gamma_d = 0.3;

  void validate() const;
};

// Which random classes a center was drawn into.
struct CenterLabel {
  std::uint8_t axis_class = 0;
  std::int8_t hyperfine_m = 0;
};

// center + hwhm tan(pi (u - 1/2)); u must lie in (0, 1). No truncation.
double lorentzian_quantile(const LorentzianSpec& spec, double u);

// One Lorentzian draw for a given u, or nullopt when it falls beyond the
// truncation radius and must be re-drawn.
std::optional<double> sample_lorentzian(const LorentzianSpec& spec, double u);

// Re-draws from `stream` until the sample lands inside the truncation radius.
double sample_lorentzian(const LorentzianSpec& spec, CounterStream& stream);

// Picks m from u_component by the mixture weights.
int hyperfine_component(const HyperfineMixtureSpec& spec, double u_component);

std::optional<double> sample_hyperfine_field(const HyperfineMixtureSpec& spec,
                                             double u_component, double u_value);

struct DrawnCenter {
  CenterParams params;
  CenterLabel label;
};

// The index-th center of the ensemble keyed by seed. Pure function.
DrawnCenter draw_center(const DisorderSpec& spec, const AxisPopulation& geometry,
                        std::uint64_t seed, std::uint64_t index);

class EnsembleSample {
 public:
  // Wraps explicit centers (tests, hand-built ensembles). Each is validated.
  static EnsembleSample from_centers(std::vector<CenterParams> centers);

  const std::vector<CenterParams>& centers() const { return data_->centers; }
  const std::vector<CenterLabel>& labels() const { return data_->labels; }
  std::size_t size() const { return data_->centers.size(); }
  std::uint64_t seed() const { return data_->seed; }
  const std::optional<DisorderSpec>& spec() const { return data_->spec; }
  const std::optional<AxisPopulation>& geometry() const { return data_->geometry; }

  friend bool operator==(const EnsembleSample& a, const EnsembleSample& b) {
    return a.data_->centers == b.data_->centers;
  }

 private:
  struct Data {
    std::vector<CenterParams> centers;
    std::vector<CenterLabel> labels;
    std::uint64_t seed = 0;
    std::optional<DisorderSpec> spec;
    std::optional<AxisPopulation> geometry;
  };
  explicit EnsembleSample(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;

  friend EnsembleSample draw_ensemble(const DisorderSpec&, const AxisPopulation&, std::size_t,
                                      std::uint64_t);
};

EnsembleSample draw_ensemble(const DisorderSpec& spec, const AxisPopulation& geometry,
                             std::size_t n, std::uint64_t seed);

}  // namespace odmr

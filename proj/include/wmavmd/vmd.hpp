#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wmavmd {

/// Variable-to-minimum difference of channel `channel` (0-based):
/// v[channel] - min(v). Always >= 0 and zero iff the channel attains the
/// minimum. Throws Error(InputDomain) on non-finite input and Error(Index)
/// when the channel is out of range.
double vmd(std::span<const double> v, std::size_t channel);

/// Braking-mode form max(v) - v[channel]; equal to vmd(-v, channel).
double vmd_negated(std::span<const double> v, std::size_t channel);

/// vmd() for every channel at once; ingestion-validated input only.
void vmd_all(std::span<const double> v, int sign, std::span<double> out) noexcept;

/// Tolerance used by every operator-property check:
/// 4 * machine-epsilon * max(1, magnitude).
double property_tolerance(double magnitude) noexcept;

/// Outcome of one named property evaluated on one input.
struct PropertyCheck {
  std::string name;
  bool passed = true;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  bool all_passed() const noexcept;
  const PropertyCheck* find(const std::string& name) const noexcept;
};

/// Scalar min identities and inequalities for a 4-tuple, together with
/// the exact equality characterization of the two inequalities.
struct ScalarMinReport {
  bool associativity = true;       // min(min(a,b),c) == min(a,b,c)
  bool shift = true;               // min(a+c, a+d) == a + min(c,d)
  bool superadditive = true;       // min(a,b)+min(c,d) <= min(a+c, b+d)
  bool subtractive = true;         // min(a-c, b-d) <= min(a,b) - min(c,d)
  bool superadditive_equal = false;    // equality observed
  bool superadditive_predicted = false; // equality predicted by the case list
  bool subtractive_equal = false;
  bool subtractive_predicted = false;

  bool consistent() const noexcept {
    return associativity && shift && superadditive && subtractive &&
           superadditive_equal == superadditive_predicted &&
           subtractive_equal == subtractive_predicted;
  }
};

/// Exact evaluation; intended for inputs whose sums and differences are
/// representable (small integers, dyadic rationals).
ScalarMinReport check_scalar_min(double a, double b, double c, double d);

/// Vector min properties: scaling/negation identity, superadditivity and
/// the subtractive bound. Throws Error(InputDomain) on length mismatch.
PropertyReport check_min_inequalities(std::span<const double> x,
                                      std::span<const double> y, double z);

/// VMD operator properties: zero-iff-min, translation invariance, scaling,
/// triangle and reverse triangle inequality.
PropertyReport check_vmd_properties(std::span<const double> x,
                                    std::span<const double> y, double z,
                                    std::size_t channel);

}  // namespace wmavmd

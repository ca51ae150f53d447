#ifndef SNROBUST_SAMPLE_HPP
#define SNROBUST_SAMPLE_HPP

#include <string>
#include <vector>

namespace snrobust {

// An ordered batch of observations with provenance metadata.
struct Sample {
  std::vector<double> values;
  std::string label;
  std::string source;

  std::size_t size() const { return values.size(); }

  // Throws DataError unless nonempty with all values finite.
  void validate() const;

  double mean() const;
  double sd() const;        // n-1 denominator
  double skewness() const;  // m3 / m2^{3/2}
};

}  // namespace snrobust

#endif  // SNROBUST_SAMPLE_HPP

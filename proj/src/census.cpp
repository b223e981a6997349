#include "intricacy/census.hpp"

#include <cmath>
#include <string>

#include "intricacy/errors.hpp"

namespace intricacy::census {

void CensusInputs::validate() const {
  auto need = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  need(n_e, "n_e");
  need(v_e, "v_e");
  need(v_prime, "v_prime");
  need(L, "L");
  need(lambda_mfp, "lambda_mfp");
}

CensusResult wave_census(const CensusInputs& in) {
  in.validate();
  const double area = in.L * in.L;
  return {in.n_e * in.v_e * area, in.n_e * (in.v_e / in.v_prime) * area * in.L,
          in.n_e * area * in.lambda_mfp};
}

}  // namespace intricacy::census

// Order-of-magnitude counts of environment-induced intricacy waves in a box
// of size L immersed in an environment gas. SI units throughout.
#pragma once

namespace intricacy::census {

struct CensusInputs {
  double n_e = 2.7e25;      // environment number density, 1/m^3
  double v_e = 380.0;       // environment mean molecular speed, m/s
  double v_prime = 319.0;   // in-gas front speed, m/s
  double L = 0.1;           // box length, m
  double lambda_mfp = 7e-8; // in-gas mean free path, m

  void validate() const;
};

struct CensusResult {
  double rate_tau_d_inv = 0.0;  // n_e v_e L^2, 1/s
  double waves_in_box = 0.0;    // n_e (v_e / v') L^3
  double active_waves = 0.0;    // n_e L^2 lambda
};

CensusResult wave_census(const CensusInputs& in);

}  // namespace intricacy::census

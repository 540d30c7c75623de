#pragma once

namespace qan {

// Decibel / linear conversions. Powers are carried internally in linear mW;
// dB and dBm appear only at interfaces.
double db_to_linear(double loss_db);   // 10^(-x/10), attenuation as a ratio
double linear_to_db(double ratio);     // inverse of db_to_linear
double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Fiber attenuation in dB/km -> exponential coefficient in 1/km, so that
// exp(-a'*L) == 10^(-a*L/10) for every L.
double att_to_natural(double db_per_km);

// Photon energy at a vacuum wavelength given in nm, in joules.
double photon_energy_j(double wavelength_nm);

}  // namespace qan

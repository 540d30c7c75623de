#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qan/keyrate.hpp"

namespace qan::post {

using BitVec = std::vector<uint8_t>;  // one bit per element, values 0/1

struct SiftedKeyPair {
  BitVec sender;
  BitVec receiver;
  double qber_estimate = 0.0;

  void validate() const;
};

struct WinnowConfig {
  // Block-size schedule, one entry per iteration. Sizes must be powers of two
  // >= 4; the defaults converge comfortably below the 4% abort threshold.
  std::vector<size_t> block_sizes = {8, 8, 16, 32, 64, 128};
  uint64_t seed = 1;  // shared seed for permutations and the verification hash
};

struct ReconciliationResult {
  BitVec corrected;            // receiver key after correction and discards
  BitVec sender_kept;          // sender key on the same surviving positions
  size_t leakage_bits = 0;     // parities + syndromes + verification hashes
  size_t discarded_bits = 0;   // privacy-maintenance discards
  size_t corrections = 0;      // bits flipped by syndrome decoding
  size_t iterations_used = 0;
  bool passed = false;
  std::vector<size_t> distance_after_iteration;  // instrumentation
};

// Winnow: per iteration, a shared permutation, block-parity exchange, Hamming
// syndrome correction of odd blocks, and privacy-maintenance discards (last
// bit of each compared block, syndrome positions of corrected blocks).
// Terminates when a seeded 64-bit hash of both keys agrees.
ReconciliationResult winnow_reconcile(const SiftedKeyPair& pair, const WinnowConfig& config = {});

// Toeplitz privacy amplification over GF(2). The matrix is defined by its
// first column (out_len bits) and first row (key length bits) packed into one
// seed of out_len + key_len - 1 bits: seed index (i - j) + key_len - 1 holds
// T[i][j].
BitVec toeplitz_pa(const BitVec& key, size_t out_len, const BitVec& seed);

// Realized secret length for a reconciled block: sifted * fraction terms of
// the rate formula minus the bits actually disclosed. single_photon_fraction
// is the Q1(1-H2(e1))/Q_mu + Q0/Q_mu weight; with the all-single-photon
// assumption (1.0) and e1 = qber this reduces to n*(1 - H2(qber)) - leakage.
long final_key_length(size_t sifted_len, double qber, size_t leakage_bits,
                      const keyrate::ProtocolParams& p, double single_photon_fraction = 1.0,
                      double e_1 = -1.0);

// Binary key-file framing: a little-endian u64 bit count followed by the bits
// packed LSB-first. Used for the sifted and final key artifacts.
void write_key_file(const std::string& path, const BitVec& bits);
BitVec read_key_file(const std::string& path);

}  // namespace qan::post

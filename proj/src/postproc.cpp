#include "qan/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "qan/philox.hpp"

namespace qan::post {

void SiftedKeyPair::validate() const {
  if (sender.size() != receiver.size())
    throw std::invalid_argument("sifted pair: keys must have equal length");
  if (qber_estimate < 0.0 || qber_estimate > 0.5)
    throw std::invalid_argument("sifted pair: QBER estimate must be in [0, 0.5]");
}

namespace {

size_t hamming_distance(const BitVec& a, const BitVec& b) {
  size_t d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// Shared deterministic permutation for one iteration.
std::vector<size_t> iteration_permutation(size_t n, uint64_t seed, size_t iteration) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  rng::PhiloxStream stream(seed, 0x5157u + iteration);
  for (size_t i = n; i > 1; --i) {
    const size_t j = static_cast<size_t>(stream.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

void apply_permutation(BitVec& bits, const std::vector<size_t>& perm) {
  BitVec tmp(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) tmp[i] = bits[perm[i]];
  bits.swap(tmp);
}

// Seeded 64-bit polynomial hash used for key verification.
uint64_t key_hash(const BitVec& bits, uint64_t seed) {
  rng::PhiloxStream stream(seed, 0x48415348u);
  const uint64_t mult = stream.next_u64() | 1u;
  uint64_t h = stream.next_u64();
  for (uint8_t b : bits) h = h * mult + (b + 1u);
  return h;
}

// Hamming syndrome over the first (block_size - 1) bits of a block: XOR of the
// 1-based positions of set bits. Syndromes of sender and receiver differ by
// the position of a single error.
uint32_t hamming_syndrome(const BitVec& bits, size_t begin, size_t data_len) {
  uint32_t syndrome = 0;
  for (size_t i = 0; i < data_len; ++i)
    if (bits[begin + i]) syndrome ^= static_cast<uint32_t>(i + 1);
  return syndrome;
}

}  // namespace

ReconciliationResult winnow_reconcile(const SiftedKeyPair& pair, const WinnowConfig& config) {
  pair.validate();
  if (config.block_sizes.empty())
    throw std::invalid_argument("winnow: need at least one iteration");
  for (size_t bs : config.block_sizes)
    if (bs < 4 || (bs & (bs - 1)) != 0)
      throw std::invalid_argument("winnow: block sizes must be powers of two >= 4");
  if (pair.sender.size() < config.block_sizes.front())
    throw std::invalid_argument("winnow: key shorter than one block");

  ReconciliationResult result;
  BitVec alice = pair.sender;
  BitVec bob = pair.receiver;

  for (size_t iteration = 0; iteration < config.block_sizes.size(); ++iteration) {
    const size_t block = config.block_sizes[iteration];
    if (alice.size() >= block) {
      const auto perm = iteration_permutation(alice.size(), config.seed, iteration);
      apply_permutation(alice, perm);
      apply_permutation(bob, perm);

      const size_t full_blocks = alice.size() / block;
      std::vector<uint8_t> discard(alice.size(), 0);
      for (size_t b = 0; b < full_blocks; ++b) {
        const size_t begin = b * block;
        uint8_t parity_a = 0, parity_b = 0;
        for (size_t i = 0; i < block; ++i) {
          parity_a ^= alice[begin + i];
          parity_b ^= bob[begin + i];
        }
        result.leakage_bits += 1;           // block parity crosses the channel
        discard[begin + block - 1] = 1;     // maintain privacy for the parity

        if (parity_a != parity_b) {
          const size_t data_len = block - 1;
          const uint32_t rel = hamming_syndrome(alice, begin, data_len) ^
                               hamming_syndrome(bob, begin, data_len);
          result.leakage_bits += static_cast<size_t>(std::log2(block));
          if (rel != 0 && rel <= data_len) {
            bob[begin + rel - 1] ^= 1;  // single-error pattern inside the data bits
          } else {
            bob[begin + block - 1] ^= 1;  // error sits on the parity bit itself
          }
          ++result.corrections;
          // Syndrome bits are maintained by discarding the power-of-two
          // positions they were computed from.
          for (size_t p = 1; p <= data_len; p <<= 1) discard[begin + p - 1] = 1;
        }
      }

      BitVec next_a, next_b;
      next_a.reserve(alice.size());
      next_b.reserve(bob.size());
      for (size_t i = 0; i < alice.size(); ++i) {
        if (discard[i]) {
          ++result.discarded_bits;
          continue;
        }
        next_a.push_back(alice[i]);
        next_b.push_back(bob[i]);
      }
      alice.swap(next_a);
      bob.swap(next_b);
    }

    result.iterations_used = iteration + 1;
    result.distance_after_iteration.push_back(hamming_distance(alice, bob));
    result.leakage_bits += 64;  // verification hash comparison
    if (key_hash(alice, config.seed) == key_hash(bob, config.seed)) {
      result.passed = true;
      break;
    }
  }

  result.corrected = std::move(bob);
  result.sender_kept = std::move(alice);
  return result;
}

BitVec toeplitz_pa(const BitVec& key, size_t out_len, const BitVec& seed) {
  if (out_len > key.size())
    throw std::invalid_argument("toeplitz: output cannot exceed the input length");
  if (seed.size() != out_len + key.size() - 1)
    throw std::invalid_argument("toeplitz: seed must hold out_len + key_len - 1 bits");
  BitVec out(out_len, 0);
  const size_t offset = key.size() - 1;
  for (size_t i = 0; i < out_len; ++i) {
    uint8_t acc = 0;
    for (size_t j = 0; j < key.size(); ++j)
      acc ^= static_cast<uint8_t>(seed[i + offset - j] & key[j]);
    out[i] = acc;
  }
  return out;
}

long final_key_length(size_t sifted_len, double qber, size_t leakage_bits,
                      const keyrate::ProtocolParams& p, double single_photon_fraction,
                      double e_1) {
  if (qber < 0.0 || qber > 0.5)
    throw std::invalid_argument("final_key_length: qber must be in [0, 0.5]");
  if (single_photon_fraction < 0.0 || single_photon_fraction > 1.0)
    throw std::invalid_argument("final_key_length: fraction must be in [0, 1]");
  if (qber >= p.qber_abort) return 0;  // session aborted
  const double e1 = e_1 < 0.0 ? qber : e_1;
  const double secret = static_cast<double>(sifted_len) * single_photon_fraction *
                            (1.0 - keyrate::binary_entropy(std::min(e1, 0.5))) -
                        static_cast<double>(leakage_bits);
  return std::max(0L, static_cast<long>(std::floor(secret)));
}

void write_key_file(const std::string& path, const BitVec& bits) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open key file for writing: " + path);
  const uint64_t n = bits.size();
  char header[8];
  for (int i = 0; i < 8; ++i) header[i] = static_cast<char>((n >> (8 * i)) & 0xFF);
  out.write(header, 8);
  std::vector<uint8_t> packed((bits.size() + 7) / 8, 0);
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) packed[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  out.write(reinterpret_cast<const char*>(packed.data()),
            static_cast<std::streamsize>(packed.size()));
  if (!out) throw std::runtime_error("short write on key file: " + path);
}

BitVec read_key_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open key file: " + path);
  char header[8];
  in.read(header, 8);
  if (in.gcount() != 8) throw std::runtime_error("truncated key file header: " + path);
  uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= static_cast<uint64_t>(static_cast<uint8_t>(header[i])) << (8 * i);
  std::vector<uint8_t> packed((n + 7) / 8);
  in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (static_cast<uint64_t>(in.gcount()) != packed.size())
    throw std::runtime_error("truncated key file payload: " + path);
  BitVec bits(n);
  for (uint64_t i = 0; i < n; ++i) bits[i] = (packed[i / 8] >> (i % 8)) & 1u;
  return bits;
}

}  // namespace qan::post

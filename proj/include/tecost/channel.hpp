#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tecost/matops.hpp"

namespace tecost {

inline constexpr double kChannelTol = 1e-8;

// Kraus-form channel. Construction rejects inconsistent dimensions and
// anything failing trace preservation at kChannelTol.
class KrausChannel {
public:
    KrausChannel(std::size_t dim, std::vector<Matrix> ops);
    explicit KrausChannel(std::vector<Matrix> ops);

    std::size_t dim() const { return dim_; }
    std::size_t count() const { return ops_.size(); }
    const std::vector<Matrix>& ops() const { return ops_; }
    const Matrix& op(std::size_t j) const { return ops_[j]; }

private:
    std::size_t dim_;
    std::vector<Matrix> ops_;
};

// Why a raw Kraus list is not a channel, or empty if it is one.
std::string channel_defect(std::size_t dim, const std::vector<Matrix>& ops, double tol);
bool validate(std::size_t dim, const std::vector<Matrix>& ops, double tol);
bool validate(const KrausChannel& ch, double tol);

Matrix apply(const KrausChannel& ch, const Matrix& rho);
Matrix choi(const KrausChannel& ch);
KrausChannel kraus_transform(const KrausChannel& ch, const Matrix& w);
KrausChannel canonical_form(const KrausChannel& ch);
KrausChannel pad_zero(const KrausChannel& ch);

// Tr K_j for every operator.
CVec kraus_traces(const KrausChannel& ch);

// The unitary W used by canonical_form (first row conj(t)/|t|), or nullopt
// when every trace vanishes.
std::optional<Matrix> canonical_rotation(const KrausChannel& ch);

// Heisenberg-Weyl operator X^a Z^b on C^n, X|k> = |k+1>, Z|k> = w^k |k>.
Matrix weyl_operator(std::size_t n, std::size_t a, std::size_t b);

KrausChannel make_depolarizing(std::size_t n, double p);
KrausChannel make_projector_channel(const std::vector<Matrix>& projectors, const CVec& scales);
// n/r orthogonal rank-r coordinate projectors with unit scales.
KrausChannel make_block_projector_channel(std::size_t n, std::size_t r);
KrausChannel make_random_channel(std::size_t n, std::size_t d, std::uint64_t seed);
KrausChannel make_identity_channel(std::size_t n);

// Haar-distributed unitary from the QR of a Gaussian matrix, deterministic in seed.
Matrix random_unitary(std::size_t n, std::uint64_t seed);
Matrix random_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint64_t stream);

}  // namespace tecost

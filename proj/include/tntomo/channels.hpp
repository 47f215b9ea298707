#pragma once

#include <string>
#include <vector>

#include "tntomo/lpdo.hpp"
#include "tntomo/pauli.hpp"

namespace tntomo {

enum class ChannelKind { Depolarizing, BitFlip, AmplitudeDamping, PhaseDamping };

inline const char* channel_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::BitFlip: return "bit_flip";
    case ChannelKind::AmplitudeDamping: return "amplitude_damping";
    case ChannelKind::PhaseDamping: return "phase_damping";
  }
  return "?";
}

inline ChannelKind channel_from_name(const std::string& name) {
  if (name == "depolarizing") return ChannelKind::Depolarizing;
  if (name == "bit_flip") return ChannelKind::BitFlip;
  if (name == "amplitude_damping") return ChannelKind::AmplitudeDamping;
  if (name == "phase_damping") return ChannelKind::PhaseDamping;
  throw InvalidArgument("unknown channel kind '" + name + "'");
}

/// Single-qubit noise channel with error rate epsilon in [0, 1].
struct ChannelSpec {
  ChannelKind kind = ChannelKind::Depolarizing;
  double epsilon = 0.0;
};

/// Kraus operators E_k with sum E^dag E = I. The depolarizing set
/// {sqrt(1-eps) I, sqrt(eps/3) X, sqrt(eps/3) Y, sqrt(eps/3) Z} reproduces
/// E(rho) = (1 - 4eps/3) rho + (eps/3) sum_i sigma_i rho sigma_i.
inline std::vector<Matrix2cd> kraus_operators(const ChannelSpec& ch) {
  require(ch.epsilon >= 0.0 && ch.epsilon <= 1.0,
          "kraus_operators: epsilon must lie in [0, 1]");
  const double e = ch.epsilon;
  std::vector<Matrix2cd> ops;
  switch (ch.kind) {
    case ChannelKind::Depolarizing:
      ops.push_back(std::sqrt(1.0 - e) * pauli_matrix('I'));
      ops.push_back(std::sqrt(e / 3.0) * pauli_matrix('X'));
      ops.push_back(std::sqrt(e / 3.0) * pauli_matrix('Y'));
      ops.push_back(std::sqrt(e / 3.0) * pauli_matrix('Z'));
      break;
    case ChannelKind::BitFlip:
      ops.push_back(std::sqrt(1.0 - e) * pauli_matrix('I'));
      ops.push_back(std::sqrt(e) * pauli_matrix('X'));
      break;
    case ChannelKind::AmplitudeDamping: {
      Matrix2cd e0, e1;
      e0 << 1, 0, 0, std::sqrt(1.0 - e);
      e1 << 0, std::sqrt(e), 0, 0;
      ops.push_back(e0);
      ops.push_back(e1);
      break;
    }
    case ChannelKind::PhaseDamping: {
      Matrix2cd e0, e1;
      e0 << 1, 0, 0, std::sqrt(1.0 - e);
      e1 << 0, 0, 0, std::sqrt(e);
      ops.push_back(e0);
      ops.push_back(e1);
      break;
    }
  }
  return ops;
}

/// Applies the channel independently to every site. Each site's Kraus
/// dimension grows by the number of Kraus operators; the trace is preserved.
inline LPDOState apply_channel(const LPDOState& rho, const ChannelSpec& ch) {
  const std::vector<Matrix2cd> kraus = kraus_operators(ch);
  const std::size_t nk = kraus.size();

  DenseTensor e({"e", "po", kPhys}, {nk, 2, 2});
  for (std::size_t k = 0; k < nk; ++k)
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) e.at({k, r, c}) = kraus[k](r, c);

  LPDOState out;
  out.sites.reserve(rho.n_sites());
  for (const auto& site : rho.sites) {
    DenseTensor t = contract(e, site, {{kPhys, kPhys}});
    t = t.renamed("po", kPhys).fused({kKraus, "e"}, kKraus);
    out.sites.push_back(t.permuted({kLeft, kPhys, kKraus, kRight}));
  }
  return out;
}

inline LPDOState apply_channel(const MPSState& psi, const ChannelSpec& ch) {
  return apply_channel(lpdo_from_mps(psi), ch);
}

}  // namespace tntomo

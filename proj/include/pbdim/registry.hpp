#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "design.hpp"
#include "generators.hpp"

namespace pbdim {

/// Request for a pairwise balanced design on v points with block sizes
/// drawn from `sizes` (sorted distinct).
struct PbdRequest {
  long long v = 0;
  std::vector<int> sizes;

  auto operator<=>(const PbdRequest&) const = default;
};

/// Request for a group divisible design with block sizes drawn from `sizes`
/// and the given group type, as (size, multiplicity) pairs ascending.
struct GddRequest {
  std::vector<int> sizes;
  std::vector<std::pair<int, int>> type;

  auto operator<=>(const GddRequest&) const = default;
};

inline std::vector<int> normalized_sizes(std::vector<int> sizes) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

// Rendering normalizes, so a request names the same design set no matter how
// the caller ordered the sizes.
inline std::string size_set_string(const std::vector<int>& sizes) {
  std::vector<int> norm = normalized_sizes(sizes);
  std::string s = "{";
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(norm[i]);
  }
  return s + "}";
}

inline std::string to_string(const PbdRequest& r) {
  return "PBD(" + std::to_string(r.v) + ", " + size_set_string(r.sizes) + ")";
}

inline std::string to_string(const GddRequest& r) {
  return "GDD(" + size_set_string(r.sizes) + ", " + type_string(r.type) + ")";
}

/// Store of verified designs keyed by exact request.  put() verifies before
/// accepting; get() never constructs anything.
class DesignRegistry {
 public:
  void put(PbdRequest req, PBDesign design) {
    req.sizes = normalized_sizes(req.sizes);
    canonicalize(design);
    if (design.v != req.v)
      throw VerificationFailedError("point count mismatch for " +
                                    to_string(req));
    for (const auto& b : design.blocks)
      if (!std::binary_search(req.sizes.begin(), req.sizes.end(),
                              (int)b.size()))
        throw VerificationFailedError("block size " +
                                      std::to_string(b.size()) +
                                      " outside request " + to_string(req));
    VerificationReport rep = verify_pbd(design);
    if (!rep.valid)
      throw VerificationFailedError("design rejected for " + to_string(req) +
                                    ": verification failed");
    pbds_[req] = std::make_shared<const PBDesign>(std::move(design));
  }

  void put(GddRequest req, GroupDesign design) {
    req.sizes = normalized_sizes(req.sizes);
    canonicalize(design);
    if (group_type(design) != req.type)
      throw VerificationFailedError("group type mismatch for " +
                                    to_string(req));
    for (const auto& b : design.blocks)
      if (!std::binary_search(req.sizes.begin(), req.sizes.end(),
                              (int)b.size()))
        throw VerificationFailedError("block size " +
                                      std::to_string(b.size()) +
                                      " outside request " + to_string(req));
    VerificationReport rep = verify_gdd(design);
    if (!rep.valid)
      throw VerificationFailedError("design rejected for " + to_string(req) +
                                    ": verification failed");
    gdds_[req] = std::make_shared<const GroupDesign>(std::move(design));
  }

  std::shared_ptr<const PBDesign> get(const PbdRequest& req) const {
    auto it = pbds_.find(normalized(req));
    return it == pbds_.end() ? nullptr : it->second;
  }

  std::shared_ptr<const GroupDesign> get(const GddRequest& req) const {
    auto it = gdds_.find(normalized(req));
    return it == gdds_.end() ? nullptr : it->second;
  }

  std::size_t size() const { return pbds_.size() + gdds_.size(); }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : pbds_) out.push_back(to_string(k));
    for (const auto& [k, v] : gdds_) out.push_back(to_string(k));
    return out;
  }

 private:
  static PbdRequest normalized(PbdRequest r) {
    r.sizes = normalized_sizes(r.sizes);
    return r;
  }
  static GddRequest normalized(GddRequest r) {
    r.sizes = normalized_sizes(r.sizes);
    return r;
  }

  std::map<PbdRequest, std::shared_ptr<const PBDesign>> pbds_;
  std::map<GddRequest, std::shared_ptr<const GroupDesign>> gdds_;
};

/// Resolves ingredient requests: registry designs take precedence, then the
/// built-in families (single block, triple systems, affine and projective
/// geometries, field transversal designs).  Results are memoized; find_*
/// returns null on failure while the throwing forms raise
/// MissingIngredientError.
class IngredientProvider {
 public:
  explicit IngredientProvider(const DesignRegistry* registry = nullptr)
      : registry_(registry) {}

  std::shared_ptr<const PBDesign> find_pbd(const PbdRequest& raw) const {
    PbdRequest req{raw.v, normalized_sizes(raw.sizes)};
    if (auto it = pbd_memo_.find(req); it != pbd_memo_.end())
      return it->second;
    auto d = build_pbd(req);
    pbd_memo_[req] = d;
    return d;
  }

  std::shared_ptr<const GroupDesign> find_gdd(const GddRequest& raw) const {
    GddRequest req{normalized_sizes(raw.sizes), raw.type};
    if (auto it = gdd_memo_.find(req); it != gdd_memo_.end())
      return it->second;
    auto d = build_gdd(req);
    gdd_memo_[req] = d;
    return d;
  }

  std::shared_ptr<const PBDesign> pbd(const PbdRequest& req) const {
    auto d = find_pbd(req);
    if (!d) throw MissingIngredientError(to_string(req));
    return d;
  }

  std::shared_ptr<const GroupDesign> gdd(const GddRequest& req) const {
    auto d = find_gdd(req);
    if (!d) throw MissingIngredientError(to_string(req));
    return d;
  }

 private:
  std::shared_ptr<const PBDesign> build_pbd(const PbdRequest& req) const {
    if (registry_)
      if (auto d = registry_->get(req)) return d;
    if (req.v < 2 || req.sizes.empty()) return nullptr;
    auto has = [&](long long k) {
      return k <= INT32_MAX &&
             std::binary_search(req.sizes.begin(), req.sizes.end(), (int)k);
    };
    // the complete design
    if (has(req.v)) {
      PBDesign d;
      d.v = (int)req.v;
      Block all(req.v);
      for (int i = 0; i < (int)req.v; ++i) all[i] = i;
      d.blocks.push_back(std::move(all));
      d.declared_sizes = req.sizes;
      return std::make_shared<const PBDesign>(std::move(d));
    }
    if (has(3) && req.v >= 3 && (req.v % 6 == 1 || req.v % 6 == 3) &&
        req.v <= kMaxGeneratedPoints) {
      PBDesign d = steiner_triple_system(req.v);
      d.declared_sizes = req.sizes;
      return std::make_shared<const PBDesign>(std::move(d));
    }
    // affine geometry: v = q^d for some block size q
    for (int q : req.sizes) {
      if (q < 2 || !prime_power_decompose(q)) continue;
      long long power = (long long)q * q;
      for (int d = 2; power <= req.v && power <= kMaxGeneratedPoints; ++d) {
        if (power == req.v) {
          PBDesign a = affine_space(q, d);
          a.declared_sizes = req.sizes;
          return std::make_shared<const PBDesign>(std::move(a));
        }
        power *= q;
      }
    }
    // projective plane: v = q^2 + q + 1 with q + 1 a block size
    {
      long long q = (long long)std::sqrt((double)req.v);
      for (long long c = q - 2; c <= q + 2; ++c)
        if (c >= 2 && c * c + c + 1 == req.v && has(c + 1) &&
            prime_power_decompose(c)) {
          PBDesign p = projective_plane(c);
          p.declared_sizes = req.sizes;
          return std::make_shared<const PBDesign>(std::move(p));
        }
    }
    return nullptr;
  }

  std::shared_ptr<const GroupDesign> build_gdd(const GddRequest& req) const {
    if (registry_)
      if (auto d = registry_->get(req)) return d;
    if (req.sizes.empty() || req.type.empty()) return nullptr;
    auto has = [&](long long k) {
      return k <= INT32_MAX &&
             std::binary_search(req.sizes.begin(), req.sizes.end(), (int)k);
    };
    if (req.type.size() == 1) {
      auto [g, u] = req.type[0];
      // u groups of size 1 and one block through everything
      if (g == 1 && has(u) && u >= 2) {
        GroupDesign d;
        d.v = u;
        Block all(u);
        for (int i = 0; i < u; ++i) {
          d.groups.push_back({i});
          all[i] = i;
        }
        d.blocks.push_back(std::move(all));
        return std::make_shared<const GroupDesign>(std::move(d));
      }
      // uniform type g^u: transversal design with u groups of size g
      if (g >= 2 && u >= 2 && has(u) && u <= g + 1 &&
          prime_power_decompose(g) &&
          (long long)g * u <= kMaxGeneratedPoints) {
        return std::make_shared<const GroupDesign>(
            transversal_design(u, g));
      }
    }
    return nullptr;
  }

  const DesignRegistry* registry_;
  mutable std::map<PbdRequest, std::shared_ptr<const PBDesign>> pbd_memo_;
  mutable std::map<GddRequest, std::shared_ptr<const GroupDesign>> gdd_memo_;
};

}  // namespace pbdim

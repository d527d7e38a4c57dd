#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "domkit/poset.hpp"

namespace domkit {

// An embedding-projection pair between A (small) and B (large): the
// embedding is left adjoint to the projection, proj . emb = id_A and
// emb . proj <= id_B pointwise.
class EpPair {
 public:
  // Throws Mismatch, NotSection(x), NotInjective or NotDeflation(y).
  static EpPair make(MonotoneMap emb, MonotoneMap proj);
  static EpPair identity(const PosetPtr& p);

  const MonotoneMap& emb() const { return emb_; }
  const MonotoneMap& proj() const { return proj_; }
  const PosetPtr& small() const { return emb_.dom(); }
  const PosetPtr& large() const { return emb_.cod(); }

  friend bool operator==(const EpPair& a, const EpPair& b) {
    return a.emb_ == b.emb_ && a.proj_ == b.proj_;
  }

 private:
  EpPair(MonotoneMap emb, MonotoneMap proj) : emb_(std::move(emb)), proj_(std::move(proj)) {}

  MonotoneMap emb_;
  MonotoneMap proj_;
};

// f: A <-> B then g: B <-> C, giving A <-> C. Laws are revalidated.
EpPair compose_ep(const EpPair& f, const EpPair& g);

// The unique projection right adjoint to `emb`, found by exhaustive search
// over all monotone maps cod -> dom and cross-checked against the pointwise
// formula proj(y) = max{x : emb(x) <= y}. Throws NoAdjoint.
EpPair projection_from_embedding(const MonotoneMap& emb, const Budget& budget = {});

// The pointwise formula alone; nullopt when some max does not exist or the
// result fails the ep-laws.
std::optional<MonotoneMap> projection_by_formula(const MonotoneMap& emb);

// Every ep-pair A <-> B, ordered by embedding then projection assignment.
std::vector<EpPair> enumerate_ep_pairs(const PosetPtr& a, const PosetPtr& b,
                                       const Budget& budget = {});

// Exhaustive witness search: is `proj` the right half of some ep-pair?
std::optional<EpPair> embedding_for_projection(const MonotoneMap& proj);

nlohmann::json ep_to_json(const EpPair& e);
// `small`/`large` may be supplied by context (see map_from_json).
EpPair ep_from_json(const nlohmann::json& j, PosetPtr small = nullptr, PosetPtr large = nullptr);

}  // namespace domkit

#pragma once

#include "domkit/bilimit.hpp"
#include "domkit/catalog.hpp"
#include "domkit/internal.hpp"
#include "domkit/partial.hpp"

namespace domkit {

struct DiagramShape {
  std::size_t max_index = 4;
  std::size_t max_object = 4;
  // Extra elements a random cone apex may have over the top object.
  std::size_t max_extra = 2;
};

// A random poset on 1..max_size elements with an adjoined greatest element.
// Ids are "0", "1", ...; the top is the last one.
PosetPtr random_directed_index(Rng& rng, std::size_t max_size);

// Chooses the top object, then one ep-pair D_i <-> D_t per index element
// (downwards along a linear extension) whose embedding image sits inside the
// images already chosen above it. Edges are derived from these legs:
// eps_ij = pi_jt . eps_it and pi_ij = pi_it . eps_jt. The result is always
// functorial; draws that admit no compatible leg are restarted.
EpDiagram random_diagram(Rng& rng, const DiagramShape& shape);

// The top cone pushed through a random ep-pair D_t <-> H.
ProjCone random_cone(Rng& rng, const EpDiagram& d, std::size_t max_extra);

// Same strategy over lifted objects with strict legs. Lower objects may be
// empty, so chains that start at L 0 occur.
PartialEpDiagram random_partial_diagram(Rng& rng, const DiagramShape& shape);
PartialProjCone random_partial_cone(Rng& rng, const PartialEpDiagram& d, std::size_t max_extra);

// Stage sizes in [min_stage, max_stage], with random restrictions along the
// covering pairs of the base. A stage is empty whenever one below it is.
PresheafPoset random_presheaf(Rng& rng, const BaseSite& site, std::size_t min_stage,
                              std::size_t max_stage, std::string name = "A");

// Same legs-into-the-top strategy, with internal strict ep-pairs. max_object
// bounds every stage.
InternalDiagram random_internal_diagram(Rng& rng, const BaseSite& site, const DiagramShape& shape);
InternalCone random_internal_cone(Rng& rng, const InternalDiagram& d, std::size_t max_extra);

}  // namespace domkit

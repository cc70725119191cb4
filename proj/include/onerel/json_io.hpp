#pragma once

#include <json.hpp>
#include <string>

#include "onerel/certify.hpp"
#include "onerel/experiments.hpp"
#include "onerel/lattice.hpp"
#include "onerel/magnus.hpp"
#include "onerel/matdyn.hpp"
#include "onerel/words.hpp"

namespace onerel {

// Field order is part of the output contract, hence ordered_json throughout.
// Values that can exceed 2^53 (seeds, moduli, exact integers) are emitted as
// decimal strings; bounded counts stay plain numbers.
using Json = nlohmann::ordered_json;

Json samples_json(int model, int rank, int max_len, std::uint64_t seed,
                  const std::vector<std::string>& words);
Json brown_json(const CyclicWord& r, const BrownVerdict& v);
// hull may be null (rank 2); repaired may be null (already good or rank 2).
Json goodness_json(const CyclicWord& r, bool good, const HullAnalysis* hull,
                   const CyclicWord* repaired);
Json magnus_json(const MagnusRewrite& mr);
Json hnn_json(const HnnData& h);
Json extract_json(const HnnExtractResult& r);
Json normalform_json(const HnnData& h, const std::string& input, const NormalForm& nf);
Json smallcancel_json(const SmallCancellationReport& r);
Json embed_json(const EmbedResult& r);
Json largeness_json(const LargenessData& d);
Json cycle_json(std::uint64_t modulus, const CycleRecord& rec);
Json hensel_json(const HenselReport& r);
Json quasifixed_json(const Fq& field, const QuasiFixedResult& r);
Json certificate_json(const Certificate& c);
Json certify_json(const CertifyResult& r);
Json report_json(const ExperimentReport& r);

// Inverse of certificate_json; malformed or incomplete input is a
// usage_error. The result is structurally sound but deliberately unchecked:
// run verify() to judge it.
Certificate certificate_from_json(const std::string& text);

// One row per length. Doubles are printed with 17 significant digits so
// equal reports are equal byte strings.
std::string report_csv(const ExperimentReport& r);

}  // namespace onerel

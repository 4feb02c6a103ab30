#pragma once

#include <json.hpp>
#include <string>

#include "latgauss/sampler.hpp"
#include "latgauss/verify.hpp"

namespace lg {

// Insertion-ordered JSON keeps emitted documents byte-stable.
using ojson = nlohmann::ordered_json;

// Numbers accepted anywhere a rational is expected: JSON integers,
// JSON floats (converted exactly), "p/q" strings, decimal strings.
Rat rat_from_json(const ojson& j);
// Integers that fit in int64 emit as JSON numbers, everything else as
// exact strings; values round-trip losslessly.
ojson rat_to_json(const Rat& r);

RatVec vec_from_json(const ojson& j);
ojson vec_to_json(const RatVec& v);

// {"basis": [[...], ...]} with basis vectors as rows
Lattice lattice_from_json(const ojson& j);
ojson lattice_to_json(const Lattice& L);

// {"s": 1.5} or {"sigma": [[...], ...]}
GaussianParam param_from_json(const ojson& j);
ojson param_to_json(const GaussianParam& p);

ojson certified_to_json(const CertifiedValue& c);
ojson moment_report_to_json(const MomentReport& r);
ojson derivative_report_to_json(const DerivativeReport& r);
ojson verdict_to_json(const Verdict& v);
ojson split_report_to_json(const SplitReport& r);
ojson campaign_to_json(const CampaignSummary& s);

std::string serialize_batch_csv(const SampleBatch& b);

}  // namespace lg

#pragma once

// JSON forms of the public records (nlohmann::json, found by ADL).

#include "trunctail/analysis.hpp"
#include "trunctail/clt_sim.hpp"
#include "trunctail/hill.hpp"
#include "trunctail/regime_tests.hpp"
#include "trunctail/tail_model.hpp"
#include "trunctail/ztheta.hpp"

#include "json.hpp"

namespace trunctail {

using json = nlohmann::json;

void to_json(json& j, const SpectralMeasure& s);
SpectralMeasure spectral_from_json(const json& j);

void to_json(json& j, const HeavyTailSpec& s);
void from_json(const json& j, HeavyTailSpec& s);
void to_json(json& j, const TruncationRule& r);
void from_json(const json& j, TruncationRule& r);
void to_json(json& j, const ResidualSpec& r);
void from_json(const json& j, ResidualSpec& r);
void to_json(json& j, const TailModelConfig& c);
void from_json(const json& j, TailModelConfig& c);
void to_json(json& j, const Regime& r);

void to_json(json& j, const HillEstimate& e);
void from_json(const json& j, HillEstimate& e);
void to_json(json& j, const AlphaBound& b);
void from_json(const json& j, AlphaBound& b);

void to_json(json& j, const ZThetaQuantile& q);
void from_json(const json& j, ZThetaQuantile& q);
void to_json(json& j, const TestOutcome& o);
void from_json(const json& j, TestOutcome& o);

void to_json(json& j, const SumExperiment& e);
void from_json(const json& j, SumExperiment& e);
void to_json(json& j, const KsResult& k);
void to_json(json& j, const NormalityCheck& c);
void to_json(json& j, const ExperimentDiagnostics& d);

void to_json(json& j, const Segment& s);
void from_json(const json& j, Segment& s);
void to_json(json& j, const SegmentReport& s);
void from_json(const json& j, SegmentReport& s);
void to_json(json& j, const Report& r);
void from_json(const json& j, Report& r);

/// Throws DataError on malformed input or a schema mismatch.
Report parse_report(const std::string& text);
std::string serialize_report(const Report& report, int indent = 2);

}  // namespace trunctail

#pragma once

#include <string>

#include <json.hpp>

#include "isd/dataset.hpp"
#include "isd/decomposition.hpp"
#include "isd/estimators.hpp"
#include "isd/jbd.hpp"
#include "isd/moments.hpp"
#include "isd/simulate.hpp"

namespace isd {

using Json = nlohmann::json;

// Version string baked in at configure time (git describe).
std::string version();

// Matrices as arrays of rows.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

// Doubles that may be infinite are written as the strings "inf"/"-inf".
Json real_to_json(double v);
double real_from_json(const Json& j);

void to_json(Json& j, const Window& w);
void from_json(const Json& j, Window& w);
void to_json(Json& j, const WindowPlan& plan);
void from_json(const Json& j, WindowPlan& plan);
void to_json(Json& j, const WindowMoments& m);
void to_json(Json& j, const PooledMoments& m);
void from_json(const Json& j, PooledMoments& m);
void to_json(Json& j, const BlockDecomposition& bd);
void from_json(const Json& j, BlockDecomposition& bd);
void to_json(Json& j, const InvarianceScores& s);
void to_json(Json& j, const SubspaceSplit& s);
void from_json(const Json& j, SubspaceSplit& s);
void to_json(Json& j, const IsdModel& m);
void from_json(const Json& j, IsdModel& m);
void to_json(Json& j, const AdaptationFit& f);
void to_json(Json& j, const GroundTruth& g);
void from_json(const Json& j, GroundTruth& g);
void to_json(Json& j, const CvResult& r);

Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

}  // namespace isd

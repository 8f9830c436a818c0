/******************************************************************************
 * Copyright 2026 The SDM Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "sdm/error.hpp"

namespace sdm {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kMissingEgo: return "MissingEgo";
    case Errc::kDanglingReference: return "DanglingReference";
    case Errc::kParameterSchemaMismatch: return "ParameterSchemaMismatch";
    case Errc::kValidationFailed: return "ValidationFailed";
    case Errc::kDuplicateUid: return "DuplicateUid";
    case Errc::kOutOfDomain: return "OutOfDomain";
    case Errc::kDegenerateSamples: return "DegenerateSamples";
    case Errc::kInsufficientSamples: return "InsufficientSamples";
    case Errc::kNonFinite: return "NonFinite";
    case Errc::kUnknownModel: return "UnknownModel";
    case Errc::kSyntaxError: return "SyntaxError";
    case Errc::kTypeError: return "TypeError";
    case Errc::kUnboundVariable: return "UnboundVariable";
    case Errc::kDivisionGuard: return "DivisionGuard";
    case Errc::kUnknownTag: return "UnknownTag";
    case Errc::kAmbiguousTag: return "AmbiguousTag";
    case Errc::kBudgetExceeded: return "BudgetExceeded";
    case Errc::kNoGoverningBehavior: return "NoGoverningBehavior";
    case Errc::kNoSignChange: return "NoSignChange";
    case Errc::kMissingShape: return "MissingShape";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kStartConditionUnsatisfied: return "StartConditionUnsatisfied";
    case Errc::kIOFailure: return "IOFailure";
    case Errc::kParseError: return "ParseError";
    case Errc::kUnresolvedReference: return "UnresolvedReference";
    case Errc::kVersionMismatch: return "VersionMismatch";
  }
  return "Unknown";
}

}  // namespace sdm

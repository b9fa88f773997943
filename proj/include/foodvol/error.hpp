// Copyright 2026 The foodvol Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace foodvol {

enum class ErrorKind {
  kIoFailure,
  kParseError,
  kInvalidIndex,
  kNonFiniteCoordinate,
  kDegenerateFace,
  kUnknownComponentId,
  kNonPositiveScale,
  kInvalidGrid,
  kDegenerateGrid,
  kInsufficientPoints,
  kDegenerateConfiguration,
  kEmptyCloud,
  kZeroAreaMesh,
  kNonPositiveTrueVolume,
  kEmptyInput,
  kNonPositiveDimension,
  kInvalidDimensions,
  kOverlapDetected,
  kInvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIoFailure: return "io-failure";
    case ErrorKind::kParseError: return "parse-error";
    case ErrorKind::kInvalidIndex: return "invalid-index";
    case ErrorKind::kNonFiniteCoordinate: return "non-finite-coordinate";
    case ErrorKind::kDegenerateFace: return "degenerate-face";
    case ErrorKind::kUnknownComponentId: return "unknown-component-id";
    case ErrorKind::kNonPositiveScale: return "non-positive-scale";
    case ErrorKind::kInvalidGrid: return "invalid-grid";
    case ErrorKind::kDegenerateGrid: return "degenerate-grid";
    case ErrorKind::kInsufficientPoints: return "insufficient-points";
    case ErrorKind::kDegenerateConfiguration: return "degenerate-configuration";
    case ErrorKind::kEmptyCloud: return "empty-cloud";
    case ErrorKind::kZeroAreaMesh: return "zero-area-mesh";
    case ErrorKind::kNonPositiveTrueVolume: return "nonpositive-true-volume";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kNonPositiveDimension: return "nonpositive-dimension";
    case ErrorKind::kInvalidDimensions: return "invalid-dimensions";
    case ErrorKind::kOverlapDetected: return "overlap-detected";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// An Error annotated with the pipeline stage (and scene) where it surfaced.
class StageError : public Error {
 public:
  StageError(std::string scene_id, std::string stage, const Error& cause)
      : Error(cause.kind(), "[" + scene_id + "/" + stage + "] " + cause.what()),
        scene_id_(std::move(scene_id)),
        stage_(std::move(stage)) {}

  const std::string& scene_id() const noexcept { return scene_id_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string scene_id_;
  std::string stage_;
};

}  // namespace foodvol

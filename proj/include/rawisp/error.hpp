/* Copyright 2026 The rawisp Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef RAWISP_ERROR_HPP_
#define RAWISP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rawisp {

// Numeric values are mirrored by rawisp_status in rawisp.h.
enum class ErrorCode : int {
  kDimension = 1,
  kRange = 2,
  kSize = 3,
  kAlignment = 4,
  kShape = 5,
  kParameterDomain = 6,
  kDomain = 7,
  kDegenerate = 8,
  kEvaluation = 9,
  kDivergence = 10,
  kParse = 11,
  kIo = 12,
  kInvalidArgument = 13,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rawisp

#endif  // RAWISP_ERROR_HPP_

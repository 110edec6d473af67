// Copyright 2026 The qrecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qrecon {

/// Base class of every error raised by the library. `kind()` is the stable
/// name used in reports (e.g. "DomainError").
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define QRECON_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

QRECON_DEFINE_ERROR(DomainError);
QRECON_DEFINE_ERROR(AccessibilityError);
QRECON_DEFINE_ERROR(GroupAxiomError);
QRECON_DEFINE_ERROR(GroupMembershipError);
QRECON_DEFINE_ERROR(CategoryError);
QRECON_DEFINE_ERROR(PostulateViolation);
QRECON_DEFINE_ERROR(SeedError);
QRECON_DEFINE_ERROR(EmbeddingError);
QRECON_DEFINE_ERROR(RelationError);
QRECON_DEFINE_ERROR(DimensionError);
QRECON_DEFINE_ERROR(HermiticityError);
QRECON_DEFINE_ERROR(StateError);
QRECON_DEFINE_ERROR(BasisError);
QRECON_DEFINE_ERROR(ModelError);
QRECON_DEFINE_ERROR(DegenerateEffectError);
QRECON_DEFINE_ERROR(CompletenessError);
QRECON_DEFINE_ERROR(SpectrumError);
QRECON_DEFINE_ERROR(PreconditionError);
QRECON_DEFINE_ERROR(SetupError);
QRECON_DEFINE_ERROR(ContextError);

#undef QRECON_DEFINE_ERROR

/// Raised while loading a scenario document; `path()` is a JSON-pointer
/// style location such as "/groups/1/elements".
class ScenarioError : public Error {
 public:
  ScenarioError(std::string kind, std::string path, const std::string& what)
      : Error(std::move(kind), path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qrecon

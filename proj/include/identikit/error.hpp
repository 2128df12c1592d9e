/*
 * Copyright (C) 2026 The identikit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef IDENTIKIT_ERROR_HPP
#define IDENTIKIT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace identikit
{

enum class ErrorKind {
    InvalidArgument,
    StepLimitExceeded,
    NonFiniteState,
    SubsetUnknownName,
    InvalidSubsetSize,
    ConvergenceFailure,
    RankDeficient,
    NegativeDiagonal,
    ZeroParameterValue,
    DegenerateDof,
    DataParseError,
    ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what)
        , m_kind(kind)
    {
    }

    ErrorKind kind() const noexcept
    {
        return m_kind;
    }

private:
    ErrorKind m_kind;
};

} // namespace identikit

#endif // IDENTIKIT_ERROR_HPP

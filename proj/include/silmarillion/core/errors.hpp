// Copyright 2026 The Silmarillion Authors
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

namespace silmarillion {

// Root of every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or wrong-length wire data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A value does not fit the field it is stored in.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Device timer behind its initial clock; indicates misconfiguration.
class InvalidClockError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// A tile's noised risk data does not fit the PIR block cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class AuthenticationError : public Error {
 public:
  using Error::Error;
};

class RegistrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace silmarillion

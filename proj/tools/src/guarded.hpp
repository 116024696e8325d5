/*
 Copyright 2026 The invlqr Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef INVLQR_CLI_GUARDED_HPP
#define INVLQR_CLI_GUARDED_HPP

#include <exception>
#include <ostream>

#include "invlqr/errors.hpp"
#include "invlqr_cli/commands.hpp"

namespace invlqr::cli {

// Runs `body`, mapping library exceptions to exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const ConditioningError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IdentifiabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace invlqr::cli

#endif  // INVLQR_CLI_GUARDED_HPP

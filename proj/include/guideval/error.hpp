// Copyright 2026 The guideval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace guideval {

/// One problem found while validating input records. `context` names where
/// (file:line, frame id, field) so the report can be acted on.
struct Issue {
  std::string context;
  std::string message;

  std::string str() const { return context.empty() ? message : context + ": " + message; }
  friend bool operator==(const Issue&, const Issue&) = default;
};

using IssueList = std::vector<Issue>;

/// Input was readable but violated a format or domain rule.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what, IssueList issues = {})
      : std::runtime_error(what), issues_(std::move(issues)) {}
  const IssueList& issues() const noexcept { return issues_; }

 private:
  IssueList issues_;
};

/// A file or socket could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace guideval

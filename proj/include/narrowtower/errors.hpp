#pragma once

// Error hierarchy shared by all narrowtower modules.
//
// The three exception classes map onto the CLI exit codes:
//   domain_error        -> exit 2  (input outside the supported family,
//                                   malformed table data, bad flags)
//   inconsistency_error -> exit 1  (an internal cross-check between two
//                                   independent computations failed; this
//                                   is the "verification failure" channel)
//   resource_error      -> exit 3  (a configured budget was exceeded:
//                                   coset limit, continued-fraction step
//                                   limit, reduction step limit)

#include <stdexcept>
#include <string>

namespace narrowtower {

class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

class inconsistency_error : public std::runtime_error {
public:
    explicit inconsistency_error(const std::string& what) : std::runtime_error(what) {}
};

class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace narrowtower

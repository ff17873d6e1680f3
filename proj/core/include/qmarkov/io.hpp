#ifndef QMARKOV_IO_HPP
#define QMARKOV_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qmarkov/classical.hpp"
#include "qmarkov/operators.hpp"

namespace qmarkov {

// QSTATE v1 (text, line-oriented, '#' comments ignored):
//   line 1: qstate v1
//   line 2: systems <label>:<dim> <label>:<dim> ...
//   line 3: matrix
//   then total_dim^2 lines "<re> <im>", row-major, 17 significant digits.
// The write/read pair is bit-exact.
DensityOperator read_state(std::istream& in, const std::string& source_name = "<stream>",
                           const Tolerances& tols = default_tolerances());
DensityOperator read_state(const std::filesystem::path& path,
                           const Tolerances& tols = default_tolerances());
void write_state(std::ostream& out, const DensityOperator& rho);
void write_state(const std::filesystem::path& path, const DensityOperator& rho);

// QPMF v1, analogous:
//   qpmf v1 / alphabets <label>:<size> ... / probs / one probability per line.
JointPmf read_pmf(std::istream& in, const std::string& source_name = "<stream>");
JointPmf read_pmf(const std::filesystem::path& path);
void write_pmf(std::ostream& out, const JointPmf& pmf);
void write_pmf(const std::filesystem::path& path, const JointPmf& pmf);

}  // namespace qmarkov

#endif

#pragma once

// Report producers shared by the command-line driver and the Python module.

#include "ellcoop/koszul.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace ellcoop {

struct RunOptions
{
    unsigned long p = 3;
    unsigned n = 2;
    std::string kase = "ell";
    int max_degree = 64;
    std::vector<int> indices;
    std::vector<int> other;  // second index set for Delta products
    int r_max = 3;
    unsigned threads = 1;
    // Largest admissible chain-basis size in one (s, t) slice.
    std::size_t slice_limit = 200000;
};

struct Report
{
    nlohmann::json json;
    // False when a checked assertion failed; the driver exits nonzero.
    bool ok = true;
};

class InfeasibleError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Number of monomials in each internal degree 0..max_degree (saturating).
std::vector<std::size_t> slice_sizes(const GeneratorTable& table, int max_degree);
// Chain-basis size of the spec's complex in internal degree t (all s).
std::size_t estimate_slice_size(const KoszulSpec& spec, int t);
// Throws InfeasibleError if some slice up to max_degree exceeds the limit.
void preflight(const GeneratorTable& table, int max_degree, std::size_t limit);
void preflight(const KoszulSpec& spec, int max_degree, std::size_t limit);
// Same check for a BP-derived case, from generator degrees alone.
void preflight_case(unsigned long p, KoszulCase kind, int max_degree, std::size_t limit);

const std::vector<std::string>& command_names();
Report run_command(const std::string& command, const RunOptions& options);

Report hazewinkel_report(const RunOptions& o);
Report eta_r_report(const RunOptions& o);
Report ell_image_report(const RunOptions& o);
Report tor_table_report(const RunOptions& o);
// CSV form of the torsion table.
std::string tor_table_csv(const RunOptions& o);
Report delta_report(const RunOptions& o);
Report bockstein_report(const RunOptions& o);
Report steenrod_q_report(const RunOptions& o);
Report torsion_basis_report(const RunOptions& o);
Report congruence_report(const RunOptions& o);
Report crosscheck_report(const RunOptions& o);

}  // namespace ellcoop

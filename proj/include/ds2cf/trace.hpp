#ifndef DS2CF_TRACE_HPP
#define DS2CF_TRACE_HPP

#include <string>
#include <vector>

namespace ds2cf {

// One row per sweep. The CSV schema is the first ten fields; the remaining
// fields are kept in memory for diagnostics and tests.
struct TraceRecord {
  int layer = 1;
  int iter = 0;
  double total_objective = 0.0;  // evaluated after the multiplicative block
  double recon = 0.0;
  double structure = 0.0;
  double dual_graph = 0.0;
  double predictor = 0.0;
  double dw_fro2 = 0.0;
  double dv_fro2 = 0.0;
  bool converged = false;

  double objective_entry = 0.0;  // same constraints, before the block
  double objective_post = 0.0;   // after the constraint refresh
  double a_rowsum_dev = 0.0;     // max |row sum - 1| over A_U
  double q_asymmetry = 0.0;      // max |Q - Q^T|
  double v_norm2 = 0.0;          // |V|_F^2 scale reference
  double da_fro2 = 0.0;          // |A_U refresh delta|_F^2
};

// Writes the trace CSV; header_lines are emitted as '#' comments.
void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& records,
                     const std::vector<std::string>& header_lines);

}  // namespace ds2cf

#endif

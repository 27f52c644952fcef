#include "upt/analyze.hpp"

#include <ostream>
#include <sstream>

#include "upt/io.hpp"

namespace upt {

AnalyzeReport analyze(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, const AnalyzeRequest& request) {
  if (Y.size() != X.rows())
    throw InvalidArgument("Y has " + std::to_string(Y.size()) + " rows but X has " + std::to_string(X.rows()));
  if (request.theta.has_value() != request.r.has_value())
    throw InvalidArgument("ideal mode needs both theta and r");
  AnalyzeReport rep;
  rep.y_tilde = marginal_stats(X, Y).y_tilde;
  const PreparedUpt prep = request.theta ? prepare_ideal(X, rep.y_tilde, *request.theta, *request.r, request.settings)
                                         : prepare_estimated(X, rep.y_tilde, request.settings);
  rep.estimates = prep.estimates;
  rep.survivors = static_cast<Index>(prep.problem.graph.survivors.size());
  rep.max_component_size = prep.problem.graph.max_component_size;
  rep.tuning = finalize_tuning(prep, request.alpha, request.settings);
  rep.decision = decide(prep, rep.tuning, request.settings);
  return rep;
}

AnalyzeReport analyze_files(const std::filesystem::path& x_csv, const std::filesystem::path& y_csv,
                            const AnalyzeRequest& request) {
  const Eigen::MatrixXd X = read_matrix_csv(x_csv);
  const Eigen::VectorXd Y = read_vector_csv(y_csv);
  return analyze(X, Y, request);
}

void write_report(std::ostream& out, const AnalyzeReport& report) {
  std::istringstream audit(audit_block(report.tuning));
  for (std::string line; std::getline(audit, line);)
    if (!line.empty()) out << "# " << line << '\n';
  if (report.estimates) {
    out << "# theta_hat=" << format_double(report.estimates->theta_hat) << '\n'
        << "# r_hat=" << format_double(report.estimates->r_hat) << '\n'
        << "# exceedances=" << report.estimates->exceedances << '\n';
  }
  out << "# survivors=" << report.survivors << '\n'
      << "# max_component_size=" << report.max_component_size << '\n'
      << "# rejections=" << report.decision.rejections() << '\n';
  out << "index,decision,provenance,y_tilde\n";
  for (Index i = 0; i < report.y_tilde.size(); ++i)
    out << i << ',' << report.decision.delta(i) << ',' << to_string(report.decision.provenance[i]) << ','
        << format_double(report.y_tilde(i)) << '\n';
}

}  // namespace upt

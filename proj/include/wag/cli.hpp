#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wag/retrieval.hpp"

namespace wag::cli {

// Exit codes: 0 success, 1 validation/argument error, 2 I/O or schema error.
// Machine output goes to out (JSON unless --text); diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// One CSV row per (query, primary, neighbor) with every weight component;
// the raw material for the edge-weight distribution histograms.
std::string weight_report_csv(const KnowledgeGraph& graph,
                              const std::vector<SubjectData>& cohort,
                              const SubjectData& subject,
                              const std::vector<ParsedQuery>& queries,
                              const RetrievalConfig& cfg, const EmbeddingProvider& embedder);

}  // namespace wag::cli

#pragma once

// Command-line front end. Exit codes: 0 success, 1 semantic failure
// (unphysical state, failed verification), 2 usage or parse error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvsym/verification.hpp"

namespace cvsym::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

/// Writes `content` to `path` through a temporary file and a rename; "-" or "" means `out`.
inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ParseError("cannot write '" + tmp.string() + "'");
    f << content;
    if (!f.flush()) throw ParseError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

/// Comparison tolerance for `verify`: NEG_TOL when set to a positive number, else 1e-9.
inline double verify_tolerance() {
  const char* env = std::getenv("NEG_TOL");
  if (env == nullptr || *env == '\0') return 1e-9;
  const double tol = io::parse_double(env);
  if (!(tol > 0.0)) throw ParseError("NEG_TOL must be a positive number");
  return tol;
}

namespace detail {

inline std::string dump(const json& j) { return j.dump(2) + '\n'; }

inline io::LogBase base_of(bool bits) { return bits ? io::LogBase::Bits : io::LogBase::Nats; }

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Symplectic spectra and multipartite entanglement of symmetric Gaussian states"};
  app.require_subcommand(1);

  std::string out_path = "-";
  std::string format = "json";
  bool bits = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check the uncertainty relation for a covariance matrix");
  std::string validate_file;
  validate_cmd->add_option("cm_file", validate_file, "covariance matrix JSON")->required();
  validate_cmd->add_option("--out", out_path, "output path ('-' for stdout)");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Symplectic spectrum of a matrix or a parameter set");
  std::string spectrum_cm, spectrum_params;
  auto* spectrum_cm_opt = spectrum_cmd->add_option("--cm", spectrum_cm, "covariance matrix JSON (numeric spectrum)");
  auto* spectrum_params_opt =
      spectrum_cmd->add_option("--params", spectrum_params, "block or 1xN parameter JSON (closed form)");
  spectrum_cm_opt->excludes(spectrum_params_opt);
  spectrum_cmd->add_option("--out", out_path, "output path ('-' for stdout)");

  auto* neg_cmd = app.add_subcommand("negativity", "Logarithmic negativity of a bipartition");
  std::string neg_cm, neg_params;
  std::vector<std::size_t> transposed{0};
  std::optional<std::size_t> neg_k;
  auto* neg_cm_opt = neg_cmd->add_option("--cm", neg_cm, "covariance matrix JSON (numeric route)");
  auto* neg_params_opt = neg_cmd->add_option("--params", neg_params, "block or 1xN parameter JSON (equivalent two-mode route)");
  neg_cm_opt->excludes(neg_params_opt);
  neg_cmd->add_option("--transpose", transposed, "modes on the transposed side (with --cm)")->delimiter(',');
  neg_cmd->add_option("--k", neg_k, "K of the 1xK split inside a fully symmetric block (with --params)");
  neg_cmd->add_flag("--bits", bits, "report E_N in bits instead of nats");
  neg_cmd->add_option("--out", out_path, "output path ('-' for stdout)");

  auto* hier_cmd = app.add_subcommand("hierarchy", "1xK hierarchy of a GHZ-type state");
  double hier_b = 0.0;
  std::size_t hier_modes = 0;
  hier_cmd->add_option("--b", hier_b, "inverse single-mode purity, b >= 1")->required();
  hier_cmd->add_option("--modes", hier_modes, "total number of modes, >= 2")->required();
  hier_cmd->add_option("--out", out_path, "output path ('-' for stdout)");
  hier_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  hier_cmd->add_flag("--bits", bits, "report E_N in bits instead of nats");

  auto* sweep_cmd = app.add_subcommand("sweep", "1x1, 1x(N-1) and 1xN negativities as functions of N");
  double sweep_b = 0.0;
  std::size_t n_min = 0, n_max = 0;
  bool traced = false;
  sweep_cmd->add_option("--b", sweep_b, "inverse single-mode purity, b > 1")->required();
  sweep_cmd->add_option("--n-min", n_min, "smallest N (>= 2)")->required();
  sweep_cmd->add_option("--n-max", n_max, "largest N (<= 50)")->required();
  sweep_cmd->add_flag("--traced", traced, "use the N-mode state left after tracing one mode");
  sweep_cmd->add_option("--out", out_path, "output path ('-' for stdout)");
  sweep_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* verify_cmd = app.add_subcommand("verify", "Cross-validate closed forms against the numeric spectrum");
  std::size_t corpus = 1000;
  std::uint64_t seed = 7;
  std::string replay_path = "cvsym_replay.jsonl";
  verify_cmd->add_option("--corpus", corpus, "number of random states of each family");
  verify_cmd->add_option("--seed", seed, "corpus seed");
  verify_cmd->add_option("--replay", replay_path, "where failing states are written (JSON lines)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*validate_cmd) {
      const auto cm = io::covariance_from_json(io::parse_json(io::read_file(validate_file)));
      const auto report = validate(cm);
      write_output(out_path, detail::dump(io::to_json(report)), out);
      return report.is_physical ? kOk : kFailure;
    }

    if (*spectrum_cmd) {
      json doc;
      if (!spectrum_cm.empty()) {
        const auto cm = io::covariance_from_json(io::parse_json(io::read_file(spectrum_cm)));
        doc = io::to_json(symplectic_spectrum_numeric(cm));
        doc["method"] = "numeric";
      } else if (!spectrum_params.empty()) {
        const auto params = io::parse_json(io::read_file(spectrum_params));
        doc = io::to_json(io::is_one_plus_n(params) ? one_plus_n_spectrum(io::state_from_json(params))
                                                    : fs_spectrum(io::block_from_json(params)));
        doc["method"] = "analytic";
      } else {
        err << "spectrum: one of --cm or --params is required\n";
        return kUsage;
      }
      write_output(out_path, detail::dump(doc), out);
      return kOk;
    }

    if (*neg_cmd) {
      json doc;
      if (!neg_cm.empty()) {
        const auto cm = io::covariance_from_json(io::parse_json(io::read_file(neg_cm)));
        const auto pt = symplectic_spectrum_numeric(partial_transpose(cm, transposed));
        NegativityResult r;
        r.value = log_negativity_from_spectrum(pt);
        r.n_tilde_minus = pt.min();
        r.entangled = r.value > 0.0;
        doc = io::negativity_json(cm.n_modes() - transposed.size(), r, detail::base_of(bits));
      } else if (!neg_params.empty()) {
        const auto params = io::parse_json(io::read_file(neg_params));
        if (io::is_one_plus_n(params)) {
          const auto state = io::state_from_json(params);
          doc = io::negativity_json(state.block.n_modes, one_plus_n_negativity(state), detail::base_of(bits));
        } else {
          const auto blk = io::block_from_json(params);
          const std::size_t k = neg_k.value_or(blk.n_modes - 1);
          doc = io::negativity_json(k, one_by_k_negativity(blk, k), detail::base_of(bits));
        }
      } else {
        err << "negativity: one of --cm or --params is required\n";
        return kUsage;
      }
      write_output(out_path, detail::dump(doc), out);
      return kOk;
    }

    if (*hier_cmd) {
      const auto rows = io::hierarchy_rows({hier_b, hier_modes});
      write_output(out_path,
                   format == "csv" ? io::hierarchy_csv(rows, detail::base_of(bits))
                                   : detail::dump(io::hierarchy_json(rows, detail::base_of(bits))),
                   out);
      return kOk;
    }

    if (*sweep_cmd) {
      const auto rows = traced ? traced_scaling_table(sweep_b, n_min, n_max) : scaling_table(sweep_b, n_min, n_max);
      write_output(out_path,
                   format == "csv" ? io::sweep_csv(io::sweep_records(sweep_b, rows))
                                   : detail::dump(io::scaling_json(rows)),
                   out);
      return kOk;
    }

    if (*verify_cmd) {
      const auto report = cross_validate(corpus, seed, verify_tolerance());
      out << format_report(report);
      if (report.passed()) return kOk;
      std::string lines;
      for (const auto& f : report.failures) lines += f + '\n';
      write_output(replay_path, lines, out);
      out << "replay file: " << replay_path << '\n';
      return kFailure;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace cvsym::cli

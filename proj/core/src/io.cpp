#include "qlambda/io.hpp"

#include "qlambda/error.hpp"

#include <fmt/format.h>

#include <json.hpp>

#include <cmath>
#include <ostream>

namespace qlambda {

namespace {

using Json = nlohmann::ordered_json;

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

void dump(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ", ";
                first = false;
                out += Json(key).dump();
                out += ": ";
                dump(value, out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump(j[i], out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? format_number(x) : "null";
            break;
        }
        default: out += j.dump(); break;
    }
}

std::string render(const Json& j) {
    std::string out;
    dump(j, out);
    out += '\n';
    return out;
}

double number_at(const Json& j, const std::string& key) {
    if (!j.is_number()) throw Error(ErrorCode::ParseError, "key '" + key + "': expected a number");
    return j.get<double>();
}

cplx complex_at(const Json& j, const std::string& key) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::ParseError, "key '" + key + "': expected [re, im]");
    return {number_at(j[0], key + "[0]"), number_at(j[1], key + "[1]")};
}

}  // namespace

std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    return fmt::format("{:.17g}", x);
}

std::string_view to_string(SpinorNorm norm) {
    return norm == SpinorNorm::Box ? "box" : "covariant";
}

LevelSystem level_system_from_json(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "level system must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "energies" && key != "couplings") throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
    }
    if (!doc.contains("energies")) throw Error(ErrorCode::ParseError, "missing key 'energies'");
    if (!doc.contains("couplings")) throw Error(ErrorCode::ParseError, "missing key 'couplings'");

    const Json& energies = doc["energies"];
    if (!energies.is_array()) throw Error(ErrorCode::ParseError, "key 'energies': expected an array");
    const auto n = static_cast<Eigen::Index>(energies.size());
    LevelSystem sys;
    sys.energies.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sys.energies[i] = number_at(energies[static_cast<std::size_t>(i)], "energies[" + std::to_string(i) + "]");
    }

    const Json& couplings = doc["couplings"];
    if (!couplings.is_array()) throw Error(ErrorCode::ParseError, "key 'couplings': expected an array");
    sys.couplings = CMat::Zero(n, n);
    const bool nested = !couplings.empty() && couplings[0].is_array() && !couplings[0].empty() &&
                        couplings[0][0].is_array();
    if (nested) {
        if (static_cast<Eigen::Index>(couplings.size()) != n) {
            throw Error(ErrorCode::ParseError, "key 'couplings': expected " + std::to_string(n) + " rows");
        }
        for (Eigen::Index r = 0; r < n; ++r) {
            const Json& row = couplings[static_cast<std::size_t>(r)];
            const std::string key = "couplings[" + std::to_string(r) + "]";
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                throw Error(ErrorCode::ParseError, "key '" + key + "': expected " + std::to_string(n) + " entries");
            }
            for (Eigen::Index c = 0; c < n; ++c) {
                sys.couplings(r, c) = complex_at(row[static_cast<std::size_t>(c)], key + "[" + std::to_string(c) + "]");
            }
        }
    } else {
        if (static_cast<Eigen::Index>(couplings.size()) != n * n) {
            throw Error(ErrorCode::ParseError, "key 'couplings': expected " + std::to_string(n * n) + " entries");
        }
        for (Eigen::Index i = 0; i < n * n; ++i) {
            sys.couplings(i / n, i % n) =
                complex_at(couplings[static_cast<std::size_t>(i)], "couplings[" + std::to_string(i) + "]");
        }
    }
    try {
        sys.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, std::string("key 'couplings': ") + e.what());
    }
    return sys;
}

std::string level_system_to_json(const LevelSystem& sys) {
    Json doc;
    doc["energies"] = Json::array();
    for (Eigen::Index i = 0; i < sys.energies.size(); ++i) doc["energies"].push_back(sys.energies[i]);
    doc["couplings"] = Json::array();
    for (Eigen::Index r = 0; r < sys.couplings.rows(); ++r)
        for (Eigen::Index c = 0; c < sys.couplings.cols(); ++c) doc["couplings"].push_back(complex_json(sys.couplings(r, c)));
    return render(doc);
}

std::string amplitude_to_json(const AmplitudeResult& r) {
    Json doc;
    doc["process"] = r.process;
    const Vec3& b = r.frame.beta();
    doc["frame"] = {{"beta", Json::array({b.x(), b.y(), b.z()})}};
    doc["eta"] = r.eta;
    doc["parts"] = Json::array();
    for (const auto& p : r.parts) {
        Json part;
        part["name"] = p.name;
        part["omega1"] = complex_json(p.omega1);
        part["omega2"] = complex_json(p.omega2);
        part["denom"] = p.denom;
        part["value"] = complex_json(p.value);
        part["weight"] = p.weight;
        doc["parts"].push_back(std::move(part));
    }
    doc["total"] = complex_json(r.total);
    doc["closed_form"] = complex_json(r.closed_form);
    doc["textbook_ratio"] = complex_json(r.textbook_ratio);
    return render(doc);
}

void write_amplitude_csv(std::ostream& out, const AmplitudeResult& r) {
    out << "name,omega1_re,omega1_im,omega2_re,omega2_im,denom,value_re,value_im,weight\n";
    for (const auto& p : r.parts) {
        out << p.name << ',' << format_number(p.omega1.real()) << ',' << format_number(p.omega1.imag()) << ','
            << format_number(p.omega2.real()) << ',' << format_number(p.omega2.imag()) << ','
            << format_number(p.denom) << ',' << format_number(p.value.real()) << ','
            << format_number(p.value.imag()) << ',' << format_number(p.weight) << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const auto n = traj.states.empty() ? 0 : traj.states.front().size();
    std::string line = "t";
    for (Eigen::Index i = 0; i < n; ++i) line += fmt::format(",re{0},im{0}", i + 1);
    out << line << '\n';
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        line = format_number(traj.times[s]);
        for (Eigen::Index i = 0; i < n; ++i) {
            line += ',';
            line += format_number(traj.states[s][i].real());
            line += ',';
            line += format_number(traj.states[s][i].imag());
        }
        out << line << '\n';
    }
}

void write_boost_scan_csv(std::ostream& out, const std::vector<BoostScanRow>& rows, SpinorNorm norm) {
    out << "# normalization=" << to_string(norm) << '\n';
    out << "beta,eta,abs_amplitude,ratio_to_cm,sqrt_one_minus_beta2\n";
    for (const auto& r : rows) {
        out << format_number(r.beta) << ',' << format_number(r.eta) << ',' << format_number(r.abs_amplitude) << ','
            << format_number(r.ratio_to_cm) << ',' << format_number(r.dilation) << '\n';
    }
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
    out << "cutoff,partial_sum,tail_estimate\n";
    for (std::size_t i = 0; i < report.cutoffs.size(); ++i) {
        out << format_number(report.cutoffs[i]) << ',' << format_number(report.partial_sums[i]) << ','
            << format_number(report.tail_estimates[i]) << '\n';
    }
}

std::string boost_scan_to_json(const std::vector<BoostScanRow>& rows, SpinorNorm norm) {
    Json doc;
    doc["normalization"] = std::string(to_string(norm));
    doc["rows"] = Json::array();
    for (const auto& r : rows) {
        Json row;
        row["beta"] = r.beta;
        row["eta"] = r.eta;
        row["abs_amplitude"] = r.abs_amplitude;
        row["ratio_to_cm"] = r.ratio_to_cm;
        row["sqrt_one_minus_beta2"] = r.dilation;
        doc["rows"].push_back(std::move(row));
    }
    return render(doc);
}

std::string lambda_summary_to_json(const LambdaSummary& s) {
    auto optional = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
    Json doc;
    doc["levels"] = s.levels;
    doc["initial_level"] = s.initial_level;
    doc["target_level"] = s.target_level;
    doc["hbar"] = s.hbar;
    doc["period"] = optional(s.period);
    doc["dt"] = s.dt;
    doc["duration"] = s.duration;
    doc["samples"] = s.samples;
    doc["analytic_coupling"] = complex_json(s.analytic_coupling);
    doc["analytic_rate"] = std::abs(s.analytic_coupling) / s.hbar;
    doc["fitted_rabi_rate"] = optional(s.fitted_rabi_rate);
    doc["relative_deviation"] = optional(s.relative_deviation);
    doc["final_norm"] = s.final_norm;
    return render(doc);
}

std::string convergence_summary_json(const ShiftResult& result, const Vec3& k, double cutoff,
                                     const MomentumGrid& grid) {
    Json doc;
    doc["E2_shift"] = result.shift;
    doc["fitted_slope"] = result.report.fitted_slope;
    doc["refinement_change"] = result.report.refinement_change;
    doc["tail_at_cutoff"] = result.report.tail_estimates.empty() ? 0.0 : result.report.tail_estimates.back();
    doc["k"] = Json::array({k.x(), k.y(), k.z()});
    doc["cutoff"] = cutoff;
    doc["grid"] = {{"inner_panels", grid.inner_panels},
                   {"panels_per_decade", grid.panels_per_decade},
                   {"radial_order", grid.radial_order},
                   {"cos_points", grid.cos_points},
                   {"phi_points", grid.phi_points},
                   {"refinement_tolerance", grid.refinement_tolerance}};
    return render(doc);
}

}  // namespace qlambda
